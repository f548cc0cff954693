#ifndef COHERE_COHERE_HPP
#define COHERE_COHERE_HPP

#include "cohere/channels.hpp"
#include "cohere/convex_roof.hpp"
#include "cohere/conversion.hpp"
#include "cohere/errors.hpp"
#include "cohere/measures.hpp"
#include "cohere/sampling.hpp"
#include "cohere/simplex.hpp"
#include "cohere/states.hpp"
#include "cohere/tolerances.hpp"

#endif  // COHERE_COHERE_HPP
