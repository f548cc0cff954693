#ifndef COHERE_ERRORS_HPP
#define COHERE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cohere {

// Base class for every error raised by the library. Catch this to handle
// all of them; catch a subclass to react to one failure kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define COHERE_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(what) {}        \
  };

COHERE_DEFINE_ERROR(IndexError)
COHERE_DEFINE_ERROR(DimensionError)
COHERE_DEFINE_ERROR(NormalizationError)
COHERE_DEFINE_ERROR(PreconditionError)
COHERE_DEFINE_ERROR(ResourceError)
COHERE_DEFINE_ERROR(ParameterError)
COHERE_DEFINE_ERROR(DensityMatrixError)
COHERE_DEFINE_ERROR(CompletenessError)
COHERE_DEFINE_ERROR(InfeasibleStepError)
COHERE_DEFINE_ERROR(NoLadderError)
COHERE_DEFINE_ERROR(ParseError)

#undef COHERE_DEFINE_ERROR

}  // namespace cohere

#endif  // COHERE_ERRORS_HPP
