#ifndef COHERE_SAMPLING_HPP
#define COHERE_SAMPLING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "cohere/linalg.hpp"
#include "cohere/simplex.hpp"
#include "cohere/states.hpp"

namespace cohere {

// Uniform (flat Dirichlet) point of the simplex. With face_prob > 0 some
// coordinates are zeroed first, so faces and edges get sampled too.
template <class Rng>
ProbVector random_prob_vector(std::size_t d, Rng& rng, double face_prob = 0.0) {
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution drop(face_prob);
  std::vector<double> v(d);
  double total = 0.0;
  for (auto& e : v) {
    e = drop(rng) ? 0.0 : expo(rng);
    total += e;
  }
  if (total <= 0.0) {
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    v.assign(d, 0.0);
    v[pick(rng)] = 1.0;
    return ProbVector(std::move(v));
  }
  for (auto& e : v) e /= total;
  return ProbVector(std::move(v));
}

template <class Rng>
std::vector<std::size_t> random_permutation(std::size_t d, Rng& rng) {
  std::vector<std::size_t> p(d);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline ProbVector permuted(const ProbVector& x, const std::vector<std::size_t>& perm) {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[perm[i]];
  return ProbVector(std::move(v));
}

// Pure state with moduli sqrt(x_i) for a random x and uniformly random phases.
template <class Rng>
PureState random_pure_state(std::size_t d, Rng& rng, double face_prob = 0.0) {
  const ProbVector x = random_prob_vector(d, rng, face_prob);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  CVector v(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    v(static_cast<Eigen::Index>(i)) = std::polar(std::sqrt(x[i]), angle(rng));
  }
  return PureState::normalized(v);
}

// Random y = D x with D a product of random T-transforms, so y ≺ x.
template <class Rng>
ProbVector random_majorized_by(const ProbVector& x, Rng& rng, std::size_t steps = 0) {
  const std::size_t d = x.size();
  std::vector<double> v = x.vec();
  if (d < 2) return x;
  if (steps == 0) steps = 2 * d;
  std::uniform_int_distribution<std::size_t> idx(0, d - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t i = idx(rng);
    std::size_t j = idx(rng);
    while (j == i) j = idx(rng);
    TTransform{i, j, unit(rng)}.apply(v);
  }
  // Re-sum exactly to one against drift.
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& e : v) e = std::max(0.0, e / total);
  return ProbVector(std::move(v));
}

}  // namespace cohere

#endif  // COHERE_SAMPLING_HPP
