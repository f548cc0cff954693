#ifndef COHERE_TESTS_HELPERS_HPP
#define COHERE_TESTS_HELPERS_HPP

#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "cohere/cohere.hpp"

namespace testing_support {

using cohere::cplx;
using cohere::PureState;

inline PureState real_state(std::initializer_list<double> squares) {
  cohere::CVector v(static_cast<Eigen::Index>(squares.size()));
  Eigen::Index i = 0;
  for (double s : squares) v(i++) = std::sqrt(s);
  return PureState::normalized(v);
}

inline std::vector<std::complex<double>> amplitudes(const PureState& psi) {
  std::vector<std::complex<double>> out(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) out[i] = psi[i];
  return out;
}

// A random pair used by the protocol suites: normalized random nonnegative
// amplitudes with random phases on both sides.
template <class Rng>
std::pair<PureState, PureState> random_pair(std::size_t d, Rng& rng) {
  return {cohere::random_pure_state(d, rng), cohere::random_pure_state(d, rng)};
}

// A pair with |psi|^2 ≺ |gamma|^2, both canonical.
template <class Rng>
std::pair<PureState, PureState> random_majorized_canonical_pair(std::size_t d, Rng& rng) {
  const cohere::ProbVector y = cohere::sorted_desc(cohere::random_prob_vector(d, rng, 0.15));
  const cohere::ProbVector x = cohere::sorted_desc(cohere::random_majorized_by(y, rng));
  return {cohere::canonicalize(PureState::from_probabilities(x)).state,
          cohere::canonicalize(PureState::from_probabilities(y)).state};
}

}  // namespace testing_support

#endif  // COHERE_TESTS_HELPERS_HPP
