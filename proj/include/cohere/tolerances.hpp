#ifndef COHERE_TOLERANCES_HPP
#define COHERE_TOLERANCES_HPP

namespace cohere::tol {

// Entries of a probability vector at or above -clamp are clamped to zero.
inline constexpr double clamp = 1e-12;

// Slack for comparisons of sums, norms, and residuals.
inline constexpr double slack = 1e-9;

// An amplitude or matrix entry counts as nonzero above this modulus.
inline constexpr double nonzero = 1e-9;

// Branches and tails at or below this are treated as exactly zero.
inline constexpr double zero_mass = 1e-12;

// Ties between tail ratios in the ladder construction.
inline constexpr double ratio_tie = 1e-12;

// Composition drops products with Frobenius norm at or below this.
inline constexpr double prune = 1e-12;

// Looser normalization accepted when reading hand-written files.
inline constexpr double ingest = 1e-6;

// Validation threshold for sampled functional checks.
inline constexpr double functional = 1e-7;

}  // namespace cohere::tol

#endif  // COHERE_TOLERANCES_HPP
