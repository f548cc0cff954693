#ifndef COHERE_STATES_HPP
#define COHERE_STATES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "cohere/errors.hpp"
#include "cohere/linalg.hpp"
#include "cohere/simplex.hpp"
#include "cohere/tolerances.hpp"

namespace cohere {

// A normalized pure state written in the fixed incoherent basis.
class PureState {
 public:
  explicit PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw DimensionError("PureState: dimension must be >= 1");
    if (!amps_.allFinite()) throw NormalizationError("PureState: non-finite amplitude");
    const double n2 = amps_.squaredNorm();
    if (std::abs(n2 - 1.0) > tol::slack) {
      throw NormalizationError("PureState: squared norm " + std::to_string(n2));
    }
  }

  PureState(std::initializer_list<cplx> amplitudes)
      : PureState(CVector(Eigen::Map<const CVector>(amplitudes.begin(),
                                                    static_cast<Eigen::Index>(amplitudes.size())))) {}

  // Rescales an arbitrary nonzero vector to unit norm.
  static PureState normalized(const CVector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw NormalizationError("PureState::normalized: zero or non-finite vector");
    }
    return PureState(v / n);
  }

  // The state with amplitudes sqrt(x_i).
  static PureState from_probabilities(const ProbVector& x) {
    CVector v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Eigen::Index>(i)) = std::sqrt(x[i]);
    return normalized(v);
  }

  static PureState basis(std::size_t d, std::size_t k) {
    if (k >= d) throw IndexError("PureState::basis: index out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return PureState(std::move(v));
  }

  // (1/sqrt(d)) sum_i |i>.
  static PureState maximally_coherent(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return PureState(CVector::Constant(n, cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0)));
  }

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
  const CVector& amplitudes() const { return amps_; }

 private:
  CVector amps_;
};

inline PureState padded(const PureState& psi, std::size_t d) {
  if (d < psi.dim()) throw DimensionError("padded: target dimension smaller than state");
  return PureState(zero_padded(psi.amplitudes(), static_cast<Eigen::Index>(d)));
}

// |<a|b>|^2 for states of equal dimension.
inline double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw DimensionError("fidelity: dimension mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

// Sorted nonnegative form of a state plus the incoherent unitary reaching it.
//
// With ψ'_i = phases[i]·ψ_i, the canonical state is c_m = ψ'_{permutation[m]}.
struct Canonicalization {
  PureState state;
  std::vector<std::size_t> permutation;
  std::vector<cplx> phases;

  // U with U·ψ = canonical state; one unit-modulus entry per row and column.
  CMatrix unitary() const {
    const auto d = static_cast<Eigen::Index>(permutation.size());
    CMatrix u = CMatrix::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
      const auto src = permutation[static_cast<std::size_t>(m)];
      u(m, static_cast<Eigen::Index>(src)) = phases[src];
    }
    return u;
  }
};

inline ProbVector squared_amplitudes(const PureState& psi) {
  std::vector<double> x(psi.dim());
  for (std::size_t i = 0; i < psi.dim(); ++i) x[i] = std::norm(psi[i]);
  return ProbVector(std::move(x));
}

inline Canonicalization canonicalize(const PureState& psi) {
  const std::size_t d = psi.dim();
  std::vector<cplx> phases(d, cplx(1.0, 0.0));
  std::vector<double> moduli(d);
  for (std::size_t i = 0; i < d; ++i) {
    moduli[i] = std::abs(psi[i]);
    if (moduli[i] > 0.0) phases[i] = std::conj(psi[i]) / moduli[i];
  }
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return moduli[a] > moduli[b]; });
  CVector c(static_cast<Eigen::Index>(d));
  for (std::size_t m = 0; m < d; ++m) c(static_cast<Eigen::Index>(m)) = moduli[perm[m]];
  return Canonicalization{PureState(std::move(c)), std::move(perm), std::move(phases)};
}

inline std::size_t support_size(const PureState& psi) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    if (std::abs(psi[i]) > tol::nonzero) ++n;
  }
  return n;
}

inline constexpr std::size_t kDefaultAmplitudeCap = 1'000'000;

// psi^{⊗n} in row-major multi-index order (last factor varies fastest).
inline PureState tensor_power(const PureState& psi, std::size_t n,
                              std::size_t cap = kDefaultAmplitudeCap) {
  if (n < 1) throw ParameterError("tensor_power: n must be >= 1");
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (total > cap / psi.dim()) {
      throw ResourceError("tensor_power: " + std::to_string(psi.dim()) + "^" +
                          std::to_string(n) + " amplitudes exceed cap " + std::to_string(cap));
    }
    total *= psi.dim();
  }
  CVector acc = psi.amplitudes();
  for (std::size_t k = 1; k < n; ++k) {
    CVector next(acc.size() * psi.amplitudes().size());
    const Eigen::Index d = psi.amplitudes().size();
    for (Eigen::Index a = 0; a < acc.size(); ++a) {
      next.segment(a * d, d) = acc(a) * psi.amplitudes();
    }
    acc = std::move(next);
  }
  // Rounding in long products; the result is normalized within slack anyway.
  return PureState::normalized(acc);
}

// A validated density operator: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries) : rho_(std::move(entries)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
      throw DensityMatrixError("DensityMatrix: must be a nonempty square matrix");
    }
    if (!rho_.allFinite()) throw DensityMatrixError("DensityMatrix: non-finite entry");
    const double herm = max_abs_entry(rho_ - rho_.adjoint());
    if (herm > tol::slack) {
      throw DensityMatrixError("DensityMatrix: not Hermitian (residual " + std::to_string(herm) + ")");
    }
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > tol::slack) {
      throw DensityMatrixError("DensityMatrix: trace " + std::to_string(tr));
    }
    const CMatrix h = 0.5 * (rho_ + rho_.adjoint());
    const double min_eig = Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .minCoeff();
    if (min_eig < -tol::slack) {
      throw DensityMatrixError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    }
  }

  static DensityMatrix pure(const PureState& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
  }

  static DensityMatrix diagonal(const ProbVector& p) {
    const auto d = static_cast<Eigen::Index>(p.size());
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = p[static_cast<std::size_t>(i)];
    return DensityMatrix(std::move(m));
  }

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const CMatrix& matrix() const { return rho_; }

  bool is_diagonal(double limit = tol::zero_mass) const {
    CMatrix off = rho_;
    off.diagonal().setZero();
    return max_abs_entry(off) <= limit;
  }

 private:
  CMatrix rho_;
};

}  // namespace cohere

#endif  // COHERE_STATES_HPP
