#ifndef COHERE_CONVEX_ROOF_HPP
#define COHERE_CONVEX_ROOF_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cohere/errors.hpp"
#include "cohere/linalg.hpp"
#include "cohere/measures.hpp"
#include "cohere/states.hpp"

namespace cohere {

struct EnsembleMember {
  double weight = 0.0;
  PureState state;
};

// Upper bound on the convex roof C_f(ρ) = min Σ_j p_j C_f(ψ_j) together with
// the ensemble achieving it.
struct RoofResult {
  double value = 0.0;
  std::vector<EnsembleMember> ensemble;
  std::string quality = "upper-bound";
};

struct RoofOptions {
  std::size_t restarts = 8;
  std::size_t ensemble_size = 0;  // 0 means rank^2
  std::uint64_t seed = 0;
  std::size_t max_evaluations = 4000;  // per restart
  double initial_step = 0.5;
  double min_step = 1e-7;
};

namespace detail {

// ρ = A A† with A = [sqrt(λ_k) e_k] over eigenvalues above tol::zero_mass.
inline CMatrix roof_factor(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho.matrix() + rho.matrix().adjoint()));
  const auto& vals = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = vals.size(); k-- > 0;) {
    if (vals(k) > tol::zero_mass) keep.push_back(k);
  }
  CMatrix a(rho.matrix().rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    a.col(static_cast<Eigen::Index>(c)) = std::sqrt(vals(keep[c])) * es.eigenvectors().col(keep[c]);
  }
  return a;
}

// Unnormalized ensemble vectors are the columns of A·Uᵀ for an N x r isometry
// U; every pure-state ensemble of size N arises this way.
inline std::vector<EnsembleMember> ensemble_from(const CMatrix& a, const CMatrix& iso) {
  const CMatrix vecs = a * iso.transpose();
  std::vector<EnsembleMember> out;
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    const double p = vecs.col(j).squaredNorm();
    if (p <= std::numeric_limits<double>::min()) continue;
    out.push_back({p, PureState(vecs.col(j) / std::sqrt(p))});
  }
  return out;
}

inline double ensemble_value(const CoherenceFunctional& f, const CMatrix& a, const CMatrix& iso) {
  const CMatrix vecs = a * iso.transpose();
  double total = 0.0;
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    const double p = vecs.col(j).squaredNorm();
    if (p <= std::numeric_limits<double>::min()) continue;
    std::vector<double> x(static_cast<std::size_t>(vecs.rows()));
    for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
      x[static_cast<std::size_t>(i)] = std::norm(vecs(i, j)) / p;
    }
    total += p * f(ProbVector(std::move(x)));
  }
  return total;
}

inline CMatrix isometry_from(const CMatrix& z) {
  return Eigen::HouseholderQR<CMatrix>(z).householderQ() * CMatrix::Identity(z.rows(), z.cols());
}

struct RestartResult {
  double value = std::numeric_limits<double>::infinity();
  CMatrix iso;
};

// Derivative-free pattern search over the real and imaginary parts of Z,
// where the isometry is the Q factor of Z.
inline RestartResult roof_restart(const CoherenceFunctional& f, const CMatrix& a, CMatrix z,
                                  const RoofOptions& opt) {
  auto eval = [&](const CMatrix& m) { return ensemble_value(f, a, isometry_from(m)); };
  double best = eval(z);
  std::size_t evals = 1;
  double step = opt.initial_step;
  while (step >= opt.min_step && evals < opt.max_evaluations) {
    bool improved = false;
    for (Eigen::Index idx = 0; idx < z.size() && evals < opt.max_evaluations; ++idx) {
      for (const cplx dir : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
        CMatrix trial = z;
        trial(idx) += step * dir;
        const double v = eval(trial);
        ++evals;
        if (v < best) {
          best = v;
          z = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {best, isometry_from(z)};
}

}  // namespace detail

// Pure-state average over the eigen-decomposition of ρ; a feasible point of
// the roof minimization.
inline double eigen_ensemble_average(const CoherenceFunctional& f, const DensityMatrix& rho) {
  const CMatrix a = detail::roof_factor(rho);
  return detail::ensemble_value(f, a, CMatrix::Identity(a.cols(), a.cols()));
}

// Searches pure-state ensembles of ρ for a small average of C_f. The result is
// an upper bound on the convex roof. Pure ρ is returned exactly; diagonal ρ
// uses the basis-state ensemble.
//
// Restart 0 starts at the eigen-ensemble, so the result never exceeds the
// eigen-ensemble average. Restarts run concurrently with seeds derived from
// opt.seed; the minimum wins and ties go to the lower restart index.
inline RoofResult convex_roof_upper(const CoherenceFunctional& f, const DensityMatrix& rho,
                                    const RoofOptions& opt = {}) {
  const std::size_t d = rho.dim();
  if (rho.is_diagonal()) {
    RoofResult res;
    for (std::size_t i = 0; i < d; ++i) {
      const double p = rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      if (p <= 0.0) continue;
      res.ensemble.push_back({p, PureState::basis(d, i)});
      res.value += p * coherence_pure(f, res.ensemble.back().state);
    }
    return res;
  }

  const CMatrix a = detail::roof_factor(rho);
  const auto rank = static_cast<std::size_t>(a.cols());
  if (rank == 1) {
    const PureState psi = PureState::normalized(a.col(0));
    return {coherence_pure(f, psi), {{1.0, psi}}, "upper-bound"};
  }

  const std::size_t n = opt.ensemble_size == 0 ? rank * rank : opt.ensemble_size;
  if (n < rank) {
    throw ParameterError("convex_roof_upper: ensemble size " + std::to_string(n) +
                         " below rank " + std::to_string(rank));
  }
  const std::size_t restarts = std::max<std::size_t>(1, opt.restarts);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(rank);

  std::vector<std::future<detail::RestartResult>> jobs;
  for (std::size_t r = 0; r < restarts; ++r) {
    jobs.push_back(std::async(std::launch::async, [&, r] {
      CMatrix z = CMatrix::Identity(rows, cols);
      if (r > 0) {
        std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(r)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> g;
        for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = cplx(g(rng), g(rng));
      }
      return detail::roof_restart(f, a, std::move(z), opt);
    }));
  }
  detail::RestartResult best;
  for (auto& job : jobs) {
    auto res = job.get();
    if (res.value < best.value) best = std::move(res);
  }

  RoofResult out;
  out.ensemble = detail::ensemble_from(a, best.iso);
  double wsum = 0.0;
  for (const auto& m : out.ensemble) {
    out.value += m.weight * coherence_pure(f, m.state);
    wsum += m.weight;
  }
  if (std::abs(wsum - 1.0) > tol::slack) {
    throw PreconditionError("convex_roof_upper: ensemble weights sum to " + std::to_string(wsum));
  }
  return out;
}

}  // namespace cohere

#endif  // COHERE_CONVEX_ROOF_HPP
