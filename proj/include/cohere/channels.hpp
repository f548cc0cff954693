#ifndef COHERE_CHANNELS_HPP
#define COHERE_CHANNELS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cohere/errors.hpp"
#include "cohere/linalg.hpp"
#include "cohere/states.hpp"
#include "cohere/tolerances.hpp"

namespace cohere {

// A finite list of d x d Kraus operators, each with a text label.
//
// Completeness is not enforced on construction so that partial or broken sets
// can be inspected with is_complete(); operations that need a channel check it.
class KrausSet {
 public:
  KrausSet() = default;

  explicit KrausSet(std::vector<CMatrix> operators, std::vector<std::string> labels = {})
      : ops_(std::move(operators)), labels_(std::move(labels)) {
    if (ops_.empty()) throw DimensionError("KrausSet: at least one operator required");
    const auto d = ops_.front().rows();
    for (const auto& k : ops_) {
      if (k.rows() != d || k.cols() != d || d == 0) {
        throw DimensionError("KrausSet: operators must share one square dimension");
      }
    }
    if (labels_.empty()) {
      for (std::size_t n = 0; n < ops_.size(); ++n) labels_.push_back("k" + std::to_string(n));
    } else if (labels_.size() != ops_.size()) {
      throw DimensionError("KrausSet: label count does not match operator count");
    }
  }

  static KrausSet identity(std::size_t d, std::string label = "id") {
    const auto n = static_cast<Eigen::Index>(d);
    return KrausSet({CMatrix::Identity(n, n)}, {std::move(label)});
  }

  std::size_t dim() const { return ops_.empty() ? 0 : static_cast<std::size_t>(ops_.front().rows()); }
  std::size_t size() const { return ops_.size(); }
  const CMatrix& op(std::size_t n) const { return ops_[n]; }
  const std::string& label(std::size_t n) const { return labels_[n]; }
  const std::vector<CMatrix>& operators() const { return ops_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<CMatrix> ops_;
  std::vector<std::string> labels_;
};

struct IncoherenceWitness {
  std::size_t op = 0;
  std::size_t column = 0;
  std::size_t row_a = 0;
  std::size_t row_b = 0;
};

struct IncoherenceReport {
  bool incoherent = true;
  std::optional<IncoherenceWitness> witness;
};

struct CompletenessReport {
  bool complete = true;
  double residual = 0.0;  // max entrywise |Σ K†K - I|
};

inline IncoherenceReport is_incoherent(const KrausSet& k) {
  for (std::size_t n = 0; n < k.size(); ++n) {
    const CMatrix& m = k.op(n);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::optional<Eigen::Index> first;
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (std::abs(m(r, c)) <= tol::nonzero) continue;
        if (!first) {
          first = r;
          continue;
        }
        return {false, IncoherenceWitness{n, static_cast<std::size_t>(c),
                                          static_cast<std::size_t>(*first),
                                          static_cast<std::size_t>(r)}};
      }
    }
  }
  return {};
}

inline CompletenessReport is_complete(const KrausSet& k) {
  const auto d = static_cast<Eigen::Index>(k.dim());
  CMatrix acc = -CMatrix::Identity(d, d);
  for (const auto& m : k.operators()) acc += m.adjoint() * m;
  const double residual = max_abs_entry(acc);
  return {residual <= tol::slack, residual};
}

// One outcome of a selective measurement.
template <class State>
struct Branch {
  double probability = 0.0;
  State state;
  std::string label;
};

namespace detail {

inline void require_complete(const KrausSet& k, const char* who, double limit = tol::slack) {
  const auto rep = is_complete(k);
  if (rep.residual > limit) {
    throw CompletenessError(std::string(who) + ": Kraus set incomplete (residual " +
                            std::to_string(rep.residual) + ")");
  }
}

inline void check_branch_mass(double dropped, double kept, const char* who) {
  if (dropped > tol::slack || std::abs(kept - 1.0) > tol::slack) {
    throw CompletenessError(std::string(who) + ": branch probabilities sum to " +
                            std::to_string(kept) + " with " + std::to_string(dropped) +
                            " dropped");
  }
}

}  // namespace detail

// Outcomes K_n ψ / ||K_n ψ|| with probabilities ||K_n ψ||^2; branches at or
// below tol::zero_mass are dropped after checking the lost mass is negligible.
inline std::vector<Branch<PureState>> apply_selective(const KrausSet& k, const PureState& psi) {
  if (k.dim() != psi.dim()) throw DimensionError("apply_selective: dimension mismatch");
  detail::require_complete(k, "apply_selective");
  std::vector<Branch<PureState>> out;
  double kept = 0.0;
  double dropped = 0.0;
  for (std::size_t n = 0; n < k.size(); ++n) {
    const CVector v = k.op(n) * psi.amplitudes();
    const double p = v.squaredNorm();
    if (p <= tol::zero_mass) {
      dropped += p;
      continue;
    }
    kept += p;
    out.push_back({p, PureState(v / std::sqrt(p)), k.label(n)});
  }
  detail::check_branch_mass(dropped, kept, "apply_selective");
  return out;
}

inline std::vector<Branch<DensityMatrix>> apply_selective(const KrausSet& k,
                                                          const DensityMatrix& rho) {
  if (k.dim() != rho.dim()) throw DimensionError("apply_selective: dimension mismatch");
  detail::require_complete(k, "apply_selective");
  std::vector<Branch<DensityMatrix>> out;
  double kept = 0.0;
  double dropped = 0.0;
  for (std::size_t n = 0; n < k.size(); ++n) {
    const CMatrix m = k.op(n) * rho.matrix() * k.op(n).adjoint();
    const double p = m.trace().real();
    if (p <= tol::zero_mass) {
      dropped += p;
      continue;
    }
    kept += p;
    CMatrix s = m / p;
    s = 0.5 * (s + s.adjoint()).eval();
    out.push_back({p, DensityMatrix(std::move(s)), k.label(n)});
  }
  detail::check_branch_mass(dropped, kept, "apply_selective");
  return out;
}

// Φ(ρ) = Σ_n K_n ρ K_n†.
inline DensityMatrix apply_channel(const KrausSet& k, const DensityMatrix& rho) {
  if (k.dim() != rho.dim()) throw DimensionError("apply_channel: dimension mismatch");
  detail::require_complete(k, "apply_channel");
  const auto d = static_cast<Eigen::Index>(k.dim());
  CMatrix out = CMatrix::Zero(d, d);
  for (const auto& m : k.operators()) out += m * rho.matrix() * m.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

// Sequential composition: stage 0 acts first. Operators are all products
// K^{(m)}_{n_m} ··· K^{(1)}_{n_1}; labels are the stage labels joined with '/'.
// Products with Frobenius norm at or below tol::prune are dropped.
inline KrausSet compose(const std::vector<KrausSet>& stages) {
  if (stages.empty()) throw DimensionError("compose: no stages");
  const std::size_t d = stages.front().dim();
  for (const auto& s : stages) {
    if (s.dim() != d) throw DimensionError("compose: stage dimensions differ");
    detail::require_complete(s, "compose");
  }
  std::vector<CMatrix> ops = stages.front().operators();
  std::vector<std::string> labels = stages.front().labels();
  for (std::size_t s = 1; s < stages.size(); ++s) {
    std::vector<CMatrix> next_ops;
    std::vector<std::string> next_labels;
    for (std::size_t a = 0; a < ops.size(); ++a) {
      for (std::size_t b = 0; b < stages[s].size(); ++b) {
        CMatrix prod = stages[s].op(b) * ops[a];
        if (prod.norm() <= tol::prune) continue;
        next_ops.push_back(std::move(prod));
        next_labels.push_back(labels[a] + "/" + stages[s].label(b));
      }
    }
    ops = std::move(next_ops);
    labels = std::move(next_labels);
  }
  if (ops.empty()) throw CompletenessError("compose: every product vanished");
  return KrausSet(std::move(ops), std::move(labels));
}

// A random incoherent channel with between 1 and max_ops Kraus operators.
//
// Columns are split into groups of at most N = #operators columns. In every
// operator each group is sent to its own row, and the coefficients of a group
// across operators form an N x |group| isometry, so completeness holds exactly
// and every column carries a single nonzero entry per operator.
template <class Rng>
KrausSet random_incoherent_channel(std::size_t d, std::size_t max_ops, Rng& rng) {
  if (d == 0 || max_ops == 0) throw ParameterError("random_incoherent_channel: empty shape");
  std::uniform_int_distribution<std::size_t> n_dist(1, max_ops);
  const std::size_t n_ops = n_dist(rng);
  std::normal_distribution<double> gauss;

  std::vector<std::size_t> cols(d);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  std::shuffle(cols.begin(), cols.end(), rng);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t at = 0; at < d;) {
    std::uniform_int_distribution<std::size_t> g_dist(1, std::min(n_ops, d - at));
    const std::size_t g = g_dist(rng);
    groups.emplace_back(cols.begin() + static_cast<std::ptrdiff_t>(at),
                        cols.begin() + static_cast<std::ptrdiff_t>(at + g));
    at += g;
  }

  const auto dd = static_cast<Eigen::Index>(d);
  std::vector<CMatrix> ops(n_ops, CMatrix::Zero(dd, dd));
  std::vector<std::vector<std::size_t>> rows(n_ops);
  for (auto& r : rows) {
    r.resize(d);
    std::iota(r.begin(), r.end(), std::size_t{0});
    std::shuffle(r.begin(), r.end(), rng);
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto gs = static_cast<Eigen::Index>(groups[g].size());
    CMatrix z(static_cast<Eigen::Index>(n_ops), gs);
    for (Eigen::Index a = 0; a < z.rows(); ++a) {
      for (Eigen::Index b = 0; b < gs; ++b) z(a, b) = cplx(gauss(rng), gauss(rng));
    }
    const CMatrix iso = Eigen::HouseholderQR<CMatrix>(z).householderQ() *
                        CMatrix::Identity(static_cast<Eigen::Index>(n_ops), gs);
    for (std::size_t n = 0; n < n_ops; ++n) {
      const auto row = static_cast<Eigen::Index>(rows[n][g]);
      for (Eigen::Index b = 0; b < gs; ++b) {
        const auto col = static_cast<Eigen::Index>(groups[g][static_cast<std::size_t>(b)]);
        ops[n](row, col) = iso(static_cast<Eigen::Index>(n), b);
      }
    }
  }
  return KrausSet(std::move(ops));
}

}  // namespace cohere

#endif  // COHERE_CHANNELS_HPP
