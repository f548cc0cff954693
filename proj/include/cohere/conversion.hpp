#ifndef COHERE_CONVERSION_HPP
#define COHERE_CONVERSION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohere/channels.hpp"
#include "cohere/errors.hpp"
#include "cohere/linalg.hpp"
#include "cohere/simplex.hpp"
#include "cohere/states.hpp"
#include "cohere/tolerances.hpp"

namespace cohere {

namespace detail {

// Squared moduli of the canonical forms of psi and phi, zero-padded to a
// common dimension.
inline std::pair<std::vector<double>, std::vector<double>> canonical_squares(const PureState& psi,
                                                                             const PureState& phi) {
  const std::size_t d = std::max(psi.dim(), phi.dim());
  const ProbVector x = sorted_desc(squared_amplitudes(padded(psi, d)));
  const ProbVector y = sorted_desc(squared_amplitudes(padded(phi, d)));
  return {x.vec(), y.vec()};
}

// Σ_{i=lo}^{hi} v_i over 0-based inclusive bounds, summed from the small end.
inline double block_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t k = hi + 1; k-- > lo;) s += v[k];
  return s;
}

inline bool is_canonical(const PureState& s) {
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (s[i].imag() != 0.0 || s[i].real() < 0.0) return false;
    if (i > 0 && s[i].real() > s[i - 1].real()) return false;
  }
  return true;
}

}  // namespace detail

// Optimal probability of turning psi into phi with an incoherent operation:
//
//   P = min_l  Σ_{i>=l} |ψ_i|^2 / Σ_{i>=l} |φ_i|^2
//
// over the sorted squared moduli. Tails where φ carries no weight impose no
// constraint; a tail where φ has weight and ψ has none forces P = 0.
inline double conversion_probability(const PureState& psi, const PureState& phi) {
  const auto [x, y] = detail::canonical_squares(psi, phi);
  const std::size_t d = x.size();
  double best = 1.0;  // l = 1
  for (std::size_t l = 1; l < d; ++l) {
    const double tx = detail::block_sum(x, l, d - 1);
    const double ty = detail::block_sum(y, l, d - 1);
    if (ty <= tol::zero_mass) continue;
    if (tx <= tol::zero_mass) return 0.0;
    best = std::min(best, tx / ty);
  }
  return std::clamp(best, 0.0, 1.0);
}

// Block structure behind the optimal protocol, in the canonical frame.
//
// Breakpoints l_1 > l_2 > ... > l_k = 1 are 1-based; block j covers
// [l_j, l_{j-1} - 1] with l_0 = d + 1 and carries the ratio r_j of ψ weight
// to φ weight. γ_i = sqrt(r_j)·φ_i on block j.
class ConversionLadder {
 public:
  ConversionLadder(std::vector<std::size_t> breakpoints, std::vector<double> ratios, PureState gamma)
      : breakpoints_(std::move(breakpoints)), ratios_(std::move(ratios)), gamma_(std::move(gamma)) {
    if (breakpoints_.empty() || breakpoints_.size() != ratios_.size()) {
      throw PreconditionError("ConversionLadder: need one ratio per breakpoint");
    }
    if (breakpoints_.back() != 1 || breakpoints_.front() > gamma_.dim()) {
      throw PreconditionError("ConversionLadder: breakpoints must end at 1 and lie in [1, d]");
    }
    for (std::size_t j = 1; j < breakpoints_.size(); ++j) {
      if (breakpoints_[j] >= breakpoints_[j - 1]) {
        throw PreconditionError("ConversionLadder: breakpoints must strictly decrease");
      }
      if (!(ratios_[j] > ratios_[j - 1])) {
        throw PreconditionError("ConversionLadder: ratios must strictly increase");
      }
    }
    if (!(ratios_.front() > 0.0)) throw PreconditionError("ConversionLadder: ratios must be positive");
  }

  const std::vector<std::size_t>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& ratios() const { return ratios_; }
  const PureState& gamma() const { return gamma_; }
  std::size_t dim() const { return gamma_.dim(); }
  double success_probability() const { return std::clamp(ratios_.front(), 0.0, 1.0); }

  // Block index (0-based j) of coordinate i (0-based).
  std::size_t block_of(std::size_t i) const {
    for (std::size_t j = 0; j < breakpoints_.size(); ++j) {
      if (i + 1 >= breakpoints_[j]) return j;
    }
    return breakpoints_.size() - 1;
  }

 private:
  std::vector<std::size_t> breakpoints_;
  std::vector<double> ratios_;
  PureState gamma_;
};

// Builds the ladder for the canonical forms of psi and phi. l_1 is the
// smallest minimizer of the tail ratio on [1, d]; each following l_j is the
// smallest minimizer of the block ratio on [1, l_{j-1} - 1]. Ratios within
// tol::ratio_tie count as ties.
inline ConversionLadder build_ladder(const PureState& psi, const PureState& phi) {
  const auto [x, y] = detail::canonical_squares(psi, phi);
  const std::size_t d = x.size();
  std::vector<std::size_t> breaks;
  std::vector<double> ratios;
  std::size_t upper = d;  // 1-based end of the current block
  while (upper >= 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_l = 0;
    for (std::size_t l = 1; l <= upper; ++l) {
      const double num = detail::block_sum(x, l - 1, upper - 1);
      const double den = detail::block_sum(y, l - 1, upper - 1);
      if (den <= tol::zero_mass) continue;
      if (num <= tol::zero_mass) {
        throw NoLadderError("build_ladder: conversion probability is zero");
      }
      const double r = num / den;
      if (r < best - tol::ratio_tie) {
        best = r;
        best_l = l;
      }
    }
    if (best_l == 0) throw NoLadderError("build_ladder: target block carries no weight");
    breaks.push_back(best_l);
    ratios.push_back(best);
    upper = best_l - 1;
  }

  CVector g(static_cast<Eigen::Index>(d));
  std::size_t hi = d;
  for (std::size_t j = 0; j < breaks.size(); ++j) {
    const double scale = std::sqrt(ratios[j]);
    for (std::size_t i = breaks[j] - 1; i < hi; ++i) {
      g(static_cast<Eigen::Index>(i)) = scale * std::sqrt(y[i]);
    }
    hi = breaks[j] - 1;
  }
  return ConversionLadder(std::move(breaks), std::move(ratios), PureState(std::move(g)));
}

// The filter {M, sqrt(I - M^2)} with M = sqrt(r_1 / r_j) on block j. Its
// "success" outcome maps γ to the canonical φ with probability r_1.
inline KrausSet filter_operator(const ConversionLadder& ladder, const PureState& phi) {
  if (phi.dim() != ladder.dim()) throw DimensionError("filter_operator: dimension mismatch");
  const auto d = static_cast<Eigen::Index>(ladder.dim());
  CMatrix m = CMatrix::Zero(d, d);
  CMatrix rest = CMatrix::Zero(d, d);
  const double r1 = ladder.ratios().front();
  for (Eigen::Index i = 0; i < d; ++i) {
    const double rj = ladder.ratios()[ladder.block_of(static_cast<std::size_t>(i))];
    const double mi = std::sqrt(r1 / rj);
    m(i, i) = mi;
    rest(i, i) = std::sqrt(std::max(0.0, 1.0 - mi * mi));
  }
  return KrausSet({std::move(m), std::move(rest)}, {"success", "fail"});
}

// One T-transform realized as a two-outcome incoherent measurement whose
// outcomes both leave the same state: coordinates i and j of `source` become
// (c_i, c_j) = sqrt(target_squared), everything else is untouched.
//
// K_1 = diag(a), K_2 = swap(i, j)·diag(b), with outcome probabilities
// p_1 = (s_i^2 - c_j^2) / (c_i^2 - c_j^2) and p_2 = 1 - p_1.
inline KrausSet two_level_step(const PureState& source, std::pair<double, double> target_squared,
                               std::size_t i, std::size_t j) {
  const std::size_t d = source.dim();
  if (i >= d || j >= d || i == j) throw IndexError("two_level_step: bad coordinate pair");
  if (source[i].imag() != 0.0 || source[j].imag() != 0.0 || source[i].real() < 0.0 ||
      source[j].real() < 0.0) {
    throw PreconditionError("two_level_step: source amplitudes must be real and nonnegative");
  }
  const auto [ci2, cj2] = target_squared;
  if (ci2 < 0.0 || cj2 < 0.0) throw InfeasibleStepError("two_level_step: negative target weight");
  const double si2 = std::norm(source[i]);
  const double sj2 = std::norm(source[j]);
  if (std::abs((si2 + sj2) - (ci2 + cj2)) > tol::slack) {
    throw InfeasibleStepError("two_level_step: pair weight is not conserved");
  }
  const auto dd = static_cast<Eigen::Index>(d);
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);

  if (std::abs(ci2 - cj2) <= tol::zero_mass) {
    if (std::abs(si2 - ci2) > tol::slack || std::abs(sj2 - cj2) > tol::slack) {
      throw InfeasibleStepError("two_level_step: equal targets need an equal source pair");
    }
    return KrausSet({CMatrix::Identity(dd, dd), CMatrix::Zero(dd, dd)}, {"keep", "swap"});
  }

  double p1 = (si2 - cj2) / (ci2 - cj2);
  if (p1 < -tol::slack || p1 > 1.0 + tol::slack) {
    throw InfeasibleStepError("two_level_step: mixing weight " + std::to_string(p1) +
                              " outside [0, 1]");
  }
  p1 = std::clamp(p1, 0.0, 1.0);
  const double p2 = 1.0 - p1;
  const double ci = std::sqrt(ci2);
  const double cj = std::sqrt(cj2);

  RVector a = RVector::Constant(dd, std::sqrt(p1));
  RVector b = RVector::Constant(dd, std::sqrt(p2));
  // Coordinate i feeds c_i on outcome 1 and c_j (after the swap) on outcome 2.
  const double si = std::sqrt(si2);
  const double sj = std::sqrt(sj2);
  if (si > 0.0) {
    a(ii) = std::sqrt(p1) * ci / si;
    b(ii) = std::sqrt(p2) * cj / si;
  }
  if (sj > 0.0) {
    a(jj) = std::sqrt(p1) * cj / sj;
    b(jj) = std::sqrt(p2) * ci / sj;
  }
  // Absorb rounding so each column is exactly normalized.
  for (const auto k : {ii, jj}) {
    const double n = std::hypot(a(k), b(k));
    if (n > 0.0) {
      a(k) /= n;
      b(k) /= n;
    }
  }

  CMatrix k1 = CMatrix::Zero(dd, dd);
  CMatrix k2 = CMatrix::Zero(dd, dd);
  for (Eigen::Index m = 0; m < dd; ++m) {
    k1(m, m) = a(m);
    const Eigen::Index row = m == ii ? jj : (m == jj ? ii : m);
    k2(row, m) = b(m);
  }
  return KrausSet({std::move(k1), std::move(k2)}, {"keep", "swap"});
}

// Stages turning psi into gamma with certainty when |ψ|^2 ≺ |γ|^2 (both
// canonical). Each stage is one two_level_step; there are at most d - 1.
inline std::vector<KrausSet> deterministic_protocol(const PureState& psi, const PureState& gamma) {
  if (psi.dim() != gamma.dim()) throw DimensionError("deterministic_protocol: dimension mismatch");
  if (!detail::is_canonical(psi) || !detail::is_canonical(gamma)) {
    throw PreconditionError("deterministic_protocol: states must be in canonical form");
  }
  const ProbVector x = squared_amplitudes(psi);
  const ProbVector y = squared_amplitudes(gamma);
  const std::vector<TTransform> chain = ttransform_chain(x, y);  // throws if x ⊀ y

  // inter[m] is y after the last m transforms of the chain.
  std::vector<std::vector<double>> inter{y.vec()};
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    std::vector<double> next = inter.back();
    it->apply(next);
    inter.push_back(std::move(next));
  }

  std::vector<KrausSet> stages;
  CVector current = psi.amplitudes();
  const std::size_t k = chain.size();
  for (std::size_t s = 0; s < k; ++s) {
    const TTransform& tr = chain[s];
    const std::vector<double>& target = inter[k - s - 1];
    const double ci2 = target[tr.i];
    const double cj2 = target[tr.j];
    stages.push_back(two_level_step(PureState::normalized(current), {ci2, cj2}, tr.i, tr.j));
    current(static_cast<Eigen::Index>(tr.i)) = std::sqrt(ci2);
    current(static_cast<Eigen::Index>(tr.j)) = std::sqrt(cj2);
  }
  return stages;
}

// Stages of an optimal protocol in the frame of the original (padded) states.
struct Protocol {
  std::vector<KrausSet> stages;
  std::string success_label = "success";
  std::optional<Canonicalization> source_frame;
  std::optional<Canonicalization> target_frame;
  std::optional<ConversionLadder> ladder;
  double success_probability = 0.0;
  std::size_t dim = 0;

  bool empty() const { return stages.empty(); }

  // True if a composed label ends in the success outcome of the last stage.
  bool is_success(const std::string& composed_label) const {
    const auto cut = composed_label.rfind('/');
    const std::string last = cut == std::string::npos ? composed_label : composed_label.substr(cut + 1);
    return last == success_label;
  }
};

// Optimal protocol: the incoherent unitary canonicalizing psi, the
// deterministic stages ψ -> γ, then the filter γ -> φ. The filter stage
// absorbs the inverse of φ's canonicalizing unitary, so the stages act on the
// original states. A zero probability yields an empty protocol.
inline Protocol optimal_protocol(const PureState& psi, const PureState& phi) {
  const std::size_t d = std::max(psi.dim(), phi.dim());
  const PureState src = padded(psi, d);
  const PureState dst = padded(phi, d);
  Protocol out;
  out.dim = d;
  const double p = conversion_probability(src, dst);
  if (p <= 0.0) return out;

  Canonicalization cs = canonicalize(src);
  Canonicalization ct = canonicalize(dst);
  ConversionLadder ladder = build_ladder(cs.state, ct.state);

  std::vector<KrausSet> stages{KrausSet({cs.unitary()}, {"frame"})};
  for (auto& s : deterministic_protocol(cs.state, ladder.gamma())) stages.push_back(std::move(s));
  const KrausSet filter = filter_operator(ladder, ct.state);
  const CMatrix u_dst_inv = ct.unitary().adjoint();
  std::vector<CMatrix> ops;
  for (const auto& m : filter.operators()) ops.push_back(u_dst_inv * m);
  stages.emplace_back(std::move(ops), filter.labels());

  out.stages = std::move(stages);
  out.source_frame = std::move(cs);
  out.target_frame = std::move(ct);
  out.success_probability = p;
  out.ladder = std::move(ladder);
  return out;
}

struct ProtocolReport {
  double max_completeness_residual = 0.0;
  bool all_incoherent = true;
  double success_probability = 0.0;
  double total_probability = 0.0;
  double min_success_fidelity = 1.0;
  std::size_t success_branches = 0;
  std::vector<Branch<PureState>> branches;
  std::vector<double> fidelities;  // per branch, against phi
};

// Composes the stages, applies them to psi and scores the success branches
// against phi. Both states are padded to the protocol dimension.
inline ProtocolReport verify_protocol(const Protocol& protocol, const PureState& psi,
                                      const PureState& phi) {
  ProtocolReport rep;
  if (protocol.empty()) {
    rep.total_probability = 1.0;
    return rep;
  }
  for (const auto& s : protocol.stages) {
    rep.max_completeness_residual = std::max(rep.max_completeness_residual, is_complete(s).residual);
    rep.all_incoherent = rep.all_incoherent && is_incoherent(s).incoherent;
  }
  const PureState src = padded(psi, protocol.dim);
  const PureState dst = padded(phi, protocol.dim);
  rep.branches = apply_selective(compose(protocol.stages), src);
  for (const auto& b : rep.branches) {
    rep.total_probability += b.probability;
    rep.fidelities.push_back(fidelity(b.state, dst));
    if (!protocol.is_success(b.label)) continue;
    ++rep.success_branches;
    rep.success_probability += b.probability;
    rep.min_success_fidelity = std::min(rep.min_success_fidelity, rep.fidelities.back());
  }
  return rep;
}

// The shortcut: fewer nonzero amplitudes in psi than in phi^{⊗2} rules out
// producing n >= 2 copies of phi.
inline bool support_shortcut(const PureState& psi, const PureState& phi, std::size_t n) {
  const std::size_t sp = support_size(phi);
  return n >= 2 && support_size(psi) < sp * sp;
}

// P(psi -> phi^{⊗n}).
inline double multicopy_probability(const PureState& psi, const PureState& phi, std::size_t n,
                                    std::size_t cap = kDefaultAmplitudeCap) {
  if (n < 1) throw ParameterError("multicopy_probability: n must be >= 1");
  if (n == 1) return conversion_probability(psi, phi);
  if (support_shortcut(psi, phi, n)) return 0.0;
  return conversion_probability(psi, tensor_power(phi, n, cap));
}

// P(psi^{⊗m} -> phi).
inline double source_copies_probability(const PureState& psi, std::size_t m, const PureState& phi,
                                        std::size_t cap = kDefaultAmplitudeCap) {
  if (m < 1) throw ParameterError("source_copies_probability: m must be >= 1");
  return conversion_probability(m == 1 ? psi : tensor_power(psi, m, cap), phi);
}

}  // namespace cohere

#endif  // COHERE_CONVERSION_HPP
