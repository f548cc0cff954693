#ifndef COHERE_SIMPLEX_HPP
#define COHERE_SIMPLEX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cohere/errors.hpp"
#include "cohere/tolerances.hpp"

namespace cohere {

// A point of the probability simplex: nonnegative entries summing to one.
//
// Entries in [-tol::clamp, 0) are clamped to zero on construction; anything
// more negative, or a sum off by more than tol::slack, is rejected.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw DimensionError("ProbVector: dimension must be >= 1");
    double total = 0.0;
    for (double& e : entries_) {
      if (!std::isfinite(e)) throw NormalizationError("ProbVector: non-finite entry");
      if (e < 0.0) {
        if (e < -tol::clamp) {
          throw NormalizationError("ProbVector: negative entry " + std::to_string(e));
        }
        e = 0.0;
      }
      total += e;
    }
    if (std::abs(total - 1.0) > tol::slack) {
      throw NormalizationError("ProbVector: entries sum to " + std::to_string(total));
    }
  }

  ProbVector(std::initializer_list<double> entries)
      : ProbVector(std::vector<double>(entries)) {}

  // Uniform vector (1/d, ..., 1/d).
  static ProbVector uniform(std::size_t d) {
    if (d == 0) throw DimensionError("ProbVector: dimension must be >= 1");
    return ProbVector(std::vector<double>(d, 1.0 / static_cast<double>(d)));
  }

  // Basis vertex e_k.
  static ProbVector vertex(std::size_t d, std::size_t k) {
    if (k >= d) throw IndexError("ProbVector::vertex: index out of range");
    std::vector<double> v(d, 0.0);
    v[k] = 1.0;
    return ProbVector(std::move(v));
  }

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const { return entries_; }
  const std::vector<double>& vec() const { return entries_; }

 private:
  std::vector<double> entries_;
};

// Mixes coordinates i and j (0-based):
//   (v_i, v_j) -> (t v_i + (1-t) v_j, (1-t) v_i + t v_j).
struct TTransform {
  std::size_t i = 0;
  std::size_t j = 1;
  double t = 1.0;

  void apply(std::span<double> v) const {
    const double vi = v[i];
    const double vj = v[j];
    v[i] = t * vi + (1.0 - t) * vj;
    v[j] = (1.0 - t) * vi + t * vj;
  }
};

inline ProbVector sorted_desc(const ProbVector& x) {
  std::vector<double> v = x.vec();
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return ProbVector(std::move(v));
}

// Sum of the d - l + 1 smallest entries, i.e. entries l..d (1-based) of the
// sorted vector. tail_sum(x, 1) == 1.
inline double tail_sum(const ProbVector& x, std::size_t l) {
  if (l < 1 || l > x.size()) {
    throw IndexError("tail_sum: l = " + std::to_string(l) + " outside [1, " +
                     std::to_string(x.size()) + "]");
  }
  const ProbVector s = sorted_desc(x);
  // Summing from the small end keeps rounding low for long tails.
  double total = 0.0;
  for (std::size_t k = s.size(); k-- > l - 1;) total += s[k];
  return total;
}

// True iff x is majorized by y (x ≺ y): every leading partial sum of sorted x
// is at most the matching partial sum of sorted y, up to tol::slack.
inline bool majorizes(const ProbVector& y, const ProbVector& x) {
  if (x.size() != y.size()) {
    throw DimensionError("majorizes: dimensions " + std::to_string(y.size()) + " and " +
                         std::to_string(x.size()) + " differ");
  }
  const ProbVector xs = sorted_desc(x);
  const ProbVector ys = sorted_desc(y);
  double px = 0.0;
  double py = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    px += xs[k];
    py += ys[k];
    if (px > py + tol::slack) return false;
  }
  return true;
}

// Decomposes the relation x ≺ y (both sorted descending) into at most d - 1
// T-transforms. Applying the returned list back to front to y yields x.
//
// Each step takes the last index i where the running vector exceeds x and the
// first index j > i where it falls short, and moves min(v_i - x_i, x_j - v_j)
// from i to j. The running vector stays sorted and keeps majorizing x, and at
// least one of the two coordinates lands on its target.
inline std::vector<TTransform> ttransform_chain(const ProbVector& x, const ProbVector& y) {
  const std::size_t d = x.size();
  if (y.size() != d) throw DimensionError("ttransform_chain: dimension mismatch");
  for (std::size_t k = 1; k < d; ++k) {
    if (x[k] > x[k - 1] || y[k] > y[k - 1]) {
      throw PreconditionError("ttransform_chain: inputs must be sorted descending");
    }
  }
  if (!majorizes(y, x)) throw PreconditionError("ttransform_chain: x is not majorized by y");

  // Discrepancies below this are rounding left over from earlier steps.
  constexpr double kEps = 1e-14;

  std::vector<double> v = y.vec();
  std::vector<TTransform> applied;  // in the order applied to y
  for (std::size_t step = 0; step < d; ++step) {
    std::size_t i = d;
    for (std::size_t k = d; k-- > 0;) {
      if (v[k] - x[k] > kEps) {
        i = k;
        break;
      }
    }
    if (i == d) break;
    std::size_t j = d;
    for (std::size_t k = i + 1; k < d; ++k) {
      if (x[k] - v[k] > kEps) {
        j = k;
        break;
      }
    }
    if (j == d) break;
    const double delta = std::min(v[i] - x[i], x[j] - v[j]);
    // v_i > x_i >= x_j > v_j, so the gap is positive.
    const double gap = v[i] - v[j];
    const TTransform tr{i, j, std::clamp(1.0 - delta / gap, 0.0, 1.0)};
    tr.apply(v);
    // Land the binding coordinate exactly so rounding cannot re-open it.
    if (v[i] - x[i] <= kEps * 4) v[i] = x[i];
    if (x[j] - v[j] <= kEps * 4) v[j] = x[j];
    applied.push_back(tr);
  }

  for (std::size_t k = 0; k < d; ++k) {
    if (std::abs(v[k] - x[k]) > tol::slack) {
      throw PreconditionError("ttransform_chain: chain did not reach the target");
    }
  }
  std::reverse(applied.begin(), applied.end());
  return applied;
}

// Applies a chain in the convention of ttransform_chain (last element first).
inline std::vector<double> apply_chain(const std::vector<TTransform>& chain,
                                       std::vector<double> v) {
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) it->apply(v);
  return v;
}

}  // namespace cohere

#endif  // COHERE_SIMPLEX_HPP
