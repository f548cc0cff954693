#ifndef COHERE_MEASURES_HPP
#define COHERE_MEASURES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cohere/errors.hpp"
#include "cohere/sampling.hpp"
#include "cohere/simplex.hpp"
#include "cohere/states.hpp"
#include "cohere/tolerances.hpp"

namespace cohere {

// A function f on the simplex that generates a coherence measure
// C_f(|ψ><ψ|) = f(|ψ_1|^2, ..., |ψ_d|^2) when it vanishes on the vertices,
// is permutation invariant and is concave.
//
// fixed_dim, when set, restricts f to one dimension.
struct CoherenceFunctional {
  std::string name;
  std::function<double(const ProbVector&)> evaluate;
  std::optional<std::size_t> fixed_dim;

  double operator()(const ProbVector& x) const {
    if (fixed_dim && *fixed_dim != x.size()) {
      throw DimensionError(name + ": defined for dimension " + std::to_string(*fixed_dim) +
                           ", got " + std::to_string(x.size()));
    }
    return evaluate(x);
  }
};

namespace builtin {

// Σ -x log2 x with 0 log 0 = 0. Equals the relative entropy of coherence on
// pure states.
inline CoherenceFunctional shannon() {
  return {"shannon",
          [](const ProbVector& x) {
            double h = 0.0;
            for (double e : x.entries()) {
              if (e > 0.0) h -= e * std::log2(e);
            }
            return std::max(0.0, h);
          },
          std::nullopt};
}

// (Σ sqrt(x_i))^2 - 1, the l1-norm of coherence on pure states.
inline CoherenceFunctional l1() {
  return {"l1",
          [](const ProbVector& x) {
            double s = 0.0;
            for (double e : x.entries()) s += std::sqrt(e);
            return std::max(0.0, s * s - 1.0);
          },
          std::nullopt};
}

// (1 / (1 - α)) log2 Σ x_i^α for 0 < α < 1.
inline CoherenceFunctional alpha(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw ParameterError("alpha entropy requires 0 < alpha < 1, got " + std::to_string(a));
  }
  return {"alpha(" + std::to_string(a) + ")",
          [a](const ProbVector& x) {
            double s = 0.0;
            for (double e : x.entries()) {
              if (e > 0.0) s += std::pow(e, a);
            }
            return std::max(0.0, std::log2(s) / (1.0 - a));
          },
          std::nullopt};
}

// Ky Fan tail f_l(x) = Σ_{i=l}^d x_i^↓ (1-based l). l = 1 is the constant 1,
// which does not vanish on vertices, so l >= 2 is required. For d < l the
// tail is empty and f_l = 0.
inline CoherenceFunctional kyfan(std::size_t l) {
  if (l < 2) throw ParameterError("kyfan requires l >= 2, got " + std::to_string(l));
  return {"kyfan(" + std::to_string(l) + ")",
          [l](const ProbVector& x) { return l > x.size() ? 0.0 : tail_sum(x, l); },
          std::nullopt};
}

}  // namespace builtin

// Looks a built-in up by name: shannon, l1, alpha (uses param), kyfan (uses
// param as l).
inline CoherenceFunctional make_builtin(const std::string& name, double param = 0.0) {
  if (name == "shannon") return builtin::shannon();
  if (name == "l1") return builtin::l1();
  if (name == "alpha") return builtin::alpha(param);
  if (name == "kyfan") {
    if (!(param >= 2.0) || param != std::floor(param)) {
      throw ParameterError("kyfan requires an integer l >= 2");
    }
    return builtin::kyfan(static_cast<std::size_t>(param));
  }
  throw ParameterError("unknown functional '" + name + "'");
}

// C_f(|ψ><ψ|) = f(|ψ_1|^2, ..., |ψ_d|^2).
inline double coherence_pure(const CoherenceFunctional& f, const PureState& psi) {
  return f(squared_amplitudes(psi));
}

struct ValidationReport {
  double max_vertex = 0.0;         // max |f(e_k)|
  double max_permutation = 0.0;    // max |f(Px) - f(x)|
  double max_concavity = 0.0;      // max (λf(x) + (1-λ)f(y) - f(λx + (1-λ)y))_+
  std::optional<ProbVector> permutation_witness;
  std::optional<std::pair<ProbVector, ProbVector>> concavity_witness;
  bool passes = false;
};

// Sampled check of the vertex, permutation and concavity conditions. Sample
// points mix interior, face and vertex draws.
inline ValidationReport validate_functional(const CoherenceFunctional& f, std::size_t d,
                                            std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("validate_functional: samples must be >= 1");
  if (d < 1) throw DimensionError("validate_functional: dimension must be >= 1");
  ValidationReport rep;
  for (std::size_t k = 0; k < d; ++k) {
    rep.max_vertex = std::max(rep.max_vertex, std::abs(f(ProbVector::vertex(d, k))));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  auto draw = [&](std::size_t s) {
    switch (s % 4) {
      case 0: return random_prob_vector(d, rng);
      case 1: return random_prob_vector(d, rng, 0.5);
      case 2: return ProbVector::vertex(d, pick(rng));
      default: return random_prob_vector(d, rng, 0.2);
    }
  };

  for (std::size_t s = 0; s < samples; ++s) {
    const ProbVector x = draw(s);
    const double fx = f(x);
    const double dp = std::abs(f(permuted(x, random_permutation(d, rng))) - fx);
    if (dp > rep.max_permutation) {
      rep.max_permutation = dp;
      rep.permutation_witness = x;
    }

    const ProbVector y = draw(s / 4 + 1);
    const double lam = unit(rng);
    std::vector<double> mid(d);
    for (std::size_t i = 0; i < d; ++i) mid[i] = lam * x[i] + (1.0 - lam) * y[i];
    const double gap = lam * fx + (1.0 - lam) * f(y) - f(ProbVector(std::move(mid)));
    if (gap > rep.max_concavity) {
      rep.max_concavity = gap;
      rep.concavity_witness.emplace(x, y);
    }
  }
  rep.passes = rep.max_vertex <= tol::functional && rep.max_permutation <= tol::functional &&
               rep.max_concavity <= tol::functional;
  return rep;
}

using PureMeasure = std::function<double(const PureState&)>;

// Recovers the generating function of a pure-state measure:
// f(x) = μ(Σ sqrt(x_i) |i>).
inline CoherenceFunctional extract_functional(PureMeasure mu, std::size_t d,
                                              std::string name = "extracted") {
  return {std::move(name),
          [mu = std::move(mu)](const ProbVector& x) { return mu(PureState::from_probabilities(x)); },
          d};
}

}  // namespace cohere

#endif  // COHERE_MEASURES_HPP
