#ifndef COHERE_CLI_HPP
#define COHERE_CLI_HPP

#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cohere/channels.hpp"
#include "cohere/convex_roof.hpp"
#include "cohere/conversion.hpp"
#include "cohere/errors.hpp"
#include "cohere/io.hpp"
#include "cohere/measures.hpp"
#include "cohere/states.hpp"

// Subcommands of the `cohere` tool. Each returns the process exit code:
// 0 success, 1 validation failure, 2 usage error.
namespace cohere::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsageError = 2 };

struct FunctionalArgs {
  std::string name = "shannon";
  double alpha = 0.5;
  std::size_t l = 2;

  CoherenceFunctional make() const {
    if (name == "alpha") return builtin::alpha(alpha);
    if (name == "kyfan") return builtin::kyfan(l);
    return make_builtin(name);
  }
};

namespace detail {

inline std::string fixed12(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(12) << v;
  return s.str();
}

// Runs a command body, mapping library errors to exit code 1.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed file: " << e.what() << '\n';
    return kValidationFailure;
  }
}

}  // namespace detail

struct MeasureArgs {
  std::string state_path;
  FunctionalArgs functional;
};

inline int cmd_measure(const MeasureArgs& args, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const CoherenceFunctional f = args.functional.make();
    const PureState psi = io::state_from_json(io::load(args.state_path), &err);
    out << detail::fixed12(coherence_pure(f, psi)) << '\n';
    return kOk;
  });
}

struct ConvertArgs {
  std::string source_path;
  std::string target_path;
  std::optional<std::string> protocol_path;
  std::size_t source_copies = 1;
  std::size_t target_copies = 1;
  std::size_t max_target_copies = 0;  // 0: no table
};

inline int cmd_convert(const ConvertArgs& args, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (args.source_copies < 1 || args.target_copies < 1) {
      throw ParameterError("copy counts must be >= 1");
    }
    const PureState psi0 = io::state_from_json(io::load(args.source_path), &err);
    const PureState phi0 = io::state_from_json(io::load(args.target_path), &err);
    const PureState psi = args.source_copies == 1 ? psi0 : tensor_power(psi0, args.source_copies);
    const bool shortcut = support_shortcut(psi, phi0, args.target_copies);
    const PureState phi = args.target_copies == 1 ? phi0 : tensor_power(phi0, args.target_copies);
    const double p = shortcut ? 0.0 : conversion_probability(psi, phi);
    out << detail::fixed12(p) << '\n';
    if (shortcut) out << "support shortcut: n_psi < n_phi^2, probability is 0\n";

    for (std::size_t n = 1; n <= args.max_target_copies; ++n) {
      const bool sc = support_shortcut(psi, phi0, n);
      out << "copies " << n << ": " << detail::fixed12(multicopy_probability(psi, phi0, n))
          << (sc ? " (support shortcut)" : "") << '\n';
    }

    if (args.protocol_path) {
      const Protocol proto = optimal_protocol(psi, phi);
      nlohmann::json j = io::protocol_to_json(proto);
      const ProtocolReport rep = verify_protocol(proto, psi, phi);
      j["verification"] = io::report_to_json(rep);
      io::save(*args.protocol_path, j);
      out << "protocol: " << proto.stages.size() << " stages written to " << *args.protocol_path
          << '\n';
    }
    return kOk;
  });
}

namespace detail {

inline bool report_channel(const KrausSet& k, std::ostream& out) {
  const CompletenessReport comp = is_complete(k);
  const IncoherenceReport inc = is_incoherent(k);
  out << "completeness residual: " << std::scientific << std::setprecision(3) << comp.residual
      << std::defaultfloat << (comp.complete ? " (pass)" : " (FAIL)") << '\n';
  out << "incoherent: " << (inc.incoherent ? "yes" : "no") << '\n';
  if (inc.witness) {
    // 1-based indices for people reading the report.
    out << "witness: operator " << inc.witness->op + 1 << ", column " << inc.witness->column + 1
        << ", rows " << inc.witness->row_a + 1 << " and " << inc.witness->row_b + 1 << '\n';
  }
  return comp.complete && inc.incoherent;
}

}  // namespace detail

// Accepts a channel file or a protocol file (checked stage by stage).
inline int cmd_verify_channel(const std::string& path, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const nlohmann::json j = io::load(path);
    if (!j.contains("stages")) {
      return detail::report_channel(io::channel_from_json(j, false), out) ? kOk : kValidationFailure;
    }
    if (!j["stages"].is_array()) throw ParseError("\"stages\" must be a list");
    bool ok = true;
    std::size_t n = 0;
    for (const auto& s : j["stages"]) {
      out << "stage " << ++n << ":\n";
      ok = detail::report_channel(io::channel_from_json(s, false), out) && ok;
    }
    return ok ? kOk : kValidationFailure;
  });
}

inline int cmd_ladder(const std::string& source_path, const std::string& target_path,
                      std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const PureState psi = io::state_from_json(io::load(source_path), &err);
    const PureState phi = io::state_from_json(io::load(target_path), &err);
    const ConversionLadder ladder = build_ladder(psi, phi);
    out << "breakpoints:";
    for (std::size_t j = 0; j < ladder.breakpoints().size(); ++j) {
      out << " l_" << j + 1 << "=" << ladder.breakpoints()[j];
    }
    out << "\nratios:";
    for (std::size_t j = 0; j < ladder.ratios().size(); ++j) {
      out << " r_" << j + 1 << "=" << detail::fixed12(ladder.ratios()[j]);
    }
    out << "\ngamma:";
    for (std::size_t i = 0; i < ladder.dim(); ++i) out << ' ' << detail::fixed12(ladder.gamma()[i].real());
    out << "\nsuccess probability: " << detail::fixed12(ladder.success_probability()) << '\n';
    return kOk;
  });
}

struct RoofArgs {
  std::string density_path;
  FunctionalArgs functional;
  std::size_t restarts = 8;
  std::size_t ensemble_size = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> ensemble_path;
};

inline int cmd_roof(const RoofArgs& args, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const CoherenceFunctional f = args.functional.make();
    const DensityMatrix rho = io::density_from_json(io::load(args.density_path));
    RoofOptions opt;
    opt.restarts = args.restarts;
    opt.ensemble_size = args.ensemble_size;
    opt.seed = args.seed;
    const RoofResult res = convex_roof_upper(f, rho, opt);
    out << "upper bound: " << detail::fixed12(res.value) << '\n';
    if (args.ensemble_path) {
      io::save(*args.ensemble_path, io::roof_to_json(res));
      out << "ensemble: " << res.ensemble.size() << " states written to " << *args.ensemble_path
          << '\n';
    }
    return kOk;
  });
}

struct DemoArgs {
  bool json = false;
  double tolerance = 1e-12;
};

struct DemoCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  bool pass = false;
};

// The two-copy example and the facts it rests on.
inline std::vector<DemoCheck> two_copy_checks(double tolerance) {
  const double h = 1.0 / std::sqrt(2.0);
  const PureState psi{h, h, 0.0};
  const PureState phi = PureState::maximally_coherent(3);
  std::vector<DemoCheck> checks;
  auto add = [&](std::string name, double expected, double actual) {
    checks.push_back({std::move(name), expected, actual, std::abs(actual - expected) <= tolerance});
  };

  const PureState psi2 = tensor_power(psi, 2);
  std::size_t halves = 0;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < psi2.dim(); ++i) {
    if (std::abs(psi2[i] - cplx(0.5, 0.0)) <= tolerance) ++halves;
    if (std::abs(psi2[i]) <= tolerance) ++zeros;
  }
  add("tensor_power(psi, 2): amplitude count", 9, static_cast<double>(psi2.dim()));
  add("tensor_power(psi, 2): amplitudes equal to 1/2", 4, static_cast<double>(halves));
  add("tensor_power(psi, 2): zero amplitudes", 5, static_cast<double>(zeros));
  add("support_size(psi)", 2, static_cast<double>(support_size(psi)));
  add("support_size(phi)", 3, static_cast<double>(support_size(phi)));
  add("support_size(psi^(x)2)", 4, static_cast<double>(support_size(psi2)));

  // Diagonal two-outcome operation mixing x and y with weight lambda.
  {
    const std::vector<double> x{0.5, 0.3, 0.2};
    const std::vector<double> y{0.1, 0.6, 0.3};
    const double lam = 0.4;
    CMatrix k1 = CMatrix::Zero(3, 3);
    CMatrix k2 = CMatrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      const double mix = lam * x[i] + (1 - lam) * y[i];
      k1(i, i) = std::sqrt(lam * x[i] / mix);
      k2(i, i) = std::sqrt((1 - lam) * y[i] / mix);
    }
    const KrausSet pair({k1, k2});
    add("diagonal pair is incoherent", 1, is_incoherent(pair).incoherent ? 1 : 0);
    add("diagonal pair is complete", 1, is_complete(pair).complete ? 1 : 0);
  }

  add("P(psi -> phi)", 0.0, conversion_probability(psi, phi));
  add("P(psi^(x)2 -> phi)", 1.0, source_copies_probability(psi, 2, phi));
  add("support shortcut n_psi < n_phi^2", 1, support_shortcut(psi, phi, 2) ? 1 : 0);
  add("P(psi -> phi^(x)2)", 0.0, multicopy_probability(psi, phi, 2));
  double m_max = 0.0;
  for (std::size_t n = 1; n <= 3; ++n) m_max = std::max(m_max, multicopy_probability(psi, phi, n));
  add("max_n P(psi -> phi^(x)n), n <= 3, equals P(psi -> phi)", conversion_probability(psi, phi),
      m_max);
  const Protocol proto = optimal_protocol(psi, phi);
  add("optimal protocol for psi -> phi is empty", 1, proto.empty() ? 1 : 0);
  add("optimal protocol success probability", 0.0, proto.success_probability);
  return checks;
}

inline int cmd_paper_demo(const DemoArgs& args, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const std::vector<DemoCheck> checks = two_copy_checks(args.tolerance);
    bool all = true;
    for (const auto& c : checks) all = all && c.pass;
    if (args.json) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
      }
      out << nlohmann::json{{"tolerance", args.tolerance}, {"checks", arr}, {"all_pass", all}}.dump(2)
          << '\n';
    } else {
      for (const auto& c : checks) {
        out << (c.pass ? "PASS  " : "FAIL  ") << c.name << ": expected " << c.expected << ", got "
            << c.actual << '\n';
      }
      out << (all ? "all checks passed" : "some checks FAILED") << '\n';
    }
    return all ? kOk : kValidationFailure;
  });
}

}  // namespace cohere::cli

#endif  // COHERE_CLI_HPP
