#ifndef COHERE_IO_HPP
#define COHERE_IO_HPP

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cohere/channels.hpp"
#include "cohere/convex_roof.hpp"
#include "cohere/conversion.hpp"
#include "cohere/errors.hpp"
#include "cohere/states.hpp"
#include "cohere/tolerances.hpp"

// JSON file formats. Complex numbers are [re, im] pairs; matrices are lists
// of rows. Doubles are written in shortest round-trip form, so a write-read
// cycle reproduces every value bit for bit.
//
//   state:    {"dim": d, "amplitudes": [[re, im], ...]}
//   channel:  {"dim": d, "operators": [matrix, ...], "labels": [text, ...]}
//   density:  {"dim": d, "entries": matrix}
//   protocol: {"dim": d, "success_label": text, "success_probability": p,
//              "stages": [channel, ...], "verification": {...}}
namespace cohere::io {

using json = nlohmann::json;

namespace detail {

inline json encode(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx decode_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json encode(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(encode(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix decode_matrix(const json& j, std::size_t d) {
  if (!j.is_array() || j.size() != d) throw ParseError("matrix must have dim rows");
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != d) throw ParseError("matrix row must have dim entries");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = decode_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

inline std::size_t read_dim(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer() ||
      j["dim"].get<long long>() < 1) {
    throw ParseError("missing or invalid \"dim\"");
  }
  return j["dim"].get<std::size_t>();
}

}  // namespace detail

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

inline void save(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << '\n';
}

inline json state_to_json(const PureState& psi) {
  json amps = json::array();
  for (std::size_t i = 0; i < psi.dim(); ++i) amps.push_back(detail::encode(psi[i]));
  return {{"dim", psi.dim()}, {"amplitudes", std::move(amps)}};
}

// Reads a state file. A squared norm off by at most tol::ingest is rescaled
// with a note on `warn`; anything further off is rejected.
inline PureState state_from_json(const json& j, std::ostream* warn = nullptr) {
  const std::size_t d = detail::read_dim(j);
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array() || j["amplitudes"].size() != d) {
    throw ParseError("\"amplitudes\" must list dim entries");
  }
  CVector v(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    v(static_cast<Eigen::Index>(i)) = detail::decode_complex(j["amplitudes"][i]);
  }
  const double n2 = v.squaredNorm();
  if (std::abs(n2 - 1.0) > tol::ingest) {
    throw NormalizationError("state squared norm " + std::to_string(n2) + " is not 1");
  }
  if (std::abs(n2 - 1.0) > tol::slack) {
    if (warn) *warn << "warning: renormalizing state with squared norm " << n2 << '\n';
    return PureState::normalized(v);
  }
  return PureState(std::move(v));
}

inline json channel_to_json(const KrausSet& k) {
  json ops = json::array();
  for (const auto& m : k.operators()) ops.push_back(detail::encode(m));
  return {{"dim", k.dim()}, {"operators", std::move(ops)}, {"labels", k.labels()}};
}

// Reads a channel file; completeness must hold within tol::ingest.
inline KrausSet channel_from_json(const json& j, bool require_complete = true) {
  const std::size_t d = detail::read_dim(j);
  if (!j.contains("operators") || !j["operators"].is_array() || j["operators"].empty()) {
    throw ParseError("\"operators\" must be a nonempty list");
  }
  std::vector<CMatrix> ops;
  for (const auto& m : j["operators"]) ops.push_back(detail::decode_matrix(m, d));
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) throw ParseError("\"labels\" must be a list");
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) throw ParseError("labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }
  KrausSet k(std::move(ops), std::move(labels));
  if (require_complete) {
    const auto rep = is_complete(k);
    if (rep.residual > tol::ingest) {
      throw CompletenessError("channel incomplete, residual " + std::to_string(rep.residual));
    }
  }
  return k;
}

inline json density_to_json(const DensityMatrix& rho) {
  return {{"dim", rho.dim()}, {"entries", detail::encode(rho.matrix())}};
}

inline DensityMatrix density_from_json(const json& j) {
  const std::size_t d = detail::read_dim(j);
  if (!j.contains("entries")) throw ParseError("missing \"entries\"");
  return DensityMatrix(detail::decode_matrix(j["entries"], d));
}

inline json report_to_json(const ProtocolReport& rep) {
  json fids = json::array();
  for (std::size_t n = 0; n < rep.branches.size(); ++n) {
    fids.push_back({{"label", rep.branches[n].label},
                    {"probability", rep.branches[n].probability},
                    {"fidelity", rep.fidelities[n]}});
  }
  return {{"max_completeness_residual", rep.max_completeness_residual},
          {"all_incoherent", rep.all_incoherent},
          {"composed_success_probability", rep.success_probability},
          {"total_probability", rep.total_probability},
          {"min_success_fidelity", rep.min_success_fidelity},
          {"branches", std::move(fids)}};
}

inline json protocol_to_json(const Protocol& p) {
  json stages = json::array();
  for (const auto& s : p.stages) stages.push_back(channel_to_json(s));
  return {{"dim", p.dim},
          {"success_label", p.success_label},
          {"success_probability", p.success_probability},
          {"stages", std::move(stages)}};
}

inline std::vector<KrausSet> protocol_stages_from_json(const json& j) {
  if (!j.contains("stages") || !j["stages"].is_array()) throw ParseError("missing \"stages\"");
  std::vector<KrausSet> out;
  for (const auto& s : j["stages"]) out.push_back(channel_from_json(s));
  return out;
}

inline json roof_to_json(const RoofResult& r) {
  json ens = json::array();
  for (const auto& m : r.ensemble) {
    ens.push_back({{"weight", m.weight}, {"state", state_to_json(m.state)}});
  }
  return {{"value", r.value}, {"quality", r.quality}, {"ensemble", std::move(ens)}};
}

}  // namespace cohere::io

#endif  // COHERE_IO_HPP
