#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cslab/bounds.hpp"
#include "cslab/ensembles.hpp"
#include "cslab/polytope.hpp"
#include "cslab/recovery.hpp"
#include "cslab/rip.hpp"
#include "cslab/simplex.hpp"
#include "cslab/version.hpp"

namespace cslab {

using nlohmann::json;

/// 17 significant digits: enough for every double to survive a decimal
/// round trip bit-exactly.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// SensingMatrix: CSV (one metadata header row, then n rows of N decimals)
// and an equivalent JSON container.

inline std::string matrix_to_csv(const SensingMatrix& a) {
  std::ostringstream out;
  out << a.n << ',' << a.N << ',' << a.spec.to_string() << ',' << a.seed << ','
      << a.algorithm_id << '\n';
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t j = 0; j < a.N; ++j) {
      if (j) out << ',';
      out << format_g17(a.entries(i, j));
    }
    out << '\n';
  }
  return out.str();
}

inline SensingMatrix matrix_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("matrix_from_csv: empty input");

  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    return parts;
  };

  const auto head = split(line);
  if (head.size() != 5)
    throw std::invalid_argument("matrix_from_csv: header must be n,N,spec,seed,algorithm_id");
  SensingMatrix a;
  a.n = std::stoul(head[0]);
  a.N = std::stoul(head[1]);
  a.spec = EnsembleSpec::parse(head[2]);
  a.seed = std::stoull(head[3]);
  a.algorithm_id = head[4];
  a.entries = Matrix(a.n, a.N);
  for (std::size_t i = 0; i < a.n; ++i) {
    if (!std::getline(in, line))
      throw std::invalid_argument("matrix_from_csv: expected " + std::to_string(a.n) + " rows");
    const auto cells = split(line);
    if (cells.size() != a.N) throw std::invalid_argument("matrix_from_csv: wrong row width");
    for (std::size_t j = 0; j < a.N; ++j) a.entries(i, j) = std::stod(cells[j]);
  }
  return a;
}

inline json matrix_to_json(const SensingMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.N; ++j) row.push_back(a.entries(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"n", a.n},
              {"N", a.N},
              {"spec", a.spec.to_string()},
              {"seed", a.seed},
              {"algorithm_id", a.algorithm_id},
              {"entries", std::move(rows)}};
}

inline SensingMatrix matrix_from_json(const json& j) {
  SensingMatrix a;
  a.n = j.at("n").get<std::size_t>();
  a.N = j.at("N").get<std::size_t>();
  a.spec = EnsembleSpec::parse(j.at("spec").get<std::string>());
  a.seed = j.at("seed").get<std::uint64_t>();
  a.algorithm_id = j.at("algorithm_id").get<std::string>();
  a.entries = Matrix(a.n, a.N);
  const auto& rows = j.at("entries");
  if (rows.size() != a.n) throw std::invalid_argument("matrix_from_json: wrong row count");
  for (std::size_t i = 0; i < a.n; ++i) {
    if (rows[i].size() != a.N) throw std::invalid_argument("matrix_from_json: wrong row width");
    for (std::size_t j2 = 0; j2 < a.N; ++j2) a.entries(i, j2) = rows[i][j2].get<double>();
  }
  return a;
}

inline SensingMatrix load_matrix(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return matrix_from_json(json::parse(text));
  return matrix_from_csv(text);
}

// ---------------------------------------------------------------------------
// SignedSupport: "3:+,5:-" in CLI flags and JSON arrays in reports.

inline json to_json(const SignedSupport& s) {
  json idx = json::array(), sg = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    idx.push_back(s.indices[i]);
    sg.push_back(s.signs[i] > 0 ? "+" : "-");
  }
  return json{{"indices", idx}, {"signs", sg}};
}

inline SignedSupport parse_signed_support(const std::string& text) {
  SignedSupport s;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("signed support: expected idx:+ or idx:-, got '" + tok + "'");
    s.indices.push_back(std::stoi(tok.substr(0, colon)));
    const std::string sign = tok.substr(colon + 1);
    if (sign == "+")
      s.signs.push_back(1);
    else if (sign == "-")
      s.signs.push_back(-1);
    else
      throw std::invalid_argument("signed support: bad sign '" + sign + "'");
  }
  if (s.indices.empty()) throw std::invalid_argument("signed support: empty");
  return s;
}

// ---------------------------------------------------------------------------
// Report serializers.

inline json matrix_meta_json(const SensingMatrix& a) {
  return json{{"n", a.n},
              {"N", a.N},
              {"spec", a.spec.to_string()},
              {"seed", a.seed},
              {"algorithm_id", a.algorithm_id},
              {"tool_version", kVersion}};
}

inline json to_json(const RipEntry& e) {
  return json{{"m", e.m},
              {"delta", e.delta},
              {"witness_support", e.witness_support},
              {"witness_side", e.witness_side == WitnessSide::Upper ? "upper" : "lower"},
              {"method", e.exact ? "exact" : "sampled"},
              {"supports_examined", e.supports_examined}};
}

inline json to_json(const RipReport& r) {
  json entries = json::array();
  for (const auto& [m, e] : r.entries) entries.push_back(to_json(e));
  return json{{"n", r.n},
              {"N", r.N},
              {"spec", r.spec},
              {"seed", r.seed},
              {"algorithm_id", r.algorithm_id},
              {"tool_version", kVersion},
              {"entries", std::move(entries)}};
}

inline json to_json(const ChaosStats& c) {
  return json{{"m", c.m},          {"A_m", c.a_m},
              {"B_m", c.b_m},      {"C_m", c.c_m},
              {"witness_A", c.witness_a}, {"witness_B", c.witness_b}};
}

inline json to_json(const ConditionReport& c) {
  return json{{"h1_psi_estimate", c.h1_psi_estimate},
              {"h1_ensemble_level", c.h1_ensemble_level},
              {"h1_directions", c.h1_directions},
              {"h1_samples_per_direction", c.h1_samples_per_direction},
              {"h1_r", c.h1_r},
              {"h2_max_deviation", c.h2_max_deviation},
              {"h2_pass", c.h2_pass},
              {"h2_threshold", kH2Threshold},
              {"h2_columns", c.h2_columns}};
}

inline json to_json(const LpSolution& s) {
  return json{{"status", to_string(s.status)},
              {"objective", s.objective},
              {"iterations", s.iterations},
              {"max_primal_residual", s.max_primal_residual},
              {"x", s.x}};
}

/// Self-describing dump of an LP in standard form, for debugging.
inline json to_json(const LinearProgram& lp) {
  json rows = json::array();
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < lp.cols(); ++j) row.push_back(lp.constraints(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"form", "min c.x subject to M x = b, x >= 0"},
              {"rows", lp.rows()},
              {"cols", lp.cols()},
              {"M", std::move(rows)},
              {"b", lp.rhs},
              {"c", lp.objective},
              {"labels", lp.labels}};
}

inline json to_json(const RecoveryOutcome& r) {
  return json{{"success", r.success},
              {"linf_error", r.linf_error},
              {"l1_objective", r.l1_objective},
              {"l1_minimality_ok", r.l1_minimality_ok},
              {"lp_status", to_string(r.lp_status)},
              {"lp_iterations", r.lp_iterations},
              {"lp_residual", r.lp_residual},
              {"solution", r.solution}};
}

inline json to_json(const DecodeResult& r) {
  return json{{"x", r.x},
              {"residual_l1", r.residual_l1},
              {"lp_status", to_string(r.lp_status)},
              {"lp_iterations", r.lp_iterations}};
}

inline json to_json(const DualCertificate& c) {
  return json{{"gamma", c.gamma},
              {"classification", to_string(c.classification)},
              {"w", c.w},
              {"lp_status", to_string(c.lp_status)},
              {"lp_iterations", c.lp_iterations}};
}

inline json to_json(const SparseRecoveryReport& r) {
  json fails = json::array();
  for (const auto& f : r.failures)
    fails.push_back(json{{"support", to_json(f.support)},
                         {"classification", to_string(f.classification)},
                         {"gamma", f.gamma},
                         {"reason", f.reason}});
  return json{{"pass", r.pass},
              {"m", r.m},
              {"signed_supports_examined", r.signed_supports_examined},
              {"certified", r.certified},
              {"indeterminate_resolved", r.indeterminate_resolved},
              {"failures", std::move(fails)}};
}

inline json to_json(const NspReport& r) {
  json fails = json::array();
  for (const auto& f : r.failures)
    fails.push_back(json{{"support", to_json(f.support)},
                         {"min_off_l1", f.min_off_l1},
                         {"boundary", f.boundary}});
  return json{{"pass", r.pass},
              {"exhaustive", r.exhaustive},
              {"m", r.m},
              {"kernel_dim", r.kernel_dim},
              {"slices_examined", r.slices_examined},
              {"failures", std::move(fails)}};
}

inline json to_json(const FaceQueryResult& f) {
  return json{{"is_face", f.is_face},
              {"margin", f.margin},
              {"witness", f.witness},
              {"lp_status", to_string(f.lp_status)},
              {"lp_iterations", f.lp_iterations},
              {"reason", f.reason}};
}

inline json to_json(const VertexCensusReport& r) {
  json nv = json::array();
  for (const auto& s : r.non_vertices) nv.push_back(to_json(s));
  return json{{"mode", to_string(r.mode)},
              {"all_vertices", r.all_vertices},
              {"expected_count", r.expected_count},
              {"vertex_count", r.vertex_count},
              {"non_vertices", std::move(nv)}};
}

inline json to_json(const NeighborlinessReport& r) {
  json fails = json::array();
  for (const auto& s : r.failures_at_next) fails.push_back(to_json(s));
  return json{{"mode", to_string(r.mode)},
              {"m_star", r.m_star},
              {"vertex_count_full", r.vertex_count_full},
              {"failures_at_next", std::move(fails)},
              {"budget_consumed", r.budget_consumed},
              {"budget_exhausted", r.budget_exhausted},
              {"m_max_requested", r.m_max_requested}};
}

inline json to_json(const CrossCheckReport& r) {
  json j{{"m", r.m},
         {"polytope_verdict", r.polytope_verdict},
         {"recovery_verdict", r.recovery_verdict},
         {"agree", r.agree},
         {"per_support_agree", r.per_support_agree},
         {"selections_examined", r.selections_examined}};
  if (r.witness) {
    j["witness"] = to_json(*r.witness);
    j["witness_face"] = to_json(r.witness_face);
    j["witness_certificate"] = to_json(r.witness_certificate);
  }
  if (r.first_polytope_failure) j["first_polytope_failure"] = to_json(*r.first_polytope_failure);
  if (r.first_recovery_failure) j["first_recovery_failure"] = to_json(*r.first_recovery_failure);
  return j;
}

inline json to_json(const BoundConstants& k) {
  return json{{"C", k.C_big},   {"c", k.c_small},     {"c0", k.c0},
              {"c1", k.c1},     {"C0", k.C0_max},     {"theta", k.theta},
              {"theta_prime", k.theta_prime},         {"K", k.K},
              {"K_prime", k.K_prime},                 {"psi", k.psi},
              {"r", k.r},       {"log_base", "e"}};
}

inline BoundConstants bound_constants_from_json(const json& j) {
  BoundConstants k;
  if (j.contains("C")) k.C_big = j["C"].get<double>();
  if (j.contains("c")) k.c_small = j["c"].get<double>();
  if (j.contains("c0")) k.c0 = j["c0"].get<double>();
  if (j.contains("c1")) k.c1 = j["c1"].get<double>();
  if (j.contains("C0")) k.C0_max = j["C0"].get<double>();
  if (j.contains("theta")) k.theta = j["theta"].get<double>();
  if (j.contains("theta_prime")) k.theta_prime = j["theta_prime"].get<double>();
  if (j.contains("K")) k.K = j["K"].get<double>();
  if (j.contains("K_prime")) k.K_prime = j["K_prime"].get<double>();
  if (j.contains("psi")) k.psi = j["psi"].get<double>();
  if (j.contains("r")) k.r = j["r"].get<double>();
  return k;
}

} // namespace cslab
