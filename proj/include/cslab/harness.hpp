#pragma once

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cslab/io.hpp"

namespace cslab {

struct Budgets {
  double supports = kDefaultSupportBudget;        // plain support scans
  double signed_supports = kDefaultSignedBudget;  // signed-support scans
};

struct ExperimentConfig {
  EnsembleSpec ensemble = EnsembleSpec::gaussian();
  std::size_t n = 50;
  std::size_t N = 100;
  std::vector<int> m_grid = {1, 5, 10, 15, 20, 25};
  int trials = 200;
  std::uint64_t seed = 42;
  Budgets budgets;
  std::string output;              // CSV path; empty = stdout
  BoundConstants constants;
  bool gaussian_magnitudes = false;  // default +-1 sparse test vectors
  int delta_samples = 25;            // sampled-delta supports per trial

  void validate() const {
    ensemble.validate();
    if (m_grid.empty()) throw std::invalid_argument("ExperimentConfig: empty m_grid");
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    if (budgets.supports <= 0 || budgets.signed_supports <= 0)
      throw std::invalid_argument("ExperimentConfig: budgets must be positive");
  }
};

inline json to_json(const ExperimentConfig& c) {
  return json{{"ensemble", c.ensemble.to_string()},
              {"n", c.n},
              {"N", c.N},
              {"m_grid", c.m_grid},
              {"trials", c.trials},
              {"seed", c.seed},
              {"budgets", {{"supports", c.budgets.supports},
                           {"signed_supports", c.budgets.signed_supports}}},
              {"output", c.output},
              {"constants", to_json(c.constants)},
              {"gaussian_magnitudes", c.gaussian_magnitudes},
              {"delta_samples", c.delta_samples}};
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("ensemble")) c.ensemble = EnsembleSpec::parse(j["ensemble"].get<std::string>());
  if (j.contains("n")) c.n = j["n"].get<std::size_t>();
  if (j.contains("N")) c.N = j["N"].get<std::size_t>();
  if (j.contains("m_grid")) c.m_grid = j["m_grid"].get<std::vector<int>>();
  if (j.contains("trials")) c.trials = j["trials"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("budgets")) {
    const auto& b = j["budgets"];
    if (b.contains("supports")) c.budgets.supports = b["supports"].get<double>();
    if (b.contains("signed_supports"))
      c.budgets.signed_supports = b["signed_supports"].get<double>();
  }
  if (j.contains("output")) c.output = j["output"].get<std::string>();
  if (j.contains("constants")) c.constants = bound_constants_from_json(j["constants"]);
  if (j.contains("gaussian_magnitudes"))
    c.gaussian_magnitudes = j["gaussian_magnitudes"].get<bool>();
  if (j.contains("delta_samples")) c.delta_samples = j["delta_samples"].get<int>();
  return c;
}

struct PhaseRow {
  int m = 0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_delta_sampled = 0.0;
  std::uint64_t seed = 0;
};

struct PhaseDiagram {
  ExperimentConfig config;
  std::vector<PhaseRow> rows;
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  RngStream s(seed, a * 0x1000193ull + b);
  return s.next_u64();
}

} // namespace detail

/// For each m in the grid, `trials` independent (matrix, z) draws: a fresh
/// matrix from the configured ensemble and an m-sparse test vector with
/// +-1 entries (or Gaussian magnitudes) on a uniform random support.
/// Records the exact-recovery success frequency and a sampled delta_m.
inline PhaseDiagram run_phase_transition(const ExperimentConfig& config) {
  config.validate();
  PhaseDiagram diagram;
  diagram.config = config;
  for (const int m : config.m_grid) {
    if (m < 0 || static_cast<std::size_t>(m) > config.N)
      throw std::invalid_argument("run_phase_transition: m out of range");
    PhaseRow row;
    row.m = m;
    row.trials = config.trials;
    row.seed = config.seed;
    double delta_acc = 0.0;
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t mseed =
          detail::derive_seed(config.seed, static_cast<std::uint64_t>(m), t);
      const SensingMatrix a = generate_matrix(config.ensemble, config.n, config.N, mseed);
      RngStream zstream(mseed, 0xFEED);
      Vector z(config.N, 0.0);
      if (m > 0) {
        const auto support = sample_support(zstream, static_cast<int>(config.N), m);
        for (int idx : support) {
          const double mag =
              config.gaussian_magnitudes ? sample_gaussian(zstream) : sample_rademacher(zstream);
          z[static_cast<std::size_t>(idx) - 1] = mag;
        }
      }
      row.successes += exact_recovery_trial(a, z).success ? 1 : 0;
      if (m > 0 && config.delta_samples > 0) {
        RngStream dstream(mseed, 0xDE17A);
        delta_acc += isometry_constant_sampled(a, m, config.delta_samples, dstream).delta;
      }
    }
    row.success_rate = static_cast<double>(row.successes) / config.trials;
    row.mean_delta_sampled = m > 0 ? delta_acc / config.trials : 0.0;
    diagram.rows.push_back(row);
  }
  return diagram;
}

/// CSV with the full metadata header; identical config reproduces the
/// file byte for byte within one build.
inline std::string phase_to_csv(const PhaseDiagram& d) {
  std::ostringstream out;
  out << "# cslab phase v" << kVersion << '\n';
  out << "# spec=" << d.config.ensemble.to_string() << " n=" << d.config.n
      << " N=" << d.config.N << " trials=" << d.config.trials << " seed=" << d.config.seed
      << " algorithm_id=" << RngStream::kAlgorithmId
      << " magnitudes=" << (d.config.gaussian_magnitudes ? "gaussian" : "rademacher")
      << " delta_samples=" << d.config.delta_samples << '\n';
  out << "# constants=" << to_json(d.config.constants).dump() << '\n';
  out << "m,trials,successes,success_rate,mean_delta_sampled,seed\n";
  for (const auto& r : d.rows)
    out << r.m << ',' << r.trials << ',' << r.successes << ',' << format_g17(r.success_rate)
        << ',' << format_g17(r.mean_delta_sampled) << ',' << r.seed << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Self-test battery.

struct SelftestOptions {
  std::string tier = "quick";     // quick | full
  double cert_threshold = 1.0;    // fault-injection hook; 1.0 is the true value
};

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelftestReport {
  std::string tier;
  bool pass = false;
  double elapsed_seconds = 0.0;
  std::vector<SelftestCheck> checks;
};

inline json to_json(const SelftestReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return json{{"tier", r.tier},
              {"pass", r.pass},
              {"elapsed_seconds", r.elapsed_seconds},
              {"tool_version", kVersion},
              {"checks", std::move(checks)}};
}

namespace detail {

inline double ks_stat(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline SelftestCheck check_sampler_ks() {
  SelftestCheck chk{"sampler-ks", true, ""};
  const std::size_t n = 10000;
  const double crit = std::sqrt(-0.5 * std::log(0.0005)) / std::sqrt(static_cast<double>(n));
  std::ostringstream detail;

  auto run = [&](const char* name, std::uint64_t seed, auto sampler, auto cdf) {
    RngStream s(seed, 0);
    std::vector<double> v(n);
    for (auto& x : v) x = sampler(s);
    const double d = ks_stat(std::move(v), cdf);
    detail << name << "=" << format_g17(d) << " ";
    if (d >= crit) chk.pass = false;
  };
  run("uniform", 210, [](RngStream& s) { return s.uniform01(); },
      [](double x) { return std::clamp(x, 0.0, 1.0); });
  run("gaussian", 211, [](RngStream& s) { return sample_gaussian(s); },
      [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
  run("weibull_r1", 212, [](RngStream& s) { return sample_symmetric_weibull(s, 1.0); },
      [](double t) {
        const double h = 0.5 * std::exp(-std::abs(t));
        return t >= 0.0 ? 1.0 - h : h;
      });
  run("exponential", 213, [](RngStream& s) { return sample_exponential(s, 1.0); },
      [](double t) { return t >= 0.0 ? 1.0 - std::exp(-t) : 0.0; });
  chk.detail = detail.str() + "critical=" + format_g17(crit);
  return chk;
}

inline SelftestCheck check_halfsplit() {
  SelftestCheck chk{"halfsplit-identity", true, ""};
  RngStream stream(220, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int k = 2 + static_cast<int>(stream.uniform01() * 5);
    std::vector<Vector> xs(k, Vector(4));
    double total = 0.0;
    for (auto& x : xs) {
      for (auto& v : x) v = sample_gaussian(stream);
      total += dot(x, x);
    }
    const double res = halfsplit_identity_check(xs);
    worst = std::max(worst, res / total);
    if (res > 1e-10 * total) chk.pass = false;
  }
  chk.detail = "worst_relative_residual=" + format_g17(worst);
  return chk;
}

inline SelftestCheck check_rip_identities(int instances) {
  SelftestCheck chk{"rip-identities", true, ""};
  for (int i = 0; i < instances; ++i) {
    const auto a = generate_matrix(EnsembleSpec::gaussian(), 10, 14, 3000 + i);
    const double d1 = isometry_constant_exact(a, 1).delta;
    if (std::abs(d1 - check_h2(a).h2_max_deviation) > 1e-12) {
      chk.pass = false;
      chk.detail = "delta_1 identity failed on seed " + std::to_string(3000 + i);
      return chk;
    }
    double prev = 0.0;
    for (int m = 1; m <= 3; ++m) {
      const double d = isometry_constant_exact(a, m).delta;
      if (d < prev - 1e-14) {
        chk.pass = false;
        chk.detail = "monotonicity failed on seed " + std::to_string(3000 + i);
        return chk;
      }
      prev = d;
      if (!rip_decomposition_check(a, m).holds) {
        chk.pass = false;
        chk.detail = "decomposition failed on seed " + std::to_string(3000 + i);
        return chk;
      }
    }
  }
  chk.detail = std::to_string(instances) + " instances, m <= 3";
  return chk;
}

inline SelftestCheck check_chaos(int instances) {
  SelftestCheck chk{"chaos-inequalities", true, ""};
  for (int i = 0; i < instances; ++i) {
    const auto a = generate_matrix(EnsembleSpec::gaussian(), 10, 14, 3100 + i);
    for (int m = 1; m <= 3; ++m) {
      const auto st = chaos_statistics(a, m);
      if (m == 1 && st.b_m != 0.0) chk.pass = false;
      if (std::abs(st.a_m * st.a_m - st.b_m * st.b_m) > st.c_m * st.c_m + 1e-9) chk.pass = false;
      RngStream stream(3100 + i, m);
      if (sampled_bm_squared(a, m, 1000, stream) > st.b_m * st.b_m + 1e-9) chk.pass = false;
    }
    if (!chk.pass) {
      chk.detail = "failed on seed " + std::to_string(3100 + i);
      return chk;
    }
  }
  chk.detail = std::to_string(instances) + " instances, m <= 3";
  return chk;
}

inline SelftestCheck check_three_way(const std::vector<SensingMatrix>& instances, int m_max,
                                     double cert_threshold) {
  SelftestCheck chk{"three-way-equivalence", true, ""};
  long agreements = 0;
  for (const auto& a : instances) {
    const auto ns = nullspace_basis(a.entries);
    std::uint64_t trial_counter = 0;
    for (int k = 1; k <= m_max && chk.pass; ++k) {
      for_each_signed_support(static_cast<int>(a.N), k, [&](const SignedSupport& s) {
        const bool face_ok = is_face(a, s, PolytopeMode::Central).is_face;
        const auto cert = dual_certificate_value(a, s);
        bool cert_ok;
        if (cert.classification == CertificateClass::RankDeficient) {
          cert_ok = false;
        } else if (cert.gamma < cert_threshold - lp_tolerances::kReducedCost) {
          cert_ok = true;
        } else if (cert.gamma > cert_threshold + lp_tolerances::kReducedCost) {
          cert_ok = false;
        } else {
          RngStream st(a.seed, trial_counter++);
          cert_ok = detail::resolve_by_trials(a, s, st);
        }
        const bool nsp_ok = nsp_signed_slice(ns.basis, s, a.N).pass;
        if (face_ok != cert_ok || cert_ok != nsp_ok) {
          chk.pass = false;
          std::ostringstream d;
          d << "minimal witness " << s.to_string() << " on seed " << a.seed << " (face="
            << face_ok << " cert=" << cert_ok << " nsp=" << nsp_ok << ")";
          chk.detail = d.str();
          return false;
        }
        ++agreements;
        return true;
      });
    }
    if (!chk.pass) return chk;
  }
  chk.detail = std::to_string(agreements) + " signed supports agreed across " +
               std::to_string(instances.size()) + " instances";
  return chk;
}

inline SelftestCheck check_candes_soundness(std::size_t n, std::size_t N, int m, int trials,
                                            std::uint64_t seed) {
  SelftestCheck chk{"candes-soundness", true, ""};
  const auto a = generate_matrix(EnsembleSpec::gaussian(), n, N, seed);
  const double d2m = isometry_constant_exact(a, 2 * m).delta;
  std::ostringstream detail;
  detail << "n=" << n << " N=" << N << " m=" << m << " delta_2m=" << format_g17(d2m);
  if (!candes_criterion(d2m)) {
    detail << " (criterion not met; vacuous)";
    chk.detail = detail.str();
    return chk;
  }
  RngStream stream(seed, 0xCA11);
  for (int t = 0; t < trials; ++t) {
    Vector z(N, 0.0);
    const auto support = sample_support(stream, static_cast<int>(N), m);
    for (int idx : support) z[static_cast<std::size_t>(idx) - 1] = sample_rademacher(stream);
    if (!exact_recovery_trial(a, z).success) {
      chk.pass = false;
      detail << " trial " << t << " failed";
      break;
    }
  }
  detail << " trials=" << trials;
  chk.detail = detail.str();
  return chk;
}

} // namespace detail

/// The cross-oracle battery: face verification against dual certificates
/// against the null-space property, the RIP identities, the chaos
/// inequalities, the half-split identity, and sampler KS tests.
inline SelftestReport run_selftest(const SelftestOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  SelftestReport rep;
  rep.tier = opts.tier;
  const bool full = opts.tier == "full";
  if (!full && opts.tier != "quick")
    throw std::invalid_argument("run_selftest: tier must be quick or full");

  rep.checks.push_back(detail::check_sampler_ks());
  rep.checks.push_back(detail::check_halfsplit());
  rep.checks.push_back(detail::check_rip_identities(full ? 20 : 5));
  rep.checks.push_back(detail::check_chaos(full ? 20 : 5));

  std::vector<SensingMatrix> instances;
  if (full) {
    for (int i = 0; i < 50; ++i) {
      const std::size_t n = 8 + (i % 5);  // 8..12
      const std::size_t N = n + 4;        // <= 16
      instances.push_back(generate_matrix(EnsembleSpec::gaussian(), n, N, 4000 + i));
    }
  } else {
    for (int i = 0; i < 5; ++i)
      instances.push_back(generate_matrix(EnsembleSpec::gaussian(), 8, 10, 4000 + i));
  }
  rep.checks.push_back(detail::check_three_way(instances, full ? 3 : 2, opts.cert_threshold));

  rep.checks.push_back(full ? detail::check_candes_soundness(300, 60, 1, 100, 5000)
                            : detail::check_candes_soundness(120, 20, 1, 20, 5000));

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

} // namespace cslab
