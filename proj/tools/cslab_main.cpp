// Command-line front end: matrix generation, isometry/chaos measurement,
// l1 recovery and decoding, polytope face verification, cross-checks,
// phase-transition sweeps, bound calculators, and the self-test battery.
//
// Exit codes: 0 pass, 1 assertion failure, 2 usage error, 3 budget refusal.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cslab/harness.hpp"
#include "cslab/io.hpp"
#include "cslab/version.hpp"

namespace {

using cslab::json;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    cslab::write_file(out_path, text);
}

void emit_json(const json& j, const std::string& out_path) {
  emit(j.dump(2) + "\n", out_path);
}

cslab::Vector parse_vector_text(const std::string& text) {
  cslab::Vector v;
  std::string token;
  for (char c : text) {
    if (c == ',' || c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      if (!token.empty()) {
        v.push_back(std::stod(token));
        token.clear();
      }
    } else {
      token += c;
    }
  }
  if (!token.empty()) v.push_back(std::stod(token));
  return v;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> v;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) v.push_back(std::stoi(tok));
  return v;
}

struct Args {
  std::string matrix_path, out_path, y_path, z_path, support, ensemble = "gaussian";
  std::string mode = "central", tier = "quick", formula, params_path, config_path, m_list = "1";
  std::size_t n = 100, N = 400;
  std::uint64_t seed = 42;
  int m = 1, mmax = 3, trials = 10000;
  double budget_supports = cslab::kDefaultSupportBudget;
  double budget_signed = cslab::kDefaultSignedBudget;
  bool sampled = false;
};

int cmd_gen(const Args& a) {
  const auto spec = cslab::EnsembleSpec::parse(a.ensemble);
  const auto m = cslab::generate_matrix(spec, a.n, a.N, a.seed);
  const bool as_json =
      a.out_path.size() >= 5 && a.out_path.substr(a.out_path.size() - 5) == ".json";
  if (as_json)
    emit_json(cslab::matrix_to_json(m), a.out_path);
  else
    emit(cslab::matrix_to_csv(m), a.out_path);
  return 0;
}

int cmd_rip(const Args& a) {
  const auto m = cslab::load_matrix(a.matrix_path);
  cslab::RipReport rep;
  rep.n = m.n;
  rep.N = m.N;
  rep.spec = m.spec.to_string();
  rep.seed = m.seed;
  rep.algorithm_id = m.algorithm_id;
  for (int mm : parse_int_list(a.m_list)) {
    if (a.sampled) {
      cslab::RngStream stream(a.seed, static_cast<std::uint64_t>(mm));
      rep.insert(cslab::isometry_constant_sampled(m, mm, a.trials, stream));
    } else {
      rep.insert(cslab::isometry_constant_exact(m, mm, a.budget_supports));
    }
  }
  emit_json(to_json(rep), a.out_path);
  return 0;
}

int cmd_chaos(const Args& a) {
  const auto m = cslab::load_matrix(a.matrix_path);
  json out = cslab::matrix_meta_json(m);
  json entries = json::array();
  for (int mm : parse_int_list(a.m_list))
    entries.push_back(to_json(cslab::chaos_statistics(m, mm, a.budget_supports)));
  out["chaos"] = std::move(entries);
  emit_json(out, a.out_path);
  return 0;
}

int cmd_recover(const Args& a) {
  const auto m = cslab::load_matrix(a.matrix_path);
  json out = cslab::matrix_meta_json(m);
  if (!a.support.empty()) {
    const auto s = cslab::parse_signed_support(a.support);
    const auto cert = cslab::dual_certificate_value(m, s);
    out["support"] = to_json(s);
    out["certificate"] = to_json(cert);
  } else if (!a.z_path.empty()) {
    const auto z = parse_vector_text(cslab::read_file(a.z_path));
    out["trial"] = to_json(cslab::exact_recovery_trial(m, z));
  } else if (!a.y_path.empty()) {
    const auto y = parse_vector_text(cslab::read_file(a.y_path));
    out["basis_pursuit"] = to_json(cslab::basis_pursuit(m, y));
  } else {
    const auto rep = cslab::all_sparse_recovery_check(m, a.m, a.budget_signed);
    out["all_sparse"] = to_json(rep);
    out["nullspace_property"] = to_json(cslab::nullspace_property_check(m, a.m));
  }
  emit_json(out, a.out_path);
  return 0;
}

int cmd_decode(const Args& a) {
  const auto m = cslab::load_matrix(a.matrix_path);
  const auto y = parse_vector_text(cslab::read_file(a.y_path));
  json out = cslab::matrix_meta_json(m);
  out["decode"] = to_json(cslab::decode_l1(m, y));
  emit_json(out, a.out_path);
  return 0;
}

int cmd_neighborly(const Args& a) {
  const auto m = cslab::load_matrix(a.matrix_path);
  const auto mode = a.mode == "positive" ? cslab::PolytopeMode::Positive
                                         : cslab::PolytopeMode::Central;
  json out = cslab::matrix_meta_json(m);
  out["census"] = to_json(cslab::vertex_census(m, mode));
  out["neighborliness"] = to_json(cslab::neighborliness_order(m, a.mmax, a.budget_signed, mode));
  emit_json(out, a.out_path);
  return 0;
}

int cmd_crosscheck(const Args& a) {
  const auto m = cslab::load_matrix(a.matrix_path);
  const auto rep = cslab::donoho_cross_check(m, a.m, a.budget_signed);
  json out = cslab::matrix_meta_json(m);
  out["crosscheck"] = to_json(rep);
  emit_json(out, a.out_path);
  return rep.agree ? 0 : 1;
}

int cmd_phase(const Args& a, const CLI::App* sub) {
  cslab::ExperimentConfig cfg;
  if (!a.config_path.empty())
    cfg = cslab::experiment_config_from_json(json::parse(cslab::read_file(a.config_path)));
  // CLI flags override config fields when explicitly given
  if (sub->count("--ensemble")) cfg.ensemble = cslab::EnsembleSpec::parse(a.ensemble);
  if (sub->count("--n")) cfg.n = a.n;
  if (sub->count("--N")) cfg.N = a.N;
  if (sub->count("--m-grid")) cfg.m_grid = parse_int_list(a.m_list);
  if (sub->count("--trials")) cfg.trials = a.trials;
  if (sub->count("--seed")) cfg.seed = a.seed;
  if (sub->count("--out")) cfg.output = a.out_path;
  const auto diagram = cslab::run_phase_transition(cfg);
  emit(cslab::phase_to_csv(diagram), cfg.output);
  return 0;
}

int cmd_bounds(const Args& a) {
  json params = json::object();
  if (!a.params_path.empty()) params = json::parse(cslab::read_file(a.params_path));
  const auto k = params.contains("constants")
                     ? cslab::bound_constants_from_json(params["constants"])
                     : cslab::BoundConstants{};
  std::fprintf(stderr,
               "note: universal constants C, c are user-supplied (defaults 1); "
               "calculator outputs are formula values, not certified guarantees\n");
  auto need = [&](const char* key) {
    if (!params.contains(key))
      throw std::invalid_argument(std::string("bounds: params.json needs '") + key + "'");
    return params[key];
  };
  json out{{"formula", a.formula}, {"constants", to_json(k)}};
  if (a.formula == "uup") {
    const auto b = cslab::uup_bound(need("n").get<double>(), need("N").get<double>(),
                                    need("m").get<double>(), k,
                                    params.value("p_max_norm_exceed", 0.0));
    out["admissible"] = b.admissible;
    out["sparsity_lhs"] = b.sparsity_lhs;
    out["sparsity_rhs"] = b.sparsity_rhs;
    out["bound_on_Bm2"] = b.bound_on_bm2;
    out["failure_prob"] = b.failure_prob;
  } else if (a.formula == "rip") {
    const auto b = cslab::rip_bound_rhs(need("n").get<double>(), need("N").get<double>(),
                                        need("m").get<double>(), k);
    out["rhs"] = b.rhs;
    out["log_argument"] = b.log_argument;
    out["vacuous"] = b.vacuous;
    out["failure_prob_term"] = b.failure_prob_term;
  } else if (a.formula == "neighborly") {
    const auto b = cslab::neighborliness_threshold(need("n").get<double>(),
                                                   need("N").get<double>(), k);
    out["m_bar"] = b.m_bar;
    out["log_argument"] = b.log_argument;
    out["log_vacuous"] = b.log_vacuous;
  } else if (a.formula == "bernstein") {
    out["bound"] = cslab::bernstein_tail(need("t").get<double>(),
                                         need("psi1_norms").get<std::vector<double>>(),
                                         need("psi").get<double>());
  } else if (a.formula == "weibull") {
    out["bound"] = cslab::weibull_tail_bound(need("t").get<double>(),
                                             need("a").get<std::vector<double>>(),
                                             need("r").get<double>(), need("c").get<double>());
  } else if (a.formula == "mixed") {
    out["bound"] = cslab::mixed_tail_bound(need("t").get<double>(), need("n").get<double>(),
                                           need("b").get<double>(), need("s").get<double>(),
                                           need("c").get<double>());
  } else if (a.formula == "thinshell") {
    const auto mode = params.value("conjectured", false)
                          ? cslab::ThinShellExponent::Conjectured
                          : cslab::ThinShellExponent::Proven;
    const auto b = cslab::thin_shell_prob(need("n").get<double>(), need("N").get<double>(),
                                          need("theta").get<double>(), k, mode);
    out["prob"] = b.prob;
    out["exponent"] = b.exponent;
    out["n_range_ok"] = b.n_range_ok;
    out["exponent_mode"] =
        mode == cslab::ThinShellExponent::Conjectured ? "conjectured-sqrt-n" : "proven";
  } else if (a.formula == "maxnorm") {
    const auto b = cslab::max_norm_prob(need("n").get<double>(), need("N").get<double>(),
                                        need("K").get<double>(), params.value("C0", 1.0));
    out["threshold"] = b.threshold;
    out["failure_prob"] = b.failure_prob;
    out["n_range_ok"] = b.n_range_ok;
  } else if (a.formula == "amlower") {
    const auto b = cslab::am_lower_bound(need("n").get<double>(), need("N").get<double>(),
                                         need("m").get<double>(), need("t").get<double>(),
                                         need("c").get<double>());
    out["threshold"] = b.threshold;
    out["prob_floor"] = b.prob_floor;
  } else {
    throw std::invalid_argument("bounds: unknown formula '" + a.formula + "'");
  }
  emit_json(out, a.out_path);
  return 0;
}

int cmd_selftest(const Args& a) {
  cslab::SelftestOptions opts;
  opts.tier = a.tier;
  const auto rep = cslab::run_selftest(opts);
  emit_json(to_json(rep), a.out_path);
  for (const auto& c : rep.checks)
    std::fprintf(stderr, "[%s] %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str());
  return rep.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressed-sensing measurement lab"};
  app.set_version_flag("--version", std::string("cslab ") + cslab::kVersion);
  app.require_subcommand(1);
  Args a;

  auto add_matrix = [&](CLI::App* sub) {
    sub->add_option("--matrix", a.matrix_path, "matrix file (.csv or .json)")->required();
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", a.out_path, "output path"); };

  auto* gen = app.add_subcommand("gen", "generate a sensing matrix");
  gen->add_option("--ensemble", a.ensemble,
                  "gaussian | rademacher | iid_entries:r=R | lp_ball:p=P | sphere | "
                  "masked_bernoulli");
  gen->add_option("--n", a.n, "rows");
  gen->add_option("--N", a.N, "columns");
  gen->add_option("--seed", a.seed, "seed");
  add_out(gen);

  auto* rip = app.add_subcommand("rip", "isometry constants with witnesses");
  add_matrix(rip);
  rip->add_option("--m", a.m_list, "comma-separated sparsity levels");
  rip->add_option("--budget", a.budget_supports, "max supports per level");
  rip->add_flag("--sampled", a.sampled, "Monte Carlo lower bound instead of exact scan");
  rip->add_option("--trials", a.trials, "sampled supports when --sampled");
  rip->add_option("--seed", a.seed, "sampling seed");
  add_out(rip);

  auto* chaos = app.add_subcommand("chaos", "A_m, B_m, C_m with witnesses");
  add_matrix(chaos);
  chaos->add_option("--m", a.m_list, "comma-separated sparsity levels");
  chaos->add_option("--budget", a.budget_supports, "max supports per level");
  add_out(chaos);

  auto* rec = app.add_subcommand("recover", "l1 recovery: certificates, trials, basis pursuit");
  add_matrix(rec);
  rec->add_option("--support", a.support, "signed support, e.g. \"3:+,5:-\"");
  rec->add_option("--z", a.z_path, "sparse vector file for a recovery trial");
  rec->add_option("--y", a.y_path, "measurement file for plain basis pursuit");
  rec->add_option("--m", a.m, "exhaustive check order (default mode)");
  rec->add_option("--budget", a.budget_signed, "signed-support budget");
  add_out(rec);

  auto* dec = app.add_subcommand("decode", "l1 decoding of corrupted measurements");
  add_matrix(dec);
  dec->add_option("--y", a.y_path, "measurement file (N values)")->required();
  add_out(dec);

  auto* nei = app.add_subcommand("neighborly", "vertex census and neighborliness order");
  add_matrix(nei);
  nei->add_option("--mode", a.mode, "central | positive");
  nei->add_option("--mmax", a.mmax, "largest selection size to verify");
  nei->add_option("--budget", a.budget_signed, "selection budget");
  add_out(nei);

  auto* cross = app.add_subcommand("crosscheck", "polytope vs recovery equivalence");
  add_matrix(cross);
  cross->add_option("--m", a.m, "order");
  cross->add_option("--budget", a.budget_signed, "signed-support budget");
  add_out(cross);

  auto* phase = app.add_subcommand("phase", "recovery phase-transition sweep (CSV)");
  phase->add_option("--config", a.config_path, "JSON config; flags override fields");
  phase->add_option("--ensemble", a.ensemble, "ensemble spec");
  phase->add_option("--n", a.n, "rows");
  phase->add_option("--N", a.N, "columns");
  phase->add_option("--m-grid", a.m_list, "comma-separated sparsity grid");
  phase->add_option("--trials", a.trials, "trials per grid point");
  phase->add_option("--seed", a.seed, "master seed");
  add_out(phase);

  auto* bounds = app.add_subcommand("bounds", "bound calculators");
  bounds->add_option("--formula", a.formula,
                     "rip | uup | neighborly | bernstein | weibull | mixed | thinshell | "
                     "maxnorm | amlower")
      ->required();
  bounds->add_option("--json", a.params_path, "parameter file");
  add_out(bounds);

  auto* self = app.add_subcommand("selftest", "cross-oracle self-test battery");
  self->add_option("--tier", a.tier, "quick | full");
  add_out(self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(a);
    if (rip->parsed()) return cmd_rip(a);
    if (chaos->parsed()) return cmd_chaos(a);
    if (rec->parsed()) return cmd_recover(a);
    if (dec->parsed()) return cmd_decode(a);
    if (nei->parsed()) return cmd_neighborly(a);
    if (cross->parsed()) return cmd_crosscheck(a);
    if (phase->parsed()) return cmd_phase(a, phase);
    if (bounds->parsed()) return cmd_bounds(a);
    if (self->parsed()) return cmd_selftest(a);
  } catch (const cslab::BudgetError& e) {
    std::fprintf(stderr, "budget refusal: %s (required %.0f, given %.0f)\n", e.what(),
                 e.required(), e.given());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
