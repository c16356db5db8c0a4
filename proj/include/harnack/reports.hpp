#pragma once

/// \file
/// Run configuration, command runners and report envelopes for the command-line lab.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "harnack/errors.hpp"
#include "harnack/fd_oracle.hpp"
#include "harnack/format.hpp"
#include "harnack/geodesic_lab.hpp"
#include "harnack/green_profile.hpp"
#include "harnack/harnack_verifier.hpp"
#include "harnack/hypotheses.hpp"
#include "harnack/model_manifolds.hpp"
#include "harnack/tensor/catalogue.hpp"

namespace harnack {

using json = nlohmann::json;

inline constexpr const char* tool_version = "0.1.0";

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_invalid = 2, exit_exploratory = 3 };

struct RunConfig {
  std::string model = "euclidean";
  int n = 4;
  double C = 10.0;
  double r_min = 1e-2;
  double r_max = 1e2;
  int grid_size = 512;
  double tol = margin_tol;
  double identity_tol = harnack::identity_tol;
  std::optional<double> D;
  bool exploratory = false;
  std::vector<double> lambdas{0.0, 0.25, 0.5, 0.75, 1.0};
  int triples = 10;
  double sample_r_min = 0.2;
  double sample_r_max = 5.0;
  std::uint64_t seed = 0;
  int probes = 12;
  std::string chart = "round_sphere";
  double h = 1e-3;
  std::string identity;
  std::string output_dir;
};

inline void to_json(json& j, const RunConfig& c) {
  j = json{{"model", c.model},
           {"n", c.n},
           {"C", c.C},
           {"r_min", c.r_min},
           {"r_max", c.r_max},
           {"grid_size", c.grid_size},
           {"tol", c.tol},
           {"identity_tol", c.identity_tol},
           {"D", c.D ? json(*c.D) : json(nullptr)},
           {"exploratory", c.exploratory},
           {"lambdas", c.lambdas},
           {"triples", c.triples},
           {"sample_r_min", c.sample_r_min},
           {"sample_r_max", c.sample_r_max},
           {"seed", c.seed},
           {"probes", c.probes},
           {"chart", c.chart},
           {"h", c.h},
           {"identity", c.identity},
           {"output_dir", c.output_dir}};
}

inline void from_json(const json& j, RunConfig& c) {
  static const std::vector<std::string> known{"model", "n", "C", "r_min", "r_max", "grid_size", "tol",
                                              "identity_tol", "D", "exploratory", "lambdas", "triples",
                                              "sample_r_min", "sample_r_max", "seed", "probes", "chart", "h",
                                              "identity", "output_dir"};
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw InvalidInput("unknown config key '" + k + "'");
  try {
    const auto get = [&](const char* key, auto& dst) {
      if (j.contains(key)) j.at(key).get_to(dst);
    };
    get("model", c.model);
    get("n", c.n);
    get("C", c.C);
    get("r_min", c.r_min);
    get("r_max", c.r_max);
    get("grid_size", c.grid_size);
    get("tol", c.tol);
    get("identity_tol", c.identity_tol);
    if (j.contains("D")) {
      if (j.at("D").is_null())
        c.D.reset();
      else
        c.D = j.at("D").get<double>();
    }
    get("exploratory", c.exploratory);
    get("lambdas", c.lambdas);
    get("triples", c.triples);
    get("sample_r_min", c.sample_r_min);
    get("sample_r_max", c.sample_r_max);
    get("seed", c.seed);
    get("probes", c.probes);
    get("chart", c.chart);
    get("h", c.h);
    get("identity", c.identity);
    get("output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad config value: ") + e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("config " + path + " is not valid JSON: " + e.what());
  }
  return j.get<RunConfig>();
}

inline void validate(const RunConfig& c) {
  if (c.n < 3) throw InvalidInput("n must be >= 3");
  if (!(c.r_min > 0.0) || !(c.r_max > c.r_min)) throw InvalidInput("need 0 < r_min < r_max");
  if (c.grid_size < 2) throw InvalidInput("grid_size must be >= 2");
  if (!(c.tol > 0.0) || !(c.identity_tol > 0.0)) throw InvalidInput("tolerances must be > 0");
  if (!(c.C >= 0.0)) throw InvalidInput("C must be >= 0");
  if (c.triples < 0) throw InvalidInput("triples must be >= 0");
  if (!(c.sample_r_min > 0.0) || !(c.sample_r_max > c.sample_r_min))
    throw InvalidInput("need 0 < sample_r_min < sample_r_max");
  for (double l : c.lambdas)
    if (!(l >= 0.0 && l <= 1.0)) throw InvalidInput("lambdas must lie in [0, 1]");
  if (c.probes < 2) throw InvalidInput("probes must be >= 2");
  if (!(c.h > 0.0)) throw InvalidInput("h must be > 0");
}

/// One report file plus any CSV side files, all keyed by file name.
struct RunOutcome {
  json report;
  int exit_code = exit_pass;
  std::map<std::string, std::string> artifacts;
};

namespace detail {

inline json hypothesis_json(const HypothesisReport& h) {
  return json{{"nonneg_sectional_along_gradG", h.nonneg_sectional_along_gradG},
              {"sectional_margin", h.sectional_margin},
              {"sectional_worst_r", h.sectional_worst_r},
              {"nonneg_ricci", h.nonneg_ricci},
              {"ricci_margin", h.ricci_margin},
              {"ricci_worst_r", h.ricci_worst_r},
              {"parallel_ricci", h.parallel_ricci},
              {"parallel_ricci_scaled", h.parallel_ricci_scaled},
              {"euclidean_volume_growth", h.euclidean_volume_growth},
              {"volume_ratio_inf", h.volume_ratio_inf},
              {"nonparabolic", h.nonparabolic},
              {"tail_exponent", h.tail_exponent},
              {"singular_tip", h.singular_tip},
              {"all_hold", h.all_hold()}};
}

inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json boundary_json(const BoundaryValue& b) {
  return json{{"r", b.r},
              {"mu_rad", b.mu_rad},
              {"mu_tan", b.mu_tan},
              {"lambda", b.lambda},
              {"analytic_limit", num(b.analytic_limit)}};
}

inline int combine(bool ok, bool exploratory) {
  if (!ok) return exit_fail;
  return exploratory ? exit_exploratory : exit_pass;
}

inline std::string verdict(int code) {
  switch (code) {
    case exit_pass: return "pass";
    case exit_fail: return "fail";
    case exit_exploratory: return "exploratory";
    default: return "invalid";
  }
}

inline RunOutcome envelope(const std::string& command, const RunConfig& cfg, json result, int code,
                           json flags = json::object()) {
  RunOutcome out;
  out.exit_code = code;
  out.report = json{{"tool", "harnack_lab"},  {"version", tool_version}, {"command", command},
                    {"config", cfg},          {"verdict", verdict(code)}, {"exit_code", code},
                    {"hypothesis_flags", std::move(flags)}, {"result", std::move(result)}};
  return out;
}

}  // namespace detail

inline RunOutcome run_verify(const RunConfig& cfg) {
  validate(cfg);
  const auto m = make_model(cfg.model, cfg.n);
  VerifyOptions opt;
  opt.points = std::size_t(cfg.grid_size);
  opt.tol = cfg.tol;
  opt.allow_exploratory = cfg.exploratory;
  opt.D = cfg.D;
  opt.hypothesis_probes = cfg.probes;
  const auto rep = verify_theorem(m, cfg.C, cfg.r_min, cfg.r_max, opt);
  json viol = json::array();
  for (const auto& v : rep.violations) viol.push_back({{"r", v.r}, {"mu_rad", v.mu_rad}, {"mu_tan", v.mu_tan}});
  json res{{"model", rep.model},
           {"n", rep.n},
           {"C", rep.C},
           {"pass", rep.pass},
           {"mode", to_string(rep.mode)},
           {"C_below_faithful", rep.C_below_faithful},
           {"worst_margin", rep.worst_margin},
           {"worst_r", rep.worst_r},
           {"minimal_C", rep.minimal_C},
           {"minimal_C_r", rep.minimal_C_r},
           {"violations", viol},
           {"equivalence_ok", rep.equivalence_ok},
           {"boundary_diagnostics", {{"r_min", detail::boundary_json(rep.inner)}, {"r_max", detail::boundary_json(rep.outer)}}}};
  if (rep.d_check)
    res["D_consistency"] = {{"D", rep.d_check->D},
                            {"hess_le_D", rep.d_check->hess_le_D},
                            {"lambda_bound", rep.d_check->lambda_bound},
                            {"worst_gap", rep.d_check->worst_gap}};
  const int code = detail::combine(rep.pass && rep.equivalence_ok, rep.mode == RunMode::exploratory);
  auto out = detail::envelope("verify", cfg, std::move(res), code, detail::hypothesis_json(rep.hypotheses));
  // eigenvalue curves
  const auto prof = compute_profile(m, log_grid(cfg.r_min, cfg.r_max, std::size_t(cfg.grid_size)));
  const HarnackState st(prof, cfg.C);
  std::ostringstream csv;
  csv << "r,mu_rad,mu_tan,h_rad,h_tan,lambda\n";
  for (std::size_t i = 0; i < prof.size(); ++i)
    csv << shortest(prof[i].r) << ',' << shortest(prof[i].mu_rad) << ',' << shortest(prof[i].mu_tan) << ','
        << shortest(st.h_rad()[i]) << ',' << shortest(st.h_tan()[i]) << ',' << shortest(st.lambda()[i]) << '\n';
  out.artifacts["eigenvalues.csv"] = csv.str();
  return out;
}

inline RunOutcome run_min_c(const RunConfig& cfg) {
  validate(cfg);
  const auto m = make_model(cfg.model, cfg.n);
  const auto mc = minimal_C(m, cfg.r_min, cfg.r_max, std::size_t(cfg.grid_size));
  const auto hyp = hypothesis_report(m, cfg.r_min, cfg.r_max, cfg.probes);
  json res{{"model", m.id()},
           {"n", m.n},
           {"minimal_C", mc.value},
           {"argmax_r", mc.argmax_r},
           {"grid_value", mc.grid_value},
           {"inner_limit", detail::num(conical_mu_limit(m.profile.inner_law(), m.n))},
           {"outer_limit", detail::num(conical_mu_limit(m.profile.outer_law(), m.n))}};
  return detail::envelope("min-c", cfg, std::move(res), exit_pass, detail::hypothesis_json(hyp));
}

/// Seeded sample of slice point pairs with radii in [sample_r_min, sample_r_max].
inline std::vector<std::pair<SlicePoint, SlicePoint>> sample_pairs(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const auto u = [&](double a, double b) { return a + (b - a) * (double(rng() >> 11) * 0x1.0p-53); };
  std::vector<std::pair<SlicePoint, SlicePoint>> out;
  for (int i = 0; i < cfg.triples; ++i) {
    SlicePoint y{u(cfg.sample_r_min, cfg.sample_r_max), u(0, 2 * std::numbers::pi)};
    SlicePoint z{u(cfg.sample_r_min, cfg.sample_r_max), u(0, 2 * std::numbers::pi)};
    out.emplace_back(y, z);
  }
  return out;
}

inline RunOutcome run_corollary(const RunConfig& cfg) {
  validate(cfg);
  const auto m = make_model(cfg.model, cfg.n);
  const auto prof = compute_profile(m, log_grid(cfg.r_min, cfg.r_max, std::size_t(cfg.grid_size)));
  const auto hyp = hypothesis_report(m, cfg.r_min, cfg.r_max, cfg.probes);
  json triples = json::array();
  std::ostringstream csv;
  csv << "lambda,d_yz,b2_w,rhs,slack\n";
  double worst = std::numeric_limits<double>::infinity(), worst_triangle = 0;
  int flagged = 0;
  for (const auto& [y, z] : sample_pairs(cfg)) {
    const auto ts = corollary_check(m, prof, y, z, cfg.C, cfg.lambdas);
    for (const auto& t : ts) {
      triples.push_back({{"y", {t.y.r, t.y.phi}},
                         {"z", {t.z.r, t.z.phi}},
                         {"w", {t.w.r, t.w.phi}},
                         {"lambda", t.lambda},
                         {"d_yz", t.d_yz},
                         {"b2_w", t.b2_w},
                         {"rhs", t.rhs},
                         {"slack", t.slack},
                         {"near_tip", t.near_tip}});
      csv << shortest(t.lambda) << ',' << shortest(t.d_yz) << ',' << shortest(t.b2_w) << ',' << shortest(t.rhs)
          << ',' << shortest(t.slack) << '\n';
      if (t.near_tip) {
        ++flagged;
        continue;
      }
      worst = std::min(worst, t.slack);
      worst_triangle = std::max(worst_triangle, t.d_yw + t.d_wz - t.d_yz);
    }
  }
  const bool ok = !(worst < -cfg.tol) && worst_triangle <= 1e-7;
  json res{{"model", m.id()},     {"n", m.n},
           {"C", cfg.C},          {"worst_slack", detail::num(worst)},
           {"worst_triangle_excess", worst_triangle},
           {"flagged_near_tip", flagged},
           {"triples", triples}};
  const bool exploratory = !hyp.all_hold() || cfg.C < faithful_C;
  auto out = detail::envelope("corollary", cfg, std::move(res), detail::combine(ok, exploratory),
                              detail::hypothesis_json(hyp));
  out.artifacts["corollary.csv"] = csv.str();
  return out;
}

inline constexpr double lemma_residual_tol = 1e-6;

inline RunOutcome run_audit(const RunConfig& cfg) {
  validate(cfg);
  const auto m = make_model(cfg.model, cfg.n);
  const auto prof = compute_profile(m, log_grid(cfg.r_min, cfg.r_max, std::size_t(cfg.grid_size)));
  json rows = json::array();
  bool ok = true, exploratory = cfg.C < faithful_C;
  for (double r : probe_radii(cfg.r_min, cfg.r_max, cfg.probes)) {
    const auto a = audit_proof_terms(m, prof, r, cfg.C);
    const auto& f = a.hypothesis_flags;
    const bool hyps = f.parallel_ricci && f.nonneg_sectional && f.nonneg_ricci && f.gradient_estimate;
    if (!hyps) exploratory = true;
    // sign claims are binding only where the argument applies
    if (hyps && a.lemma_residual > lemma_residual_tol) ok = false;
    if (hyps && (!a.curv1_nonpos || !a.curv2_nonpos || !a.Hsq_nonpos || !a.Csq_below_bound)) ok = false;
    if (hyps && f.lambda_negative && f.C_at_least_10 && (!a.mixed_nonpos || !a.final_holds)) ok = false;
    rows.push_back({{"r", a.r},
                    {"V", to_string(a.V)},
                    {"lambda", a.lambda},
                    {"group_curv1", a.group_curv1},
                    {"group_curv2", a.group_curv2},
                    {"group_Hsq", a.group_Hsq},
                    {"group_Csq", a.group_Csq},
                    {"group_Csq_raw", a.group_Csq_raw},
                    {"group_mixed", a.group_mixed},
                    {"group_mixed_raw", a.group_mixed_raw},
                    {"final_bound", a.final_bound},
                    {"assembled", a.assembled},
                    {"lap_htilde_VV", a.lap_htilde_VV},
                    {"lemma_residual", a.lemma_residual},
                    {"flags",
                     {{"lambda_negative", f.lambda_negative},
                      {"parallel_ricci", f.parallel_ricci},
                      {"nonneg_sectional", f.nonneg_sectional},
                      {"nonneg_ricci", f.nonneg_ricci},
                      {"gradient_estimate", f.gradient_estimate},
                      {"C_at_least_10", f.C_at_least_10},
                      {"relied_on_unmet", f.relied_on_unmet}}}});
  }
  json res{{"model", m.id()}, {"n", m.n}, {"C", cfg.C}, {"audits", rows}};
  return detail::envelope("audit", cfg, std::move(res), detail::combine(ok, exploratory));
}

inline json identity_json(const tensor::IdentityResult& r) {
  return json{{"name", r.name}, {"statement", r.statement}, {"zero", r.zero}, {"residual", r.residual.str()}};
}

inline RunOutcome run_symbolic(const RunConfig& cfg, const std::string& only) {
  json rows = json::array();
  bool ok = true;
  std::vector<std::string> names;
  if (only.empty()) {
    for (const auto& s : tensor::identity_catalogue()) names.push_back(s.name);
  } else {
    try {
      tensor::find_identity(only);
    } catch (const tensor::UnknownIdentity& e) {
      throw InvalidInput(e.what());
    }
    names.push_back(only);
  }
  for (const auto& name : names) {
    const auto r = tensor::verify_identity(name);
    ok = ok && r.zero;
    rows.push_back(identity_json(r));
  }
  json res{{"identities", rows}, {"count", names.size()}};
  return detail::envelope(only.empty() ? "symbolic verify-all" : "symbolic verify", cfg, std::move(res),
                          detail::combine(ok, false));
}

inline constexpr double commutator_tol = 1e-4;  // raw residual at the chart's base point
inline constexpr double richardson_tol = 1e-6;  // extrapolated residual at every probe

inline RunOutcome run_oracle_commutators(const RunConfig& cfg) {
  if (!(cfg.h > 0.0)) throw InvalidInput("h must be > 0");
  if (cfg.probes < 1) throw InvalidInput("probes must be >= 1");
  const auto chart = fd::chart_by_name(cfg.chart, cfg.n);
  const auto f = fd::default_test_function(chart);
  std::mt19937_64 rng(cfg.seed);
  json points = json::array();
  bool ok = true;
  double worst_residual = 0, worst_parallel = 0;
  for (int p = 0; p < cfg.probes; ++p) {
    const fd::Vec x = p == 0 ? chart.base_point : chart.sample(rng);
    const auto l = fd::check_commutator_identities(chart, f, x, fd::Real(cfg.h));
    const double pr = double(fd::check_parallel_ricci(chart, x, fd::Real(cfg.h)).value);
    worst_parallel = std::max(worst_parallel, pr);
    json rows = json::array();
    for (int k = 0; k < 5; ++k) {
      const double res = double(l.residual[k]), ratio = double(l.ratio[k]);
      const bool in_band = std::isnan(ratio) || (ratio >= 3.5 && ratio <= 4.5);
      const bool bound = p == 0 ? res <= commutator_tol : double(l.richardson[k]) <= richardson_tol;
      ok = ok && bound && in_band;
      worst_residual = std::max(worst_residual, res);
      rows.push_back({{"identity", k + 1},
                      {"residual", res},
                      {"residual_half", double(l.residual_half[k])},
                      {"ratio", detail::num(ratio)},
                      {"richardson", double(l.richardson[k])}});
    }
    std::vector<double> xs(x.data(), x.data() + x.size());
    points.push_back({{"point", xs}, {"commutators", rows}, {"parallel_ricci", pr}});
  }
  json res{{"chart", chart.name},
           {"dim", chart.dim},
           {"test_function", f.name},
           {"h", cfg.h},
           {"worst_residual", worst_residual},
           {"worst_parallel_ricci", worst_parallel},
           {"points", points}};
  return detail::envelope("oracle commutators", cfg, std::move(res), detail::combine(ok, false));
}

inline RunOutcome run_models_list(const RunConfig& cfg) {
  const json presets = json::array({
      {{"id", "euclidean"}, {"profile", "f(r) = r"}},
      {{"id", "cone:<c>"}, {"profile", "f(r) = c r, 0 < c <= 1"}},
      {{"id", "smoothed-cone:<c>:<r0>"}, {"profile", "r near 0, c r beyond r0, quintic blend on [r0/2, r0]"}},
      {{"id", "custom:<path>"}, {"profile", "CSV table with columns r,f,fp,fpp"}},
  });
  const json charts = json::array({"euclidean[:n]", "round_sphere[:radius[:dim]]", "s2xr2", "cone:<c>[:n]"});
  return detail::envelope("models list", cfg, json{{"models", presets}, {"charts", charts}}, exit_pass);
}

inline RunOutcome run_export_profile(const RunConfig& cfg) {
  validate(cfg);
  const auto m = make_model(cfg.model, cfg.n);
  const auto prof = compute_profile(m, log_grid(cfg.r_min, cfg.r_max, std::size_t(cfg.grid_size)));
  std::ostringstream csv;
  write_profile_csv(prof, csv);
  auto out = detail::envelope("export-profile", cfg, json{{"model", m.id()}, {"n", m.n}, {"points", prof.size()}},
                              exit_pass);
  out.artifacts["profile.csv"] = csv.str();
  return out;
}

/// Dispatches a command; `arg` carries the identity name for "symbolic verify".
inline RunOutcome run_command(const std::string& command, const RunConfig& cfg, const std::string& arg = {}) {
  if (command == "verify") return run_verify(cfg);
  if (command == "min-c") return run_min_c(cfg);
  if (command == "corollary") return run_corollary(cfg);
  if (command == "audit") return run_audit(cfg);
  if (command == "symbolic verify-all") return run_symbolic(cfg, {});
  if (command == "symbolic verify") {
    if (arg.empty()) throw InvalidInput("symbolic verify needs an identity name");
    return run_symbolic(cfg, arg);
  }
  if (command == "oracle commutators") return run_oracle_commutators(cfg);
  if (command == "models list") return run_models_list(cfg);
  if (command == "export-profile") return run_export_profile(cfg);
  throw InvalidInput("unknown command '" + command + "'");
}

inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace harnack
