// Acceptance checks: one PASS/FAIL line per criterion, tolerances pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "harnack.hpp"

using namespace harnack;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const std::vector<double> cone_apertures{0.3, 0.5, 0.8, 1.0};
const std::vector<int> dims{3, 4, 5};

std::vector<ModelManifold> presets(int n) {
  std::vector<ModelManifold> out{make_model("euclidean", n)};
  for (double c : cone_apertures) out.push_back(make_model(n, WarpingProfile::cone(c)));
  out.push_back(make_model("smoothed-cone:0.5:1", n));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1
Outcome euclidean_exactness() {
  constexpr double tol = 1e-6;
  double worst_eig = 0, worst_c = 0;
  for (int n : {3, 4, 5, 6}) {
    const auto m = make_model("euclidean", n);
    const auto p = compute_profile(m, log_grid(0.1, 50, 512));
    for (const auto& q : p.points()) worst_eig = std::max({worst_eig, std::abs(q.mu_rad - 2), std::abs(q.mu_tan - 2)});
    worst_c = std::max(worst_c, std::abs(minimal_C(m, 0.1, 50).value - 2));
  }
  return {worst_eig <= tol && worst_c <= tol,
          "max |mu - 2| = " + fmt(worst_eig) + ", max |minimal_C - 2| = " + fmt(worst_c) + ", tol " + fmt(tol)};
}

// 2
Outcome gradient_estimate() {
  constexpr double tol = 1e-8;
  double worst = 0;
  for (int n : dims)
    for (const auto& m : presets(n))
      for (const auto& q : compute_profile(m).points()) worst = std::max(worst, q.grad_b);
  return {worst <= 1 + tol, "max |grad b| - 1 = " + fmt(worst - 1) + ", tol " + fmt(tol)};
}

// 3
Outcome cone_closed_form() {
  constexpr double tol = 1e-6;
  double worst = 0;
  for (int n : dims)
    for (double c : cone_apertures) {
      const double want = 2 * std::pow(c, 2.0 * (n - 1) / (n - 2));
      worst = std::max(worst, std::abs(minimal_C(make_model(n, WarpingProfile::cone(c)), 1e-2, 1e2).value - want));
    }
  return {worst <= tol, "max |minimal_C - 2c^(2(n-1)/(n-2))| = " + fmt(worst) + ", tol " + fmt(tol)};
}

// 4
Outcome symbolic_zero() {
  const std::vector<std::string> names{"misc.1",  "misc.2",     "misc.3",         "misc.4",
                                       "misc.5",  "power_rule", "b_squared",      "lap_of_harnack",
                                       "lap_of_harnack.step1", "lap_of_harnack.step2", "lap_of_harnack.step3"};
  std::string nonzero;
  for (const auto& name : names)
    if (!tensor::verify_identity(name).zero) nonzero += " " + name;
  return {nonzero.empty(), std::to_string(names.size()) + " identities" +
                               (nonzero.empty() ? " reduce to exactly zero" : ", nonzero:" + nonzero)};
}

// 5
Outcome commutator_oracle() {
  constexpr double res_tol = 1e-4, ratio_lo = 3.5, ratio_hi = 4.5, parallel_tol = 1e-5;
  constexpr fd::Real h = 1e-3L;
  double worst_res = 0, worst_ratio_dev = 0;
  int floor_hits = 0;
  bool ok = true;
  for (const auto& chart : {fd::round_sphere(), fd::s2xr2()}) {
    const auto r = fd::check_commutator_identities(chart, fd::default_test_function(chart), chart.base_point, h);
    for (int k = 0; k < 5; ++k) {
      worst_res = std::max(worst_res, double(r.residual[k]));
      ok = ok && r.residual[k] <= res_tol;
      if (std::isnan(double(r.ratio[k]))) {
        ++floor_hits;  // both residuals at the roundoff floor
        continue;
      }
      ok = ok && r.ratio[k] >= ratio_lo && r.ratio[k] <= ratio_hi;
      worst_ratio_dev = std::max(worst_ratio_dev, std::abs(double(r.ratio[k]) - 4));
    }
  }
  const auto p = fd::s2xr2();
  const double par = double(fd::check_parallel_ricci(p, p.base_point, h).value);
  ok = ok && par <= parallel_tol;
  return {ok, "max residual " + fmt(worst_res) + " (tol " + fmt(res_tol) + "), max |ratio - 4| " +
                  fmt(worst_ratio_dev) + " (band [3.5, 4.5], " + std::to_string(floor_hits) +
                  " at roundoff floor), s2xr2 |nabla Ric| " + fmt(par) + " (tol " + fmt(parallel_tol) + ")"};
}

// 6
Outcome g_alpha_identity() {
  constexpr double tol = 1e-6;
  double worst = 0;
  for (int n : dims)
    for (const auto& m : presets(n)) {
      const auto p = compute_profile(m);
      const double alpha = double(n) / (n - 2);
      for (const auto& q : p.points()) {
        const double u1 = alpha * std::pow(q.G, alpha - 1) * q.Gp;
        const double u2 = alpha * (alpha - 1) * std::pow(q.G, alpha - 2) * q.Gp * q.Gp +
                          alpha * std::pow(q.G, alpha - 1) * q.Gpp;
        const double lap = u2 + (n - 1) * (q.fp / q.f) * u1;
        const double rhs = 2.0 * n / ((2.0 - n) * (2.0 - n)) * std::pow(q.G, alpha - 2) * q.Gp * q.Gp;
        worst = std::max(worst, std::abs(lap - rhs) / std::abs(rhs));
      }
    }
  return {worst <= tol, "max relative residual " + fmt(worst) + ", tol " + fmt(tol)};
}

// 7
Outcome corollary() {
  constexpr double eq_tol = 1e-6, slack_tol = 1e-6;
  constexpr int triples = 100;
  const std::vector<double> lambdas{0, 0.25, 0.5, 0.75, 1};
  CorollaryOptions opt;
  opt.triangle_check = false;
  auto run = [&](const ModelManifold& m, double C, std::uint64_t seed, bool avoid_tip, double& worst_abs,
                 double& worst_min, int& skipped) {
    const auto p = compute_profile(m);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(0.2, 5.0), up(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < triples; ++i) {
      const SlicePoint y{ur(rng), up(rng)};
      const SlicePoint z{ur(rng), up(rng)};
      for (const auto& t : corollary_check(m, p, y, z, C, lambdas, opt)) {
        if (avoid_tip && t.near_tip) {
          ++skipped;
          break;
        }
        worst_abs = std::max(worst_abs, std::abs(t.slack));
        worst_min = std::min(worst_min, t.slack);
      }
    }
  };
  double e_abs = 0, e_min = 0, c_abs = 0, c_min = INFINITY;
  int e_skip = 0, c_skip = 0;
  run(make_model("euclidean", 4), 2.0, 1, false, e_abs, e_min, e_skip);
  const auto cone = make_model("cone:0.5", 4);
  const double C = minimal_C(cone, 1e-2, 1e2).value;
  run(cone, C, 2, true, c_abs, c_min, c_skip);
  return {e_abs <= eq_tol && c_min >= -slack_tol,
          "euclidean C=2 max |slack| " + fmt(e_abs) + " (tol " + fmt(eq_tol) + "); cone(0.5) C=" + fmt(C) +
              " min slack " + fmt(c_min) + " (tol " + fmt(-slack_tol) + "), " + std::to_string(c_skip) +
              " near-tip triples skipped"};
}

// 8
Outcome proof_audit() {
  constexpr double group_tol = 1e-10, final_tol = 1e-10, c12_tol = 1e-6;
  const auto m = make_model("euclidean", 4);
  const auto p = compute_profile(m);
  double worst_group = -INFINITY, worst_final = 0;
  for (double r : {0.5, 0.8, 1.0, 1.5, 2.0, 3.0}) {
    const auto a = audit_proof_terms(m, p, r, 10);
    worst_group = std::max({worst_group, a.group_curv1, a.group_curv2, a.group_Hsq, a.group_Csq, a.group_mixed});
    worst_final = std::max(worst_final, std::abs(a.final_bound));
  }
  const double f12 = audit_proof_terms(m, p, 1, 12).final_bound;
  return {worst_group <= group_tol && worst_final <= final_tol && std::abs(f12 + 96) <= c12_tol,
          "C=10: max group " + fmt(worst_group) + " (tol " + fmt(group_tol) + "), max |final_bound| " +
              fmt(worst_final) + "; C=12 r=1: final_bound " + fmt(f12) + " (want -96 +- " + fmt(c12_tol) + ")"};
}

// 9
Outcome consistency() {
  constexpr double tol = 1e-9;
  double worst = 0;
  for (int n : dims)
    for (const auto& m : presets(n)) {
      const auto p = compute_profile(m);
      for (double r : p.grid()) worst = std::max(worst, consistency_hess_vs_H(p, r));
    }
  return {worst <= tol, "max |Hess b^2 - (2 - 2/(n-2) G^-alpha H)| = " + fmt(worst) + ", tol " + fmt(tol)};
}

// 10
Outcome determinism() {
  RunConfig cfg;
  cfg.model = "smoothed-cone:0.5:1";
  const auto a = dump_report(run_command("verify", cfg).report);
  const auto b = dump_report(run_command("verify", cfg).report);
  cfg.model = "euclidean";
  const auto c = dump_report(run_command("verify", cfg).report);
  const auto d = dump_report(run_command("verify", cfg).report);
  return {a == b && c == d, "reports of " + std::to_string(a.size()) + " and " + std::to_string(c.size()) +
                                " bytes" + (a == b && c == d ? " identical" : " differ")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "euclidean exactness", 5, euclidean_exactness},
      {2, "gradient estimate", 10, gradient_estimate},
      {3, "cone closed form", 0, cone_closed_form},
      {4, "symbolic zero-reduction", 30, symbolic_zero},
      {5, "commutator oracle", 0, commutator_oracle},
      {6, "Delta G^alpha identity", 0, g_alpha_identity},
      {7, "corollary", 0, corollary},
      {8, "proof-term audit", 0, proof_audit},
      {9, "Hess b^2 vs H consistency", 0, consistency},
      {10, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt(s) + " s";
    if (c.budget_s > 0) {
      timing += " (budget " + fmt(c.budget_s) + " s)";
      if (s > c.budget_s) o.pass = false;
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
