#pragma once

/// \file
/// The Harnack quantity H~ = Hess G + n/(2-n) dG x dG / G + (n-2)/2 C G^alpha g
/// on model manifolds, its lowest eigenvalue, the bound Hess b^2 <= C g and a
/// term-by-term audit of the maximum principle argument.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include "harnack/errors.hpp"
#include "harnack/green_profile.hpp"
#include "harnack/hypotheses.hpp"
#include "harnack/model_manifolds.hpp"

namespace harnack {

inline constexpr double margin_tol = 1e-8;
inline constexpr double identity_tol = 1e-9;
inline constexpr double faithful_C = 10.0;

struct HTildeEigs {
  double h_rad;
  double h_tan;
};

namespace detail {

inline HTildeEigs htilde_from(const GreenPoint& q, int n, double C) {
  const double shift = 0.5 * (n - 2) * C * q.G_alpha;
  return {q.Gpp + (double(n) / (2.0 - n)) * q.Gp * q.Gp / q.G + shift, q.Gp * q.fp / q.f + shift};
}

inline void require_C(double C) {
  if (!(C >= 0.0) || !std::isfinite(C)) throw InvalidInput("C must be a finite number >= 0");
}

}  // namespace detail

inline HTildeEigs htilde_eigs(const RadialGreenProfile& p, double r, double C) {
  detail::require_C(C);
  return detail::htilde_from(p.at(r), p.n(), C);
}

/// Eigenvalues of H, i.e. H~ with C = 2.
inline HTildeEigs h_eigs(const RadialGreenProfile& p, double r) { return htilde_eigs(p, r, 2.0); }

enum class Direction { radial, tangential, degenerate };

inline std::string to_string(Direction d) {
  switch (d) {
    case Direction::radial: return "radial";
    case Direction::tangential: return "tangential";
    case Direction::degenerate: return "degenerate";
  }
  return "?";
}

struct LambdaMin {
  double lambda;
  Direction minimizer;
};

namespace detail {

inline LambdaMin lambda_of(const HTildeEigs& h) {
  const double scale = std::max({1.0, std::abs(h.h_rad), std::abs(h.h_tan)});
  if (std::abs(h.h_rad - h.h_tan) <= identity_tol * scale) return {std::min(h.h_rad, h.h_tan), Direction::degenerate};
  if (h.h_rad < h.h_tan) return {h.h_rad, Direction::radial};
  return {h.h_tan, Direction::tangential};
}

}  // namespace detail

/// H~ eigenvalues, Lambda and the top eigenvalue of B on every grid point.
class HarnackState {
 public:
  HarnackState(const RadialGreenProfile& profile, double C) : profile_(profile), C_(C) {
    detail::require_C(C);
    const std::size_t m = profile.size();
    h_rad_.resize(m);
    h_tan_.resize(m);
    lambda_.resize(m);
    minimizer_.resize(m);
    b_top_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& q = profile[i];
      const auto h = detail::htilde_from(q, profile.n(), C);
      const auto l = detail::lambda_of(h);
      h_rad_[i] = h.h_rad;
      h_tan_[i] = h.h_tan;
      lambda_[i] = l.lambda;
      minimizer_[i] = l.minimizer;
      b_top_[i] = q.Gp * q.Gp / q.G;
    }
  }

  const RadialGreenProfile& profile() const { return profile_; }
  double C() const { return C_; }
  const std::vector<double>& h_rad() const { return h_rad_; }
  const std::vector<double>& h_tan() const { return h_tan_; }
  const std::vector<double>& lambda() const { return lambda_; }
  const std::vector<Direction>& minimizer() const { return minimizer_; }
  const std::vector<double>& b_top() const { return b_top_; }

 private:
  RadialGreenProfile profile_;
  double C_;
  std::vector<double> h_rad_, h_tan_, lambda_;
  std::vector<Direction> minimizer_;
  std::vector<double> b_top_;
};

inline LambdaMin lambda_min(const HarnackState& s, double r) {
  return detail::lambda_of(htilde_eigs(s.profile(), r, s.C()));
}

/// max over eigendirections of |mu - (2 - 2/(n-2) G^{-alpha} h_H)|.
inline double consistency_hess_vs_H(const RadialGreenProfile& p, double r) {
  const auto q = p.at(r);
  const auto h = detail::htilde_from(q, p.n(), 2.0);
  const double s = 2.0 / (p.n() - 2) / q.G_alpha;
  return std::max(std::abs(q.mu_rad - (2.0 - s * h.h_rad)), std::abs(q.mu_tan - (2.0 - s * h.h_tan)));
}

/// Both sides of Hess b^2 <= C g  <=>  Lambda >= 0 at one radius.
struct PointwiseEquivalence {
  bool hess_bound;
  bool lambda_nonneg;
  bool agree() const { return hess_bound == lambda_nonneg; }
};

inline PointwiseEquivalence pointwise_equivalence(const RadialGreenProfile& p, double r, double C,
                                                  double tol = margin_tol) {
  const auto q = p.at(r);
  const auto l = detail::lambda_of(htilde_eigs(p, r, C));
  return {std::max(q.mu_rad, q.mu_tan) <= C + tol, l.lambda >= -tol * 0.5 * (p.n() - 2) * q.G_alpha};
}

// ---------------------------------------------------------------------------
// minimal C

struct MinimalCResult {
  double value;
  double argmax_r;
  double grid_value;
};

namespace detail {

inline double mu_max(const ModelManifold& m, double r) {
  const auto q = green_at(m, r);
  return std::max(q.mu_rad, q.mu_tan);
}

inline MinimalCResult minimal_C_on(const RadialGreenProfile& p) {
  std::size_t best = 0;
  double v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double u = std::max(p[i].mu_rad, p[i].mu_tan);
    if (u > v) {
      v = u;
      best = i;
    }
  }
  MinimalCResult res{v, p[best].r, v};
  if (best == 0 || best + 1 == p.size()) return res;
  const auto& m = p.model();
  const auto neg = [&](double r) { return -mu_max(m, r); };
  const auto [r, f] = boost::math::tools::brent_find_minima(neg, p[best - 1].r, p[best + 1].r, 52);
  if (-f > res.value) {
    res.value = -f;
    res.argmax_r = r;
  }
  return res;
}

}  // namespace detail

/// sup over [r_min, r_max] of the top eigenvalue of Hess b^2.
inline MinimalCResult minimal_C(const ModelManifold& m, double r_min, double r_max, std::size_t points = 512) {
  return detail::minimal_C_on(compute_profile(m, log_grid(r_min, r_max, points)));
}

// ---------------------------------------------------------------------------
// theorem check

enum class RunMode { faithful, exploratory };

inline std::string to_string(RunMode m) { return m == RunMode::faithful ? "faithful" : "exploratory"; }

struct Violation {
  double r, mu_rad, mu_tan;
};

struct BoundaryValue {
  double r, mu_rad, mu_tan, lambda;
  /// Limit of both eigenvalues for an asymptotically conical end, NaN otherwise.
  double analytic_limit;
};

struct DConsistency {
  double D;
  bool hess_le_D;  // Hess b^2 <= D g on the grid
  bool lambda_bound;  // Lambda >= (n-2)/2 (C-D) G^alpha on the grid
  double worst_gap;  // min of Lambda - (n-2)/2 (C-D) G^alpha
};

struct VerifyOptions {
  std::size_t points = 512;
  double tol = margin_tol;
  bool allow_exploratory = false;
  std::optional<double> D;
  int hypothesis_probes = 12;
};

struct HarnackReport {
  std::string model;
  int n = 0;
  double C = 0;
  double r_min = 0, r_max = 0;
  bool pass = false;
  RunMode mode = RunMode::faithful;
  bool C_below_faithful = false;
  double worst_margin = 0;
  double worst_r = 0;
  double minimal_C = 0;
  double minimal_C_r = 0;
  std::vector<Violation> violations;
  BoundaryValue inner{}, outer{};
  HypothesisReport hypotheses;
  bool equivalence_ok = true;
  std::optional<DConsistency> d_check;
  double tol = 0;
};

/// Limit of mu_rad and mu_tan where f ~ a r: 2 a^{2(n-1)/(n-2)}.
inline double conical_mu_limit(const PowerLaw& law, int n) {
  if (std::abs(law.p - 1.0) > 1e-12) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * std::pow(law.a, 2.0 * (n - 1) / (n - 2));
}

inline HarnackReport verify_theorem(const ModelManifold& m, double C, double r_min, double r_max,
                                    const VerifyOptions& opt = {}) {
  detail::require_C(C);
  if (C < faithful_C && !opt.allow_exploratory)
    throw InvalidInput("C = " + shortest(C) + " < 10 needs an exploratory run");
  const auto prof = compute_profile(m, log_grid(r_min, r_max, opt.points));
  const HarnackState st(prof, C);
  HarnackReport rep;
  rep.model = m.id();
  rep.n = m.n;
  rep.C = C;
  rep.r_min = r_min;
  rep.r_max = r_max;
  rep.tol = opt.tol;
  rep.C_below_faithful = C < faithful_C;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const auto& q = prof[i];
    const double top = std::max(q.mu_rad, q.mu_tan);
    if (C - top < rep.worst_margin) {
      rep.worst_margin = C - top;
      rep.worst_r = q.r;
    }
    if (top > C + opt.tol) rep.violations.push_back({q.r, q.mu_rad, q.mu_tan});
    const bool lam_ok = st.lambda()[i] >= -opt.tol * 0.5 * (m.n - 2) * q.G_alpha;
    if (lam_ok != (top <= C + opt.tol)) rep.equivalence_ok = false;
  }
  rep.pass = rep.worst_margin >= -opt.tol;
  const auto mc = detail::minimal_C_on(prof);
  rep.minimal_C = mc.value;
  rep.minimal_C_r = mc.argmax_r;
  const auto bv = [&](std::size_t i, const PowerLaw& law) {
    const auto& q = prof[i];
    return BoundaryValue{q.r, q.mu_rad, q.mu_tan, st.lambda()[i], conical_mu_limit(law, m.n)};
  };
  rep.inner = bv(0, m.profile.inner_law());
  rep.outer = bv(prof.size() - 1, m.profile.outer_law());
  rep.hypotheses = hypothesis_report(m, r_min, r_max, opt.hypothesis_probes);
  rep.mode = (rep.C_below_faithful || !rep.hypotheses.all_hold()) ? RunMode::exploratory : RunMode::faithful;
  if (opt.D) {
    DConsistency d{*opt.D, true, true, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const auto& q = prof[i];
      if (std::max(q.mu_rad, q.mu_tan) > d.D + opt.tol) d.hess_le_D = false;
      const double gap = st.lambda()[i] - 0.5 * (m.n - 2) * (C - d.D) * q.G_alpha;
      d.worst_gap = std::min(d.worst_gap, gap);
      if (gap < -opt.tol * std::max(1.0, q.G_alpha)) d.lambda_bound = false;
    }
    rep.d_check = d;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// proof audit

struct AuditFlags {
  bool lambda_negative = false;  // premise of the argument at this point
  bool parallel_ricci = false;
  bool nonneg_sectional = false;
  bool nonneg_ricci = false;  // needed by the gradient estimate |grad b| <= 1
  bool gradient_estimate = false;  // |grad b| <= 1 holds at r
  bool C_at_least_10 = false;
  /// Groups whose sign claim rests on a hypothesis that fails here.
  std::vector<std::string> relied_on_unmet;
};

struct TermAudit {
  double r = 0;
  double C = 0;
  Direction V = Direction::radial;
  double lambda = 0;
  double group_curv1 = 0;
  double group_curv2 = 0;
  double group_Hsq = 0;
  double group_Csq = 0;  // group_Csq_raw - Csq_bound
  double group_Csq_raw = 0;
  double Csq_bound = 0;  // -(n(n-2)/2) C (C-8) G^{2 alpha - 1}
  double group_mixed = 0;  // group_mixed_raw - mixed_bound
  double group_mixed_raw = 0;
  double mixed_bound = 0;  // 2n/((n-2)G) [(n-2) C G^alpha - 4 |grad G|^2 / ((n-2) G)] Lambda
  double lap_G_alpha_term = 0;  // (n-2)/2 C Delta G^alpha
  double assembled = 0;  // sum of groups plus the G^alpha term
  double lap_htilde_VV = 0;  // (Delta H~)(V, V) by differencing
  double lemma_residual = 0;  // |lap_htilde_VV - assembled| / scale
  double final_bound = 0;  // -(n(n-2)/2) C (C-10) G^{2 alpha - 1}
  AuditFlags hypothesis_flags;
  /// Sign claims of the argument evaluated at r (meaningful when the premise holds).
  bool curv1_nonpos = false, curv2_nonpos = false, Hsq_nonpos = false, Csq_below_bound = false,
       mixed_nonpos = false, final_holds = false;
};

namespace detail {

/// H~ eigenvalue curves near r0, with G continued from G(r0) by Gauss-Legendre on
/// [r0, r] so differencing does not see adaptive-quadrature noise.
struct LocalCurves {
  const ModelManifold& m;
  double r0, G0, C;

  HTildeEigs operator()(double r) const {
    const double n = m.n;
    const auto w = [&](double t) { return std::pow(m.profile.f(t), 1.0 - n); };
    const double I = boost::math::quadrature::gauss<double, 20>::integrate(w, r0, r);
    const Jet j = m.profile.jet(r);
    GreenPoint q{};
    q.f = j.f;
    q.fp = j.fp;
    q.G = G0 - (n - 2) * I;
    q.Gp = -(n - 2) * std::pow(j.f, 1.0 - n);
    q.Gpp = (n - 2) * (n - 1) * std::pow(j.f, -n) * j.fp;
    q.G_alpha = std::pow(q.G, n / (n - 2));
    return htilde_from(q, m.n, C);
  }
};

struct RadialDerivs {
  double a1, a2, b1, b2;
};

inline RadialDerivs curve_derivatives(const LocalCurves& c, double r) {
  const auto at = [&](double h) {
    const auto p = c(r + h), mm = c(r - h), z = c(r);
    return RadialDerivs{(p.h_rad - mm.h_rad) / (2 * h), (p.h_rad - 2 * z.h_rad + mm.h_rad) / (h * h),
                        (p.h_tan - mm.h_tan) / (2 * h), (p.h_tan - 2 * z.h_tan + mm.h_tan) / (h * h)};
  };
  const double h = 1e-4 * r;
  const auto d1 = at(h), d2 = at(h / 2);
  const auto rich = [](double x, double y) { return (4 * y - x) / 3; };
  return {rich(d1.a1, d2.a1), rich(d1.a2, d2.a2), rich(d1.b1, d2.b1), rich(d1.b2, d2.b2)};
}

}  // namespace detail

/// Rough Laplacian of a P + b Q (P = dr^2, Q = g - P) at r: (radial, tangential) eigenvalues.
inline HTildeEigs rough_laplacian_htilde(const ModelManifold& m, const GreenPoint& q, double C) {
  const detail::LocalCurves curves{m, q.r, q.G, C};
  const auto d = detail::curve_derivatives(curves, q.r);
  const auto h = detail::htilde_from(q, m.n, C);
  const double n = m.n, w = q.fp / q.f, w2 = w * w;
  const double lap_a = d.a2 + (n - 1) * w * d.a1;
  const double lap_b = d.b2 + (n - 1) * w * d.b1;
  return {lap_a - 2 * (n - 1) * w2 * (h.h_rad - h.h_tan), lap_b + 2 * w2 * (h.h_rad - h.h_tan)};
}

inline TermAudit audit_proof_terms(const ModelManifold& m, const RadialGreenProfile& p, double r, double C,
                                   const HypothesisOptions& hopt = {}) {
  detail::require_C(C);
  const auto q = p.at(r);
  const auto k = curvature_at(m, r);
  const auto h = detail::htilde_from(q, m.n, C);
  const auto l = detail::lambda_of(h);
  const double n = m.n, G = q.G, Ga = q.G_alpha, Gp2 = q.Gp * q.Gp;
  const double pref = 2 * n / ((n - 2) * G);

  TermAudit a;
  a.r = r;
  a.C = C;
  a.V = l.minimizer == Direction::tangential ? Direction::tangential : Direction::radial;
  a.lambda = l.lambda;
  const bool radial = a.V == Direction::radial;
  const double lam = radial ? h.h_rad : h.h_tan;
  const double B_VV = radial ? Gp2 / G : 0.0;

  if (radial)
    a.group_curv1 = 2 * (n - 1) * k.k_rad * (lam - h.h_tan);
  else
    a.group_curv1 = 2 * (k.k_rad * (lam - h.h_rad) + (n - 2) * k.k_tan * (lam - h.h_tan));
  a.group_curv2 = radial ? 0.0 : -pref * k.k_rad * Gp2;
  a.group_Hsq = -pref * lam * lam;
  a.group_Csq_raw = -0.5 * n * (n - 2) * C * C * Ga * Ga / G +
                (4 * n / (n - 2)) * (C * Ga / G - 2 * Gp2 / ((n - 2) * (n - 2) * G * G)) * B_VV;
  a.Csq_bound = -0.5 * n * (n - 2) * C * (C - 8) * Ga * Ga / G;
  a.group_mixed_raw = pref * (2 * (2 / (2 - n)) * B_VV * lam + (n - 2) * C * Ga * lam);
  a.mixed_bound = pref * ((n - 2) * C * Ga - 4 * Gp2 / ((n - 2) * G)) * lam;
  a.group_Csq = a.group_Csq_raw - a.Csq_bound;
  a.group_mixed = pref * (4 / (n - 2)) * lam * (Gp2 / G - B_VV);  // raw - bound, reduced
  a.lap_G_alpha_term = 0.5 * (n - 2) * C * (2 * n / ((n - 2) * (n - 2))) * std::pow(G, n / (n - 2) - 2) * Gp2;
  a.assembled = a.group_curv1 + a.group_curv2 + a.group_Hsq + a.group_Csq_raw + a.group_mixed_raw + a.lap_G_alpha_term;
  a.final_bound = -0.5 * n * (n - 2) * C * (C - 10) * Ga * Ga / G;

  const auto lap = rough_laplacian_htilde(m, q, C);
  a.lap_htilde_VV = radial ? lap.h_rad : lap.h_tan;
  const double scale = std::max({1.0, std::abs(a.lap_htilde_VV), std::abs(a.group_Hsq), std::abs(a.group_Csq_raw)});
  a.lemma_residual = std::abs(a.lap_htilde_VV - a.assembled) / scale;

  auto& f = a.hypothesis_flags;
  f.lambda_negative = l.lambda < 0;
  f.nonneg_sectional = k.k_rad >= -hopt.tol && k.k_tan >= -hopt.tol;
  f.nonneg_ricci = k.ric_rad >= -hopt.tol && k.ric_tan >= -hopt.tol;
  f.gradient_estimate = q.grad_b <= 1.0 + identity_tol;
  f.C_at_least_10 = C >= faithful_C;
  {
    const auto chart = fd::warped_chart(m);
    fd::Vec x = chart.base_point;
    x(0) = r;
    const double nr = double(fd::check_parallel_ricci(chart, x, hopt.h).value);
    f.parallel_ricci = nr * r * r * r <= hopt.parallel_ricci_tol;
  }
  const double tol = margin_tol * scale;
  a.curv1_nonpos = a.group_curv1 <= tol;
  a.curv2_nonpos = a.group_curv2 <= tol;
  a.Hsq_nonpos = a.group_Hsq <= tol;
  a.Csq_below_bound = a.group_Csq <= tol;
  a.mixed_nonpos = a.group_mixed <= tol && a.mixed_bound <= tol;
  a.final_holds = a.assembled <= a.final_bound + tol;

  if (!f.parallel_ricci) f.relied_on_unmet.push_back("parallel_ricci");
  if (!f.nonneg_sectional) f.relied_on_unmet.push_back("group_curv1");
  if (!(k.k_rad >= -hopt.tol)) f.relied_on_unmet.push_back("group_curv2");
  if (!f.nonneg_ricci || !f.gradient_estimate) {
    f.relied_on_unmet.push_back("group_Csq");
    f.relied_on_unmet.push_back("group_mixed");
  }
  if (!f.lambda_negative && (f.relied_on_unmet.empty() || f.relied_on_unmet.back() != "group_mixed"))
    f.relied_on_unmet.push_back("group_mixed");
  if (!f.C_at_least_10) f.relied_on_unmet.push_back("final_bound");
  return a;
}

}  // namespace harnack
