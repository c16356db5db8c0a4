#pragma once

/// \file
/// Diagnostics for the curvature and growth hypotheses on a model manifold.

#include <algorithm>
#include <cmath>
#include <limits>

#include "harnack/errors.hpp"
#include "harnack/fd_oracle.hpp"
#include "harnack/green_profile.hpp"
#include "harnack/model_manifolds.hpp"

namespace harnack {

struct HypothesisOptions {
  double tol = 1e-9;
  /// Threshold on the scale-free r^3 |nabla Ric| (Richardson-extrapolated).
  double parallel_ricci_tol = 1e-6;
  double h = 1e-3;
};

struct HypothesisReport {
  bool nonneg_sectional_along_gradG = false;
  double sectional_margin = 0;  // min k_rad over probes
  double sectional_worst_r = 0;
  bool nonneg_ricci = false;
  double ricci_margin = 0;  // min over probes of min(ric_rad, ric_tan)
  double ricci_worst_r = 0;
  bool parallel_ricci = false;
  double parallel_ricci_residual = 0;  // sup |nabla Ric| over probes
  double parallel_ricci_scaled = 0;    // sup r^3 |nabla Ric|
  bool euclidean_volume_growth = false;
  double volume_ratio_inf = 0;  // inf of Vol B(t) / t^n over probes
  bool nonparabolic = false;
  double tail_exponent = 0;
  bool singular_tip = false;
  double tol = 0;

  bool all_hold() const {
    return nonneg_sectional_along_gradG && nonneg_ricci && parallel_ricci && euclidean_volume_growth && nonparabolic &&
           !singular_tip;
  }
};

inline std::vector<double> probe_radii(double r_min, double r_max, int probes) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw InvalidInput("probe range needs 0 < r_min < r_max");
  if (probes < 2) throw InvalidInput("at least two probes are required");
  return log_grid(r_min, r_max, std::size_t(probes));
}

inline HypothesisReport hypothesis_report(const ModelManifold& m, double r_min, double r_max, int probes,
                                          const HypothesisOptions& opt = {}) {
  const auto radii = probe_radii(r_min, r_max, probes);
  HypothesisReport rep;
  rep.tol = opt.tol;
  rep.sectional_margin = std::numeric_limits<double>::infinity();
  rep.ricci_margin = std::numeric_limits<double>::infinity();
  rep.volume_ratio_inf = std::numeric_limits<double>::infinity();
  const fd::CoordinateChart chart = fd::warped_chart(m);
  for (double r : radii) {
    const auto k = curvature_at(m, r);
    if (k.k_rad < rep.sectional_margin) {
      rep.sectional_margin = k.k_rad;
      rep.sectional_worst_r = r;
    }
    const double ric = std::min(k.ric_rad, k.ric_tan);
    if (ric < rep.ricci_margin) {
      rep.ricci_margin = ric;
      rep.ricci_worst_r = r;
    }
    fd::Vec x = chart.base_point;
    x(0) = r;
    const double nr = double(fd::check_parallel_ricci(chart, x, opt.h).value);
    rep.parallel_ricci_residual = std::max(rep.parallel_ricci_residual, nr);
    rep.parallel_ricci_scaled = std::max(rep.parallel_ricci_scaled, nr * r * r * r);
    rep.volume_ratio_inf = std::min(rep.volume_ratio_inf, volume_growth(m, r));
  }
  rep.nonneg_sectional_along_gradG = rep.sectional_margin >= -opt.tol;
  rep.nonneg_ricci = rep.ricci_margin >= -opt.tol;
  rep.parallel_ricci = rep.parallel_ricci_scaled <= opt.parallel_ricci_tol;
  rep.euclidean_volume_growth = rep.volume_ratio_inf > opt.tol && m.profile.outer_law().p >= 1.0 - 1e-9;
  const auto np = nonparabolic_check(m, r_min);
  rep.nonparabolic = np.varopoulos_integral_finite;
  rep.tail_exponent = np.tail_exponent;
  rep.singular_tip = m.profile.singular_tip();
  return rep;
}

}  // namespace harnack
