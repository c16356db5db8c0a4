#pragma once

/// \file
/// Geodesics in the totally geodesic 2-plane slice dr^2 + f(r)^2 dphi^2 of a
/// model manifold, distances by angle shooting, and the convexity check of
/// (C/2) s^2 - b^2 along minimal geodesics.

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "harnack/errors.hpp"
#include "harnack/format.hpp"
#include "harnack/green_profile.hpp"
#include "harnack/model_manifolds.hpp"

namespace harnack {

struct SlicePoint {
  double r;
  double phi;
};

inline constexpr double default_r_floor = 1e-4;

struct GeodesicOptions {
  double r_floor = default_r_floor;
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
};

struct PathSample {
  double s, r, phi;
};

struct GeodesicPath {
  std::vector<PathSample> samples;  // every accepted step
  SlicePoint end{};
  double length = 0;  // arclength actually integrated
  double clairaut = 0;  // f^2 phi'
  bool truncated = false;  // stopped at r <= r_floor
  double min_r = 0;
  double max_speed_defect = 0;  // sup |r'^2 + f^2 phi'^2 - 1|
};

namespace detail {

using GeoState = std::array<double, 3>;  // r, r', phi

inline double wrap_angle(double a) {
  constexpr double two_pi = 2 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

/// Integrates the slice geodesic flow; `stop` is called after every step with
/// (previous state, s_prev, current state, s, stepper) and returns true to stop.
template <class Stop>
GeodesicPath integrate_geodesic(const ModelManifold& m, SlicePoint start, double angle, double length,
                                const GeodesicOptions& opt, Stop&& stop) {
  namespace ode = boost::numeric::odeint;
  if (!(start.r > 0.0)) throw InvalidInput("geodesic start needs r > 0");
  if (!(length > 0.0)) throw InvalidInput("geodesic length must be > 0");
  const double L = m.profile.f(start.r) * std::sin(angle);
  const auto rhs = [&](const GeoState& x, GeoState& dx, double) {
    const Jet j = m.profile.jet(x[0]);
    dx[0] = x[1];
    dx[1] = L * L * j.fp / (j.f * j.f * j.f);
    dx[2] = L / (j.f * j.f);
  };
  const auto speed_defect = [&](const GeoState& x) {
    const double f = m.profile.f(x[0]);
    return std::abs(x[1] * x[1] + L * L / (f * f) - 1.0);
  };
  auto stepper = ode::make_dense_output(opt.abs_tol, opt.rel_tol, ode::runge_kutta_dopri5<GeoState>());
  GeoState x{start.r, std::cos(angle), start.phi};
  stepper.initialize(x, 0.0, 1e-3 * std::min(start.r, length));
  GeodesicPath path;
  path.clairaut = L;
  path.min_r = start.r;
  path.samples.push_back({0.0, start.r, start.phi});
  GeoState prev = x;
  double s_prev = 0.0;
  while (true) {
    if (stepper.current_time() + stepper.current_time_step() > length)
      stepper.initialize(stepper.current_state(), stepper.current_time(), length - stepper.current_time());
    // a step that would leave r > 0 is retried shorter
    GeoState trial;
    double dt = stepper.current_time_step();
    while (true) {
      try {
        stepper.do_step(rhs);
        break;
      } catch (const InvalidInput&) {
        dt *= 0.5;
        if (dt < 1e-14 * length) throw NumericalFailure("geodesic step underflow near r = 0");
        stepper.initialize(prev, s_prev, dt);
      }
    }
    trial = stepper.current_state();
    const double s = stepper.current_time();
    path.max_speed_defect = std::max(path.max_speed_defect, speed_defect(trial));
    path.min_r = std::min(path.min_r, trial[0]);
    path.samples.push_back({s, trial[0], trial[2]});
    if (stop(prev, s_prev, trial, s, stepper)) break;
    if (trial[0] <= opt.r_floor) {
      path.truncated = true;
      break;
    }
    if (s >= length * (1 - 1e-15)) break;
    prev = trial;
    s_prev = s;
  }
  const auto& last = path.samples.back();
  path.end = {last.r, wrap_angle(last.phi)};
  path.length = last.s;
  return path;
}

}  // namespace detail

/// Unit-speed geodesic from `start`; `angle` is measured from the outward radial
/// direction towards increasing phi.
inline GeodesicPath shoot_geodesic(const ModelManifold& m, SlicePoint start, double angle, double length,
                                   const GeodesicOptions& opt = {}) {
  return detail::integrate_geodesic(m, start, angle, length, opt, [](auto&&...) { return false; });
}

/// Distance in the flat wedge of opening 2 pi c obtained by unrolling a cone.
inline double cone_unrolled_distance(double c, SlicePoint y, SlicePoint z) {
  double dphi = detail::wrap_angle(z.phi - y.phi);
  dphi = std::min(dphi, 2 * std::numbers::pi - dphi);
  if (c * dphi >= std::numbers::pi) return y.r + z.r;
  return std::sqrt(std::max(0.0, y.r * y.r + z.r * z.r - 2 * y.r * z.r * std::cos(c * dphi)));
}

struct DistanceResult {
  double d = 0;
  double angle = 0;  // initial angle at y of the minimizing geodesic
  bool through_pole = false;  // the broken radial path through the pole is shortest
  bool near_pole = false;  // minimizer comes within r_floor of the pole
  double min_r = 0;
  int iterations = 0;
  double bracket_lo = 0, bracket_hi = 0;
};

struct DistanceOptions {
  GeodesicOptions geo;
  int max_iterations = 200;
  double angle_tol = 1e-15;
};

namespace detail {

enum class Hit { crossed, outward, pole };

struct ShotResult {
  Hit hit;
  double r;  // radius where phi reaches the target
  double s;  // arclength there
  double min_r;
};

/// Follows the geodesic until its swept angle reaches `target`.
inline ShotResult shoot_to_angle(const ModelManifold& m, SlicePoint y, double angle, double target, double cap,
                                 const GeodesicOptions& opt) {
  ShotResult res{Hit::outward, 0, 0, y.r};
  const double phi_t = y.phi + target;
  auto stop = [&](const GeoState& prev, double s0, const GeoState& cur, double s1, auto& stepper) {
    if (cur[2] < phi_t) return false;
    double lo = s0, hi = s1;
    GeoState x = cur;
    for (int k = 0; k < 200 && hi - lo > 1e-16 * hi; ++k) {
      const double mid = 0.5 * (lo + hi);
      stepper.calc_state(mid, x);
      (x[2] < phi_t ? lo : hi) = mid;
    }
    stepper.calc_state(hi, x);
    (void)prev;
    res.hit = Hit::crossed;
    res.s = hi;
    res.r = x[0];
    return true;
  };
  const auto path = integrate_geodesic(m, y, angle, cap, opt, stop);
  res.min_r = path.min_r;
  if (res.hit != Hit::crossed && path.truncated) res.hit = Hit::pole;
  return res;
}

}  // namespace detail

/// Length of the minimizing geodesic in the slice, by shooting over the initial
/// angle with bisection on the radius at which the target ray is reached.
inline DistanceResult distance(const ModelManifold& m, SlicePoint y, SlicePoint z, const DistanceOptions& opt = {}) {
  if (!(y.r > 0.0) || !(z.r > 0.0)) throw InvalidInput("distance needs points with r > 0");
  double dphi = detail::wrap_angle(z.phi - y.phi);
  const bool mirrored = dphi > std::numbers::pi;
  if (mirrored) dphi = 2 * std::numbers::pi - dphi;
  DistanceResult res;
  res.min_r = std::min(y.r, z.r);
  const double pole_len = y.r + z.r;
  if (dphi < 1e-15) {
    res.d = std::abs(z.r - y.r);
    res.angle = z.r >= y.r ? 0.0 : std::numbers::pi;
    return res;
  }
  // bisection on theta in (0, pi): outward shots need more turning, pole shots less
  const SlicePoint y0{y.r, 0.0};
  double lo = 0.0, hi = std::numbers::pi;
  detail::Hit lo_hit = detail::Hit::outward, hi_hit = detail::Hit::pole;
  detail::ShotResult best{detail::Hit::pole, 0, pole_len, 0};
  double best_angle = std::numbers::pi;
  int it = 0;
  for (; it < opt.max_iterations && hi - lo > opt.angle_tol; ++it) {
    const double th = 0.5 * (lo + hi);
    const auto shot = detail::shoot_to_angle(m, y0, th, dphi, 1.5 * pole_len, opt.geo);
    if (shot.hit == detail::Hit::outward || (shot.hit == detail::Hit::crossed && shot.r > z.r)) {
      lo = th;
      lo_hit = shot.hit;
    } else {
      hi = th;
      hi_hit = shot.hit;
    }
    if (shot.hit == detail::Hit::crossed) {
      best = shot;
      best_angle = th;
    }
  }
  res.iterations = it;
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  const bool converged = best.hit == detail::Hit::crossed && std::abs(best.r - z.r) <= 1e-9 * std::max(1.0, z.r);
  if (converged && best.s <= pole_len) {
    res.d = best.s;
    res.angle = mirrored ? 2 * std::numbers::pi - best_angle : best_angle;
    res.min_r = std::min(res.min_r, best.min_r);
    res.near_pole = best.min_r <= 10 * opt.geo.r_floor;
    return res;
  }
  // no geodesic reaches z without passing the pole region
  const bool pole_bracket = hi_hit == detail::Hit::pole && lo_hit == detail::Hit::outward;
  if (!converged && !pole_bracket)
    throw NumericalFailure("geodesic shooting did not converge after " + std::to_string(it) +
                           " bisections; angle bracket [" + shortest(lo) + ", " + shortest(hi) + "]");
  res.d = pole_len;
  res.angle = std::numbers::pi;
  res.through_pole = true;
  res.near_pole = true;
  res.min_r = 0.0;
  return res;
}

/// Point at arclength s along the minimizing geodesic from y to z.
inline SlicePoint point_along(const ModelManifold& m, SlicePoint y, SlicePoint z, const DistanceResult& dr, double s,
                              const GeodesicOptions& opt = {}) {
  if (s <= 0.0) return y;
  if (s >= dr.d) return z;
  if (dr.through_pole) {
    if (s < y.r) return {y.r - s, y.phi};
    return {s - y.r, z.phi};
  }
  return shoot_geodesic(m, y, dr.angle, s, opt).end;
}

struct GeodesicTriple {
  SlicePoint y, z, w;
  double lambda = 0;
  double d_yz = 0;
  double d_yw = 0, d_wz = 0;
  double b2_y = 0, b2_z = 0, b2_w = 0;
  double rhs = 0;
  double slack = 0;
  bool near_tip = false;
};

struct CorollaryOptions {
  DistanceOptions dist;
  /// Triples whose geodesic dips below this radius are flagged as near the tip.
  double tip_radius = 1e-2;
  bool triangle_check = true;
};

/// For each lambda, slack = b(w)^2 - [(1-l) b(y)^2 + l b(z)^2 - (C/2) l (1-l) d(y,z)^2].
inline std::vector<GeodesicTriple> corollary_check(const ModelManifold& m, const RadialGreenProfile& p, SlicePoint y,
                                                   SlicePoint z, double C, const std::vector<double>& lambdas,
                                                   const CorollaryOptions& opt = {}) {
  if (!(C >= 0.0)) throw InvalidInput("C must be >= 0");
  for (double l : lambdas)
    if (!(l >= 0.0 && l <= 1.0)) throw InvalidInput("lambda outside [0, 1]");
  const auto dyz = distance(m, y, z, opt.dist);
  const double b2y = p.at(y.r).b2, b2z = p.at(z.r).b2;
  std::vector<GeodesicTriple> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) {
    GeodesicTriple t;
    t.y = y;
    t.z = z;
    t.lambda = l;
    t.d_yz = dyz.d;
    t.w = l == 0.0 ? y : l == 1.0 ? z : point_along(m, y, z, dyz, l * dyz.d, opt.dist.geo);
    t.b2_y = b2y;
    t.b2_z = b2z;
    t.b2_w = p.at(t.w.r).b2;
    t.rhs = (1 - l) * b2y + l * b2z - 0.5 * C * l * (1 - l) * dyz.d * dyz.d;
    t.slack = t.b2_w - t.rhs;
    t.near_tip = dyz.through_pole || dyz.min_r < opt.tip_radius;
    if (opt.triangle_check) {
      t.d_yw = l == 0.0 ? 0.0 : distance(m, y, t.w, opt.dist).d;
      t.d_wz = l == 1.0 ? 0.0 : distance(m, t.w, z, opt.dist).d;
    }
    out.push_back(t);
  }
  return out;
}

inline void write_corollary_csv(const std::vector<GeodesicTriple>& ts, std::ostream& os) {
  os << "lambda,d_yz,b2_w,rhs,slack\n";
  for (const auto& t : ts)
    os << shortest(t.lambda) << ',' << shortest(t.d_yz) << ',' << shortest(t.b2_w) << ',' << shortest(t.rhs) << ','
       << shortest(t.slack) << '\n';
}

}  // namespace harnack
