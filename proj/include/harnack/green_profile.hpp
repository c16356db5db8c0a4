#pragma once

/// \file
/// Minimal positive Green function with pole at the tip of a model manifold,
/// normalized so that G ~ r^{2-n} at the pole of a smooth tip, together with
/// b = G^{1/(2-n)} and the eigenvalues of Hess b^2.

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "harnack/errors.hpp"
#include "harnack/format.hpp"
#include "harnack/model_manifolds.hpp"

namespace harnack {

/// Every radial quantity at a single radius.
struct GreenPoint {
  double r;
  double f, fp, fpp;
  double G, Gp, Gpp;
  double b, b2, b2p, b2pp, grad_b;
  double mu_rad, mu_tan;
  double G_alpha;
};

struct NonParabolicityReport {
  bool varopoulos_integral_finite = false;
  double tail_exponent = 0.0;
  /// Non-empty when the profile does not grow asymptotically linearly.
  std::string diagnostic;
};

inline constexpr double tail_exponent_tol = 1e-6;

/// Decay exponent of t / Vol B(t), measured from two far-out radii.
inline NonParabolicityReport nonparabolic_check(const ModelManifold& m, double s) {
  if (!(s > 0.0)) throw InvalidInput("nonparabolic_check needs s > 0");
  double far = s;
  for (const auto& seg : m.profile.segments())
    if (std::isfinite(seg.hi)) far = std::max(far, seg.hi);
  const double t1 = far * 1e3, t2 = t1 * 10.0;
  NonParabolicityReport rep;
  try {
    const double q1 = t1 / (volume_growth(m, t1) * std::pow(t1, m.n));
    const double q2 = t2 / (volume_growth(m, t2) * std::pow(t2, m.n));
    rep.tail_exponent = std::log(q2 / q1) / std::log(t2 / t1);
  } catch (const NumericalFailure& e) {
    rep.tail_exponent = std::numeric_limits<double>::quiet_NaN();
    rep.diagnostic = std::string("volume integral failed: ") + e.what();
    return rep;
  }
  rep.varopoulos_integral_finite = rep.tail_exponent < -1.0 - tail_exponent_tol;
  const PowerLaw out = m.profile.outer_law();
  if (std::abs(out.p - 1.0) > 1e-9)
    rep.diagnostic = "warping profile grows like r^" + shortest(out.p) + ", not asymptotically linearly";
  return rep;
}

namespace detail {

inline void require_nonparabolic(const ModelManifold& m) {
  const auto rep = nonparabolic_check(m, 1.0);
  if (!rep.varopoulos_integral_finite)
    throw InvalidInput("model " + m.id() + " is parabolic (tail exponent " + shortest(rep.tail_exponent) +
                       "); no positive Green function");
}

}  // namespace detail

/// G(r) = (n-2) * integral_r^inf f^{1-n}.
inline double green_value(const ModelManifold& m, double r) {
  if (!(r > 0.0)) throw InvalidInput("Green function evaluated at r <= 0");
  return (m.n - 2) * radial_integral(m.profile, 1.0 - m.n, r, std::numeric_limits<double>::infinity());
}

/// All radial quantities at r, from G by quadrature and G', G'' in closed form.
inline GreenPoint green_at(const ModelManifold& m, double r) {
  const double n = m.n;
  const Jet j = m.profile.jet(r);
  GreenPoint p{};
  p.r = r;
  p.f = j.f;
  p.fp = j.fp;
  p.fpp = j.fpp;
  p.G = green_value(m, r);
  p.Gp = -(n - 2) * std::pow(j.f, 1.0 - n);
  p.Gpp = (n - 2) * (n - 1) * std::pow(j.f, -n) * j.fp;
  const double e = 2.0 / (2.0 - n);  // b^2 = G^e
  p.b = std::pow(p.G, 1.0 / (2.0 - n));
  p.b2 = std::pow(p.G, e);
  p.b2p = e * std::pow(p.G, e - 1.0) * p.Gp;
  p.b2pp = e * ((e - 1.0) * std::pow(p.G, e - 2.0) * p.Gp * p.Gp + std::pow(p.G, e - 1.0) * p.Gpp);
  p.grad_b = std::pow(j.f, 1.0 - n) * std::pow(p.G, -(n - 1) / (n - 2));
  p.mu_rad = p.b2pp;
  p.mu_tan = p.b2p * j.fp / j.f;
  p.G_alpha = std::pow(p.G, n / (n - 2));
  return p;
}

/// Logarithmically spaced radii.
inline std::vector<double> log_grid(double r_min = 1e-2, double r_max = 1e2, std::size_t points = 512) {
  if (!(r_min > 0.0) || !(r_max > r_min) || points < 2) throw InvalidInput("bad grid specification");
  std::vector<double> g(points);
  const double a = std::log(r_min), b = std::log(r_max);
  for (std::size_t i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * double(i) / double(points - 1));
  g.front() = r_min;
  g.back() = r_max;
  return g;
}

class RadialGreenProfile {
 public:
  RadialGreenProfile(ModelManifold model, std::vector<double> grid) : model_(std::move(model)), grid_(std::move(grid)) {
    if (grid_.empty()) throw InvalidInput("empty radial grid");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!(grid_[i] > 0.0)) throw InvalidInput("grid point <= 0");
      if (i > 0 && !(grid_[i] > grid_[i - 1])) throw InvalidInput("grid must be strictly increasing");
    }
    detail::require_nonparabolic(model_);
    points_.reserve(grid_.size());
    for (double r : grid_) points_.push_back(green_at(model_, r));
  }

  const ModelManifold& model() const { return model_; }
  int n() const { return model_.n; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<GreenPoint>& points() const { return points_; }
  const GreenPoint& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }

  /// n / (n - 2) exactly.
  boost::rational<int> alpha() const { return {model_.n, model_.n - 2}; }

  bool in_range(double r) const { return r >= grid_.front() && r <= grid_.back(); }

  /// Exact evaluation at an arbitrary radius inside the grid range.
  GreenPoint at(double r) const {
    if (!in_range(r))
      throw InvalidInput("radius " + shortest(r) + " outside profile range [" + shortest(grid_.front()) + ", " +
                         shortest(grid_.back()) + "]");
    return green_at(model_, r);
  }

 private:
  ModelManifold model_;
  std::vector<double> grid_;
  std::vector<GreenPoint> points_;
};

inline RadialGreenProfile compute_profile(const ModelManifold& m, std::vector<double> grid = log_grid()) {
  return RadialGreenProfile(m, std::move(grid));
}

struct HessB2Eigs {
  double mu_rad;
  double mu_tan;
};

/// Eigenvalues of Hess b^2: radial (multiplicity 1) and tangential (n-1).
inline HessB2Eigs hess_b2_eigs(const RadialGreenProfile& p, double r) {
  const auto q = p.at(r);
  return {q.mu_rad, q.mu_tan};
}

/// |Delta G^beta - beta(beta-1) G^{beta-2} |grad G|^2| with the radial Laplacian
/// u'' + (n-1)(f'/f) u'.
inline double check_power_laplacian(const RadialGreenProfile& p, double r, double beta) {
  const auto q = p.at(r);
  const double u1 = beta * std::pow(q.G, beta - 1.0) * q.Gp;
  const double u2 = beta * (beta - 1.0) * std::pow(q.G, beta - 2.0) * q.Gp * q.Gp + beta * std::pow(q.G, beta - 1.0) * q.Gpp;
  const double lap = u2 + (p.n() - 1) * (q.fp / q.f) * u1;
  return std::abs(lap - beta * (beta - 1.0) * std::pow(q.G, beta - 2.0) * q.Gp * q.Gp);
}

inline void write_profile_csv(const RadialGreenProfile& p, std::ostream& os) {
  os << "r,G,Gp,Gpp,b,b2,grad_b,mu_rad,mu_tan\n";
  for (const auto& q : p.points()) {
    os << shortest(q.r) << ',' << shortest(q.G) << ',' << shortest(q.Gp) << ',' << shortest(q.Gpp) << ','
       << shortest(q.b) << ',' << shortest(q.b2) << ',' << shortest(q.grad_b) << ',' << shortest(q.mu_rad) << ','
       << shortest(q.mu_tan) << '\n';
  }
}

}  // namespace harnack
