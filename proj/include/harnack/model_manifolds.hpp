#pragma once

/// \file
/// Rotationally symmetric model manifolds g = dr^2 + f(r)^2 g_{S^{n-1}} and
/// their closed-form curvature and volume growth.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/interpolators/quintic_hermite.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "harnack/errors.hpp"
#include "harnack/format.hpp"

namespace harnack {

enum class ProfileKind { euclidean, cone, smoothed_cone, custom };

inline std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::euclidean: return "euclidean";
    case ProfileKind::cone: return "cone";
    case ProfileKind::smoothed_cone: return "smoothed_cone";
    case ProfileKind::custom: return "custom";
  }
  return "?";
}

/// f(r) = a * r^p on a radial interval.
struct PowerLaw {
  double a = 1.0;
  double p = 1.0;
  double f(double r) const { return a * std::pow(r, p); }
  double fp(double r) const { return a * p * std::pow(r, p - 1.0); }
  double fpp(double r) const { return a * p * (p - 1.0) * std::pow(r, p - 2.0); }
};

struct ProfileSample {
  double r, f, fp, fpp;
};

/// Maximal radial interval [lo, hi) on which f is either an exact power law
/// or a smooth interpolant.
struct ProfileSegment {
  double lo, hi;
  std::optional<PowerLaw> law;
};

struct Jet {
  double f, fp, fpp;
};

class WarpingProfile {
 public:
  static WarpingProfile euclidean() { return WarpingProfile(ProfileKind::euclidean); }

  static WarpingProfile cone(double c) {
    check_aperture(c);
    WarpingProfile w(ProfileKind::cone);
    w.c_ = c;
    return w;
  }

  static WarpingProfile smoothed_cone(double c, double r0) {
    check_aperture(c);
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw InvalidInput("smoothing radius must be positive");
    WarpingProfile w(ProfileKind::smoothed_cone);
    w.c_ = c;
    w.r0_ = r0;
    return w;
  }

  /// Sampled profile. Values between samples come from the quintic Hermite
  /// interpolant of (f, f', f''); outside the table f is continued by the
  /// power law matching f and f' at the end sample.
  static WarpingProfile custom(std::vector<ProfileSample> table, std::string source = {}) {
    if (table.size() < 2) throw InvalidInput("custom profile needs at least two samples");
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto& s = table[i];
      if (!std::isfinite(s.r) || !std::isfinite(s.f) || !std::isfinite(s.fp) || !std::isfinite(s.fpp))
        throw InvalidInput("custom profile has a non-finite sample");
      if (!(s.r > 0.0)) throw InvalidInput("custom profile radii must be positive");
      if (!(s.f > 0.0)) throw InvalidInput("custom profile has a non-positive f sample at r=" + std::to_string(s.r));
      if (i > 0 && !(s.r > table[i - 1].r)) throw InvalidInput("custom profile radii must be strictly increasing");
    }
    WarpingProfile w(ProfileKind::custom);
    std::vector<double> x, y, dy, d2y;
    for (const auto& s : table) {
      x.push_back(s.r);
      y.push_back(s.f);
      dy.push_back(s.fp);
      d2y.push_back(s.fpp);
    }
    w.spline_ = std::make_shared<Spline>(std::move(x), std::move(y), std::move(dy), std::move(d2y));
    w.inner_ = end_law(table.front());
    w.outer_ = end_law(table.back());
    w.table_ = std::move(table);
    w.source_ = std::move(source);
    return w;
  }

  /// Reads a CSV with header r,f,fp,fpp.
  static WarpingProfile from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open profile table: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("empty profile table: " + path);
    if (strip(line) != "r,f,fp,fpp") throw InvalidInput("profile table header must be r,f,fp,fpp");
    std::vector<ProfileSample> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (strip(line).empty()) continue;
      std::stringstream ss(line);
      std::string cell;
      double v[4];
      for (int k = 0; k < 4; ++k) {
        if (!std::getline(ss, cell, ',')) throw InvalidInput("short row at line " + std::to_string(lineno));
        try {
          std::size_t used = 0;
          v[k] = std::stod(cell, &used);
          if (!strip(cell.substr(used)).empty()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw InvalidInput("bad number at line " + std::to_string(lineno));
        }
      }
      rows.push_back({v[0], v[1], v[2], v[3]});
    }
    return custom(std::move(rows), path);
  }

  ProfileKind kind() const { return kind_; }
  double c() const { return c_; }
  double r0() const { return r0_; }
  const std::vector<ProfileSample>& table() const { return table_; }
  const std::string& source() const { return source_; }

  Jet jet(double r) const {
    if (!(r > 0.0)) throw InvalidInput("profile evaluated at r <= 0");
    switch (kind_) {
      case ProfileKind::euclidean: return {r, 1.0, 0.0};
      case ProfileKind::cone: return {c_ * r, c_, 0.0};
      case ProfileKind::smoothed_cone: return smoothed_jet(r);
      case ProfileKind::custom: {
        if (r <= table_.front().r) return {inner_.f(r), inner_.fp(r), inner_.fpp(r)};
        if (r >= table_.back().r) return {outer_.f(r), outer_.fp(r), outer_.fpp(r)};
        return {(*spline_)(r), spline_->prime(r), spline_->double_prime(r)};
      }
    }
    return {0, 0, 0};
  }
  double f(double r) const { return jet(r).f; }
  double fp(double r) const { return jet(r).fp; }
  double fpp(double r) const { return jet(r).fpp; }

  /// Power law describing f near r = 0.
  PowerLaw inner_law() const {
    switch (kind_) {
      case ProfileKind::cone: return {c_, 1.0};
      case ProfileKind::custom: return inner_;
      default: return {1.0, 1.0};
    }
  }

  /// Power law describing f as r -> infinity.
  PowerLaw outer_law() const {
    switch (kind_) {
      case ProfileKind::cone:
      case ProfileKind::smoothed_cone: return {c_, 1.0};
      case ProfileKind::custom: return outer_;
      default: return {1.0, 1.0};
    }
  }

  std::vector<ProfileSegment> segments() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (kind_) {
      case ProfileKind::euclidean: return {{0.0, inf, PowerLaw{1.0, 1.0}}};
      case ProfileKind::cone: return {{0.0, inf, PowerLaw{c_, 1.0}}};
      case ProfileKind::smoothed_cone:
        return {{0.0, 0.5 * r0_, PowerLaw{1.0, 1.0}}, {0.5 * r0_, r0_, std::nullopt}, {r0_, inf, PowerLaw{c_, 1.0}}};
      case ProfileKind::custom:
        return {{0.0, table_.front().r, inner_}, {table_.front().r, table_.back().r, std::nullopt},
                {table_.back().r, inf, outer_}};
    }
    return {};
  }

  /// Raw cones with c < 1 have a conical singularity at r = 0.
  bool singular_tip() const {
    const PowerLaw in = inner_law();
    return std::abs(in.p - 1.0) > 1e-12 || std::abs(in.a - 1.0) > 1e-12;
  }

  /// Preset id in the form accepted by parse_profile.
  std::string id() const {
    switch (kind_) {
      case ProfileKind::euclidean: return "euclidean";
      case ProfileKind::cone: return "cone:" + shortest(c_);
      case ProfileKind::smoothed_cone: return "smoothed-cone:" + shortest(c_) + ":" + shortest(r0_);
      case ProfileKind::custom: return "custom:" + source_;
    }
    return {};
  }

  /// Smoothed-cone f at any floating-point precision.
  template <class T>
  T smoothed_value(T r) const {
    return smoothed_jet_t<T>(r)[0];
  }

 private:
  using Spline = boost::math::interpolators::quintic_hermite<std::vector<double>>;

  explicit WarpingProfile(ProfileKind k) : kind_(k) {}

  static void check_aperture(double c) {
    if (!(c > 0.0 && c <= 1.0)) throw InvalidInput("cone aperture c must lie in (0, 1]");
  }

  static std::string strip(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
    return s;
  }

  static PowerLaw end_law(const ProfileSample& s) {
    const double p = s.r * s.fp / s.f;
    return {s.f / std::pow(s.r, p), p};
  }

  // Quintic Hermite blend on [r0/2, r0] matching (f, f', f'') = (r, 1, 0) on
  // the left and (c r, c, 0) on the right.
  template <class T>
  std::array<T, 3> smoothed_jet_t(T r) const {
    const T L = T(r0_) / 2, c = T(c_);
    if (r <= L) return {r, 1, 0};
    if (r >= T(r0_)) return {c * r, c, 0};
    const T s = (r - L) / L, s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const T y0 = L, d0 = 1, y1 = c * T(r0_), d1 = c;
    const T H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5, H0p = -30 * s2 + 60 * s3 - 30 * s4,
            H0pp = -60 * s + 180 * s2 - 120 * s3;
    const T H1 = s - 6 * s3 + 8 * s4 - 3 * s5, H1p = 1 - 18 * s2 + 32 * s3 - 15 * s4,
            H1pp = -36 * s + 96 * s2 - 60 * s3;
    const T H4 = -4 * s3 + 7 * s4 - 3 * s5, H4p = -12 * s2 + 28 * s3 - 15 * s4, H4pp = -24 * s + 84 * s2 - 60 * s3;
    // H3 = 1 - H0
    return {y0 * H0 + y1 * (1 - H0) + L * (d0 * H1 + d1 * H4), (y0 - y1) * H0p / L + d0 * H1p + d1 * H4p,
            (y0 - y1) * H0pp / (L * L) + (d0 * H1pp + d1 * H4pp) / L};
  }

  Jet smoothed_jet(double r) const {
    const auto j = smoothed_jet_t<double>(r);
    return {j[0], j[1], j[2]};
  }

  ProfileKind kind_;
  double c_ = 1.0;
  double r0_ = 0.0;
  std::vector<ProfileSample> table_;
  std::shared_ptr<const Spline> spline_;
  PowerLaw inner_, outer_;
  std::string source_;
};

struct ModelManifold {
  int n = 0;
  WarpingProfile profile = WarpingProfile::euclidean();

  std::string id() const { return profile.id(); }
};

/// Parses "euclidean", "cone:<c>", "smoothed-cone:<c>:<r0>", "custom:<path>".
inline WarpingProfile parse_profile(const std::string& id) {
  if (id.rfind("custom:", 0) == 0 && id.size() > 7) return WarpingProfile::from_csv(id.substr(7));
  std::vector<std::string> parts;
  std::stringstream ss(id);
  for (std::string cell; std::getline(ss, cell, ':');) parts.push_back(cell);
  if (parts.empty()) throw InvalidInput("empty model id");
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InvalidInput("bad number '" + s + "' in model id '" + id + "'");
    }
  };
  const std::string& head = parts.front();
  if (head == "euclidean" && parts.size() == 1) return WarpingProfile::euclidean();
  if (head == "cone" && parts.size() == 2) return WarpingProfile::cone(number(parts[1]));
  if (head == "smoothed-cone" && parts.size() == 3)
    return WarpingProfile::smoothed_cone(number(parts[1]), number(parts[2]));
  throw InvalidInput("unknown model id '" + id + "'");
}

inline ModelManifold make_model(int n, WarpingProfile profile) {
  if (n < 3) throw InvalidInput("dimension must be at least 3 (got " + std::to_string(n) + ")");
  return ModelManifold{n, std::move(profile)};
}

inline ModelManifold make_model(const std::string& id, int n) { return make_model(n, parse_profile(id)); }

struct CurvatureSample {
  double r;
  double k_rad;
  double k_tan;
  double ric_rad;
  double ric_tan;
};

inline CurvatureSample curvature_at(const ModelManifold& m, double r) {
  if (!(r > 0.0)) throw InvalidInput("curvature requested at r <= 0");
  const Jet j = m.profile.jet(r);
  const double k_rad = -j.fpp / j.f;
  const double k_tan = (1.0 - j.fp * j.fp) / (j.f * j.f);
  return {r, k_rad, k_tan, (m.n - 1) * k_rad, k_rad + (m.n - 2) * k_tan};
}

/// Area of the unit (n-1)-sphere in R^n.
inline double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / boost::math::tgamma(0.5 * n);
}

namespace detail {

inline double power_law_integral(const PowerLaw& law, double k, double lo, double hi) {
  const double q = law.p * k + 1.0;
  const double ak = std::pow(law.a, k);
  if (std::abs(q) < 1e-14) {
    if (lo == 0.0 || std::isinf(hi)) throw NumericalFailure("radial integral diverges (logarithmic)");
    return ak * std::log(hi / lo);
  }
  if (std::isinf(hi) && q > 0.0) throw NumericalFailure("radial integral diverges at infinity");
  if (lo == 0.0 && q < 0.0) throw NumericalFailure("radial integral diverges at the tip");
  const double top = std::isinf(hi) ? 0.0 : std::pow(hi, q);
  const double bottom = lo == 0.0 ? 0.0 : std::pow(lo, q);
  return ak * (top - bottom) / q;
}

}  // namespace detail

/// Integral of f(s)^k over [lo, hi]; hi may be infinite, lo may be 0. Power-law
/// pieces are integrated in closed form, the rest by adaptive Gauss-Kronrod in
/// log r.
inline double radial_integral(const WarpingProfile& w, double k, double lo, double hi, double rel_tol = 1e-12) {
  if (!(lo >= 0.0) || !(hi >= lo)) throw InvalidInput("bad radial integration range");
  double total = 0.0;
  for (const auto& seg : w.segments()) {
    const double a = std::max(lo, seg.lo);
    const double b = std::min(hi, seg.hi);
    if (!(b > a)) continue;
    if (seg.law) {
      total += detail::power_law_integral(*seg.law, k, a, b);
      continue;
    }
    // Pieces are mapped onto [0, 1]: the library's subinterval error estimate
    // is not rescaled with the interval length.
    const double la = std::log(a), width = std::log(b) - la;
    auto integrand = [&](double t) {
      const double s = std::exp(la + width * t);
      return std::pow(w.f(s), k) * s * width;
    };
    double err = 0.0, l1 = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, rel_tol, &err, &l1);
    if (!std::isfinite(v) || err > 10.0 * rel_tol * std::max(l1, 1e-300))
      throw NumericalFailure("quadrature did not converge on [" + shortest(a) + ", " + shortest(b) + "], error estimate " + shortest(err) + " of " + shortest(l1));
    total += v;
  }
  return total;
}

/// Vol B(t) / t^n for the ball about the tip.
inline double volume_growth(const ModelManifold& m, double t) {
  if (!(t > 0.0)) throw InvalidInput("volume growth needs t > 0");
  return unit_sphere_area(m.n) * radial_integral(m.profile, m.n - 1, 0.0, t) / std::pow(t, m.n);
}

}  // namespace harnack
