#pragma once

/// \file
/// Coordinate charts and closed-form test functions for the finite-difference
/// curvature oracle. Everything here is evaluated in long double.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "harnack/errors.hpp"
#include "harnack/format.hpp"
#include "harnack/model_manifolds.hpp"

namespace harnack::fd {

using Real = long double;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense tensor with every index ranging over 0..dim-1.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int rank) : dim_(dim), rank_(rank), v_(pow_size(dim, rank), 0.0L) {}

  int dim() const { return dim_; }
  int rank() const { return rank_; }

  template <class... I>
  Real& operator()(I... i) {
    return v_[offset(i...)];
  }
  template <class... I>
  Real operator()(I... i) const {
    return v_[offset(i...)];
  }

  Real& flat(std::size_t k) { return v_[k]; }
  Real flat(std::size_t k) const { return v_[k]; }
  std::size_t size() const { return v_.size(); }

  Real norm() const {
    Real s = 0;
    for (Real x : v_) s += x * x;
    return std::sqrt(s);
  }

  Tensor& operator-=(const Tensor& o) {
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
  }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Real s, Tensor a) {
    for (Real& x : a.v_) x *= s;
    return a;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) {
    for (std::size_t k = 0; k < a.v_.size(); ++k) a.v_[k] += b.v_[k];
    return a;
  }

 private:
  static std::size_t pow_size(int d, int r) {
    std::size_t s = 1;
    for (int k = 0; k < r; ++k) s *= std::size_t(d);
    return s;
  }
  template <class... I>
  std::size_t offset(I... i) const {
    std::size_t o = 0;
    ((o = o * std::size_t(dim_) + std::size_t(i)), ...);
    return o;
  }

  int dim_ = 0;
  int rank_ = 0;
  std::vector<Real> v_;
};

struct CoordinateChart {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  std::function<Mat(const Vec&)> metric;
  /// Draws a probe point away from coordinate degeneracies.
  std::function<Vec(std::mt19937_64&)> sample;
  /// A representative point used when none is given.
  Vec base_point;
  /// Per-coordinate multiplier of the finite-difference step (unit when empty).
  std::function<Vec(const Vec&)> step_scale;
};

namespace detail {

inline constexpr Real angle_margin = 0.3L;

inline Real uniform(std::mt19937_64& rng, Real a, Real b) {
  return a + (b - a) * Real(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

// dr^2 + f(r)^2 (dθ1^2 + sin^2θ1 dθ2^2 + ...), coordinates (r, θ1, ..., θ_{n-1}).
inline Mat hyperspherical_warped(const std::function<Real(Real)>& f, const Vec& x) {
  const int n = int(x.size());
  Mat g = Mat::Zero(n, n);
  g(0, 0) = 1;
  Real w = f(x(0));
  w *= w;
  for (int i = 1; i < n; ++i) {
    g(i, i) = w;
    w *= std::sin(x(i)) * std::sin(x(i));
  }
  return g;
}

inline CoordinateChart warped(std::string name, int n, std::function<Real(Real)> f, Real r_lo, Real r_hi) {
  CoordinateChart c;
  c.name = std::move(name);
  c.dim = n;
  c.coords.push_back("r");
  for (int i = 1; i < n; ++i) c.coords.push_back("theta" + std::to_string(i));
  c.metric = [f](const Vec& x) { return hyperspherical_warped(f, x); };
  c.sample = [n, r_lo, r_hi](std::mt19937_64& rng) {
    Vec x(n);
    x(0) = uniform(rng, r_lo, r_hi);
    for (int i = 1; i < n; ++i) x(i) = uniform(rng, angle_margin, std::numbers::pi_v<Real> - angle_margin);
    return x;
  };
  c.base_point = Vec::Constant(n, 1.1L);
  c.base_point(0) = 1;
  // Radial steps proportional to r: the stencil stays away from the tip and
  // the relative error is the same at every scale.
  c.step_scale = [n](const Vec& x) {
    Vec s = Vec::Ones(n);
    s(0) = x(0);
    return s;
  };
  return c;
}

}  // namespace detail

inline CoordinateChart euclidean_chart(int n) {
  if (n < 1) throw InvalidInput("chart dimension must be positive");
  CoordinateChart c;
  c.name = "euclidean";
  c.dim = n;
  for (int i = 0; i < n; ++i) c.coords.push_back("x" + std::to_string(i + 1));
  c.metric = [n](const Vec&) { return Mat(Mat::Identity(n, n)); };
  c.sample = [n](std::mt19937_64& rng) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = detail::uniform(rng, -1, 1);
    return x;
  };
  c.base_point = Vec::Constant(n, 0.5L);
  return c;
}

/// Round sphere of the given radius in hyperspherical angles (θ1, ..., θ_dim).
inline CoordinateChart round_sphere(Real radius = 1, int dim = 2) {
  if (!(radius > 0) || dim < 2) throw InvalidInput("round sphere needs radius > 0 and dim >= 2");
  CoordinateChart c;
  c.name = "round_sphere";
  c.dim = dim;
  for (int i = 0; i < dim; ++i) c.coords.push_back("theta" + std::to_string(i + 1));
  c.metric = [radius, dim](const Vec& x) {
    Mat g = Mat::Zero(dim, dim);
    Real w = radius * radius;
    for (int i = 0; i < dim; ++i) {
      g(i, i) = w;
      w *= std::sin(x(i)) * std::sin(x(i));
    }
    return g;
  };
  c.sample = [dim](std::mt19937_64& rng) {
    Vec x(dim);
    for (int i = 0; i < dim; ++i)
      x(i) = detail::uniform(rng, detail::angle_margin, std::numbers::pi_v<Real> - detail::angle_margin);
    return x;
  };
  c.base_point = Vec::Constant(dim, 1.1L);
  c.base_point(0) = std::numbers::pi_v<Real> / 3;
  return c;
}

/// Unit 2-sphere times the flat plane, coordinates (θ, φ, x, y).
inline CoordinateChart s2xr2() {
  CoordinateChart c;
  c.name = "s2xr2";
  c.dim = 4;
  c.coords = {"theta", "phi", "x", "y"};
  c.metric = [](const Vec& x) {
    Mat g = Mat::Identity(4, 4);
    g(1, 1) = std::sin(x(0)) * std::sin(x(0));
    return g;
  };
  c.sample = [](std::mt19937_64& rng) {
    Vec x(4);
    x(0) = detail::uniform(rng, detail::angle_margin, std::numbers::pi_v<Real> - detail::angle_margin);
    x(1) = detail::uniform(rng, 0, 2 * std::numbers::pi_v<Real>);
    x(2) = detail::uniform(rng, -1, 1);
    x(3) = detail::uniform(rng, -1, 1);
    return x;
  };
  c.base_point = Vec(4);
  c.base_point << 1.0L, 0.7L, 0.3L, -0.4L;
  return c;
}

inline CoordinateChart cone_chart(Real c, int n) {
  if (!(c > 0 && c <= 1)) throw InvalidInput("cone aperture c must lie in (0, 1]");
  if (n < 2) throw InvalidInput("cone chart needs n >= 2");
  return detail::warped("cone:" + shortest(double(c)), n, [c](Real r) { return c * r; }, 0.5L, 2.0L);
}

/// Warped chart of a model manifold. Closed-form profiles are evaluated in
/// long double, tabulated ones in double.
inline CoordinateChart warped_chart(const ModelManifold& m, Real r_lo = 0.2L, Real r_hi = 3.0L) {
  WarpingProfile w = m.profile;
  std::function<Real(Real)> f;
  switch (w.kind()) {
    case ProfileKind::euclidean: f = [](Real r) { return r; }; break;
    case ProfileKind::cone: f = [c = Real(w.c())](Real r) { return c * r; }; break;
    case ProfileKind::smoothed_cone: f = [w](Real r) { return w.smoothed_value(r); }; break;
    case ProfileKind::custom: f = [w](Real r) { return Real(w.f(double(r))); }; break;
  }
  return detail::warped(m.id(), m.n, std::move(f), r_lo, r_hi);
}

/// Chart by name: euclidean[:n], round_sphere[:radius[:dim]], s2xr2, cone:<c>[:n].
inline CoordinateChart chart_by_name(const std::string& name, int n_default = 4) {
  std::vector<std::string> parts;
  std::stringstream ss(name);
  for (std::string cell; std::getline(ss, cell, ':');) parts.push_back(cell);
  if (parts.empty()) throw InvalidInput("empty chart name");
  auto num = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
      return v;
    } catch (const std::exception&) {
      throw InvalidInput("bad chart spec '" + name + "'");
    }
  };
  const auto& h = parts[0];
  if (h == "euclidean") return euclidean_chart(parts.size() > 1 ? int(num(1)) : n_default);
  if (h == "round_sphere" || h == "sphere")
    return round_sphere(parts.size() > 1 ? num(1) : 1.0, parts.size() > 2 ? int(num(2)) : 2);
  if (h == "s2xr2") return s2xr2();
  if (h == "cone") return cone_chart(num(1), parts.size() > 2 ? int(num(2)) : n_default);
  throw InvalidInput("unknown chart '" + name + "'");
}

// ---------------------------------------------------------------------------
// Test functions

/// Partial derivative of a function of the coordinates; `by` lists the
/// coordinates differentiated along (length 0..4, any order).
using PartialFn = std::function<Real(const Vec& x, const std::vector<int>& by)>;

struct TestFunction {
  std::string name;
  int max_order = 4;
  PartialFn partial;
};

/// One-variable factor with closed-form derivatives up to fourth order.
struct Factor1D {
  enum class Kind { power, sine, cosine, exponential, gaussian } kind;
  int var = 0;
  Real k = 1;  // frequency / rate, or exponent for power

  Real derivative(Real x, int m) const {
    switch (kind) {
      case Kind::power: {
        const int p = int(k);
        if (m > p) return 0;
        Real c = 1;
        for (int i = 0; i < m; ++i) c *= Real(p - i);
        return c * std::pow(x, Real(p - m));
      }
      case Kind::sine:
      case Kind::cosine: {
        // d^m sin(kx) = k^m sin(kx + m pi/2)
        const Real phase = (kind == Kind::cosine ? 1 : 0) + m;
        return std::pow(k, Real(m)) * std::sin(k * x + phase * std::numbers::pi_v<Real> / 2);
      }
      case Kind::exponential: return std::pow(k, Real(m)) * std::exp(k * x);
      case Kind::gaussian: {
        const Real g = std::exp(-k * x * x);
        switch (m) {
          case 0: return g;
          case 1: return -2 * k * x * g;
          case 2: return (4 * k * k * x * x - 2 * k) * g;
          case 3: return (-8 * k * k * k * x * x * x + 12 * k * k * x) * g;
          case 4: return (16 * k * k * k * k * x * x * x * x - 48 * k * k * k * x * x + 12 * k * k) * g;
          default: throw InvalidInput("gaussian factor supports derivatives up to order 4");
        }
      }
    }
    return 0;
  }
};

struct SeparableTerm {
  Real coeff = 1;
  std::vector<Factor1D> factors;  // at most one factor per variable
};

inline TestFunction separable(std::string name, std::vector<SeparableTerm> terms) {
  for (const auto& t : terms)
    for (std::size_t a = 0; a < t.factors.size(); ++a)
      for (std::size_t b = a + 1; b < t.factors.size(); ++b)
        if (t.factors[a].var == t.factors[b].var) throw InvalidInput("separable term repeats a variable");
  TestFunction f;
  f.name = std::move(name);
  f.partial = [terms = std::move(terms)](const Vec& x, const std::vector<int>& by) {
    Real total = 0;
    for (const auto& t : terms) {
      Real v = t.coeff;
      std::vector<int> used(by.size(), 0);
      for (const auto& fac : t.factors) {
        int m = 0;
        for (std::size_t i = 0; i < by.size(); ++i)
          if (by[i] == fac.var) {
            ++m;
            used[i] = 1;
          }
        v *= fac.derivative(x(fac.var), m);
      }
      for (int u : used)
        if (!u) v = 0;  // differentiated along a variable the term does not involve
      total += v;
    }
    return total;
  };
  return f;
}

/// u(x_0) given by its derivatives up to second order, e.g. b^2 on a warped chart.
inline TestFunction radial_function(std::string name, std::function<std::array<Real, 3>(Real)> jet) {
  TestFunction f;
  f.name = std::move(name);
  f.max_order = 2;
  f.partial = [jet = std::move(jet)](const Vec& x, const std::vector<int>& by) -> Real {
    if (by.size() > 2) throw InvalidInput("radial test function only carries two derivatives");
    for (int v : by)
      if (v != 0) return 0;
    return jet(x(0))[by.size()];
  };
  return f;
}

namespace functions {

using K = Factor1D::Kind;

inline TestFunction x1sq_x2() { return separable("x1^2*x2", {{1, {{K::power, 0, 2}, {K::power, 1, 1}}}}); }

inline TestFunction cos_theta() { return separable("cos(theta)", {{1, {{K::cosine, 0, 1}}}}); }

/// Couples all four coordinates of s2xr2.
inline TestFunction s2xr2_mixed() {
  return separable("cos(theta)*exp(-x^2)*sin(phi) + x*y^2 + sin(2 theta)*y",
                   {{1, {{K::cosine, 0, 1}, {K::gaussian, 2, 1}, {K::sine, 1, 1}}},
                    {1, {{K::power, 2, 1}, {K::power, 3, 2}}},
                    {1, {{K::sine, 0, 2}, {K::power, 3, 1}}}});
}

/// Generic smooth function on any chart of dimension >= 2.
inline TestFunction generic(int dim) {
  std::vector<SeparableTerm> terms;
  terms.push_back({1, {{K::cosine, 0, 0.7L}, {K::sine, 1, 1.3L}}});
  terms.push_back({0.5L, {{K::power, 0, 3}}});
  for (int v = 1; v < dim; ++v) terms.push_back({Real(0.3L) / v, {{K::power, 0, 2}, {K::cosine, v, Real(v) * 0.9L}}});
  if (dim > 2) terms.push_back({0.2L, {{K::exponential, 1, 0.4L}, {K::sine, 2, 1}}});
  return separable("generic" + std::to_string(dim), std::move(terms));
}

}  // namespace functions

/// Default test function for a chart name.
inline TestFunction default_test_function(const CoordinateChart& c) {
  if (c.name == "euclidean" && c.dim >= 2) return functions::x1sq_x2();
  if (c.name == "round_sphere" && c.dim == 2) return functions::cos_theta();
  if (c.name == "s2xr2") return functions::s2xr2_mixed();
  return functions::generic(c.dim);
}

}  // namespace harnack::fd
