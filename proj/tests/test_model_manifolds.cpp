#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "harnack/fd_oracle.hpp"
#include "harnack/hypotheses.hpp"
#include "harnack/model_manifolds.hpp"

using namespace harnack;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

WarpingProfile r_squared() {
  std::vector<ProfileSample> t;
  for (int i = 0; i <= 60; ++i) {
    const double r = std::exp(std::log(0.01) + (std::log(100.0) - std::log(0.01)) * i / 60.0);
    t.push_back({r, r * r, 2 * r, 2});
  }
  return WarpingProfile::custom(t, "r^2");
}

}  // namespace

TEST_CASE("profiles evaluate their closed forms", "[model]") {
  const auto e = make_model("euclidean", 4);
  CHECK(e.profile.f(2) == 2);
  CHECK(e.profile.fp(2) == 1);
  CHECK(e.profile.fpp(2) == 0);

  const auto c = make_model("cone:0.5", 4);
  CHECK(c.profile.f(1) == 0.5);
  CHECK(c.profile.fp(1) == 0.5);
  CHECK(c.profile.singular_tip());
  CHECK_FALSE(e.profile.singular_tip());

  const auto s = make_model("smoothed-cone:0.5:1", 4);
  CHECK(s.profile.f(0.3) == 0.3);
  CHECK(s.profile.f(2) == 1.0);
  CHECK(s.profile.fp(2) == 0.5);
  CHECK_FALSE(s.profile.singular_tip());
}

TEST_CASE("invalid models are rejected", "[model][errors]") {
  CHECK_THROWS_AS(make_model("cone:0.5", 2), InvalidInput);
  CHECK_THROWS_AS(make_model("euclidean", 1), InvalidInput);
  CHECK_THROWS_AS(make_model("cone:1.5", 4), InvalidInput);
  CHECK_THROWS_AS(make_model("cone:0", 4), InvalidInput);
  CHECK_THROWS_AS(make_model("cone:abc", 4), InvalidInput);
  CHECK_THROWS_AS(make_model("torus", 4), InvalidInput);
  CHECK_THROWS_AS(make_model("smoothed-cone:0.5:-1", 4), InvalidInput);
  CHECK_THROWS_AS(WarpingProfile::custom({{1, 1, 1, 0}, {2, -1, 1, 0}}), InvalidInput);
  CHECK_THROWS_AS(WarpingProfile::custom({{1, 1, 1, 0}, {1, 2, 1, 0}}), InvalidInput);
  CHECK_THROWS_AS(WarpingProfile::custom({{1, 1, 1, 0}}), InvalidInput);
  CHECK_THROWS_AS(curvature_at(make_model("euclidean", 4), 0.0), InvalidInput);
}

TEST_CASE("smoothed cone is C2 across the blend", "[model]") {
  const auto w = WarpingProfile::smoothed_cone(0.5, 1.0);
  for (double r0 : {0.5, 1.0}) {
    const double eps = 1e-9;
    const Jet a = w.jet(r0 - eps), b = w.jet(r0 + eps);
    CHECK_THAT(a.f, WithinAbs(b.f, 1e-6));
    CHECK_THAT(a.fp, WithinAbs(b.fp, 1e-6));
    CHECK_THAT(a.fpp, WithinAbs(b.fpp, 1e-6));
  }
  for (double r = 0.01; r < 5; r *= 1.1) CHECK(w.f(r) > 0);
}

TEST_CASE("custom profile interpolates samples and reads CSV", "[model]") {
  const auto w = r_squared();
  CHECK_THAT(w.f(1.7), WithinRel(1.7 * 1.7, 1e-6));
  CHECK_THAT(w.fpp(1.7), WithinRel(2.0, 1e-3));
  const std::string path = "test_profile_r2.csv";
  {
    std::ofstream out(path);
    out << "r,f,fp,fpp\n";
    for (const auto& s : w.table()) out << s.r << ',' << s.f << ',' << s.fp << ',' << s.fpp << '\n';
  }
  const auto m = make_model("custom:" + path, 4);
  CHECK(m.profile.kind() == ProfileKind::custom);
  CHECK_THAT(m.profile.f(3.0), WithinRel(9.0, 1e-5));
  std::ofstream(path) << "x,y\n1,2\n";
  CHECK_THROWS_AS(make_model("custom:" + path, 4), InvalidInput);
  CHECK_THROWS_AS(make_model("custom:/nonexistent/table.csv", 4), InvalidInput);
  std::remove(path.c_str());
}

TEST_CASE("curvature examples", "[model][curvature]") {
  auto k = curvature_at(make_model("euclidean", 4), 2);
  CHECK(k.k_rad == 0);
  CHECK(k.k_tan == 0);
  k = curvature_at(make_model("cone:0.5", 4), 1);
  CHECK(k.k_rad == 0);
  CHECK_THAT(k.k_tan, WithinAbs(3.0, 1e-15));
  k = curvature_at(make_model("smoothed-cone:0.5:1", 4), 2);
  CHECK_THAT(k.k_rad, WithinAbs(0.0, 1e-15));
  CHECK_THAT(k.k_tan, WithinAbs(0.75, 1e-15));
}

TEST_CASE("Ricci fields follow from the sectional curvatures", "[model][curvature][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4, 4);
  for (const char* id : {"euclidean", "cone:0.3", "cone:0.9", "smoothed-cone:0.5:1", "smoothed-cone:0.7:0.2"})
    for (int n : {3, 4, 6})
      for (int i = 0; i < 20; ++i) {
        const double r = std::exp(u(rng));
        const auto k = curvature_at(make_model(id, n), r);
        CHECK(k.ric_rad == (n - 1) * k.k_rad);
        CHECK(k.ric_tan == k.k_rad + (n - 2) * k.k_tan);
      }
}

TEST_CASE("closed-form curvature matches the finite-difference oracle", "[model][curvature][fd]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.3, 2.5);
  for (const char* id : {"euclidean", "cone:0.5", "smoothed-cone:0.5:1"}) {
    const auto m = make_model(id, 4);
    const auto chart = fd::warped_chart(m);
    for (int i = 0; i < 5; ++i) {
      fd::Vec x = chart.base_point;
      x(0) = u(rng);
      const auto s = fd::riemann(chart, x);
      const auto k = curvature_at(m, double(x(0)));
      const double scale = 1 + std::abs(k.k_rad) + std::abs(k.k_tan);
      CHECK_THAT(double(s.sectional(0, 1)), WithinAbs(k.k_rad, 1e-4 * scale));
      CHECK_THAT(double(s.sectional(1, 2)), WithinAbs(k.k_tan, 1e-4 * scale));
      CHECK_THAT(double(s.sectional(2, 3)), WithinAbs(k.k_tan, 1e-4 * scale));
    }
  }
}

TEST_CASE("volume growth examples", "[model][volume]") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK_THAT(volume_growth(make_model("euclidean", 4), 3), WithinRel(pi2 / 2, 1e-12));
  const auto c = make_model("cone:0.5", 4);
  CHECK_THAT(volume_growth(c, 1), WithinRel(pi2 / 16, 1e-12));
  CHECK_THAT(volume_growth(c, 10), WithinRel(volume_growth(c, 1), 1e-9));
  CHECK_THROWS_AS(volume_growth(c, 0), InvalidInput);
}

TEST_CASE("cone volume ratio is scale invariant", "[model][volume][property]") {
  for (double cc : {0.2, 0.5, 0.8, 1.0})
    for (int n : {3, 4, 5}) {
      const auto m = make_model(n, WarpingProfile::cone(cc));
      const double v1 = volume_growth(m, 1);
      for (double t : {1e-3, 0.1, 7.0, 1e4}) CHECK_THAT(volume_growth(m, t), WithinRel(v1, 1e-9));
    }
}

TEST_CASE("radial integral splits power-law and interpolated pieces", "[model]") {
  const auto w = WarpingProfile::smoothed_cone(0.5, 1.0);
  // inner piece f = r, outer piece f = r / 2
  CHECK_THAT(radial_integral(w, -3, 2, INFINITY), WithinRel(8.0 / (2 * 4), 1e-13));
  CHECK_THAT(radial_integral(w, 1, 0, 0.4), WithinRel(0.08, 1e-13));
  CHECK_THROWS_AS(radial_integral(WarpingProfile::euclidean(), -1, 1, INFINITY), NumericalFailure);
  CHECK_THROWS_AS(radial_integral(WarpingProfile::euclidean(), -3, 0, 1), NumericalFailure);
}

TEST_CASE("hypothesis report on presets", "[hypotheses]") {
  const auto e = hypothesis_report(make_model("euclidean", 4), 0.2, 3, 6);
  CHECK(e.all_hold());
  CHECK(e.parallel_ricci_residual < 1e-6);

  const auto c = hypothesis_report(make_model("cone:0.5", 4), 0.2, 3, 6);
  CHECK(c.nonneg_sectional_along_gradG);
  CHECK(c.nonneg_ricci);
  CHECK(c.sectional_margin >= -1e-9);
  CHECK_FALSE(c.parallel_ricci);
  CHECK(c.parallel_ricci_residual > 0.1);
  CHECK(c.euclidean_volume_growth);
  CHECK(c.nonparabolic);
  CHECK(c.singular_tip);

  const auto q = hypothesis_report(make_model(4, r_squared()), 0.2, 3, 6);
  CHECK(q.euclidean_volume_growth);
  CHECK_FALSE(q.nonneg_ricci);
  CHECK_FALSE(q.nonneg_sectional_along_gradG);
  CHECK_THAT(q.sectional_margin, WithinRel(-2 / (0.2 * 0.2), 1e-3));

  CHECK_THROWS_AS(hypothesis_report(make_model("euclidean", 4), 1, 0.5, 6), InvalidInput);
  CHECK_THROWS_AS(hypothesis_report(make_model("euclidean", 4), 0.2, 3, 1), InvalidInput);
}

TEST_CASE("cones with c <= 1 have nonnegative curvature", "[hypotheses][property]") {
  for (double cc : {0.1, 0.35, 0.6, 0.95, 1.0})
    for (int n : {3, 4, 5}) {
      const auto m = make_model(n, WarpingProfile::cone(cc));
      for (double r = 1e-2; r < 1e2; r *= 1.7) {
        const auto k = curvature_at(m, r);
        CHECK(k.k_rad >= 0);
        CHECK(k.k_tan >= 0);
        CHECK(std::min(k.ric_rad, k.ric_tan) >= 0);
      }
    }
}
