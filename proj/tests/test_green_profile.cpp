#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "harnack/fd_oracle.hpp"
#include "harnack/green_profile.hpp"

using namespace harnack;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

WarpingProfile power_profile(double p) {
  std::vector<ProfileSample> t;
  for (int i = 0; i <= 40; ++i) {
    const double r = std::exp(std::log(0.01) + std::log(1e4) * i / 40.0);
    t.push_back({r, std::pow(r, p), p * std::pow(r, p - 1), p * (p - 1) * std::pow(r, p - 2)});
  }
  return WarpingProfile::custom(t);
}

const char* presets[] = {"euclidean", "cone:0.5", "cone:0.8", "smoothed-cone:0.5:1", "smoothed-cone:0.8:0.3"};

}  // namespace

TEST_CASE("Green function examples", "[green]") {
  const auto e = green_at(make_model("euclidean", 4), 2);
  CHECK_THAT(e.G, WithinRel(0.25, 1e-14));
  CHECK_THAT(e.Gp, WithinRel(-0.25, 1e-14));
  CHECK_THAT(e.b, WithinRel(2.0, 1e-14));
  CHECK_THAT(e.grad_b, WithinRel(1.0, 1e-14));

  const auto c = green_at(make_model("cone:0.5", 4), 1);
  CHECK_THAT(c.G, WithinRel(8.0, 1e-14));
  CHECK_THAT(c.b, WithinRel(1 / (2 * std::sqrt(2.0)), 1e-14));

  for (double r : {0.03, 1.0, 40.0}) {
    const auto a = green_at(make_model("cone:1", 5), r), b = green_at(make_model("euclidean", 5), r);
    CHECK_THAT(a.G, WithinRel(b.G, 1e-14));
    CHECK_THAT(a.mu_rad, WithinRel(b.mu_rad, 1e-12));
    CHECK_THAT(a.mu_tan, WithinRel(b.mu_tan, 1e-12));
  }
}

TEST_CASE("Hess b^2 eigenvalue examples", "[green]") {
  auto p = compute_profile(make_model("euclidean", 4));
  auto h = hess_b2_eigs(p, 2);
  CHECK_THAT(h.mu_rad, WithinRel(2.0, 1e-13));
  CHECK_THAT(h.mu_tan, WithinRel(2.0, 1e-13));

  p = compute_profile(make_model("cone:0.5", 4));
  h = hess_b2_eigs(p, 1);
  CHECK_THAT(h.mu_rad, WithinRel(0.25, 1e-13));
  CHECK_THAT(h.mu_tan, WithinRel(0.25, 1e-13));

  p = compute_profile(make_model("smoothed-cone:0.5:1", 4));
  h = hess_b2_eigs(p, 4);
  CHECK_THAT(h.mu_rad, WithinAbs(0.25, 1e-6));
  CHECK_THAT(h.mu_tan, WithinAbs(0.25, 1e-6));

  CHECK_THROWS_AS(hess_b2_eigs(p, 1e3), InvalidInput);
  CHECK_THROWS_AS(hess_b2_eigs(p, 1e-3), InvalidInput);
}

TEST_CASE("Hess b^2 matches the finite-difference covariant Hessian", "[green][fd]") {
  for (const char* id : {"cone:0.5", "smoothed-cone:0.5:1"}) {
    const auto m = make_model(id, 4);
    const auto chart = fd::warped_chart(m);
    const auto b2 = fd::radial_function("b2", [&](fd::Real r) {
      const auto q = green_at(m, double(r));
      return std::array<fd::Real, 3>{q.b2, q.b2p, q.b2pp};
    });
    for (double r : {0.4, 0.7, 0.9, 2.0}) {
      fd::Vec x = chart.base_point;
      x(0) = r;
      const fd::Mat H = fd::hessian(chart, b2, x);
      const auto q = green_at(m, r);
      CHECK_THAT(double(H(0, 0)), WithinAbs(q.mu_rad, 1e-5));
      for (int i = 1; i < 4; ++i) CHECK_THAT(double(H(i, i)), WithinAbs(q.mu_tan, 1e-5));
      CHECK_THAT(double(H(0, 1)), WithinAbs(0.0, 1e-5));
    }
  }
}

TEST_CASE("power Laplacian identity", "[green]") {
  const auto e = compute_profile(make_model("euclidean", 4));
  CHECK(check_power_laplacian(e, 1, 2) == 0);
  CHECK(check_power_laplacian(e, 1, 1) == 0);
  const auto q = e.at(1);
  CHECK_THAT(2 * 1 * std::pow(q.G, 0) * q.Gp * q.Gp, WithinRel(8.0, 1e-14));
  const auto c = compute_profile(make_model("cone:0.5", 4));
  CHECK(check_power_laplacian(c, 1, -1) <= 1e-10);
  for (const char* id : presets)
    for (int n : {3, 4, 7}) {
      const auto p = compute_profile(make_model(id, n), log_grid(0.05, 20, 16));
      const double alpha = double(n) / (n - 2);
      for (double r : p.grid())
        for (double beta : {-1.0, 1.0, alpha, 0.5}) {
          const auto g = p.at(r);
          const double scale = std::abs(beta * (beta - 1)) * std::pow(g.G, beta - 2) * g.Gp * g.Gp + 1e-300;
          CHECK(check_power_laplacian(p, r, beta) <= 1e-10 * std::max(scale, std::pow(g.G, beta) / (r * r)));
        }
    }
}

TEST_CASE("non-parabolicity", "[green]") {
  CHECK(nonparabolic_check(make_model("euclidean", 4), 1).varopoulos_integral_finite);
  const auto c = nonparabolic_check(make_model("cone:0.5", 3), 1);
  CHECK(c.varopoulos_integral_finite);
  CHECK_THAT(c.tail_exponent, WithinAbs(-2.0, 1e-6));
  const auto slow = nonparabolic_check(make_model(3, power_profile(1.0 / 3)), 1);
  CHECK_FALSE(slow.varopoulos_integral_finite);
  CHECK_FALSE(slow.diagnostic.empty());
  CHECK_THROWS_AS(compute_profile(make_model(3, power_profile(1.0 / 3))), InvalidInput);
  CHECK_THROWS_AS(nonparabolic_check(make_model("euclidean", 4), 0), InvalidInput);
}

TEST_CASE("profile invariants on presets", "[green][property]") {
  for (const char* id : presets)
    for (int n : {3, 4, 5, 8}) {
      const auto p = compute_profile(make_model(id, n));
      CHECK(p.alpha() == boost::rational<int>(n, n - 2));
      for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& q = p[i];
        CHECK(q.G > 0);
        CHECK(q.Gp < 0);
        if (i > 0) {
          CHECK(q.G < p[i - 1].G);
          CHECK(q.b > p[i - 1].b);
        }
        CHECK(q.Gp == -(n - 2) * std::pow(q.f, 1.0 - n));
        CHECK(q.Gpp == (n - 2) * (n - 1) * std::pow(q.f, -double(n)) * q.fp);
        // b2p two ways
        const double e = 2.0 / (2.0 - n);
        CHECK_THAT(q.b2p, WithinRel(e * std::pow(q.G, e - 1) * q.Gp, 1e-12));
        // gradient estimate and gradient bound (all presets have nonnegative Ricci curvature)
        CHECK(q.grad_b <= 1 + 1e-8);
        CHECK(q.Gp * q.Gp <= (n - 2) * (n - 2) * std::pow(q.G, double(n) / (n - 2) + 1) * (1 + 1e-12));
      }
    }
  const auto e = compute_profile(make_model("euclidean", 4));
  for (const auto& q : e.points()) {
    CHECK_THAT(q.b, WithinRel(q.r, 1e-12));
    CHECK_THAT(q.grad_b, WithinRel(1.0, 1e-12));
  }
}

TEST_CASE("finite differences of G reproduce G'", "[green][property]") {
  for (const char* id : presets) {
    const auto m = make_model(id, 4);
    for (double r : {0.05, 0.6, 0.8, 3.0}) {
      const double h = 1e-3 * r;
      const double d = (green_value(m, r + h) - green_value(m, r - h)) / (2 * h);
      const auto q = green_at(m, r);
      CHECK_THAT(d, WithinRel(q.Gp, 1e-5));
      const double d2 = (green_at(m, r + h).Gp - green_at(m, r - h).Gp) / (2 * h);
      CHECK_THAT(d2, WithinRel(q.Gpp, 1e-4));
    }
  }
}

TEST_CASE("tail integral is insensitive to the outer cutoff", "[green][property]") {
  const auto w = WarpingProfile::smoothed_cone(0.5, 1.0);
  for (int n : {3, 4, 6}) {
    const double full = radial_integral(w, 1.0 - n, 0.3, INFINITY);
    const double cut = radial_integral(w, 1.0 - n, 0.3, 1e8) + radial_integral(w, 1.0 - n, 1e8, INFINITY);
    CHECK_THAT(cut, WithinRel(full, 1e-10));
    const double a = radial_integral(w, 1.0 - n, 0.3, 1e6), b = radial_integral(w, 1.0 - n, 0.3, 2e6);
    CHECK(std::abs(b - a) <= 1e-10 * full * 1e4);
  }
}

TEST_CASE("grids and CSV export", "[green]") {
  const auto g = log_grid();
  CHECK(g.size() == 512);
  CHECK(g.front() == 1e-2);
  CHECK(g.back() == 1e2);
  CHECK_THROWS_AS(log_grid(0, 1, 10), InvalidInput);
  CHECK_THROWS_AS(log_grid(1, 1, 10), InvalidInput);
  CHECK_THROWS_AS(compute_profile(make_model("euclidean", 4), {1, 0.5}), InvalidInput);
  CHECK_THROWS_AS(compute_profile(make_model("euclidean", 4), {-1, 0.5}), InvalidInput);
  CHECK_THROWS_AS(green_value(make_model("euclidean", 4), 0), InvalidInput);

  const auto p = compute_profile(make_model("euclidean", 4), {1, 2});
  std::ostringstream os;
  write_profile_csv(p, os);
  CHECK(os.str() == "r,G,Gp,Gpp,b,b2,grad_b,mu_rad,mu_tan\n1,1,-2,6,1,1,1,2,2\n2,0.25,-0.25,0.375,2,4,1,2,2\n");
}
