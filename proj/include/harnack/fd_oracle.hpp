#pragma once

/// \file
/// Finite-difference curvature oracle. Only the metric is differenced; test
/// functions carry analytic partials.
///
/// Curvature convention: R(X,Y,Z,W) = g(nabla_Y nabla_X Z - nabla_X nabla_Y Z + nabla_[X,Y] Z, W),
/// so that R(a,b,c,d) = g_{d rho} Rstd^rho_{c b a} with
/// Rstd^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma}
///                        + Gamma^rho_{mu lambda} Gamma^lambda_{nu sigma} - Gamma^rho_{nu lambda} Gamma^lambda_{mu sigma}.
/// Derivative strings f_{ijk} follow the order of differentiation
/// (f_{ij} = e_j(e_i f) in a normal frame).

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "harnack/errors.hpp"
#include "harnack/fd/charts.hpp"

namespace harnack::fd {

inline constexpr Real default_step = 1e-3L;

namespace detail {

inline Vec shifted(const Vec& x, int axis, Real by) {
  Vec y = x;
  y(axis) += by;
  return y;
}

inline void check_step(Real h) {
  if (!(h > 0) || !std::isfinite(h)) throw InvalidInput("finite-difference step must be positive");
}

inline Mat checked_metric(const CoordinateChart& c, const Vec& x) {
  Mat g = c.metric(x);
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const Real lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-12L * std::max<Real>(hi, 1)))
    throw NumericalFailure("metric is near-singular at the probe point of chart " + c.name);
  return g;
}

}  // namespace detail

namespace detail {

// Per-coordinate steps h * scale(x).
inline Vec steps(const CoordinateChart& c, const Vec& x, Real h) {
  check_step(h);
  if (!c.step_scale) return Vec::Constant(c.dim, h);
  return h * c.step_scale(x);
}

inline Tensor christoffels_hs(const CoordinateChart& c, const Vec& x, const Vec& hs) {
  const int n = c.dim;
  const Mat ginv = checked_metric(c, x).inverse();
  std::vector<Mat> dg(n);
  for (int k = 0; k < n; ++k)
    dg[k] = (c.metric(shifted(x, k, hs(k))) - c.metric(shifted(x, k, -hs(k)))) / (2 * hs(k));
  Tensor G(n, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = b; cc < n; ++cc) {
        Real s = 0;
        for (int d = 0; d < n; ++d) s += ginv(a, d) * (dg[b](d, cc) + dg[cc](d, b) - dg[d](b, cc));
        G(a, b, cc) = G(a, cc, b) = s / 2;
      }
  return G;
}

}  // namespace detail

/// Gamma^a_{bc}, central differences of the metric.
inline Tensor christoffels(const CoordinateChart& c, const Vec& x, Real h = default_step) {
  return detail::christoffels_hs(c, x, detail::steps(c, x, h));
}

namespace detail {

// d_e Gamma^a_{bc} stored at (e, a, b, c).
inline Tensor christoffel_gradient(const CoordinateChart& c, const Vec& x, const Vec& hs) {
  const int n = c.dim;
  Tensor out(n, 4);
  for (int e = 0; e < n; ++e) {
    const Tensor d = (Real(1) / (2 * hs(e))) *
                     (christoffels_hs(c, shifted(x, e, hs(e)), hs) - christoffels_hs(c, shifted(x, e, -hs(e)), hs));
    for (std::size_t k = 0; k < d.size(); ++k) out.flat(std::size_t(e) * d.size() + k) = d.flat(k);
  }
  return out;
}

// d_e d_f Gamma^a_{bc} stored at (e, f, a, b, c).
inline Tensor christoffel_hessian(const CoordinateChart& c, const Vec& x, const Vec& hs) {
  const int n = c.dim;
  Tensor out(n, 5);
  const Tensor g0 = christoffels_hs(c, x, hs);
  const std::size_t block = g0.size();
  for (int e = 0; e < n; ++e) {
    for (int f = e; f < n; ++f) {
      const Real he = hs(e), hf = hs(f);
      Tensor d;
      if (e == f) {
        d = (Real(1) / (he * he)) *
            (christoffels_hs(c, shifted(x, e, he), hs) + christoffels_hs(c, shifted(x, e, -he), hs) - Real(2) * g0);
      } else {
        auto at = [&](Real se, Real sf) { return christoffels_hs(c, shifted(shifted(x, e, se * he), f, sf * hf), hs); };
        d = (Real(1) / (4 * he * hf)) * (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1));
      }
      for (std::size_t k = 0; k < block; ++k) {
        out.flat((std::size_t(e) * n + f) * block + k) = d.flat(k);
        out.flat((std::size_t(f) * n + e) * block + k) = d.flat(k);
      }
    }
  }
  return out;
}

// Lower-index Riemann tensor in coordinates, paper convention.
inline Tensor riemann_coords(const Mat& g, const Tensor& G, const Tensor& dG) {
  const int n = int(g.rows());
  Tensor Rup(n, 4);  // Rstd^rho_{sigma mu nu} at (rho, sigma, mu, nu)
  for (int rho = 0; rho < n; ++rho)
    for (int sg = 0; sg < n; ++sg)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          Real s = dG(mu, rho, nu, sg) - dG(nu, rho, mu, sg);
          for (int l = 0; l < n; ++l) s += G(rho, mu, l) * G(l, nu, sg) - G(rho, nu, l) * G(l, mu, sg);
          Rup(rho, sg, mu, nu) = s;
        }
  Tensor R(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          Real s = 0;
          for (int rho = 0; rho < n; ++rho) s += g(d, rho) * Rup(rho, cc, b, a);
          R(a, b, cc, d) = s;
        }
  return R;
}

inline Mat ricci_from(const Mat& ginv, const Tensor& R) {
  const int n = int(ginv.rows());
  Mat ric = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) ric(a, b) += ginv(k, l) * R(a, k, b, l);
  return ric;
}

inline Mat ricci_coords(const CoordinateChart& c, const Vec& x, const Vec& hs) {
  const Mat g = checked_metric(c, x);
  const Tensor R = riemann_coords(g, christoffels_hs(c, x, hs), christoffel_gradient(c, x, hs));
  return ricci_from(g.inverse(), R);
}

// Contract every (covariant) slot with the frame: T_on(i..) = T(a..) E(a,i)...
inline Tensor to_frame(const Tensor& T, const Mat& E) {
  const int n = T.dim();
  Tensor cur = T;
  for (int slot = 0; slot < T.rank(); ++slot) {
    Tensor next(n, T.rank());
    std::size_t stride = 1;
    for (int s = slot + 1; s < T.rank(); ++s) stride *= std::size_t(n);
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const int i = int((k / stride) % std::size_t(n));
      const std::size_t base = k - std::size_t(i) * stride;
      Real s = 0;
      for (int a = 0; a < n; ++a) s += cur.flat(base + std::size_t(a) * stride) * E(a, i);
      next.flat(k) = s;
    }
    cur = std::move(next);
  }
  return cur;
}

inline Tensor from_matrix(const Mat& M) {
  const int n = int(M.rows());
  Tensor T(n, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) T(a, b) = M(a, b);
  return T;
}

}  // namespace detail

/// Gram-Schmidt orthonormalization of the coordinate vectors taken in `order`
/// (identity order when empty). Columns are the frame vectors.
inline Mat orthonormal_frame(const Mat& g, std::vector<int> order = {}) {
  const int n = int(g.rows());
  if (order.empty()) {
    order.resize(std::size_t(n));
    std::iota(order.begin(), order.end(), 0);
  }
  if (int(order.size()) != n) throw InvalidInput("frame order must list every coordinate once");
  Mat E = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Vec v = Vec::Zero(n);
    v(order[std::size_t(i)]) = 1;
    for (int j = 0; j < i; ++j) v -= (E.col(j).transpose() * g * v)(0, 0) * E.col(j);
    const Real len = std::sqrt((v.transpose() * g * v)(0, 0));
    if (!(len > 1e-12L)) throw NumericalFailure("degenerate frame ordering");
    E.col(i) = v / len;
  }
  return E;
}

struct RiemannSample {
  Tensor R;    // orthonormal frame, R(e_i, e_j, e_k, e_l)
  Mat ric;     // Ric(e_i, e_j) = sum_k R(e_i, e_k, e_j, e_k)
  Mat frame;   // columns: frame vectors in coordinates

  /// Curvature of the plane spanned by e_i and e_j.
  Real sectional(int i, int j) const { return R(i, j, i, j); }
};

inline RiemannSample riemann(const CoordinateChart& c, const Vec& x, Real h = default_step,
                             const std::vector<int>& order = {}) {
  const Vec hs = detail::steps(c, x, h);
  const Mat g = detail::checked_metric(c, x);
  const Tensor Rc = detail::riemann_coords(g, detail::christoffels_hs(c, x, hs), detail::christoffel_gradient(c, x, hs));
  RiemannSample s;
  s.frame = orthonormal_frame(g, order);
  s.R = detail::to_frame(Rc, s.frame);
  const int n = c.dim;
  s.ric = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s.ric(i, j) += s.R(i, k, j, k);
  return s;
}

/// Covariant Hessian of f in the orthonormal frame.
inline Mat hessian(const CoordinateChart& c, const TestFunction& f, const Vec& x, Real h = default_step,
                   const std::vector<int>& order = {}) {
  const int n = c.dim;
  const Tensor G = christoffels(c, x, h);
  Tensor H(n, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Real s = f.partial(x, {a, b});
      for (int k = 0; k < n; ++k) s -= G(k, b, a) * f.partial(x, {k});
      H(a, b) = s;
    }
  const Tensor on = detail::to_frame(H, orthonormal_frame(detail::checked_metric(c, x), order));
  Mat M(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) M(a, b) = on(a, b);
  return M;
}

namespace detail {

// Covariant derivatives f_{;a}, f_{;ab}, f_{;abc}, f_{;abcd} in coordinates.
struct CovariantJet {
  Tensor T1, T2, T3, T4;
};

inline CovariantJet covariant_jet(const CoordinateChart& c, const TestFunction& f, const Vec& x, Real h) {
  if (f.max_order < 4) throw InvalidInput("test function " + f.name + " lacks fourth-order partials");
  const int n = c.dim;
  const Vec hs = steps(c, x, h);
  const Tensor G = christoffels_hs(c, x, hs);
  const Tensor dG = christoffel_gradient(c, x, hs);  // (e, a, b, c)
  const Tensor d2G = christoffel_hessian(c, x, hs);  // (e, f, a, b, c)
  Tensor p1(n, 1), p2(n, 2), p3(n, 3), p4(n, 4);
  for (int a = 0; a < n; ++a) {
    p1(a) = f.partial(x, {a});
    for (int b = 0; b < n; ++b) {
      p2(a, b) = f.partial(x, {a, b});
      for (int e = 0; e < n; ++e) {
        p3(a, b, e) = f.partial(x, {a, b, e});
        for (int d = 0; d < n; ++d) p4(a, b, e, d) = f.partial(x, {a, b, e, d});
      }
    }
  }
  CovariantJet J{p1, Tensor(n, 2), Tensor(n, 3), Tensor(n, 4)};
  // T2_ab = f_ab - G^e_ba f_e
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Real s = p2(a, b);
      for (int e = 0; e < n; ++e) s -= G(e, b, a) * p1(e);
      J.T2(a, b) = s;
    }
  // D2(a,b,c) = d_c T2_ab
  Tensor D2(n, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc) {
        Real s = p3(a, b, cc);
        for (int e = 0; e < n; ++e) s -= dG(cc, e, b, a) * p1(e) + G(e, b, a) * p2(e, cc);
        D2(a, b, cc) = s;
      }
  // T3_abc = d_c T2_ab - G^e_ca T2_eb - G^e_cb T2_ae
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc) {
        Real s = D2(a, b, cc);
        for (int e = 0; e < n; ++e) s -= G(e, cc, a) * J.T2(e, b) + G(e, cc, b) * J.T2(a, e);
        J.T3(a, b, cc) = s;
      }
  // DD2(a,b,c,d) = d_d d_c T2_ab
  Tensor DD2(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          Real s = p4(a, b, cc, d);
          for (int e = 0; e < n; ++e)
            s -= d2G(d, cc, e, b, a) * p1(e) + dG(cc, e, b, a) * p2(e, d) + dG(d, e, b, a) * p2(e, cc) +
                 G(e, b, a) * p3(e, cc, d);
          DD2(a, b, cc, d) = s;
        }
  // D3(a,b,c,d) = d_d T3_abc
  // T4_abcd = D3 - G^e_da T3_ebc - G^e_db T3_aec - G^e_dc T3_abe
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          Real s = DD2(a, b, cc, d);
          for (int e = 0; e < n; ++e)
            s -= dG(d, e, cc, a) * J.T2(e, b) + G(e, cc, a) * D2(e, b, d) + dG(d, e, cc, b) * J.T2(a, e) +
                 G(e, cc, b) * D2(a, e, d);
          for (int e = 0; e < n; ++e)
            s -= G(e, d, a) * J.T3(e, b, cc) + G(e, d, b) * J.T3(a, e, cc) + G(e, d, cc) * J.T3(a, b, e);
          J.T4(a, b, cc, d) = s;
        }
  return J;
}

// LHS - RHS of the five commutator identities, orthonormal frame.
inline std::array<Tensor, 5> lemma_defects(const CoordinateChart& c, const TestFunction& f, const Vec& x, Real h,
                                           const std::vector<int>& order) {
  const int n = c.dim;
  const Mat g = checked_metric(c, x);
  const Mat E = orthonormal_frame(g, order);
  const CovariantJet J = covariant_jet(c, f, x, h);
  const Tensor f1 = to_frame(J.T1, E), f2 = to_frame(J.T2, E), f3 = to_frame(J.T3, E), f4 = to_frame(J.T4, E);
  const Vec hs = steps(c, x, h);
  const Tensor R = to_frame(riemann_coords(g, christoffels_hs(c, x, hs), christoffel_gradient(c, x, hs)), E);
  Tensor ric(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ric(i, j) += R(i, k, j, k);

  std::array<Tensor, 5> D{Tensor(n, 2), Tensor(n, 3), Tensor(n, 1), Tensor(n, 4), Tensor(n, 2)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) D[0](i, j) = f2(i, j) - f2(j, i);
  // f_ijk - f_ikj = R_jkli f_l
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Real s = f3(i, j, k) - f3(i, k, j);
        for (int l = 0; l < n; ++l) s -= R(j, k, l, i) * f1(l);
        D[1](i, j, k) = s;
      }
  // f_ikk - f_kki = R_ik f_k
  for (int i = 0; i < n; ++i) {
    Real s = 0;
    for (int k = 0; k < n; ++k) s += f3(i, k, k) - f3(k, k, i) - ric(i, k) * f1(k);
    D[2](i) = s;
  }
  // f_ijkl - f_ijlk = R_klmj f_im + R_klmi f_jm
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Real s = f4(i, j, k, l) - f4(i, j, l, k);
          for (int m = 0; m < n; ++m) s -= R(k, l, m, j) * f2(i, m) + R(k, l, m, i) * f2(j, m);
          D[3](i, j, k, l) = s;
        }
  // f_ijkk - f_kkij = R_jk f_ik + R_ik f_jk - 2 R_ikjl f_kl
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Real s = 0;
      for (int k = 0; k < n; ++k) {
        s += f4(i, j, k, k) - f4(k, k, i, j) - ric(j, k) * f2(i, k) - ric(i, k) * f2(j, k);
        for (int l = 0; l < n; ++l) s += 2 * R(i, k, j, l) * f2(k, l);
      }
      D[4](i, j) = s;
    }
  return D;
}

inline constexpr Real roundoff_floor = 1e-11L;

}  // namespace detail

struct CommutatorCheck {
  Real h = 0;
  std::array<Real, 5> residual{};       // ||LHS - RHS|| at step h
  std::array<Real, 5> residual_half{};  // at step h/2
  std::array<Real, 5> ratio{};          // residual / residual_half, NaN below the roundoff floor
  std::array<Real, 5> K{};              // residual / h^2
  std::array<Real, 5> richardson{};     // ||(4 D(h/2) - D(h)) / 3||
};

/// Residuals of the five commutator identities for f at x.
inline CommutatorCheck check_commutator_identities(const CoordinateChart& c, const TestFunction& f, const Vec& x,
                                   Real h = default_step, const std::vector<int>& order = {}) {
  detail::check_step(h);
  const auto Dh = detail::lemma_defects(c, f, x, h, order);
  const auto Dh2 = detail::lemma_defects(c, f, x, h / 2, order);
  const auto Dh4 = detail::lemma_defects(c, f, x, h / 4, order);
  CommutatorCheck r;
  r.h = h;
  for (int k = 0; k < 5; ++k) {
    r.residual[k] = Dh[k].norm();
    r.residual_half[k] = Dh2[k].norm();
    r.K[k] = r.residual[k] / (h * h);
    r.richardson[k] = ((Real(4) / 3) * Dh2[k] - (Real(1) / 3) * Dh[k]).norm();
    const bool above = r.residual[k] > detail::roundoff_floor && r.residual_half[k] > detail::roundoff_floor;
    r.ratio[k] = above ? r.residual[k] / r.residual_half[k] : std::numeric_limits<Real>::quiet_NaN();
    // Differences of successive refinements shrink by 4 while truncation
    // error dominates; growth means roundoff has taken over.
    const Real d1 = (Dh[k] - Dh2[k]).norm(), d2 = (Dh2[k] - Dh4[k]).norm();
    if (d1 > detail::roundoff_floor && d2 > d1)
      throw NumericalFailure("finite-difference step " + shortest(double(h)) +
                             " is roundoff dominated (refinement differences grow)");
  }
  return r;
}

struct OneFormResult {
  Real index_order = 0;  // S_{k;ij} - S_{k;ji} - R_{jikl} S_l
  Real outer_first = 0;  // S_{k;ji} - S_{k;ij} - R_{jikl} S_l
};

/// Commutator of second covariant derivatives of the one-form S = u dv,
/// compared against S(R(e_j, e_i) e_k) under the two readings of the slot order.
inline OneFormResult check_one_form(const CoordinateChart& c, const TestFunction& u, const TestFunction& v,
                                    const Vec& x, Real h = default_step) {
  const int n = c.dim;
  const Mat g = detail::checked_metric(c, x);
  const Vec hs = detail::steps(c, x, h);
  const Tensor G = detail::christoffels_hs(c, x, hs), dG = detail::christoffel_gradient(c, x, hs);
  Tensor S(n, 1), dS(n, 2), ddS(n, 3);  // partials: S_a, d_c S_a, d_d d_c S_a
  for (int a = 0; a < n; ++a) {
    S(a) = u.partial(x, {}) * v.partial(x, {a});
    for (int cc = 0; cc < n; ++cc) {
      dS(a, cc) = u.partial(x, {cc}) * v.partial(x, {a}) + u.partial(x, {}) * v.partial(x, {a, cc});
      for (int d = 0; d < n; ++d)
        ddS(a, cc, d) = u.partial(x, {cc, d}) * v.partial(x, {a}) + u.partial(x, {cc}) * v.partial(x, {a, d}) +
                        u.partial(x, {d}) * v.partial(x, {a, cc}) + u.partial(x, {}) * v.partial(x, {a, cc, d});
    }
  }
  Tensor S1(n, 2), S2(n, 3);  // S_{a;c}, S_{a;cd}
  for (int a = 0; a < n; ++a)
    for (int cc = 0; cc < n; ++cc) {
      Real s = dS(a, cc);
      for (int e = 0; e < n; ++e) s -= G(e, cc, a) * S(e);
      S1(a, cc) = s;
    }
  for (int a = 0; a < n; ++a)
    for (int cc = 0; cc < n; ++cc)
      for (int d = 0; d < n; ++d) {
        Real s = ddS(a, cc, d);
        for (int e = 0; e < n; ++e)
          s -= dG(d, e, cc, a) * S(e) + G(e, cc, a) * dS(e, d) + G(e, d, a) * S1(e, cc) + G(e, d, cc) * S1(a, e);
        S2(a, cc, d) = s;
      }
  const Mat E = orthonormal_frame(g);
  const Tensor s1 = detail::to_frame(S, E), s3 = detail::to_frame(S2, E);
  const Tensor R = detail::to_frame(detail::riemann_coords(g, G, dG), E);
  Tensor A(n, 3), B(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Real rhs = 0;
        for (int l = 0; l < n; ++l) rhs += R(j, i, k, l) * s1(l);
        A(i, j, k) = s3(k, i, j) - s3(k, j, i) - rhs;
        B(i, j, k) = s3(k, j, i) - s3(k, i, j) - rhs;
      }
  return {A.norm(), B.norm()};
}

struct ParallelRicciResult {
  Real value = 0;  // Richardson-extrapolated ||nabla Ric||
  Real raw = 0;    // at step h
  Real raw_half = 0;
};

/// Frobenius norm of nabla Ric in an orthonormal frame.
inline ParallelRicciResult check_parallel_ricci(const CoordinateChart& c, const Vec& x, Real h = default_step) {
  detail::check_step(h);
  const int n = c.dim;
  auto nabla_ric = [&](Real s) {
    const Vec hs = detail::steps(c, x, s);
    const Tensor G = detail::christoffels_hs(c, x, hs);
    const Mat ric = detail::ricci_coords(c, x, hs);
    Tensor T(n, 3);  // (a, b, e) = (nabla_e Ric)_ab
    for (int e = 0; e < n; ++e) {
      const Mat d = (detail::ricci_coords(c, detail::shifted(x, e, hs(e)), hs) -
                     detail::ricci_coords(c, detail::shifted(x, e, -hs(e)), hs)) /
                    (2 * hs(e));
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Real v = d(a, b);
          for (int k = 0; k < n; ++k) v -= G(k, e, a) * ric(k, b) + G(k, e, b) * ric(a, k);
          T(a, b, e) = v;
        }
    }
    return detail::to_frame(T, orthonormal_frame(detail::checked_metric(c, x)));
  };
  const Tensor Th = nabla_ric(h), Th2 = nabla_ric(h / 2);
  return {((Real(4) / 3) * Th2 - (Real(1) / 3) * Th).norm(), Th.norm(), Th2.norm()};
}

}  // namespace harnack::fd
