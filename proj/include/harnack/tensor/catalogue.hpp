#pragma once

/// \file
/// Catalogue of tensor identities for the Green function G (harmonic away
/// from the pole) on a manifold with parallel Ricci curvature, and the
/// machinery that reduces LHS - RHS to zero.
///
/// Notation inside the catalogue: free indices are i and j, B_{ij} = G_i G_j / G,
/// Ht_{ij} = G_{ij} + n/(2-n) G_i G_j / G + (n-2)/2 C G^alpha delta_{ij}.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "harnack/tensor/expr.hpp"
#include "harnack/tensor/rewrite.hpp"

namespace harnack::tensor {

class UnknownIdentity : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace build {

using namespace idx;

inline Coefficient N() { return Coefficient::symbol(Symbol::n); }
inline Coefficient U() { return Coefficient::symbol(Symbol::u); }
inline Coefficient Cc() { return Coefficient::symbol(Symbol::C); }
inline Coefficient Beta() { return Coefficient::symbol(Symbol::beta); }
inline Coefficient half() { return Coefficient(Rational(1, 2)); }

// Scratch labels used while re-indexing two-index tensors.
inline constexpr Label scratch_a = 60, scratch_b = 61, inner_k = 62, inner_l = 63;

/// X_{ab} for an expression X with free indices (i, j).
inline TensorExpr at(const TensorExpr& x, Label a, Label b) {
  return x.rename_free(i, scratch_a).rename_free(j, scratch_b).rename_free(scratch_a, a).rename_free(scratch_b, b);
}

/// (XY)_{ij} = X_{ik} Y_{kj}
inline TensorExpr matmul(const TensorExpr& x, const TensorExpr& y) {
  return at(x, i, inner_k) * at(y, inner_k, j);
}

inline TensorExpr delta() { return make({kron(i, j)}); }
inline TensorExpr grad_sq() { return make({deriv_g({k}), deriv_g({k})}); }

inline TensorExpr hess() { return make({deriv_g({i, j})}); }

inline TensorExpr b_tensor() { return make({deriv_g({i}), deriv_g({j}), g_pow(Rational(-1))}); }

/// (n-2)/2 C G^alpha delta_{ij}
inline TensorExpr c_shift() { return make(half() * Coefficient::nm2() * Cc(), {g_pow(Exponent::alpha()), kron(i, j)}); }

/// n/(2-n)
inline Coefficient n_over_2mn() { return -(N() * U()); }

inline TensorExpr htilde() { return hess() + n_over_2mn() * b_tensor() + c_shift(); }

/// Ric_{ik} X_{jk} + Ric_{jk} X_{ik}
inline TensorExpr ricci_sandwich(const TensorExpr& x) {
  return make({ric(i, inner_k)}) * at(x, j, inner_k) + make({ric(j, inner_k)}) * at(x, i, inner_k);
}

/// R_{ikjl} X_{kl}
inline TensorExpr riemann_contract(const TensorExpr& x) {
  return make({riem(i, inner_k, j, inner_l)}) * at(x, inner_k, inner_l);
}

/// R_{ikjl} G_k G_l / G: the gradient-slot reading of the curvature term.
inline TensorExpr curvature_gradient_term() {
  return make({riem(i, k, j, l), deriv_g({k}), deriv_g({l}), g_pow(Rational(-1))});
}

/// R_{kilj} G_k G_l / G: the gradients sit in the slots where the printed
/// term places G_i G_j.
inline TensorExpr curvature_printed_slots_term() {
  return make({riem(k, i, l, j), deriv_g({k}), deriv_g({l}), g_pow(Rational(-1))});
}

/// Right-hand side of the Laplacian-of-Harnack-quantity lemma.
inline TensorExpr lap_of_harnack_rhs(const TensorExpr& curvature_term) {
  const auto ht = htilde();
  const auto bt = b_tensor();
  const auto m = (Coefficient(-2) * U()) * bt + c_shift();  // 2/(2-n) B + (n-2)/2 C G^alpha g
  const Coefficient two_n_u = Coefficient(2) * N() * U();   // 2n/(n-2)
  TensorExpr rhs = ricci_sandwich(ht) - Coefficient(2) * riemann_contract(ht);
  rhs -= two_n_u * curvature_term;
  rhs -= two_n_u * (make({g_pow(Rational(-1))}) * matmul(ht, ht));
  rhs -= make(half() * N() * Coefficient::nm2() * Cc() * Cc(), {g_pow(Exponent::alpha(2, -1)), kron(i, j)});
  // 4n/(n-2) [C G^{alpha-1} - 2 |grad G|^2 / ((n-2)^2 G^2)] B
  rhs += make(Coefficient(4) * N() * U() * Cc(), {g_pow(Exponent::alpha(1, -1))}) * bt;
  rhs -= (Coefficient(8) * N() * U() * U() * U()) * (grad_sq() * make({g_pow(Rational(-2))}) * bt);
  rhs += two_n_u * (make({g_pow(Rational(-1))}) * (matmul(ht, m) + matmul(m, ht)));
  return rhs;
}

}  // namespace build

enum class IdentityKind { Axiom, Lemma, Step };

struct IdentitySpec {
  std::string name;
  IdentityKind kind;
  std::string statement;
  std::function<std::pair<TensorExpr, TensorExpr>()> sides;
};

struct IdentityResult {
  std::string name;
  IdentityKind kind{IdentityKind::Lemma};
  std::string statement;
  bool zero{false};
  TensorExpr lhs;
  TensorExpr rhs;
  TensorExpr residual;
  std::vector<std::string> trace;
};

inline const std::vector<IdentitySpec>& identity_catalogue() {
  using namespace build;
  using namespace idx;
  static const std::vector<IdentitySpec> catalogue = {
      {"commutator.axiom1", IdentityKind::Axiom, "G_{ij} = G_{ji}",
       [] { return std::pair{make({deriv_g({i, j})}), make({deriv_g({j, i})})}; }},
      {"commutator.axiom2", IdentityKind::Axiom, "G_{ijk} - G_{ikj} = R_{jkli} G_l",
       [] {
         return std::pair{make({deriv_g({i, j, k})}) - make({deriv_g({i, k, j})}),
                          make({riem(j, k, l, i), deriv_g({l})})};
       }},
      {"commutator.axiom3", IdentityKind::Axiom, "Delta G_i - (Delta G)_i = Ric_{ik} G_k",
       [] {
         return std::pair{make({deriv_g({i, k, k})}) - make({deriv_g({k, k, i})}), make({ric(i, k), deriv_g({k})})};
       }},
      {"commutator.axiom4", IdentityKind::Axiom, "G_{ijkl} - G_{ijlk} = R_{klmj} G_{im} + R_{klmi} G_{jm}",
       [] {
         return std::pair{make({deriv_g({i, j, k, l})}) - make({deriv_g({i, j, l, k})}),
                          make({riem(k, l, m, j), deriv_g({i, m})}) + make({riem(k, l, m, i), deriv_g({j, m})})};
       }},
      {"commutator.axiom5", IdentityKind::Axiom,
       "Delta G_{ij} - (Delta G)_{ij} = Ric_{jk} G_{ik} + Ric_{ik} G_{jk} - 2 R_{ikjl} G_{kl}",
       [] {
         return std::pair{make({deriv_g({i, j, k, k})}) - make({deriv_g({k, k, i, j})}),
                          make({ric(j, k), deriv_g({i, k})}) + make({ric(i, k), deriv_g({j, k})}) -
                              make(Coefficient(2), {riem(i, k, j, l), deriv_g({k, l})})};
       }},
      {"misc.1", IdentityKind::Lemma, "Delta G_{ij} = Ric_{jk} G_{ik} + Ric_{ik} G_{jk} - 2 R_{ikjl} G_{kl}",
       [] {
         return std::pair{laplacian(hess()), make({ric(j, k), deriv_g({i, k})}) + make({ric(i, k), deriv_g({j, k})}) -
                                                 make(Coefficient(2), {riem(i, k, j, l), deriv_g({k, l})})};
       }},
      {"misc.2", IdentityKind::Lemma, "Delta(G_i G_j) = Ric_{ik} G_j G_k + Ric_{jk} G_i G_k + 2 G_{ik} G_{jk}",
       [] {
         return std::pair{laplacian(make({deriv_g({i}), deriv_g({j})})),
                          make({ric(i, k), deriv_g({j}), deriv_g({k})}) + make({ric(j, k), deriv_g({i}), deriv_g({k})}) +
                              make(Coefficient(2), {deriv_g({i, k}), deriv_g({j, k})})};
       }},
      {"misc.3", IdentityKind::Lemma, "g(grad G, grad(G_i G_j)) = G_i G_k G_{jk} + G_j G_k G_{ik}",
       [] {
         return std::pair{gradient_pairing(make({deriv_g({i}), deriv_g({j})})),
                          make({deriv_g({i}), deriv_g({k}), deriv_g({j, k})}) +
                              make({deriv_g({j}), deriv_g({k}), deriv_g({i, k})})};
       }},
      {"misc.4", IdentityKind::Lemma,
       "Delta(G_i G_j / G) = Ric_{ik} G_j G_k / G + Ric_{jk} G_i G_k / G + 2 G_{ik} G_{jk} / G"
       " + 2 |grad G|^2 G_i G_j / G^3 - 2 G_k (G_i G_{jk} + G_j G_{ik}) / G^2",
       [] {
         const auto ginv = g_pow(Rational(-1));
         TensorExpr rhs = make({ric(i, k), deriv_g({j}), deriv_g({k}), ginv}) +
                          make({ric(j, k), deriv_g({i}), deriv_g({k}), ginv}) +
                          make(Coefficient(2), {deriv_g({i, k}), deriv_g({j, k}), ginv}) +
                          make(Coefficient(2), {deriv_g({l}), deriv_g({l}), deriv_g({i}), deriv_g({j}), g_pow(Rational(-3))}) -
                          make(Coefficient(2), {deriv_g({k}), deriv_g({i}), deriv_g({j, k}), g_pow(Rational(-2))}) -
                          make(Coefficient(2), {deriv_g({k}), deriv_g({j}), deriv_g({i, k}), g_pow(Rational(-2))});
         return std::pair{laplacian(b_tensor()), rhs};
       }},
      {"misc.5", IdentityKind::Lemma, "Delta G^alpha = 2n/(2-n)^2 G^(alpha-2) |grad G|^2",
       [] {
         return std::pair{laplacian(make({g_pow(Exponent::alpha())})),
                          make(Coefficient(2) * N() * U() * U(), {g_pow(Exponent::alpha(1, -2)), deriv_g({k}), deriv_g({k})})};
       }},
      {"power_rule", IdentityKind::Lemma, "Delta G^beta = beta (beta - 1) G^(beta-2) |grad G|^2",
       [] {
         return std::pair{laplacian(make({g_pow(Exponent::beta())})),
                          make(Beta() * (Beta() - Coefficient(1)), {g_pow(Exponent::beta(-2)), deriv_g({k}), deriv_g({k})})};
       }},
      {"b_squared", IdentityKind::Lemma, "B^2 = |grad G|^2 / G B",
       [] {
         return std::pair{normalize(matmul(b_tensor(), b_tensor())),
                          normalize(grad_sq() * make({g_pow(Rational(-1))}) * b_tensor())};
       }},
      {"lap_of_harnack.step1", IdentityKind::Step,
       "Delta(Ht - (n-2)/2 C G^alpha g)_{ij} = Ric_{ik}(G_{jk} + n/(2-n) G_j G_k / G) + Ric_{jk}(G_{ik} + n/(2-n) G_i G_k / G)"
       " - 2 R_{ikjl} G_{kl} + 2n/((2-n)G) [(Hess G - B)^2]_{ij}",
       [] {
         const auto base = hess() + n_over_2mn() * b_tensor();
         const auto hb = hess() - b_tensor();
         TensorExpr rhs = ricci_sandwich(base) - Coefficient(2) * riemann_contract(hess()) +
                          (-Coefficient(2) * N() * U()) * (make({g_pow(Rational(-1))}) * matmul(hb, hb));
         return std::pair{laplacian(normalize(htilde() - c_shift())), rhs};
       }},
      {"lap_of_harnack.step2", IdentityKind::Step,
       "Delta(Ht - (n-2)/2 C G^alpha g)_{ij} = Ric_{ik}(Ht - (n-2)/2 C G^alpha g)_{jk} + Ric_{jk}(...)_{ik}"
       " - 2 R_{ikjl}(Ht - n/(2-n) B - (n-2)/2 C G^alpha g)_{kl} + 2n/((2-n)G) [Ht - n/(2-n) B - (n-2)/2 C G^alpha g - B]^2_{ij}",
       [] {
         const auto ht = htilde();
         const auto sq = ht - n_over_2mn() * b_tensor() - c_shift() - b_tensor();
         TensorExpr rhs = ricci_sandwich(ht - c_shift()) -
                          Coefficient(2) * riemann_contract(ht - n_over_2mn() * b_tensor() - c_shift()) +
                          (-Coefficient(2) * N() * U()) * (make({g_pow(Rational(-1))}) * matmul(sq, sq));
         return std::pair{laplacian(normalize(htilde() - c_shift())), rhs};
       }},
      {"lap_of_harnack.square", IdentityKind::Step,
       "Delta(Ht - (n-2)/2 C G^alpha g)_{ij} = Ric_{ik} Ht_{jk} + Ric_{jk} Ht_{ik} - 2 R_{ikjl} Ht_{kl}"
       " - 2n/(n-2) R_{ikjl} G_k G_l / G - 2n/((n-2)G) [Ht - 2/(2-n) B - (n-2)/2 C G^alpha g]^2_{ij}",
       [] {
         const auto ht = htilde();
         const Coefficient two_n_u = Coefficient(2) * N() * U();
         const auto sq = ht + (Coefficient(2) * U()) * b_tensor() - c_shift();
         TensorExpr rhs = ricci_sandwich(ht) - Coefficient(2) * riemann_contract(ht) -
                          two_n_u * curvature_gradient_term() -
                          two_n_u * (make({g_pow(Rational(-1))}) * matmul(sq, sq));
         return std::pair{laplacian(normalize(htilde() - c_shift())), rhs};
       }},
      {"lap_of_harnack.step3", IdentityKind::Step,
       "square expanded: ... - 2n/((n-2)G) Ht^2 - 8n/((n-2)^3 G) (B^2)_{ij} - n(n-2)/2 C^2 G^(2alpha-1) g"
       " + 4n/(n-2) C G^(alpha-1) B + 2n/((n-2)G) [Ht M + M Ht]_{ij}, M = 2/(2-n) B + (n-2)/2 C G^alpha g",
       [] {
         const auto ht = htilde();
         const auto bt = b_tensor();
         const auto m = (Coefficient(-2) * U()) * bt + c_shift();
         const Coefficient two_n_u = Coefficient(2) * N() * U();
         const auto ginv = make({g_pow(Rational(-1))});
         TensorExpr rhs = ricci_sandwich(ht) - Coefficient(2) * riemann_contract(ht) - two_n_u * curvature_gradient_term();
         rhs -= two_n_u * (ginv * matmul(ht, ht));
         rhs -= (Coefficient(8) * N() * U() * U() * U()) * (ginv * matmul(bt, bt));
         rhs -= make(half() * N() * Coefficient::nm2() * Cc() * Cc(), {g_pow(Exponent::alpha(2, -1)), kron(i, j)});
         rhs += make(Coefficient(4) * N() * U() * Cc(), {g_pow(Exponent::alpha(1, -1))}) * bt;
         rhs += two_n_u * (ginv * (matmul(ht, m) + matmul(m, ht)));
         return std::pair{laplacian(normalize(htilde() - c_shift())), rhs};
       }},
      {"lap_of_harnack", IdentityKind::Lemma,
       "Delta(Ht - (n-2)/2 C G^alpha g)_{ij} = Ric_{ik} Ht_{jk} + Ric_{jk} Ht_{ik} - 2 R_{ikjl} Ht_{kl}"
       " - 2n/(n-2) R_{ikjl} G_k G_l / G - 2n/((n-2)G) Ht^2_{ij} - n(n-2)/2 C^2 G^(2alpha-1) g_{ij}"
       " + 4n/(n-2) [C G^(alpha-1) - 2|grad G|^2/((n-2)^2 G^2)] B_{ij} + 2n/((n-2)G) [Ht M + M Ht]_{ij}",
       [] {
         return std::pair{laplacian(normalize(htilde() - c_shift())), lap_of_harnack_rhs(curvature_gradient_term())};
       }},
      {"lap_of_harnack.printed_slots", IdentityKind::Lemma,
       "lap_of_harnack with the curvature term read as R_{kilj} G_k G_l / G (gradients in the printed G_i G_j slots)",
       [] {
         return std::pair{laplacian(normalize(htilde() - c_shift())),
                          lap_of_harnack_rhs(curvature_printed_slots_term())};
       }},
  };
  return catalogue;
}

inline const IdentitySpec& find_identity(const std::string& name) {
  for (const auto& spec : identity_catalogue())
    if (spec.name == name) return spec;
  throw UnknownIdentity("unknown identity: " + name);
}

/// Builds LHS - RHS, reduces, and reports zero or the irreducible residual.
inline IdentityResult verify_identity(const std::string& name, const ReduceOptions& opts = {},
                                      bool with_trace = false) {
  const auto& spec = find_identity(name);
  IdentityResult out;
  out.name = spec.name;
  out.kind = spec.kind;
  out.statement = spec.statement;
  auto [lhs, rhs] = spec.sides();
  auto* tr = with_trace ? &out.trace : nullptr;
  out.lhs = commute_and_reduce(lhs, opts, tr);
  out.rhs = commute_and_reduce(rhs, opts, tr);
  out.residual = commute_and_reduce(out.lhs - out.rhs, opts, tr);
  out.zero = out.residual.empty();
  return out;
}

}  // namespace harnack::tensor
