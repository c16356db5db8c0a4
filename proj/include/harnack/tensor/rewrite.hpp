#pragma once

/// \file
/// Rewrite system for derivatives of a harmonic function G on a manifold with
/// parallel Ricci curvature, evaluated in a normal frame.
///
/// Rules:
///   hessian symmetry       G_{ab...} = G_{ba...}
///   third-order commutator G_{abc...} = G_{acb...} + nabla_{...}(R_{bcla} G_l)
///   fourth-order commutator G_{abcd} = G_{abdc} + R_{cdmb} G_{am} + R_{cdma} G_{bm}
///   harmonicity            G_{kk...} = 0
///   contracted Bianchi     (nabla_k R)_{jkli} = 0 (any contracted slot)
///   parallel Ricci         nabla Ric = 0
///
/// A derivative string with an internal trace is rewritten until the traced
/// pair leads, where harmonicity removes it. Strings without a trace are
/// brought to nondecreasing label order.

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "harnack/tensor/expr.hpp"

namespace harnack::tensor {

class RewriteLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Label fresh_label(const Term& t) { return std::max(max_label(t) + 1, first_dummy + 40); }

// e_m applied to one factor, as a list of replacement factor groups with
// coefficients. Empty result means the derivative vanishes.
inline std::vector<std::pair<Coefficient, std::vector<Factor>>> differentiate_factor(const Factor& f, Label m) {
  switch (f.kind) {
    case FactorKind::DerivG: {
      auto s = f.idx;
      s.push_back(m);
      return {{Coefficient(1), {deriv_g(s)}}};
    }
    case FactorKind::Riem: return {{Coefficient(1), {d_riem(m, f.idx[0], f.idx[1], f.idx[2], f.idx[3])}}};
    case FactorKind::Ric: return {{Coefficient(1), {d_ric(m, f.idx[0], f.idx[1])}}};
    case FactorKind::Kron: return {};
    case FactorKind::GPow:
      return {{f.power.as_coefficient(), {g_pow(f.power - Exponent::constant(1)), deriv_g({m})}}};
    case FactorKind::DRic: return {};  // parallel Ricci
    case FactorKind::DRiem:
      throw MalformedExpression("second covariant derivatives of curvature are not supported");
  }
  return {};
}

}  // namespace detail

/// Frame derivative e_m of an expression by the Leibniz rule. In a normal
/// frame this is the covariant derivative at the base point.
inline TensorExpr derivative(const TensorExpr& e, Label m) {
  TensorExpr out;
  for (const auto& t : e.terms()) {
    for (std::size_t fi = 0; fi < t.factors.size(); ++fi) {
      for (auto& [c, repl] : detail::differentiate_factor(t.factors[fi], m)) {
        Term nt{t.coeff * c, {}};
        for (std::size_t fj = 0; fj < t.factors.size(); ++fj) {
          if (fj == fi) nt.factors.insert(nt.factors.end(), repl.begin(), repl.end());
          else nt.factors.push_back(t.factors[fj]);
        }
        out.terms().push_back(std::move(nt));
      }
    }
  }
  return out;
}

struct ReduceOptions {
  /// When set, the applicable rewrite is chosen at random instead of first-found.
  std::optional<std::uint64_t> shuffle_seed;
  std::size_t max_steps = 200000;
};

namespace detail {

// Adjacent transposition of positions p, p+1 in derivative factor fi.
inline std::vector<Term> swap_adjacent(const Term& t, std::size_t fi, std::size_t p) {
  const auto& s = t.factors[fi].idx;
  const std::size_t len = s.size();
  auto with_factor = [&](std::vector<Factor> repl, Coefficient c = Coefficient(1)) {
    Term nt{t.coeff * c, {}};
    for (std::size_t fj = 0; fj < t.factors.size(); ++fj) {
      if (fj == fi) nt.factors.insert(nt.factors.end(), repl.begin(), repl.end());
      else nt.factors.push_back(t.factors[fj]);
    }
    return nt;
  };
  std::vector<Label> swapped = s;
  std::swap(swapped[p], swapped[p + 1]);
  std::vector<Term> out;
  out.push_back(with_factor({deriv_g(swapped)}));
  const Label fresh = fresh_label(t);
  if (p == 0) return out;
  if (p == 1) {
    // G_{abc} - G_{acb} = R_{bcla} G_l, differentiated along any trailing index.
    const Label a = s[0], b = s[1], c = s[2], l = fresh;
    if (len == 3) {
      out.push_back(with_factor({riem(b, c, l, a), deriv_g({l})}));
    } else if (len == 4) {
      const Label d = s[3];
      out.push_back(with_factor({d_riem(d, b, c, l, a), deriv_g({l})}));
      out.push_back(with_factor({riem(b, c, l, a), deriv_g({l, d})}));
    } else {
      throw MalformedExpression("commutator at position 1 needs a string of length 3 or 4");
    }
    return out;
  }
  if (p == 2 && len == 4) {
    // G_{abcd} - G_{abdc} = R_{cdmb} G_{am} + R_{cdma} G_{bm}
    const Label a = s[0], b = s[1], c = s[2], d = s[3], m = fresh;
    out.push_back(with_factor({riem(c, d, m, b), deriv_g({a, m})}));
    out.push_back(with_factor({riem(c, d, m, a), deriv_g({b, m})}));
    return out;
  }
  throw MalformedExpression("unsupported commutator position");
}

struct Rewrite {
  enum class Kind { Vanish, Swap } kind;
  std::size_t factor = 0;
  std::size_t position = 0;
};

inline std::vector<Rewrite> applicable_rewrites(const Term& t) {
  std::vector<Rewrite> out;
  for (std::size_t fi = 0; fi < t.factors.size(); ++fi) {
    const auto& f = t.factors[fi];
    switch (f.kind) {
      case FactorKind::DRic: out.push_back({Rewrite::Kind::Vanish, fi, 0}); break;
      case FactorKind::DRiem: {
        // Any contraction involving a differentiated Riemann factor vanishes:
        // slot-slot traces are derivatives of Ricci, and the derivative index
        // traced against a slot is the contracted second Bianchi identity.
        const auto& q = f.idx;
        bool contracted = false;
        for (std::size_t x = 0; x < q.size(); ++x)
          for (std::size_t y = x + 1; y < q.size(); ++y)
            if (q[x] == q[y]) contracted = true;
        if (contracted) out.push_back({Rewrite::Kind::Vanish, fi, 0});
        break;
      }
      case FactorKind::DerivG: {
        const auto& s = f.idx;
        const std::size_t len = s.size();
        std::optional<std::pair<std::size_t, std::size_t>> pair;
        for (std::size_t x = 0; x < len && !pair; ++x)
          for (std::size_t y = x + 1; y < len; ++y)
            if (s[x] == s[y]) {
              pair = {x, y};
              break;
            }
        if (pair) {
          auto [x, y] = *pair;
          if (x == 0 && y == 1) {
            out.push_back({Rewrite::Kind::Vanish, fi, 0});
          } else {
            if (x > 0) out.push_back({Rewrite::Kind::Swap, fi, x - 1});
            if (y > x + 1) out.push_back({Rewrite::Kind::Swap, fi, y - 1});
          }
        } else {
          for (std::size_t p = 1; p + 1 < len; ++p)
            if (s[p] > s[p + 1]) {
              out.push_back({Rewrite::Kind::Swap, fi, p});
              break;
            }
        }
        break;
      }
      default: break;
    }
  }
  return out;
}

}  // namespace detail

/// Applies the rewrite system to a fixed point and returns the normalized result.
inline TensorExpr commute_and_reduce(const TensorExpr& e, const ReduceOptions& opts = {},
                                     std::vector<std::string>* trace = nullptr) {
  std::mt19937_64 rng(opts.shuffle_seed.value_or(0));
  std::deque<Term> work(e.terms().begin(), e.terms().end());
  TensorExpr done;
  std::size_t steps = 0;
  while (!work.empty()) {
    if (++steps > opts.max_steps) throw RewriteLimitExceeded("rewrite system exceeded its step budget");
    auto c = detail::canonicalize_term(std::move(work.front()));
    work.pop_front();
    if (c.zero) continue;
    auto rewrites = detail::applicable_rewrites(c.term);
    if (rewrites.empty()) {
      done.terms().push_back(std::move(c.term));
      continue;
    }
    std::size_t pick = 0;
    if (opts.shuffle_seed) pick = std::uniform_int_distribution<std::size_t>(0, rewrites.size() - 1)(rng);
    const auto& rw = rewrites[pick];
    if (trace) {
      trace->push_back((rw.kind == detail::Rewrite::Kind::Vanish ? "vanish  " : "commute ") +
                       term_str(c.term));
    }
    if (rw.kind == detail::Rewrite::Kind::Vanish) continue;
    for (auto& nt : detail::swap_adjacent(c.term, rw.factor, rw.position)) work.push_back(std::move(nt));
  }
  return normalize(done);
}

/// Laplacian: two frame derivatives along a fresh dummy, then reduction.
inline TensorExpr laplacian(const TensorExpr& e, const ReduceOptions& opts = {}) {
  const Label d = std::max(e.max_label() + 1, first_dummy + 80);
  return commute_and_reduce(derivative(derivative(e, d), d), opts);
}

/// Contraction g(grad G, grad X) = G_k X_{...k}.
inline TensorExpr gradient_pairing(const TensorExpr& e) {
  const Label d = std::max(e.max_label() + 1, first_dummy + 80);
  return commute_and_reduce(make({deriv_g({d})}) * derivative(e, d));
}

}  // namespace harnack::tensor
