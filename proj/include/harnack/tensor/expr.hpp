#pragma once

/// \file
/// Abstract-index tensor expressions over the exact coefficient ring.
///
/// A term is a coefficient times a product of factors: derivative strings of
/// G (G_{i1...ik}, innermost derivative first), Riemann and Ricci components,
/// their first covariant derivatives, Kronecker deltas, and a power of G.
/// Index labels are small integers. A label that appears once in a term is
/// free, a label that appears twice is a dummy summed over an orthonormal
/// frame. Canonical dummies are renumbered from `first_dummy` upward.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "harnack/tensor/coefficient.hpp"

namespace harnack::tensor {

using Label = int;

/// Letter labels: idx::i is printed as "i", and so on.
namespace idx {
inline constexpr Label a = 0, b = 1, c = 2, d = 3, e = 4, f = 5, g = 6, h = 7, i = 8, j = 9, k = 10,
                       l = 11, m = 12, p = 15, q = 16, s = 18, t = 19;
}  // namespace idx

inline constexpr Label first_dummy = 100;
inline constexpr int max_derivative_order = 4;

class MalformedExpression : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FactorKind : int { DerivG = 0, Riem = 1, Ric = 2, DRiem = 3, DRic = 4, Kron = 5, GPow = 6 };

struct Factor {
  FactorKind kind{FactorKind::GPow};
  /// DerivG: the derivative string. Riem: a,b,c,d. Ric/Kron: a,b.
  /// DRiem: m,a,b,c,d (derivative index first). DRic: m,a,b.
  std::vector<Label> idx;
  Exponent power{};  // GPow only

  friend bool operator==(const Factor& x, const Factor& y) {
    return x.kind == y.kind && x.idx == y.idx && x.power == y.power;
  }
  friend bool operator<(const Factor& x, const Factor& y) {
    return std::tie(x.kind, x.idx, x.power) < std::tie(y.kind, y.idx, y.power);
  }
};

inline Factor deriv_g(std::vector<Label> s) {
  if (s.empty()) return Factor{FactorKind::GPow, {}, Exponent::constant(1)};
  if (static_cast<int>(s.size()) > max_derivative_order)
    throw MalformedExpression("derivative strings longer than 4 are not supported");
  return Factor{FactorKind::DerivG, std::move(s), {}};
}
inline Factor riem(Label a, Label b, Label c, Label d) { return Factor{FactorKind::Riem, {a, b, c, d}, {}}; }
inline Factor ric(Label a, Label b) { return Factor{FactorKind::Ric, {a, b}, {}}; }
inline Factor kron(Label a, Label b) { return Factor{FactorKind::Kron, {a, b}, {}}; }
inline Factor g_pow(Exponent e) { return Factor{FactorKind::GPow, {}, e}; }
inline Factor g_pow(Rational r) { return g_pow(Exponent::constant(r)); }
inline Factor d_riem(Label m, Label a, Label b, Label c, Label d) {
  return Factor{FactorKind::DRiem, {m, a, b, c, d}, {}};
}
inline Factor d_ric(Label m, Label a, Label b) { return Factor{FactorKind::DRic, {m, a, b}, {}}; }

struct Term {
  Coefficient coeff{1};
  std::vector<Factor> factors;
};

inline std::string label_name(Label x) {
  static const std::string dummy_letters = "klmpqrstuvwxyzabcdefgh";
  if (x >= 0 && x < 26) return std::string(1, static_cast<char>('a' + x));
  if (x >= first_dummy && x - first_dummy < static_cast<int>(dummy_letters.size()))
    return std::string(1, dummy_letters[x - first_dummy]);
  return "_" + std::to_string(x);
}

inline std::string factor_str(const Factor& f) {
  auto join = [](auto first, auto last) {
    std::string s;
    for (auto it = first; it != last; ++it) s += label_name(*it);
    return s;
  };
  switch (f.kind) {
    case FactorKind::DerivG: return "G_{" + join(f.idx.begin(), f.idx.end()) + "}";
    case FactorKind::Riem: return "R_{" + join(f.idx.begin(), f.idx.end()) + "}";
    case FactorKind::Ric: return "Ric_{" + join(f.idx.begin(), f.idx.end()) + "}";
    case FactorKind::DRiem: return "(nabla_" + label_name(f.idx[0]) + " R)_{" + join(f.idx.begin() + 1, f.idx.end()) + "}";
    case FactorKind::DRic: return "(nabla_" + label_name(f.idx[0]) + " Ric)_{" + join(f.idx.begin() + 1, f.idx.end()) + "}";
    case FactorKind::Kron: return "delta_{" + join(f.idx.begin(), f.idx.end()) + "}";
    case FactorKind::GPow: return "G^(" + f.power.str() + ")";
  }
  return "?";
}

inline std::string term_str(const Term& t) {
  std::string s = "(" + t.coeff.str() + ")";
  for (const auto& f : t.factors) s += " " + factor_str(f);
  return s;
}

namespace detail {

inline std::vector<Label> term_labels(const Term& t) {
  std::vector<Label> out;
  for (const auto& f : t.factors) out.insert(out.end(), f.idx.begin(), f.idx.end());
  return out;
}

inline std::map<Label, int> label_counts(const Term& t) {
  std::map<Label, int> counts;
  for (const auto& f : t.factors)
    for (Label x : f.idx) ++counts[x];
  return counts;
}

inline Label max_label(const Term& t) {
  Label mx = -1;
  for (const auto& f : t.factors)
    for (Label x : f.idx) mx = std::max(mx, x);
  return mx;
}

inline void relabel(Term& t, Label from, Label to) {
  for (auto& f : t.factors)
    for (auto& x : f.idx)
      if (x == from) x = to;
}

// The eight presentations of a Riemann index quadruple with their signs.
inline std::array<std::pair<std::array<Label, 4>, int>, 8> riemann_orbit(Label a, Label b, Label c, Label d) {
  return {{{{a, b, c, d}, +1},
           {{b, a, c, d}, -1},
           {{a, b, d, c}, -1},
           {{b, a, d, c}, +1},
           {{c, d, a, b}, +1},
           {{d, c, a, b}, -1},
           {{c, d, b, a}, -1},
           {{d, c, b, a}, +1}}};
}

// Minimal presentation of a Riemann quadruple. Returns sign 0 if the
// component vanishes identically by antisymmetry.
inline std::pair<std::array<Label, 4>, int> canonical_riemann(Label a, Label b, Label c, Label d) {
  auto orbit = riemann_orbit(a, b, c, d);
  auto best = orbit[0];
  for (const auto& e : orbit)
    if (e.first < best.first) best = e;
  for (const auto& e : orbit)
    if (e.first == best.first && e.second != best.second) return {best.first, 0};
  return best;
}

// Canonical presentation of one factor with concrete labels; sign 0 = zero.
inline int canonicalize_factor(Factor& f) {
  switch (f.kind) {
    case FactorKind::DerivG: {
      // Hessian symmetry on the first two slots. A label traced inside the
      // string goes first so that traces can be moved to the front.
      if (f.idx.size() < 2) return 1;
      auto traced = [&](std::size_t pos) {
        return std::count(f.idx.begin(), f.idx.end(), f.idx[pos]) == 2;
      };
      const bool t0 = traced(0), t1 = traced(1);
      if ((t1 && !t0) || (t0 == t1 && f.idx[1] < f.idx[0])) std::swap(f.idx[0], f.idx[1]);
      return 1;
    }
    case FactorKind::Ric:
    case FactorKind::Kron:
      if (f.idx[1] < f.idx[0]) std::swap(f.idx[0], f.idx[1]);
      return 1;
    case FactorKind::DRic:
      if (f.idx[2] < f.idx[1]) std::swap(f.idx[1], f.idx[2]);
      return 1;
    case FactorKind::Riem: {
      auto [q, sign] = canonical_riemann(f.idx[0], f.idx[1], f.idx[2], f.idx[3]);
      f.idx.assign(q.begin(), q.end());
      return sign;
    }
    case FactorKind::DRiem: {
      auto [q, sign] = canonical_riemann(f.idx[1], f.idx[2], f.idx[3], f.idx[4]);
      std::copy(q.begin(), q.end(), f.idx.begin() + 1);
      return sign;
    }
    case FactorKind::GPow: return 1;
  }
  return 1;
}

// Merges powers of G, contracts Kronecker deltas, and turns traced Riemann
// factors into Ricci factors. Returns false if the term vanishes.
inline bool simplify_structure(Term& t) {
  // powers of G
  Exponent total{};
  bool any_pow = false;
  std::vector<Factor> rest;
  for (auto& f : t.factors) {
    if (f.kind == FactorKind::GPow) {
      total = total + f.power;
      any_pow = true;
    } else {
      rest.push_back(std::move(f));
    }
  }
  t.factors = std::move(rest);
  if (any_pow && !total.is_zero()) t.factors.push_back(g_pow(total));

  // Kronecker deltas
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t fi = 0; fi < t.factors.size(); ++fi) {
      if (t.factors[fi].kind != FactorKind::Kron) continue;
      Label x = t.factors[fi].idx[0];
      Label y = t.factors[fi].idx[1];
      if (x == y) {
        t.coeff *= Coefficient::symbol(Symbol::n);
        t.factors.erase(t.factors.begin() + static_cast<std::ptrdiff_t>(fi));
        changed = true;
        break;
      }
      auto counts = label_counts(t);
      if (counts[y] == 2) {
        t.factors.erase(t.factors.begin() + static_cast<std::ptrdiff_t>(fi));
        relabel(t, y, x);
        changed = true;
        break;
      }
      if (counts[x] == 2) {
        t.factors.erase(t.factors.begin() + static_cast<std::ptrdiff_t>(fi));
        relabel(t, x, y);
        changed = true;
        break;
      }
    }
  }

  // traced Riemann -> Ricci, with Ric(X,Y) = R(X,e_k,Y,e_k)
  for (auto& f : t.factors) {
    if (f.kind != FactorKind::Riem) continue;
    const auto& q = f.idx;
    if (q[0] == q[1] || q[2] == q[3]) return false;
    // Bring the traced pair to slots 2 and 4 via the symmetry group.
    for (const auto& [p, sign] : riemann_orbit(q[0], q[1], q[2], q[3])) {
      if (p[1] == p[3]) {
        if (sign < 0) t.coeff = -t.coeff;
        f = ric(p[0], p[2]);
        break;
      }
    }
  }
  return true;
}

}  // namespace detail

class TensorExpr {
 public:
  TensorExpr() = default;
  explicit TensorExpr(Term t) { terms_.push_back(std::move(t)); }
  TensorExpr(Coefficient c, std::vector<Factor> fs) { terms_.push_back(Term{std::move(c), std::move(fs)}); }

  static TensorExpr scalar(Coefficient c) { return TensorExpr(std::move(c), {}); }

  const std::vector<Term>& terms() const { return terms_; }
  std::vector<Term>& terms() { return terms_; }
  bool empty() const { return terms_.empty(); }

  TensorExpr& operator+=(const TensorExpr& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  TensorExpr& operator-=(const TensorExpr& o) { return *this += -o; }

  TensorExpr operator-() const {
    TensorExpr r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend TensorExpr operator+(TensorExpr a, const TensorExpr& b) { return a += b; }
  friend TensorExpr operator-(TensorExpr a, const TensorExpr& b) { return a -= b; }

  friend TensorExpr operator*(const Coefficient& c, TensorExpr e) {
    for (auto& t : e.terms_) t.coeff = c * t.coeff;
    return e;
  }

  /// Tensor product; dummies of the right operand are renamed apart.
  friend TensorExpr operator*(const TensorExpr& a, const TensorExpr& b) {
    Label offset = std::max(a.max_label(), b.max_label()) + 1;
    offset = std::max(offset, first_dummy);
    TensorExpr r;
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        Term t2 = tb;
        auto counts = detail::label_counts(t2);
        for (auto [lab, cnt] : counts)
          if (cnt == 2) detail::relabel(t2, lab, lab + offset);
        Term t{ta.coeff * t2.coeff, ta.factors};
        t.factors.insert(t.factors.end(), t2.factors.begin(), t2.factors.end());
        r.terms_.push_back(std::move(t));
      }
    }
    return r;
  }

  Label max_label() const {
    Label mx = -1;
    for (const auto& t : terms_) mx = std::max(mx, detail::max_label(t));
    return mx;
  }

  /// Free labels (appear exactly once), taken from the first term.
  std::set<Label> free_labels() const {
    std::set<Label> out;
    if (terms_.empty()) return out;
    for (auto [lab, cnt] : detail::label_counts(terms_.front()))
      if (cnt == 1) out.insert(lab);
    return out;
  }

  /// Renames a free label. Dummies equal to `to` are moved out of the way.
  TensorExpr rename_free(Label from, Label to) const {
    TensorExpr r = *this;
    Label spare = std::max(max_label() + 1, first_dummy) + 64;
    for (auto& t : r.terms_) {
      auto counts = detail::label_counts(t);
      if (counts.count(to) && counts[to] == 2) detail::relabel(t, to, spare++);
      detail::relabel(t, from, to);
    }
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t k = 0; k < terms_.size(); ++k) os << (k ? "\n  + " : "    ") << term_str(terms_[k]);
    return os.str();
  }

 private:
  std::vector<Term> terms_;
};

inline TensorExpr make(Coefficient c, std::vector<Factor> fs) { return TensorExpr(std::move(c), std::move(fs)); }
inline TensorExpr make(std::vector<Factor> fs) { return TensorExpr(Coefficient(1), std::move(fs)); }

namespace detail {

struct CanonicalTerm {
  bool zero{false};
  Term term;
};

inline void validate_indices(const Term& t) {
  for (auto [lab, cnt] : label_counts(t)) {
    if (cnt > 2)
      throw MalformedExpression("index " + label_name(lab) + " appears " + std::to_string(cnt) +
                                " times in " + term_str(t));
  }
}

// Brings a single term to canonical form: structural simplification, then
// the minimal presentation over all renamings of its dummies combined with
// the factor-wise symmetry groups. A term equal to minus itself is zero.
inline CanonicalTerm canonicalize_term(Term t) {
  if (t.coeff.is_zero()) return {true, {}};
  validate_indices(t);
  if (!simplify_structure(t)) return {true, {}};
  validate_indices(t);

  std::vector<Label> dummies;
  for (auto [lab, cnt] : label_counts(t))
    if (cnt == 2) dummies.push_back(lab);

  std::vector<int> perm(dummies.size());
  std::iota(perm.begin(), perm.end(), 0);

  bool have_best = false;
  std::vector<Factor> best;
  int best_sign = 0;
  bool conflict = false;

  do {
    std::map<Label, Label> rename;
    for (std::size_t k = 0; k < dummies.size(); ++k) rename[dummies[k]] = first_dummy + perm[k];
    std::vector<Factor> fs = t.factors;
    int sign = 1;
    for (auto& f : fs) {
      for (auto& x : f.idx) {
        auto it = rename.find(x);
        if (it != rename.end()) x = it->second;
      }
      sign *= canonicalize_factor(f);
    }
    if (sign == 0) return {true, {}};
    std::sort(fs.begin(), fs.end());
    if (!have_best || fs < best) {
      best = std::move(fs);
      best_sign = sign;
      conflict = false;
      have_best = true;
    } else if (fs == best && sign != best_sign) {
      conflict = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (conflict) return {true, {}};
  Term out{best_sign > 0 ? t.coeff : -t.coeff, std::move(best)};
  return {false, std::move(out)};
}

}  // namespace detail

namespace detail {

// First Bianchi completion. For distinct labels w < x < y < z the canonical
// Riemann presentations are R_wxyz, R_wyxz, R_wzxy; the last is rewritten as
// R_wyxz - R_wxyz. Returns the position of a factor in that class, or npos.
inline std::size_t bianchi_target(const Term& t) {
  for (std::size_t fi = 0; fi < t.factors.size(); ++fi) {
    const auto& f = t.factors[fi];
    if (f.kind != FactorKind::Riem && f.kind != FactorKind::DRiem) continue;
    const std::size_t o = f.kind == FactorKind::DRiem ? 1 : 0;
    const Label w = f.idx[o], p = f.idx[o + 1], q = f.idx[o + 2], s = f.idx[o + 3];
    if (w < p && w < q && q < s && p > s) return fi;
  }
  return std::string::npos;
}

inline std::array<Term, 2> bianchi_split(const Term& t, std::size_t fi) {
  const auto& f = t.factors[fi];
  const std::size_t o = f.kind == FactorKind::DRiem ? 1 : 0;
  const Label w = f.idx[o], z = f.idx[o + 1], x = f.idx[o + 2], y = f.idx[o + 3];
  Term a = t, b = t;
  a.factors[fi].idx[o + 1] = y;  // R_wyxz
  a.factors[fi].idx[o + 2] = x;
  a.factors[fi].idx[o + 3] = z;
  b.factors[fi].idx[o + 1] = x;  // - R_wxyz
  b.factors[fi].idx[o + 2] = y;
  b.factors[fi].idx[o + 3] = z;
  b.coeff = -b.coeff;
  (void)w;
  return {a, b};
}

inline constexpr int bianchi_depth_cap = 16;

}  // namespace detail

/// Canonical form: dummies renamed minimally, factor symmetries and the first
/// Bianchi identity applied, like terms merged, zero terms dropped, terms sorted.
inline TensorExpr normalize(const TensorExpr& e) {
  std::map<std::vector<Factor>, Coefficient> merged;
  std::set<Label> free_ref;
  bool have_free = false;
  std::vector<std::pair<Term, int>> work;
  for (const auto& t : e.terms()) work.emplace_back(t, 0);
  while (!work.empty()) {
    auto [t, depth] = std::move(work.back());
    work.pop_back();
    auto c = detail::canonicalize_term(std::move(t));
    if (c.zero) continue;
    const auto fi = detail::bianchi_target(c.term);
    if (fi != std::string::npos && depth < detail::bianchi_depth_cap) {
      for (auto& part : detail::bianchi_split(c.term, fi)) work.emplace_back(std::move(part), depth + 1);
      continue;
    }
    std::set<Label> fr;
    for (auto [lab, cnt] : detail::label_counts(c.term))
      if (cnt == 1) fr.insert(lab);
    if (!have_free) {
      free_ref = fr;
      have_free = true;
    } else if (fr != free_ref) {
      throw MalformedExpression("free indices differ between terms: " + term_str(c.term));
    }
    merged[c.term.factors] += c.term.coeff;
  }
  TensorExpr out;
  for (auto& [fs, coeff] : merged)
    if (!coeff.is_zero()) out.terms().push_back(Term{coeff, fs});
  return out;
}

inline bool structurally_equal(const TensorExpr& a, const TensorExpr& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  if (ta.size() != tb.size()) return false;
  for (std::size_t k = 0; k < ta.size(); ++k)
    if (ta[k].coeff != tb[k].coeff || ta[k].factors != tb[k].factors) return false;
  return true;
}

}  // namespace harnack::tensor
