#pragma once

/// \file
/// Exact coefficient ring for the index-calculus engine.
///
/// Coefficients are polynomials with rational coefficients in the symbols
///   n    (dimension),
///   u    (shorthand for 1/(n-2)),
///   C    (the Harnack constant),
///   beta (a free exponent used by the power rule),
/// modulo the relation n*u = 1 + 2*u. Every element has a unique reduced
/// representative in which no monomial contains both n and u, so equality of
/// coefficients is structural equality of the reduced polynomials.

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/rational.hpp>

namespace harnack::tensor {

using Rational = boost::rational<std::int64_t>;

enum class Symbol : int { n = 0, u = 1, C = 2, beta = 3 };

inline constexpr int symbol_count = 4;

class Coefficient {
 public:
  using Monomial = std::array<int, symbol_count>;

  Coefficient() = default;
  Coefficient(Rational value) {  // NOLINT(google-explicit-constructor)
    if (value != Rational(0)) terms_[Monomial{}] = value;
  }
  Coefficient(std::int64_t value) : Coefficient(Rational(value)) {}  // NOLINT
  Coefficient(int value) : Coefficient(Rational(value)) {}           // NOLINT

  static Coefficient symbol(Symbol s, int power = 1) {
    Monomial m{};
    m[static_cast<int>(s)] = power;
    Coefficient c;
    c.add_reduced(m, Rational(1));
    return c;
  }

  /// n / (n - 2), the exponent alpha.
  static Coefficient alpha() { return Coefficient(1) + Rational(2) * symbol(Symbol::u); }
  /// 1 / (n - 2)
  static Coefficient inv_nm2() { return symbol(Symbol::u); }
  /// n - 2
  static Coefficient nm2() { return symbol(Symbol::n) - Coefficient(2); }

  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
  }

  Rational constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }

  Coefficient operator-() const {
    Coefficient r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  Coefficient& operator+=(const Coefficient& o) {
    for (const auto& [m, c] : o.terms_) accumulate(m, c);
    return *this;
  }
  Coefficient& operator-=(const Coefficient& o) { return *this += -o; }

  Coefficient& operator*=(const Coefficient& o) {
    *this = *this * o;
    return *this;
  }

  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }

  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    Coefficient r;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m{};
        for (int k = 0; k < symbol_count; ++k) m[k] = ma[k] + mb[k];
        r.add_reduced(m, ca * cb);
      }
    }
    return r;
  }

  friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }
  friend bool operator<(const Coefficient& a, const Coefficient& b) { return a.terms_ < b.terms_; }

  /// Numeric value at a concrete dimension, constant and exponent.
  double evaluate(double n, double C, double beta = 0.0) const {
    if (n == 2.0 && has_symbol(Symbol::u)) throw std::domain_error("coefficient singular at n = 2");
    const double vals[symbol_count] = {n, 1.0 / (n - 2.0), C, beta};
    double total = 0.0;
    for (const auto& [m, c] : terms_) {
      double term = boost::rational_cast<double>(c);
      for (int k = 0; k < symbol_count; ++k)
        for (int p = 0; p < m[k]; ++p) term *= vals[k];
      total += term;
    }
    return total;
  }

  bool has_symbol(Symbol s) const {
    for (const auto& [m, c] : terms_)
      if (m[static_cast<int>(s)] != 0) return true;
    return false;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    static constexpr const char* names[symbol_count] = {"n", "u", "C", "beta"};
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      Rational v = c;
      if (first) {
        if (v < Rational(0)) os << "-";
      } else {
        os << (v < Rational(0) ? " - " : " + ");
      }
      first = false;
      if (v < Rational(0)) v = -v;
      std::string parts;
      if (v != Rational(1) || m == Monomial{}) {
        parts = std::to_string(v.numerator());
        if (v.denominator() != 1) parts += "/" + std::to_string(v.denominator());
      }
      for (int k = 0; k < symbol_count; ++k) {
        if (m[k] == 0) continue;
        if (!parts.empty()) parts += "*";
        parts += names[k];
        if (m[k] > 1) parts += "^" + std::to_string(m[k]);
      }
      os << parts;
    }
    return os.str();
  }

 private:
  void accumulate(const Monomial& m, const Rational& c) {
    if (c == Rational(0)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Rational(0)) terms_.erase(it);
    }
  }

  // Rewrites n^a u^b (a, b > 0) through n*u = 1 + 2u until n and u no longer
  // share a monomial.
  void add_reduced(Monomial m, const Rational& c) {
    if (c == Rational(0)) return;
    const int in = static_cast<int>(Symbol::n);
    const int iu = static_cast<int>(Symbol::u);
    if (m[in] > 0 && m[iu] > 0) {
      Monomial lower = m;
      --lower[in];
      --lower[iu];
      add_reduced(lower, c);
      Monomial with_u = lower;
      ++with_u[iu];
      add_reduced(with_u, c * Rational(2));
      return;
    }
    accumulate(m, c);
  }

  std::map<Monomial, Rational> terms_;
};

inline Coefficient operator*(const Rational& r, const Coefficient& c) { return Coefficient(r) * c; }

/// Affine exponent c0 + cu*u + cb*beta carried by powers of G.
struct Exponent {
  Rational c0{0};
  Rational cu{0};
  Rational cb{0};

  static Exponent constant(Rational v) { return {v, 0, 0}; }
  /// alpha = n/(n-2) = 1 + 2u
  static Exponent alpha(Rational k = 1, Rational shift = 0) { return {k + shift, Rational(2) * k, Rational(0)}; }
  static Exponent beta(Rational shift = 0) { return {shift, 0, 1}; }

  bool is_zero() const { return c0 == Rational(0) && cu == Rational(0) && cb == Rational(0); }

  Coefficient as_coefficient() const {
    return Coefficient(c0) + cu * Coefficient::symbol(Symbol::u) + cb * Coefficient::symbol(Symbol::beta);
  }

  Exponent operator+(const Exponent& o) const { return {c0 + o.c0, cu + o.cu, cb + o.cb}; }
  Exponent operator-(const Exponent& o) const { return {c0 - o.c0, cu - o.cu, cb - o.cb}; }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.c0 == b.c0 && a.cu == b.cu && a.cb == b.cb;
  }
  friend bool operator<(const Exponent& a, const Exponent& b) {
    if (a.c0 != b.c0) return a.c0 < b.c0;
    if (a.cu != b.cu) return a.cu < b.cu;
    return a.cb < b.cb;
  }

  double evaluate(double n, double beta_value = 0.0) const {
    return boost::rational_cast<double>(c0) + boost::rational_cast<double>(cu) / (n - 2.0) +
           boost::rational_cast<double>(cb) * beta_value;
  }

  std::string str() const { return as_coefficient().str(); }
};

}  // namespace harnack::tensor
