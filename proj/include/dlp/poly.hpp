#pragma once

// Dense univariate polynomials over the rationals, with exact Sturm
// sequences for real-root counting and isolation.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "dlp/errors.hpp"
#include "dlp/rational.hpp"

namespace dlp {

/// Coefficient vector indexed by degree. The zero polynomial is empty and
/// the highest stored coefficient is never zero.
class DensePoly {
 public:
  DensePoly() = default;
  DensePoly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }
  explicit DensePoly(RationalVector coeffs) : c_(std::move(coeffs)) { trim(); }

  static DensePoly constant(const Rational& v) { return DensePoly(RationalVector{v}); }
  /// The monomial x.
  static DensePoly x() { return DensePoly({Rational(0), Rational(1)}); }
  /// (x - root)
  static DensePoly linear_factor(const Rational& root) { return DensePoly({-root, Rational(1)}); }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const RationalVector& coeffs() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& t) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc *= t;
      acc += *it;
    }
    return acc;
  }

  DensePoly derivative() const {
    RationalVector d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rational(static_cast<long>(i)));
    return DensePoly(std::move(d));
  }

  /// Antiderivative with zero constant term.
  DensePoly antiderivative() const {
    if (c_.empty()) return {};
    RationalVector a(c_.size() + 1);
    for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / Rational(static_cast<long>(i + 1));
    return DensePoly(std::move(a));
  }

  Rational integrate(const Rational& lo, const Rational& hi) const {
    DensePoly a = antiderivative();
    return a(hi) - a(lo);
  }

  DensePoly& operator+=(const DensePoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  DensePoly& operator-=(const DensePoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  DensePoly& operator*=(const Rational& s) {
    if (s.is_zero()) {
      c_.clear();
      return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend DensePoly operator+(DensePoly a, const DensePoly& b) { return a += b; }
  friend DensePoly operator-(DensePoly a, const DensePoly& b) { return a -= b; }
  friend DensePoly operator*(DensePoly a, const Rational& s) { return a *= s; }
  friend DensePoly operator*(const Rational& s, DensePoly a) { return a *= s; }
  friend DensePoly operator-(DensePoly a) { return a *= Rational(-1); }

  friend DensePoly operator*(const DensePoly& a, const DensePoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    RationalVector r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return DensePoly(std::move(r));
  }

  friend bool operator==(const DensePoly& a, const DensePoly& b) { return a.c_ == b.c_; }

  /// Euclidean division: returns {quotient, remainder}.
  static std::pair<DensePoly, DensePoly> divmod(const DensePoly& num, const DensePoly& den) {
    if (den.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (num.degree() < den.degree()) return {DensePoly{}, num};
    RationalVector rem = num.c_;
    RationalVector quo(num.c_.size() - den.c_.size() + 1);
    const Rational& lead = den.c_.back();
    for (std::size_t k = quo.size(); k-- > 0;) {
      Rational f = rem[k + den.c_.size() - 1] / lead;
      quo[k] = f;
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < den.c_.size(); ++j) rem[k + j] -= f * den.c_[j];
    }
    rem.resize(den.c_.size() - 1);
    return {DensePoly(std::move(quo)), DensePoly(std::move(rem))};
  }

  /// Multiplies by the positive scalar that makes the content 1 (integer
  /// coefficients, gcd 1). Sign is preserved.
  DensePoly primitive() const {
    if (c_.empty()) return {};
    mpz_class l = 1, g = 0;
    for (const auto& v : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.den().get_mpz_t());
    for (const auto& v : c_) {
      mpz_class n = v.num() * (l / v.den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    return *this * Rational(l, g);
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c_[i].str() + ")";
      if (i >= 1) s += "*x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  RationalVector c_;
};

/// Open interval (lo, hi) known to contain exactly one real root. A
/// degenerate interval lo == hi denotes an exact rational root.
struct RootInterval {
  Rational lo;
  Rational hi;
};

/// Root count in an interval, with roots at the endpoints reported apart.
struct RootCount {
  std::size_t interior = 0;
  bool root_at_lo = false;
  bool root_at_hi = false;
};

namespace detail {

inline std::vector<DensePoly> sturm_chain(const DensePoly& p) {
  std::vector<DensePoly> chain{p.primitive(), p.derivative().primitive()};
  while (!chain.back().is_zero()) {
    auto r = DensePoly::divmod(chain[chain.size() - 2], chain.back()).second;
    chain.push_back((-r).primitive());
  }
  chain.pop_back();
  return chain;
}

inline std::size_t sign_changes_at(const std::vector<DensePoly>& chain, const Rational& t) {
  std::size_t changes = 0;
  int last = 0;
  for (const auto& q : chain) {
    int s = q(t).sign();
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

inline int sign_at_infinity(const DensePoly& p, bool positive) {
  int s = p.leading().sign();
  if (!positive && p.degree() % 2 == 1) s = -s;
  return s;
}

inline std::size_t sign_changes_at_infinity(const std::vector<DensePoly>& chain, bool positive) {
  std::size_t changes = 0;
  int last = 0;
  for (const auto& q : chain) {
    int s = sign_at_infinity(q, positive);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Removes every factor (x - r) from p.
inline DensePoly deflate(DensePoly p, const Rational& r) {
  while (!p.is_zero() && p(r).is_zero()) p = DensePoly::divmod(p, DensePoly::linear_factor(r)).first;
  return p;
}

}  // namespace detail

/// Monic greatest common divisor.
inline DensePoly poly_gcd(DensePoly a, DensePoly b) {
  while (!b.is_zero()) {
    auto r = DensePoly::divmod(a, b).second;
    a = std::move(b);
    b = r.primitive();
  }
  if (a.is_zero()) return a;
  return a * a.leading().inverse();
}

/// p divided by gcd(p, p'): same distinct roots, all simple.
inline DensePoly squarefree_part(const DensePoly& p) {
  if (p.degree() < 1) return p;
  DensePoly g = poly_gcd(p, p.derivative());
  if (g.degree() < 1) return p;
  return DensePoly::divmod(p, g).first;
}

/// Cauchy bound: every real root lies strictly inside (-B, B).
inline Rational root_bound(const DensePoly& p) {
  if (p.degree() < 1) return Rational(1);
  Rational m(0);
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, (p.coeffs()[i] / p.leading()).abs());
  return m + Rational(2);
}

/// Exact number of distinct real roots of p in the open interval (lo, hi).
/// Roots sitting on an endpoint are divided out and reported separately.
inline RootCount sturm_root_count(const DensePoly& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw DegenerateInput("zero polynomial has infinitely many roots");
  if (!(lo < hi)) throw DegenerateInput("sturm_root_count needs lo < hi");
  RootCount out;
  DensePoly q = p;
  if (q(lo).is_zero()) {
    out.root_at_lo = true;
    q = detail::deflate(q, lo);
  }
  if (q(hi).is_zero()) {
    out.root_at_hi = true;
    q = detail::deflate(q, hi);
  }
  if (q.degree() < 1) return out;
  auto chain = detail::sturm_chain(q);
  out.interior = detail::sign_changes_at(chain, lo) - detail::sign_changes_at(chain, hi);
  return out;
}

/// Number of distinct real roots over the whole line.
inline std::size_t real_root_count(const DensePoly& p) {
  if (p.is_zero()) throw DegenerateInput("zero polynomial has infinitely many roots");
  if (p.degree() < 1) return 0;
  auto chain = detail::sturm_chain(p);
  return detail::sign_changes_at_infinity(chain, false) - detail::sign_changes_at_infinity(chain, true);
}

/// Isolates every distinct real root of p into disjoint sorted intervals.
/// Each interval is either an exact rational point or an open interval
/// containing exactly one root; hi is never a root, lo may be a neighbouring
/// exact root.
inline std::vector<RootInterval> isolate_real_roots(const DensePoly& p) {
  if (p.is_zero()) throw DegenerateInput("zero polynomial has infinitely many roots");
  std::vector<RootInterval> out;
  if (p.degree() < 1) return out;
  const DensePoly sf = squarefree_part(p);
  auto chain = detail::sturm_chain(sf);
  auto count = [&](const Rational& a, const Rational& b) {
    return detail::sign_changes_at(chain, a) - detail::sign_changes_at(chain, b);
  };
  Rational bound = root_bound(p);
  // Stack of half-open (a, b] intervals; endpoints where p vanishes are
  // emitted as exact roots.
  std::vector<std::pair<Rational, Rational>> work{{-bound, bound}};
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    std::size_t c = count(a, b);
    if (c == 0) continue;
    if (c == 1 && !sf(b).is_zero()) {
      out.push_back({a, b});
      continue;
    }
    if (c == 1 && sf(b).is_zero()) {
      out.push_back({b, b});
      continue;
    }
    Rational mid = (a + b) / Rational(2);
    work.push_back({a, mid});
    work.push_back({mid, b});
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& x, const RootInterval& y) {
    return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi;
  });
  return out;
}

/// Shrinks an isolating interval of p (bisection) until its width is at most
/// `width`, keeping exactly one root inside.
inline RootInterval refine_root(const DensePoly& poly, RootInterval iv, const Rational& width) {
  const DensePoly p = squarefree_part(poly);
  // The lower endpoint may itself be a (different) root, so orient by the
  // sign at hi when it is nonzero.
  while (iv.hi - iv.lo > width) {
    Rational mid = (iv.lo + iv.hi) / Rational(2);
    int v = p(mid).sign();
    if (v == 0) return {mid, mid};
    int s_hi = p(iv.hi).sign();
    bool root_below = s_hi != 0 ? v == s_hi : v != p(iv.lo).sign();
    if (root_below) iv.hi = mid;
    else iv.lo = mid;
  }
  return iv;
}

}  // namespace dlp
