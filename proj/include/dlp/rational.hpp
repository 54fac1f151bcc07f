#pragma once

// Exact rational scalar backed by GMP. Values are always kept in lowest
// terms with a positive denominator; division by zero throws.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dlp/errors.hpp"

namespace dlp {

class Rational {
 public:
  Rational() = default;
  Rational(int v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : v_(v) {}  // NOLINT
  Rational(long long v) : v_(static_cast<long>(v)) {}  // NOLINT
  Rational(unsigned long v) : v_(v) {}  // NOLINT
  Rational(const mpz_class& z) : v_(z) {}  // NOLINT
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DivisionByZero("zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

  /// Parses "p", "p/q", or a finite decimal such as "-0.125".
  static Rational parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (c != ' ' && c != '\t' && c != '+') s.push_back(c);
    if (s.empty()) throw ParseError("empty rational");
    auto valid_int = [](std::string_view t) {
      std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
      if (i == t.size()) return false;
      for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
      return true;
    };
    if (auto slash = s.find('/'); slash != std::string::npos) {
      std::string num = s.substr(0, slash), den = s.substr(slash + 1);
      if (!valid_int(num) || !valid_int(den)) throw ParseError("bad rational '" + s + "'");
      mpz_class d(den, 10);
      if (d == 0) throw DivisionByZero("zero denominator in '" + s + "'");
      return Rational(mpz_class(num, 10), d);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      bool neg = s[0] == '-';
      std::string ip = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
      std::string fp = s.substr(dot + 1);
      if (ip.empty()) ip = "0";
      if (!valid_int(ip) || (!fp.empty() && !valid_int(fp)) || (!fp.empty() && fp[0] == '-'))
        throw ParseError("bad decimal '" + s + "'");
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
      mpz_class num(ip + fp, 10);
      if (neg) num = -num;
      return Rational(num, scale);
    }
    if (!valid_int(s)) throw ParseError("bad rational '" + s + "'");
    return Rational(mpz_class(s, 10));
  }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  double to_double() const { return v_.get_d(); }

  /// Canonical "p/q" text; integers render as "p".
  std::string str() const { return v_.get_str(); }

  Rational abs() const { return Rational(::abs(v_)); }
  Rational inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    return Rational(1 / v_);
  }
  mpz_class floor() const {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return r;
  }
  mpz_class ceil() const {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return r;
  }
  /// Nearest integer, ties to even.
  mpz_class round_half_even() const {
    mpz_class fl = floor();
    Rational frac = *this - Rational(fl);
    int c = cmp(frac.v_, mpq_class(1, 2));
    if (c < 0) return fl;
    if (c > 0) return fl + 1;
    return (fl % 2 == 0) ? fl : mpz_class(fl + 1);
  }

  /// Exact conversion of a double (every finite double is a dyadic rational).
  static Rational from_double(double d) {
    mpq_class q(d);
    return Rational(q);
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

using RationalVector = std::vector<Rational>;

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational r(1), b(base);
  while (exponent) {
    if (exponent & 1u) r *= b;
    b *= b;
    exponent >>= 1u;
  }
  return r;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline mpz_class factorial(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// Parses a comma-separated list of rationals ("-1,-1/2,1/2").
inline RationalVector parse_rational_list(std::string_view text) {
  RationalVector out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    bool blank = item.find_first_not_of(" \t") == std::string_view::npos;
    if (!blank) out.push_back(Rational::parse(item));
    else if (end != text.size() || !out.empty()) throw ParseError("empty list item");
    start = end + 1;
  }
  return out;
}

}  // namespace dlp

template <>
struct std::hash<dlp::Rational> {
  std::size_t operator()(const dlp::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
