#pragma once

// Orthogonal-polynomial families used by every bound in the library:
// Jacobi (with the Gegenbauer, Legendre and Chebyshev specializations) and
// Krawtchouk. Everything here is exact.

#include <cmath>
#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <variant>

#include "dlp/errors.hpp"
#include "dlp/poly.hpp"
#include "dlp/rational.hpp"

namespace dlp::orthopoly {

struct Jacobi {
  Rational alpha;
  Rational beta;
};

struct Krawtchouk {
  unsigned n;
};

/// A fixed orthogonal-polynomial family with an append-only cache of its
/// members. Copies share the cache; population is guarded by a mutex.
class OrthoFamily {
 public:
  static OrthoFamily jacobi(const Rational& alpha, const Rational& beta) {
    if (!(alpha > Rational(-1)) || !(beta > Rational(-1)))
      throw InvalidArgument("Jacobi parameters must exceed -1");
    return OrthoFamily(Jacobi{alpha, beta});
  }
  static OrthoFamily legendre() { return jacobi(0, 0); }
  static OrthoFamily chebyshev() { return jacobi(Rational(-1, 2), Rational(-1, 2)); }

  /// Zonal family of the sphere S^{dim-1}: Jacobi((dim-3)/2, (dim-3)/2) for
  /// dim >= 3, Chebyshev for the circle.
  static OrthoFamily gegenbauer(int dim) {
    if (dim < 2) throw InvalidArgument("sphere dimension must be >= 2");
    if (dim == 2) return chebyshev();
    Rational a(dim - 3, 2);
    return jacobi(a, a);
  }

  static OrthoFamily krawtchouk(unsigned n) {
    if (n == 0) throw InvalidArgument("Krawtchouk family needs n >= 1");
    return OrthoFamily(Krawtchouk{n});
  }

  bool is_jacobi() const { return std::holds_alternative<Jacobi>(kind_); }
  bool is_krawtchouk() const { return std::holds_alternative<Krawtchouk>(kind_); }
  const Jacobi& jacobi_params() const { return std::get<Jacobi>(kind_); }
  unsigned krawtchouk_n() const { return std::get<Krawtchouk>(kind_).n; }

  /// True for Jacobi(a, a), the symmetric families.
  bool is_symmetric_jacobi() const {
    return is_jacobi() && jacobi_params().alpha == jacobi_params().beta;
  }

  /// Point at which members are normalized to 1: t = 1 for Jacobi, d = 0 for
  /// Krawtchouk.
  Rational normalization_point() const { return is_jacobi() ? Rational(1) : Rational(0); }

  std::string name() const {
    if (is_krawtchouk()) return "Krawtchouk(" + std::to_string(krawtchouk_n()) + ")";
    return "Jacobi(" + jacobi_params().alpha.str() + "," + jacobi_params().beta.str() + ")";
  }

  /// Exact degree-k member.
  const DensePoly& poly(unsigned k) const {
    if (is_krawtchouk() && k > krawtchouk_n())
      throw DegreeOutOfRange("Krawtchouk degree " + std::to_string(k) + " exceeds n = " +
                             std::to_string(krawtchouk_n()));
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto& polys = cache_->polys;
    while (polys.size() <= k) polys.push_back(build(static_cast<unsigned>(polys.size()), polys));
    return polys[k];
  }

  /// Exact value of the degree-k member at t. Jacobi members are evaluated
  /// by running the three-term recurrence on values, which avoids building
  /// the full polynomial.
  Rational value(unsigned k, const Rational& t) const {
    if (is_krawtchouk()) return poly(k)(t);
    const auto& [a, b] = jacobi_params();
    Rational prev(1);
    if (k == 0) return prev;
    Rational cur = (a + Rational(1)) + (a + b + Rational(2)) * (t - Rational(1)) / Rational(2);
    for (unsigned m = 2; m <= k; ++m) {
      auto [lin, cst, back, div] = jacobi_recurrence(m);
      Rational next = ((lin * t + cst) * cur - back * prev) / div;
      prev = std::move(cur);
      cur = std::move(next);
    }
    return cur;
  }

  /// Three-term recurrence coefficients for m >= 2:
  ///   div * p_m = (lin * x + cst) * p_{m-1} - back * p_{m-2}.
  struct Recurrence {
    Rational lin, cst, back, div;
  };
  Recurrence jacobi_recurrence(unsigned m) const {
    const auto& [a, b] = jacobi_params();
    Rational mm(static_cast<long>(m));
    Rational s = a + b;
    Rational two_m_s = Rational(2) * mm + s;
    Rational div = Rational(2) * mm * (mm + s) * (two_m_s - Rational(2));
    Rational lin = (two_m_s - Rational(1)) * two_m_s * (two_m_s - Rational(2));
    Rational cst = (two_m_s - Rational(1)) * (a * a - b * b);
    Rational back = Rational(2) * (mm + a - Rational(1)) * (mm + b - Rational(1)) * two_m_s;
    return {lin, cst, back, div};
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::deque<DensePoly> polys;
  };

  explicit OrthoFamily(std::variant<Jacobi, Krawtchouk> kind)
      : kind_(std::move(kind)), cache_(std::make_shared<Cache>()) {}

  DensePoly build(unsigned k, const std::deque<DensePoly>& prev) const {
    if (is_krawtchouk()) return build_krawtchouk(krawtchouk_n(), k);
    const auto& [a, b] = jacobi_params();
    if (k == 0) return DensePoly::constant(1);
    if (k == 1) {
      // (a + 1) + (a + b + 2)(x - 1)/2
      Rational slope = (a + b + Rational(2)) / Rational(2);
      return DensePoly({(a + Rational(1)) - slope, slope});
    }
    auto [lin, cst, back, div] = jacobi_recurrence(k);
    DensePoly next = DensePoly({cst, lin}) * prev[k - 1] - prev[k - 2] * back;
    return next * div.inverse();
  }

  /// K_j(d) = sum_i (-1)^i C(d, i) C(n - d, j - i), expanded in d.
  static DensePoly build_krawtchouk(unsigned n, unsigned j) {
    // falling(p, i) = p (p - 1) ... (p - i + 1) / i!
    auto binom_poly = [](const DensePoly& p, unsigned i) {
      DensePoly r = DensePoly::constant(1);
      for (unsigned s = 0; s < i; ++s) r = r * (p - DensePoly::constant(Rational(static_cast<long>(s))));
      return r * Rational(factorial(i)).inverse();
    };
    DensePoly d = DensePoly::x();
    DensePoly n_minus_d = DensePoly::constant(Rational(static_cast<long>(n))) - d;
    DensePoly sum;
    for (unsigned i = 0; i <= j; ++i) {
      DensePoly term = binom_poly(d, i) * binom_poly(n_minus_d, j - i);
      if (i % 2 == 1) sum -= term;
      else sum += term;
    }
    return sum;
  }

  std::variant<Jacobi, Krawtchouk> kind_;
  std::shared_ptr<Cache> cache_;
};

/// Degree-k member of the family.
inline DensePoly family_poly(const OrthoFamily& family, unsigned k) { return family.poly(k); }

/// Value of the degree-k member at the normalization point (t = 1 for
/// Jacobi, d = 0 for Krawtchouk).
inline Rational value_at_one(const OrthoFamily& family, unsigned k) {
  return family.value(k, family.normalization_point());
}

/// Closed form C(k + alpha, k) = prod_{i=1..k} (alpha + i) / i for the value
/// of P_k^{(alpha, beta)} at 1.
inline Rational jacobi_value_at_one_closed_form(const Rational& alpha, unsigned k) {
  Rational r(1);
  for (unsigned i = 1; i <= k; ++i) {
    Rational ii(static_cast<long>(i));
    r *= (alpha + ii) / ii;
  }
  return r;
}

/// p_k(t) / p_k(normalization point); equals 1 at t = 1 (Jacobi) or d = 0
/// (Krawtchouk).
inline Rational eval_normalized(const OrthoFamily& family, unsigned k, const Rational& t) {
  Rational at_one = value_at_one(family, k);
  if (at_one.is_zero())
    throw NormalizationError(family.name() + " degree " + std::to_string(k) +
                             " vanishes at its normalization point");
  return family.value(k, t) / at_one;
}

/// The 1-normalized member as a polynomial.
inline DensePoly normalized_poly(const OrthoFamily& family, unsigned k) {
  Rational at_one = value_at_one(family, k);
  if (at_one.is_zero()) throw NormalizationError(family.name() + " vanishes at its normalization point");
  return family.poly(k) * at_one.inverse();
}

/// h_i / h_0, where h_i is the squared norm of p_i under the family's
/// orthogonality measure.
inline Rational norm_ratio(const OrthoFamily& family, unsigned i) {
  if (family.is_krawtchouk()) {
    unsigned n = family.krawtchouk_n();
    if (i > n) throw DegreeOutOfRange("Krawtchouk degree exceeds n");
    return Rational(binomial(n, i));
  }
  const auto& [a, b] = family.jacobi_params();
  Rational s = a + b;
  if (i == 0) return Rational(1);
  Rational r = (a + Rational(1)) * (b + Rational(1)) / (s + Rational(3));
  for (unsigned m = 2; m <= i; ++m) {
    Rational mm(static_cast<long>(m));
    Rational two_m_s = Rational(2) * mm + s;
    r *= (two_m_s - Rational(1)) / (two_m_s + Rational(1)) * (mm + a) * (mm + b) / (mm * (mm + s));
  }
  return r;
}

/// Kernel sum  sum_{i=0..m} p_i(x) p_i(y) / (h_i / h_0), evaluated term by term.
inline Rational christoffel_darboux_direct(const OrthoFamily& family, unsigned m, const Rational& x,
                                           const Rational& y) {
  Rational sum(0);
  for (unsigned i = 0; i <= m; ++i) sum += family.value(i, x) * family.value(i, y) / norm_ratio(family, i);
  return sum;
}

/// The same kernel through the Christoffel-Darboux quotient
///   (k_m / k_{m+1}) / (h_m / h_0) * (p_{m+1}(x) p_m(y) - p_m(x) p_{m+1}(y)) / (x - y)
/// with k_i the leading coefficient of p_i.
inline Rational christoffel_darboux(const OrthoFamily& family, unsigned m, const Rational& x,
                                    const Rational& y) {
  if (x == y) throw DegenerateInput("Christoffel-Darboux quotient needs x != y");
  const DensePoly& pm = family.poly(m);
  const DensePoly& pm1 = family.poly(m + 1);
  Rational ratio = pm.leading() / pm1.leading();
  Rational num = pm1(x) * pm(y) - pm(x) * pm1(y);
  return ratio / norm_ratio(family, m) * num / (x - y);
}

/// True iff the degree-k member has k simple real roots and each of the
/// k + 1 gaps they cut the line into holds exactly one root of the
/// degree-(k+1) member.
inline bool interlacing_check(const OrthoFamily& family, unsigned k) {
  if (k < 1) throw InvalidArgument("interlacing_check needs k >= 1");
  const DensePoly& p = family.poly(k);
  const DensePoly& q = family.poly(k + 1);
  auto roots = isolate_real_roots(p);
  if (roots.size() != static_cast<std::size_t>(k)) return false;

  // Shrink each isolating interval of p until q has no root in its closure.
  for (auto& iv : roots) {
    if (iv.lo == iv.hi) {
      if (q(iv.lo).is_zero()) return false;
      continue;
    }
    for (int iter = 0;; ++iter) {
      auto c = sturm_root_count(q, iv.lo, iv.hi);
      if (c.interior == 0 && !c.root_at_lo && !c.root_at_hi) break;
      if (iter > 256) return false;
      Rational width = (iv.hi - iv.lo) / Rational(2);
      iv = refine_root(p, iv, width);
      if (iv.lo == iv.hi && q(iv.lo).is_zero()) return false;
      if (iv.lo == iv.hi) break;
    }
  }

  Rational bound = std::max(root_bound(p), root_bound(q));
  auto count_in = [&](const Rational& lo, const Rational& hi) -> std::size_t {
    if (!(lo < hi)) return 0;
    auto c = sturm_root_count(q, lo, hi);
    return c.interior + (c.root_at_lo ? 1 : 0) + (c.root_at_hi ? 1 : 0);
  };
  // Gap endpoints: exact roots are excluded from both neighbouring gaps
  // (q does not vanish there), open isolating intervals are skipped.
  Rational left = -bound;
  for (const auto& iv : roots) {
    Rational right = iv.lo;
    if (count_in(left, right) != 1) return false;
    left = iv.hi;
  }
  return count_in(left, bound) == 1;
}

/// Heuristic envelope for |eval_normalized(gegenbauer(dim), k, t)| built
/// from the leading Darboux term with safety factor 2:
///   2 * w(theta) / (sqrt(k) * P_k(1)),
///   w(theta) = sin(theta/2)^{-a-1/2} cos(theta/2)^{-a-1/2} / sqrt(pi),
/// where a = (dim - 3)/2 and t = cos(theta). The remainder term has no known
/// explicit constant, so this value is never used to certify a bound.
struct Envelope {
  Rational value;
  bool heuristic = true;
};

inline constexpr double kDarbouxSafetyFactor = 2.0;

inline Envelope darboux_envelope(int dim, unsigned k, const Rational& t) {
  if (dim < 3) throw InvalidArgument("darboux_envelope needs dim >= 3");
  if (k < 1) throw InvalidArgument("darboux_envelope needs k >= 1");
  if (!(t.abs() < Rational(1))) throw OutOfDomain("darboux_envelope needs |t| < 1");
  double a = (dim - 3) / 2.0;
  double theta = std::acos(t.to_double());
  double w = std::pow(std::sin(theta / 2.0), -a - 0.5) * std::pow(std::cos(theta / 2.0), -a - 0.5) /
             std::sqrt(std::numbers::pi);
  double at_one = jacobi_value_at_one_closed_form(Rational(dim - 3, 2), k).to_double();
  double v = kDarbouxSafetyFactor * w / (std::sqrt(static_cast<double>(k)) * at_one);
  return {Rational::from_double(v), true};
}

/// Coefficients c_0..c_{i+j} with  P^_i P^_j = sum_k c_k P^_k  for the
/// 1-normalized members of a symmetric Jacobi family.
inline RationalVector product_expand(const OrthoFamily& family, unsigned i, unsigned j) {
  if (!family.is_symmetric_jacobi()) throw InvalidArgument("product_expand needs a Gegenbauer family");
  DensePoly rest = normalized_poly(family, i) * normalized_poly(family, j);
  RationalVector c(i + j + 1);
  for (unsigned k = i + j + 1; k-- > 0;) {
    DensePoly pk = normalized_poly(family, k);
    c[k] = rest.coeff(k) / pk.leading();
    if (!c[k].is_zero()) rest -= pk * c[k];
  }
  if (!rest.is_zero()) throw InternalError("product_expand left a nonzero remainder");
  return c;
}

}  // namespace dlp::orthopoly
