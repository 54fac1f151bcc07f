#pragma once

// Positive definite functions on the Hamming cube {-1,1}^n. A function of
// the inner product u = 1 - 2d/n is positive definite iff its expansion in
// Krawtchouk polynomials K_j(d) has nonnegative coefficients.

#include <cstddef>
#include <string>
#include <vector>

#include "dlp/errors.hpp"
#include "dlp/matrix.hpp"
#include "dlp/rational.hpp"

namespace dlp::hamming {

/// Values f(1 - 2d/n) for d = 0..n.
struct CubeFunction {
  unsigned n = 0;
  RationalVector values;

  CubeFunction() = default;
  CubeFunction(unsigned dim, RationalVector vals) : n(dim), values(std::move(vals)) {
    if (values.size() != n + 1)
      throw ShapeError("cube function on n = " + std::to_string(n) + " needs " + std::to_string(n + 1) +
                       " values, got " + std::to_string(values.size()));
  }

  /// Samples a polynomial-like callable of the inner product u.
  template <typename F>
  static CubeFunction from_inner_product(unsigned dim, F&& f) {
    RationalVector v;
    for (unsigned d = 0; d <= dim; ++d)
      v.push_back(f(Rational(1) - Rational(static_cast<long>(2 * d), static_cast<long>(dim))));
    return CubeFunction(dim, std::move(v));
  }
};

struct KrawtchoukExpansion {
  unsigned n = 0;
  RationalVector coeffs;  ///< a_0..a_n
};

/// K_j(d) = sum_k (-1)^k C(d, k) C(n - d, j - k).
inline Rational krawtchouk_value(unsigned n, unsigned j, unsigned d) {
  if (j > n || d > n) throw DegreeOutOfRange("Krawtchouk index out of range (n=" + std::to_string(n) + ", j=" +
                                             std::to_string(j) + ", d=" + std::to_string(d) + ")");
  mpz_class s = 0;
  for (unsigned k = 0; k <= j; ++k) {
    if (k > d || j - k > n - d) continue;
    mpz_class term = binomial(d, k) * binomial(n - d, j - k);
    if (k % 2 == 1) s -= term;
    else s += term;
  }
  return Rational(s);
}

/// sum_j a_j K_j(d) for each d.
inline CubeFunction reconstruct(const KrawtchoukExpansion& e) {
  RationalVector v(e.n + 1);
  for (unsigned d = 0; d <= e.n; ++d)
    for (unsigned j = 0; j <= e.n; ++j)
      if (!e.coeffs[j].is_zero()) v[d] += e.coeffs[j] * krawtchouk_value(e.n, j, d);
  return CubeFunction(e.n, std::move(v));
}

/// Solves [K_j(d)] a = f exactly; the matrix is invertible because the K_j
/// have distinct degrees.
inline KrawtchoukExpansion expand(const CubeFunction& f) {
  const unsigned n = f.n;
  std::vector<RationalVector> a(n + 1, RationalVector(n + 1));
  for (unsigned d = 0; d <= n; ++d)
    for (unsigned j = 0; j <= n; ++j) a[d][j] = krawtchouk_value(n, j, d);
  auto sol = solve_linear(a, f.values);
  if (!sol) throw InternalError("Krawtchouk system is singular");
  KrawtchoukExpansion e{n, std::move(*sol)};
  if (reconstruct(e).values != f.values) throw InternalError("Krawtchouk expansion does not reconstruct f");
  return e;
}

struct PdResult {
  bool positive_definite = false;
  KrawtchoukExpansion expansion;
};

inline PdResult is_pd_on_cube(const CubeFunction& f) {
  PdResult r{true, expand(f)};
  for (const auto& a : r.expansion.coeffs)
    if (a.sign() < 0) r.positive_definite = false;
  return r;
}

/// Pointwise product of two cube functions.
inline CubeFunction pointwise_product(const CubeFunction& f, const CubeFunction& g) {
  if (f.n != g.n) throw ShapeError("cube dimensions differ");
  RationalVector v(f.n + 1);
  for (unsigned d = 0; d <= f.n; ++d) v[d] = f.values[d] * g.values[d];
  return CubeFunction(f.n, std::move(v));
}

struct LimitSample {
  unsigned n = 0;
  unsigned d = 0;      ///< nearest integer to n(1-u)/2, ties to even
  Rational scaled;     ///< j!/n^j K_j(d)
  Rational error;      ///< |scaled - u^j|
};

/// One term of the sequence j!/n^j K_j(d_n) -> u^j.
inline LimitSample limit_probe(unsigned j, const Rational& u, unsigned n) {
  if (u < Rational(-1) || u > Rational(1)) throw OutOfDomain("u must lie in [-1, 1]");
  if (n == 0) throw InvalidArgument("n must be >= 1");
  if (j > n) throw DegreeOutOfRange("j exceeds n");
  Rational target = Rational(static_cast<long>(n)) * (Rational(1) - u) / Rational(2);
  mpz_class dn = target.round_half_even();
  LimitSample s;
  s.n = n;
  s.d = static_cast<unsigned>(dn.get_ui());
  mpz_class njp;
  mpz_ui_pow_ui(njp.get_mpz_t(), n, j);
  s.scaled = Rational(factorial(j), njp) * krawtchouk_value(n, j, s.d);
  s.error = (s.scaled - pow(u, j)).abs();
  return s;
}

}  // namespace dlp::hamming
