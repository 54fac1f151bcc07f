#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "dlp/orthopoly.hpp"

using dlp::DensePoly;
using dlp::Rational;
using dlp::RationalVector;
using dlp::orthopoly::OrthoFamily;
namespace op = dlp::orthopoly;

namespace {

Rational q(const char* s) { return Rational::parse(s); }
Rational r(long v) { return Rational(v); }

// Legendre by the explicit sum 2^-k sum_j C(k,j)^2 (x-1)^(k-j) (x+1)^j.
DensePoly legendre_explicit(unsigned k) {
  DensePoly xm1 = DensePoly::linear_factor(r(1)), xp1 = DensePoly::linear_factor(r(-1));
  DensePoly sum;
  for (unsigned j = 0; j <= k; ++j) {
    DensePoly term = DensePoly::constant(Rational(mpz_class(dlp::binomial(k, j) * dlp::binomial(k, j))));
    for (unsigned i = 0; i < k - j; ++i) term = term * xm1;
    for (unsigned i = 0; i < j; ++i) term = term * xp1;
    sum += term;
  }
  return sum * Rational(mpz_class(1), mpz_class(1) << k);
}

// Gegenbauer C_k^lambda values via k C_k = 2t(k+lambda-1) C_{k-1} - (k+2lambda-2) C_{k-2},
// normalized by C_k(1) = prod_{i<k} (2lambda + i)/(i + 1).
RationalVector gegenbauer_normalized_values(const Rational& lambda, const Rational& t, unsigned kmax) {
  RationalVector c{r(1), Rational(2) * lambda * t}, at_one{r(1), Rational(2) * lambda};
  for (unsigned k = 2; k <= kmax; ++k) {
    Rational kk(static_cast<long>(k));
    c.push_back((Rational(2) * t * (kk + lambda - r(1)) * c[k - 1] - (kk + Rational(2) * lambda - r(2)) * c[k - 2]) / kk);
    at_one.push_back(at_one[k - 1] * (Rational(2) * lambda + kk - r(1)) / kk);
  }
  RationalVector out;
  for (unsigned k = 0; k <= kmax; ++k) out.push_back(c[k] / at_one[k]);
  return out;
}

// Chebyshev T_k by T_{k+1} = 2x T_k - T_{k-1}.
DensePoly chebyshev_t(unsigned k) {
  DensePoly a = DensePoly::constant(1), b = DensePoly::x();
  if (k == 0) return a;
  for (unsigned i = 1; i < k; ++i) {
    DensePoly c = DensePoly::x() * r(2) * b - a;
    a = b;
    b = c;
  }
  return b;
}

}  // namespace

TEST(FamilyPoly, LegendreLowDegrees) {
  auto leg = OrthoFamily::legendre();
  EXPECT_EQ(op::family_poly(leg, 0), DensePoly::constant(1));
  EXPECT_EQ(op::family_poly(leg, 2), DensePoly({q("-1/2"), r(0), q("3/2")}));
}

TEST(FamilyPoly, LegendreMatchesExplicitSum) {
  auto leg = OrthoFamily::legendre();
  for (unsigned k = 0; k <= 30; ++k) EXPECT_EQ(op::family_poly(leg, k), legendre_explicit(k)) << "k=" << k;
}

TEST(FamilyPoly, CircleFamilyIsChebyshevT) {
  auto fam = OrthoFamily::gegenbauer(2);
  for (unsigned k = 0; k <= 20; ++k) EXPECT_EQ(op::normalized_poly(fam, k), chebyshev_t(k)) << "k=" << k;
}

TEST(FamilyPoly, GegenbauerMatchesIndependentRecurrence) {
  for (int n : {3, 4, 5, 7, 10}) {
    auto fam = OrthoFamily::gegenbauer(n);
    Rational lambda(n - 2, 2);
    for (const char* ts : {"-9/10", "-1/3", "0", "1/7", "1/2", "4/5"}) {
      auto expected = gegenbauer_normalized_values(lambda, q(ts), 30);
      for (unsigned k = 0; k <= 30; ++k)
        EXPECT_EQ(op::eval_normalized(fam, k, q(ts)), expected[k]) << "n=" << n << " k=" << k << " t=" << ts;
    }
  }
}

TEST(FamilyPoly, KrawtchoukDegreeOneAndRange) {
  auto fam = OrthoFamily::krawtchouk(7);
  for (long d = 0; d <= 7; ++d) EXPECT_EQ(op::family_poly(fam, 1)(r(d)), r(7 - 2 * d));
  EXPECT_THROW(op::family_poly(fam, 8), dlp::DegreeOutOfRange);
}

TEST(FamilyPoly, KrawtchoukMatchesBinomialSum) {
  for (unsigned n : {4u, 9u}) {
    auto fam = OrthoFamily::krawtchouk(n);
    for (unsigned j = 0; j <= n; ++j)
      for (unsigned d = 0; d <= n; ++d) {
        mpz_class s = 0;
        for (unsigned k = 0; k <= j; ++k) {
          if (k > d || j - k > n - d) continue;
          mpz_class t = dlp::binomial(d, k) * dlp::binomial(n - d, j - k);
          s += (k % 2) ? mpz_class(-t) : t;
        }
        EXPECT_EQ(op::family_poly(fam, j)(Rational(static_cast<long>(d))), Rational(s));
      }
  }
}

TEST(FamilyPoly, RejectsBadParameters) {
  EXPECT_THROW(OrthoFamily::jacobi(r(-1), r(0)), dlp::InvalidArgument);
  EXPECT_THROW(OrthoFamily::gegenbauer(1), dlp::InvalidArgument);
}

TEST(Normalized, ValuesAtSpecialPoints) {
  auto leg = OrthoFamily::gegenbauer(3);
  EXPECT_EQ(op::eval_normalized(leg, 2, r(0)), q("-1/2"));
  for (int n : {2, 3, 4, 6, 10})
    for (unsigned k = 0; k <= 20; ++k) {
      auto fam = OrthoFamily::gegenbauer(n);
      EXPECT_EQ(op::eval_normalized(fam, k, r(1)), r(1));
      EXPECT_EQ(op::eval_normalized(fam, k, r(-1)), k % 2 ? r(-1) : r(1));
    }
}

TEST(Normalized, NormalizationPointNeverVanishes) {
  // C(k + a, k) > 0 for a > -1, and Krawtchouk members equal C(n, k) at d = 0.
  auto jac = OrthoFamily::jacobi(q("-9/10"), q("3"));
  for (unsigned k = 0; k <= 15; ++k) EXPECT_GT(op::value_at_one(jac, k), r(0));
  auto kr = OrthoFamily::krawtchouk(6);
  for (unsigned k = 0; k <= 6; ++k) EXPECT_EQ(op::eval_normalized(kr, k, r(0)), r(1));
}

TEST(ValueAtOne, ClosedFormForIntegerParameters) {
  for (long a = 0; a <= 4; ++a)
    for (long b = 0; b <= 3; ++b) {
      auto fam = OrthoFamily::jacobi(r(a), r(b));
      for (unsigned k = 0; k <= 30; ++k)
        EXPECT_EQ(op::value_at_one(fam, k), Rational(dlp::binomial(k + a, k))) << a << "," << b << "," << k;
    }
  EXPECT_EQ(op::value_at_one(OrthoFamily::jacobi(r(1), r(1)), 3), r(4));
  EXPECT_EQ(op::value_at_one(OrthoFamily::krawtchouk(4), 2), r(6));
  EXPECT_EQ(op::value_at_one(OrthoFamily::legendre(), 17), r(1));
}

TEST(Parity, SymmetricJacobiMembers) {
  for (const char* a : {"0", "1/2", "-1/2", "7/2", "3"}) {
    auto fam = OrthoFamily::jacobi(q(a), q(a));
    for (unsigned k = 0; k <= 30; ++k) {
      const auto& p = fam.poly(k);
      for (std::size_t i = 0; i < p.coeffs().size(); ++i)
        if ((k + i) % 2 == 1) {
          EXPECT_TRUE(p.coeff(i).is_zero()) << "a=" << a << " k=" << k;
        }
      EXPECT_EQ(p(q("-2/7")), (k % 2 ? r(-1) : r(1)) * p(q("2/7")));
    }
  }
}

TEST(Orthogonality, LegendreExactIntegrals) {
  auto leg = OrthoFamily::legendre();
  for (unsigned i = 0; i <= 10; ++i)
    for (unsigned j = 0; j <= 10; ++j) {
      Rational v = (leg.poly(i) * leg.poly(j)).integrate(r(-1), r(1));
      if (i != j) {
        EXPECT_TRUE(v.is_zero()) << i << "," << j;
      } else {
        EXPECT_EQ(v, Rational(2) / Rational(static_cast<long>(2 * i + 1)));
      }
    }
}

TEST(Orthogonality, IntegerParameterJacobiWeights) {
  // Weight (1 - x)^a (1 + x)^b is a polynomial for integer a, b.
  for (long a = 0; a <= 2; ++a)
    for (long b = 0; b <= 2; ++b) {
      DensePoly w = DensePoly::constant(1);
      for (long i = 0; i < a; ++i) w = w * DensePoly({r(1), r(-1)});
      for (long i = 0; i < b; ++i) w = w * DensePoly({r(1), r(1)});
      auto fam = OrthoFamily::jacobi(r(a), r(b));
      for (unsigned i = 0; i <= 8; ++i)
        for (unsigned j = 0; j < i; ++j)
          EXPECT_TRUE((fam.poly(i) * fam.poly(j) * w).integrate(r(-1), r(1)).is_zero());
      // Norm ratios h_i / h_0 agree with the exact integrals.
      Rational h0 = w.integrate(r(-1), r(1));
      for (unsigned i = 0; i <= 8; ++i)
        EXPECT_EQ((fam.poly(i) * fam.poly(i) * w).integrate(r(-1), r(1)) / h0, op::norm_ratio(fam, i));
    }
}

TEST(Roots, LegendreP3HasThreeRootsInside) {
  auto leg = OrthoFamily::legendre();
  EXPECT_EQ(dlp::sturm_root_count(leg.poly(3), r(-1), r(1)).interior, 3u);
  EXPECT_EQ(dlp::sturm_root_count(DensePoly({q("-1/4"), r(0), r(1)}), r(-1), r(0)).interior, 1u);
  EXPECT_EQ(dlp::sturm_root_count(DensePoly::constant(1), r(-1), r(1)).interior, 0u);
}

TEST(Interlacing, HoldsForAllFamilies) {
  std::vector<OrthoFamily> fams{OrthoFamily::legendre(), OrthoFamily::chebyshev(), OrthoFamily::gegenbauer(5),
                                OrthoFamily::gegenbauer(10), OrthoFamily::jacobi(q("1/2"), q("3"))};
  for (const auto& fam : fams)
    for (unsigned k = 1; k <= 20; ++k) {
      EXPECT_TRUE(op::interlacing_check(fam, k)) << fam.name() << " k=" << k;
      EXPECT_EQ(dlp::sturm_root_count(fam.poly(k), r(-1), r(1)).interior, k);
    }
  auto kr = OrthoFamily::krawtchouk(8);
  for (unsigned k = 1; k < 8; ++k) EXPECT_TRUE(op::interlacing_check(kr, k)) << "Krawtchouk k=" << k;
}

TEST(Density, LegendreZerosEnterEveryWindow) {
  auto leg = OrthoFamily::legendre();
  const Rational c = q("2/5"), d = q("1/2");
  std::optional<unsigned> n0;
  for (unsigned n = 1; n <= 60; ++n) {
    const auto& p = leg.poly(n);
    auto cnt = dlp::sturm_root_count(p, c, d);
    bool hit = cnt.interior > 0 || cnt.root_at_lo || cnt.root_at_hi;
    if (hit && !n0) n0 = n;
    if (!hit) n0.reset();
  }
  ASSERT_TRUE(n0.has_value());
  EXPECT_LE(*n0, 40u);
}

TEST(ChristoffelDarboux, SmallLegendreCases) {
  auto leg = OrthoFamily::legendre();
  EXPECT_EQ(op::christoffel_darboux(leg, 0, r(1), r(0)), r(1));
  // Orthonormal kernel with respect to dx/2: 1 + 3*1*0 + 5*1*(-1/2).
  EXPECT_EQ(op::christoffel_darboux(leg, 2, r(1), r(0)), q("-3/2"));
  EXPECT_EQ(op::christoffel_darboux_direct(leg, 2, r(1), r(0)), q("-3/2"));
  EXPECT_THROW(op::christoffel_darboux(leg, 2, q("1/3"), q("1/3")), dlp::DegenerateInput);
}

TEST(ChristoffelDarboux, QuotientEqualsDirectSum) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<long> num(-30, 30), den(1, 17);
  std::vector<OrthoFamily> fams{OrthoFamily::legendre(), OrthoFamily::jacobi(r(1), r(1)), OrthoFamily::gegenbauer(6),
                                OrthoFamily::jacobi(q("1/2"), q("-1/3")), OrthoFamily::krawtchouk(12)};
  for (const auto& fam : fams)
    for (int trial = 0; trial < 100; ++trial) {
      Rational x(num(rng), den(rng)), y(num(rng), den(rng));
      if (x == y) continue;
      unsigned m = trial % 11;
      EXPECT_EQ(op::christoffel_darboux(fam, m, x, y), op::christoffel_darboux_direct(fam, m, x, y))
          << fam.name() << " m=" << m;
    }
}

TEST(ProductExpand, KnownCases) {
  auto g3 = OrthoFamily::gegenbauer(3);
  auto c = op::product_expand(g3, 1, 1);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], q("1/3"));
  EXPECT_EQ(c[1], r(0));
  EXPECT_EQ(c[2], q("2/3"));
  auto e = op::product_expand(g3, 0, 4);
  for (unsigned k = 0; k < e.size(); ++k) EXPECT_EQ(e[k], k == 4 ? r(1) : r(0));
}

TEST(ProductExpand, ConvexCombinationProperty) {
  for (int n : {3, 4, 5, 10}) {
    auto fam = OrthoFamily::gegenbauer(n);
    for (unsigned i = 0; i <= 10; ++i)
      for (unsigned j = 0; i + j <= 10; ++j) {
        auto c = op::product_expand(fam, i, j);
        EXPECT_LE(c.size(), i + j + 1);
        Rational sum(0);
        for (const auto& v : c) {
          EXPECT_GE(v.sign(), 0) << "n=" << n << " i=" << i << " j=" << j;
          sum += v;
        }
        EXPECT_EQ(sum, r(1));
        // Reconstruct P^_i P^_j from the coefficients.
        DensePoly rebuilt;
        for (unsigned k = 0; k < c.size(); ++k) rebuilt += op::normalized_poly(fam, k) * c[k];
        EXPECT_EQ(rebuilt, op::normalized_poly(fam, i) * op::normalized_poly(fam, j));
      }
  }
}

TEST(DarbouxEnvelope, SpecExamples) {
  auto g4 = OrthoFamily::gegenbauer(4);
  auto e = op::darboux_envelope(4, 50, r(0));
  EXPECT_GE(e.value, op::eval_normalized(g4, 50, r(0)).abs());
  EXPECT_LT(e.value, q("1/5"));
  EXPECT_TRUE(e.heuristic);
  EXPECT_GE(op::darboux_envelope(3, 1, q("1/2")).value, q("1/2"));
  auto e5 = op::darboux_envelope(5, 200, q("-1/3"));
  EXPECT_LT(e5.value, q("1/100"));
  EXPECT_GE(e5.value, op::eval_normalized(OrthoFamily::gegenbauer(5), 200, q("-1/3")).abs());
  EXPECT_THROW(op::darboux_envelope(3, 5, r(1)), dlp::OutOfDomain);
}

TEST(DarbouxEnvelope, DominatesExactValuesOnGrid) {
  for (int n = 3; n <= 10; ++n) {
    Rational lambda(n - 2, 2);
    for (long i = -9; i <= 9; ++i) {
      Rational t(i, 10);
      auto exact = gegenbauer_normalized_values(lambda, t, 200);
      for (unsigned k = 1; k <= 200; ++k)
        ASSERT_GE(op::darboux_envelope(n, k, t).value, exact[k].abs()) << "n=" << n << " k=" << k << " t=" << t;
    }
  }
}

TEST(Cache, SharedAcrossCopiesAndThreads) {
  auto fam = OrthoFamily::gegenbauer(7);
  auto copy = fam;
  std::vector<std::thread> threads;
  std::vector<DensePoly> got(8);
  for (unsigned i = 0; i < 8; ++i) threads.emplace_back([&, i] { got[i] = (i % 2 ? fam : copy).poly(25 + i); });
  for (auto& t : threads) t.join();
  for (unsigned i = 0; i < 8; ++i) EXPECT_EQ(got[i], fam.poly(25 + i));
}
