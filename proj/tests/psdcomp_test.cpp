#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dlp/io.hpp"
#include "dlp/psdcomp.hpp"

using dlp::DensePoly;
using dlp::PartialSymMatrix;
using dlp::Rational;
using dlp::RationalVector;
using dlp::SymMatrix;
using namespace dlp::psdcomp;

namespace {

Rational q(const char* s) { return Rational::parse(s); }

SymMatrix rows(std::vector<RationalVector> r) { return SymMatrix::from_rows(r); }

Rational det(std::vector<RationalVector> a) {
  const std::size_t n = a.size();
  Rational d(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

Rational minor(const SymMatrix& m, const std::vector<std::size_t>& idx) {
  std::vector<RationalVector> a;
  for (auto i : idx) {
    RationalVector row;
    for (auto j : idx) row.push_back(m(i, j));
    a.push_back(row);
  }
  return det(a);
}

// PSD iff every principal minor is nonnegative.
bool psd_by_minors(const SymMatrix& m) {
  for (const auto& s : subsets(m.dim()))
    if (minor(m, s).sign() < 0) return false;
  return true;
}

SymMatrix with_entry(const PartialSymMatrix& p, std::size_t i, std::size_t j, const Rational& x) {
  SymMatrix m = p.values();
  m.set(i, j, x);
  return m;
}

// Decide completability of a matrix with a single unknown off-diagonal entry
// by scanning candidate values: a grid, the vertex and rational roots of
// every principal minor (a quadratic in the unknown), and midpoints between
// approximate roots.
bool one_unknown_oracle(const PartialSymMatrix& p, std::size_t i, std::size_t j) {
  std::vector<Rational> cand;
  for (int k = -240; k <= 240; ++k) cand.emplace_back(k, 4);
  std::vector<double> approx;
  for (const auto& s : subsets(p.dim())) {
    if (std::find(s.begin(), s.end(), i) == s.end() || std::find(s.begin(), s.end(), j) == s.end()) continue;
    Rational c = minor(with_entry(p, i, j, Rational(0)), s);
    Rational plus = minor(with_entry(p, i, j, Rational(1)), s);
    Rational minus = minor(with_entry(p, i, j, Rational(-1)), s);
    Rational a = (plus + minus) / Rational(2) - c;
    Rational b = (plus - minus) / Rational(2);
    if (a.is_zero()) {
      if (!b.is_zero()) cand.push_back(-c / b);
      continue;
    }
    cand.push_back(-b / (Rational(2) * a));
    Rational disc = b * b - Rational(4) * a * c;
    if (disc.sign() < 0) continue;
    double sq = std::sqrt(disc.to_double());
    approx.push_back((-b.to_double() + sq) / (2 * a.to_double()));
    approx.push_back((-b.to_double() - sq) / (2 * a.to_double()));
  }
  std::sort(approx.begin(), approx.end());
  for (std::size_t k = 0; k + 1 < approx.size(); ++k) {
    double mid = (approx[k] + approx[k + 1]) / 2;
    cand.emplace_back(mpz_class(static_cast<long>(std::llround(mid * (1 << 30)))), mpz_class(1 << 30));
  }
  for (const auto& x : cand)
    if (psd_by_minors(with_entry(p, i, j, x))) return true;
  return false;
}

void expect_valid(const PartialSymMatrix& p, const CompletionResult& r) {
  if (r.status == CompletionStatus::Completable) {
    EXPECT_TRUE(psd_by_minors(r.witness));
    for (std::size_t i = 0; i < p.dim(); ++i)
      for (std::size_t j = 0; j < p.dim(); ++j)
        if (p.specified(i, j)) {
          EXPECT_EQ(r.witness(i, j), p.value(i, j));
        }
  }
  if (r.status == CompletionStatus::Infeasible) {
    EXPECT_FALSE(psd_by_minors(r.certificate));
    for (auto a : r.certificate_rows)
      for (auto b : r.certificate_rows) EXPECT_TRUE(p.specified(a, b));
  }
}

PartialSymMatrix sample_partial() {
  PartialSymMatrix p(3);
  p.specify(0, 0, 1);
  p.specify(0, 2, -1);
  p.specify(1, 1, 2);
  p.specify(1, 2, 1);
  return p;
}

}  // namespace

TEST(PsdExact, Examples) {
  EXPECT_TRUE(dlp::is_psd_exact(SymMatrix::identity(3)));
  EXPECT_FALSE(dlp::is_psd_exact(rows({{1, 2}, {2, 1}})));
  EXPECT_TRUE(dlp::is_psd_exact(rows({{1, 0, -1}, {0, 2, 1}, {-1, 1, 17}})));
  EXPECT_TRUE(dlp::is_psd_exact(rows({{1, 0, 1}, {0, 4, 1}, {1, 1, 289}})));
  EXPECT_EQ(minor(rows({{1, 0, -1}, {0, 2, 1}, {-1, 1, 17}}), {0, 1, 2}), Rational(31));
  EXPECT_EQ(minor(rows({{1, 0, 1}, {0, 4, 1}, {1, 1, 289}}), {0, 1, 2}), Rational(1151));
}

TEST(PsdExact, ZeroDiagonalWithNonzeroRowRejected) {
  EXPECT_FALSE(dlp::is_psd_exact(rows({{0, 1}, {1, 5}})));
  EXPECT_TRUE(dlp::is_psd_exact(rows({{0, 0}, {0, 5}})));
}

TEST(PsdExact, AgreesWithMinorsOnRandomSymmetric) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> e(-3, 3), dim(1, 4);
  int psd = 0;
  for (int t = 0; t < 400; ++t) {
    const int n = dim(rng);
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) m.set(i, j, i == j ? std::abs(e(rng)) + 1 : e(rng));
    bool oracle = psd_by_minors(m);
    psd += oracle;
    EXPECT_EQ(dlp::is_psd_exact(m), oracle);
  }
  EXPECT_GT(psd, 40);
}

TEST(PsdExact, PrincipalMinorsOfRandomGramsNonnegative) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> e(-4, 4);
  for (int t = 0; t < 30; ++t) {
    SymMatrix m(5);
    std::vector<RationalVector> a(3, RationalVector(5));
    for (auto& row : a)
      for (auto& v : row) v = e(rng);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        Rational s(0);
        for (const auto& row : a) s += row[i] * row[j];
        m.set(i, j, s);
      }
    ASSERT_TRUE(dlp::is_psd_exact(m));
    for (const auto& s : subsets(5))
      if (s.size() <= 3) {
        EXPECT_GE(minor(m, s).sign(), 0);
      }
    EXPECT_LE(dlp::psd_rank(m), 3u);
  }
}

TEST(PsdRank, Examples) {
  EXPECT_EQ(dlp::psd_rank(SymMatrix::identity(4)), 4u);
  EXPECT_EQ(dlp::psd_rank(rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}})), 1u);
  EXPECT_THROW(dlp::psd_rank(rows({{1, 2}, {2, 1}})), dlp::PreconditionViolation);
}

TEST(PsdRank, PetersenGram) {
  // Vertices are 2-subsets of {0..4}; adjacent when disjoint.
  std::vector<std::pair<int, int>> v;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) v.push_back({a, b});
  SymMatrix g(10);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      bool disjoint = v[i].first != v[j].first && v[i].first != v[j].second && v[i].second != v[j].first &&
                      v[i].second != v[j].second;
      g.set(i, j, i == j ? Rational(1) : (disjoint ? q("-1/3") : q("1/3")));
    }
  ASSERT_TRUE(dlp::is_psd_exact(g));
  EXPECT_EQ(dlp::psd_rank(g), 5u);
}

TEST(Completion, SampleMatrixCompletable) {
  auto p = sample_partial();
  auto r = complete_psd(p);
  ASSERT_EQ(r.status, CompletionStatus::Completable);
  expect_valid(p, r);
  EXPECT_EQ(r.filled_diagonal, std::vector<std::size_t>{2});
}

TEST(Completion, FreeDiagonalCanBeRejected) {
  ProjectionOptions opt;
  opt.fill_free_diagonal = false;
  EXPECT_THROW(complete_psd(sample_partial(), opt), dlp::UnsupportedPattern);
}

TEST(Completion, FreeDiagonalNeverBlamedForInfeasibility) {
  // The 2x2 block on rows 0,1 is not PSD; the free diagonal is irrelevant.
  PartialSymMatrix p(3);
  p.specify(0, 0, 1);
  p.specify(1, 1, 1);
  p.specify(0, 1, 2);
  p.specify(1, 2, 5);
  auto r = complete_psd(p);
  ASSERT_EQ(r.status, CompletionStatus::Infeasible);
  EXPECT_EQ(r.certificate_rows, (std::vector<std::size_t>{0, 1}));
  expect_valid(p, r);
}

TEST(Completion, SquaredImageMatchesAndCompletes) {
  auto image = apply_entrywise(sample_partial(), DensePoly(RationalVector{0, 0, 1}));
  PartialSymMatrix expected(3);
  expected.specify(0, 0, 1);
  expected.specify(0, 2, 1);
  expected.specify(1, 1, 4);
  expected.specify(1, 2, 1);
  EXPECT_EQ(image, expected);
  auto r = complete_psd(image);
  ASSERT_EQ(r.status, CompletionStatus::Completable);
  expect_valid(image, r);
}

TEST(Completion, EntrywiseExamples) {
  auto p = sample_partial();
  EXPECT_EQ(apply_entrywise(p, DensePoly::x()), p);
  PartialSymMatrix d(3);
  for (int i = 0; i < 3; ++i) d.specify(i, i, i);
  auto shifted = apply_entrywise(d, DensePoly(RationalVector{1, 1}));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(shifted.value(i, i), Rational(i + 1));
    EXPECT_FALSE(shifted.specified(i, (i + 1) % 3));
  }
}

TEST(Completion, FullySpecified) {
  auto ok = PartialSymMatrix::fully_specified(rows({{2, 1}, {1, 2}}));
  auto r = complete_psd(ok);
  ASSERT_EQ(r.status, CompletionStatus::Completable);
  EXPECT_EQ(r.witness, ok.values());
  auto bad = PartialSymMatrix::fully_specified(rows({{1, 2}, {2, 1}}));
  r = complete_psd(bad);
  ASSERT_EQ(r.status, CompletionStatus::Infeasible);
  EXPECT_EQ(r.certificate, bad.values());
}

TEST(Completion, OneUnknownAgreesWithGridOracle) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> e(-3, 3), dim(3, 4), diag(0, 4);
  int completable = 0, infeasible = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = dim(rng);
    PartialSymMatrix p(n);
    if (t % 2 == 0) {
      // Gram matrix of random vectors: always completable.
      std::vector<RationalVector> a(2, RationalVector(n));
      for (auto& row : a)
        for (auto& v : row) v = e(rng);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          Rational s(0);
          for (const auto& row : a) s += row[i] * row[j];
          p.specify(i, j, s);
        }
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) p.specify(i, j, i == j ? diag(rng) : e(rng));
    }
    std::size_t i = rng() % n, j = (i + 1 + rng() % (n - 1)) % n;
    p.unspecify(i, j);
    auto r = complete_psd(p);
    expect_valid(p, r);
    ASSERT_NE(r.status, CompletionStatus::Unknown) << "trial " << t;
    EXPECT_EQ(r.method, CompletionMethod::Chordal);
    bool oracle = one_unknown_oracle(p, i, j);
    EXPECT_EQ(r.status == CompletionStatus::Completable, oracle) << "trial " << t;
    (oracle ? completable : infeasible)++;
  }
  EXPECT_GT(completable, 100);
  EXPECT_GT(infeasible, 30);
}

TEST(Completion, FourCycleUsesProjection) {
  PartialSymMatrix p(4);
  for (int i = 0; i < 4; ++i) p.specify(i, i, 1);
  for (int i = 0; i < 4; ++i) p.specify(i, (i + 1) % 4, q("1/2"));
  auto r = complete_psd(p);
  EXPECT_EQ(r.method, CompletionMethod::Projection);
  ASSERT_EQ(r.status, CompletionStatus::Completable);
  expect_valid(p, r);
}

TEST(Completion, FourCycleObstructionNotCertifiedCompletable) {
  // Every specified block is PSD, but x0 = x1 = x2 = x3 is forced and then
  // the last edge would need +1.
  PartialSymMatrix p(4);
  for (int i = 0; i < 4; ++i) p.specify(i, i, 1);
  p.specify(0, 1, 1);
  p.specify(1, 2, 1);
  p.specify(2, 3, 1);
  p.specify(3, 0, -1);
  ProjectionOptions opt;
  opt.max_iterations = 2000;
  auto r = complete_psd(p, opt);
  EXPECT_EQ(r.method, CompletionMethod::Projection);
  EXPECT_EQ(r.status, CompletionStatus::Unknown);
}

TEST(MatrixIo, RoundTrip) {
  auto p = sample_partial();
  p.specify(1, 0, q("-7/3"));
  auto j = dlp::io::to_json(p);
  EXPECT_EQ(dlp::io::partial_matrix_from_json(j), p);
  EXPECT_EQ(dlp::io::partial_matrix_from_json(dlp::io::Json::parse(j.dump())), p);
  auto full = rows({{1, q("1/3")}, {q("1/3"), 2}});
  EXPECT_EQ(dlp::io::matrix_from_json(dlp::io::to_json(full)), full);
}
