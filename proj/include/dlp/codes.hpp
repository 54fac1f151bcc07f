#pragma once

// Gram-matrix realizability of constrained-angle codes, exhaustive code
// search, and the probe that tells a sharp Delsarte bound from a possible
// hallucination (an integer bound with no code behind it).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlp/delsarte.hpp"
#include "dlp/errors.hpp"
#include "dlp/matrix.hpp"
#include "dlp/rational.hpp"

namespace dlp::codes {

using delsarte::AngleSet;

/// Unit-diagonal Gram matrix whose off-diagonal entries lie in X.
struct GramCandidate {
  SymMatrix gram;
  AngleSet angles;

  std::size_t size() const { return gram.dim(); }

  /// Throws InvalidCode unless the diagonal is 1 and every off-diagonal
  /// entry lies in the angle set.
  void validate() const {
    for (std::size_t i = 0; i < gram.dim(); ++i) {
      if (gram(i, i) != Rational(1)) throw InvalidCode("diagonal entry " + std::to_string(i) + " is not 1");
      for (std::size_t j = 0; j < i; ++j)
        if (!angles.contains(gram(i, j)))
          throw InvalidCode("entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + gram(i, j).str() +
                            " is not an allowed cosine");
    }
  }

  /// Angle set read off the off-diagonal entries.
  static GramCandidate from_gram(const SymMatrix& g) {
    RationalVector vals;
    for (std::size_t i = 0; i < g.dim(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::find(vals.begin(), vals.end(), g(i, j)) == vals.end()) vals.push_back(g(i, j));
    GramCandidate c{g, AngleSet(vals)};
    c.validate();
    return c;
  }
};

/// A code exists on S^{n-1} with this Gram matrix iff the matrix is PSD of
/// rank at most n.
inline bool realizable(const GramCandidate& g, int n) {
  g.validate();
  if (!is_psd_exact(g.gram)) return false;
  return psd_rank(g.gram) <= static_cast<std::size_t>(n);
}

/// Petersen-graph Gram: 1 on the diagonal, -1/3 on edges, 1/3 on non-edges.
/// Vertices are the 2-subsets of {0..4}; adjacent when disjoint.
inline SymMatrix petersen_gram() {
  std::vector<std::pair<int, int>> v;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) v.push_back({a, b});
  SymMatrix g(10);
  for (std::size_t i = 0; i < 10; ++i) {
    g.set(i, i, 1);
    for (std::size_t j = 0; j < i; ++j) {
      bool disjoint = v[i].first != v[j].first && v[i].first != v[j].second && v[i].second != v[j].first &&
                      v[i].second != v[j].second;
      g.set(i, j, disjoint ? Rational(-1, 3) : Rational(1, 3));
    }
  }
  return g;
}

enum class SearchOutcome { Found, ExhaustedNoCode, BudgetExceeded };

inline const char* to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Found: return "Found";
    case SearchOutcome::ExhaustedNoCode: return "ExhaustedNoCode";
    case SearchOutcome::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::ExhaustedNoCode;
  std::optional<GramCandidate> witness;
  std::uint64_t nodes = 0;
  std::uint64_t budget = 0;
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

namespace detail {

/// Depth-first search over Gram entries, row by row (row r fills columns
/// 0..r-1). Each row keeps an incremental semidefinite LDL^T factorization,
/// so after every entry the principal block on {0..j, r} is known to be PSD
/// with known rank. Symmetry breaking: row r restricted to columns 0..r-2 is
/// lexicographically <= row r-1 on the same columns (choosing each next
/// point greedily with the largest such prefix shows every code has an
/// ordering of this form).
class CodeSearch {
 public:
  CodeSearch(int n, const AngleSet& x, std::size_t m, std::uint64_t budget)
      : n_(static_cast<std::size_t>(n)), m_(m), budget_(budget), values_(x.values()),
        g_(m, RationalVector(m)), l_(m, RationalVector(m)), d_(m), rank_(m, 0) {
    std::sort(values_.begin(), values_.end(), [](const Rational& a, const Rational& b) { return a > b; });
  }

  SearchResult run() {
    SearchResult out;
    out.budget = budget_;
    for (std::size_t i = 0; i < m_; ++i) g_[i][i] = Rational(1);
    bool found = false;
    if (m_ <= 1) found = n_ >= 1;
    else if (n_ >= 1) {
      d_[0] = Rational(1);
      rank_[0] = 1;
      found = dfs(1, 0, Rational(1), true);
    }
    out.nodes = nodes_;
    if (found) {
      SymMatrix gram = SymMatrix::from_rows(g_);
      out.outcome = SearchOutcome::Found;
      out.witness = GramCandidate{gram, AngleSet(values_)};
    } else {
      out.outcome = exhausted_budget_ ? SearchOutcome::BudgetExceeded : SearchOutcome::ExhaustedNoCode;
    }
    return out;
  }

 private:
  bool dfs(std::size_t r, std::size_t j, const Rational& schur, bool tied) {
    if (r == m_) return true;
    if (j == r) {
      d_[r] = schur;
      rank_[r] = rank_[r - 1] + (schur.sign() > 0 ? 1 : 0);
      return dfs(r + 1, 0, Rational(1), true);
    }
    const bool constrained = r >= 2 && j + 2 <= r;  // column j <= r-2 compares with row r-1
    for (const auto& v : values_) {
      if (nodes_ >= budget_) {
        exhausted_budget_ = true;
        return false;
      }
      ++nodes_;
      if (constrained && tied && v > g_[r - 1][j]) continue;
      bool next_tied = constrained && tied && v == g_[r - 1][j];

      Rational residual = v;
      for (std::size_t q = 0; q < j; ++q)
        if (!l_[r][q].is_zero() && !l_[j][q].is_zero()) residual -= l_[r][q] * l_[j][q] * d_[q];
      Rational next_schur = schur;
      if (d_[j].is_zero()) {
        if (!residual.is_zero()) continue;
        l_[r][j] = Rational(0);
      } else {
        l_[r][j] = residual / d_[j];
        next_schur -= residual * l_[r][j];
      }
      if (next_schur.sign() < 0) continue;
      if (rank_[j] + (next_schur.sign() > 0 ? 1 : 0) > n_) continue;

      g_[r][j] = g_[j][r] = v;
      if (dfs(r, j + 1, next_schur, next_tied)) return true;
      if (exhausted_budget_) return false;
    }
    return false;
  }

  std::size_t n_, m_;
  std::uint64_t budget_, nodes_ = 0;
  bool exhausted_budget_ = false;
  RationalVector values_;
  std::vector<RationalVector> g_, l_;
  RationalVector d_;
  std::vector<std::size_t> rank_;
};

}  // namespace detail

/// Searches for a code of exactly m points on S^{n-1} with cosines in X.
/// Budget counts search-tree nodes (candidate entry assignments).
inline SearchResult search_code(int n, const AngleSet& x, std::size_t m, std::uint64_t budget = kDefaultBudget) {
  if (m < 2) throw InvalidArgument("search_code needs m >= 2");
  if (x.empty()) throw InvalidArgument("angle set is empty");
  auto res = detail::CodeSearch(n, x, m, budget).run();
  if (res.witness) {
    res.witness->angles = x;
    if (!realizable(*res.witness, n)) throw InternalError("search returned a non-realizable Gram matrix");
  }
  return res;
}

enum class Sharpness { Sharp, Gap, Unverified };

inline const char* to_string(Sharpness s) {
  switch (s) {
    case Sharpness::Sharp: return "Sharp";
    case Sharpness::Gap: return "Gap";
    case Sharpness::Unverified: return "Unverified";
  }
  return "?";
}

/// Sharp when the code is realizable in dimension n, uses only cosines from
/// the certificate's X, and has exactly 1/gbar points; Gap when it is
/// smaller; Unverified without a code.
inline Sharpness sharpness_verdict(const delsarte::DelsarteCertificate& cert, const std::optional<GramCandidate>& code) {
  if (!code) return Sharpness::Unverified;
  GramCandidate c{code->gram, cert.angles};
  c.validate();
  if (!realizable(c, cert.n)) throw InvalidCode("Gram matrix is not realizable in dimension " + std::to_string(cert.n));
  if (!cert.bound_raw) return Sharpness::Gap;
  Rational size(static_cast<long>(c.size()));
  if (size > *cert.bound_raw) throw InternalError("code larger than its Delsarte bound");
  return size == *cert.bound_raw ? Sharpness::Sharp : Sharpness::Gap;
}

enum class ProbeOutcome { Sharp, HallucinationCandidate, Inconclusive };

inline const char* to_string(ProbeOutcome o) {
  switch (o) {
    case ProbeOutcome::Sharp: return "Sharp";
    case ProbeOutcome::HallucinationCandidate: return "HallucinationCandidate";
    case ProbeOutcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct ProbeVerdict {
  delsarte::DelsarteCertificate certificate;
  std::optional<mpz_class> bound_floor;
  ProbeOutcome outcome = ProbeOutcome::Inconclusive;
  std::optional<GramCandidate> witness;
  std::optional<SearchOutcome> search;
  std::uint64_t nodes = 0;
  std::uint64_t budget = 0;
  std::string reason;
};

/// Runs the stabilized Delsarte bound; when 1/gbar is an integer, looks for
/// a code of that size. A found code makes the bound sharp. An exhausted
/// search on a stabilized bound flags a hallucination candidate; anything
/// else is inconclusive.
inline ProbeVerdict hallucination_probe(int n, const AngleSet& x, const delsarte::StabilizeOptions& lp = {},
                                        std::uint64_t budget = kDefaultBudget) {
  ProbeVerdict v;
  v.budget = budget;
  v.certificate = delsarte::delsarte_bound(n, x, lp);
  v.bound_floor = v.certificate.bound_floor;
  const auto& raw = v.certificate.bound_raw;
  if (!raw) {
    v.reason = "gbar is zero; no finite bound";
    return v;
  }
  if (!raw->is_integer()) {
    v.reason = "bound " + raw->str() + " is not an integer";
    return v;
  }
  const mpz_class target = raw->num();
  if (target < 2) {
    v.reason = "bound below 2";
    return v;
  }
  auto res = search_code(n, x, target.get_ui(), budget);
  v.search = res.outcome;
  v.nodes = res.nodes;
  switch (res.outcome) {
    case SearchOutcome::Found:
      v.outcome = ProbeOutcome::Sharp;
      v.witness = res.witness;
      if (sharpness_verdict(v.certificate, v.witness) != Sharpness::Sharp)
        throw InternalError("probe witness is not sharp");
      v.reason = "code of size " + target.get_str() + " found";
      break;
    case SearchOutcome::ExhaustedNoCode:
      if (v.certificate.stabilized) {
        v.outcome = ProbeOutcome::HallucinationCandidate;
        v.reason = "no code of size " + target.get_str() + " exists";
      } else {
        v.reason = "no code at this bound, but the bound did not stabilize";
      }
      break;
    case SearchOutcome::BudgetExceeded:
      v.reason = "search budget exhausted";
      break;
  }
  return v;
}

}  // namespace dlp::codes
