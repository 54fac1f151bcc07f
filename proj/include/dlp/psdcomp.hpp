#pragma once

// Positive semidefinite completion of partially specified symmetric
// matrices. Chordal specification patterns are completed exactly; other
// patterns fall back to alternating projections in floating point, whose
// result is accepted only after exact re-verification.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dlp/errors.hpp"
#include "dlp/matrix.hpp"
#include "dlp/poly.hpp"
#include "dlp/rational.hpp"

namespace dlp::psdcomp {

enum class CompletionStatus { Completable, Infeasible, Unknown };
enum class CompletionMethod { Chordal, Projection };

inline const char* to_string(CompletionStatus s) {
  switch (s) {
    case CompletionStatus::Completable: return "Completable";
    case CompletionStatus::Infeasible: return "Infeasible";
    case CompletionStatus::Unknown: return "Unknown";
  }
  return "?";
}
inline const char* to_string(CompletionMethod m) {
  return m == CompletionMethod::Chordal ? "Chordal" : "Projection";
}

struct CompletionResult {
  CompletionStatus status = CompletionStatus::Unknown;
  CompletionMethod method = CompletionMethod::Chordal;
  SymMatrix witness;                         ///< Completable
  std::vector<std::size_t> certificate_rows; ///< Infeasible: indices of a fully specified non-PSD principal block
  SymMatrix certificate;                     ///< Infeasible: that block
  double residual = 0.0;                     ///< Projection: final numeric residual
  std::size_t iterations = 0;                ///< Projection
  std::vector<std::size_t> filled_diagonal;  ///< rows whose unspecified diagonal was filled
};

struct ProjectionOptions {
  std::size_t max_iterations = 20000;
  double tolerance = 1e-10;
  bool fill_free_diagonal = true;
  unsigned diagonal_retries = 8;
};

namespace detail {

inline void require_specified_diagonal(const PartialSymMatrix& p) {
  for (std::size_t i = 0; i < p.dim(); ++i)
    if (!p.specified(i, i))
      throw UnsupportedPattern("diagonal entry " + std::to_string(i) + " is unspecified");
}

inline bool adjacent(const PartialSymMatrix& p, std::size_t i, std::size_t j) {
  return i != j && p.specified(i, j);
}

/// Maximum-cardinality search order (ties to the smallest index).
inline std::vector<std::size_t> mcs_order(const PartialSymMatrix& p) {
  const std::size_t n = p.dim();
  std::vector<std::size_t> weight(n, 0), order;
  std::vector<bool> seen(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!seen[v] && (best == n || weight[v] > weight[best])) best = v;
    seen[best] = true;
    order.push_back(best);
    for (std::size_t v = 0; v < n; ++v)
      if (!seen[v] && adjacent(p, best, v)) ++weight[v];
  }
  return order;
}

/// Neighbours of order[k] among order[0..k-1].
inline std::vector<std::size_t> earlier_neighbours(const PartialSymMatrix& p, const std::vector<std::size_t>& order,
                                                   std::size_t k) {
  std::vector<std::size_t> c;
  for (std::size_t i = 0; i < k; ++i)
    if (adjacent(p, order[k], order[i])) c.push_back(order[i]);
  return c;
}

inline bool is_clique(const PartialSymMatrix& p, const std::vector<std::size_t>& c) {
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b)
      if (!adjacent(p, c[a], c[b])) return false;
  return true;
}

inline CompletionResult infeasible(const PartialSymMatrix& p, std::vector<std::size_t> rows,
                                   CompletionMethod method) {
  std::sort(rows.begin(), rows.end());
  CompletionResult r;
  r.status = CompletionStatus::Infeasible;
  r.method = method;
  r.certificate = p.values().principal(rows);
  r.certificate_rows = std::move(rows);
  return r;
}

inline bool matches_specified(const PartialSymMatrix& p, const SymMatrix& m) {
  for (std::size_t i = 0; i < p.dim(); ++i)
    for (std::size_t j = 0; j < p.dim(); ++j)
      if (p.specified(i, j) && p.value(i, j) != m(i, j)) return false;
  return true;
}

/// Bron-Kerbosch enumeration of maximal cliques of the specification graph.
inline void maximal_cliques(const PartialSymMatrix& p, std::vector<std::size_t> r, std::vector<std::size_t> cand,
                            std::vector<std::size_t> excl, std::vector<std::vector<std::size_t>>& out) {
  if (cand.empty() && excl.empty()) {
    out.push_back(r);
    return;
  }
  while (!cand.empty()) {
    std::size_t v = cand.back();
    cand.pop_back();
    std::vector<std::size_t> nc, ne;
    for (auto u : cand)
      if (adjacent(p, u, v)) nc.push_back(u);
    for (auto u : excl)
      if (adjacent(p, u, v)) ne.push_back(u);
    r.push_back(v);
    maximal_cliques(p, r, nc, ne, out);
    r.pop_back();
    excl.push_back(v);
  }
}

}  // namespace detail

/// True iff the specification graph (specified off-diagonal positions) is
/// chordal.
inline bool is_chordal(const PartialSymMatrix& p) {
  auto order = detail::mcs_order(p);
  for (std::size_t k = 0; k < order.size(); ++k)
    if (!detail::is_clique(p, detail::earlier_neighbours(p, order, k))) return false;
  return true;
}

/// Exact completion for chordal patterns. Vertices are added in
/// maximum-cardinality-search order; the earlier neighbours C of each new
/// vertex v form a clique, and the unknown entries of row v are set to
/// B[w, C] z where A_C z = b_C. That is the centre of every entry's
/// feasibility interval and keeps the completed block PSD exactly when the
/// clique block [A_C b_C; b_C^T d_v] is PSD.
inline CompletionResult complete_chordal(const PartialSymMatrix& p) {
  detail::require_specified_diagonal(p);
  const std::size_t n = p.dim();
  auto order = detail::mcs_order(p);
  SymMatrix w(n);
  for (std::size_t i = 0; i < n; ++i) w.set(i, i, p.value(i, i));

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t v = order[k];
    auto clique = detail::earlier_neighbours(p, order, k);
    if (!detail::is_clique(p, clique)) throw PreconditionViolation("specification graph is not chordal");
    auto block_rows = clique;
    block_rows.push_back(v);
    if (!is_psd_exact(p.values().principal(block_rows)))
      return detail::infeasible(p, block_rows, CompletionMethod::Chordal);

    std::vector<RationalVector> a(clique.size(), RationalVector(clique.size()));
    RationalVector b(clique.size());
    for (std::size_t i = 0; i < clique.size(); ++i) {
      for (std::size_t j = 0; j < clique.size(); ++j) a[i][j] = p.value(clique[i], clique[j]);
      b[i] = p.value(clique[i], v);
    }
    auto z = solve_linear(a, b);
    if (!z) throw InternalError("PSD clique block has an inconsistent column");
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t u = order[i];
      if (p.specified(u, v)) {
        w.set(u, v, p.value(u, v));
        continue;
      }
      Rational s(0);
      for (std::size_t c = 0; c < clique.size(); ++c) s += w(u, clique[c]) * (*z)[c];
      w.set(u, v, s);
    }
  }
  if (!detail::matches_specified(p, w) || !is_psd_exact(w))
    throw InternalError("chordal completion produced an invalid witness");
  CompletionResult r;
  r.status = CompletionStatus::Completable;
  r.method = CompletionMethod::Chordal;
  r.witness = std::move(w);
  return r;
}

/// Alternating (Dykstra) projections between the PSD cone, shifted inward
/// by a small margin, and the affine set fixing the specified entries. The
/// unknown entries of the numeric result are rationalized and the candidate
/// is accepted only if it passes is_psd_exact.
inline CompletionResult complete_projection(const PartialSymMatrix& p, const ProjectionOptions& opt = {}) {
  detail::require_specified_diagonal(p);
  const std::size_t n = p.dim();

  // Any fully specified principal block that is not PSD refutes completability.
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<std::vector<std::size_t>> cliques;
  detail::maximal_cliques(p, {}, all, {}, cliques);
  std::sort(cliques.begin(), cliques.end());
  for (auto& c : cliques)
    if (!is_psd_exact(p.values().principal(c))) return detail::infeasible(p, c, CompletionMethod::Projection);

  Eigen::MatrixXd target(n, n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      target(i, j) = p.specified(i, j) ? p.value(i, j).to_double() : 0.0;
      scale = std::max(scale, std::abs(target(i, j)));
    }
  const double margin = 1e-7 * std::max(scale, 1.0);

  auto project_psd = [&](const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(margin);
    return Eigen::MatrixXd(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
  };
  auto project_affine = [&](Eigen::MatrixXd m) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (p.specified(i, j)) m(i, j) = target(i, j);
    return m;
  };

  Eigen::MatrixXd x = target, corr_psd = Eigen::MatrixXd::Zero(n, n), corr_aff = Eigen::MatrixXd::Zero(n, n);
  CompletionResult r;
  r.method = CompletionMethod::Projection;
  for (r.iterations = 0; r.iterations < opt.max_iterations; ++r.iterations) {
    Eigen::MatrixXd y = project_psd(x + corr_psd);
    corr_psd = x + corr_psd - y;
    Eigen::MatrixXd z = project_affine(y + corr_aff);
    corr_aff = y + corr_aff - z;
    r.residual = (y - z).norm();
    x = z;
    if (r.residual < opt.tolerance) break;
  }

  // Rationalize the unknown entries at several precisions.
  for (int bits : {16, 24, 32, 40, 48}) {
    SymMatrix cand = p.values();
    const double q = std::ldexp(1.0, bits);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (!p.specified(i, j)) cand.set(i, j, Rational(mpz_class(std::round(x(i, j) * q)), mpz_class(std::ldexp(1.0, bits))));
    if (is_psd_exact(cand) && detail::matches_specified(p, cand)) {
      r.status = CompletionStatus::Completable;
      r.witness = std::move(cand);
      return r;
    }
  }
  r.status = CompletionStatus::Unknown;
  return r;
}

inline CompletionResult complete_specified_diagonal(const PartialSymMatrix& p, const ProjectionOptions& opt) {
  if (is_chordal(p)) return complete_chordal(p);
  return complete_projection(p, opt);
}

/// Completes exactly when the pattern is chordal, otherwise by verified
/// projection.
///
/// Unspecified diagonal entries (when allowed) are filled before completion
/// with d_u = 1 + deg(u) * sum_j m_uj^2 / d_j over the specified entries of
/// row u (d_j read as 1 when it is unspecified or not positive). Larger
/// diagonals can only help, so on an Infeasible verdict whose certificate
/// touches a filled entry the fill is multiplied by 4 and the completion
/// retried. Infeasible is reported only for certificates made of originally
/// specified entries; otherwise the result is Unknown.
inline CompletionResult complete_psd(const PartialSymMatrix& p, const ProjectionOptions& opt = {}) {
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < p.dim(); ++i)
    if (!p.specified(i, i)) free.push_back(i);
  if (free.empty()) return complete_specified_diagonal(p, opt);
  if (!opt.fill_free_diagonal) detail::require_specified_diagonal(p);

  std::vector<Rational> base(p.dim());
  for (auto u : free) {
    Rational sum(0);
    long degree = 0;
    for (std::size_t j = 0; j < p.dim(); ++j) {
      if (j == u || !p.specified(u, j)) continue;
      ++degree;
      Rational d = p.specified(j, j) && p.value(j, j).sign() > 0 ? p.value(j, j) : Rational(1);
      sum += p.value(u, j) * p.value(u, j) / d;
    }
    base[u] = Rational(degree) * sum;
  }
  Rational factor(1);
  CompletionResult last;
  for (unsigned attempt = 0; attempt <= opt.diagonal_retries; ++attempt, factor *= Rational(4)) {
    PartialSymMatrix filled = p;
    for (auto u : free) filled.specify(u, u, Rational(1) + factor * base[u]);
    last = complete_specified_diagonal(filled, opt);
    last.filled_diagonal = free;
    if (last.status == CompletionStatus::Completable) return last;
    if (last.status == CompletionStatus::Unknown) return last;
    bool touches = false;
    for (auto r : last.certificate_rows)
      if (!p.specified(r, r)) touches = true;
    if (!touches) return last;
  }
  last.status = CompletionStatus::Unknown;
  last.certificate_rows.clear();
  last.certificate = SymMatrix();
  return last;
}

/// Entrywise image f(m_ij) on specified entries; the mask is unchanged.
inline PartialSymMatrix apply_entrywise(const PartialSymMatrix& p, const DensePoly& f) {
  PartialSymMatrix out(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (p.specified(i, j)) out.specify(i, j, f(p.value(i, j)));
  return out;
}

}  // namespace dlp::psdcomp
