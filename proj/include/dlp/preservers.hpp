#pragma once

// Finite-set shadows of the positivity-preserver results: cone and convex
// hull membership of functions on a finite X ⊂ [-1, 1], the truncated
// preserver form a·χ + b·x·χ + Σ c_i x^i (χ the indicator of x = ±1), and
// a randomized check that polynomial forms keep partial PSD matrices
// completable.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dlp/errors.hpp"
#include "dlp/matrix.hpp"
#include "dlp/orthopoly.hpp"
#include "dlp/poly.hpp"
#include "dlp/psdcomp.hpp"
#include "dlp/rational.hpp"
#include "dlp/simplex.hpp"

namespace dlp::preservers {

/// A function on a sorted finite point set X ⊂ [-1, 1] that contains 1.
struct FiniteFunction {
  RationalVector points;
  RationalVector values;

  FiniteFunction() = default;
  FiniteFunction(RationalVector pts, RationalVector vals) : points(std::move(pts)), values(std::move(vals)) {
    if (points.size() != values.size()) throw ShapeError("points and values differ in length");
    bool has_one = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i] < Rational(-1) || points[i] > Rational(1)) throw InvalidArgument("point outside [-1, 1]");
      if (i > 0 && !(points[i - 1] < points[i])) throw InvalidArgument("points must be sorted and distinct");
      if (points[i] == Rational(1)) has_one = true;
    }
    if (!has_one) throw InvalidArgument("point set must contain 1");
  }

  template <typename F>
  static FiniteFunction sample(const RationalVector& pts, F&& f) {
    RationalVector v;
    for (const auto& x : pts) v.push_back(f(x));
    return FiniteFunction(pts, std::move(v));
  }
};

/// Normalized Gegenbauer P^_k of S^{n-1} restricted to the points.
inline FiniteFunction gegenbauer_restriction(const RationalVector& pts, int n, unsigned k) {
  auto fam = orthopoly::OrthoFamily::gegenbauer(n);
  return FiniteFunction::sample(pts, [&](const Rational& x) { return orthopoly::eval_normalized(fam, k, x); });
}

struct ConeResult {
  bool member = false;
  RationalVector lambda;    ///< member: nonnegative weights (sum 1 for hulls)
  RationalVector farkas;    ///< non-member: y with y.target + offset < 0 <= y.g + offset for every generator
  Rational offset;          ///< hull certificates only; 0 for cones
};

/// Exact re-check of a cone or hull result, independent of the LP.
inline bool verify_cone_result(const ConeResult& r, const FiniteFunction& target,
                               const std::vector<FiniteFunction>& gens, bool hull) {
  const std::size_t m = target.points.size();
  if (r.member) {
    if (r.lambda.size() != gens.size()) return false;
    Rational total(0);
    for (const auto& l : r.lambda) {
      if (l.sign() < 0) return false;
      total += l;
    }
    if (hull && total != Rational(1)) return false;
    for (std::size_t i = 0; i < m; ++i) {
      Rational s(0);
      for (std::size_t g = 0; g < gens.size(); ++g) s += r.lambda[g] * gens[g].values[i];
      if (s != target.values[i]) return false;
    }
    return true;
  }
  if (r.farkas.size() != m || (!hull && !r.offset.is_zero())) return false;
  auto pair = [&](const FiniteFunction& f) {
    Rational s = r.offset;
    for (std::size_t i = 0; i < m; ++i) s += r.farkas[i] * f.values[i];
    return s;
  };
  if (pair(target).sign() >= 0) return false;
  for (const auto& g : gens)
    if (pair(g).sign() < 0) return false;
  return true;
}

/// Decides whether target = Σ λ_g g with λ >= 0 (and Σ λ = 1 when hull is
/// set). Non-membership comes with a verified Farkas certificate.
inline ConeResult cone_membership(const FiniteFunction& target, const std::vector<FiniteFunction>& gens,
                                  bool hull = false) {
  if (gens.empty()) throw InvalidArgument("at least one generator is required");
  for (const auto& g : gens)
    if (g.points != target.points) throw ShapeError("generators must share the target's point set");
  const std::size_t m = target.points.size();
  simplex::LinearProgram lp;
  lp.objective.assign(gens.size(), Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    RationalVector row;
    for (const auto& g : gens) row.push_back(g.values[i]);
    lp.add_row(std::move(row), simplex::Relation::Equal, target.values[i]);
  }
  if (hull) lp.add_row(RationalVector(gens.size(), Rational(1)), simplex::Relation::Equal, Rational(1));
  auto out = simplex::solve_lp(lp);
  ConeResult r;
  if (out.status == simplex::LPStatus::Optimal) {
    r.member = true;
    r.lambda = out.primal;
  } else {
    r.farkas.assign(out.farkas.begin(), out.farkas.begin() + static_cast<std::ptrdiff_t>(m));
    if (hull) r.offset = out.farkas[m];
  }
  if (!verify_cone_result(r, target, gens, hull)) throw InternalError("cone certificate failed re-verification");
  return r;
}

/// Smallest N <= n_max with P^_{N+1} and P^_{N+2} both in the convex hull of
/// P^_0..P^_N on X, or nullopt.
inline std::optional<unsigned> hull_cap(const RationalVector& pts, int n, unsigned n_max) {
  for (unsigned cap = 0; cap <= n_max; ++cap) {
    std::vector<FiniteFunction> gens;
    for (unsigned k = 0; k <= cap; ++k) gens.push_back(gegenbauer_restriction(pts, n, k));
    bool ok = cone_membership(gegenbauer_restriction(pts, n, cap + 1), gens, true).member &&
              cone_membership(gegenbauer_restriction(pts, n, cap + 2), gens, true).member;
    if (ok) return cap;
  }
  return std::nullopt;
}

/// f(x) = a·χ(x = ±1) + b·x·χ(x = ±1) + Σ_{i=0..D} c_i x^i with a, b, c_i >= 0.
struct PreserverForm {
  Rational a;
  Rational b;
  RationalVector c;

  bool nonnegative() const {
    if (a.sign() < 0 || b.sign() < 0) return false;
    for (const auto& v : c)
      if (v.sign() < 0) return false;
    return true;
  }

  Rational operator()(const Rational& x) const {
    Rational s(0);
    if (x.abs() == Rational(1)) s += a + b * x;
    Rational p(1);
    for (const auto& ci : c) {
      s += ci * p;
      p *= x;
    }
    return s;
  }

  DensePoly polynomial_part() const { return DensePoly(c); }
};

struct FitResult {
  bool member = false;
  PreserverForm form;        ///< member
  RationalVector farkas;     ///< non-member: y with y.f < 0 and y.h >= 0 for every basis function h
};

/// LP feasibility of f = a·χ + b·x·χ + Σ_{i<=D} c_i x^i on X with
/// nonnegative coefficients.
inline FitResult fit_preserver_form(const FiniteFunction& f, unsigned degree) {
  const std::size_t m = f.points.size();
  const std::size_t vars = 2 + degree + 1;
  auto basis = [&](std::size_t var, const Rational& x) -> Rational {
    bool edge = x.abs() == Rational(1);
    if (var == 0) return edge ? Rational(1) : Rational(0);
    if (var == 1) return edge ? x : Rational(0);
    return pow(x, static_cast<unsigned>(var - 2));
  };
  simplex::LinearProgram lp;
  lp.objective.assign(vars, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    RationalVector row(vars);
    for (std::size_t v = 0; v < vars; ++v) row[v] = basis(v, f.points[i]);
    lp.add_row(std::move(row), simplex::Relation::Equal, f.values[i]);
  }
  auto out = simplex::solve_lp(lp);
  FitResult r;
  if (out.status == simplex::LPStatus::Optimal) {
    r.member = true;
    r.form.a = out.primal[0];
    r.form.b = out.primal[1];
    r.form.c.assign(out.primal.begin() + 2, out.primal.end());
    for (std::size_t i = 0; i < m; ++i)
      if (r.form(f.points[i]) != f.values[i]) throw InternalError("preserver form does not reproduce f");
    if (!r.form.nonnegative()) throw InternalError("preserver form has a negative coefficient");
  } else {
    r.farkas = out.farkas;
    Rational yf(0);
    for (std::size_t i = 0; i < m; ++i) yf += r.farkas[i] * f.values[i];
    if (yf.sign() >= 0) throw InternalError("preserver Farkas certificate does not separate f");
    for (std::size_t v = 0; v < vars; ++v) {
      Rational yh(0);
      for (std::size_t i = 0; i < m; ++i) yh += r.farkas[i] * basis(v, f.points[i]);
      if (yh.sign() < 0) throw InternalError("preserver Farkas certificate fails on a basis function");
    }
  }
  return r;
}

struct FuzzReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t size = 0;
  std::size_t completable = 0;
  std::size_t unknown = 0;
  std::size_t violations = 0;
  std::optional<PartialSymMatrix> first_violation_input;
  std::optional<PartialSymMatrix> first_violation_image;
  std::vector<std::size_t> first_violation_certificate;
};

/// Per-trial seed derived from the run seed (splitmix64 step).
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Random partially specified PSD matrix: M = A^T A for a small rational A,
/// then each off-diagonal pair is hidden with probability 1/2.
inline PartialSymMatrix random_partial_psd(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3), coin(0, 1);
  std::vector<RationalVector> a(m, RationalVector(m));
  for (auto& row : a)
    for (auto& v : row) v = Rational(num(rng), den(rng));
  SymMatrix full(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      Rational s(0);
      for (std::size_t k = 0; k < m; ++k) s += a[k][i] * a[k][j];
      full.set(i, j, s);
    }
  PartialSymMatrix p(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (i == j || coin(rng) == 1) p.specify(i, j, full(i, j));
  return p;
}

/// Applies the polynomial part Σ c_i x^i entrywise to random partial PSD
/// matrices and counts how often the image fails to be completable. Only a
/// verified Infeasible certificate counts as a violation. Negative
/// coefficients are accepted here so the fuzzer can be run as a negative
/// control.
inline FuzzReport preserver_fuzz(const RationalVector& coeffs, std::size_t trials, std::size_t size,
                                 std::uint64_t seed) {
  if (size < 1) throw InvalidArgument("matrix size must be >= 1");
  DensePoly f(coeffs);
  FuzzReport rep;
  rep.seed = seed;
  rep.trials = trials;
  rep.size = size;
  for (std::size_t t = 0; t < trials; ++t) {
    PartialSymMatrix input = random_partial_psd(size, trial_seed(seed, t));
    PartialSymMatrix image = psdcomp::apply_entrywise(input, f);
    auto res = psdcomp::complete_psd(image);
    switch (res.status) {
      case psdcomp::CompletionStatus::Completable: ++rep.completable; break;
      case psdcomp::CompletionStatus::Unknown: ++rep.unknown; break;
      case psdcomp::CompletionStatus::Infeasible: {
        // Re-verify: the certificate block is fully specified and not PSD.
        for (auto i : res.certificate_rows)
          for (auto j : res.certificate_rows)
            if (!image.specified(i, j)) throw InternalError("infeasibility certificate uses an unknown entry");
        if (is_psd_exact(image.values().principal(res.certificate_rows)))
          throw InternalError("infeasibility certificate is PSD");
        if (rep.violations++ == 0) {
          rep.first_violation_input = input;
          rep.first_violation_image = image;
          rep.first_violation_certificate = res.certificate_rows;
        }
        break;
      }
    }
  }
  return rep;
}

inline FuzzReport preserver_fuzz(const PreserverForm& form, std::size_t trials, std::size_t size, std::uint64_t seed) {
  if (!form.nonnegative()) throw PreconditionViolation("preserver form has a negative coefficient");
  return preserver_fuzz(form.c, trials, size, seed);
}

}  // namespace dlp::preservers
