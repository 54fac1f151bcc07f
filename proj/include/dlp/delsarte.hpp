#pragma once

// Delsarte linear-programming bounds for spherical codes whose pairwise
// cosines are constrained to a finite set X or to an interval [-1, cos θ],
// and the minimum-zonal-value formula for the Lovász theta function of the
// sphere graph G(n, t).
//
// For a finite X the Delsarte constant at degree cap N is the optimum of
//
//   maximize  gbar
//   s.t.      gbar + f_1 + ... + f_N = 1                 (g(1) = 1)
//             gbar + sum_k f_k P^_k(t) <= 0   for t in X  (g <= 0 on X)
//             gbar, f_k >= 0
//
// where P^_k is the 1-normalized zonal polynomial of S^{n-1}. Any code with
// cosines in X has at most 1/gbar points.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlp/errors.hpp"
#include "dlp/orthopoly.hpp"
#include "dlp/poly.hpp"
#include "dlp/rational.hpp"
#include "dlp/simplex.hpp"

namespace dlp::delsarte {

/// Sorted set of distinct cosines in [-1, 1). The value 1 is the diagonal
/// of a Gram matrix and is never a constrained angle.
class AngleSet {
 public:
  AngleSet() = default;
  explicit AngleSet(RationalVector values) : v_(std::move(values)) {
    std::sort(v_.begin(), v_.end());
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (v_[i] < Rational(-1) || !(v_[i] < Rational(1)))
        throw InvalidArgument("angle " + v_[i].str() + " is outside [-1, 1)");
      if (i > 0 && v_[i] == v_[i - 1]) throw InvalidArgument("duplicate angle " + v_[i].str());
    }
  }
  static AngleSet parse(std::string_view text) { return AngleSet(parse_rational_list(text)); }

  const RationalVector& values() const { return v_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  bool contains(const Rational& t) const { return std::binary_search(v_.begin(), v_.end(), t); }
  /// True when X = -X.
  bool symmetric() const {
    for (const auto& t : v_)
      if (!contains(-t)) return false;
    return true;
  }
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < v_.size(); ++i) s += (i ? "," : "") + v_[i].str();
    return s;
  }

 private:
  RationalVector v_;
};

struct CapStep {
  unsigned cap;
  std::optional<Rational> gbar;  ///< empty when the LP was infeasible at this cap
};

struct DelsarteCertificate {
  int n = 0;
  AngleSet angles;                ///< constrained cosines (the grid for interval bounds)
  unsigned degree_cap = 0;
  bool even_only = false;         ///< only even degrees were allowed
  Rational gbar;
  RationalVector coeffs;          ///< f_1..f_N
  RationalVector residuals;       ///< g(t) for each t in angles
  std::optional<Rational> bound_raw;  ///< 1/gbar; empty when gbar = 0
  std::optional<mpz_class> bound_floor;

  // Degree-cap stabilization metadata.
  std::vector<CapStep> cap_schedule;
  bool stabilized = false;
  bool budget_exceeded = false;

  // Interval bounds only.
  bool interval = false;
  Rational cos_theta;
  bool certified = false;         ///< g <= 0 proven on all of [-1, cos θ]
  Rational shift;                 ///< constant subtracted from g to reach certification
  unsigned grid_size = 0;

  /// g(t) = gbar + sum_k f_k P^_k(t) as an exact polynomial.
  DensePoly witness_poly() const {
    auto fam = orthopoly::OrthoFamily::gegenbauer(n);
    DensePoly g = DensePoly::constant(gbar);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      if (!coeffs[k].is_zero()) g += orthopoly::normalized_poly(fam, static_cast<unsigned>(k + 1)) * coeffs[k];
    return g;
  }
};

/// g(t) for the certificate's coefficients.
inline Rational witness_value(const DelsarteCertificate& c, const orthopoly::OrthoFamily& fam, const Rational& t) {
  Rational g = c.gbar;
  for (std::size_t k = 0; k < c.coeffs.size(); ++k)
    if (!c.coeffs[k].is_zero()) g += c.coeffs[k] * orthopoly::eval_normalized(fam, static_cast<unsigned>(k + 1), t);
  return g;
}

/// Exact soundness check: normalization, nonnegativity, residuals <= 0 and
/// recomputed, bound fields consistent. Throws InternalError on failure.
inline void verify_certificate(const DelsarteCertificate& c) {
  auto fam = orthopoly::OrthoFamily::gegenbauer(c.n);
  Rational total = c.gbar;
  if (c.gbar.sign() < 0) throw InternalError("negative gbar");
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    if (c.coeffs[k].sign() < 0) throw InternalError("negative Gegenbauer coefficient");
    if (c.even_only && (k + 1) % 2 == 1 && !c.coeffs[k].is_zero()) throw InternalError("odd coefficient in even LP");
    total += c.coeffs[k];
  }
  if (total != Rational(1)) throw InternalError("certificate violates g(1) = 1");
  if (c.residuals.size() != c.angles.size()) throw InternalError("residual count mismatch");
  for (std::size_t i = 0; i < c.angles.size(); ++i) {
    if (witness_value(c, fam, c.angles.values()[i]) != c.residuals[i]) throw InternalError("stale residual");
    if (c.residuals[i].sign() > 0) throw InternalError("certificate positive at a constrained angle");
  }
  if (c.gbar.is_zero()) {
    if (c.bound_raw || c.bound_floor) throw InternalError("bound reported for gbar = 0");
  } else {
    if (!c.bound_raw || *c.bound_raw != c.gbar.inverse()) throw InternalError("bound_raw != 1/gbar");
    if (!c.bound_floor || *c.bound_floor != c.bound_raw->floor()) throw InternalError("bound_floor mismatch");
  }
}

namespace detail {

inline void fill_bound(DelsarteCertificate& c) {
  if (c.gbar.is_zero()) {
    c.bound_raw.reset();
    c.bound_floor.reset();
  } else {
    c.bound_raw = c.gbar.inverse();
    c.bound_floor = c.bound_raw->floor();
  }
}

inline void fill_residuals(DelsarteCertificate& c) {
  auto fam = orthopoly::OrthoFamily::gegenbauer(c.n);
  c.residuals.clear();
  for (const auto& t : c.angles.values()) c.residuals.push_back(witness_value(c, fam, t));
}

/// Solves the Delsarte LP; nullopt when infeasible at this cap.
inline std::optional<DelsarteCertificate> solve(int n, const AngleSet& x, unsigned cap, bool even_only) {
  if (n < 2) throw InvalidArgument("dimension must be >= 2");
  if (x.empty()) throw InvalidArgument("angle set is empty");
  if (cap < 1) throw InvalidArgument("degree cap must be >= 1");
  auto fam = orthopoly::OrthoFamily::gegenbauer(n);

  simplex::LinearProgram lp;
  lp.objective.assign(cap + 1, Rational(0));
  lp.objective[0] = Rational(1);
  RationalVector norm(cap + 1, Rational(1));
  if (even_only)
    for (unsigned k = 1; k <= cap; k += 2) norm[k] = Rational(0);
  lp.add_row(norm, simplex::Relation::Equal, Rational(1));
  for (const auto& t : x.values()) {
    RationalVector row(cap + 1);
    row[0] = Rational(1);
    for (unsigned k = 1; k <= cap; ++k)
      if (!even_only || k % 2 == 0) row[k] = orthopoly::eval_normalized(fam, k, t);
    lp.add_row(std::move(row), simplex::Relation::LessEq, Rational(0));
  }
  // Disallowed odd degrees are pinned to zero.
  if (even_only)
    for (unsigned k = 1; k <= cap; k += 2) {
      RationalVector row(cap + 1);
      row[k] = Rational(1);
      lp.add_row(std::move(row), simplex::Relation::Equal, Rational(0));
    }

  auto out = simplex::solve_lp(lp);
  if (out.status == simplex::LPStatus::Infeasible) return std::nullopt;
  if (out.status != simplex::LPStatus::Optimal) throw InternalError("Delsarte LP is unbounded");

  DelsarteCertificate c;
  c.n = n;
  c.angles = x;
  c.degree_cap = cap;
  c.even_only = even_only;
  c.gbar = out.primal[0];
  c.coeffs.assign(out.primal.begin() + 1, out.primal.end());
  fill_residuals(c);
  fill_bound(c);
  verify_certificate(c);
  return c;
}

}  // namespace detail

/// Delsarte constant at a fixed degree cap. Throws LPInfeasible when no
/// admissible g of degree <= cap exists (e.g. X holds both -1 and a positive
/// cosine and the cap is too small).
inline DelsarteCertificate delsarte_constant(int n, const AngleSet& x, unsigned cap, bool even_only = false) {
  auto c = detail::solve(n, x, cap, even_only);
  if (!c) throw LPInfeasible("no admissible witness of degree <= " + std::to_string(cap));
  return *c;
}

struct StabilizeOptions {
  unsigned start = 0;            ///< 0 selects 2(|X| + 1)
  unsigned step = 4;
  unsigned window = 2;
  unsigned hard_cap = 120;
  bool even_only = false;
};

/// Raises the degree cap until gbar is unchanged over `window` consecutive
/// caps and returns the certificate at the first cap of that run. When the
/// hard cap is reached first, the best certificate so far is returned with
/// budget_exceeded set.
inline DelsarteCertificate delsarte_bound(int n, const AngleSet& x, const StabilizeOptions& opt = {}) {
  if (opt.step < 1 || opt.window < 1) throw InvalidArgument("step and window must be >= 1");
  const unsigned start = opt.start ? opt.start : static_cast<unsigned>(2 * (x.size() + 1));
  std::vector<CapStep> schedule;
  std::vector<DelsarteCertificate> run;  // consecutive feasible caps with equal gbar
  std::optional<DelsarteCertificate> best;
  for (unsigned cap = start; cap <= opt.hard_cap; cap += opt.step) {
    auto c = detail::solve(n, x, cap, opt.even_only);
    schedule.push_back({cap, c ? std::optional<Rational>(c->gbar) : std::nullopt});
    if (!c) {
      run.clear();
      continue;
    }
    if (!run.empty() && run.back().gbar != c->gbar) run.clear();
    if (!best || c->gbar > best->gbar) best = *c;
    run.push_back(*c);
    if (run.size() >= opt.window) {
      DelsarteCertificate out = run.front();
      out.cap_schedule = std::move(schedule);
      out.stabilized = true;
      return out;
    }
  }
  if (!best) throw LPInfeasible("no admissible witness up to the hard degree cap");
  best->cap_schedule = std::move(schedule);
  best->budget_exceeded = true;
  return *best;
}

/// True iff p <= 0 on [lo, hi], proven with Sturm counts and exact signs.
inline bool nonpositive_on(const DensePoly& p, const Rational& lo, const Rational& hi, int depth = 0) {
  if (p.is_zero()) return true;
  if (p(lo).sign() > 0 || p(hi).sign() > 0) return false;
  if (depth > 200) return false;
  auto count = sturm_root_count(p, lo, hi).interior;
  Rational mid = (lo + hi) / Rational(2);
  if (count == 0) return p(mid).sign() <= 0;
  // One distinct root between two strictly negative endpoints has even
  // multiplicity, so p does not change sign there.
  if (count == 1 && p(lo).sign() < 0 && p(hi).sign() < 0) return true;
  if (p(mid).sign() > 0) return false;
  return nonpositive_on(p, lo, mid, depth + 1) && nonpositive_on(p, mid, hi, depth + 1);
}

struct IntervalOptions {
  unsigned grid = 32;     ///< initial number of Chebyshev-spaced constraint points
  unsigned retries = 3;   ///< exchange rounds before falling back to a shift
};

namespace detail {

/// Approximate critical points of p in (-1, c) on a 2^-12 lattice.
inline RationalVector local_maxima(const DensePoly& p, const Rational& c) {
  RationalVector out;
  DensePoly d = p.derivative();
  if (d.is_zero()) return out;
  const Rational width(1, 1L << 16);
  for (auto iv : isolate_real_roots(d)) {
    if (!(iv.hi > Rational(-1)) || !(iv.lo < c)) continue;
    iv = refine_root(d, iv, width);
    Rational mid = (iv.lo + iv.hi) / Rational(2);
    Rational t(mpz_class(std::round(std::ldexp(mid.to_double(), 12))), mpz_class(1) << 12);
    if (t > Rational(-1) && t < c) out.push_back(t);
  }
  return out;
}

}  // namespace detail

/// Chebyshev-spaced rational points on [-1, c], endpoints included exactly.
inline RationalVector chebyshev_grid(const Rational& c, unsigned size) {
  RationalVector pts{Rational(-1), c};
  double lo = -1.0, hi = c.to_double();
  for (unsigned i = 0; i < size; ++i) {
    double x = (lo + hi) / 2 + (hi - lo) / 2 * std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * size));
    Rational r(mpz_class(std::round(std::ldexp(x, 10))), mpz_class(1) << 10);
    if (r > Rational(-1) && r < c) pts.push_back(r);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Classical bound for codes with all cosines in [-1, cos θ]. The LP is
/// solved on a Chebyshev grid; the resulting g is then proven <= 0 on the
/// whole interval. Where g overshoots between grid points its local maxima
/// join the grid and the LP is re-solved. If that still fails after every
/// retry, a rational shift δ >= max g is certified and the witness is
/// rescaled to (g - δ)/(1 - δ), which is exact and sound but slightly weaker.
inline DelsarteCertificate interval_delsarte(int n, const Rational& cos_theta, unsigned cap,
                                             const IntervalOptions& opt = {}) {
  if (!(cos_theta > Rational(-1)) || !(cos_theta < Rational(1)))
    throw InvalidArgument("cos_theta must lie in (-1, 1)");
  std::optional<DelsarteCertificate> last;
  RationalVector grid = chebyshev_grid(cos_theta, opt.grid);
  for (unsigned attempt = 0; attempt <= opt.retries; ++attempt) {
    auto c = delsarte_constant(n, AngleSet(grid), cap);
    c.interval = true;
    c.cos_theta = cos_theta;
    c.grid_size = static_cast<unsigned>(grid.size());
    DensePoly g = c.witness_poly();
    if (nonpositive_on(g, Rational(-1), cos_theta)) {
      c.certified = true;
      verify_certificate(c);
      return c;
    }
    last = std::move(c);
    // Exchange step: add the positive local maxima of g as new constraints.
    bool added = false;
    for (const auto& t : detail::local_maxima(g, cos_theta)) {
      if (g(t).sign() > 0 && std::find(grid.begin(), grid.end(), t) == grid.end()) {
        grid.push_back(t);
        added = true;
      }
    }
    if (!added) break;
    std::sort(grid.begin(), grid.end());
  }

  // Shift fallback: find δ with g - δ <= 0 on the interval.
  DelsarteCertificate c = *last;
  DensePoly g = c.witness_poly();
  Rational max_sample = g(Rational(-1));
  for (unsigned i = 0; i <= 4096; ++i) {
    Rational t = Rational(-1) + (cos_theta + Rational(1)) * Rational(static_cast<long>(i), 4096L);
    max_sample = std::max(max_sample, g(t));
  }
  Rational slack(1, 1L << 30);
  for (int iter = 0; iter < 40; ++iter, slack *= Rational(4)) {
    Rational delta = max_sample + slack;
    if (!(delta < c.gbar)) break;
    if (nonpositive_on(g - DensePoly::constant(delta), Rational(-1), cos_theta)) {
      Rational scale = (Rational(1) - delta).inverse();
      c.gbar = (c.gbar - delta) * scale;
      for (auto& f : c.coeffs) f *= scale;
      c.shift = delta;
      c.certified = true;
      detail::fill_residuals(c);
      detail::fill_bound(c);
      verify_certificate(c);
      return c;
    }
  }
  c.certified = false;
  return c;
}

struct ThetaResult {
  Rational m;                       ///< min_k P^_k(t) over 0 <= k <= kmax
  unsigned k_argmin = 0;            ///< smallest k attaining m
  std::optional<Rational> theta_ratio;  ///< m/(m - 1); theta = ω_n * ratio
  bool conclusive = false;          ///< m < 0
  Rational tail_envelope;           ///< heuristic bound on |P^_k(t)| for k >= kmax
  bool tail_below_min = false;      ///< envelope < |m|: later degrees cannot go lower (heuristic)
  bool heuristic_cutoff = true;
};

/// Scans the normalized zonal values at t for the minimum that determines
/// the theta function of G(n, t): theta = ω_n m/(m - 1).
inline ThetaResult theta_min(int n, const Rational& t, unsigned kmax) {
  if (n < 3) throw InvalidArgument("theta_min needs n >= 3");
  if (!(t.abs() < Rational(1))) throw OutOfDomain("theta_min needs |t| < 1");
  if (kmax < 1) throw InvalidArgument("kmax must be >= 1");
  auto fam = orthopoly::OrthoFamily::gegenbauer(n);
  ThetaResult r;
  r.m = Rational(1);
  r.k_argmin = 0;
  for (unsigned k = 1; k <= kmax; ++k) {
    Rational v = orthopoly::eval_normalized(fam, k, t);
    if (v < r.m) {
      r.m = v;
      r.k_argmin = k;
    }
  }
  r.conclusive = r.m.sign() < 0;
  if (r.conclusive) r.theta_ratio = r.m / (r.m - Rational(1));
  r.tail_envelope = orthopoly::darboux_envelope(n, kmax, t).value;
  r.tail_below_min = r.tail_envelope < r.m.abs();
  return r;
}

}  // namespace dlp::delsarte
