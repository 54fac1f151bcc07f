#pragma once

// Exact two-phase primal simplex over the rationals with Bland's rule.
// Every outcome is checked against an exact certificate before it is
// returned: Optimal against a dual solution with equal objective,
// Infeasible against a Farkas vector, Unbounded against a primal ray.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dlp/errors.hpp"
#include "dlp/rational.hpp"

namespace dlp::simplex {

enum class Relation { LessEq, Equal, GreaterEq };
enum class VarBound { NonNegative, Free };
enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "Optimal";
    case LPStatus::Infeasible: return "Infeasible";
    case LPStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

/// maximize objective . x  subject to  rows[i] . x (relations[i]) rhs[i].
struct LinearProgram {
  RationalVector objective;
  std::vector<RationalVector> rows;
  std::vector<Relation> relations;
  RationalVector rhs;
  std::vector<VarBound> bounds;  ///< empty means every variable is nonnegative

  std::size_t num_vars() const { return objective.size(); }

  void add_row(RationalVector row, Relation rel, Rational b) {
    rows.push_back(std::move(row));
    relations.push_back(rel);
    rhs.push_back(std::move(b));
  }

  VarBound bound(std::size_t j) const { return bounds.empty() ? VarBound::NonNegative : bounds[j]; }

  void validate() const {
    if (objective.empty()) throw ShapeError("linear program needs at least one variable");
    if (rows.size() != relations.size() || rows.size() != rhs.size())
      throw ShapeError("rows, relations and rhs differ in length");
    if (!bounds.empty() && bounds.size() != objective.size())
      throw ShapeError("bounds length differs from variable count");
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].size() != objective.size())
        throw ShapeError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                         " entries, expected " + std::to_string(objective.size()));
  }
};

struct LPOutcome {
  LPStatus status = LPStatus::Infeasible;
  Rational optimum;        ///< Optimal only
  RationalVector primal;   ///< Optimal: optimal point; Unbounded: a feasible point
  RationalVector dual;     ///< Optimal: dual solution, one entry per row
  RationalVector farkas;   ///< Infeasible: y with sign(y) matching relations, y^T A >= 0 (= 0 on free vars), y.b < 0
  RationalVector ray;      ///< Unbounded: feasible direction with objective . ray > 0
  std::size_t pivots = 0;
};

namespace detail {

inline Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

inline bool relation_holds(const Rational& lhs, Relation rel, const Rational& rhs) {
  switch (rel) {
    case Relation::LessEq: return lhs <= rhs;
    case Relation::Equal: return lhs == rhs;
    case Relation::GreaterEq: return lhs >= rhs;
  }
  return false;
}

inline bool primal_feasible(const LinearProgram& lp, const RationalVector& x) {
  for (std::size_t j = 0; j < lp.num_vars(); ++j)
    if (lp.bound(j) == VarBound::NonNegative && x[j].sign() < 0) return false;
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    if (!relation_holds(dot(lp.rows[i], x), lp.relations[i], lp.rhs[i])) return false;
  return true;
}

/// y^T A restricted to column j.
inline Rational column_dot(const LinearProgram& lp, const RationalVector& y, std::size_t j) {
  Rational s(0);
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    if (!y[i].is_zero() && !lp.rows[i][j].is_zero()) s += y[i] * lp.rows[i][j];
  return s;
}

inline bool dual_signs_ok(const LinearProgram& lp, const RationalVector& y) {
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (lp.relations[i] == Relation::LessEq && y[i].sign() < 0) return false;
    if (lp.relations[i] == Relation::GreaterEq && y[i].sign() > 0) return false;
  }
  return true;
}

}  // namespace detail

/// Checks a dual solution: sign conditions, y^T A >= c (equality on free
/// variables) and y.b == value.
inline bool verify_dual(const LinearProgram& lp, const RationalVector& y, const Rational& value) {
  if (y.size() != lp.rows.size() || !detail::dual_signs_ok(lp, y)) return false;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    Rational col = detail::column_dot(lp, y, j);
    if (lp.bound(j) == VarBound::Free ? col != lp.objective[j] : col < lp.objective[j]) return false;
  }
  return detail::dot(y, lp.rhs) == value;
}

/// Checks a Farkas infeasibility certificate.
inline bool verify_farkas(const LinearProgram& lp, const RationalVector& y) {
  if (y.size() != lp.rows.size() || !detail::dual_signs_ok(lp, y)) return false;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    Rational col = detail::column_dot(lp, y, j);
    if (lp.bound(j) == VarBound::Free ? !col.is_zero() : col.sign() < 0) return false;
  }
  return detail::dot(y, lp.rhs).sign() < 0;
}

/// Checks an unboundedness ray: recession direction of the feasible set with
/// positive objective.
inline bool verify_ray(const LinearProgram& lp, const RationalVector& d) {
  if (d.size() != lp.num_vars()) return false;
  for (std::size_t j = 0; j < lp.num_vars(); ++j)
    if (lp.bound(j) == VarBound::NonNegative && d[j].sign() < 0) return false;
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    if (!detail::relation_holds(detail::dot(lp.rows[i], d), lp.relations[i], Rational(0))) return false;
  return detail::dot(lp.objective, d).sign() > 0;
}

namespace detail {

class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : lp_(lp) {
    const std::size_t m = lp.rows.size();
    // Structural columns: one per nonnegative variable, two per free one.
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
      struct_of_.push_back({j, +1});
      if (lp.bound(j) == VarBound::Free) struct_of_.push_back({j, -1});
    }
    n_struct_ = struct_of_.size();
    sign_.assign(m, 1);
    for (std::size_t i = 0; i < m; ++i)
      if (lp.rhs[i].sign() < 0) sign_[i] = -1;

    std::vector<int> slack_coef(m, 0);
    std::size_t n_slack = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (lp.relations[i] != Relation::Equal) {
        slack_coef[i] = (lp.relations[i] == Relation::LessEq ? 1 : -1) * sign_[i];
        ++n_slack;
      }
    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (slack_coef[i] != 1) ++n_art;

    art_begin_ = n_struct_ + n_slack;
    n_cols_ = art_begin_ + n_art;
    rows_.assign(m, RationalVector(n_cols_ + 1));
    basis_.assign(m, 0);
    init_col_.assign(m, 0);

    std::size_t slack = n_struct_, art = art_begin_;
    for (std::size_t i = 0; i < m; ++i) {
      Rational s(sign_[i]);
      for (std::size_t c = 0; c < n_struct_; ++c) {
        const auto& [var, dir] = struct_of_[c];
        rows_[i][c] = lp.rows[i][var] * Rational(dir) * s;
      }
      rows_[i][n_cols_] = lp.rhs[i] * s;
      if (slack_coef[i] != 0) {
        rows_[i][slack] = Rational(slack_coef[i]);
        if (slack_coef[i] == 1) init_col_[i] = slack;
        ++slack;
      }
      if (slack_coef[i] != 1) {
        rows_[i][art] = Rational(1);
        init_col_[i] = art;
        ++art;
      }
      basis_[i] = init_col_[i];
    }
  }

  bool has_artificials() const { return art_begin_ < n_cols_; }
  bool is_artificial(std::size_t c) const { return c >= art_begin_; }

  void set_costs(RationalVector costs) {
    cost_ = std::move(costs);
    reduced_.assign(n_cols_, Rational(0));
    for (std::size_t c = 0; c < n_cols_; ++c) {
      Rational r = cost_[c];
      for (std::size_t i = 0; i < rows_.size(); ++i)
        if (!cost_[basis_[i]].is_zero() && !rows_[i][c].is_zero()) r -= cost_[basis_[i]] * rows_[i][c];
      reduced_[c] = r;
    }
    value_ = Rational(0);
    for (std::size_t i = 0; i < rows_.size(); ++i) value_ += cost_[basis_[i]] * rows_[i][n_cols_];
  }

  RationalVector phase1_costs() const {
    RationalVector c(n_cols_);
    for (std::size_t k = art_begin_; k < n_cols_; ++k) c[k] = Rational(-1);
    return c;
  }

  RationalVector phase2_costs() const {
    RationalVector c(n_cols_);
    for (std::size_t k = 0; k < n_struct_; ++k) c[k] = lp_.objective[struct_of_[k].first] * Rational(struct_of_[k].second);
    return c;
  }

  /// Runs Bland pivots to optimality. Returns the entering column of an
  /// unbounded direction, if one is found.
  std::optional<std::size_t> optimize(bool allow_artificial_entering) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t c = 0; c < n_cols_; ++c) {
        if (!allow_artificial_entering && is_artificial(c)) continue;
        if (reduced_[c].sign() > 0) {
          enter = c;
          break;
        }
      }
      if (!enter) return std::nullopt;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Rational& a = rows_[i][*enter];
        if (a.sign() <= 0) continue;
        Rational ratio = rows_[i][n_cols_] / a;
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return enter;
      pivot(*leave, *enter);
    }
  }

  /// Pivots zero-level artificials out of the basis where possible.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (std::size_t c = 0; c < art_begin_; ++c)
        if (!rows_[i][c].is_zero()) {
          pivot(i, c);
          break;
        }
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots_;
    Rational inv = rows_[r][c].inverse();
    for (auto& v : rows_[r])
      if (!v.is_zero()) v *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i == r || rows_[i][c].is_zero()) continue;
      Rational f = rows_[i][c];
      for (std::size_t k = 0; k <= n_cols_; ++k)
        if (!rows_[r][k].is_zero()) rows_[i][k] -= f * rows_[r][k];
    }
    if (!reduced_[c].is_zero()) {
      Rational f = reduced_[c];
      for (std::size_t k = 0; k < n_cols_; ++k)
        if (!rows_[r][k].is_zero()) reduced_[k] -= f * rows_[r][k];
      value_ += f * rows_[r][n_cols_];
    }
    basis_[r] = c;
  }

  const Rational& value() const { return value_; }
  std::size_t pivots() const { return pivots_; }

  /// Current basic solution mapped back to the original variables.
  RationalVector primal() const {
    RationalVector std_x(n_cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i) std_x[basis_[i]] = rows_[i][n_cols_];
    return to_original(std_x);
  }

  /// Dual vector for the current cost vector, in original row orientation:
  /// y_i = cost(init_i) - reduced(init_i), flipped by the row sign.
  RationalVector dual() const {
    RationalVector y(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      y[i] = (cost_[init_col_[i]] - reduced_[init_col_[i]]) * Rational(sign_[i]);
    return y;
  }

  RationalVector ray(std::size_t enter) const {
    RationalVector d(n_cols_);
    d[enter] = Rational(1);
    for (std::size_t i = 0; i < rows_.size(); ++i) d[basis_[i]] = -rows_[i][enter];
    return to_original(d);
  }

 private:
  RationalVector to_original(const RationalVector& std_x) const {
    RationalVector x(lp_.num_vars());
    for (std::size_t c = 0; c < n_struct_; ++c)
      if (!std_x[c].is_zero()) x[struct_of_[c].first] += std_x[c] * Rational(struct_of_[c].second);
    return x;
  }

  const LinearProgram& lp_;
  std::vector<std::pair<std::size_t, int>> struct_of_;
  std::size_t n_struct_ = 0, art_begin_ = 0, n_cols_ = 0;
  std::vector<int> sign_;
  std::vector<RationalVector> rows_;
  std::vector<std::size_t> basis_, init_col_;
  RationalVector cost_, reduced_;
  Rational value_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Solves the program exactly. Deterministic: the same input always takes
/// the same pivot sequence.
inline LPOutcome solve_lp(const LinearProgram& lp) {
  lp.validate();
  detail::Tableau tab(lp);
  LPOutcome out;

  if (tab.has_artificials()) {
    tab.set_costs(tab.phase1_costs());
    tab.optimize(true);
    if (tab.value().sign() < 0) {
      out.status = LPStatus::Infeasible;
      out.farkas = tab.dual();
      out.pivots = tab.pivots();
      if (!verify_farkas(lp, out.farkas)) throw InternalError("simplex produced an invalid Farkas certificate");
      return out;
    }
    tab.drive_out_artificials();
  }

  tab.set_costs(tab.phase2_costs());
  auto unbounded = tab.optimize(false);
  out.pivots = tab.pivots();
  out.primal = tab.primal();
  if (!detail::primal_feasible(lp, out.primal)) throw InternalError("simplex produced an infeasible point");
  if (unbounded) {
    out.status = LPStatus::Unbounded;
    out.ray = tab.ray(*unbounded);
    if (!verify_ray(lp, out.ray)) throw InternalError("simplex produced an invalid unbounded ray");
    return out;
  }
  out.status = LPStatus::Optimal;
  out.optimum = tab.value();
  out.dual = tab.dual();
  if (detail::dot(lp.objective, out.primal) != out.optimum)
    throw InternalError("simplex objective does not match the primal point");
  if (!verify_dual(lp, out.dual, out.optimum)) throw InternalError("simplex dual certificate failed");
  return out;
}

}  // namespace dlp::simplex
