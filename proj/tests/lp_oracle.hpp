#pragma once

#include <functional>
#include <optional>

#include "dlp/simplex.hpp"

namespace lp_oracle {

using dlp::Rational;
using dlp::RationalVector;

// Oracle: enumerate every basic solution of the constraint system with the
// box |x_j| <= M added, keep the feasible ones, and take the best
// objective. Unboundedness shows up as an optimum that moves with M.
struct Halfspace {
  RationalVector a;
  Rational b;
  bool equality = false;  // a.x = b, otherwise a.x <= b
};

inline std::optional<RationalVector> gauss(std::vector<RationalVector> a, RationalVector b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].is_zero()) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline std::optional<Rational> brute_force(const dlp::simplex::LinearProgram& lp, const Rational& box) {
  const std::size_t n = lp.num_vars();
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    switch (lp.relations[i]) {
      case dlp::simplex::Relation::LessEq: hs.push_back({lp.rows[i], lp.rhs[i]}); break;
      case dlp::simplex::Relation::GreaterEq: {
        RationalVector neg;
        for (const auto& v : lp.rows[i]) neg.push_back(-v);
        hs.push_back({neg, -lp.rhs[i]});
        break;
      }
      case dlp::simplex::Relation::Equal: hs.push_back({lp.rows[i], lp.rhs[i], true}); break;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    RationalVector e(n), ne(n);
    e[j] = Rational(1);
    ne[j] = Rational(-1);
    hs.push_back({e, box});
    hs.push_back({ne, lp.bound(j) == dlp::simplex::VarBound::Free ? box : Rational(0)});
  }
  std::optional<Rational> best;
  std::vector<std::size_t> pick(n);
  // Enumerate n-subsets of the halfspaces as tight sets.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      std::vector<RationalVector> a;
      RationalVector b;
      for (auto i : pick) {
        a.push_back(hs[i].a);
        b.push_back(hs[i].b);
      }
      auto x = gauss(a, b);
      if (!x) return;
      for (const auto& h : hs) {
        Rational lhs(0);
        for (std::size_t j = 0; j < n; ++j) lhs += h.a[j] * (*x)[j];
        if (h.equality ? lhs != h.b : lhs > h.b) return;
      }
      Rational v(0);
      for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * (*x)[j];
      if (!best || v > *best) best = v;
      return;
    }
    for (std::size_t i = start; i < hs.size(); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace lp_oracle
