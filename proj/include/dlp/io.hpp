#pragma once

// JSON encoding for matrices. Rationals are "p/q" strings (integers as "p"),
// unknown entries are null, and the mask is always written, so encoding is
// canonical and decode(encode(m)) == m with byte-identical re-encoding.
//
//   {"dim": 3, "entries": [["1", null, "-1"], ...], "mask": [[true, false, true], ...]}

#include <json.hpp>

#include <string>

#include "dlp/errors.hpp"
#include "dlp/matrix.hpp"
#include "dlp/rational.hpp"

namespace dlp::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return r.str(); }

inline Json to_json(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(r.str());
  return a;
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

inline Json to_json(const PartialSymMatrix& p) {
  Json entries = Json::array(), mask = Json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) {
    Json er = Json::array(), mr = Json::array();
    for (std::size_t j = 0; j < p.dim(); ++j) {
      if (p.specified(i, j)) er.push_back(p.value(i, j).str());
      else er.push_back(nullptr);
      mr.push_back(p.specified(i, j));
    }
    entries.push_back(std::move(er));
    mask.push_back(std::move(mr));
  }
  Json out;
  out["dim"] = p.dim();
  out["entries"] = std::move(entries);
  out["mask"] = std::move(mask);
  return out;
}

inline Json to_json(const SymMatrix& m) { return to_json(PartialSymMatrix::fully_specified(m)); }

/// Decodes the matrix format. "mask" is optional; without it an entry is
/// specified iff it is not null.
inline PartialSymMatrix partial_matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries")) throw ParseError("matrix JSON needs an 'entries' array");
  const Json& e = j.at("entries");
  if (!e.is_array()) throw ParseError("'entries' must be an array");
  const std::size_t n = e.size();
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != n) throw ShapeError("'dim' disagrees with 'entries'");
  const bool has_mask = j.contains("mask");
  if (has_mask && j.at("mask").size() != n) throw ShapeError("'mask' has the wrong number of rows");
  PartialSymMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!e[i].is_array() || e[i].size() != n) throw ShapeError("matrix is not square");
    if (has_mask && j.at("mask")[i].size() != n) throw ShapeError("mask is not square");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      bool spec = has_mask ? j.at("mask")[i][k].get<bool>() : !e[i][k].is_null();
      bool spec_t = has_mask ? j.at("mask")[k][i].get<bool>() : !e[k][i].is_null();
      if (spec != spec_t) throw ShapeError("mask is not symmetric");
      if (!spec) continue;
      if (e[i][k].is_null()) throw ParseError("specified entry is null");
      Rational v = rational_from_json(e[i][k]);
      if (k < i) {
        if (p.value(i, k) != v) throw ShapeError("matrix is not symmetric");
        continue;
      }
      p.specify(i, k, v);
    }
  return p;
}

inline SymMatrix matrix_from_json(const Json& j) {
  PartialSymMatrix p = partial_matrix_from_json(j);
  if (!p.all_specified()) throw ShapeError("matrix has unspecified entries");
  return p.values();
}

}  // namespace dlp::io
