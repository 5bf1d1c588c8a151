#pragma once

// JSON encoding of the library's types. Key order is fixed (ordered_json)
// and integers above 2^53 become decimal strings, so output is consumable
// by double-based JSON parsers and byte-identical across runs.
//
// Depends on the vendored nlohmann header; add vendor/ to the include path.

#include "omf/eigen.hpp"
#include "omf/forms.hpp"
#include "omf/genus.hpp"
#include "omf/hecke.hpp"

#include <json.hpp>

#include <sstream>
#include <string>

namespace omf {

using Json = nlohmann::ordered_json;

inline constexpr i64 kJsonSafeInt = i64(1) << 53;

inline Json json_int(const BigInt& v) {
  if (v > -kJsonSafeInt && v < kJsonSafeInt) return Json(static_cast<i64>(v));
  return Json(v.str());
}

inline Json json_int(i64 v) { return json_int(BigInt(v)); }

inline Json json_rat(const Rat& v) {
  BigInt num = numerator(v), den = denominator(v);
  if (den == 1) return json_int(num);
  return Json(num.str() + "/" + den.str());
}

// "a,b,c,u,v,w"
inline std::string form_literal(const TernaryForm& f) {
  std::ostringstream os;
  os << f.a << "," << f.b << "," << f.c << "," << f.u << "," << f.v << "," << f.w;
  return os.str();
}

inline TernaryForm parse_form_literal(const std::string& s) {
  std::istringstream is(s);
  i64 x[6];
  char sep = ',';
  for (int k = 0; k < 6; ++k) {
    if (k) is >> sep;
    if (!(is >> x[k]) || sep != ',') throw std::invalid_argument("form literal must be a,b,c,u,v,w");
  }
  return TernaryForm{x[0], x[1], x[2], x[3], x[4], x[5]};
}

inline Json gram_json(const Mat3<i64>& g) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 3; ++j) row.push_back(json_int(g[i][j]));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json form_json(const TernaryForm& f) {
  Json j;
  j["form"] = form_literal(f);
  j["coefficients"] = {f.a, f.b, f.c, f.u, f.v, f.w};
  j["discriminant"] = json_int(discriminant(f));
  j["gram"] = gram_json(gram(f));
  return j;
}

inline Json classes_json(const Genus& gen) {
  Json arr = Json::array();
  for (const GenusClass& c : gen.classes) {
    Json j;
    j["gram"] = gram_json(c.lat.gram);
    j["autOrder"] = json_int(c.aut_order);
    arr.push_back(std::move(j));
  }
  return arr;
}

inline Json matrix_json(const HeckeMatrix& m) {
  Json j;
  j["p"] = json_int(m.p);
  Json rows = Json::array();
  for (const auto& row : m.a) {
    Json r = Json::array();
    for (i64 x : row) r.push_back(json_int(x));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline Json eigensystem_json(const EigenSystem& e) {
  Json j;
  j["character"] = json_int(e.character);
  j["dimension"] = e.dimension;
  j["fieldDegree"] = e.field_degree;
  // weight-2 rational newforms correspond to isogeny classes of elliptic curves
  j["ellipticCurveCandidate"] = (e.field_degree == 1);
  if (e.field_degree == 1) {
    Json ev;
    for (auto& [p, a] : e.eigenvalues) ev[std::to_string(p)] = json_rat(a);
    j["eigenvalues"] = std::move(ev);
    Json vec = Json::array();
    for (const Rat& x : e.eigenvector) vec.push_back(json_rat(x));
    j["eigenvector"] = std::move(vec);
  }
  if (!e.block_charpolys.empty()) {
    Json cps;
    for (auto& [p, cp] : e.block_charpolys) {
      Json arr = Json::array();
      for (const BigInt& c : cp) arr.push_back(json_int(c));
      cps[std::to_string(p)] = std::move(arr);
    }
    j["blockCharpolys"] = std::move(cps);
  }
  j["space"] = e.space;
  return j;
}

} // namespace omf
