#pragma once

// JSON form of an algebra element:
//   { "theta": [[...]], "coeffs": [ [[k1,...,kn],[re,im]], ... ], "dropped": x }
// Coefficient rows are ordered lexicographically by multi-index.

#include <nctorus/core.hpp>

#include <json.hpp>

namespace nct {

using json = nlohmann::ordered_json;

inline json to_json(const ThetaMatrix& t) {
  json rows = json::array();
  for (int j = 0; j < t.n; ++j) {
    json row = json::array();
    for (int k = 0; k < t.n; ++k) row.push_back(t.th[j][k]);
    rows.push_back(row);
  }
  return rows;
}

inline ThetaMatrix theta_from_json(const json& j) {
  ThetaMatrix t;
  t.n = int(j.size());
  for (int a = 0; a < t.n; ++a)
    for (int b = 0; b < t.n; ++b) t.th[a][b] = j[a][b].get<double>();
  return t;
}

inline json to_json(const AlgebraElement& e) {
  json out;
  out["theta"] = to_json(e.theta);
  json rows = json::array();
  for (auto& [k, c] : e.coeffs) {  // std::map iterates in lex order
    json idx = json::array();
    for (int i = 0; i < k.n; ++i) idx.push_back(k.k[i]);
    rows.push_back(json::array({idx, json::array({c.real(), c.imag()})}));
  }
  out["coeffs"] = rows;
  out["dropped"] = e.dropped_mass;
  return out;
}

inline AlgebraElement element_from_json(const json& j) {
  AlgebraElement e(theta_from_json(j.at("theta")));
  for (auto& row : j.at("coeffs")) {
    MultiIndex k;
    k.n = e.theta.n;
    for (int i = 0; i < k.n; ++i) k.k[i] = row[0][i].get<int>();
    e.coeffs[k] = cplx(row[1][0].get<double>(), row[1][1].get<double>());
  }
  e.dropped_mass = j.at("dropped").get<double>();
  return e;
}

}  // namespace nct
