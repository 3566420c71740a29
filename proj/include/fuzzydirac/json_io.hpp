#pragma once

// JSON (de)serialization for the core domain types. Reports use ordered
// JSON objects so identical runs produce byte-identical output.

#include <nlohmann/json.hpp>

#include "fuzzydirac/calculus.hpp"

namespace fuzzy {

using json = nlohmann::ordered_json;

inline json to_json(const Parameters& p) {
  return json{{"lambda_p", p.lambda_p}, {"L", p.truncation_L},
              {"tol", p.tol}};
}

inline Parameters parameters_from_json(const json& j) {
  return Parameters(j.at("lambda_p").get<double>(), j.at("L").get<int>(),
                    j.value("tol", 1e-10));
}

/// AlgebraElement as a list of {"a","b","c","re","im"} term records.
inline json to_json(const AlgebraElement& e) {
  json terms = json::array();
  for (const auto& [m, w] : e.terms())
    terms.push_back(json{{"a", m.a},
                         {"b", m.b},
                         {"c", m.c},
                         {"re", w.real()},
                         {"im", w.imag()}});
  return terms;
}

inline AlgebraElement element_from_json(const json& j, const Parameters& p) {
  TermMap t;
  for (const auto& rec : j) {
    Monomial m{rec.at("a").get<int>(), rec.at("b").get<int>(),
               rec.at("c").get<int>()};
    t[m] += cd(rec.at("re").get<double>(), rec.at("im").get<double>());
  }
  return AlgebraElement(p, std::move(t));
}

inline json to_json(const OneForm& w) {
  return json::array({to_json(w.coeff[0]), to_json(w.coeff[1]),
                      to_json(w.coeff[2])});
}

inline json to_json(const TwoForm& w) {
  return json::array({to_json(w.coeff[0]), to_json(w.coeff[1]),
                      to_json(w.coeff[2])});
}

inline OneForm oneform_from_json(const json& j, const Parameters& p) {
  return OneForm(element_from_json(j.at(0), p), element_from_json(j.at(1), p),
                 element_from_json(j.at(2), p));
}

inline TwoForm twoform_from_json(const json& j, const Parameters& p) {
  TwoForm w(p);
  for (int k = 0; k < 3; ++k) w.coeff[k] = element_from_json(j.at(k), p);
  return w;
}

inline json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

/// Matrix entries as [re, im] pairs or bare reals.
inline Eigen::MatrixXcd matrix_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) return {};
  const auto cols = j.at(0).size();
  Eigen::MatrixXcd m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) {
      const json& e = j.at(r).at(c);
      m(r, c) = e.is_array() ? cd(e.at(0).get<double>(),
                                  e.at(1).get<double>())
                             : cd(e.get<double>(), 0.0);
    }
  return m;
}

}  // namespace fuzzy
