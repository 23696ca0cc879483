#pragma once

/**
 * @file json_io.hpp
 * @brief JSON encodings used by the CLI.
 *
 * Rationals are strings ("5/6", integers without the denominator), floats
 * are JSON numbers.  Subsets are sorted element arrays like [1,3]; labels
 * are {"t": [...], "s": [...]}; tangent elements list only their nonzero
 * coefficients; matrices are row-major arrays in mask order.
 */

#include <nlohmann/json.hpp>

#include "tangent/anchor.hpp"
#include "tangent/hyperlin.hpp"
#include "tangent/hypercube.hpp"
#include "tangent/ring.hpp"
#include "tangent/talg.hpp"

namespace tangent {

using json = nlohmann::json;

inline json scalar_to_json(const RationalScalar& q) { return q.to_string(); }
inline json scalar_to_json(const FloatScalar& x) { return x.value(); }

template <Ring R>
R scalar_from_json(const json& j);

template <>
inline RationalScalar scalar_from_json<RationalScalar>(const json& j) {
  if (j.is_string()) return RationalScalar::parse(j.get<std::string>());
  if (j.is_number_integer()) return RationalScalar(j.get<long>());
  throw std::invalid_argument("expected a rational (string or integer), got: " + j.dump());
}

template <>
inline FloatScalar scalar_from_json<FloatScalar>(const json& j) {
  if (j.is_number()) return FloatScalar(j.get<double>());
  if (j.is_string()) return FloatScalar::parse(j.get<std::string>());
  throw std::invalid_argument("expected a number, got: " + j.dump());
}

inline json subset_to_json(const SubsetIdx& a) { return json(a.elements()); }

template <Ring R>
json label_to_json(const TimeLabel<R>& label) {
  json t = json::array(), s = json::array();
  for (const auto& x : label.t) t.push_back(scalar_to_json(x));
  for (const auto& x : label.s) s.push_back(scalar_to_json(x));
  return json{{"t", std::move(t)}, {"s", std::move(s)}};
}

template <Ring R>
TimeLabel<R> label_from_json(const json& j) {
  std::vector<R> t, s;
  for (const auto& x : j.at("t")) t.push_back(scalar_from_json<R>(x));
  for (const auto& x : j.at("s")) s.push_back(scalar_from_json<R>(x));
  return TimeLabel<R>(std::move(t), std::move(s));
}

template <Ring R>
json payload_to_json(const R& p) {
  return scalar_to_json(p);
}

template <Ring R>
json payload_to_json(const VecPayload<R>& p) {
  json arr = json::array();
  for (const auto& x : p.v) arr.push_back(scalar_to_json(x));
  return arr;
}

template <Ring R, class P>
json element_to_json(const TangentElement<R, P>& x) {
  json coeffs = json::array();
  for (std::uint32_t mask = 0; mask < x.coeff_count(); ++mask) {
    if (payload_is_zero(x.coeff(mask))) continue;
    coeffs.push_back(json{{"index", subset_to_json(SubsetIdx(mask, x.order()))},
                          {"value", payload_to_json(x.coeff(mask))}});
  }
  return json{{"label", label_to_json(x.label())}, {"coeffs", std::move(coeffs)}};
}

/// Reads {"label":..., "coeffs":[{"index":[...],"value":...}]}; omitted
/// indices are zero.
template <Ring R>
TangentElement<R> element_from_json(const json& j) {
  const TimeLabel<R> label = label_from_json<R>(j.at("label"));
  std::vector<R> coeffs(subset_count(label.order()), R::zero());
  for (const auto& entry : j.at("coeffs")) {
    std::uint32_t mask = 0;
    for (const auto& e : entry.at("index")) {
      const int elem = e.get<int>();
      if (elem < 1 || elem > label.order()) throw std::invalid_argument("coefficient index out of range");
      mask |= std::uint32_t{1} << (elem - 1);
    }
    coeffs[mask] = scalar_from_json<R>(entry.at("value"));
  }
  return TangentElement<R>(label, std::move(coeffs));
}

template <Ring R>
json matrix_to_json(const CubeMatrix<R>& m) {
  json rows = json::array();
  for (std::uint32_t r = 0; r < m.size(); ++r) {
    json row = json::array();
    for (std::uint32_t c = 0; c < m.size(); ++c) row.push_back(scalar_to_json(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.dim()}, {"rows", std::move(rows)}};
}

template <Ring R>
json cube_to_json(const CubeElement<R>& x) {
  json values = json::array();
  for (std::uint32_t a = 0; a < x.values().size(); ++a) values.push_back(scalar_to_json(x.value(a)));
  return json{{"n", x.dim()}, {"values", std::move(values)}};
}

}  // namespace tangent
