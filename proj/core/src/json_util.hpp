#pragma once

#include <json.hpp>
#include <optional>

#include "ramcong/engine.hpp"

namespace ramcong::detail {

using Json = nlohmann::ordered_json;

inline Json nat_to_json(ExtendedNat v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

template <typename T>
Json optional_to_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json certain_to_json(const CertainNat& c) {
  Json j;
  j["value"] = nat_to_json(c.value);
  j["certainty"] = to_string(c.certainty);
  j["witness_n"] = optional_to_json(c.witness_n);
  if (c.witness_exponent) {
    j["witness_exponent"] = Json{{"q", c.witness_exponent->q}, {"e", c.witness_exponent->e}};
  } else {
    j["witness_exponent"] = nullptr;
  }
  j["horizon"] = c.horizon;
  j["justification"] = c.justification;
  return j;
}

inline Json u_terms_to_json(const std::vector<UTerm>& terms) {
  Json us = Json::array();
  for (const UTerm& u : terms) {
    us.push_back(Json{{"q", u.q}, {"a", u.a}, {"value", certain_to_json(u.value)}});
  }
  return us;
}

}  // namespace ramcong::detail
