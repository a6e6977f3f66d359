#pragma once

#include <gmpxx.h>

#include "json.hpp"
#include <string>

namespace gbbm {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational abs(const Rational& q) { return ::abs(q); }

/// {num, den} as decimal strings so that exactness survives serialization.
inline nlohmann::json rational_to_json(const Rational& q) {
  return nlohmann::json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

inline Rational rational_from_json(const nlohmann::json& j) {
  Rational q(Integer(j.at("num").get<std::string>()), Integer(j.at("den").get<std::string>()));
  q.canonicalize();
  return q;
}

}  // namespace gbbm
