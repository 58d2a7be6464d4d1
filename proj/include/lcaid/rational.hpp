#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

#include "lcaid/errors.hpp"

namespace lcaid {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

/// Fractional part in [0, 1).
inline Rational frac(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() < 0 && r.numerator() % r.denominator() != 0) --q;
  return r - Rational(q);
}

/// Always "p/q", including integers ("3/1").
inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational parse_rational(std::string_view text) {
  auto to_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw DomainError("empty rational component");
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(std::string(s), &used);
    } catch (const std::exception&) {
      throw DomainError("malformed rational: " + std::string(text));
    }
    if (used != s.size()) throw DomainError("malformed rational: " + std::string(text));
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(to_int(text));
  const auto den = to_int(text.substr(slash + 1));
  if (den == 0) throw DomainError("zero denominator: " + std::string(text));
  return Rational(to_int(text.substr(0, slash)), den);
}

}  // namespace lcaid
