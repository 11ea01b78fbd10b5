#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace flatspin {

// All arithmetic in this library is exact: arbitrary-precision integers and
// reduced rationals. Circle-group values are stored additively as rationals
// in [0,1); the multiplicative value is exp(2*pi*i*q), so -1 is the angle 1/2.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

[[noreturn]] inline void fail(const std::string& msg) {
  throw std::runtime_error(msg);
}

inline bool is_integer(const Rat& q) { return denominator(q) == 1; }

inline Int floor_div(const Int& num, const Int& den) {
  Int q = num / den;  // truncates toward zero
  if (q * den != num && ((num < 0) != (den < 0)))
    --q;
  return q;
}

/// Representative of q modulo 1 in [0, 1).
inline Rat mod1(const Rat& q) {
  Int f = floor_div(numerator(q), denominator(q));
  return q - Rat(f);
}

inline std::string to_string(const Int& v) { return v.str(); }

/// "p/q" in lowest terms, or just "p" for integers.
inline std::string to_string(const Rat& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1)
    s += "/" + denominator(q).str();
  return s;
}

inline Int parse_integer(const std::string& text) {
  std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+'));
  if (text.size() == start)
    fail("malformed rational: '" + text + "'");
  for (std::size_t i = start; i < text.size(); ++i)
    if (text[i] < '0' || text[i] > '9')
      fail("malformed rational: '" + text + "'");
  return Int(text);
}

inline Rat parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos)
    return Rat(parse_integer(text));
  Int num = parse_integer(text.substr(0, slash));
  Int den = parse_integer(text.substr(slash + 1));
  if (den == 0)
    fail("rational with zero denominator: '" + text + "'");
  return Rat(num, den);
}

}  // namespace flatspin
