#pragma once
// ============================================================================
// gstl/rational.hpp — exact rational scalars for geometry and thresholds
// ============================================================================
//
// Box coordinates and the neighbor-derivation threshold epsilon are kept as
// exact rationals so that interval classification never depends on floating
// point rounding.  boost::rational supplies the arithmetic; this header adds
// text parsing ("3", "-3/4", "0.25") and canonical printing.

#include <boost/rational.hpp>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gstl {

using Rat = boost::rational<long long>;

inline std::string to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Accepts integers ("7", "-3"), fractions ("3/4", "-1/2") and finite
// decimals ("0.25", "-1.5").  Throws std::invalid_argument on anything else.
inline Rat parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  auto parse_ll = [](const std::string& t) -> long long {
    if (t.empty()) throw std::invalid_argument("bad rational literal");
    std::size_t pos = 0;
    long long v = std::stoll(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("bad rational literal: " + t);
    return v;
  };

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    long long num = parse_ll(s.substr(0, slash));
    long long den = parse_ll(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(num, den);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    bool neg = !s.empty() && s[0] == '-';
    std::string head = s.substr(0, dot);
    std::string tail = s.substr(dot + 1);
    if (tail.empty()) throw std::invalid_argument("bad rational literal: " + s);
    for (char c : tail)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("bad rational literal: " + s);
    long long ipart = head.empty() || head == "-" || head == "+" ? 0 : parse_ll(head);
    long long scale = 1;
    for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
    long long frac = tail.empty() ? 0 : parse_ll(tail);
    Rat mag = Rat(std::llabs(ipart), 1) + Rat(frac, scale);
    return neg || ipart < 0 ? -mag : mag;
  }
  return Rat(parse_ll(s), 1);
}

}  // namespace gstl
