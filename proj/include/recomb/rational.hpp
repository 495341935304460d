#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace recomb {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Parses "p/q" or a plain integer, with optional sign. Rejects float syntax
// ('.', 'e') and zero denominators; all inputs stay exact.
Rat parse_rational(const std::string& text);

// "p/q", or just "p" when the denominator is 1.
std::string format_fraction(const Rat& r);

// Fixed-point decimal rendering with `digits` places after the point, computed
// by exact long division; the last place rounds half to even. Annotation only,
// never parsed back.
std::string format_decimal(const Rat& r, int digits = 12);

// Integer power; exp may be negative (base must be nonzero then).
Rat rat_pow(const Rat& base, int exp);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

}  // namespace recomb
