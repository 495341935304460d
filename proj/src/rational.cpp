#include "recomb/rational.hpp"

#include <cctype>

#include "recomb/errors.hpp"

namespace recomb {

namespace {

// Trims ASCII whitespace from both ends.
std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

Int parse_unsigned_int(const std::string& s, const std::string& whole) {
  if (s.empty()) throw validation_error("bad rational '" + whole + "': missing digits");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw validation_error("bad rational '" + whole + "': unexpected character '" +
                             std::string(1, c) + "' (only exact p/q accepted)");
  }
  return Int(s);
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string s = trimmed(text);
  if (s.empty()) throw validation_error("bad rational: empty string");
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = (s[0] == '-');
    s = s.substr(1);
  }
  std::size_t slash = s.find('/');
  Int num, den;
  if (slash == std::string::npos) {
    num = parse_unsigned_int(s, text);
    den = 1;
  } else {
    num = parse_unsigned_int(s.substr(0, slash), text);
    den = parse_unsigned_int(s.substr(slash + 1), text);
    if (den == 0) throw validation_error("bad rational '" + text + "': zero denominator");
  }
  Rat r(num, den);
  if (negative) r = -r;
  return r;
}

std::string format_fraction(const Rat& r) {
  Int num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_decimal(const Rat& r, int digits) {
  if (digits < 0) digits = 0;
  Int num = numerator(r), den = denominator(r);
  bool negative = num < 0;
  if (negative) num = -num;
  Int whole = num / den;
  Int rem = num % den;
  std::string frac;
  frac.reserve(static_cast<std::size_t>(digits));
  for (int i = 0; i < digits; ++i) {
    rem *= 10;
    Int d = rem / den;
    rem %= den;
    frac.push_back(static_cast<char>('0' + static_cast<int>(d)));
  }
  // Round the final place half to even on the exact remainder.
  Int twice = rem * 2;
  bool round_up = twice > den;
  if (twice == den) {
    int last = digits > 0 ? frac.back() - '0' : static_cast<int>(whole % 10);
    round_up = (last % 2) == 1;
  }
  if (round_up) {
    int i = digits - 1;
    for (; i >= 0; --i) {
      if (frac[i] == '9') {
        frac[i] = '0';
      } else {
        ++frac[i];
        break;
      }
    }
    if (i < 0) ++whole;
  }
  std::string out = whole.str();
  if (digits > 0) out += "." + frac;
  if (negative && (whole != 0 || frac.find_first_not_of('0') != std::string::npos))
    out.insert(out.begin(), '-');
  return out;
}

Rat rat_pow(const Rat& base, int exp) {
  if (exp == 0) return Rat(1);
  if (base == 0 && exp < 0) throw validation_error("rat_pow: zero base with negative exponent");
  Rat b = base;
  int e = exp;
  if (e < 0) {
    b = Rat(1) / b;
    e = -e;
  }
  Rat out(1);
  while (e > 0) {
    if (e & 1) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

}  // namespace recomb
