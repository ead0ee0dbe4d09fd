#include "resil/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "resil/errors.hpp"

namespace resil {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Splits off a leading sign, returning +1 or -1.
int take_sign(std::string& s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    int sign = s[0] == '-' ? -1 : 1;
    s.erase(s.begin());
    return sign;
  }
  return 1;
}

BigInt pow10(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("parse_rational: empty string");

  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    int num_sign = take_sign(num);
    if (!all_digits(num) || !all_digits(den)) {
      throw ParseError("parse_rational: malformed fraction '" + text + "'");
    }
    BigInt d(den);
    if (d == 0) throw ParseError("parse_rational: zero denominator in '" + text + "'");
    return Rational(num_sign * BigInt(num), d);
  }

  std::string s = text;
  int sign = take_sign(s);

  long exponent = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string exp = s.substr(epos + 1);
    s = s.substr(0, epos);
    std::string bare = exp;
    int exp_sign = take_sign(bare);
    if (!all_digits(bare) || bare.size() > 6) {
      throw ParseError("parse_rational: malformed exponent in '" + text + "'");
    }
    exponent = exp_sign * std::atol(bare.c_str());
  }

  std::string digits;
  long frac_digits = 0;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot);
    std::string tail = s.substr(dot + 1);
    if (head.empty() && tail.empty()) {
      throw ParseError("parse_rational: malformed number '" + text + "'");
    }
    if (!head.empty() && !all_digits(head)) {
      throw ParseError("parse_rational: malformed number '" + text + "'");
    }
    if (!tail.empty() && !all_digits(tail)) {
      throw ParseError("parse_rational: malformed number '" + text + "'");
    }
    digits = head + tail;
    frac_digits = static_cast<long>(tail.size());
  } else {
    if (!all_digits(s)) throw ParseError("parse_rational: malformed number '" + text + "'");
    digits = s;
  }

  BigInt mantissa(digits);
  long scale = exponent - frac_digits;
  Rational value(sign * mantissa, 1);
  if (scale > 0) {
    value *= Rational(pow10(static_cast<unsigned>(scale)), 1);
  } else if (scale < 0) {
    value /= Rational(pow10(static_cast<unsigned>(-scale)), 1);
  }
  return value;
}

std::string rational_to_string(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace resil
