#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace resil {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p", "p/q", or decimal/scientific notation ("0.25", "1e-4") into an
// exact rational. Throws ParseError on anything else.
Rational parse_rational(const std::string& text);

// Canonical form: "p" for integers, "p/q" in lowest terms otherwise.
std::string rational_to_string(const Rational& value);

}  // namespace resil
