#pragma once

#include "resil/rational.hpp"

namespace resil {

// Numeric policy for the two solver modes. Rational runs exactly; double
// compares with an absolute tolerance.
template <class T>
struct NumTraits;

template <>
struct NumTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from_rational(const Rational& r) { return r; }
  static Rational tolerance() { return Rational(0); }
  static const char* mode_name() { return "rational"; }
  static bool eq(const Rational& a, const Rational& b) { return a == b; }
  static bool lt(const Rational& a, const Rational& b) { return a < b; }
};

template <>
struct NumTraits<double> {
  static constexpr bool exact = false;
  static double from_rational(const Rational& r) { return static_cast<double>(r); }
  static double tolerance() { return 1e-9; }
  static const char* mode_name() { return "float"; }
  static bool eq(double a, double b) {
    double d = a - b;
    return d <= tolerance() && -d <= tolerance();
  }
  static bool lt(double a, double b) { return a < b && !eq(a, b); }
};

template <class T>
T num_from(const Rational& r) {
  return NumTraits<T>::from_rational(r);
}

template <class T>
bool num_eq(const T& a, const T& b) {
  return NumTraits<T>::eq(a, b);
}

template <class T>
bool num_lt(const T& a, const T& b) {
  return NumTraits<T>::lt(a, b);
}

template <class T>
bool num_le(const T& a, const T& b) {
  return NumTraits<T>::lt(a, b) || NumTraits<T>::eq(a, b);
}

}  // namespace resil
