#pragma once

#include "resil/numeric.hpp"

namespace resil {

// A disturbance count or frequency extended with omega (finite counts never
// suffice) and Never (no amount of disturbance breaks the strategy).
template <class T>
struct ExtendedCount {
  enum class Tag { Finite, Omega, Never };
  Tag tag = Tag::Never;
  T value{};

  static ExtendedCount finite(T v) { return {Tag::Finite, std::move(v)}; }
  static ExtendedCount omega() { return {Tag::Omega, T{}}; }
  static ExtendedCount never() { return {Tag::Never, T{}}; }

  bool is_finite() const { return tag == Tag::Finite; }
  bool is_omega() const { return tag == Tag::Omega; }
  bool is_never() const { return tag == Tag::Never; }
};

// Transient count paired with the long-run disturbance frequency. Coupling
// invariants: finite transient forces frequency 0; transient Never iff
// frequency Never; positive frequency forces transient omega.
template <class T>
struct BreakingPoint {
  ExtendedCount<T> transient = ExtendedCount<T>::never();
  ExtendedCount<T> frequency = ExtendedCount<T>::never();
  // False when the reported value is an infimum no strategy attains.
  bool attained = true;

  static BreakingPoint finite(T transient_value) {
    return {ExtendedCount<T>::finite(std::move(transient_value)),
            ExtendedCount<T>::finite(T{}), true};
  }
  static BreakingPoint at_frequency(T freq) {
    return {ExtendedCount<T>::omega(), ExtendedCount<T>::finite(std::move(freq)), true};
  }
  static BreakingPoint unbreakable() {
    return {ExtendedCount<T>::never(), ExtendedCount<T>::never(), true};
  }
};

// Total order on breaking points: finite transient counts first (smaller
// count = easier to break), then omega ordered by frequency, then Never.
// Returns -1, 0, or +1.
template <class T>
int compare_breaking_points(const BreakingPoint<T>& a, const BreakingPoint<T>& b) {
  auto rank = [](const BreakingPoint<T>& x) {
    switch (x.transient.tag) {
      case ExtendedCount<T>::Tag::Finite: return 0;
      case ExtendedCount<T>::Tag::Omega: return 1;
      default: return 2;
    }
  };
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra == 0) {
    if (num_lt(a.transient.value, b.transient.value)) return -1;
    if (num_lt(b.transient.value, a.transient.value)) return 1;
    return 0;
  }
  if (ra == 1) {
    bool fa = a.frequency.is_finite(), fb = b.frequency.is_finite();
    if (fa && fb) {
      if (num_lt(a.frequency.value, b.frequency.value)) return -1;
      if (num_lt(b.frequency.value, a.frequency.value)) return 1;
      return 0;
    }
    if (fa != fb) return fa ? -1 : 1;
  }
  return 0;
}

}  // namespace resil
