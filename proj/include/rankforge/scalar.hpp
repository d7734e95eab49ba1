#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace rankforge {

namespace mp = boost::multiprecision;

// Exact-regime scalars. Expression templates are switched off so that
// arithmetic results are plain values; generic code that writes
// `auto c = a * b;` then behaves identically for Rational and double.
using BigInt = mp::number<mp::cpp_int_backend<>, mp::et_off>;
using Rational =
    mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;

// A scalar regime is "exact" when equality with zero is decidable and
// arithmetic never rounds. Rank decisions in the exact regime are
// unconditional; in the float regime they are tolerance-relative.
template <typename T>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

template <typename T>
inline const char* regime_name() {
  return is_exact_v<T> ? "exact" : "float";
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline double abs_to_double(const Rational& x) {
  return std::abs(x.convert_to<double>());
}
inline double abs_to_double(double x) { return std::abs(x); }

inline Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }
inline double abs_value(double x) { return std::abs(x); }

}  // namespace rankforge
