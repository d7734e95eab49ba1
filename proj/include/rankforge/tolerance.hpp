#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>

#include "rankforge/scalar.hpp"

namespace rankforge {

// Zero-detection policy. Float-regime decompositions treat an entry x as
// zero when |x| <= zero_tol * max(1, s), where s is the max-absolute entry
// of the matrix being decomposed (absolute test when relative is false).
// The exact regime never consults this: treat-as-zero means == 0.
struct Tolerance {
  double zero_tol = 1e-10;
  bool relative = true;

  double threshold(double scale) const {
    assert(zero_tol >= 0.0);
    return relative ? zero_tol * std::max(1.0, scale) : zero_tol;
  }

  template <typename T>
  bool is_zero(const T& x, double scale = 1.0) const {
    if constexpr (is_exact_v<T>) {
      (void)scale;
      return x == 0;
    } else {
      return std::abs(x) <= threshold(scale);
    }
  }
};

}  // namespace rankforge
