#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "h2e/errors.hpp"

namespace h2e {

/// Arguments at or above this use the asymptotic form. The neglected tail
/// is below e^{-x}/(2x - 2m), i.e. < 3e-15 for m <= 8 at the threshold.
inline constexpr double kBoysAsymptoticThreshold = 30.0;

/// Fills out[m] = F_m(x) for m = 0 .. out.size()-1.
///
/// For small x the highest order comes from the power series
///   F_M(x) = e^{-x} sum_k (2x)^k / ((2M+1)(2M+3)...(2M+2k+1))
/// and lower orders follow by downward recursion, which is stable.
inline void boys_array(double x, std::span<double> out) {
  if (out.empty()) return;
  if (!(x >= 0.0)) throw DomainError("Boys function argument must be >= 0");
  const int top = static_cast<int>(out.size()) - 1;

  if (x >= kBoysAsymptoticThreshold) {
    double f = 0.5 * std::sqrt(std::numbers::pi / x);
    out[0] = f;
    for (int m = 1; m <= top; ++m) {
      f *= (2 * m - 1) / (2.0 * x);
      out[m] = f;
    }
    return;
  }

  const double ex = std::exp(-x);
  double term = 1.0 / (2 * top + 1);
  double sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= 2.0 * x / (2 * top + 2 * k + 1);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  out[top] = ex * sum;
  for (int m = top - 1; m >= 0; --m) out[m] = (2.0 * x * out[m + 1] + ex) / (2 * m + 1);
}

/// F_m(x) = \int_0^1 t^{2m} e^{-x t^2} dt.
inline double boys(int m, double x) {
  if (m < 0) throw DomainError("Boys function order must be >= 0");
  if (!(x >= 0.0)) throw DomainError("Boys function argument must be >= 0");
  if (x == 0.0) return 1.0 / (2 * m + 1);
  constexpr int kStack = 32;
  double buf[kStack];
  if (m < kStack) {
    boys_array(x, std::span<double>(buf, static_cast<std::size_t>(m) + 1));
    return buf[m];
  }
  std::vector<double> v(static_cast<std::size_t>(m) + 1);
  boys_array(x, v);
  return v[m];
}

}  // namespace h2e
