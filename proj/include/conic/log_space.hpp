#pragma once

// Log-magnitude arithmetic for face ratios and Grassmann angles at
// dimensions far beyond what exact rationals can reach in reasonable time.

#include <span>

#include "conic/exact.hpp"

namespace conic {

/// sign * exp(log_magnitude). log_magnitude is meaningless when sign == 0.
struct LogReal {
  int sign = 0;
  double log_magnitude = 0.0;

  static LogReal zero() { return {}; }
  static LogReal from_log(double log_magnitude) { return {1, log_magnitude}; }
  static LogReal from_double(double x);
  static LogReal from_ratio(const ExactRatio& r);

  double to_double() const;
};

LogReal operator*(const LogReal& a, const LogReal& b);
LogReal operator/(const LogReal& a, const LogReal& b);

/// |a/b - 1|, or 0 when both are zero and +inf when exactly one is.
double relative_difference(const LogReal& a, const LogReal& b);

/// log of sum(exp(terms)), accumulated from the smallest term upward.
double log_sum_exp(std::span<const double> terms);

/// log binomial(n, k); -inf outside 0 <= k <= n.
double log_binomial(long n, long k);

/// log sum_{i=lo}^{hi} binomial(n, i); -inf for an empty range.
double log_binomial_sum(long n, long lo, long hi);

struct LogSpaceRatios {
  LogReal face_ratio;
  LogReal grassmann;
};

/// Log-space counterparts of expected_face_ratio and
/// expected_grassmann_angle, usable for d up to about 10^6.
LogSpaceRatios log_space_ratios(long d, long N, long k);

}  // namespace conic
