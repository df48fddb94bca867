#pragma once

// Limit laws and threshold curves for face numbers and Grassmann angles of
// conditioned random cones as d, N (and possibly k) grow together.
//
// delta is the limiting proportion d/N, rho the limiting proportion k/d.
// Logarithms are natural.

#include <utility>

namespace conic {

/// A (delta, rho) pair with 0 < delta < 1 and 0 <= rho < 1.
class ThresholdPoint {
 public:
  ThresholdPoint(double delta, double rho);
  double delta() const { return delta_; }
  double rho() const { return rho_; }

 private:
  double delta_;
  double rho_;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  std::pair<double, double> bracket;
  int iterations = 0;
};

/// -x log x - (1-x) log(1-x), with 0 log 0 = 0.
double binary_entropy(double x);

/// H(delta) + delta H(rho) - (1 - rho delta) log 2 for delta, rho in [0, 1].
double exponent_G(double delta, double rho);
double exponent_G(const ThresholdPoint& p);

struct ExponentFunctions {
  /// (2a)^{ab} (1-ab)^{1-ab} / (1-b)^{a(1-b)}
  double H_ab;
  /// 2 a^a (1-a)^{1-a}
  double g_a;
  /// g(a) / g(a(1-b))
  double K_ab;
};

/// Requires a in (0, 1) and b in [0, 1). Evaluated in log space.
ExponentFunctions exponent_functions(double a, double b);

/// max{0, 2 - 1/delta}.
double rho_weak(double delta);

/// Unique zero of x -> exponent_G(delta, x) on (0, min{2/3, 2 - 1/delta}),
/// for 1/2 < delta < 1. Bisection; |residual| <= 1e-12.
RootResult rho_strong(double delta);

struct LimitValue {
  double value = 0.0;
  /// delta == 1/2 with fixed k: the limit is only established along N = 2d.
  bool boundary = false;
};

/// Limit of E f_k / binomial(N, k) with k fixed and d/N -> delta in [0, 1].
LimitValue predicted_face_limit(double delta, int k);
/// Limit with k/d -> rho as well; throws AtThreshold when rho == rho_weak(delta).
LimitValue predicted_face_limit(const ThresholdPoint& p);

/// Limit of E 2U_{d-k}(C_N) with k fixed.
LimitValue predicted_grassmann_limit(double delta, int k);
/// Proportional version; the step sits at rho_weak(delta) / 2.
LimitValue predicted_grassmann_limit(const ThresholdPoint& p);

/// k / sqrt(pi).
double critical_rate(int k);

double normal_cdf(double x);
double normal_pdf(double x);

/// Phi((2d-N-k-1)/sqrt(N-k-1)) / Phi((2d-N-1)/sqrt(N-1)), the
/// central-limit proxy for expected_face_ratio(d, N, k). Requires 1 <= k < d < N.
double gaussian_ratio_approximation(long d, long N, long k);

}  // namespace conic
