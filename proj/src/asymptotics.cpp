#include "conic/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <string>

#include "conic/error.hpp"

namespace conic {

namespace {

// rho within this distance of a threshold counts as on it.
constexpr double kThresholdTol = 1e-12;

constexpr double kLn2 = std::numbers::ln2;

// x log y with the 0 log 0 = 0 convention.
double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

double log_g(double a) { return kLn2 + xlogy(a, a) + xlogy(1.0 - a, 1.0 - a); }

void require_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

ThresholdPoint::ThresholdPoint(double delta, double rho) : delta_(delta), rho_(rho) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("rho must lie in [0, 1)");
}

double binary_entropy(double x) {
  require_unit_interval(x, "x");
  return -xlogy(x, x) - xlogy(1.0 - x, 1.0 - x);
}

double exponent_G(double delta, double rho) {
  require_unit_interval(delta, "delta");
  require_unit_interval(rho, "rho");
  return binary_entropy(delta) + delta * binary_entropy(rho) - (1.0 - rho * delta) * kLn2;
}

double exponent_G(const ThresholdPoint& p) { return exponent_G(p.delta(), p.rho()); }

ExponentFunctions exponent_functions(double a, double b) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("a must lie in (0, 1)");
  if (!(b >= 0.0 && b < 1.0)) throw DomainError("b must lie in [0, 1)");
  const double ab = a * b;
  const double log_H = xlogy(ab, 2.0 * a) + xlogy(1.0 - ab, 1.0 - ab) - xlogy(a * (1.0 - b), 1.0 - b);
  const double log_g_a = log_g(a);
  const double log_K = log_g_a - log_g(a * (1.0 - b));
  return {std::exp(log_H), std::exp(log_g_a), std::exp(log_K)};
}

double rho_weak(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  return std::max(0.0, 2.0 - 1.0 / delta);
}

RootResult rho_strong(double delta) {
  if (!(delta > 0.5 && delta < 1.0)) throw DomainError("rho_strong is defined for 1/2 < delta < 1");

  constexpr double kLow = 1e-12;
  constexpr double kResidualTol = 1e-12;
  constexpr int kMaxIterations = 200;

  RootResult out;
  double lo = kLow;
  double hi = std::min(2.0 / 3.0, 2.0 - 1.0 / delta);
  out.bracket = {lo, hi};
  const double f_lo = exponent_G(delta, lo);
  const double f_hi = exponent_G(delta, hi);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw SolverError("rho_strong: no sign change on the bracket for delta=" + std::to_string(delta));
  }

  // G_delta is increasing on (0, 2/3), so plain bisection converges to the unique zero.
  double mid = lo;
  double f_mid = f_lo;
  for (int it = 1; it <= kMaxIterations; ++it) {
    mid = std::midpoint(lo, hi);
    f_mid = exponent_G(delta, mid);
    out.iterations = it;
    if (f_mid == 0.0 || mid == lo || mid == hi) break;
    if (f_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.root = mid;
  out.residual = f_mid;
  if (std::abs(out.residual) > kResidualTol) {
    throw SolverError("rho_strong: residual above tolerance for delta=" + std::to_string(delta));
  }
  return out;
}

LimitValue predicted_face_limit(double delta, int k) {
  require_unit_interval(delta, "delta");
  if (k < 1) throw DomainError("k must be positive");
  if (delta > 0.5) return {1.0, false};
  if (delta == 0.5) return {1.0, true};
  return {std::pow(2.0 * delta, k), false};
}

LimitValue predicted_face_limit(const ThresholdPoint& p) {
  const double threshold = rho_weak(p.delta());
  if (std::abs(p.rho() - threshold) <= kThresholdTol) throw AtThreshold("rho equals the weak threshold; no limit is known");
  return {p.rho() < threshold ? 1.0 : 0.0, false};
}

LimitValue predicted_grassmann_limit(double delta, int k) {
  require_unit_interval(delta, "delta");
  if (k < 1) throw DomainError("k must be positive");
  if (delta > 0.5) return {0.0, false};
  if (delta == 0.5) return {0.0, true};
  return {1.0 - std::pow(delta / (1.0 - delta), k), false};
}

LimitValue predicted_grassmann_limit(const ThresholdPoint& p) {
  const double threshold = 0.5 * rho_weak(p.delta());
  if (std::abs(p.rho() - threshold) <= kThresholdTol) throw AtThreshold("rho equals half the weak threshold; no limit is known");
  return {p.rho() < threshold ? 0.0 : 1.0, false};
}

double critical_rate(int k) {
  if (k < 1) throw DomainError("k must be positive");
  return static_cast<double>(k) * std::numbers::inv_sqrtpi;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) * std::numbers::inv_sqrtpi / std::numbers::sqrt2; }

double gaussian_ratio_approximation(long d, long N, long k) {
  if (k < 1 || k >= d || d >= N) throw DomainError("gaussian_ratio_approximation requires 1 <= k < d < N");
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(N);
  const double kk = static_cast<double>(k);
  const double num = normal_cdf((2.0 * dd - nn - kk - 1.0) / std::sqrt(nn - kk - 1.0));
  const double den = normal_cdf((2.0 * dd - nn - 1.0) / std::sqrt(nn - 1.0));
  return num / den;
}

}  // namespace conic
