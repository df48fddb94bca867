#include "conic/log_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "conic/error.hpp"

namespace conic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Terms below this fraction of the peak cannot move a double sum.
constexpr double kNegligible = 1e-300;

double log_abs(const mpz_class& z) {
  long exp2 = 0;
  const double mantissa = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(std::abs(mantissa)) + static_cast<double>(exp2) * std::numbers::ln2;
}

}  // namespace

LogReal LogReal::from_double(double x) {
  if (x == 0.0) return zero();
  return {x > 0 ? 1 : -1, std::log(std::abs(x))};
}

LogReal LogReal::from_ratio(const ExactRatio& r) {
  const int s = sgn(r);
  if (s == 0) return zero();
  return {s, log_abs(r.get_num()) - log_abs(r.get_den())};
}

double LogReal::to_double() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }

LogReal operator*(const LogReal& a, const LogReal& b) {
  if (a.sign == 0 || b.sign == 0) return LogReal::zero();
  return {a.sign * b.sign, a.log_magnitude + b.log_magnitude};
}

LogReal operator/(const LogReal& a, const LogReal& b) {
  if (b.sign == 0) throw DomainError("LogReal division by zero");
  if (a.sign == 0) return LogReal::zero();
  return {a.sign * b.sign, a.log_magnitude - b.log_magnitude};
}

double relative_difference(const LogReal& a, const LogReal& b) {
  if (a.sign == 0 && b.sign == 0) return 0.0;
  if (a.sign == 0 || b.sign == 0) return std::numeric_limits<double>::infinity();
  if (a.sign != b.sign) return 2.0;
  return std::abs(std::expm1(a.log_magnitude - b.log_magnitude));
}

double log_sum_exp(std::span<const double> terms) {
  std::vector<double> sorted(terms.begin(), terms.end());
  std::erase_if(sorted, [](double t) { return t == kNegInf; });
  if (sorted.empty()) return kNegInf;
  std::sort(sorted.begin(), sorted.end());
  const double peak = sorted.back();
  double acc = 0.0;
  for (double t : sorted) acc += std::exp(t - peak);
  return peak + std::log(acc);
}

double log_binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return kNegInf;
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double log_binomial_sum(long n, long lo, long hi) {
  if (n < 0) return kNegInf;
  lo = std::max(lo, 0L);
  hi = std::min(hi, n);
  if (lo > hi) return kNegInf;

  // Terms relative to the largest one in range, walking outward from it.
  const long peak = std::clamp(n / 2, lo, hi);
  std::vector<double> rel{1.0};
  double t = 1.0;
  for (long i = peak; i > lo; --i) {
    t *= static_cast<double>(i) / static_cast<double>(n - i + 1);
    if (t < kNegligible) break;
    rel.push_back(t);
  }
  t = 1.0;
  for (long i = peak; i < hi; ++i) {
    t *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (t < kNegligible) break;
    rel.push_back(t);
  }
  std::sort(rel.begin(), rel.end());
  double acc = 0.0;
  for (double r : rel) acc += r;
  return log_binomial(n, peak) + std::log(acc);
}

LogSpaceRatios log_space_ratios(long d, long N, long k) {
  if (k < 1 || d < 1 || k > d - 1 || d > N) {
    throw DomainError("log_space_ratios requires 1 <= k <= d-1 <= N-1");
  }
  LogSpaceRatios out;
  if (d == N) {
    out.face_ratio = LogReal::from_log(0.0);
  } else {
    // 2^k C(N-k, d-k) / C(N, d); the factors of two in C cancel.
    out.face_ratio = LogReal::from_log(static_cast<double>(k) * std::numbers::ln2 +
                                       log_binomial_sum(N - k - 1, 0, d - k - 1) -
                                       log_binomial_sum(N - 1, 0, d - 1));
  }
  // (C(N, d) - C(N, d-k)) / C(N, d) as a ratio of two positive sums.
  out.grassmann = LogReal::from_log(log_binomial_sum(N - 1, d - k, d - 1) -
                                    log_binomial_sum(N - 1, 0, d - 1));
  return out;
}

}  // namespace conic
