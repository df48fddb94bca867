#include "conic/exact.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "conic/error.hpp"

namespace conic {

namespace {

ExactRatio pow_ratio(const ExactRatio& base, unsigned long e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  return make_ratio(num, den);
}

ExactRatio ratio_of(long num, long den) { return make_ratio(mpz_class(num), mpz_class(den)); }

[[noreturn]] void domain(const std::string& what) { throw DomainError(what); }

void check_order(long d, long N, long k, long k_min) {
  if (k < k_min || d < 1 || k > d - 1 || d > N) {
    domain("expected 1 <= k <= d-1 <= N-1 (got d=" + std::to_string(d) + ", N=" + std::to_string(N) +
           ", k=" + std::to_string(k) + ")");
  }
}

}  // namespace

ExactRatio make_ratio(const mpz_class& num, const mpz_class& den) {
  if (den == 0) domain("zero denominator");
  ExactRatio r(num, den);
  r.canonicalize();
  return r;
}

ExactCount binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  ExactCount r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

ExactCount binomial_sum(long n, long lo, long hi) {
  if (n < 0) return 0;
  lo = std::max(lo, 0L);
  hi = std::min(hi, n);
  ExactCount sum = 0;
  if (lo > hi) return sum;
  ExactCount term = binomial(n, lo);
  for (long i = lo; i <= hi; ++i) {
    sum += term;
    term *= (n - i);
    mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(i + 1));
  }
  return sum;
}

ExactCount power_of_two(long e) {
  if (e < 0) domain("negative exponent");
  ExactCount r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return r;
}

ExactCount schlafli_count(long n, long d) {
  if (n < 1 || d < 1) domain("schlafli_count requires n >= 1 and d >= 1");
  return 2 * binomial_sum(n - 1, 0, d - 1);
}

ExactRatio wendel_probability(long d, long n) {
  if (n < 1 || d < 1) domain("wendel_probability requires d >= 1 and n >= 1");
  return make_ratio(schlafli_count(n, d), power_of_two(n));
}

ExactRatio expected_face_ratio(long d, long N, long k) {
  check_order(d, N, k, 0);
  if (k == 0) return ExactRatio(1);
  const ExactRatio via_counts =
      make_ratio(power_of_two(k) * schlafli_count(N - k, d - k), schlafli_count(N, d));
  const ExactRatio via_wendel = wendel_probability(d - k, N - k) / wendel_probability(d, N);
  if (via_counts != via_wendel) {
    throw InvariantViolation("face ratio closed forms disagree at d=" + std::to_string(d) +
                             ", N=" + std::to_string(N) + ", k=" + std::to_string(k));
  }
  return via_counts;
}

ExactRatio expected_grassmann_angle(long d, long N, long k) {
  check_order(d, N, k, 1);
  const ExactCount full = schlafli_count(N, d);
  const ExactRatio via_counts = make_ratio(full - schlafli_count(N, d - k), full);

  const ExactCount top = binomial(N - 1, d - 1);
  const ExactRatio num = 1 + make_ratio(binomial_sum(N - 1, d - k, d - 2), top);
  const ExactRatio den = 1 + make_ratio(binomial_sum(N - 1, 0, d - 2), top);
  const ExactRatio via_tails = num / den;
  if (via_counts != via_tails) {
    throw InvariantViolation("Grassmann angle closed forms disagree at d=" + std::to_string(d) +
                             ", N=" + std::to_string(N) + ", k=" + std::to_string(k));
  }
  return via_counts;
}

ExactRatio binomial_tail_ratio(long n, long m) {
  if (m < 0 || m > n) domain("binomial_tail_ratio requires 0 <= m <= n");
  if (m == n) domain("binomial_tail_ratio: binomial(n, m+1) vanishes for m == n");
  return make_ratio(binomial_sum(n, 0, m), binomial(n, m + 1));
}

bool BoundsReport::holds() const {
  if (lower_ell && *lower_ell > ratio) return false;
  return lower_neighbour <= ratio && ratio <= upper;
}

BoundsReport tail_ratio_bounds(long n, long m, std::optional<long> ell) {
  if (n < 1) domain("tail_ratio_bounds requires n >= 1");
  if (m < 0) domain("tail_ratio_bounds requires m >= 0");
  if (2 * m > n + 1) domain("tail_ratio_bounds requires 2m <= n+1");
  if (m == n) domain("tail_ratio_bounds: ratio undefined for m == n");
  if (ell && (*ell < 2 || *ell > m)) domain("tail_ratio_bounds requires 2 <= l <= m");

  BoundsReport report;
  report.ratio = binomial_tail_ratio(n, m);

  const ExactRatio lead = ratio_of(m + 1, n - m);
  if (2 * m < n + 1) {
    const ExactRatio q = ratio_of(m, n - m + 1);
    report.upper = lead * ratio_of(n - m + 1, n - 2 * m + 1) *
                   (1 - pow_ratio(q, static_cast<unsigned long>(m + 1)));
    report.upper_kind = UpperBoundKind::strict;
  } else {
    report.upper = ratio_of((m + 1) * (m + 1), n - m);
    report.upper_kind = UpperBoundKind::boundary;
  }

  report.lower_neighbour = lead * ratio_of(n + 1, n + 1 - m);
  if (ell) {
    const long l = *ell;
    const ExactRatio q = ratio_of(m - l + 1, n - m + l);
    report.lower_ell = ratio_of(m - l + 1, n - 2 * m + 2 * l - 1) *
                       (1 - pow_ratio(q, static_cast<unsigned long>(l + 1)));
  }
  return report;
}

TailCorollaryBounds tail_ratio_corollary(long d, long N) {
  if (d < 2 || d > N) domain("tail_ratio_corollary requires 2 <= d <= N");
  if (N <= 2 * d - 4) domain("tail_ratio_corollary requires N > 2d-4");
  TailCorollaryBounds b;
  b.ratio = binomial_tail_ratio(N - 1, d - 2);
  b.lower = ratio_of(d - 1, N - d + 1);
  b.upper = b.lower * ratio_of(N - d + 2, N - 2 * d + 4);
  return b;
}

FaceRatioDecomposition face_ratio_decomposition(long d, long N, long k) {
  if (k < 1 || k > d - 1 || d >= N) domain("face_ratio_decomposition requires 1 <= k <= d-1 < N");

  const ExactRatio reduced = wendel_probability(d - k, N - k);
  ExactCount weighted = 0;
  for (long j = 1; j <= k; ++j) {
    weighted += binomial(k, j) * binomial_sum(N - k - 1, d - k, d - k + j - 1);
  }
  FaceRatioDecomposition out;
  out.excess = ExactRatio(weighted) / (ExactRatio(power_of_two(N - 1)) * reduced);
  out.excess.canonicalize();

  if (wendel_probability(d, N) / reduced != 1 + out.excess) {
    throw InvariantViolation("Wendel ratio decomposition fails at d=" + std::to_string(d) +
                             ", N=" + std::to_string(N) + ", k=" + std::to_string(k));
  }

  // Correction sum is empty when N-2d+k-1 < 0.
  const ExactCount correction = binomial_sum(N - k - 1, d - k, d - k + (N - 2 * d + k - 1));
  out.wendel_lower = ExactRatio(1, 2) - make_ratio(correction, power_of_two(N - k));
  if (out.wendel_lower > reduced) {
    throw InvariantViolation("Wendel lower bound fails at d=" + std::to_string(d) +
                             ", N=" + std::to_string(N) + ", k=" + std::to_string(k));
  }
  return out;
}

bool BinomialUpperTail::holds() const { return to_double(exact_tail) <= bound; }

BinomialUpperTail binomial_upper_tail_bound(long d, long N) {
  if (N < 2) domain("binomial_upper_tail_bound requires N >= 2");
  if (d < 1 || 2 * d < N - 1) domain("binomial_upper_tail_bound requires d/(N-1) >= 1/2");
  BinomialUpperTail out;
  out.exact_tail = make_ratio(binomial_sum(N - 1, d, N - 1), power_of_two(N - 1));
  const double n1 = static_cast<double>(N - 1);
  const double excess = static_cast<double>(d) / n1 - 0.5;
  out.bound = std::exp(-2.0 * excess * excess * n1);
  return out;
}

double central_binomial_stirling_ratio(long n) {
  if (n < 1) domain("central_binomial_stirling_ratio requires n >= 1");
  const ExactCount c = binomial(2 * n, n);
  long exp2 = 0;
  const double mantissa = mpz_get_d_2exp(&exp2, c.get_mpz_t());
  return std::ldexp(mantissa, static_cast<int>(exp2 - 2 * n)) *
         std::sqrt(std::numbers::pi * static_cast<double>(n));
}

double to_double(const ExactRatio& r) { return r.get_d(); }

}  // namespace conic
