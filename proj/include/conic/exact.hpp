#pragma once

// Exact evaluation of the closed-form combinatorics of random polyhedral
// cones: Schlafli counts, Wendel probabilities, expected face ratios and
// Grassmann angles, together with the binomial-sum identities and
// inequalities those formulas are analysed with.
//
// Conventions: binomial(a, b) == 0 for b < 0 or b > a, and every empty sum
// is zero. All rationals are kept in lowest terms.

#include <gmpxx.h>

#include <optional>

namespace conic {

using ExactCount = mpz_class;
using ExactRatio = mpq_class;

/// Reduced rational num/den; throws DomainError when den == 0.
ExactRatio make_ratio(const mpz_class& num, const mpz_class& den);

ExactCount binomial(long n, long k);

/// Sum of binomial(n, i) for lo <= i <= hi (clipped to [0, n]).
ExactCount binomial_sum(long n, long lo, long hi);

ExactCount power_of_two(long e);

/// Number of full-dimensional cells cut out by n generic central
/// hyperplanes in R^d: 2 * sum_{i<d} binomial(n-1, i). Equals 2^n when n <= d.
ExactCount schlafli_count(long n, long d);

/// Probability that n symmetric random vectors in R^d fail to positively
/// span R^d, schlafli_count(n, d) / 2^n. Defined (as 1) for n <= d.
ExactRatio wendel_probability(long d, long n);

/// E f_k(C_N) / binomial(N, k) for the conditioned random cone. Requires
/// 0 <= k <= d-1 <= N-1. Both closed forms are evaluated and must agree.
ExactRatio expected_face_ratio(long d, long N, long k);

/// E 2U_{d-k}(C_N). Requires 1 <= k <= d-1 <= N-1. Evaluated through the
/// Schlafli-count difference and through the normalised-tail form; the two
/// must agree.
ExactRatio expected_grassmann_angle(long d, long N, long k);

/// sum_{j<=m} binomial(n, j) / binomial(n, m+1), for 0 <= m < n.
ExactRatio binomial_tail_ratio(long n, long m);

enum class UpperBoundKind { strict, boundary };

struct BoundsReport {
  ExactRatio ratio;
  /// Present when an l with 2 <= l <= m was supplied.
  std::optional<ExactRatio> lower_ell;
  /// (m+1)/(n-m) * (n+1)/(n+1-m).
  ExactRatio lower_neighbour;
  ExactRatio upper;
  UpperBoundKind upper_kind;

  bool holds() const;
};

/// Upper and lower bounds for binomial_tail_ratio(n, m) with 2m <= n+1.
/// `ell` selects the geometric lower bound built from the top ell+1 terms.
BoundsReport tail_ratio_bounds(long n, long m, std::optional<long> ell = std::nullopt);

struct TailCorollaryBounds {
  ExactRatio lower;
  ExactRatio ratio;
  ExactRatio upper;
  bool holds() const { return lower <= ratio && ratio <= upper; }
};

/// (d-1)/(N-d+1) <= binomial_tail_ratio(N-1, d-2) <= (d-1)/(N-d+1) * (N-d+2)/(N-2d+4),
/// valid for d >= 2 and N > 2d-4.
TailCorollaryBounds tail_ratio_corollary(long d, long N);

struct FaceRatioDecomposition {
  /// P_{d,N} / P_{d-k,N-k} = 1 + excess.
  ExactRatio excess;
  /// Lower bound for P_{d-k,N-k}: 1/2 - 2^{-(N-k)} sum_{r=0}^{N-2d+k-1} binomial(N-k-1, d-k+r).
  ExactRatio wendel_lower;
};

/// Requires 1 <= k <= d-1 < N. Throws InvariantViolation if the
/// decomposition or the lower bound fails.
FaceRatioDecomposition face_ratio_decomposition(long d, long N, long k);

struct BinomialUpperTail {
  /// P(Bin(N-1, 1/2) >= d).
  ExactRatio exact_tail;
  /// exp(-2 (d/(N-1) - 1/2)^2 (N-1)).
  double bound;
  bool holds() const;
};

/// Requires N >= 2 and d/(N-1) >= 1/2.
BinomialUpperTail binomial_upper_tail_bound(long d, long N);

/// binomial(2n, n) * sqrt(pi n) / 4^n, which tends to 1 from below.
double central_binomial_stirling_ratio(long n);

double to_double(const ExactRatio& r);

}  // namespace conic
