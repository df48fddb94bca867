#include <doctest.h>

#include <cmath>

#include "conic/error.hpp"
#include "conic/exact.hpp"
#include "oracles.hpp"

using namespace conic;

namespace {

ExactRatio q(long num, long den) { return make_ratio(num, den); }

}  // namespace

TEST_CASE("binomials and sums agree with Pascal's triangle") {
  const auto rows = oracle::pascal(70);
  for (int n = 0; n <= 70; ++n) {
    mpz_class running = 0;
    for (int k = 0; k <= n; ++k) {
      CHECK(binomial(n, k) == rows[n][k]);
      running += rows[n][k];
      CHECK(binomial_sum(n, 0, k) == running);
    }
  }
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(5, 6) == 0);
  CHECK(binomial_sum(5, 4, 10) == 6);
  CHECK(binomial_sum(5, 3, 2) == 0);
  CHECK(power_of_two(70) == mpz_class("1180591620717411303424"));
}

TEST_CASE("make_ratio rejects a zero denominator") {
  CHECK_THROWS_AS(make_ratio(1, 0), DomainError);
  CHECK(make_ratio(6, 4) == q(3, 2));
}

TEST_CASE("schlafli counts match deletion-restriction") {
  const oracle::CellCounts cells(60);
  for (int n = 1; n <= 60; ++n) {
    for (int d = 1; d <= 60; ++d) {
      CHECK(schlafli_count(n, d) == cells(n, d));
    }
  }
  CHECK(schlafli_count(3, 2) == 6);
  CHECK(schlafli_count(4, 3) == 14);
  CHECK(schlafli_count(3, 5) == 8);
}

TEST_CASE("wendel probability") {
  const oracle::CellCounts cells(60);
  CHECK(wendel_probability(2, 3) == q(3, 4));
  CHECK(wendel_probability(1, 5) == q(1, 16));
  CHECK(wendel_probability(4, 4) == 1);
  for (int d = 2; d <= 40; ++d) {
    for (int n = d + 1; n <= 60; ++n) CHECK(wendel_probability(d, n) == cells.wendel(d, n));
  }
  CHECK_THROWS_AS(wendel_probability(0, 3), DomainError);
}

TEST_CASE("face ratios: frozen values") {
  CHECK(expected_face_ratio(2, 4, 1) == q(1, 2));
  CHECK(expected_face_ratio(3, 5, 1) == q(8, 11));
  CHECK(expected_face_ratio(3, 5, 2) == q(4, 11));
  CHECK(expected_face_ratio(4, 8, 1) == q(11, 16));
  CHECK(expected_face_ratio(4, 8, 2) == q(3, 8));
  CHECK(expected_face_ratio(4, 8, 3) == q(1, 8));
  CHECK(expected_face_ratio(5, 10, 1) == q(93, 128));
  CHECK(expected_face_ratio(5, 10, 2) == q(29, 64));
  CHECK(expected_face_ratio(5, 10, 3) == q(7, 32));
  CHECK(expected_face_ratio(5, 10, 4) == q(1, 16));
  CHECK(to_double(expected_face_ratio(30, 60, 2)) == doctest::Approx(0.7913664277791806).epsilon(1e-15));
  CHECK(to_double(expected_face_ratio(30, 40, 1)) == doctest::Approx(0.99970332557214).epsilon(1e-13));
  CHECK(expected_face_ratio(7, 12, 0) == 1);
}

TEST_CASE("face ratio equals a ratio of Wendel probabilities") {
  const oracle::CellCounts cells(40);
  for (int N = 3; N <= 40; ++N) {
    for (int d = 2; d < N; ++d) {
      for (int k = 1; k < d; ++k) {
        CHECK(expected_face_ratio(d, N, k) == cells.wendel(d - k, N - k) / cells.wendel(d, N));
      }
    }
  }
}

TEST_CASE("planar cones have exactly two rays") {
  for (int N = 2; N <= 40; ++N) CHECK(expected_face_ratio(2, N, 1) * N == 2);
}

TEST_CASE("face ratio domain") {
  CHECK_THROWS_AS(expected_face_ratio(5, 3, 1), DomainError);
  CHECK_THROWS_AS(expected_face_ratio(3, 5, 3), DomainError);
  CHECK_THROWS_AS(expected_face_ratio(3, 5, -1), DomainError);
}

TEST_CASE("grassmann angles: frozen values") {
  CHECK(expected_grassmann_angle(2, 3, 1) == q(2, 3));
  CHECK(expected_grassmann_angle(3, 3, 1) == q(1, 4));
  CHECK(expected_grassmann_angle(2, 2, 1) == q(1, 2));
  CHECK(expected_grassmann_angle(3, 5, 1) == q(6, 11));
  CHECK(expected_grassmann_angle(3, 5, 2) == q(10, 11));
  CHECK(expected_grassmann_angle(4, 8, 1) == q(35, 64));
  CHECK(expected_grassmann_angle(4, 8, 2) == q(7, 8));
  CHECK(expected_grassmann_angle(4, 8, 3) == q(63, 64));
  CHECK(expected_grassmann_angle(5, 10, 1) == q(63, 128));
  CHECK(expected_grassmann_angle(5, 10, 2) == q(105, 128));
  CHECK(expected_grassmann_angle(5, 10, 3) == q(123, 128));
  CHECK(expected_grassmann_angle(5, 10, 4) == q(255, 256));
  CHECK_THROWS_AS(expected_grassmann_angle(3, 5, 0), DomainError);
}

TEST_CASE("grassmann angle increases with k and stays in [0, 1]") {
  for (int N = 3; N <= 30; ++N) {
    for (int d = 2; d < N; ++d) {
      ExactRatio prev = 0;
      for (int k = 1; k < d; ++k) {
        const ExactRatio g = expected_grassmann_angle(d, N, k);
        CHECK(g > prev);
        CHECK(g <= 1);
        prev = g;
      }
    }
  }
}

TEST_CASE("binomial tail ratio") {
  CHECK(binomial_tail_ratio(10, 4) == q(193, 126));
  CHECK(binomial_tail_ratio(5, 0) == q(1, 5));
  CHECK_THROWS_AS(binomial_tail_ratio(5, 5), DomainError);
  CHECK_THROWS_AS(binomial_tail_ratio(5, -1), DomainError);
}

TEST_CASE("tail ratio sandwich on the full grid") {
  long checked = 0;
  for (long n = 1; n <= 120; ++n) {
    for (long m = 0; 2 * m <= n + 1 && m < n; ++m) {
      CHECK(tail_ratio_bounds(n, m).holds());
      for (long ell = 2; ell <= std::min<long>(m, 6); ++ell) {
        const BoundsReport r = tail_ratio_bounds(n, m, ell);
        CHECK(r.lower_ell.has_value());
        CHECK(r.holds());
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
  CHECK(tail_ratio_bounds(9, 5).upper_kind == UpperBoundKind::boundary);
  CHECK(tail_ratio_bounds(20, 5).upper_kind == UpperBoundKind::strict);
  CHECK_THROWS_AS(tail_ratio_bounds(10, 6), DomainError);
}

TEST_CASE("tail ratio corollary") {
  for (long d = 2; d <= 60; ++d) {
    for (long N = std::max(d + 1, 2 * d - 3); N <= 120; ++N) CHECK(tail_ratio_corollary(d, N).holds());
  }
  CHECK_THROWS_AS(tail_ratio_corollary(10, 16), DomainError);
}

TEST_CASE("tail ratio along N = 4d approaches 1/2") {
  double prev = 1.0;
  for (long d : {10, 20, 40, 80, 160}) {
    const double err = std::abs(to_double(binomial_tail_ratio(4 * d - 1, d - 2)) - 0.5);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("face ratio decomposition") {
  for (long N = 3; N <= 40; ++N) {
    for (long d = 2; d < N; ++d) {
      for (long k = 1; k < d; ++k) {
        const FaceRatioDecomposition dec = face_ratio_decomposition(d, N, k);
        CHECK(dec.excess >= 0);
        CHECK(1 / (1 + dec.excess) == expected_face_ratio(d, N, k));
      }
    }
  }
}

TEST_CASE("binomial upper tail bound") {
  const BinomialUpperTail a = binomial_upper_tail_bound(3, 5);
  CHECK(a.exact_tail == q(5, 16));
  CHECK(a.bound == doctest::Approx(std::exp(-0.5)));
  CHECK(a.holds());
  const BinomialUpperTail b = binomial_upper_tail_bound(4, 6);
  CHECK(b.exact_tail == q(6, 32));
  CHECK(b.bound == doctest::Approx(std::exp(-0.9)));
  CHECK(binomial_upper_tail_bound(11, 12).exact_tail == q(1, 2048));
  CHECK_THROWS_AS(binomial_upper_tail_bound(2, 10), DomainError);
  for (long N = 2; N <= 200; ++N) {
    for (long d = (N - 1 + 1) / 2; d <= N - 1; ++d) {
      if (2 * d >= N - 1 && d >= 1) CHECK(binomial_upper_tail_bound(d, N).holds());
    }
  }
}

TEST_CASE("central binomial ratio climbs toward 1") {
  double prev = 0;
  for (long n = 50; n <= 400; n += 10) {
    const double r = central_binomial_stirling_ratio(n);
    CHECK(r >= 0.98);
    CHECK(r <= 1.0);
    CHECK(r > prev);
    prev = r;
  }
}
