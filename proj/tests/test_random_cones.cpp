#include <doctest.h>

#include <cmath>
#include <vector>

#include "conic/error.hpp"
#include "conic/exact.hpp"
#include "conic/random_cones.hpp"
#include "oracles.hpp"

using namespace conic;

namespace {

SampleConfig config(int d, int n, std::uint64_t seed = 1) {
  SampleConfig c;
  c.dimension = d;
  c.sample_count = n;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("trial streams are reproducible and distinct") {
  Rng a = trial_rng(3, 7), b = trial_rng(3, 7), c = trial_rng(3, 8), e = trial_rng(4, 7);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != e());
}

TEST_CASE("sampled directions are unit vectors") {
  for (auto dist : {Distribution::gaussian(), Distribution::uniform_sphere(), Distribution::anisotropic({1, 5, 0.2})}) {
    SampleConfig c = config(3, 5);
    c.distribution = dist;
    Rng rng = trial_rng(1, 0);
    const PointSet p = sample_directions(c, 50, rng);
    for (Eigen::Index j = 0; j < p.size(); ++j) CHECK(p.point(j).norm() == doctest::Approx(1.0));
  }
  SampleConfig bad = config(3, 5);
  bad.distribution = Distribution::anisotropic({1, 2});
  Rng rng = trial_rng(1, 0);
  CHECK_THROWS_AS(sample_directions(bad, 5, rng), DomainError);
}

TEST_CASE("conditioned samples lie in an open halfspace") {
  const SampleConfig c = config(3, 8);
  for (int t = 0; t < 50; ++t) {
    Rng rng = trial_rng(9, t);
    const GeneratorSet g = sample_cover_efron(c, rng);
    CHECK(strict_halfspace_feasible(g.points));
    CHECK_FALSE(g.spans_space);
  }
}

TEST_CASE("acceptance guard and rejection cap") {
  // P_{2,40} is far below the minimum acceptance rate.
  Rng rng = trial_rng(1, 0);
  CHECK_THROWS_AS(sample_cover_efron(config(2, 40), rng), AcceptanceTooSmall);
  SampleConfig capped = config(3, 12);
  capped.max_rejections = 0;
  bool sampling_error = false;
  for (int t = 0; t < 20 && !sampling_error; ++t) {
    Rng r = trial_rng(2, t);
    try {
      sample_cover_efron(capped, r);
    } catch (const SamplingError&) {
      sampling_error = true;
    }
  }
  CHECK(sampling_error);
}

TEST_CASE("planar cones always have two rays") {
  const std::vector<int> ks{1};
  for (int n : {2, 3, 5, 9}) {
    const SimulationReport r = simulate_face_counts(config(2, n), ks, 300, 1);
    CHECK(r.faces[0].mean_count == 2.0);
    CHECK(r.faces[0].std_error < 1e-12);
  }
}

TEST_CASE("face counts are reproducible and independent of the worker count") {
  const std::vector<int> ks{1, 2};
  const SimulationReport one = simulate_face_counts(config(3, 6, 42), ks, 400, 1);
  const SimulationReport three = simulate_face_counts(config(3, 6, 42), ks, 400, 3);
  const SimulationReport again = simulate_face_counts(config(3, 6, 42), ks, 400, 2);
  CHECK(one.same_results(three));
  CHECK(one.same_results(again));
  const SimulationReport other = simulate_face_counts(config(3, 6, 43), ks, 400, 1);
  CHECK_FALSE(one.same_results(other));
}

TEST_CASE("face ratios match exact values") {
  const std::vector<int> ks{1, 2};
  const SimulationReport r = simulate_face_counts(config(3, 6, 5), ks, 3000, 0);
  for (const FaceCountStat& s : r.faces) {
    const double exact = to_double(expected_face_ratio(3, 6, s.k));
    CHECK(std::abs(s.mean_ratio - exact) <= 4 * s.std_error);
  }
  // In R^3 every cone has as many rays as 2-faces.
  CHECK(r.faces[0].mean_count == r.faces[1].mean_count);
}

TEST_CASE("face simulation validates its arguments") {
  const std::vector<int> k0{0};
  const std::vector<int> k3{3};
  CHECK_THROWS_AS(simulate_face_counts(config(3, 6), k0, 10), DomainError);
  CHECK_THROWS_AS(simulate_face_counts(config(3, 6), k3, 10), DomainError);
}

TEST_CASE("random subspaces are orthonormal") {
  Rng rng = trial_rng(1, 1);
  const SubspaceBasis s = sample_subspace(5, 3, rng);
  CHECK(s.dimension() == 3);
  CHECK((s.basis().transpose() * s.basis() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
}

TEST_CASE("grassmann and solid angle estimates") {
  const SimulationReport g = estimate_grassmann(config(3, 5, 8), 1, 2000, 5, 0);
  CHECK(std::abs(g.grassmann[0].estimate - 6.0 / 11) <= 4 * g.grassmann[0].std_error);
  const SimulationReport v = estimate_solid_angle(config(3, 5, 8), 2000, 5, 0);
  REQUIRE(v.solid_angle.has_value());
  CHECK(std::abs(v.solid_angle->estimate - 3.0 / 11) <= 4 * v.solid_angle->std_error);
  const SimulationReport v2 = estimate_solid_angle(config(3, 5, 8), 2000, 5, 1);
  CHECK(v.same_results(v2));
}

TEST_CASE("planar solid angle matches the angular oracle") {
  // The mean over trials of the exact opening angle, against the estimator.
  const SampleConfig c = config(2, 4, 3);
  double exact_mean = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    Rng rng = trial_rng(77, t);
    exact_mean += oracle::planar_solid_angle(sample_cover_efron(c, rng).points.points());
  }
  exact_mean /= trials;
  // E v = E 2U_1 / 2 = 3/8 for d = 2, N = 4.
  CHECK(exact_mean == doctest::Approx(0.375).epsilon(0.03));
  const SimulationReport v = estimate_solid_angle(c, 2000, 10, 0);
  CHECK(std::abs(v.solid_angle->estimate - 0.375) <= 4 * v.solid_angle->std_error);
}

TEST_CASE("schlafli cells: count equals the closed form") {
  for (int d = 2; d <= 4; ++d) {
    for (int n = d; n <= 8; ++n) {
      Rng rng = trial_rng(n, d);
      const SchlafliCell cell = sample_schlafli(config(d, n), rng);
      CHECK(cell.cell_count == schlafli_count(n, d));
      CHECK(cell.signs.size() == static_cast<std::size_t>(n));
    }
  }
  for (int t = 0; t < 30; ++t) {
    Rng rng = trial_rng(5, t);
    const SchlafliCell cell = sample_schlafli(config(2, 5), rng);
    CHECK(cell.cell_count == oracle::planar_cells(cell.normals.points()));
  }
  Rng rng = trial_rng(1, 1);
  CHECK_THROWS_AS(sample_schlafli(config(7, 8), rng), DomainError);
}

TEST_CASE("polar of a schlafli cell lies in an open halfspace") {
  for (int t = 0; t < 30; ++t) {
    Rng rng = trial_rng(6, t);
    const SchlafliCell cell = sample_schlafli(config(3, 6), rng);
    CHECK(strict_halfspace_feasible(cell.polar_generators()));
  }
}

TEST_CASE("duality check agrees with exact face numbers") {
  const std::vector<int> ks{1, 2};
  const SimulationReport r = duality_check(config(3, 6, 12), ks, 2000, 0);
  for (const FaceCountStat& s : r.faces) {
    const double exact = to_double(expected_face_ratio(3, 6, s.k));
    CHECK(std::abs(s.mean_ratio - exact) <= 4 * s.std_error);
  }
}

TEST_CASE("unconditioned sampling counts full-space cones as faceless") {
  SampleConfig c = config(3, 6, 4);
  c.mode = SamplingMode::unconditioned;
  const std::vector<int> ks{1};
  const SimulationReport r = simulate_face_counts(c, ks, 3000, 0);
  const double exact = to_double(wendel_probability(2, 5));
  CHECK(std::abs(r.faces[0].mean_ratio - exact) <= 4 * r.faces[0].std_error);
}
