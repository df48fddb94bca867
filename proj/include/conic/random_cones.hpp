#pragma once

// Monte Carlo for random polyhedral cones: conditioned (Cover-Efron)
// sampling by rejection, uniformly chosen cells of random central
// hyperplane arrangements, and estimators for face counts, Grassmann angles
// and solid angles.
//
// Trial t of a run draws from its own stream derived from (seed, t), and
// per-trial results are reduced in trial order, so reports do not depend on
// the worker count.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "conic/exact.hpp"
#include "conic/geometry.hpp"

namespace conic {

enum class DistributionKind { gaussian, uniform_sphere, anisotropic_gaussian };

/// An even law on R^d that gives hyperplanes through the origin mass zero.
struct Distribution {
  DistributionKind kind = DistributionKind::gaussian;
  /// Per-coordinate standard deviations for anisotropic_gaussian.
  std::vector<double> scales;

  static Distribution gaussian() { return {}; }
  static Distribution uniform_sphere() { return {DistributionKind::uniform_sphere, {}}; }
  static Distribution anisotropic(std::vector<double> scales) {
    return {DistributionKind::anisotropic_gaussian, std::move(scales)};
  }
};

enum class SamplingMode {
  /// Condition on the positive hull not being R^d.
  conditioned,
  /// No conditioning; a cone equal to R^d counts as having no proper faces.
  unconditioned,
};

struct SampleConfig {
  int dimension = 2;
  int sample_count = 4;
  Distribution distribution;
  SamplingMode mode = SamplingMode::conditioned;
  std::uint64_t seed = 0;
  long max_rejections = 1'000'000;
};

inline constexpr double kMinAcceptance = 1e-6;

using Rng = std::mt19937_64;

/// Independent stream for trial `stream` of a run seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t stream);

/// n i.i.d. unit vectors from config.distribution.
PointSet sample_directions(const SampleConfig& config, int n, Rng& rng);

struct GeneratorSet {
  PointSet points;
  long rejections_used = 0;
  /// Only possible in unconditioned mode.
  bool spans_space = false;
};

/// Rejection sampler for the conditioned cone with config.sample_count
/// generators. Throws AcceptanceTooSmall when the Wendel probability is
/// below kMinAcceptance and SamplingError past config.max_rejections.
GeneratorSet sample_cover_efron(const SampleConfig& config, Rng& rng);

/// sample_cover_efron in conditioned mode, a single unconditioned draw otherwise.
GeneratorSet sample_cone(const SampleConfig& config, Rng& rng);

struct FaceCountStat {
  int k = 0;
  double subsets = 0;  // binomial(N, k)
  double mean_count = 0;
  double mean_ratio = 0;
  double std_error = 0;
  double p_all_faces = 0;
};

struct AngleStat {
  int k = 0;
  double estimate = 0;
  double std_error = 0;
};

struct SimulationReport {
  SampleConfig config;
  long trials = 0;
  long failed_trials = 0;
  long total_rejections = 0;
  double acceptance_rate = 1.0;
  std::vector<FaceCountStat> faces;
  /// Estimates of E 2U_{d-k}.
  std::vector<AngleStat> grassmann;
  /// Estimate of the expected solid angle.
  std::optional<AngleStat> solid_angle;
  double elapsed_seconds = 0;

  /// Equality of everything except elapsed time.
  bool same_results(const SimulationReport& other) const;
};

/// Counts k-faces by testing every k-subset in lexicographic order.
/// Requires 1 <= k <= d-1, k <= N, and binomial(N, max k) <= 10^6.
/// workers == 0 selects the hardware concurrency.
SimulationReport simulate_face_counts(const SampleConfig& config, std::span<const int> ks, long trials,
                                      int workers = 0);

/// Estimates E 2U_{d-k} by hitting the cone with uniform random
/// k-dimensional subspaces.
SimulationReport estimate_grassmann(const SampleConfig& config, int k, long trials, int subspaces_per_trial,
                                    int workers = 0);

/// Estimates the expected solid angle by uniform random directions.
SimulationReport estimate_solid_angle(const SampleConfig& config, long trials, int directions_per_trial,
                                      int workers = 0);

/// Uniform random k-dimensional subspace of R^d.
SubspaceBasis sample_subspace(int d, int k, Rng& rng);

/// A uniformly chosen full-dimensional cell {x : sign_i <h_i, x> >= 0} of
/// the arrangement of hyperplanes with normals h_i.
struct SchlafliCell {
  PointSet normals;
  std::vector<int> signs;
  ExactCount cell_count;

  /// -sign_i h_i, generating the polar of the cell.
  PointSet polar_generators() const;
};

/// Uses config.sample_count hyperplanes; requires d <= 6 and n <= 14.
/// Throws InvariantViolation if the number of cells found differs from
/// schlafli_count(n, d).
SchlafliCell sample_schlafli(const SampleConfig& config, Rng& rng);

/// Face counts of polars of random Schlafli cells, for comparison with the
/// conditioned cone of the same size.
SimulationReport duality_check(const SampleConfig& config, std::span<const int> ks, long trials,
                               int workers = 0);

}  // namespace conic
