#include "conic/random_cones.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "conic/error.hpp"

namespace conic {

namespace {

constexpr double kMaxSubsets = 1e6;

void validate(const SampleConfig& config) {
  if (config.dimension < 1) throw DomainError("dimension must be positive");
  if (config.sample_count < 1) throw DomainError("sample count must be positive");
  if (config.max_rejections < 0) throw DomainError("max_rejections must be nonnegative");
  if (config.distribution.kind == DistributionKind::anisotropic_gaussian) {
    const auto& s = config.distribution.scales;
    if (static_cast<int>(s.size()) != config.dimension) {
      throw DomainError("anisotropic scales must have one entry per coordinate");
    }
    if (!std::all_of(s.begin(), s.end(), [](double x) { return std::isfinite(x) && x > 0.0; })) {
      throw DomainError("anisotropic scales must be positive and finite");
    }
  }
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

// Result slot for one trial; empty when the trial hit a solver error.
template <typename T>
struct TrialOutcome {
  std::optional<T> value;
};

// Runs body(t) for t in [0, trials) across workers. Solver errors mark the
// trial failed; any other exception is rethrown (lowest trial index first).
template <typename T, typename Body>
std::vector<TrialOutcome<T>> run_trials(long trials, int workers, Body body) {
  std::vector<TrialOutcome<T>> out(static_cast<std::size_t>(trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
  const int w = std::min<long>(resolve_workers(workers), std::max(1L, trials));

  auto work = [&](int worker) {
    for (long t = worker; t < trials; t += w) {
      const auto tu = static_cast<std::size_t>(t);
      try {
        out[tu].value = body(t);
      } catch (const SolverError&) {
        // counted as failed
      } catch (...) {
        errors[tu] = std::current_exception();
        return;
      }
    }
  };

  if (w == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) pool.emplace_back(work, i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

struct MeanAndError {
  double mean = 0;
  double std_error = 0;
};

MeanAndError summarize(const std::vector<double>& xs) {
  MeanAndError r;
  if (xs.empty()) return r;
  const double n = static_cast<double>(xs.size());
  r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return r;
}

// Next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

long count_faces(const PointSet& points, int k) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  long count = 0;
  do {
    count += is_face(points, idx);
  } while (next_combination(idx, static_cast<int>(points.size())));
  return count;
}

void validate_face_ks(const SampleConfig& config, std::span<const int> ks) {
  if (ks.empty()) throw DomainError("no face dimensions requested");
  for (int k : ks) {
    if (k < 1 || k > config.dimension - 1) throw DomainError("face dimension k must satisfy 1 <= k <= d-1");
    if (k > config.sample_count) throw DomainError("face dimension k exceeds the number of generators");
    if (to_double(ExactRatio(binomial(config.sample_count, k))) > kMaxSubsets) {
      throw DomainError("binomial(N, k) exceeds the exhaustive enumeration limit of 10^6");
    }
  }
}

void check_acceptance(const SampleConfig& config, bool force = false) {
  if (config.mode != SamplingMode::conditioned && !force) return;
  const double p = to_double(wendel_probability(config.dimension, config.sample_count));
  if (p < kMinAcceptance) {
    std::ostringstream msg;
    msg << "acceptance probability " << p << " is below " << kMinAcceptance;
    throw AcceptanceTooSmall(msg.str());
  }
}

struct FaceTrial {
  std::vector<long> counts;
  long rejections = 0;
};

SimulationReport face_report(const SampleConfig& config, std::span<const int> ks,
                             const std::vector<TrialOutcome<FaceTrial>>& outcomes) {
  SimulationReport report;
  report.config = config;
  report.trials = static_cast<long>(outcomes.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    FaceCountStat stat;
    stat.k = ks[i];
    stat.subsets = to_double(ExactRatio(binomial(config.sample_count, ks[i])));
    std::vector<double> ratios;
    std::vector<double> counts;
    long all_faces = 0;
    for (const auto& o : outcomes) {
      if (!o.value) continue;
      const double c = static_cast<double>(o.value->counts[i]);
      counts.push_back(c);
      ratios.push_back(c / stat.subsets);
      all_faces += (c == stat.subsets);
    }
    const auto r = summarize(ratios);
    stat.mean_ratio = r.mean;
    stat.std_error = r.std_error;
    stat.mean_count = summarize(counts).mean;
    stat.p_all_faces = ratios.empty() ? 0.0 : static_cast<double>(all_faces) / static_cast<double>(ratios.size());
    report.faces.push_back(stat);
  }
  long ok = 0;
  for (const auto& o : outcomes) {
    if (o.value) {
      ++ok;
      report.total_rejections += o.value->rejections;
    }
  }
  report.failed_trials = report.trials - ok;
  if (ok > 0) report.acceptance_rate = static_cast<double>(ok) / static_cast<double>(ok + report.total_rejections);
  return report;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct HitTrial {
  double fraction = 0;
  long rejections = 0;
};

AngleStat angle_stat(int k, const std::vector<TrialOutcome<HitTrial>>& outcomes, SimulationReport& report) {
  std::vector<double> fractions;
  long ok = 0;
  for (const auto& o : outcomes) {
    if (!o.value) continue;
    ++ok;
    fractions.push_back(o.value->fraction);
    report.total_rejections += o.value->rejections;
  }
  report.trials = static_cast<long>(outcomes.size());
  report.failed_trials = report.trials - ok;
  if (ok > 0) report.acceptance_rate = static_cast<double>(ok) / static_cast<double>(ok + report.total_rejections);
  const auto r = summarize(fractions);
  return {k, r.mean, r.std_error};
}

}  // namespace

bool SimulationReport::same_results(const SimulationReport& o) const {
  auto same_faces = [](const FaceCountStat& a, const FaceCountStat& b) {
    return a.k == b.k && a.subsets == b.subsets && a.mean_count == b.mean_count && a.mean_ratio == b.mean_ratio &&
           a.std_error == b.std_error && a.p_all_faces == b.p_all_faces;
  };
  auto same_angle = [](const AngleStat& a, const AngleStat& b) {
    return a.k == b.k && a.estimate == b.estimate && a.std_error == b.std_error;
  };
  return trials == o.trials && failed_trials == o.failed_trials && total_rejections == o.total_rejections &&
         acceptance_rate == o.acceptance_rate &&
         std::equal(faces.begin(), faces.end(), o.faces.begin(), o.faces.end(), same_faces) &&
         std::equal(grassmann.begin(), grassmann.end(), o.grassmann.begin(), o.grassmann.end(), same_angle) &&
         solid_angle.has_value() == o.solid_angle.has_value() &&
         (!solid_angle || same_angle(*solid_angle, *o.solid_angle));
}

Rng trial_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

PointSet sample_directions(const SampleConfig& config, int n, Rng& rng) {
  validate(config);
  if (n < 1) throw DomainError("sample_directions requires n >= 1");
  std::normal_distribution<double> normal;
  Eigen::MatrixXd pts(config.dimension, n);
  for (int j = 0; j < n; ++j) {
    // A Gaussian draw of exactly zero norm has probability zero; redraw anyway.
    do {
      for (int i = 0; i < config.dimension; ++i) pts(i, j) = normal(rng);
    } while (pts.col(j).squaredNorm() == 0.0);
    if (config.distribution.kind == DistributionKind::anisotropic_gaussian) {
      for (int i = 0; i < config.dimension; ++i) pts(i, j) *= config.distribution.scales[static_cast<std::size_t>(i)];
    }
  }
  return PointSet(std::move(pts));
}

GeneratorSet sample_cover_efron(const SampleConfig& config, Rng& rng) {
  validate(config);
  check_acceptance(config, true);
  for (long rejected = 0;; ++rejected) {
    PointSet pts = sample_directions(config, config.sample_count, rng);
    if (strict_halfspace_feasible(pts)) return {std::move(pts), rejected, false};
    if (rejected >= config.max_rejections) {
      throw SamplingError("no conditioned sample after " + std::to_string(rejected + 1) + " draws");
    }
  }
}

GeneratorSet sample_cone(const SampleConfig& config, Rng& rng) {
  if (config.mode == SamplingMode::conditioned) return sample_cover_efron(config, rng);
  PointSet pts = sample_directions(config, config.sample_count, rng);
  const bool spans = !strict_halfspace_feasible(pts);
  return {std::move(pts), 0, spans};
}

SimulationReport simulate_face_counts(const SampleConfig& config, std::span<const int> ks, long trials,
                                      int workers) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  validate_face_ks(config, ks);
  if (trials < 1) throw DomainError("trials must be positive");
  check_acceptance(config);

  const std::vector<int> k_list(ks.begin(), ks.end());
  auto outcomes = run_trials<FaceTrial>(trials, workers, [&](long t) {
    Rng rng = trial_rng(config.seed, static_cast<std::uint64_t>(t));
    const GeneratorSet cone = sample_cone(config, rng);
    FaceTrial trial;
    trial.rejections = cone.rejections_used;
    for (int k : k_list) trial.counts.push_back(cone.spans_space ? 0 : count_faces(cone.points, k));
    return trial;
  });
  SimulationReport report = face_report(config, ks, outcomes);
  report.elapsed_seconds = seconds_since(start);
  return report;
}

SubspaceBasis sample_subspace(int d, int k, Rng& rng) {
  if (k < 1 || k > d) throw DomainError("subspace dimension must satisfy 1 <= k <= d");
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < d; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
  return SubspaceBasis(d, std::move(q));
}

SimulationReport estimate_grassmann(const SampleConfig& config, int k, long trials, int subspaces_per_trial,
                                    int workers) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  if (k < 1 || k > config.dimension - 1) throw DomainError("Grassmann index requires 1 <= k <= d-1");
  if (trials < 1 || subspaces_per_trial < 1) throw DomainError("trials and subspaces must be positive");
  check_acceptance(config);

  auto outcomes = run_trials<HitTrial>(trials, workers, [&](long t) {
    Rng rng = trial_rng(config.seed, static_cast<std::uint64_t>(t));
    const GeneratorSet cone = sample_cone(config, rng);
    HitTrial trial;
    trial.rejections = cone.rejections_used;
    int hits = 0;
    for (int s = 0; s < subspaces_per_trial; ++s) {
      const SubspaceBasis L = sample_subspace(config.dimension, k, rng);
      hits += cone.spans_space || cone_meets_subspace(cone.points, L);
    }
    trial.fraction = static_cast<double>(hits) / subspaces_per_trial;
    return trial;
  });
  SimulationReport report;
  report.config = config;
  report.grassmann.push_back(angle_stat(k, outcomes, report));
  report.elapsed_seconds = seconds_since(start);
  return report;
}

SimulationReport estimate_solid_angle(const SampleConfig& config, long trials, int directions_per_trial,
                                      int workers) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  if (config.dimension < 2) throw DomainError("solid angle estimation requires d >= 2");
  if (trials < 1 || directions_per_trial < 1) throw DomainError("trials and directions must be positive");
  check_acceptance(config);

  auto outcomes = run_trials<HitTrial>(trials, workers, [&](long t) {
    Rng rng = trial_rng(config.seed, static_cast<std::uint64_t>(t));
    const GeneratorSet cone = sample_cone(config, rng);
    HitTrial trial;
    trial.rejections = cone.rejections_used;
    std::normal_distribution<double> normal;
    int hits = 0;
    Eigen::VectorXd y(config.dimension);
    for (int s = 0; s < directions_per_trial; ++s) {
      for (int i = 0; i < config.dimension; ++i) y(i) = normal(rng);
      hits += cone.spans_space || cone_contains(cone.points, y);
    }
    trial.fraction = static_cast<double>(hits) / directions_per_trial;
    return trial;
  });
  SimulationReport report;
  report.config = config;
  report.solid_angle = angle_stat(config.dimension - 1, outcomes, report);
  report.elapsed_seconds = seconds_since(start);
  return report;
}

PointSet SchlafliCell::polar_generators() const {
  Eigen::MatrixXd g = normals.points();
  for (Eigen::Index j = 0; j < g.cols(); ++j) g.col(j) *= -signs[static_cast<std::size_t>(j)];
  return PointSet(std::move(g));
}

SchlafliCell sample_schlafli(const SampleConfig& config, Rng& rng) {
  validate(config);
  const int d = config.dimension;
  const int n = config.sample_count;
  if (d > 6 || n > 14) throw DomainError("sample_schlafli requires d <= 6 and n <= 14");

  PointSet normals = sample_directions(config, n, rng);
  const Eigen::MatrixXd& h = normals.points();

  // The arrangement is centrally symmetric: a pattern is a cell iff its
  // negation is, so only patterns with the top bit clear are solved.
  const std::uint32_t patterns = 1U << n;
  const std::uint32_t top = 1U << (n - 1);
  std::vector<std::uint32_t> cells;
  Eigen::MatrixXd g(d, n);
  for (std::uint32_t mask = 0; mask < top; ++mask) {
    for (int i = 0; i < n; ++i) g.col(i) = ((mask >> i) & 1U) ? h.col(i) : Eigen::VectorXd(-h.col(i));
    // The cell {x : s_i <h_i, x> > 0} is open-nonempty iff {-s_i h_i} lies in an open halfspace.
    if (strict_halfspace_feasible(PointSet(g))) {
      cells.push_back(mask);
      cells.push_back(mask ^ (patterns - 1U));
    }
  }
  std::sort(cells.begin(), cells.end());

  SchlafliCell cell{std::move(normals), {}, schlafli_count(n, d)};
  if (ExactCount(static_cast<unsigned long>(cells.size())) != cell.cell_count) {
    throw InvariantViolation("arrangement of " + std::to_string(n) + " hyperplanes in R^" + std::to_string(d) +
                             " has " + std::to_string(cells.size()) + " cells, expected " +
                             cell.cell_count.get_str());
  }
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  const std::uint32_t chosen = cells[pick(rng)];
  // Bit i set means g_i = h_i above, i.e. sign_i = -1.
  for (int i = 0; i < n; ++i) cell.signs.push_back(((chosen >> i) & 1U) ? -1 : 1);
  return cell;
}

SimulationReport duality_check(const SampleConfig& config, std::span<const int> ks, long trials, int workers) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  validate_face_ks(config, ks);
  if (trials < 1) throw DomainError("trials must be positive");

  const std::vector<int> k_list(ks.begin(), ks.end());
  auto outcomes = run_trials<FaceTrial>(trials, workers, [&](long t) {
    Rng rng = trial_rng(config.seed, static_cast<std::uint64_t>(t));
    const SchlafliCell cell = sample_schlafli(config, rng);
    const PointSet polar = cell.polar_generators();
    FaceTrial trial;
    for (int k : k_list) trial.counts.push_back(count_faces(polar, k));
    return trial;
  });
  SimulationReport report = face_report(config, ks, outcomes);
  report.elapsed_seconds = seconds_since(start);
  return report;
}

}  // namespace conic
