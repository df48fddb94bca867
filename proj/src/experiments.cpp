#include "conic/experiments.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

#include "conic/asymptotics.hpp"
#include "conic/error.hpp"
#include "conic/exact.hpp"
#include "conic/log_space.hpp"

namespace conic {

namespace {

constexpr long kExactLimit = 200;
constexpr const char* kVersion = "1.0.0";

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(long v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return v;
    }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

long n_for(const ExperimentSpec& spec, long d, std::size_t i) {
  if (!spec.n_values.empty()) return spec.n_values[std::min(i, spec.n_values.size() - 1)];
  return std::lround(*spec.n_over_d * static_cast<double>(d));
}

std::vector<long> ns_for(const ExperimentSpec& spec, long d) {
  if (!spec.n_values.empty()) return spec.n_values;
  return {n_for(spec, d, 0)};
}

double z_score(double estimate, double exact, double std_error) {
  const double diff = estimate - exact;
  if (std_error > 0) return diff / std_error;
  if (std::abs(diff) <= 1e-12) return 0.0;
  return diff > 0 ? INFINITY : -INFINITY;
}

struct Ratios {
  double face = 0;
  double grassmann = 0;
  /// 1 - face, kept accurate when face is close to 1.
  double face_deficit = 0;
  std::string method;
};

Ratios ratios(long d, long N, long k) {
  Ratios r;
  if (d <= kExactLimit) {
    const ExactRatio face = expected_face_ratio(d, N, k);
    r.face = to_double(face);
    r.face_deficit = to_double(1 - face);
    r.grassmann = to_double(expected_grassmann_angle(d, N, k));
    r.method = "exact";
  } else {
    const LogSpaceRatios lr = log_space_ratios(d, N, k);
    r.face = lr.face_ratio.to_double();
    r.face_deficit = -std::expm1(lr.face_ratio.log_magnitude);
    r.grassmann = lr.grassmann.to_double();
    r.method = "log";
  }
  return r;
}

Table exact_table(const ExperimentSpec& spec) {
  Table t;
  t.columns = {"d", "N", "k", "face_ratio", "grassmann_2u", "method"};
  for (long d : spec.d_values) {
    for (long N : ns_for(spec, d)) {
      for (long k : spec.k_values) {
        const Ratios r = ratios(d, N, k);
        t.rows.push_back({d, N, k, r.face, r.grassmann, r.method});
      }
    }
  }
  t.metadata = {{"command", std::string("exact-table")}, {"version", std::string(kVersion)}};
  return t;
}

Table thresholds(const ExperimentSpec& spec) {
  Table t;
  t.columns = {"delta", "rho_weak", "rho_strong", "G_at_rho_strong", "iterations"};
  for (double delta : spec.delta_grid.values()) {
    const RootResult root = rho_strong(delta);
    t.rows.push_back({delta, rho_weak(delta), root.root, exponent_G(delta, root.root), static_cast<long>(root.iterations)});
  }
  t.metadata = {{"command", std::string("thresholds")}, {"version", std::string(kVersion)}};
  return t;
}

Table convergence(const ExperimentSpec& spec) {
  Table t;
  t.columns = {"d", "N", "k", "face_ratio", "face_limit", "grassmann_2u", "grassmann_limit",
               "sqrt_d_one_minus_ratio", "sqrt_d_u", "critical_rate", "gaussian_approx", "method"};
  const double delta = spec.delta ? *spec.delta : 1.0 / *spec.n_over_d;
  const bool proportional = spec.rho.has_value();

  auto limits = [&]() -> std::pair<Cell, Cell> {
    auto guard = [](auto f) -> Cell {
      try {
        return f().value;
      } catch (const AtThreshold&) {
        return std::monostate{};
      }
    };
    return {guard([&] { return predicted_face_limit(ThresholdPoint(delta, *spec.rho)); }),
            guard([&] { return predicted_grassmann_limit(ThresholdPoint(delta, *spec.rho)); })};
  };

  for (long d : spec.d_values) {
    const long N = spec.n_values.empty() && !spec.n_over_d ? std::lround(static_cast<double>(d) / delta)
                                                           : n_for(spec, d, 0);
    std::vector<long> ks = spec.k_values;
    if (proportional) ks = {std::max(1L, std::lround(*spec.rho * static_cast<double>(d)))};
    for (long k : ks) {
      const Ratios r = ratios(d, N, k);
      Cell face_limit, grass_limit, rate;
      if (proportional) {
        std::tie(face_limit, grass_limit) = limits();
      } else {
        face_limit = predicted_face_limit(delta, static_cast<int>(k)).value;
        grass_limit = predicted_grassmann_limit(delta, static_cast<int>(k)).value;
        rate = critical_rate(static_cast<int>(k));
      }
      Cell scaled_deficit, scaled_u;
      if (N == 2 * d) {
        const double root_d = std::sqrt(static_cast<double>(d));
        scaled_deficit = root_d * r.face_deficit;
        scaled_u = root_d * r.grassmann / 2.0;
      }
      Cell gauss;
      if (k < d && d < N) gauss = gaussian_ratio_approximation(d, N, k);
      t.rows.push_back({d, N, k, r.face, face_limit, r.grassmann, grass_limit, scaled_deficit, scaled_u, rate,
                        gauss, r.method});
    }
  }
  t.metadata = {{"command", std::string("convergence")}, {"version", std::string(kVersion)}, {"delta", delta}};
  if (spec.rho) t.metadata.emplace_back("rho", *spec.rho);
  return t;
}

SampleConfig sample_config(const ExperimentSpec& spec, long d, long N) {
  SampleConfig c;
  c.dimension = static_cast<int>(d);
  c.sample_count = static_cast<int>(N);
  c.distribution = spec.distribution;
  c.mode = spec.mode;
  c.seed = spec.seed;
  return c;
}

std::vector<int> ks_or_all(const ExperimentSpec& spec, long d) {
  std::vector<int> ks;
  if (spec.k_values.empty()) {
    for (long k = 1; k < d; ++k) ks.push_back(static_cast<int>(k));
  } else {
    for (long k : spec.k_values) ks.push_back(static_cast<int>(k));
  }
  return ks;
}

void add_run_metadata(Table& t, const ExperimentSpec& spec, const SimulationReport& rep) {
  t.metadata.emplace_back("seed", static_cast<long>(spec.seed));
  t.metadata.emplace_back("mode", std::string(spec.mode == SamplingMode::conditioned ? "conditioned" : "unconditioned"));
  t.metadata.emplace_back("trials", rep.trials);
  t.metadata.emplace_back("failed_trials", rep.failed_trials);
}

Table simulate(const ExperimentSpec& spec) {
  const long d = spec.d_values.front();
  const long N = n_for(spec, d, 0);
  const SampleConfig config = sample_config(spec, d, N);
  const std::vector<int> ks = ks_or_all(spec, d);
  const bool conditioned = spec.mode == SamplingMode::conditioned;
  const double p_dn = to_double(wendel_probability(d, N));

  Table t;
  t.columns = {"quantity", "k", "estimate", "std_error", "exact", "z_score", "trials", "failed_trials"};
  auto push = [&](const std::string& q, long k, double est, double se, Cell exact, const SimulationReport& rep) {
    Cell z;
    if (const double* e = std::get_if<double>(&exact)) z = z_score(est, *e, se);
    t.rows.push_back({q, k, est, se, exact, z, rep.trials, rep.failed_trials});
  };

  const SimulationReport faces = simulate_face_counts(config, ks, spec.trials, spec.workers);
  if (conditioned) {
    const double attempts = static_cast<double>(faces.trials - faces.failed_trials + faces.total_rejections);
    push("acceptance_rate", 0, faces.acceptance_rate, std::sqrt(p_dn * (1 - p_dn) / attempts), p_dn, faces);
  }
  for (const FaceCountStat& s : faces.faces) {
    // Unconditioned cones equal to R^d contribute no faces: E f_k / binom = P_{d-k,N-k}.
    const double exact = conditioned ? to_double(expected_face_ratio(d, N, s.k))
                                     : to_double(wendel_probability(d - s.k, N - s.k));
    push("face_ratio", s.k, s.mean_ratio, s.std_error, exact, faces);
    push("p_all_faces", s.k, s.p_all_faces, std::sqrt(s.p_all_faces * (1 - s.p_all_faces) / faces.trials),
         std::monostate{}, faces);
  }
  if (spec.subspaces > 0) {
    for (int k : ks) {
      const SimulationReport g = estimate_grassmann(config, k, spec.trials, spec.subspaces, spec.workers);
      const double cond = to_double(expected_grassmann_angle(d, N, k));
      const double exact = conditioned ? cond : 1.0 - to_double(wendel_probability(d - k, N));
      push("grassmann_2u", k, g.grassmann.front().estimate, g.grassmann.front().std_error, exact, g);
    }
    if (d >= 2) {
      const SimulationReport v = estimate_solid_angle(config, spec.trials, spec.subspaces, spec.workers);
      const double cond = to_double(expected_grassmann_angle(d, N, 1)) / 2.0;
      const double exact = conditioned ? cond : p_dn * cond + (1.0 - p_dn);
      push("solid_angle", d - 1, v.solid_angle->estimate, v.solid_angle->std_error, exact, v);
    }
  }
  t.metadata = {{"command", std::string("simulate")}, {"version", std::string(kVersion)}, {"d", d}, {"N", N}};
  add_run_metadata(t, spec, faces);
  return t;
}

Table duality(const ExperimentSpec& spec) {
  const long d = spec.d_values.front();
  const long n = n_for(spec, d, 0);
  SampleConfig config = sample_config(spec, d, n);
  config.mode = SamplingMode::conditioned;
  const std::vector<int> ks = ks_or_all(spec, d);

  Table t;
  t.columns = {"source", "k", "mean_faces", "std_error", "exact_mean_faces", "z_score", "trials", "failed_trials"};
  const SimulationReport polar = duality_check(config, ks, spec.trials, spec.workers);
  const SimulationReport direct = simulate_face_counts(config, ks, spec.trials, spec.workers);
  for (const auto* rep : {&polar, &direct}) {
    const std::string source = rep == &polar ? "schlafli_polar" : "cover_efron";
    for (const FaceCountStat& s : rep->faces) {
      const double exact = s.subsets * to_double(expected_face_ratio(d, n, s.k));
      const double se = s.std_error * s.subsets;
      t.rows.push_back({source, static_cast<long>(s.k), s.mean_count, se, exact, z_score(s.mean_count, exact, se),
                        rep->trials, rep->failed_trials});
    }
  }
  t.metadata = {{"command", std::string("duality")}, {"version", std::string(kVersion)}, {"d", d}, {"n", n}};
  add_run_metadata(t, spec, polar);
  return t;
}

double parse_double(std::string_view s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw DomainError("not a number: " + std::string(s));
  return v;
}

long parse_long(std::string_view s) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw DomainError("not an integer: " + std::string(s));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "exact-table") return Command::exact_table;
  if (name == "thresholds") return Command::thresholds;
  if (name == "simulate") return Command::simulate;
  if (name == "convergence") return Command::convergence;
  if (name == "duality") return Command::duality;
  throw DomainError("unknown command: " + std::string(name));
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::exact_table: return "exact-table";
    case Command::thresholds: return "thresholds";
    case Command::simulate: return "simulate";
    case Command::convergence: return "convergence";
    case Command::duality: return "duality";
  }
  return "";
}

std::vector<double> Grid::values() const {
  if (!(step > 0)) throw DomainError("grid step must be positive");
  if (first > last) throw DomainError("grid is empty");
  std::vector<double> out;
  const long count = std::lround(std::floor((last - first) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(first + static_cast<double>(i) * step);
  return out;
}

void ExperimentSpec::validate() const {
  const bool needs_d = command != Command::thresholds;
  if (needs_d && d_values.empty()) throw DomainError("--d is required");
  if (needs_d && command != Command::convergence && n_values.empty() && !n_over_d) {
    throw DomainError("one of --n or --n-over-d is required");
  }
  if (n_over_d && !(*n_over_d >= 1.0)) throw DomainError("--n-over-d must be at least 1");
  if (delta && !(*delta > 0.0 && *delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (command == Command::exact_table && k_values.empty()) throw DomainError("--k is required");
  if (command == Command::convergence) {
    if (!delta && !n_over_d) throw DomainError("convergence needs --delta or --n-over-d");
    if (k_values.empty() == !rho.has_value()) throw DomainError("convergence needs exactly one of --k or --rho");
  }
  if (command == Command::thresholds) {
    for (double x : delta_grid.values()) {
      if (!(x > 0.5 && x < 1.0)) throw DomainError("threshold grid must lie inside (1/2, 1)");
    }
  }
  if ((command == Command::simulate || command == Command::duality) && trials < 1) {
    throw DomainError("--trials must be positive");
  }
  if (subspaces < 0) throw DomainError("--subspaces must be nonnegative");
  if (workers < 0) throw DomainError("--workers must be nonnegative");
}

Table run(const ExperimentSpec& spec) {
  spec.validate();
  switch (spec.command) {
    case Command::exact_table: return exact_table(spec);
    case Command::thresholds: return thresholds(spec);
    case Command::convergence: return convergence(spec);
    case Command::simulate: return simulate(spec);
    case Command::duality: return duality(spec);
  }
  throw DomainError("unhandled command");
}

std::string format_csv(const Table& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string format_json(const Table& table) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.metadata) doc["metadata"][key] = json_cell(value);
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) rec[table.columns[i]] = json_cell(row[i]);
    doc["rows"].push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

std::string format_table(const Table& table, OutputFormat format) {
  return format == OutputFormat::csv ? format_csv(table) : format_json(table);
}

std::string format_error(std::string_view kind, std::string_view message, int exit_code) {
  nlohmann::ordered_json doc;
  doc["error"]["kind"] = kind;
  doc["error"]["message"] = message;
  doc["error"]["exit_code"] = exit_code;
  return doc.dump() + "\n";
}

Distribution parse_distribution(std::string_view text) {
  if (text == "gaussian") return Distribution::gaussian();
  if (text == "sphere") return Distribution::uniform_sphere();
  if (text.starts_with("aniso:")) {
    std::vector<double> scales;
    for (auto part : split(text.substr(6), ',')) scales.push_back(parse_double(part));
    return Distribution::anisotropic(std::move(scales));
  }
  throw DomainError("unknown distribution: " + std::string(text));
}

Grid parse_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw DomainError("grid must look like a:b:step");
  return {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
}

std::vector<long> parse_int_list(std::string_view text) {
  std::vector<long> out;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_long(parts[0]));
    } else if (parts.size() == 2 || parts.size() == 3) {
      const long a = parse_long(parts[0]);
      const long b = parse_long(parts[1]);
      const long step = parts.size() == 3 ? parse_long(parts[2]) : 1;
      if (step <= 0 || a > b) throw DomainError("bad range: " + std::string(item));
      for (long v = a; v <= b; v += step) out.push_back(v);
    } else {
      throw DomainError("bad list item: " + std::string(item));
    }
  }
  return out;
}

}  // namespace conic
