#pragma once

// Table-producing experiment runners behind the conic-phase command line.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "conic/random_cones.hpp"

namespace conic {

enum class Command { exact_table, thresholds, simulate, convergence, duality };
enum class OutputFormat { csv, json };

Command parse_command(std::string_view name);
std::string_view command_name(Command c);

/// Inclusive arithmetic grid first, first+step, ..., last.
struct Grid {
  double first = 0.55;
  double last = 0.95;
  double step = 0.05;

  std::vector<double> values() const;
};

struct ExperimentSpec {
  Command command = Command::exact_table;
  std::vector<long> d_values;
  /// Explicit N values; when empty, N = round(n_over_d * d).
  std::vector<long> n_values;
  std::optional<double> n_over_d;
  std::vector<long> k_values;
  std::optional<double> rho;
  std::optional<double> delta;
  Grid delta_grid;
  long trials = 10000;
  /// Random subspaces (and directions) per trial for angle estimates; 0 skips them.
  int subspaces = 10;
  std::uint64_t seed = 1;
  int workers = 0;
  OutputFormat format = OutputFormat::csv;
  std::string out_path;
  SamplingMode mode = SamplingMode::conditioned;
  Distribution distribution;

  /// Throws DomainError if the spec is incomplete for its command.
  void validate() const;
};

using Cell = std::variant<std::monostate, long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Ordered key/value pairs emitted as the JSON metadata object.
  std::vector<std::pair<std::string, Cell>> metadata;
};

Table run(const ExperimentSpec& spec);

/// Header row plus one line per row; doubles with 17 significant digits.
std::string format_csv(const Table& table);
/// {"metadata": {...}, "columns": [...], "rows": [{...}, ...]}
std::string format_json(const Table& table);
std::string format_table(const Table& table, OutputFormat format);

/// Machine-readable error record for the command line.
std::string format_error(std::string_view kind, std::string_view message, int exit_code);

/// Parses "gaussian", "sphere" or "aniso:s1,s2,...".
Distribution parse_distribution(std::string_view text);
/// Parses "a:b:step".
Grid parse_grid(std::string_view text);
/// Parses "a,b,c" and ranges "a:b" or "a:b:step" (inclusive), possibly mixed.
std::vector<long> parse_int_list(std::string_view text);

}  // namespace conic
