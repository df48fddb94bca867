// conic-phase: exact tables, thresholds, convergence reports and Monte Carlo
// cross-checks for random polyhedral cones.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "conic/error.hpp"
#include "conic/experiments.hpp"

namespace {

int report(std::string_view kind, const std::string& message, int code) {
  std::cerr << conic::format_error(kind, message, code);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Face numbers and Grassmann angles of random polyhedral cones"};
  app.set_help_flag("-h,--help");

  std::string command, d_text, n_text, k_text, grid_text, format = "csv", mode = "conditioned", dist = "gaussian";
  conic::ExperimentSpec spec;
  app.add_option("command", command, "exact-table | thresholds | simulate | convergence | duality")->required();
  app.add_option("--d", d_text, "dimensions, e.g. 10,20 or 100:1000:100");
  app.add_option("--n", n_text, "numbers of generators (same list syntax)");
  app.add_option("--n-over-d", spec.n_over_d, "N = round(ratio * d)");
  app.add_option("--k", k_text, "face dimensions (same list syntax)");
  app.add_option("--rho", spec.rho, "proportional regime k = round(rho * d)");
  app.add_option("--delta", spec.delta, "d/N for convergence runs");
  app.add_option("--delta-grid", grid_text, "threshold grid a:b:step");
  app.add_option("--trials", spec.trials, "Monte Carlo trials");
  app.add_option("--subspaces", spec.subspaces, "random subspaces and directions per trial (0 skips angles)");
  app.add_option("--seed", spec.seed, "base seed");
  app.add_option("--workers", spec.workers, "worker threads (0: hardware concurrency)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", spec.out_path, "output file (default stdout)");
  app.add_option("--mode", mode, "conditioned | unconditioned")->check(CLI::IsMember({"conditioned", "unconditioned"}));
  app.add_option("--dist", dist, "gaussian | sphere | aniso:s1,s2,...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), 2);
  }

  try {
    spec.command = conic::parse_command(command);
    if (!d_text.empty()) spec.d_values = conic::parse_int_list(d_text);
    if (!n_text.empty()) spec.n_values = conic::parse_int_list(n_text);
    if (!k_text.empty()) spec.k_values = conic::parse_int_list(k_text);
    if (!grid_text.empty()) spec.delta_grid = conic::parse_grid(grid_text);
    spec.format = format == "json" ? conic::OutputFormat::json : conic::OutputFormat::csv;
    spec.mode = mode == "unconditioned" ? conic::SamplingMode::unconditioned : conic::SamplingMode::conditioned;
    spec.distribution = conic::parse_distribution(dist);

    const std::string text = conic::format_table(conic::run(spec), spec.format);
    if (spec.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(spec.out_path, std::ios::binary);
      if (!out) return report("io", "cannot open " + spec.out_path, 2);
      out << text;
      if (!out) return report("io", "failed writing " + spec.out_path, 2);
    }
    return 0;
  } catch (const conic::Error& e) {
    return report(e.kind(), e.what(), e.exit_code());
  } catch (const std::exception& e) {
    return report("internal", e.what(), 3);
  }
}
