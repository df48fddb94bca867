#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "conic/error.hpp"
#include "conic/experiments.hpp"

using namespace conic;

namespace {

double number(const Cell& c) { return std::get<double>(c); }

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("list, grid and distribution parsing") {
  CHECK(parse_int_list("1,3,5") == std::vector<long>{1, 3, 5});
  CHECK(parse_int_list("2:4") == std::vector<long>{2, 3, 4});
  CHECK(parse_int_list("10:30:10,7") == std::vector<long>{10, 20, 30, 7});
  CHECK_THROWS_AS(parse_int_list("3:1"), DomainError);
  CHECK_THROWS_AS(parse_int_list("x"), DomainError);
  const Grid g = parse_grid("0.55:0.95:0.05");
  CHECK(g.values().size() == 9);
  CHECK(g.values().back() == doctest::Approx(0.95));
  CHECK_THROWS_AS(parse_grid("0.5:0.6"), DomainError);
  CHECK(parse_distribution("sphere").kind == DistributionKind::uniform_sphere);
  CHECK(parse_distribution("aniso:1,2.5").scales == std::vector<double>{1, 2.5});
  CHECK_THROWS_AS(parse_distribution("cauchy"), DomainError);
  CHECK(parse_command("exact-table") == Command::exact_table);
  CHECK(command_name(Command::duality) == "duality");
  CHECK_THROWS_AS(parse_command("plot"), DomainError);
}

TEST_CASE("exact table") {
  ExperimentSpec spec;
  spec.command = Command::exact_table;
  spec.d_values = {4, 300};
  spec.n_over_d = 2.0;
  spec.k_values = {1};
  const Table t = run(spec);
  REQUIRE(t.rows.size() == 2);
  CHECK(number(t.rows[0][column(t, "face_ratio")]) == doctest::Approx(11.0 / 16));
  CHECK(number(t.rows[0][column(t, "grassmann_2u")]) == doctest::Approx(35.0 / 64));
  CHECK(std::get<std::string>(t.rows[0][column(t, "method")]) == "exact");
  CHECK(std::get<std::string>(t.rows[1][column(t, "method")]) == "log");
  CHECK(format_csv(t).starts_with("d,N,k,face_ratio,grassmann_2u,method\n4,8,1,0.6875,0.546875,exact\n"));
}

TEST_CASE("exact table domain errors") {
  ExperimentSpec spec;
  spec.command = Command::exact_table;
  spec.d_values = {5};
  spec.n_values = {3};
  spec.k_values = {1};
  CHECK_THROWS_AS(run(spec), DomainError);
  spec.n_values.clear();
  CHECK_THROWS_AS(run(spec), DomainError);
}

TEST_CASE("thresholds over the default grid") {
  ExperimentSpec spec;
  spec.command = Command::thresholds;
  const Table t = run(spec);
  CHECK(t.rows.size() == 9);
  for (const auto& row : t.rows) {
    const double rho_s = number(row[column(t, "rho_strong")]);
    const double rho_w = number(row[column(t, "rho_weak")]);
    CHECK(rho_s > 0);
    CHECK(rho_s < std::min(2.0 / 3, rho_w));
    CHECK(std::abs(number(row[column(t, "G_at_rho_strong")])) <= 1e-12);
  }
  spec.delta_grid = {0.4, 0.6, 0.1};
  CHECK_THROWS_AS(run(spec), DomainError);
}

TEST_CASE("convergence at N = 2d approaches the critical rate") {
  ExperimentSpec spec;
  spec.command = Command::convergence;
  spec.d_values = {100, 1000, 10000, 100000};
  spec.n_over_d = 2.0;
  spec.k_values = {1};
  const Table t = run(spec);
  const double rate = 1 / std::sqrt(std::numbers::pi);
  double prev = 1;
  for (const auto& row : t.rows) {
    const double dev = std::abs(number(row[column(t, "sqrt_d_one_minus_ratio")]) - rate);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev / rate < 1e-3);
}

TEST_CASE("convergence in the proportional regime") {
  ExperimentSpec spec;
  spec.command = Command::convergence;
  spec.d_values = {2000};
  spec.delta = 0.6;
  spec.rho = 0.2;
  const Table t = run(spec);
  CHECK(number(t.rows[0][column(t, "face_ratio")]) > 0.99);
  CHECK(number(t.rows[0][column(t, "face_limit")]) == 1.0);
  CHECK(std::holds_alternative<std::monostate>(t.rows[0][column(t, "sqrt_d_u")]));
  spec.k_values = {1};
  CHECK_THROWS_AS(run(spec), DomainError);
}

TEST_CASE("simulate rows carry exact references and z-scores") {
  ExperimentSpec spec;
  spec.command = Command::simulate;
  spec.d_values = {3};
  spec.n_values = {5};
  spec.k_values = {1, 2};
  spec.trials = 800;
  spec.subspaces = 2;
  const Table t = run(spec);
  const std::size_t z = column(t, "z_score");
  const std::size_t q = column(t, "quantity");
  int checked = 0;
  for (const auto& row : t.rows) {
    if (std::get<std::string>(row[q]) == "p_all_faces") continue;
    CHECK(std::abs(number(row[z])) < 4.5);
    ++checked;
  }
  CHECK(checked == 6);
  spec.workers = 1;
  const std::string a = format_json(t);
  CHECK(format_json(run(spec)) == a);
}

TEST_CASE("unconditioned simulation uses unconditioned references") {
  ExperimentSpec spec;
  spec.command = Command::simulate;
  spec.d_values = {3};
  spec.n_values = {6};
  spec.k_values = {1};
  spec.trials = 1500;
  spec.subspaces = 2;
  spec.mode = SamplingMode::unconditioned;
  const Table t = run(spec);
  for (const auto& row : t.rows) {
    if (const double* zv = std::get_if<double>(&row[column(t, "z_score")])) CHECK(std::abs(*zv) < 4.5);
  }
}

TEST_CASE("duality table") {
  ExperimentSpec spec;
  spec.command = Command::duality;
  spec.d_values = {3};
  spec.n_values = {6};
  spec.trials = 600;
  const Table t = run(spec);
  CHECK(t.rows.size() == 4);
  for (const auto& row : t.rows) CHECK(std::abs(number(row[column(t, "z_score")])) < 4.5);
}

TEST_CASE("formatting") {
  Table t;
  t.columns = {"a", "b", "c", "d"};
  t.rows = {{1L, 0.1, std::string("x"), std::monostate{}}, {2L, INFINITY, std::string("y"), NAN}};
  t.metadata = {{"seed", 5L}};
  CHECK(format_csv(t) == "a,b,c,d\n1,0.10000000000000001,x,\n2,inf,y,nan\n");
  const auto doc = nlohmann::json::parse(format_json(t));
  CHECK(doc["metadata"]["seed"] == 5);
  CHECK(doc["rows"][0]["b"] == 0.1);
  CHECK(doc["rows"][1]["b"].is_null());
  CHECK(doc["columns"].size() == 4);
  const auto err = nlohmann::json::parse(format_error("domain", "bad d", 2));
  CHECK(err["error"]["exit_code"] == 2);
}
