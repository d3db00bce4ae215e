#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmeter/errors.hpp"
#include "qmeter/sweep.hpp"

using namespace qmeter;

namespace {

std::size_t column(const Table& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  REQUIRE(it != t.columns.end());
  return static_cast<std::size_t>(it - t.columns.begin());
}

std::string render(const Table& t, OutputFormat f) {
  std::ostringstream os;
  write_table(t, f, os);
  return os.str();
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.n_steps = 61;
  return cfg;
}

}  // namespace

TEST_CASE("trajectory_record at t = 0") {
  ModelParams p;
  const TrajectoryRecord rec = trajectory_record(p, 0.0);
  CHECK(rec.c_closed == 0.0);
  CHECK(rec.bell_max_closed == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rec.bell_max_horodecki == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rec.purity == doctest::Approx(1.0));
  CHECK(rec.p_overlap == 1.0);
}

TEST_CASE("trajectory columns agree pairwise") {
  RunConfig cfg = small_config();
  const Table t = trajectory_table(cfg);
  CHECK(t.rows.size() == 3 * 61);
  const auto cc = column(t, "c_closed"), cw = column(t, "c_wootters"), ce = column(t, "c_expectation");
  const auto bc = column(t, "bell_max_closed"), bh = column(t, "bell_max_horodecki");
  for (const auto& row : t.rows) {
    CHECK(std::abs(row[cc] - row[cw]) < 1e-10);
    CHECK(std::abs(row[cc] - row[ce]) < 1e-10);
    CHECK(std::abs(row[bc] - row[bh]) < 1e-10);
    CHECK(row[bc] <= 2 * std::sqrt(2.0) + 1e-9);
  }
  const std::vector<std::string> expected{"r",         "t",               "gamma_t_half",       "alpha_tilde",
                                          "p_overlap", "gamma12",         "decoherence_factor", "c_closed",
                                          "c_wootters", "c_expectation",  "eof",                "bell_max_closed",
                                          "bell_max_horodecki", "purity"};
  CHECK(t.columns == expected);
}

TEST_CASE("tiny t_max starts from the product state") {
  RunConfig cfg;
  cfg.n_steps = 2;
  cfg.t_max = 1e-9;
  cfg.r_list = {2.0};
  const Table t = trajectory_table(cfg);
  CHECK(t.rows[0][column(t, "c_closed")] == 0.0);
  CHECK(t.rows[0][column(t, "bell_max_closed")] == doctest::Approx(2.0));
}

TEST_CASE("csv layout") {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{0.1, 1.0 / 3.0}, {2.0, -1e-300}};
  CHECK(render(t, OutputFormat::csv) == "a,b\n0.10000000000000001,0.33333333333333331\n2,-1e-300\n");
}

TEST_CASE("json layout") {
  Table t;
  t.columns = {"t", "c"};
  t.rows = {{0.5, 0.25}};
  const auto doc = nlohmann::json::parse(render(t, OutputFormat::json));
  REQUIRE(doc.is_array());
  CHECK(doc[0]["t"] == 0.5);
  CHECK(doc[0]["c"] == 0.25);
}

TEST_CASE("output is deterministic") {
  RunConfig cfg = small_config();
  CHECK(render(trajectory_table(cfg), OutputFormat::csv) == render(trajectory_table(cfg), OutputFormat::csv));
  CHECK(render(figure_table(Figure::fig5, cfg), OutputFormat::json) ==
        render(figure_table(Figure::fig5, cfg), OutputFormat::json));
}

TEST_CASE("fig3 single r is monotone") {
  RunConfig cfg = small_config();
  cfg.r_list = {0.0};
  const Table t = figure_table(Figure::fig3, cfg);
  CHECK(t.columns == std::vector<std::string>{"t", "gamma_t_half", "decoherence_factor_r0"});
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i][2] <= t.rows[i - 1][2]);
}

TEST_CASE("fig4 peak moves later with squeezing") {
  RunConfig cfg;
  cfg.n_steps = 3001;
  const Table t = figure_table(Figure::fig4, cfg);
  auto peak = [&](const std::string& name) {
    const auto c = column(t, name);
    std::size_t best = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      if (t.rows[i][c] > t.rows[best][c]) best = i;
    return t.rows[best][0];
  };
  CHECK(peak("concurrence_r3.5") > peak("concurrence_r2"));
  CHECK(peak("concurrence_r2") > peak("concurrence_r0"));
  for (const char* name : {"eof_r0", "eof_r2", "eof_r3.5"}) {
    const auto c = column(t, name);
    for (const auto& row : t.rows) CHECK(row[c] < 1.0);
  }
}

TEST_CASE("fig5 difference columns") {
  RunConfig cfg;
  cfg.n_steps = 3001;
  const Table t = figure_table(Figure::fig5, cfg);
  const auto cd = column(t, "c_dif"), bd = column(t, "b_dif");
  bool found = false;
  for (const auto& row : t.rows)
    if (row[0] > 0.1 && std::abs(row[cd]) < 0.01 && row[bd] > 0) found = true;
  CHECK(found);
  CHECK(t.columns.back() == "b_dif");
}

TEST_CASE("config validation") {
  RunConfig cfg;
  cfg.n_steps = 1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = RunConfig{};
  cfg.t_max = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = RunConfig{};
  cfg.r_list = {};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = RunConfig{};
  cfg.r_list = {-1};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK_THROWS_AS(parse_format("xml"), DomainError);
  const auto grid = RunConfig{}.time_grid();
  CHECK(grid.size() == 601);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 6.0);
}

TEST_CASE("config file") {
  const std::string path = "qmeter_test_config.txt";
  {
    std::ofstream f(path);
    f << "# sweep\nalpha0 = 3\n r = 0.5, 1\nr=2\nt-max=2.5\nsteps = 11\nformat = json\ncutoff = 40\nout = x.csv\n";
  }
  RunConfig cfg;
  apply_config_file(path, cfg);
  CHECK(cfg.alpha0 == 3.0);
  CHECK(cfg.r_list == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(cfg.t_max == 2.5);
  CHECK(cfg.n_steps == 11);
  CHECK(cfg.format == OutputFormat::json);
  CHECK(cfg.cutoff == 40);
  CHECK(cfg.output_path == "x.csv");
  {
    std::ofstream f(path);
    f << "speed = 3\n";
  }
  CHECK_THROWS_AS(apply_config_file(path, cfg), DomainError);
  {
    std::ofstream f(path);
    f << "steps = 2.5\n";
  }
  CHECK_THROWS_AS(apply_config_file(path, cfg), DomainError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(apply_config_file("does/not/exist", cfg), DomainError);
}

TEST_CASE("verify") {
  SUBCASE("oracle agrees at alpha0 = 2") {
    RunConfig cfg;
    cfg.alpha0 = 2;
    cfg.r_list = {1.0};
    cfg.t_max = 4;
    cfg.n_steps = 9;
    const VerifyReport rep = verify(cfg);
    CHECK(rep.passed);
    REQUIRE(rep.table.rows.size() == 9);
    for (const auto& row : rep.table.rows) {
      CHECK(row[column(rep.table, "trace_distance")] < 1e-3);
      CHECK(row[column(rep.table, "leakage")] < 0.01);
    }
  }
  SUBCASE("no drive") {
    RunConfig cfg;
    cfg.alpha0 = 0;
    cfg.r_list = {0.0, 1.0};
    cfg.t_max = 2;
    cfg.n_steps = 5;
    const VerifyReport rep = verify(cfg);
    CHECK(rep.passed);
    for (const auto& row : rep.table.rows) CHECK(row[column(rep.table, "trace_distance")] < 1e-12);
  }
  SUBCASE("large amplitude rejected") {
    RunConfig cfg;
    cfg.alpha0 = 10;
    CHECK_THROWS_AS(verify(cfg), DomainError);
  }
}
