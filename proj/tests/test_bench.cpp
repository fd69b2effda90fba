#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "test_support.hpp"
#include "wavepint/bench.hpp"

using namespace wavepint;

namespace {

RunRecord sample_record() {
  RunRecord r;
  r.gamma = 1e-6;
  r.h = 0.0078125;
  r.dof = 32766;
  r.preconditioner = "strang";
  r.iterations = 10;
  r.converged = true;
  r.wall_time_s = 0.123456789;
  r.e_y = 3.4e-2;
  r.e_p = 1.6e-4;
  r.final_relative_residual = 7.5e-11;
  return r;
}

struct Collector {
  std::vector<std::string> lines;
  Logger sink() {
    return [this](const std::string& s) { lines.push_back(s); };
  }
  [[nodiscard]] bool contains(const std::string& needle) const {
    for (const auto& l : lines)
      if (l.find(needle) != std::string::npos) return true;
    return false;
  }
};

}  // namespace

TEST_CASE("CSV output") {
  SUBCASE("empty record set is just the header") {
    std::ostringstream out;
    write_csv({}, out);
    CHECK(out.str() == std::string(kCsvHeader) + "\n");
  }
  SUBCASE("one line per record") {
    std::ostringstream out;
    write_csv({sample_record(), sample_record()}, out);
    std::istringstream in(out.str());
    std::string line;
    int count = 0;
    while (std::getline(in, line)) ++count;
    CHECK(count == 3);
    CHECK(out.str().find(",strang,10,true,") != std::string::npos);
  }
  SUBCASE("round trip is exact") {
    auto r2 = sample_record();
    r2.converged = false;
    r2.preconditioner = "none";
    r2.e_y = r2.e_p = std::nan("");
    std::ostringstream out;
    write_csv({sample_record(), r2}, out);
    std::istringstream in(out.str());
    const auto back = parse_csv(in);
    REQUIRE(back.size() == 2);
    const auto r = sample_record();
    CHECK(back[0].gamma == r.gamma);
    CHECK(back[0].h == r.h);
    CHECK(back[0].dof == r.dof);
    CHECK(back[0].preconditioner == r.preconditioner);
    CHECK(back[0].iterations == r.iterations);
    CHECK(back[0].converged);
    CHECK(back[0].wall_time_s == r.wall_time_s);
    CHECK(back[0].e_y == r.e_y);
    CHECK(back[0].final_relative_residual == r.final_relative_residual);
    CHECK_FALSE(back[1].converged);
    CHECK(std::isnan(back[1].e_y));
  }
  SUBCASE("malformed input") {
    std::istringstream no_header("1,2,3\n");
    CHECK_THROWS_AS(parse_csv(no_header), std::invalid_argument);
    std::istringstream short_row(std::string(kCsvHeader) + "\n1e-6,0.5,10\n");
    CHECK_THROWS_AS(parse_csv(short_row), std::invalid_argument);
  }
}

TEST_CASE("run_experiment configuration handling") {
  ExperimentConfig cfg;
  cfg.steps = {0.125};
  cfg.preconditioners = {"strang"};
  SUBCASE("no gammas, no records") { CHECK(run_experiment(cfg).empty()); }
  SUBCASE("invalid preconditioner name") {
    cfg.gammas = {1e-4};
    cfg.preconditioners = {"strang", "ilu"};
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  }
  SUBCASE("abs-h memory guard and desk cap skip with a log line") {
    cfg.gammas = {1e-4};
    cfg.steps = {std::ldexp(1.0, -3), std::ldexp(1.0, -7), std::ldexp(1.0, -9)};
    cfg.preconditioners = {"abs-h"};
    Collector log;
    const auto recs = run_experiment(cfg, log.sink());
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].h == 0.125);
    CHECK(log.contains("abs-h memory guard"));
    CHECK(log.contains("desk-scale cap"));
  }
}

TEST_CASE("run_single") {
  SUBCASE("published instance") {
    const auto r = run_single("example-1d", coupled_grid(1, 127, 2.0, 1e-6), PrecondMethod::Strang, 1e-10, 200);
    CHECK(r.converged);
    CHECK(std::abs(r.iterations - 10) <= 2);
    CHECK(r.dof == 32766);
    CHECK(r.preconditioner == "strang");
    CHECK(r.final_relative_residual <= 1e-10);
    CHECK(r.wall_time_s > 0);
    CHECK(std::isfinite(r.e_y));
  }
  SUBCASE("deterministic") {
    const auto g = coupled_grid(2, 15, 2.0, 1e-6);
    const auto a = run_single("example-2d", g, PrecondMethod::Tau, 1e-10, 200);
    const auto b = run_single("example-2d", g, PrecondMethod::Tau, 1e-10, 200);
    CHECK(a.iterations == b.iterations);
    CHECK(a.e_y == b.e_y);
    CHECK(a.e_p == b.e_p);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(run_single("example-2d", coupled_grid(1, 7, 2.0, 1e-6), PrecondMethod::Tau, 1e-10, 200),
                    std::invalid_argument);
  }
}

TEST_CASE("table1 preset at small maxit") {
  auto cfg = preset("table1");
  CHECK(cfg.problem == "example-1d");
  CHECK(cfg.gammas.size() == 5);
  CHECK(cfg.steps.size() == 4);
  cfg.maxit = 2;
  Collector log;
  const auto recs = run_experiment(cfg, log.sink());
  // h = 2^-9, 2^-10 are beyond the desk cap: 5 gammas x 2 steps x 3 methods remain.
  CHECK(recs.size() == 30);
  CHECK(log.contains("skipped"));
  for (const auto& r : recs) {
    CHECK(r.iterations <= 2);
    if (!r.converged) CHECK(r.iterations == 2);
  }
}

TEST_CASE("presets") {
  for (const char* name : {"table1", "table2", "table3", "table4", "table5", "table6"}) {
    const auto cfg = preset(name);
    CHECK(cfg.mode == ExperimentMode::Solve);
    CHECK_FALSE(cfg.preconditioners.empty());
  }
  CHECK(preset("table4").problem == "example-2d");
  CHECK(preset("figures-1d").mode == ExperimentMode::Spectrum);
  CHECK_THROWS_AS(preset("table9"), std::invalid_argument);
}

TEST_CASE("spectrum study") {
  ExperimentConfig cfg;
  cfg.mode = ExperimentMode::Spectrum;
  cfg.gammas = {1e-6};
  cfg.spectrum_m1 = {15};
  cfg.spectrum_n = {32};
  SUBCASE("1D report length") {
    const auto reps = run_spectrum_study(cfg);
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].eigenvalues.size() == 960);
    CHECK(reps[0].samples.size() == 960);
    CHECK(reps[0].label == "A");
    CHECK(reps[0].edge == 15);
  }
  SUBCASE("2D report length") {
    cfg.problem = "example-2d";
    cfg.spectrum_m1 = {7};
    const auto reps = run_spectrum_study(cfg);
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].eigenvalues.size() == 3136);
  }
  SUBCASE("preconditioned study and size guard") {
    cfg.spectrum_m1 = {3, 63};  // 2 * 63 * 40 exceeds the preconditioned guard
    cfg.spectrum_n = {40};
    cfg.spectrum_precond = "tau";
    Collector log;
    const auto reps = run_spectrum_study(cfg, log.sink());
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].label == "tau");
    CHECK(log.contains("size guard"));
  }
  SUBCASE("workers do not change results") {
    cfg.spectrum_m1 = {3, 5};
    cfg.spectrum_n = {6, 8};
    const auto serial = run_spectrum_study(cfg);
    cfg.workers = 2;
    const auto parallel = run_spectrum_study(cfg);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i].eigenvalues == parallel[i].eigenvalues);
  }
}

TEST_CASE("workers do not change solve records") {
  ExperimentConfig cfg;
  cfg.gammas = {1e-4, 1e-8};
  cfg.steps = {std::ldexp(1.0, -4), std::ldexp(1.0, -5)};
  cfg.preconditioners = {"strang", "mod-tau"};
  const auto a = run_experiment(cfg);
  cfg.workers = 2;
  const auto b = run_experiment(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].gamma == b[i].gamma);
    CHECK(a[i].preconditioner == b[i].preconditioner);
    CHECK(a[i].iterations == b[i].iterations);
    CHECK(a[i].e_y == b[i].e_y);
  }
}

TEST_CASE("spectral JSON file round trip") {
  ExperimentConfig cfg;
  cfg.gammas = {1e-4};
  cfg.spectrum_m1 = {3};
  cfg.spectrum_n = {4, 6};
  const auto reps = run_spectrum_study(cfg);
  const auto path = std::filesystem::temp_directory_path() / "wavepint_test_reports.json";
  emit_json(reps, path);
  std::ifstream in(path);
  const auto back = parse_json_reports(in);
  std::filesystem::remove(path);
  REQUIRE(back.size() == 2);
  CHECK(back[1].eigenvalues == reps[1].eigenvalues);
  CHECK(back[1].n == 6);
  std::istringstream single(nlohmann::json(reps[0]).dump());
  CHECK(parse_json_reports(single).size() == 1);
}

TEST_CASE("parse_step") {
  CHECK(parse_step("2^-7") == std::ldexp(1.0, -7));
  CHECK(parse_step("1/128") == std::ldexp(1.0, -7));
  CHECK(parse_step("0.0078125") == std::ldexp(1.0, -7));
  CHECK_THROWS_AS(parse_step("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_step("2^x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_step("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_step(""), std::invalid_argument);
}
