// wavepint_cli: solve, spectrum and sweep front end.
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wavepint/bench.hpp"
#include "wavepint/problem.hpp"

using namespace wavepint;

namespace {

void log_stderr(const std::string& msg) { std::cerr << msg << '\n'; }

int report_records(const std::vector<RunRecord>& records, const std::string& out, bool strict) {
  if (out.empty() || out == "-")
    write_csv(records, std::cout);
  else
    emit_csv(records, out);
  int failures = 0;
  for (const auto& r : records) {
    if (r.converged) continue;
    ++failures;
    if (strict)
      std::cerr << "not converged: gamma=" << r.gamma << " h=" << r.h
                << " precond=" << r.preconditioner << " after " << r.iterations << " iterations\n";
  }
  return strict && failures > 0 ? 1 : 0;
}

int side_length(int m, int dim) {
  const int m1 = dim == 1 ? m : static_cast<int>(std::lround(std::sqrt(double(m))));
  if (dim == 2 && m1 * m1 != m) throw std::invalid_argument("--m must be a perfect square in 2D");
  return m1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"All-at-once wave control solver and spectral toolkit"};
  app.set_config("--config", "", "TOML-style config file mirroring the flags");
  app.require_subcommand(1);

  // solve
  std::string problem = "example-1d";
  std::vector<double> gammas{1e-6};
  std::vector<std::string> steps;
  std::vector<std::string> preconds{"strang"};
  int m1 = 0;
  int n = 0;
  double tol = 1e-10;
  int maxit = 200;
  std::string out;
  bool strict = false;
  bool large = false;
  int workers = 1;
  auto* solve = app.add_subcommand("solve", "Solve the all-at-once system with MINRES");
  solve->set_help_flag("--help", "Print this help message and exit");
  solve->add_option("--problem", problem, "example-1d | example-2d")->capture_default_str();
  solve->add_option("--gamma", gammas, "Regularization parameter(s)")->capture_default_str();
  solve->add_option("--h", steps, "Spatial step(s): 2^-7, 1/128 or 0.0078125");
  solve->add_option("--m1", m1, "Interior points per direction (instead of --h)");
  solve->add_option("--n", n, "Time steps (with --m1; default: coupled to h)");
  solve->add_option("--precond", preconds, "abs-h | strang | tau | mod-strang | mod-tau | none")
      ->capture_default_str();
  solve->add_option("--tol", tol)->capture_default_str();
  solve->add_option("--maxit", maxit)->capture_default_str();
  solve->add_option("--out", out, "CSV output path (default stdout)");
  solve->add_flag("--strict", strict, "Exit nonzero if any run does not converge");
  solve->add_flag("--large", large, "Allow grids beyond the desk-scale caps");
  solve->add_option("--workers", workers)->capture_default_str();

  // spectrum
  std::string sp_problem = "example-1d";
  int sp_m = 15;
  std::vector<int> sp_n{32};
  std::vector<double> sp_gammas{1e-4};
  std::string sp_precond;
  std::string sp_out;
  int sp_workers = 1;
  auto* spectrum = app.add_subcommand("spectrum", "Compare eigenvalues of A with symbol samples");
  spectrum->add_option("--problem", sp_problem)->capture_default_str();
  spectrum->add_option("--m", sp_m, "Spatial unknowns m (a square in 2D)")->capture_default_str();
  spectrum->add_option("--n", sp_n, "Time steps")->capture_default_str();
  spectrum->add_option("--gamma", sp_gammas)->capture_default_str();
  spectrum->add_option("--precond", sp_precond, "Report the preconditioned spectrum instead");
  spectrum->add_option("--out", sp_out, "JSON output path (default stdout)");
  spectrum->add_option("--workers", sp_workers)->capture_default_str();

  // sweep
  std::string preset_name;
  std::string sw_out;
  bool sw_strict = false;
  bool sw_large = false;
  int sw_workers = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a named table preset");
  sweep->add_option("--preset", preset_name, "table1..table6, figures-1d, figures-2d")->required();
  sweep->add_option("--out", sw_out, "CSV (solve presets) or JSON (figure presets) path");
  sweep->add_flag("--strict", sw_strict);
  sweep->add_flag("--large", sw_large);
  sweep->add_option("--workers", sw_workers)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const int dim = problem_dimension(problem);
      if (m1 > 0) {
        std::vector<RunRecord> records;
        for (double gamma : gammas) {
          const GridSpec grid =
              n > 0 ? build_grid(dim, m1, n, 2.0, gamma) : coupled_grid(dim, m1, 2.0, gamma);
          for (const auto& pc : preconds)
            records.push_back(run_single(problem, grid, parse_precond(pc), tol, maxit));
        }
        return report_records(records, out, strict);
      }
      if (steps.empty()) throw std::invalid_argument("solve: give --h or --m1");
      ExperimentConfig cfg;
      cfg.problem = problem;
      cfg.gammas = gammas;
      for (const auto& s : steps) cfg.steps.push_back(parse_step(s));
      cfg.preconditioners = preconds;
      cfg.tol = tol;
      cfg.maxit = maxit;
      cfg.allow_large = large;
      cfg.workers = workers;
      return report_records(run_experiment(cfg, log_stderr), out, strict);
    }
    if (*spectrum) {
      ExperimentConfig cfg;
      cfg.problem = sp_problem;
      cfg.mode = ExperimentMode::Spectrum;
      cfg.gammas = sp_gammas;
      cfg.spectrum_m1 = {side_length(sp_m, problem_dimension(sp_problem))};
      cfg.spectrum_n = sp_n;
      cfg.spectrum_precond = sp_precond;
      cfg.workers = sp_workers;
      const auto reports = run_spectrum_study(cfg, log_stderr);
      if (sp_out.empty() || sp_out == "-")
        std::cout << nlohmann::json(reports).dump(1) << '\n';
      else
        emit_json(reports, sp_out);
      for (const auto& r : reports)
        std::cerr << "m=" << r.m << " n=" << r.n << " gamma=" << r.gamma
                  << " mean|diff|=" << r.mean_abs_diff
                  << " interior mean|diff|=" << r.interior_mean_abs_diff
                  << " outliers=" << r.outlier_count << '\n';
      return 0;
    }
    if (*sweep) {
      ExperimentConfig cfg = preset(preset_name);
      cfg.allow_large = sw_large;
      cfg.workers = sw_workers;
      if (cfg.mode == ExperimentMode::Spectrum) {
        const auto reports = run_spectrum_study(cfg, log_stderr);
        if (sw_out.empty() || sw_out == "-")
          std::cout << nlohmann::json(reports).dump(1) << '\n';
        else
          emit_json(reports, sw_out);
        return 0;
      }
      return report_records(run_experiment(cfg, log_stderr), sw_out, sw_strict);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
