#pragma once

// Experiment runner: solve sweeps (iteration/error tables) and spectrum studies.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "wavepint/preconditioners.hpp"
#include "wavepint/spectral.hpp"

namespace wavepint {

enum class ExperimentMode { Solve, Spectrum };

struct ExperimentConfig {
  std::string problem = "example-1d";
  std::vector<double> gammas;
  /// Spatial steps h = 1/(m1+1); each defines a coupled grid (n = m1 + 2 at T = 2).
  std::vector<double> steps;
  std::vector<std::string> preconditioners;
  double final_time = 2.0;
  double tol = 1e-10;
  int maxit = 200;
  ExperimentMode mode = ExperimentMode::Solve;
  /// Finest h allowed without `allow_large` (2^-8 in 1D, 2^-6 in 2D).
  bool allow_large = false;
  int workers = 1;
  /// Spectrum mode: explicit (m1, n) pairs; preconditioned spectra when set.
  std::vector<int> spectrum_m1;
  std::vector<int> spectrum_n;
  std::string spectrum_precond;
};

struct RunRecord {
  double gamma = 0;
  double h = 0;
  long long dof = 0;  // 2 m n
  std::string preconditioner;
  int iterations = 0;
  bool converged = false;
  double wall_time_s = 0;
  double e_y = 0;
  double e_p = 0;
  double final_relative_residual = 0;
};

/// Log sink for skipped runs and progress messages.
using Logger = std::function<void(const std::string&)>;

/// One record per (gamma, h, preconditioner); non-converged runs are recorded
/// with converged = false and iterations = maxit. Runs exceeding the desk-scale
/// caps or the abs-h memory guard are skipped and logged.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const Logger& log = {});

/// Single solve on an explicit grid; errors are NaN when no exact solution exists.
RunRecord run_single(const std::string& problem, const GridSpec& grid, PrecondMethod method,
                     double tol, int maxit);

std::vector<SpectralReport> run_spectrum_study(const ExperimentConfig& config,
                                               const Logger& log = {});

/// Report for the (unpreconditioned) A at the given grid, or of P^{-1/2} A P^{-1/2}.
SpectralReport spectrum_report(const GridSpec& grid, double delta = 1e-2);
SpectralReport preconditioned_report(const GridSpec& grid, PrecondMethod method,
                                     double delta = 1e-2);

inline constexpr const char* kCsvHeader =
    "gamma,h,dof,preconditioner,iterations,converged,wall_time_s,e_y,e_p,final_relative_residual";

void write_csv(const std::vector<RunRecord>& records, std::ostream& out);
void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
std::vector<RunRecord> parse_csv(std::istream& in);

void emit_json(const std::vector<SpectralReport>& reports, const std::filesystem::path& path);
std::vector<SpectralReport> parse_json_reports(std::istream& in);

/// Named presets: table1 .. table6 (solve sweeps), figures-1d/2d (spectrum studies).
ExperimentConfig preset(const std::string& name);

/// Parses "2^-7", "0.0078125" or "1/128".
double parse_step(const std::string& text);

}  // namespace wavepint
