#include "wavepint/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wavepint/minres.hpp"
#include "wavepint/operators.hpp"
#include "wavepint/problem.hpp"

namespace wavepint {

namespace {

// Desk-scale caps on m1 without allow_large: h >= 2^-8 (1D), h >= 2^-6 (2D).
int desk_cap(int dim) { return dim == 1 ? 255 : 63; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string describe(const std::string& problem, double gamma, double h, const std::string& pc) {
  std::ostringstream os;
  os << problem << " gamma=" << gamma << " h=" << h << " precond=" << pc;
  return os.str();
}

/// Runs jobs[i]() for all i on up to `workers` threads; rethrows the first failure.
void run_parallel(std::size_t count, int workers, const std::function<void(std::size_t)>& job) {
  const std::size_t nthreads = std::max<std::size_t>(1, std::min<std::size_t>(workers, count));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

RunRecord run_single(const std::string& problem_name, const GridSpec& grid, PrecondMethod method,
                     double tol, int maxit) {
  const auto start = std::chrono::steady_clock::now();
  const WaveControlProblem problem = problem_by_name(problem_name, grid.gamma);
  if (problem_dimension(problem_name) != grid.dim)
    throw std::invalid_argument("run_single: problem dimension does not match the grid");
  const BlockVector rhs = assemble_rhs(problem, grid);
  const SaddleOperator op(grid);
  const PreconditionerPtr pc = build_preconditioner(method, grid);
  const MinresResult res = minres(op, *pc, rhs, MinresOptions{tol, maxit});

  RunRecord rec;
  rec.gamma = grid.gamma;
  rec.h = grid.h;
  rec.dof = 2LL * grid.m * grid.n;
  rec.preconditioner = to_string(method);
  rec.iterations = res.report.iterations;
  rec.converged = res.report.converged;
  rec.final_relative_residual = res.report.final_relative_residual;
  if (problem.exact_y && problem.exact_p) {
    const StateAdjoint sol = recover_solution(res.x, grid);
    const ErrorNorms e = error_norms(sol.y, sol.p, problem, grid);
    rec.e_y = e.e_y;
    rec.e_p = e.e_p;
  } else {
    rec.e_y = rec.e_p = std::numeric_limits<double>::quiet_NaN();
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, const Logger& log) {
  const int dim = problem_dimension(config.problem);
  std::vector<PrecondMethod> methods;
  for (const auto& name : config.preconditioners) methods.push_back(parse_precond(name));

  struct Job {
    GridSpec grid;
    PrecondMethod method;
  };
  std::vector<Job> jobs;
  for (double gamma : config.gammas) {
    for (double h : config.steps) {
      const int m1 = interior_points_for_step(h);
      for (PrecondMethod method : methods) {
        const std::string what = describe(config.problem, gamma, h, to_string(method));
        if (m1 > desk_cap(dim) && !config.allow_large) {
          if (log) log("skipped (desk-scale cap, needs allow_large): " + what);
          continue;
        }
        const GridSpec grid = coupled_grid(dim, m1, config.final_time, gamma);
        if (method == PrecondMethod::AbsH && grid.system_size() > kAbsHSizeLimit) {
          if (log) log("skipped (abs-h memory guard, 2mn = " + std::to_string(grid.system_size()) +
                       "): " + what);
          continue;
        }
        jobs.push_back({grid, method});
      }
    }
  }

  std::vector<RunRecord> records(jobs.size());
  std::mutex log_mutex;
  run_parallel(jobs.size(), config.workers, [&](std::size_t i) {
    records[i] = run_single(config.problem, jobs[i].grid, jobs[i].method, config.tol, config.maxit);
    if (log) {
      std::lock_guard lock(log_mutex);
      const RunRecord& r = records[i];
      log(describe(config.problem, r.gamma, r.h, r.preconditioner) +
          " iterations=" + std::to_string(r.iterations) + (r.converged ? "" : " (not converged)"));
    }
  });
  return records;
}

SpectralReport spectrum_report(const GridSpec& grid, double delta) {
  const SaddleOperator op(grid);
  const Eigen::MatrixXd a = materialize_dense(op.as_map(), grid.system_size());
  SpectralReport r = compare_spectrum(symmetric_eigenvalues(a), SymbolEvaluator(grid).sample_psi_g(),
                                      delta, grid.m);
  r.dim = grid.dim;
  r.m = grid.m;
  r.n = grid.n;
  r.gamma = grid.gamma;
  r.label = "A";
  return r;
}

// Samples are the cluster points: mn copies of -1 followed by mn copies of +1.
SpectralReport preconditioned_report(const GridSpec& grid, PrecondMethod method, double delta) {
  const SaddleOperator op(grid);
  const Eigen::MatrixXd a = materialize_dense(op.as_map(), grid.system_size());
  const PreconditionerPtr pc = build_preconditioner(method, grid);
  std::vector<double> target(grid.system_size(), 1.0);
  std::fill(target.begin(), target.begin() + grid.block_size(), -1.0);
  SpectralReport r = compare_spectrum(preconditioned_spectrum(*pc, a), std::move(target), delta);
  r.dim = grid.dim;
  r.m = grid.m;
  r.n = grid.n;
  r.gamma = grid.gamma;
  r.label = to_string(method);
  return r;
}

std::vector<SpectralReport> run_spectrum_study(const ExperimentConfig& config, const Logger& log) {
  const int dim = problem_dimension(config.problem);
  const bool preconditioned = !config.spectrum_precond.empty();
  const PrecondMethod method =
      preconditioned ? parse_precond(config.spectrum_precond) : PrecondMethod::Identity;
  const Eigen::Index limit = preconditioned ? kPreconditionedSpectrumLimit : kDenseSizeLimit;

  std::vector<GridSpec> grids;
  for (double gamma : config.gammas)
    for (int m1 : config.spectrum_m1)
      for (int n : config.spectrum_n) {
        const GridSpec g = build_grid(dim, m1, n, config.final_time, gamma);
        if (g.system_size() > limit) {
          if (log) log("skipped (dense size guard, 2mn = " + std::to_string(g.system_size()) + ")");
          continue;
        }
        grids.push_back(g);
      }

  std::vector<SpectralReport> reports(grids.size());
  run_parallel(grids.size(), config.workers, [&](std::size_t i) {
    reports[i] = preconditioned ? preconditioned_report(grids[i], method)
                                : spectrum_report(grids[i]);
  });
  return reports;
}

void write_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records)
    out << fmt(r.gamma) << ',' << fmt(r.h) << ',' << r.dof << ',' << r.preconditioner << ','
        << r.iterations << ',' << (r.converged ? "true" : "false") << ',' << fmt(r.wall_time_s)
        << ',' << fmt(r.e_y) << ',' << fmt(r.e_p) << ',' << fmt(r.final_relative_residual) << '\n';
}

void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(records, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<RunRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("parse_csv: missing or unexpected header");
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 10) throw std::invalid_argument("parse_csv: expected 10 fields in '" + line + "'");
    RunRecord r;
    r.gamma = std::stod(f[0]);
    r.h = std::stod(f[1]);
    r.dof = std::stoll(f[2]);
    r.preconditioner = f[3];
    r.iterations = std::stoi(f[4]);
    r.converged = f[5] == "true";
    r.wall_time_s = std::stod(f[6]);
    r.e_y = std::stod(f[7]);
    r.e_p = std::stod(f[8]);
    r.final_relative_residual = std::stod(f[9]);
    out.push_back(std::move(r));
  }
  return out;
}

void emit_json(const std::vector<SpectralReport>& reports, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << nlohmann::json(reports).dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<SpectralReport> parse_json_reports(std::istream& in) {
  const nlohmann::json j = nlohmann::json::parse(in);
  if (j.is_object()) return {j.get<SpectralReport>()};
  return j.get<std::vector<SpectralReport>>();
}

ExperimentConfig preset(const std::string& name) {
  const std::vector<double> all_gammas{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  auto steps = [](int from, int to) {
    std::vector<double> s;
    for (int e = from; e <= to; ++e) s.push_back(std::ldexp(1.0, -e));
    return s;
  };
  ExperimentConfig c;
  c.gammas = all_gammas;
  if (name == "table1") {
    c.problem = "example-1d";
    c.steps = steps(7, 10);
    c.preconditioners = {"strang", "tau", "none"};
  } else if (name == "table2") {
    c.problem = "example-1d";
    c.steps = steps(5, 8);
    c.preconditioners = {"strang"};
  } else if (name == "table3") {
    c.problem = "example-1d";
    c.steps = steps(7, 10);
    c.preconditioners = {"mod-strang", "mod-tau"};
  } else if (name == "table4") {
    c.problem = "example-2d";
    c.steps = steps(5, 8);
    c.preconditioners = {"strang", "tau", "none"};
  } else if (name == "table5") {
    c.problem = "example-2d";
    c.steps = steps(3, 6);
    c.preconditioners = {"strang"};
  } else if (name == "table6") {
    c.problem = "example-2d";
    c.steps = steps(5, 8);
    c.preconditioners = {"mod-strang", "mod-tau"};
  } else if (name == "figures-1d") {
    c.problem = "example-1d";
    c.mode = ExperimentMode::Spectrum;
    c.gammas = {1e-4, 1e-6};
    c.spectrum_m1 = {15};
    c.spectrum_n = {16, 32, 64};
  } else if (name == "figures-2d") {
    c.problem = "example-2d";
    c.mode = ExperimentMode::Spectrum;
    c.gammas = {1e-4, 1e-6};
    c.spectrum_m1 = {7};
    c.spectrum_n = {16, 32};
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return c;
}

double parse_step(const std::string& text) {
  auto fail = [&] { return std::invalid_argument("cannot parse step '" + text + "'"); };
  try {
    std::size_t pos = 0;
    if (const auto caret = text.find('^'); caret != std::string::npos) {
      const double base = std::stod(text.substr(0, caret), &pos);
      if (pos != caret) throw fail();
      const std::string ex = text.substr(caret + 1);
      const double e = std::stod(ex, &pos);
      if (pos != ex.size()) throw fail();
      return std::pow(base, e);
    }
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      const double num = std::stod(text.substr(0, slash), &pos);
      if (pos != slash) throw fail();
      const std::string den_text = text.substr(slash + 1);
      const double den = std::stod(den_text, &pos);
      if (pos != den_text.size() || den == 0) throw fail();
      return num / den;
    }
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw fail();
    return v;
  } catch (const std::invalid_argument&) {
    throw fail();
  } catch (const std::out_of_range&) {
    throw fail();
  }
}

}  // namespace wavepint
