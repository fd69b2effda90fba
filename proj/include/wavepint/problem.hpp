#pragma once

// Discretization parameters, control-problem data and right-hand-side
// assembly for the all-at-once leap-frog system of the wave control problem.
//
// Unknown layout (BlockVector, length 2*m*n):
//   [ sqrt(gamma) * y^(1), ..., sqrt(gamma) * y^(n) | p^(0), ..., p^(n-1) ]
// time-major, spatial index fastest, lexicographic in 2D.

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace wavepint {

using BlockVector = Eigen::VectorXd;

struct GridSpec {
  int dim = 1;           // spatial dimension, 1 or 2
  int m1 = 1;            // interior points per spatial direction
  int m = 1;             // m1^dim
  int n = 2;             // time steps
  double final_time = 1;
  double tau = 0.5;      // final_time / n
  double h = 0.5;        // 1 / (m1 + 1)
  double gamma = 1;
  double alpha = 0.25;   // tau^2 / sqrt(gamma)

  [[nodiscard]] Eigen::Index block_size() const { return Eigen::Index(m) * n; }
  [[nodiscard]] Eigen::Index system_size() const { return 2 * block_size(); }
};

GridSpec build_grid(int dim, int m1, int n, double final_time, double gamma);

/// Grid with the experiment coupling h = (2/tau - 1)^{-1}, i.e.
/// n = final_time * (m1 + 2) / 2. Throws if that n is not integral.
GridSpec coupled_grid(int dim, int m1, double final_time, double gamma);

/// m1 such that h = 1/(m1+1) equals the given step; h must be 1/integer.
int interior_points_for_step(double h);

struct Point {
  double x1 = 0;
  double x2 = 0;
};

using SpaceTimeSampler = std::function<double(const Point&, double)>;
using SpaceSampler = std::function<double(const Point&)>;

struct WaveControlProblem {
  std::string name;
  SpaceTimeSampler f;      // source
  SpaceTimeSampler g;      // tracking target
  SpaceSampler psi0;       // y(x, 0)
  SpaceSampler psi1;       // y_t(x, 0)
  std::optional<SpaceTimeSampler> exact_y;
  std::optional<SpaceTimeSampler> exact_p;
};

WaveControlProblem example_1d(double gamma);
WaveControlProblem example_2d(double gamma);

/// Preset lookup: "example-1d" or "example-2d".
WaveControlProblem problem_by_name(const std::string& name, double gamma);
int problem_dimension(const std::string& name);

/// Interior grid point with lexicographic index `i` (x1 fastest in 2D).
Point grid_point(const GridSpec& grid, Eigen::Index i);

/// Samples a space-time function on the interior grid at time t.
Eigen::VectorXd sample(const GridSpec& grid, const SpaceTimeSampler& fn, double t);
Eigen::VectorXd sample(const GridSpec& grid, const SpaceSampler& fn);

/// Right-hand side [g ; sqrt(gamma) f] of the all-at-once system.
BlockVector assemble_rhs(const WaveControlProblem& problem, const GridSpec& grid);

struct StateAdjoint {
  Eigen::VectorXd y;  // y^(1..n), time-major
  Eigen::VectorXd p;  // p^(0..n-1), time-major
};

StateAdjoint recover_solution(const BlockVector& x, const GridSpec& grid);
BlockVector pack_solution(const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                          const GridSpec& grid);

struct ErrorNorms {
  double e_y = 0;
  double e_p = 0;
};

/// Discrete L^inf(0,T; L^2(Omega)) errors against the exact solution.
ErrorNorms error_norms(const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                       const WaveControlProblem& problem, const GridSpec& grid);

}  // namespace wavepint
