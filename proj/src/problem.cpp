#include "wavepint/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavepint/operators.hpp"

namespace wavepint {

namespace {

constexpr double kPi = std::numbers::pi;

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

GridSpec build_grid(int dim, int m1, int n, double final_time, double gamma) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("build_grid: dim must be 1 or 2");
  if (m1 < 1) throw std::invalid_argument("build_grid: m1 must be >= 1");
  if (n < 1) throw std::invalid_argument("build_grid: n must be >= 1");
  if (!(final_time > 0)) throw std::invalid_argument("build_grid: final time must be positive");
  if (!(gamma > 0)) throw std::invalid_argument("build_grid: gamma must be positive");

  GridSpec g;
  g.dim = dim;
  g.m1 = m1;
  g.m = ipow(m1, dim);
  g.n = n;
  g.final_time = final_time;
  g.tau = final_time / n;
  g.h = 1.0 / (m1 + 1);
  g.gamma = gamma;
  g.alpha = g.tau * g.tau / std::sqrt(gamma);
  return g;
}

GridSpec coupled_grid(int dim, int m1, double final_time, double gamma) {
  // h = (2/tau - 1)^{-1}  =>  tau = 2h / (1 + h)  =>  n = T (m1 + 2) / 2
  const double n_real = final_time * (m1 + 2) / 2.0;
  const double n_round = std::round(n_real);
  if (n_round < 1 || std::abs(n_real - n_round) > 1e-9 * n_real)
    throw std::invalid_argument("coupled_grid: T (m1 + 2) / 2 is not an integer");
  return build_grid(dim, m1, static_cast<int>(n_round), final_time, gamma);
}

int interior_points_for_step(double h) {
  if (!(h > 0) || h >= 1) throw std::invalid_argument("spatial step must lie in (0, 1)");
  const double inv = 1.0 / h;
  const double r = std::round(inv);
  if (std::abs(inv - r) > 1e-9 * inv)
    throw std::invalid_argument("spatial step must be 1/integer");
  return static_cast<int>(r) - 1;
}

WaveControlProblem example_1d(double gamma) {
  constexpr double T = 2.0;
  WaveControlProblem pb;
  pb.name = "example-1d";
  pb.f = [gamma](const Point& x, double t) {
    const double d = std::exp(t) - std::exp(T);
    return -std::sin(kPi * x.x1) * d * d / gamma;
  };
  pb.g = [](const Point& x, double t) {
    const double s = std::sin(kPi * x.x1);
    const double d = std::exp(t) - std::exp(T);
    return (4 * std::exp(2 * t) - 2 * std::exp(T + t)) * s + kPi * kPi * s * d * d +
           s * std::cos(kPi * t);
  };
  pb.psi0 = [](const Point& x) { return std::sin(kPi * x.x1); };
  pb.psi1 = [](const Point&) { return 0.0; };
  pb.exact_y = [](const Point& x, double t) { return std::sin(kPi * x.x1) * std::cos(kPi * t); };
  pb.exact_p = [](const Point& x, double t) {
    const double d = std::exp(t) - std::exp(T);
    return std::sin(kPi * x.x1) * d * d;
  };
  return pb;
}

WaveControlProblem example_2d(double gamma) {
  constexpr double T = 2.0;
  auto mode = [](const Point& x) { return std::sin(kPi * x.x1) * std::sin(kPi * x.x2); };
  WaveControlProblem pb;
  pb.name = "example-2d";
  pb.f = [gamma, mode](const Point& x, double t) {
    return ((1 + 2 * kPi * kPi) * std::exp(t) - (t - T) * (t - T) / gamma) * mode(x);
  };
  pb.g = [mode](const Point& x, double t) {
    return (std::exp(t) + 2 + 2 * kPi * kPi * (t - T) * (t - T)) * mode(x);
  };
  pb.psi0 = mode;
  pb.psi1 = mode;
  pb.exact_y = [mode](const Point& x, double t) { return std::exp(t) * mode(x); };
  pb.exact_p = [mode](const Point& x, double t) { return (t - T) * (t - T) * mode(x); };
  return pb;
}

WaveControlProblem problem_by_name(const std::string& name, double gamma) {
  if (name == "example-1d") return example_1d(gamma);
  if (name == "example-2d") return example_2d(gamma);
  throw std::invalid_argument("unknown problem '" + name + "'");
}

int problem_dimension(const std::string& name) {
  if (name == "example-1d") return 1;
  if (name == "example-2d") return 2;
  throw std::invalid_argument("unknown problem '" + name + "'");
}

Point grid_point(const GridSpec& grid, Eigen::Index i) {
  if (grid.dim == 1) return {double(i + 1) * grid.h, 0.0};
  const Eigen::Index i1 = i % grid.m1;
  const Eigen::Index i2 = i / grid.m1;
  return {double(i1 + 1) * grid.h, double(i2 + 1) * grid.h};
}

Eigen::VectorXd sample(const GridSpec& grid, const SpaceTimeSampler& fn, double t) {
  Eigen::VectorXd out(grid.m);
  for (Eigen::Index i = 0; i < grid.m; ++i) out[i] = fn(grid_point(grid, i), t);
  return out;
}

Eigen::VectorXd sample(const GridSpec& grid, const SpaceSampler& fn) {
  Eigen::VectorXd out(grid.m);
  for (Eigen::Index i = 0; i < grid.m; ++i) out[i] = fn(grid_point(grid, i));
  return out;
}

BlockVector assemble_rhs(const WaveControlProblem& problem, const GridSpec& grid) {
  const Eigen::Index m = grid.m;
  const int n = grid.n;
  const double tau2 = grid.tau * grid.tau;
  const double sg = std::sqrt(grid.gamma);

  BlockVector rhs(grid.system_size());
  auto g_block = rhs.head(grid.block_size());
  auto f_block = rhs.tail(grid.block_size());

  for (int k = 1; k <= n; ++k) {
    const double w = (k == n) ? 0.5 : 1.0;
    g_block.segment((k - 1) * m, m) = w * tau2 * sample(grid, problem.g, k * grid.tau);
  }

  for (int k = 0; k < n; ++k)
    f_block.segment(k * m, m) = tau2 * sample(grid, problem.f, k * grid.tau);

  // First time row: the leap-frog step at t = 0 with the ghost level eliminated
  // through y_t(x, 0) = psi1, halved.
  const Eigen::VectorXd psi0 = sample(grid, problem.psi0);
  const Eigen::VectorXd psi1 = sample(grid, problem.psi1);
  f_block.head(m) = 0.5 * f_block.head(m) + psi0 + grid.tau * psi1;

  // Second time row: the y^(0) = psi0 term of the band is data.
  if (n >= 2) {
    const NegativeLaplacian lap(grid);
    f_block.segment(m, m) -= lap.apply_l(psi0);
  }

  f_block *= sg;
  return rhs;
}

StateAdjoint recover_solution(const BlockVector& x, const GridSpec& grid) {
  if (x.size() != grid.system_size())
    throw std::invalid_argument("recover_solution: length mismatch");
  StateAdjoint out;
  out.y = x.head(grid.block_size()) / std::sqrt(grid.gamma);
  out.p = x.tail(grid.block_size());
  return out;
}

BlockVector pack_solution(const Eigen::VectorXd& y, const Eigen::VectorXd& p, const GridSpec& grid) {
  if (y.size() != grid.block_size() || p.size() != grid.block_size())
    throw std::invalid_argument("pack_solution: length mismatch");
  BlockVector x(grid.system_size());
  x.head(grid.block_size()) = std::sqrt(grid.gamma) * y;
  x.tail(grid.block_size()) = p;
  return x;
}

ErrorNorms error_norms(const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                       const WaveControlProblem& problem, const GridSpec& grid) {
  if (!problem.exact_y || !problem.exact_p)
    throw std::invalid_argument("error_norms: problem has no exact solution");
  if (y.size() != grid.block_size() || p.size() != grid.block_size())
    throw std::invalid_argument("error_norms: length mismatch");

  const double weight = std::pow(grid.h, grid.dim / 2.0);
  const Eigen::Index m = grid.m;
  ErrorNorms e;
  for (int k = 0; k < grid.n; ++k) {
    const double ty = (k + 1) * grid.tau;
    const double tp = k * grid.tau;
    const double ey = (y.segment(k * m, m) - sample(grid, *problem.exact_y, ty)).norm();
    const double ep = (p.segment(k * m, m) - sample(grid, *problem.exact_p, tp)).norm();
    e.e_y = std::max(e.e_y, weight * ey);
    e.e_p = std::max(e.e_p, weight * ep);
  }
  return e;
}

}  // namespace wavepint
