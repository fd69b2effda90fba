#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "wavepint/operators.hpp"
#include "wavepint/preconditioners.hpp"

namespace wavepint {

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  bool breakdown = false;  // converged through a lucky Lanczos breakdown
  /// ||r_k||_{P^{-1}} for k = 0..iterations (entry 0 is the initial residual).
  std::vector<double> residual_history;
  /// ||r_k||_{P^{-1}} / ||r_0||_{P^{-1}} at exit.
  double final_relative_residual = 0;
  /// ||b - A x||_2 / ||b||_2 at exit, computed explicitly.
  double true_relative_residual = 0;
  double wall_time = 0;  // seconds
};

struct MinresOptions {
  double tol = 1e-10;
  int maxit = 200;
};

struct MinresResult {
  Eigen::VectorXd x;
  SolveReport report;
};

class MinresError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Preconditioned MINRES from a zero initial guess. The preconditioner must be
/// SPD; stopping uses the P^{-1}-norm residual of the Lanczos recurrence.
MinresResult minres(const LinearMap& op, const LinearMap& precond_inverse,
                    const Eigen::VectorXd& b, const MinresOptions& options = {});

MinresResult minres(const SaddleOperator& op, const Preconditioner& precond,
                    const BlockVector& b, const MinresOptions& options = {});

MinresResult minres_unpreconditioned(const LinearMap& op, const Eigen::VectorXd& b,
                                     const MinresOptions& options = {});
MinresResult minres_unpreconditioned(const SaddleOperator& op, const BlockVector& b,
                                     const MinresOptions& options = {});

}  // namespace wavepint
