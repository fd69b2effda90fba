#include "wavepint/minres.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace wavepint {

namespace {

void require_finite(double value, const char* what, int iteration) {
  if (!std::isfinite(value))
    throw MinresError(std::string("minres: non-finite ") + what + " at iteration " +
                      std::to_string(iteration));
}

}  // namespace

// Paige-Saunders MINRES with the Lanczos process in the P^{-1} inner product.
MinresResult minres(const LinearMap& op, const LinearMap& precond_inverse, const Eigen::VectorXd& b,
                    const MinresOptions& options) {
  if (!(options.tol > 0)) throw std::invalid_argument("minres: tol must be positive");
  if (options.maxit < 0) throw std::invalid_argument("minres: maxit must be nonnegative");
  for (Eigen::Index i = 0; i < b.size(); ++i) require_finite(b[i], "right-hand side", 0);

  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n = b.size();
  MinresResult result;
  SolveReport& rep = result.report;
  Eigen::VectorXd& x = result.x;
  x = Eigen::VectorXd::Zero(n);

  auto finish = [&](double phibar, double beta1) {
    rep.final_relative_residual = beta1 > 0 ? phibar / beta1 : 0.0;
    const double bnorm = b.norm();
    rep.true_relative_residual = bnorm > 0 ? (b - op(x)).norm() / bnorm : 0.0;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Eigen::VectorXd r1 = b;
  Eigen::VectorXd y = precond_inverse(r1);
  const double beta1_sq = r1.dot(y);
  require_finite(beta1_sq, "preconditioned norm", 0);
  if (beta1_sq < 0) throw MinresError("minres: preconditioner is not positive definite");
  const double beta1 = std::sqrt(beta1_sq);
  rep.residual_history.push_back(beta1);
  if (beta1 == 0) {
    rep.converged = true;
    finish(0.0, 0.0);
    return result;
  }

  const double breakdown_tol = 1e-14 * beta1;
  double oldb = 0;
  double beta = beta1;
  double dbar = 0;
  double epsln = 0;
  double phibar = beta1;
  double cs = -1;
  double sn = 0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w1(n);
  Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r2 = r1;
  Eigen::VectorXd v(n);

  for (int itn = 1; itn <= options.maxit; ++itn) {
    v = y / beta;
    y = op(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    y = precond_inverse(r2);
    oldb = beta;
    const double beta_sq = r2.dot(y);
    require_finite(beta_sq, "Lanczos coefficient", itn);
    if (beta_sq < -1e-12 * beta1_sq)
      throw MinresError("minres: preconditioner is not positive definite");
    beta = std::sqrt(std::max(beta_sq, 0.0));

    // Apply the previous rotation, then form the new one.
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;
    require_finite(phibar, "residual estimate", itn);

    rep.iterations = itn;
    rep.residual_history.push_back(phibar);
    if (phibar <= options.tol * beta1) {
      rep.converged = true;
      break;
    }
    if (beta <= breakdown_tol) {
      // Invariant Krylov subspace: the current iterate is the exact solution there.
      rep.converged = true;
      rep.breakdown = true;
      break;
    }
  }
  finish(phibar, beta1);
  return result;
}

MinresResult minres(const SaddleOperator& op, const Preconditioner& precond, const BlockVector& b,
                    const MinresOptions& options) {
  if (b.size() != op.grid().system_size())
    throw std::invalid_argument("minres: right-hand side has the wrong length");
  return minres(op.as_map(), precond.inverse_map(), b, options);
}

MinresResult minres_unpreconditioned(const LinearMap& op, const Eigen::VectorXd& b,
                                     const MinresOptions& options) {
  return minres(op, [](const Eigen::VectorXd& v) { return v; }, b, options);
}

MinresResult minres_unpreconditioned(const SaddleOperator& op, const BlockVector& b,
                                     const MinresOptions& options) {
  if (b.size() != op.grid().system_size())
    throw std::invalid_argument("minres: right-hand side has the wrong length");
  return minres_unpreconditioned(op.as_map(), b, options);
}

}  // namespace wavepint
