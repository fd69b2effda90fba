#pragma once

// Dense linear algebra used by the verification oracles (LAPACK backed).

#include <Eigen/Core>

namespace wavepint::dense {

struct SymmetricEigen {
  Eigen::VectorXd values;   // nondecreasing
  Eigen::MatrixXd vectors;  // columns, orthonormal
};

/// Full symmetric eigendecomposition. Throws std::invalid_argument when the
/// input is not symmetric to `sym_tol * max|a_ij|`.
SymmetricEigen eigh(const Eigen::MatrixXd& a, double sym_tol = 1e-12);
Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& a, double sym_tol = 1e-12);

struct Svd {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;  // nonincreasing
  Eigen::MatrixXd vt;
};

Svd svd(const Eigen::MatrixXd& a);
Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a);

/// f(A) = V f(Lambda) V^T for symmetric A.
template <class Fn>
Eigen::MatrixXd spectral_function(const Eigen::MatrixXd& a, Fn&& fn) {
  const auto eig = eigh(a);
  Eigen::VectorXd mapped = eig.values.unaryExpr(fn);
  return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

/// Principal square root of an SPD matrix. Throws if an eigenvalue is <= 0.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& a);
Eigen::MatrixXd spd_inverse_sqrt(const Eigen::MatrixXd& a);

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) {
  return 0.5 * (a + a.transpose());
}

}  // namespace wavepint::dense
