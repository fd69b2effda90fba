#include "wavepint/dense.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace wavepint::dense {

namespace {

void check_info(lapack_int info, const char* routine) {
  if (info != 0)
    throw std::runtime_error(std::string(routine) + " failed, info = " + std::to_string(info));
}

void check_symmetric(const Eigen::MatrixXd& a, double sym_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix is not square");
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > sym_tol * std::max(scale, 1e-300))
    throw std::invalid_argument("matrix is not symmetric (max |A - A^T| = " +
                                std::to_string(asym) + ")");
}

}  // namespace

SymmetricEigen eigh(const Eigen::MatrixXd& a, double sym_tol) {
  check_symmetric(a, sym_tol);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out;
  out.vectors = dense::symmetrized(a);
  out.values.resize(n);
  if (n == 0) return out;
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n,
                            out.values.data()),
             "dsyevd");
  return out;
}

Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& a, double sym_tol) {
  check_symmetric(a, sym_tol);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = dense::symmetrized(a);
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data()), "dsyevd");
  return w;
}

Svd svd(const Eigen::MatrixXd& a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Eigen::MatrixXd work = a;
  Svd out;
  out.u.resize(m, k);
  out.sigma.resize(k);
  out.vt.resize(k, n);
  if (k == 0) return out;
  check_info(LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m, out.sigma.data(),
                            out.u.data(), m, out.vt.data(), k),
             "dgesdd");
  return out;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  Eigen::MatrixXd work = a;
  Eigen::VectorXd s(std::min(m, n));
  if (s.size() == 0) return s;
  check_info(LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), nullptr, 1,
                            nullptr, 1),
             "dgesdd");
  return s;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  Eigen::MatrixXcd work = a;
  Eigen::VectorXd s(std::min(m, n));
  if (s.size() == 0) return s;
  check_info(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n,
                            reinterpret_cast<lapack_complex_double*>(work.data()), m, s.data(),
                            nullptr, 1, nullptr, 1),
             "zgesdd");
  return s;
}

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& a) {
  const auto eig = eigh(a, 1e-10);
  if (eig.values.size() > 0 && eig.values.minCoeff() <= 0)
    throw std::invalid_argument("spd_sqrt: matrix is not positive definite");
  const Eigen::VectorXd r = eig.values.cwiseSqrt();
  return eig.vectors * r.asDiagonal() * eig.vectors.transpose();
}

Eigen::MatrixXd spd_inverse_sqrt(const Eigen::MatrixXd& a) {
  const auto eig = eigh(a, 1e-10);
  if (eig.values.size() > 0 && eig.values.minCoeff() <= 0)
    throw std::invalid_argument("spd_inverse_sqrt: matrix is not positive definite");
  const Eigen::VectorXd r = eig.values.cwiseSqrt().cwiseInverse();
  return eig.vectors * r.asDiagonal() * eig.vectors.transpose();
}

}  // namespace wavepint::dense
