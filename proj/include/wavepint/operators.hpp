#pragma once

// Matrix-free operators of the all-at-once system:
//   -Delta_m                      five/three point negative Laplacian
//   T = B1 (x) I - tau^2/2 B2 (x) Delta      block lower triangular Toeplitz
//   A = [ alpha Icheck (x) I , T^T ; T , -alpha Ihat (x) I ]

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wavepint/problem.hpp"

namespace wavepint {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

class NegativeLaplacian {
 public:
  enum class Kind { FiniteDifference, Zero };

  explicit NegativeLaplacian(const GridSpec& grid, Kind kind = Kind::FiniteDifference);

  /// The "Delta = 0" fixture: L_m = I, used to isolate the time structure.
  static NegativeLaplacian zero(const GridSpec& grid) { return NegativeLaplacian(grid, Kind::Zero); }

  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  void apply_into(const double* v, double* out) const;

  /// w + tau^2/2 (-Delta) w.
  [[nodiscard]] Eigen::VectorXd apply_l(const Eigen::VectorXd& w) const;

  [[nodiscard]] Eigen::SparseMatrix<double> to_sparse() const;

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_zero() const { return kind_ == Kind::Zero; }

 private:
  GridSpec grid_;
  Kind kind_;
};

class BlockToeplitzT {
 public:
  explicit BlockToeplitzT(NegativeLaplacian laplacian);

  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  [[nodiscard]] Eigen::VectorXd apply_transpose(const Eigen::VectorXd& v) const;

  [[nodiscard]] const GridSpec& grid() const { return lap_.grid(); }
  [[nodiscard]] const NegativeLaplacian& laplacian() const { return lap_; }

 private:
  NegativeLaplacian lap_;
};

class SaddleOperator {
 public:
  explicit SaddleOperator(const GridSpec& grid);
  explicit SaddleOperator(NegativeLaplacian laplacian);

  [[nodiscard]] BlockVector apply(const BlockVector& v) const;
  [[nodiscard]] LinearMap as_map() const;

  [[nodiscard]] const GridSpec& grid() const { return t_.grid(); }
  [[nodiscard]] const BlockToeplitzT& toeplitz() const { return t_; }

 private:
  BlockToeplitzT t_;
};

inline constexpr Eigen::Index kDenseSizeLimit = 10000;

/// Column j is op(e_j). Throws std::length_error above kDenseSizeLimit.
Eigen::MatrixXd materialize_dense(const LinearMap& op, Eigen::Index size);

}  // namespace wavepint
