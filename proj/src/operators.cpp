#include "wavepint/operators.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace wavepint {

namespace {

void check_length(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(got) +
                                ", expected " + std::to_string(want));
}

}  // namespace

NegativeLaplacian::NegativeLaplacian(const GridSpec& grid, Kind kind) : grid_(grid), kind_(kind) {}

void NegativeLaplacian::apply_into(const double* v, double* out) const {
  const int m1 = grid_.m1;
  if (kind_ == Kind::Zero) {
    for (int i = 0; i < grid_.m; ++i) out[i] = 0.0;
    return;
  }
  const double s = 1.0 / (grid_.h * grid_.h);
  if (grid_.dim == 1) {
    for (int i = 0; i < m1; ++i) {
      const double left = i > 0 ? v[i - 1] : 0.0;
      const double right = i + 1 < m1 ? v[i + 1] : 0.0;
      out[i] = s * (2 * v[i] - left - right);
    }
    return;
  }
  for (int i2 = 0; i2 < m1; ++i2) {
    for (int i1 = 0; i1 < m1; ++i1) {
      const int idx = i2 * m1 + i1;
      double acc = 4 * v[idx];
      if (i1 > 0) acc -= v[idx - 1];
      if (i1 + 1 < m1) acc -= v[idx + 1];
      if (i2 > 0) acc -= v[idx - m1];
      if (i2 + 1 < m1) acc -= v[idx + m1];
      out[idx] = s * acc;
    }
  }
}

Eigen::VectorXd NegativeLaplacian::apply(const Eigen::VectorXd& v) const {
  check_length(v.size(), grid_.m, "apply_neg_laplacian");
  Eigen::VectorXd out(grid_.m);
  apply_into(v.data(), out.data());
  return out;
}

Eigen::VectorXd NegativeLaplacian::apply_l(const Eigen::VectorXd& w) const {
  return w + 0.5 * grid_.tau * grid_.tau * apply(w);
}

Eigen::SparseMatrix<double> NegativeLaplacian::to_sparse() const {
  const int m = grid_.m;
  Eigen::SparseMatrix<double> k(m, m);
  if (kind_ == Kind::Zero) return k;
  std::vector<Eigen::Triplet<double>> trip;
  const double s = 1.0 / (grid_.h * grid_.h);
  const int m1 = grid_.m1;
  if (grid_.dim == 1) {
    for (int i = 0; i < m1; ++i) {
      trip.emplace_back(i, i, 2 * s);
      if (i > 0) trip.emplace_back(i, i - 1, -s);
      if (i + 1 < m1) trip.emplace_back(i, i + 1, -s);
    }
  } else {
    for (int i2 = 0; i2 < m1; ++i2) {
      for (int i1 = 0; i1 < m1; ++i1) {
        const int idx = i2 * m1 + i1;
        trip.emplace_back(idx, idx, 4 * s);
        if (i1 > 0) trip.emplace_back(idx, idx - 1, -s);
        if (i1 + 1 < m1) trip.emplace_back(idx, idx + 1, -s);
        if (i2 > 0) trip.emplace_back(idx, idx - m1, -s);
        if (i2 + 1 < m1) trip.emplace_back(idx, idx + m1, -s);
      }
    }
  }
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

BlockToeplitzT::BlockToeplitzT(NegativeLaplacian laplacian) : lap_(std::move(laplacian)) {}

// Block row k: L v_k - 2 v_{k-1} + L v_{k-2}.
Eigen::VectorXd BlockToeplitzT::apply(const Eigen::VectorXd& v) const {
  const GridSpec& g = grid();
  check_length(v.size(), g.block_size(), "apply_T");
  const Eigen::Index m = g.m;
  Eigen::VectorXd out(v.size());
  Eigen::VectorXd lv(m);
  Eigen::VectorXd lprev = Eigen::VectorXd::Zero(m);   // L v_{k-1}
  Eigen::VectorXd lprev2 = Eigen::VectorXd::Zero(m);  // L v_{k-2}
  for (int k = 0; k < g.n; ++k) {
    lv = lap_.apply_l(v.segment(k * m, m));
    auto o = out.segment(k * m, m);
    o = lv;
    if (k >= 1) o -= 2 * v.segment((k - 1) * m, m);
    if (k >= 2) o += lprev2;
    lprev2 = lprev;
    lprev = lv;
  }
  return out;
}

// Block row k: L v_k - 2 v_{k+1} + L v_{k+2}.
Eigen::VectorXd BlockToeplitzT::apply_transpose(const Eigen::VectorXd& v) const {
  const GridSpec& g = grid();
  check_length(v.size(), g.block_size(), "apply_T_transpose");
  const Eigen::Index m = g.m;
  const int n = g.n;
  Eigen::VectorXd out(v.size());
  std::vector<Eigen::VectorXd> lv(n);
  for (int k = 0; k < n; ++k) lv[k] = lap_.apply_l(v.segment(k * m, m));
  for (int k = 0; k < n; ++k) {
    auto o = out.segment(k * m, m);
    o = lv[k];
    if (k + 1 < n) o -= 2 * v.segment((k + 1) * m, m);
    if (k + 2 < n) o += lv[k + 2];
  }
  return out;
}

SaddleOperator::SaddleOperator(const GridSpec& grid) : t_(NegativeLaplacian(grid)) {}

SaddleOperator::SaddleOperator(NegativeLaplacian laplacian) : t_(std::move(laplacian)) {}

BlockVector SaddleOperator::apply(const BlockVector& v) const {
  const GridSpec& g = grid();
  check_length(v.size(), g.system_size(), "apply_A");
  const Eigen::Index nb = g.block_size();
  const Eigen::Index m = g.m;
  const Eigen::VectorXd v1 = v.head(nb);
  const Eigen::VectorXd v2 = v.tail(nb);

  BlockVector out(v.size());
  out.head(nb) = t_.apply_transpose(v2) + g.alpha * v1;
  out.tail(nb) = t_.apply(v1) - g.alpha * v2;
  // Corner weights: Icheck = diag(1, ..., 1, 1/2), Ihat = diag(1/2, 1, ..., 1).
  out.segment(nb - m, m) -= 0.5 * g.alpha * v1.tail(m);
  out.segment(nb, m) += 0.5 * g.alpha * v2.head(m);
  return out;
}

LinearMap SaddleOperator::as_map() const {
  return [this](const Eigen::VectorXd& v) { return apply(v); };
}

Eigen::MatrixXd materialize_dense(const LinearMap& op, Eigen::Index size) {
  if (size > kDenseSizeLimit)
    throw std::length_error("materialize_dense: size " + std::to_string(size) + " exceeds " +
                            std::to_string(kDenseSizeLimit));
  Eigen::MatrixXd out(size, size);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(size);
  for (Eigen::Index j = 0; j < size; ++j) {
    e[j] = 1.0;
    const Eigen::VectorXd col = op(e);
    check_length(col.size(), size, "materialize_dense");
    out.col(j) = col;
    e[j] = 0.0;
  }
  return out;
}

}  // namespace wavepint
