#include "wavepint/preconditioners.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>

#include "wavepint/dense.hpp"

namespace wavepint {

namespace {

constexpr double kPi = std::numbers::pi;

void check_length(Eigen::Index got, Eigen::Index want) {
  if (got != want)
    throw std::invalid_argument("apply_inverse: length " + std::to_string(got) + ", expected " +
                                std::to_string(want));
}

void require_uniform(const GridSpec& grid) {
  if (grid.dim != 1 && grid.dim != 2)
    throw std::invalid_argument("fast preconditioners need a uniform 1D or 2D grid");
}

// Copies the real part back, rejecting imaginary residue above the tolerance.
void to_real(std::span<const cplx> z, double* out, double input_norm) {
  double worst = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    worst = std::max(worst, std::abs(z[i].imag()));
    out[i] = z[i].real();
  }
  if (worst > kImaginaryResidueTol * std::max(input_norm, 1e-300))
    throw std::logic_error("real pipeline produced imaginary residue " + std::to_string(worst));
}

// Real DST-I along time for every spatial index, then along space per time level.
void sine_time_space(const SinePlan& time, const SineLine& space, double* v, int m, int n) {
  std::vector<double> line(n);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < n; ++k) line[k] = v[k * m + j];
    time.apply(line);
    for (int k = 0; k < n; ++k) v[k * m + j] = line[k];
  }
  for (int k = 0; k < n; ++k) space.apply_real(std::span<double>(v + std::ptrdiff_t(k) * m, m));
}

void sine_time(const SinePlan& time, std::span<cplx> v, int m, int n) {
  std::vector<double> re(n), im(n);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < n; ++k) {
      re[k] = v[k * m + j].real();
      im[k] = v[k * m + j].imag();
    }
    time.apply(re);
    time.apply(im);
    for (int k = 0; k < n; ++k) v[k * m + j] = {re[k], im[k]};
  }
}

class IdentityPreconditioner final : public Preconditioner {
 public:
  explicit IdentityPreconditioner(const GridSpec& grid) : grid_(grid) {}
  [[nodiscard]] PrecondMethod method() const override { return PrecondMethod::Identity; }
  [[nodiscard]] const GridSpec& grid() const override { return grid_; }
  [[nodiscard]] BlockVector apply_inverse(const BlockVector& v) const override {
    check_length(v.size(), grid_.system_size());
    return v;
  }

 private:
  GridSpec grid_;
};

class AbsHPreconditioner final : public Preconditioner {
 public:
  explicit AbsHPreconditioner(const NegativeLaplacian& lap) : grid_(lap.grid()) {
    const Eigen::Index nb = grid_.block_size();
    if (2 * nb > kAbsHSizeLimit)
      throw std::length_error("abs-h: system size " + std::to_string(2 * nb) + " exceeds " +
                              std::to_string(kAbsHSizeLimit));
    const BlockToeplitzT t(lap);
    const Eigen::MatrixXd dense_t =
        materialize_dense([&t](const Eigen::VectorXd& v) { return t.apply(v); }, nb);
    auto f = dense::svd(dense_t);
    u_ = std::move(f.u);
    v_ = f.vt.transpose();
    const double a2 = grid_.alpha * grid_.alpha;
    inv_diag_ = (f.sigma.array().square() + a2).sqrt().inverse().matrix();
  }

  [[nodiscard]] PrecondMethod method() const override { return PrecondMethod::AbsH; }
  [[nodiscard]] const GridSpec& grid() const override { return grid_; }

  // blockdiag(V D^{-1} V^T, U D^{-1} U^T) with T = U Sigma V^T, D = sqrt(Sigma^2 + alpha^2).
  [[nodiscard]] BlockVector apply_inverse(const BlockVector& v) const override {
    check_length(v.size(), grid_.system_size());
    const Eigen::Index nb = grid_.block_size();
    BlockVector out(v.size());
    out.head(nb) = v_ * (inv_diag_.asDiagonal() * (v_.transpose() * v.head(nb)));
    out.tail(nb) = u_ * (inv_diag_.asDiagonal() * (u_.transpose() * v.tail(nb)));
    return out;
  }

 private:
  GridSpec grid_;
  Eigen::MatrixXd u_;
  Eigen::MatrixXd v_;
  Eigen::VectorXd inv_diag_;
};

class StrangPreconditioner final : public Preconditioner {
 public:
  explicit StrangPreconditioner(const GridSpec& grid)
      : grid_(grid),
        factors_(strang_factorization(grid)),
        forward_(grid.n, false),
        backward_(grid.n, true),
        space_(grid.m1, grid.dim) {}

  [[nodiscard]] PrecondMethod method() const override { return PrecondMethod::Strang; }
  [[nodiscard]] const GridSpec& grid() const override { return grid_; }

  // Block 1: (F (x) U) D^{-1} (F (x) U)^*; block 2 uses the conjugate pattern.
  [[nodiscard]] BlockVector apply_inverse(const BlockVector& v) const override {
    check_length(v.size(), grid_.system_size());
    const Eigen::Index nb = grid_.block_size();
    const double norm = v.norm();
    BlockVector out(v.size());
    solve_block(v.data(), out.data(), forward_, backward_, norm);
    solve_block(v.data() + nb, out.data() + nb, backward_, forward_, norm);
    return out;
  }

 private:
  void solve_block(const double* in, double* out, const FourierLine& first,
                   const FourierLine& second, double norm) const {
    const std::size_t nb = grid_.block_size();
    std::vector<cplx> z(in, in + nb);
    apply_time_space_transform_inplace(first, space_, z);
    for (std::size_t i = 0; i < nb; ++i) z[i] /= factors_.diagonal[i];
    apply_time_space_transform_inplace(second, space_, z);
    to_real(z, out, norm);
  }

  GridSpec grid_;
  DiagonalFactorization factors_;
  FourierLine forward_;
  FourierLine backward_;
  SineLine space_;
};

class TauPreconditioner final : public Preconditioner {
 public:
  explicit TauPreconditioner(const GridSpec& grid)
      : grid_(grid), factors_(tau_factorization(grid)), time_(grid.n), space_(grid.m1, grid.dim) {}

  [[nodiscard]] PrecondMethod method() const override { return PrecondMethod::Tau; }
  [[nodiscard]] const GridSpec& grid() const override { return grid_; }

  // G is symmetric, so both blocks are (S_n (x) U) D^{-1} (S_n (x) U).
  [[nodiscard]] BlockVector apply_inverse(const BlockVector& v) const override {
    check_length(v.size(), grid_.system_size());
    const Eigen::Index nb = grid_.block_size();
    BlockVector out = v;
    for (int block = 0; block < 2; ++block) {
      double* z = out.data() + block * nb;
      sine_time_space(time_, space_, z, grid_.m, grid_.n);
      for (Eigen::Index i = 0; i < nb; ++i) z[i] /= factors_.diagonal[i];
      sine_time_space(time_, space_, z, grid_.m, grid_.n);
    }
    return out;
  }

 private:
  GridSpec grid_;
  DiagonalFactorization factors_;
  SinePlan time_;
  SineLine space_;
};

// Per time mode k: (a_k I + tau^2/2 b_k K) w = r_k with K = -Delta SPD.
class ShiftedSpatialSolver {
 public:
  ShiftedSpatialSolver(const Eigen::SparseMatrix<double>& k, const std::vector<double>& a,
                       const std::vector<double>& b, double c) {
    const int n = static_cast<int>(a.size());
    const Eigen::Index m = k.rows();
    Eigen::SparseMatrix<double> identity(m, m);
    identity.setIdentity();
    which_.resize(n);
    for (int i = 0; i < n; ++i) {
      int found = -1;
      for (std::size_t u = 0; u < keys_.size(); ++u) {
        const auto [ka, kb] = keys_[u];
        if (std::abs(ka - a[i]) <= 1e-13 * std::abs(ka) &&
            std::abs(kb - b[i]) <= 1e-13 * std::max(std::abs(kb), 1.0)) {
          found = static_cast<int>(u);
          break;
        }
      }
      if (found < 0) {
        Eigen::SparseMatrix<double> shifted = a[i] * identity + (c * b[i]) * k;
        auto llt = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(shifted);
        if (llt->info() != Eigen::Success)
          throw std::runtime_error("shifted spatial system is not SPD (time mode " +
                                   std::to_string(i) + ")");
        factors_.push_back(std::move(llt));
        keys_.emplace_back(a[i], b[i]);
        found = static_cast<int>(factors_.size()) - 1;
      }
      which_[i] = found;
    }
  }

  [[nodiscard]] Eigen::MatrixXd solve(int mode, const Eigen::MatrixXd& rhs) const {
    return factors_[which_[mode]]->solve(rhs);
  }

  [[nodiscard]] std::size_t factorization_count() const { return factors_.size(); }

 private:
  std::vector<std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>> factors_;
  std::vector<std::pair<double, double>> keys_;
  std::vector<int> which_;
};

void check_spd_input(const GridSpec& grid, const Eigen::SparseMatrix<double>& k) {
  if (k.rows() != grid.m || k.cols() != grid.m)
    throw std::invalid_argument("modified preconditioner: -Delta must be m x m");
  const Eigen::SparseMatrix<double> asym = k - Eigen::SparseMatrix<double>(k.transpose());
  double worst = 0;
  for (int c = 0; c < asym.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(asym, c); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  if (worst > 1e-12 * std::max(1.0, k.norm()))
    throw std::invalid_argument("modified preconditioner: -Delta must be symmetric");
}

class ModStrangPreconditioner final : public Preconditioner {
 public:
  ModStrangPreconditioner(const GridSpec& grid, const Eigen::SparseMatrix<double>& k)
      : grid_(grid), forward_(grid.n, false), backward_(grid.n, true), solver_(make_solver(grid, k)) {}

  [[nodiscard]] PrecondMethod method() const override { return PrecondMethod::ModStrang; }
  [[nodiscard]] const GridSpec& grid() const override { return grid_; }

  [[nodiscard]] BlockVector apply_inverse(const BlockVector& v) const override {
    check_length(v.size(), grid_.system_size());
    const Eigen::Index nb = grid_.block_size();
    const double norm = v.norm();
    BlockVector out(v.size());
    solve_block(v.data(), out.data(), false, norm);
    solve_block(v.data() + nb, out.data() + nb, true, norm);
    return out;
  }

 private:
  static ShiftedSpatialSolver make_solver(const GridSpec& grid, const Eigen::SparseMatrix<double>& k) {
    check_spd_input(grid, k);
    const auto s1 = strang_s1_eigenvalues(grid.n);
    const auto s2 = strang_s2_eigenvalues(grid.n);
    std::vector<double> a(grid.n), b(grid.n);
    for (int i = 0; i < grid.n; ++i) {
      a[i] = std::sqrt(std::norm(s1[i]) + grid.alpha * grid.alpha);
      b[i] = std::abs(s2[i]);
    }
    return ShiftedSpatialSolver(k, a, b, 0.5 * grid.tau * grid.tau);
  }

  // Step 1: FFT across time, step 2: per-mode spatial solves, step 3: back.
  void solve_block(const double* in, double* out, bool conjugate_pattern, double norm) const {
    const int m = grid_.m;
    const int n = grid_.n;
    std::vector<cplx> z(in, in + std::ptrdiff_t(m) * n);
    const IdentityLine space(m);
    const FourierLine& first = conjugate_pattern ? backward_ : forward_;
    const FourierLine& second = conjugate_pattern ? forward_ : backward_;
    apply_time_space_transform_inplace(first, space, z);
    Eigen::MatrixXd rhs(m, 2);
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < m; ++j) {
        rhs(j, 0) = z[k * m + j].real();
        rhs(j, 1) = z[k * m + j].imag();
      }
      const Eigen::MatrixXd w = solver_.solve(k, rhs);
      for (int j = 0; j < m; ++j) z[k * m + j] = {w(j, 0), w(j, 1)};
    }
    apply_time_space_transform_inplace(second, space, z);
    to_real(z, out, norm);
  }

  GridSpec grid_;
  FourierLine forward_;
  FourierLine backward_;
  ShiftedSpatialSolver solver_;
};

class ModTauPreconditioner final : public Preconditioner {
 public:
  ModTauPreconditioner(const GridSpec& grid, const Eigen::SparseMatrix<double>& k)
      : grid_(grid), time_(grid.n), solver_(make_solver(grid, k)) {}

  [[nodiscard]] PrecondMethod method() const override { return PrecondMethod::ModTau; }
  [[nodiscard]] const GridSpec& grid() const override { return grid_; }

  [[nodiscard]] BlockVector apply_inverse(const BlockVector& v) const override {
    check_length(v.size(), grid_.system_size());
    const Eigen::Index nb = grid_.block_size();
    const int m = grid_.m;
    const int n = grid_.n;
    BlockVector out = v;
    for (int block = 0; block < 2; ++block) {
      double* z = out.data() + block * nb;
      std::vector<cplx> work(z, z + nb);
      sine_time(time_, work, m, n);
      Eigen::MatrixXd rhs(m, 1);
      for (int k = 0; k < n; ++k) {
        for (int j = 0; j < m; ++j) rhs(j, 0) = work[k * m + j].real();
        const Eigen::MatrixXd w = solver_.solve(k, rhs);
        for (int j = 0; j < m; ++j) work[k * m + j] = w(j, 0);
      }
      sine_time(time_, work, m, n);
      for (Eigen::Index i = 0; i < nb; ++i) z[i] = work[i].real();
    }
    return out;
  }

 private:
  static ShiftedSpatialSolver make_solver(const GridSpec& grid, const Eigen::SparseMatrix<double>& k) {
    check_spd_input(grid, k);
    const auto g1 = tau_g1_eigenvalues(grid.n);
    const auto g2 = tau_g2_eigenvalues(grid.n);
    std::vector<double> a(grid.n), b(grid.n);
    for (int i = 0; i < grid.n; ++i) {
      a[i] = std::sqrt(g1[i] * g1[i] + grid.alpha * grid.alpha);
      b[i] = std::abs(g2[i]);
    }
    return ShiftedSpatialSolver(k, a, b, 0.5 * grid.tau * grid.tau);
  }

  GridSpec grid_;
  SinePlan time_;
  ShiftedSpatialSolver solver_;
};

Eigen::MatrixXd dense_circulant(const std::vector<double>& first_column) {
  const auto n = static_cast<Eigen::Index>(first_column.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = first_column[((i - j) % n + n) % n];
  return c;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd dense_neg_laplacian(const NegativeLaplacian& lap) {
  return Eigen::MatrixXd(lap.to_sparse());
}

std::vector<double> strang_column(int n, double c1, double c2) {
  std::vector<double> col(n, 0.0);
  col[0] += 1.0;
  col[1 % n] += c1;
  col[2 % n] += c2;
  return col;
}

}  // namespace

std::string to_string(PrecondMethod method) {
  switch (method) {
    case PrecondMethod::AbsH: return "abs-h";
    case PrecondMethod::Strang: return "strang";
    case PrecondMethod::Tau: return "tau";
    case PrecondMethod::ModStrang: return "mod-strang";
    case PrecondMethod::ModTau: return "mod-tau";
    case PrecondMethod::Identity: return "none";
  }
  return "unknown";
}

PrecondMethod parse_precond(const std::string& name) {
  if (name == "abs-h") return PrecondMethod::AbsH;
  if (name == "strang") return PrecondMethod::Strang;
  if (name == "tau") return PrecondMethod::Tau;
  if (name == "mod-strang") return PrecondMethod::ModStrang;
  if (name == "mod-tau") return PrecondMethod::ModTau;
  if (name == "none" || name == "identity") return PrecondMethod::Identity;
  throw std::invalid_argument("unknown preconditioner '" + name + "'");
}

LinearMap Preconditioner::inverse_map() const {
  return [this](const Eigen::VectorXd& v) { return apply_inverse(v); };
}

std::vector<double> laplacian_eigenvalues(const GridSpec& grid) {
  std::vector<double> mu1(grid.m1);
  for (int j = 0; j < grid.m1; ++j) {
    const double s = std::sin((j + 1) * kPi * grid.h / 2);
    mu1[j] = 4.0 / (grid.h * grid.h) * s * s;
  }
  if (grid.dim == 1) return mu1;
  std::vector<double> mu(grid.m);
  for (int b = 0; b < grid.m1; ++b)
    for (int a = 0; a < grid.m1; ++a) mu[b * grid.m1 + a] = mu1[a] + mu1[b];
  return mu;
}

// The circulants copy the band (1, -2, 1) / (1, 0, 1) with wrap-around, so for
// n <= 2 the wrapped entries fold onto the diagonal.
std::vector<cplx> strang_s1_eigenvalues(int n) {
  return circulant_eigenvalues(std::span<const double>(strang_column(n, -2.0, 1.0)));
}

std::vector<cplx> strang_s2_eigenvalues(int n) {
  return circulant_eigenvalues(std::span<const double>(strang_column(n, 0.0, 1.0)));
}

std::vector<double> tau_g1_eigenvalues(int n) {
  std::vector<double> g(n);
  for (int k = 1; k <= n; ++k) g[k - 1] = 2.0 - 2.0 * std::cos(k * kPi / (n + 1));
  return g;
}

std::vector<double> tau_g2_eigenvalues(int n) {
  std::vector<double> g(n);
  for (int k = 1; k <= n; ++k) g[k - 1] = -2.0 * std::cos(k * kPi / (n + 1));
  return g;
}

namespace {

DiagonalFactorization combine(const GridSpec& grid, std::vector<cplx> t1, std::vector<cplx> t2) {
  DiagonalFactorization f;
  f.time1 = std::move(t1);
  f.time2 = std::move(t2);
  f.space = laplacian_eigenvalues(grid);
  f.diagonal.resize(std::size_t(grid.m) * grid.n);
  const double c = 0.5 * grid.tau * grid.tau;
  const double a2 = grid.alpha * grid.alpha;
  for (int k = 0; k < grid.n; ++k)
    for (int j = 0; j < grid.m; ++j) {
      const cplx lambda = f.time1[k] + c * f.time2[k] * f.space[j];
      f.diagonal[std::size_t(k) * grid.m + j] = std::sqrt(std::norm(lambda) + a2);
    }
  return f;
}

}  // namespace

DiagonalFactorization strang_factorization(const GridSpec& grid) {
  require_uniform(grid);
  return combine(grid, strang_s1_eigenvalues(grid.n), strang_s2_eigenvalues(grid.n));
}

DiagonalFactorization tau_factorization(const GridSpec& grid) {
  require_uniform(grid);
  const auto g1 = tau_g1_eigenvalues(grid.n);
  const auto g2 = tau_g2_eigenvalues(grid.n);
  return combine(grid, std::vector<cplx>(g1.begin(), g1.end()),
                 std::vector<cplx>(g2.begin(), g2.end()));
}

PreconditionerPtr build_identity(const GridSpec& grid) {
  return std::make_unique<IdentityPreconditioner>(grid);
}

PreconditionerPtr build_abs_h(const GridSpec& grid) { return build_abs_h(NegativeLaplacian(grid)); }

PreconditionerPtr build_abs_h(const NegativeLaplacian& laplacian) {
  return std::make_unique<AbsHPreconditioner>(laplacian);
}

PreconditionerPtr build_strang(const GridSpec& grid) {
  require_uniform(grid);
  return std::make_unique<StrangPreconditioner>(grid);
}

PreconditionerPtr build_tau(const GridSpec& grid) {
  require_uniform(grid);
  return std::make_unique<TauPreconditioner>(grid);
}

PreconditionerPtr build_mod_strang(const GridSpec& grid) {
  return build_mod_strang(grid, NegativeLaplacian(grid).to_sparse());
}

PreconditionerPtr build_mod_strang(const GridSpec& grid, const Eigen::SparseMatrix<double>& k) {
  return std::make_unique<ModStrangPreconditioner>(grid, k);
}

PreconditionerPtr build_mod_tau(const GridSpec& grid) {
  return build_mod_tau(grid, NegativeLaplacian(grid).to_sparse());
}

PreconditionerPtr build_mod_tau(const GridSpec& grid, const Eigen::SparseMatrix<double>& k) {
  return std::make_unique<ModTauPreconditioner>(grid, k);
}

PreconditionerPtr build_preconditioner(PrecondMethod method, const GridSpec& grid) {
  switch (method) {
    case PrecondMethod::AbsH: return build_abs_h(grid);
    case PrecondMethod::Strang: return build_strang(grid);
    case PrecondMethod::Tau: return build_tau(grid);
    case PrecondMethod::ModStrang: return build_mod_strang(grid);
    case PrecondMethod::ModTau: return build_mod_tau(grid);
    case PrecondMethod::Identity: return build_identity(grid);
  }
  throw std::invalid_argument("unknown preconditioner");
}

Eigen::MatrixXd dense_strang_s(const NegativeLaplacian& laplacian) {
  const GridSpec& g = laplacian.grid();
  const Eigen::MatrixXd s1 = dense_circulant(strang_column(g.n, -2.0, 1.0));
  const Eigen::MatrixXd s2 = dense_circulant(strang_column(g.n, 0.0, 1.0));
  const Eigen::MatrixXd k = dense_neg_laplacian(laplacian);
  return kron(s1, Eigen::MatrixXd::Identity(g.m, g.m)) + 0.5 * g.tau * g.tau * kron(s2, k);
}

Eigen::MatrixXd dense_tau_g(const NegativeLaplacian& laplacian) {
  const GridSpec& g = laplacian.grid();
  Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(g.n, g.n);
  Eigen::MatrixXd g2 = Eigen::MatrixXd::Zero(g.n, g.n);
  for (int i = 0; i < g.n; ++i) {
    g1(i, i) = 2.0;
    if (i + 1 < g.n) {
      g1(i, i + 1) = g1(i + 1, i) = -1.0;
      g2(i, i + 1) = g2(i + 1, i) = -1.0;
    }
  }
  const Eigen::MatrixXd k = dense_neg_laplacian(laplacian);
  return kron(g1, Eigen::MatrixXd::Identity(g.m, g.m)) + 0.5 * g.tau * g.tau * kron(g2, k);
}

}  // namespace wavepint
