#pragma once

// Symbol-matching SPD block-diagonal preconditioners for the saddle-point
// matrix A. Every preconditioner exposes the action of its inverse.
//
//   abs-h       |H| = blockdiag(sqrt(T^T T + a^2 I), sqrt(T T^T + a^2 I))   dense SVD
//   strang      P_S: T replaced by the Strang block circulant S            FFT (x) DST
//   tau         P_G: T replaced by the block Tau matrix G                  DST (x) DST
//   mod-strang  P~_S: sqrt(|S1|^2 + a^2) (x) I - tau^2/2 |S2| (x) Delta     FFT + spatial solves
//   mod-tau     P~_G: same with the Tau pair G1, G2                        DST + spatial solves
//   none        identity

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wavepint/operators.hpp"
#include "wavepint/problem.hpp"
#include "wavepint/transforms.hpp"

namespace wavepint {

enum class PrecondMethod { AbsH, Strang, Tau, ModStrang, ModTau, Identity };

std::string to_string(PrecondMethod method);
/// Accepts abs-h | strang | tau | mod-strang | mod-tau | none.
PrecondMethod parse_precond(const std::string& name);

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;

  [[nodiscard]] virtual PrecondMethod method() const = 0;
  [[nodiscard]] virtual BlockVector apply_inverse(const BlockVector& v) const = 0;
  [[nodiscard]] virtual const GridSpec& grid() const = 0;

  [[nodiscard]] LinearMap inverse_map() const;
};

using PreconditionerPtr = std::unique_ptr<const Preconditioner>;

/// Eigenvalues of -Delta_m on the uniform grid, in DST mode order:
/// 1D mu_j = 4/h^2 sin^2(j pi h / 2); 2D mu_{a,b} = mu_a + mu_b at index b*m1 + a.
std::vector<double> laplacian_eigenvalues(const GridSpec& grid);

/// Time eigenvalues of the Strang circulants S1 (first column 1,-2,1,0..)
/// and S2 (first column 1,0,1,0..).
std::vector<cplx> strang_s1_eigenvalues(int n);
std::vector<cplx> strang_s2_eigenvalues(int n);

/// Tau eigenvalues in DST mode order k = 1..n:
/// G1 = tridiag(-1, 2, -1): 2 - 2cos(k pi/(n+1)); G2 = tridiag(-1, 0, -1): -2cos(k pi/(n+1)).
std::vector<double> tau_g1_eigenvalues(int n);
std::vector<double> tau_g2_eigenvalues(int n);

/// Combined diagonal of a fast preconditioner, entry [k*m + j] for time mode k and
/// space mode j: sqrt(|t1_k + tau^2/2 t2_k mu_j|^2 + alpha^2). Every entry is >= alpha.
struct DiagonalFactorization {
  std::vector<cplx> time1;
  std::vector<cplx> time2;
  std::vector<double> space;
  std::vector<double> diagonal;
};

DiagonalFactorization strang_factorization(const GridSpec& grid);
DiagonalFactorization tau_factorization(const GridSpec& grid);

PreconditionerPtr build_identity(const GridSpec& grid);

inline constexpr Eigen::Index kAbsHSizeLimit = 10000;
PreconditionerPtr build_abs_h(const GridSpec& grid);
PreconditionerPtr build_abs_h(const NegativeLaplacian& laplacian);

PreconditionerPtr build_strang(const GridSpec& grid);
PreconditionerPtr build_tau(const GridSpec& grid);

/// Modified variants take any SPD -Delta_m (sparse); the overloads taking a
/// grid use the finite-difference Laplacian.
PreconditionerPtr build_mod_strang(const GridSpec& grid);
PreconditionerPtr build_mod_strang(const GridSpec& grid, const Eigen::SparseMatrix<double>& neg_laplacian);
PreconditionerPtr build_mod_tau(const GridSpec& grid);
PreconditionerPtr build_mod_tau(const GridSpec& grid, const Eigen::SparseMatrix<double>& neg_laplacian);

PreconditionerPtr build_preconditioner(PrecondMethod method, const GridSpec& grid);

/// Dense Strang block circulant S = S1 (x) I - tau^2/2 S2 (x) Delta and block Tau
/// matrix G = G1 (x) I - tau^2/2 G2 (x) Delta, for oracles and rank studies.
Eigen::MatrixXd dense_strang_s(const NegativeLaplacian& laplacian);
Eigen::MatrixXd dense_tau_g(const NegativeLaplacian& laplacian);

/// Largest magnitude imaginary part tolerated when a mathematically real
/// pipeline returns to real arithmetic, relative to the input norm.
inline constexpr double kImaginaryResidueTol = 1e-10;

}  // namespace wavepint
