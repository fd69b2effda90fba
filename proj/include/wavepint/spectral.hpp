#pragma once

// Spectral symbol of the all-at-once matrix and tools to compare the symbol
// samples against computed spectra.
//
//   h(theta) = L - 2 I e^{i theta} + L e^{2 i theta},   L = I - tau^2/2 Delta
//   g(theta) = sqrt(|h(theta)|^2 + alpha^2 I)
//   psi_g    = g on [0, 2pi], -g on [-2pi, 0]

#include <string>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

#include "wavepint/operators.hpp"
#include "wavepint/preconditioners.hpp"
#include "wavepint/problem.hpp"

namespace wavepint {

class SymbolEvaluator {
 public:
  explicit SymbolEvaluator(const NegativeLaplacian& laplacian);
  explicit SymbolEvaluator(const GridSpec& grid);

  /// Eigenvalues of L_m, ascending; all >= 1.
  [[nodiscard]] const std::vector<double>& l_eigenvalues() const { return ell_; }

  /// Dense h(theta); guarded to m <= 512.
  [[nodiscard]] Eigen::MatrixXcd symbol_h(double theta) const;

  /// Sorted eigenvalues of g(theta): sqrt(4 (ell_j cos theta - 1)^2 + alpha^2).
  [[nodiscard]] std::vector<double> symbol_g_eigenvalues(double theta) const;

  /// The 2mn samples of psi_g on theta_i = -2pi + i 4pi/(2n), i = 1..2n:
  /// -lambda_j(g)(theta_i) for i <= n sorted nondecreasingly, followed by
  /// lambda_j(g)(theta_i) for i > n sorted nondecreasingly.
  [[nodiscard]] std::vector<double> sample_psi_g() const;

  [[nodiscard]] const GridSpec& grid() const { return lap_.grid(); }

 private:
  NegativeLaplacian lap_;
  std::vector<double> ell_;
};

inline constexpr Eigen::Index kSymbolSizeLimit = 512;
inline constexpr Eigen::Index kPreconditionedSpectrumLimit = 4000;

/// Sorted eigenvalues of a dense symmetric matrix (tridiagonalization + implicit
/// QL/QR). Throws on asymmetry beyond 1e-12 relative or above kDenseSizeLimit.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& a);

/// Spectrum of P^{-1/2} A P^{-1/2} given a dense SPD P.
std::vector<double> preconditioned_spectrum(const Eigen::MatrixXd& p, const Eigen::MatrixXd& a);
/// Same, with P given through its inverse action.
std::vector<double> preconditioned_spectrum(const Preconditioner& p, const Eigen::MatrixXd& a);

struct SpectralReport {
  int dim = 1;
  int m = 0;
  int n = 0;
  double gamma = 0;
  std::string label;
  std::vector<double> eigenvalues;
  std::vector<double> samples;
  double max_abs_diff = 0;
  double mean_abs_diff = 0;
  /// Same statistics restricted to indices at least `edge` away from both
  /// ends of each half.
  double interior_max_abs_diff = 0;
  double interior_mean_abs_diff = 0;
  int edge = 0;
  double delta = 0;
  int outlier_count = 0;
  /// Eigenvalue sign split: count of negatives equals count of positives.
  bool interval_check = false;
};

/// Pairs sorted eigenvalues with sorted samples index-by-index.
SpectralReport compare_spectrum(std::vector<double> eigs, std::vector<double> samples,
                                double delta, int edge = 0);

/// Number of singular values above rel_tol * sigma_max.
int numeric_rank(const Eigen::MatrixXd& a, double rel_tol = 1e-10);

/// Low-rank surrogates: s(A) - A and T^T T - G^T G, dense.
Eigen::MatrixXd circulant_skeleton_difference(const NegativeLaplacian& laplacian);
Eigen::MatrixXd tau_gram_difference(const NegativeLaplacian& laplacian);

void to_json(nlohmann::json& j, const SpectralReport& report);
void from_json(const nlohmann::json& j, SpectralReport& report);

}  // namespace wavepint
