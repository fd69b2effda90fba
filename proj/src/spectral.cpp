#include "wavepint/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wavepint/dense.hpp"

namespace wavepint {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sorted(const Eigen::VectorXd& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXd dense_t(const NegativeLaplacian& lap) {
  const BlockToeplitzT t(lap);
  return materialize_dense([&t](const Eigen::VectorXd& v) { return t.apply(v); },
                           lap.grid().block_size());
}

}  // namespace

SymbolEvaluator::SymbolEvaluator(const NegativeLaplacian& laplacian) : lap_(laplacian) {
  const GridSpec& g = lap_.grid();
  std::vector<double> mu = lap_.is_zero() ? std::vector<double>(g.m, 0.0) : laplacian_eigenvalues(g);
  ell_.resize(mu.size());
  const double c = 0.5 * g.tau * g.tau;
  for (std::size_t j = 0; j < mu.size(); ++j) ell_[j] = 1.0 + c * mu[j];
  std::sort(ell_.begin(), ell_.end());
}

SymbolEvaluator::SymbolEvaluator(const GridSpec& grid) : SymbolEvaluator(NegativeLaplacian(grid)) {}

Eigen::MatrixXcd SymbolEvaluator::symbol_h(double theta) const {
  const GridSpec& g = lap_.grid();
  if (g.m > kSymbolSizeLimit)
    throw std::length_error("symbol_h: m = " + std::to_string(g.m) + " exceeds " +
                            std::to_string(kSymbolSizeLimit));
  const Eigen::MatrixXd l = Eigen::MatrixXd::Identity(g.m, g.m) +
                            0.5 * g.tau * g.tau * Eigen::MatrixXd(lap_.to_sparse());
  const cplx e1 = std::polar(1.0, theta);
  const cplx e2 = std::polar(1.0, 2 * theta);
  Eigen::MatrixXcd h = l.cast<cplx>() * (1.0 + e2);
  h.diagonal().array() -= 2.0 * e1;
  return h;
}

// h(theta) = e^{i theta} (2 L cos theta - 2 I), so |h| has eigenvalues 2|ell cos theta - 1|.
std::vector<double> SymbolEvaluator::symbol_g_eigenvalues(double theta) const {
  const double a2 = lap_.grid().alpha * lap_.grid().alpha;
  const double c = std::cos(theta);
  std::vector<double> out(ell_.size());
  for (std::size_t j = 0; j < ell_.size(); ++j) {
    const double d = ell_[j] * c - 1.0;
    out[j] = std::sqrt(4 * d * d + a2);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> SymbolEvaluator::sample_psi_g() const {
  const int n = lap_.grid().n;
  std::vector<double> negative;
  std::vector<double> positive;
  negative.reserve(ell_.size() * n);
  positive.reserve(ell_.size() * n);
  for (int i = 1; i <= 2 * n; ++i) {
    const double theta = -2 * kPi + i * 4 * kPi / (2.0 * n);
    const auto vals = symbol_g_eigenvalues(theta);
    if (i <= n)
      for (double v : vals) negative.push_back(-v);
    else
      positive.insert(positive.end(), vals.begin(), vals.end());
  }
  std::sort(negative.begin(), negative.end());
  std::sort(positive.begin(), positive.end());
  negative.insert(negative.end(), positive.begin(), positive.end());
  return negative;
}

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() > kDenseSizeLimit)
    throw std::length_error("symmetric_eigenvalues: size " + std::to_string(a.rows()) +
                            " exceeds " + std::to_string(kDenseSizeLimit));
  return sorted(dense::eigvalsh(a, 1e-12));
}

std::vector<double> preconditioned_spectrum(const Eigen::MatrixXd& p, const Eigen::MatrixXd& a) {
  if (a.rows() > kPreconditionedSpectrumLimit)
    throw std::length_error("preconditioned_spectrum: size " + std::to_string(a.rows()) +
                            " exceeds " + std::to_string(kPreconditionedSpectrumLimit));
  if (p.rows() != a.rows() || p.cols() != a.cols())
    throw std::invalid_argument("preconditioned_spectrum: size mismatch");
  const Eigen::MatrixXd r = dense::spd_inverse_sqrt(p);
  return sorted(dense::eigvalsh(dense::symmetrized(r * a * r), 1e-8));
}

// P^{-1/2} A P^{-1/2} with P^{-1/2} the SPD square root of the materialized inverse.
std::vector<double> preconditioned_spectrum(const Preconditioner& p, const Eigen::MatrixXd& a) {
  if (a.rows() > kPreconditionedSpectrumLimit)
    throw std::length_error("preconditioned_spectrum: size " + std::to_string(a.rows()) +
                            " exceeds " + std::to_string(kPreconditionedSpectrumLimit));
  if (a.rows() != p.grid().system_size())
    throw std::invalid_argument("preconditioned_spectrum: size mismatch");
  const Eigen::MatrixXd inv = dense::symmetrized(materialize_dense(p.inverse_map(), a.rows()));
  const Eigen::MatrixXd r = dense::spd_sqrt(inv);
  return sorted(dense::eigvalsh(dense::symmetrized(r * a * r), 1e-8));
}

SpectralReport compare_spectrum(std::vector<double> eigs, std::vector<double> samples, double delta,
                                int edge) {
  if (eigs.size() != samples.size())
    throw std::invalid_argument("compare_spectrum: " + std::to_string(eigs.size()) +
                                " eigenvalues vs " + std::to_string(samples.size()) + " samples");
  if (edge < 0) throw std::invalid_argument("compare_spectrum: edge must be nonnegative");
  std::sort(eigs.begin(), eigs.end());
  std::sort(samples.begin(), samples.end());

  SpectralReport r;
  r.delta = delta;
  r.edge = edge;
  const std::size_t total = eigs.size();
  const std::size_t half = total / 2;
  double sum = 0;
  double interior_sum = 0;
  std::size_t interior_count = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const double d = std::abs(eigs[i] - samples[i]);
    r.max_abs_diff = std::max(r.max_abs_diff, d);
    sum += d;
    if (d > delta) ++r.outlier_count;
    const std::size_t q = i < half ? i : i - half;
    const std::size_t len = i < half ? half : total - half;
    if (q >= std::size_t(edge) && q + edge < len) {
      r.interior_max_abs_diff = std::max(r.interior_max_abs_diff, d);
      interior_sum += d;
      ++interior_count;
    }
  }
  r.mean_abs_diff = total ? sum / double(total) : 0.0;
  r.interior_mean_abs_diff = interior_count ? interior_sum / double(interior_count) : 0.0;
  const auto negatives = std::count_if(eigs.begin(), eigs.end(), [](double v) { return v < 0; });
  const auto positives = std::count_if(eigs.begin(), eigs.end(), [](double v) { return v > 0; });
  r.interval_check = negatives == positives && std::size_t(negatives + positives) == total;
  r.eigenvalues = std::move(eigs);
  r.samples = std::move(samples);
  return r;
}

int numeric_rank(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.size() == 0) return 0;
  const Eigen::VectorXd s = dense::singular_values(a);
  const double smax = s.maxCoeff();
  if (smax == 0) return 0;
  return static_cast<int>((s.array() > rel_tol * smax).count());
}

// s(A) = [alpha I, S^T; S, -alpha I].
Eigen::MatrixXd circulant_skeleton_difference(const NegativeLaplacian& laplacian) {
  const GridSpec& g = laplacian.grid();
  const Eigen::Index nb = g.block_size();
  const SaddleOperator op(laplacian);
  const Eigen::MatrixXd a = materialize_dense(op.as_map(), g.system_size());
  const Eigen::MatrixXd s = dense_strang_s(laplacian);
  Eigen::MatrixXd skel = Eigen::MatrixXd::Zero(2 * nb, 2 * nb);
  skel.topLeftCorner(nb, nb).diagonal().setConstant(g.alpha);
  skel.bottomRightCorner(nb, nb).diagonal().setConstant(-g.alpha);
  skel.topRightCorner(nb, nb) = s.transpose();
  skel.bottomLeftCorner(nb, nb) = s;
  return skel - a;
}

Eigen::MatrixXd tau_gram_difference(const NegativeLaplacian& laplacian) {
  const Eigen::MatrixXd t = dense_t(laplacian);
  const Eigen::MatrixXd g = dense_tau_g(laplacian);
  return t.transpose() * t - g.transpose() * g;
}

void to_json(nlohmann::json& j, const SpectralReport& r) {
  j = nlohmann::json{{"size", r.eigenvalues.size()},
                     {"gamma", r.gamma},
                     {"grid", {{"dim", r.dim}, {"m", r.m}, {"n", r.n}}},
                     {"label", r.label},
                     {"eigenvalues", r.eigenvalues},
                     {"samples", r.samples},
                     {"max_abs_diff", r.max_abs_diff},
                     {"mean_abs_diff", r.mean_abs_diff},
                     {"interior_max_abs_diff", r.interior_max_abs_diff},
                     {"interior_mean_abs_diff", r.interior_mean_abs_diff},
                     {"edge", r.edge},
                     {"delta", r.delta},
                     {"outlier_count", r.outlier_count},
                     {"interval_check", r.interval_check}};
}

void from_json(const nlohmann::json& j, SpectralReport& r) {
  r.gamma = j.at("gamma").get<double>();
  const auto& grid = j.at("grid");
  r.dim = grid.at("dim").get<int>();
  r.m = grid.at("m").get<int>();
  r.n = grid.at("n").get<int>();
  r.label = j.value("label", std::string{});
  r.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  r.samples = j.at("samples").get<std::vector<double>>();
  r.max_abs_diff = j.at("max_abs_diff").get<double>();
  r.mean_abs_diff = j.at("mean_abs_diff").get<double>();
  r.interior_max_abs_diff = j.value("interior_max_abs_diff", 0.0);
  r.interior_mean_abs_diff = j.value("interior_mean_abs_diff", 0.0);
  r.edge = j.value("edge", 0);
  r.delta = j.value("delta", 0.0);
  r.outlier_count = j.at("outlier_count").get<int>();
  r.interval_check = j.at("interval_check").get<bool>();
  if (j.contains("size") && j.at("size").get<std::size_t>() != r.eigenvalues.size())
    throw std::invalid_argument("spectral report: size field disagrees with eigenvalue count");
}

}  // namespace wavepint
