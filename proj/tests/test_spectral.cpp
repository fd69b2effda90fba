#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "doctest.h"
#include "test_support.hpp"
#include "wavepint/bench.hpp"
#include "wavepint/spectral.hpp"

using namespace wavepint;
using oracle::cplx;

namespace {

int count_off_unit(const std::vector<double>& eig, double tol) {
  int c = 0;
  for (double x : eig)
    if (std::abs(std::abs(x) - 1) > tol) ++c;
  return c;
}

}  // namespace

TEST_CASE("symbol h at special angles") {
  const auto g = build_grid(1, 5, 8, 2.0, 1e-4);
  const SymbolEvaluator sym(g);
  const Eigen::MatrixXd k = oracle::neg_laplacian(g);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(5, 5);
  const Eigen::MatrixXd l = id + 0.5 * g.tau * g.tau * k;
  CHECK((sym.symbol_h(0) - (g.tau * g.tau * k).cast<cplx>()).norm() < 1e-13);
  CHECK((sym.symbol_h(oracle::pi) - (2 * l + 2 * id).cast<cplx>()).norm() < 1e-12);
  CHECK((sym.symbol_h(oracle::pi / 2) - cplx(0, -2) * id.cast<cplx>()).norm() < 1e-12);
  for (double ell : sym.l_eigenvalues()) CHECK(ell >= 1);
  CHECK_THROWS_AS((void)SymbolEvaluator(build_grid(2, 23, 4, 2.0, 1.0)).symbol_h(0.0), std::length_error);
}

TEST_CASE("closed-form g eigenvalues match an SVD of h") {
  for (int dim : {1, 2}) {
    const auto g = build_grid(dim, 4, 6, 2.0, 1e-3);
    const SymbolEvaluator sym(g);
    const auto th = oracle::random_vector(20, 9);
    for (Eigen::Index i = 0; i < th.size(); ++i) {
      const double theta = oracle::pi * th[i];
      const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(sym.symbol_h(theta)).singularValues();
      std::vector<double> expect;
      for (double x : s) expect.push_back(std::sqrt(x * x + g.alpha * g.alpha));
      std::sort(expect.begin(), expect.end());
      const auto got = sym.symbol_g_eigenvalues(theta);
      REQUIRE(got.size() == expect.size());
      for (std::size_t j = 0; j < got.size(); ++j) CHECK(got[j] == doctest::Approx(expect[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("g nearly vanishes where l cos(theta) = 1 for tiny alpha") {
  const auto g = build_grid(1, 3, 4, 2.0, 1e12);
  const SymbolEvaluator sym(g);
  const double theta = std::acos(1 / sym.l_eigenvalues().front());
  const auto eig = sym.symbol_g_eigenvalues(theta);
  CHECK(eig.front() == doctest::Approx(g.alpha).epsilon(1e-6));
  CHECK(eig.front() < 1e-6);
}

TEST_CASE("psi_g samples") {
  SUBCASE("m = 1, n = 2 fixture") {
    const auto g = build_grid(1, 1, 2, 2.0, 1.0);
    const auto s = SymbolEvaluator(NegativeLaplacian::zero(g)).sample_psi_g();
    REQUIRE(s.size() == 4);
    const double r = std::sqrt(17.0);
    CHECK(s[0] == doctest::Approx(-r));
    CHECK(s[1] == doctest::Approx(-1));
    CHECK(s[2] == doctest::Approx(1));
    CHECK(s[3] == doctest::Approx(r));
  }
  SUBCASE("mirror symmetry and sortedness of each half") {
    const auto g = build_grid(2, 3, 10, 2.0, 1e-6);
    const auto s = SymbolEvaluator(g).sample_psi_g();
    const std::size_t len = s.size();
    REQUIRE(len == std::size_t(2 * g.block_size()));
    for (std::size_t i = 0; i < len; ++i) CHECK(s[i] == doctest::Approx(-s[len - 1 - i]).epsilon(1e-13));
    CHECK(std::is_sorted(s.begin(), s.begin() + long(len / 2)));
    CHECK(std::is_sorted(s.begin() + long(len / 2), s.end()));
    CHECK(s[len / 2 - 1] < 0);
  }
}

TEST_CASE("dense symmetric eigenvalues") {
  Eigen::Matrix2d a;
  a << 2, 1, 1, 2;
  const auto e = symmetric_eigenvalues(a);
  CHECK(e[0] == doctest::Approx(1));
  CHECK(e[1] == doctest::Approx(3));
  const auto d = symmetric_eigenvalues(Eigen::Vector3d(3, -1, 2).asDiagonal().toDenseMatrix());
  CHECK(d == std::vector<double>{-1, 2, 3});
  Eigen::Matrix2d bad;
  bad << 1, 2, 0, 1;
  CHECK_THROWS_AS(symmetric_eigenvalues(bad), std::invalid_argument);

  for (int n : {1, 7, 64, 512}) {
    const auto r = oracle::random_vector(n * n, unsigned(n));
    const Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(r.data(), n, n);
    const Eigen::MatrixXd s = m + m.transpose();
    const auto got = symmetric_eigenvalues(s);
    const auto ref = oracle::sorted_eigs(s);
    double worst = 0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(got[i] - ref[i]));
    CHECK(worst <= 1e-12 * s.norm() * std::sqrt(double(n)));
  }
}

TEST_CASE("A has as many negative as positive eigenvalues") {
  const auto g = build_grid(1, 3, 4, 2.0, 1e-4);
  const auto e = symmetric_eigenvalues(materialize_dense(SaddleOperator(g).as_map(), g.system_size()));
  const auto neg = std::count_if(e.begin(), e.end(), [](double x) { return x < 0; });
  const auto pos = std::count_if(e.begin(), e.end(), [](double x) { return x > 0; });
  CHECK(neg == 12);
  CHECK(pos == 12);
}

TEST_CASE("preconditioned spectra") {
  SUBCASE("identity leaves A unchanged") {
    const auto g = build_grid(1, 3, 4, 2.0, 1e-2);
    const Eigen::MatrixXd a = materialize_dense(SaddleOperator(g).as_map(), g.system_size());
    const auto e = preconditioned_spectrum(*build_identity(g), a);
    const auto ref = oracle::sorted_eigs(a);
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] == doctest::Approx(ref[i]).epsilon(1e-10));
    const auto e2 = preconditioned_spectrum(Eigen::MatrixXd::Identity(24, 24), a);
    for (std::size_t i = 0; i < e2.size(); ++i) CHECK(e2[i] == doctest::Approx(ref[i]).epsilon(1e-10));
  }
  SUBCASE("|H| localization at m1 = 7, n = 16, gamma = 1e-4") {
    const auto g = build_grid(1, 7, 16, 2.0, 1e-4);
    const Eigen::MatrixXd a = materialize_dense(SaddleOperator(g).as_map(), g.system_size());
    const auto e = preconditioned_spectrum(*build_abs_h(g), a);
    for (double x : e) CHECK(((x > -1.5 && x < -0.5) || (x > 0.5 && x < 1.5)));
    CHECK(count_off_unit(e, 1e-8) <= 4 * g.m);
    // Same spectrum through a dense P built by the oracle.
    const Eigen::MatrixXd p = oracle::abs_block(oracle::dense_t(g, oracle::neg_laplacian(g)), g.alpha);
    const auto e2 = preconditioned_spectrum(p, a);
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] == doctest::Approx(e2[i]).epsilon(1e-9));
  }
  SUBCASE("Strang clustering at m1 = 15, n = 32, gamma = 1e-8") {
    const auto g = build_grid(1, 15, 32, 2.0, 1e-8);
    const Eigen::MatrixXd a = materialize_dense(SaddleOperator(g).as_map(), g.system_size());
    const auto e = preconditioned_spectrum(*build_strang(g), a);
    const int outliers = count_off_unit(e, 1e-2);
    MESSAGE("P_S outliers: " << outliers << " (bound " << 16 * g.m << ")");
    CHECK(outliers <= 16 * g.m);
  }
  SUBCASE("size mismatch") {
    CHECK_THROWS_AS(preconditioned_spectrum(Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(4, 4)),
                    std::invalid_argument);
  }
}

TEST_CASE("compare_spectrum") {
  SUBCASE("identical lists") {
    const auto r = compare_spectrum({-2, -1, 1, 2}, {-2, -1, 1, 2}, 1e-2);
    CHECK(r.max_abs_diff == 0);
    CHECK(r.mean_abs_diff == 0);
    CHECK(r.outlier_count == 0);
    CHECK(r.interval_check);
  }
  SUBCASE("sorting before pairing") {
    const auto r = compare_spectrum({2, -1, 1, -2}, {-2.5, -1, 1, 2}, 0.1);
    CHECK(r.max_abs_diff == doctest::Approx(0.5));
    CHECK(r.mean_abs_diff == doctest::Approx(0.125));
    CHECK(r.outlier_count == 1);
    CHECK(r.eigenvalues.front() == -2);
  }
  SUBCASE("edge exclusion") {
    // Halves of length 4, edge 1 keeps indices 1, 2 of each half.
    const std::vector<double> s{-4, -3, -2, -1, 1, 2, 3, 4};
    std::vector<double> e = s;
    e[0] -= 1;  // edge
    e[2] += 0.25;  // interior
    const auto r = compare_spectrum(e, s, 1e-2, 1);
    CHECK(r.max_abs_diff == doctest::Approx(1));
    CHECK(r.interior_max_abs_diff == doctest::Approx(0.25));
    CHECK(r.interior_mean_abs_diff == doctest::Approx(0.25 / 4));
    CHECK(r.edge == 1);
  }
  SUBCASE("sign split") {
    CHECK_FALSE(compare_spectrum({-1, 0, 1, 2}, {-1, -1, 1, 1}, 1e-2).interval_check);
    CHECK_FALSE(compare_spectrum({-1, 1, 1, 2}, {-1, -1, 1, 1}, 1e-2).interval_check);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(compare_spectrum({1, 2}, {1}, 1e-2), std::invalid_argument);
    CHECK_THROWS_AS(compare_spectrum({1, 2}, {1, 2}, 1e-2, -1), std::invalid_argument);
  }
}

TEST_CASE("A follows psi_g more closely as n grows") {
  const auto r32 = spectrum_report(build_grid(1, 15, 32, 2.0, 1e-6));
  const auto r64 = spectrum_report(build_grid(1, 15, 64, 2.0, 1e-6));
  MESSAGE("interior mean |lambda - psi|: n=32 " << r32.interior_mean_abs_diff << ", n=64 "
                                                << r64.interior_mean_abs_diff);
  CHECK(r64.interior_mean_abs_diff <= r32.interior_mean_abs_diff);
  CHECK(r32.interval_check);
  CHECK(r64.eigenvalues.size() == 2 * 15 * 64);
}

TEST_CASE("numeric rank") {
  CHECK(numeric_rank(Eigen::MatrixXd::Identity(5, 5)) == 5);
  CHECK(numeric_rank(Eigen::MatrixXd::Zero(4, 4)) == 0);
  const auto u = oracle::random_vector(6, 1), v = oracle::random_vector(6, 2);
  CHECK(numeric_rank(u * v.transpose()) == 1);
  CHECK(numeric_rank(u * v.transpose() + v * u.transpose()) == 2);
}

TEST_CASE("low-rank corrections") {
  for (int n : {8, 12, 16}) {
    const auto g = build_grid(1, 3, n, 2.0, 1e-6);
    const NegativeLaplacian lap(g);
    CAPTURE(n);
    const Eigen::MatrixXd d = circulant_skeleton_difference(lap);
    CHECK(d.rows() == g.system_size());
    CHECK(numeric_rank(d) <= 8 * g.m);
    CHECK(numeric_rank(tau_gram_difference(lap)) <= 4 * g.m);
  }
  SUBCASE("oracle for the skeleton difference") {
    const auto g = build_grid(1, 3, 6, 2.0, 1e-3);
    const NegativeLaplacian lap(g);
    const Eigen::MatrixXd k = oracle::neg_laplacian(g);
    const double c = 0.5 * g.tau * g.tau;
    const Eigen::MatrixXd s = oracle::kron(oracle::band_circulant(6, -2, 1), Eigen::MatrixXd::Identity(3, 3)) +
                              c * oracle::kron(oracle::band_circulant(6, 0, 1), k);
    const Eigen::Index nb = g.block_size();
    Eigen::MatrixXd sa(2 * nb, 2 * nb);
    sa << g.alpha * Eigen::MatrixXd::Identity(nb, nb), s.transpose(), s, -g.alpha * Eigen::MatrixXd::Identity(nb, nb);
    CHECK(oracle::rel_diff(circulant_skeleton_difference(lap), sa - oracle::dense_a(g, k)) < 1e-13);
  }
}

TEST_CASE("spectral report JSON round trip") {
  const auto r = spectrum_report(build_grid(1, 3, 4, 2.0, 1e-4));
  nlohmann::json j = r;
  const auto back = j.get<SpectralReport>();
  CHECK(back.eigenvalues == r.eigenvalues);
  CHECK(back.samples == r.samples);
  CHECK(back.gamma == r.gamma);
  CHECK(back.m == r.m);
  CHECK(back.n == r.n);
  CHECK(back.label == r.label);
  CHECK(back.interval_check == r.interval_check);
  CHECK(back.interior_mean_abs_diff == r.interior_mean_abs_diff);
  j["size"] = 3;
  CHECK_THROWS_AS(j.get<SpectralReport>(), std::invalid_argument);
}
