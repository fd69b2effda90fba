#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "test_support.hpp"
#include "wavepint/transforms.hpp"

using namespace wavepint;
using oracle::cplx;

namespace {

std::vector<cplx> random_complex(std::size_t n, unsigned seed) {
  const auto re = oracle::random_vector(n, seed);
  const auto im = oracle::random_vector(n, seed + 7919);
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {re[i], im[i]};
  return v;
}

double norm(const std::vector<cplx>& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

Eigen::VectorXcd to_eigen(const std::vector<cplx>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), Eigen::Index(v.size()));
}

}  // namespace

TEST_CASE("unitary fft") {
  SUBCASE("delta") {
    const auto out = fft(std::vector<cplx>{1, 0, 0, 0});
    for (const auto& x : out) CHECK(std::abs(x - cplx(0.5)) < 1e-15);
  }
  SUBCASE("constant") {
    const auto out = fft(std::vector<cplx>{1, 1, 1, 1});
    CHECK(std::abs(out[0] - cplx(2)) < 1e-15);
    for (int k = 1; k < 4; ++k) CHECK(std::abs(out[k]) < 1e-15);
  }
  SUBCASE("naive DFT oracle, n = 12") {
    const auto v = random_complex(12, 4);
    CHECK(diff(fft(v), oracle::naive_dft(v, -1)) < 1e-12 * norm(v));
    CHECK(diff(ifft(v), oracle::naive_dft(v, +1)) < 1e-12 * norm(v));
  }
  SUBCASE("round trip and Parseval for many lengths") {
    for (std::size_t n : {1u, 2u, 3u, 5u, 7u, 8u, 12u, 17u, 31u, 33u, 64u, 100u, 129u, 257u}) {
      const auto v = random_complex(n, unsigned(n));
      CHECK(diff(ifft(fft(v)), v) <= 1e-13 * norm(v));
      CHECK(std::abs(norm(fft(v)) - norm(v)) <= 1e-12 * norm(v));
      if (n <= 64) CHECK(diff(fft(v), oracle::naive_dft(v, -1)) <= 1e-12 * norm(v));
    }
  }
  SUBCASE("plan errors") {
    CHECK_THROWS_AS(FourierPlan(0), std::invalid_argument);
    std::vector<cplx> wrong(5);
    CHECK_THROWS_AS(FourierPlan(4).forward(wrong), std::invalid_argument);
  }
}

TEST_CASE("dst1") {
  SUBCASE("involution") {
    for (std::size_t n : {1u, 3u, 8u, 31u, 100u}) {
      const auto v = oracle::random_vector(Eigen::Index(n), unsigned(n));
      std::vector<double> x(v.data(), v.data() + n);
      const auto y = dst1(dst1(x));
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - x[i]) <= 1e-13 * v.norm());
    }
  }
  SUBCASE("n = 3 row readout") {
    const auto y = dst1(std::vector<double>{1, 0, 0});
    CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(y[1] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));
    CHECK(y[2] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("explicit S_n multiplication for n <= 64") {
    for (int n = 1; n <= 64; ++n) {
      const Eigen::VectorXd v = oracle::random_vector(n, 50 + n);
      const Eigen::VectorXd expect = oracle::sine_matrix(n) * v;
      const auto y = dst1(std::vector<double>(v.data(), v.data() + n));
      CHECK(oracle::rel_diff(Eigen::Map<const Eigen::VectorXd>(y.data(), n), expect) < 1e-12);
      CHECK(std::abs(Eigen::Map<const Eigen::VectorXd>(y.data(), n).norm() - v.norm()) < 1e-12 * v.norm());
    }
  }
  SUBCASE("diagonalizes tridiag(-1, 2, -1)") {
    const int n = 9;
    const Eigen::MatrixXd s = oracle::sine_matrix(n);
    // Build S via the fast transform column by column.
    Eigen::MatrixXd fast(n, n);
    for (int j = 0; j < n; ++j) {
      std::vector<double> e(n, 0.0);
      e[j] = 1;
      const auto c = dst1(e);
      for (int i = 0; i < n; ++i) fast(i, j) = c[i];
    }
    CHECK(oracle::rel_diff(fast, s) < 1e-13);
    const Eigen::MatrixXd d = fast * oracle::tridiag(n, -1, 2, -1) * fast;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double expect = i == j ? 2 - 2 * std::cos((i + 1) * oracle::pi / (n + 1)) : 0.0;
        CHECK(std::abs(d(i, j) - expect) < 1e-12);
      }
  }
}

TEST_CASE("circulant eigenvalues") {
  SUBCASE("S1 is singular") {
    const auto l = circulant_eigenvalues(std::vector<double>{1, -2, 1, 0});
    CHECK(std::abs(l[0]) < 1e-15);
  }
  SUBCASE("identity") {
    for (const auto& x : circulant_eigenvalues(std::vector<double>{1, 0, 0, 0, 0}))
      CHECK(std::abs(x - cplx(1)) < 1e-15);
  }
  SUBCASE("S2 at n = 8") {
    const auto l = circulant_eigenvalues(std::vector<double>{1, 0, 1, 0, 0, 0, 0, 0});
    for (int k = 0; k < 8; ++k)
      CHECK(std::abs(l[k] - (1.0 + std::polar(1.0, -4 * oracle::pi * k / 8))) < 1e-14);
  }
  SUBCASE("C = F diag(lambda) F^*") {
    for (int n : {5, 8, 12}) {
      const auto cr = oracle::random_vector(n, 77 + n);
      std::vector<double> c(cr.data(), cr.data() + n);
      const auto l = circulant_eigenvalues(c);
      const Eigen::MatrixXcd f = oracle::fourier_matrix(n);
      const Eigen::MatrixXcd rebuilt = f * to_eigen(l).asDiagonal() * f.adjoint();
      const Eigen::MatrixXd dense = oracle::circulant(c);
      CHECK((rebuilt - dense.cast<cplx>()).norm() < 1e-12 * dense.norm());
      // Column 0 of the reconstruction reproduces c.
      for (int i = 0; i < n; ++i) CHECK(std::abs(rebuilt(i, 0) - c[i]) < 1e-12);
    }
  }
}

TEST_CASE("Kronecker-structured transforms") {
  SUBCASE("identity plans") {
    const auto v = random_complex(12, 9);
    CHECK(apply_time_space_transform(IdentityLine(4), IdentityLine(3), v) == v);
  }
  SUBCASE("F_2 (x) I_1 is the 2-point DFT") {
    const std::vector<cplx> v{cplx(1, 2), cplx(3, -1)};
    const auto out = apply_time_space_transform(FourierLine(2, false), IdentityLine(1), v);
    CHECK(std::abs(out[0] - (v[0] + v[1]) / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(out[1] - (v[0] - v[1]) / std::sqrt(2.0)) < 1e-15);
  }
  SUBCASE("DST (x) DST against the dense Kronecker product") {
    const auto v = random_complex(12, 10);
    const auto out = apply_time_space_transform(SineLine(4), SineLine(3), v);
    const Eigen::MatrixXd k = oracle::kron(oracle::sine_matrix(4), oracle::sine_matrix(3));
    CHECK((to_eigen(out) - k.cast<cplx>() * to_eigen(v)).norm() < 1e-13 * norm(v));
  }
  SUBCASE("Fourier (x) 2D sine against the dense Kronecker product") {
    const auto v = random_complex(5 * 9, 11);
    const auto out = apply_time_space_transform(FourierLine(5, true), SineLine(3, 2), v);
    const Eigen::MatrixXd s = oracle::sine_matrix(3);
    const Eigen::MatrixXcd k = oracle::kron(Eigen::MatrixXcd(oracle::fourier_matrix(5)),
                                            Eigen::MatrixXcd(oracle::kron(s, s).cast<cplx>()));
    CHECK((to_eigen(out) - k * to_eigen(v)).norm() < 1e-12 * norm(v));
  }
  SUBCASE("time then space equals space then time") {
    const auto v = random_complex(6 * 4, 12);
    const auto both = apply_time_space_transform(FourierLine(6, false), SineLine(4), v);
    const auto space_first = apply_time_space_transform(IdentityLine(6), SineLine(4), v);
    const auto then_time = apply_time_space_transform(FourierLine(6, false), IdentityLine(4), space_first);
    CHECK(diff(both, then_time) < 1e-13 * norm(v));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(apply_time_space_transform(IdentityLine(4), IdentityLine(3), random_complex(11, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(SineLine(3, 3), std::invalid_argument);
  }
}
