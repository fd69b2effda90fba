#pragma once

// Unitary FFT (radix-2 with Bluestein fallback), orthonormal DST-I and
// Kronecker-structured application of 1D transforms to time-major data.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace wavepint {

using cplx = std::complex<double>;

/// Unitary DFT of fixed length. forward: (1/sqrt n) sum_j v_j e^{-2 pi i jk/n}.
class FourierPlan {
 public:
  explicit FourierPlan(std::size_t n);
  ~FourierPlan();
  FourierPlan(FourierPlan&&) noexcept;
  FourierPlan& operator=(FourierPlan&&) noexcept;

  [[nodiscard]] std::size_t size() const { return n_; }

  void forward(std::span<cplx> data) const;
  void inverse(std::span<cplx> data) const;

  /// Unnormalized transform, sign = -1 for forward, +1 for inverse.
  void execute(std::span<cplx> data, int sign) const;

 private:
  struct Bluestein;
  void radix2(std::span<cplx> data, int sign) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<cplx> twiddle_;  // e^{-2 pi i k / n}, k < n/2
  std::unique_ptr<Bluestein> bluestein_;
};

std::vector<cplx> fft(std::span<const cplx> v);
std::vector<cplx> ifft(std::span<const cplx> v);

/// Multiplication by S_n = sqrt(2/(n+1)) [sin(ij pi/(n+1))], via a length 2(n+1) FFT.
class SinePlan {
 public:
  explicit SinePlan(std::size_t n);

  [[nodiscard]] std::size_t size() const { return n_; }
  void apply(std::span<double> data) const;

 private:
  std::size_t n_;
  FourierPlan fft_;
  double scale_;
};

std::vector<double> dst1(std::span<const double> v);

/// Eigenvalues lambda with C = F diag(lambda) F^*, F_{jk} = n^{-1/2} e^{2 pi i jk/n};
/// lambda_k = sum_j c_j e^{-2 pi i jk/n}.
std::vector<cplx> circulant_eigenvalues(std::span<const cplx> first_column);
std::vector<cplx> circulant_eigenvalues(std::span<const double> first_column);

/// A 1D transform acting in place on one complex line.
class LineTransform {
 public:
  virtual ~LineTransform() = default;
  [[nodiscard]] virtual std::size_t size() const = 0;
  virtual void apply(std::span<cplx> line) const = 0;
};

class IdentityLine final : public LineTransform {
 public:
  explicit IdentityLine(std::size_t n) : n_(n) {}
  [[nodiscard]] std::size_t size() const override { return n_; }
  void apply(std::span<cplx>) const override {}

 private:
  std::size_t n_;
};

class FourierLine final : public LineTransform {
 public:
  FourierLine(std::size_t n, bool inverse) : plan_(n), inverse_(inverse) {}
  [[nodiscard]] std::size_t size() const override { return plan_.size(); }
  void apply(std::span<cplx> line) const override {
    inverse_ ? plan_.inverse(line) : plan_.forward(line);
  }

 private:
  FourierPlan plan_;
  bool inverse_;
};

/// DST-I along one direction (1D) or along both directions of an m1 x m1
/// lexicographic grid (2D, when dim == 2).
class SineLine final : public LineTransform {
 public:
  explicit SineLine(std::size_t m1, int dim = 1);
  [[nodiscard]] std::size_t size() const override { return size_; }
  void apply(std::span<cplx> line) const override;
  void apply_real(std::span<double> line) const;

 private:
  SinePlan plan_;
  int dim_;
  std::size_t size_;
};

/// (Time (x) Space) v for v of length n*m laid out time-major
/// (v[k*m + j], space index fastest). Returns a new vector.
std::vector<cplx> apply_time_space_transform(const LineTransform& time_plan,
                                             const LineTransform& space_plan,
                                             std::span<const cplx> v);
/// In-place variant.
void apply_time_space_transform_inplace(const LineTransform& time_plan,
                                        const LineTransform& space_plan, std::span<cplx> v);

}  // namespace wavepint
