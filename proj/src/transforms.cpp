#include "wavepint/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wavepint {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

// Arbitrary length n through a chirp convolution of power-of-two length.
struct FourierPlan::Bluestein {
  std::size_t len;
  std::unique_ptr<FourierPlan> inner;
  std::vector<cplx> chirp;      // e^{-i pi k^2 / n}
  std::vector<cplx> kernel_hat; // FFT of conj(chirp), wrapped
};

FourierPlan::FourierPlan(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FourierPlan: length must be positive");
  if (is_pow2(n)) {
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (unsigned b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      bitrev_[i] = r;
    }
    twiddle_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
      twiddle_[k] = std::polar(1.0, -2.0 * kPi * double(k) / double(n));
    return;
  }

  auto bs = std::make_unique<Bluestein>();
  bs->len = next_pow2(2 * n - 1);
  bs->inner = std::make_unique<FourierPlan>(bs->len);
  bs->chirp.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small for large k.
    const std::size_t k2 = (k * k) % (2 * n);
    bs->chirp[k] = std::polar(1.0, -kPi * double(k2) / double(n));
  }
  bs->kernel_hat.assign(bs->len, cplx{});
  bs->kernel_hat[0] = std::conj(bs->chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    bs->kernel_hat[k] = std::conj(bs->chirp[k]);
    bs->kernel_hat[bs->len - k] = std::conj(bs->chirp[k]);
  }
  bs->inner->execute(bs->kernel_hat, -1);
  bluestein_ = std::move(bs);
}

FourierPlan::~FourierPlan() = default;
FourierPlan::FourierPlan(FourierPlan&&) noexcept = default;
FourierPlan& FourierPlan::operator=(FourierPlan&&) noexcept = default;

void FourierPlan::radix2(std::span<cplx> a, int sign) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i)
    if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        cplx w = twiddle_[j * stride];
        if (sign > 0) w = std::conj(w);
        const cplx u = a[start + j];
        const cplx v = a[start + j + half] * w;
        a[start + j] = u + v;
        a[start + j + half] = u - v;
      }
    }
  }
}

void FourierPlan::execute(std::span<cplx> data, int sign) const {
  if (data.size() != n_)
    throw std::invalid_argument("FourierPlan: length " + std::to_string(data.size()) +
                                ", expected " + std::to_string(n_));
  if (n_ == 1) return;
  if (!bluestein_) {
    radix2(data, sign);
    return;
  }
  // X_k = c_k sum_j (x_j c_j) conj(c_{k-j}) with c_k = e^{-i pi k^2/n};
  // the inverse direction conjugates input and output.
  const Bluestein& bs = *bluestein_;
  std::vector<cplx> work(bs.len, cplx{});
  for (std::size_t k = 0; k < n_; ++k) {
    const cplx x = sign > 0 ? std::conj(data[k]) : data[k];
    work[k] = x * bs.chirp[k];
  }
  bs.inner->execute(work, -1);
  for (std::size_t k = 0; k < bs.len; ++k) work[k] *= bs.kernel_hat[k];
  bs.inner->execute(work, +1);
  const double inv_len = 1.0 / double(bs.len);
  for (std::size_t k = 0; k < n_; ++k) {
    const cplx y = work[k] * inv_len * bs.chirp[k];
    data[k] = sign > 0 ? std::conj(y) : y;
  }
}

void FourierPlan::forward(std::span<cplx> data) const {
  execute(data, -1);
  const double s = 1.0 / std::sqrt(double(n_));
  for (auto& x : data) x *= s;
}

void FourierPlan::inverse(std::span<cplx> data) const {
  execute(data, +1);
  const double s = 1.0 / std::sqrt(double(n_));
  for (auto& x : data) x *= s;
}

std::vector<cplx> fft(std::span<const cplx> v) {
  std::vector<cplx> out(v.begin(), v.end());
  if (!out.empty()) FourierPlan(out.size()).forward(out);
  return out;
}

std::vector<cplx> ifft(std::span<const cplx> v) {
  std::vector<cplx> out(v.begin(), v.end());
  if (!out.empty()) FourierPlan(out.size()).inverse(out);
  return out;
}

SinePlan::SinePlan(std::size_t n)
    : n_(n), fft_(2 * (n + 1)), scale_(std::sqrt(2.0 / double(n + 1))) {
  if (n == 0) throw std::invalid_argument("SinePlan: length must be positive");
}

// Odd extension x = [0, v, 0, -reverse(v)] of length 2(n+1) has DFT
// X_k = -2i sum_j v_j sin(jk pi/(n+1)).
void SinePlan::apply(std::span<double> data) const {
  if (data.size() != n_)
    throw std::invalid_argument("SinePlan: length " + std::to_string(data.size()) +
                                ", expected " + std::to_string(n_));
  const std::size_t len = 2 * (n_ + 1);
  std::vector<cplx> work(len, cplx{});
  for (std::size_t j = 0; j < n_; ++j) {
    work[j + 1] = data[j];
    work[len - 1 - j] = -data[j];
  }
  fft_.execute(work, -1);
  for (std::size_t k = 0; k < n_; ++k) data[k] = -0.5 * scale_ * work[k + 1].imag();
}

std::vector<double> dst1(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  if (!out.empty()) SinePlan(out.size()).apply(out);
  return out;
}

std::vector<cplx> circulant_eigenvalues(std::span<const cplx> first_column) {
  std::vector<cplx> out(first_column.begin(), first_column.end());
  if (!out.empty()) FourierPlan(out.size()).execute(out, -1);
  return out;
}

std::vector<cplx> circulant_eigenvalues(std::span<const double> first_column) {
  std::vector<cplx> c(first_column.begin(), first_column.end());
  return circulant_eigenvalues(std::span<const cplx>(c));
}

SineLine::SineLine(std::size_t m1, int dim)
    : plan_(m1), dim_(dim), size_(dim == 2 ? m1 * m1 : m1) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("SineLine: dim must be 1 or 2");
}

void SineLine::apply_real(std::span<double> line) const {
  if (line.size() != size_) throw std::invalid_argument("SineLine: length mismatch");
  const std::size_t m1 = plan_.size();
  if (dim_ == 1) {
    plan_.apply(line);
    return;
  }
  // Rows (x1 fastest) then columns.
  for (std::size_t r = 0; r < m1; ++r) plan_.apply(line.subspan(r * m1, m1));
  std::vector<double> col(m1);
  for (std::size_t c = 0; c < m1; ++c) {
    for (std::size_t r = 0; r < m1; ++r) col[r] = line[r * m1 + c];
    plan_.apply(col);
    for (std::size_t r = 0; r < m1; ++r) line[r * m1 + c] = col[r];
  }
}

void SineLine::apply(std::span<cplx> line) const {
  if (line.size() != size_) throw std::invalid_argument("SineLine: length mismatch");
  std::vector<double> re(size_), im(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    re[i] = line[i].real();
    im[i] = line[i].imag();
  }
  apply_real(re);
  apply_real(im);
  for (std::size_t i = 0; i < size_; ++i) line[i] = {re[i], im[i]};
}

void apply_time_space_transform_inplace(const LineTransform& time_plan,
                                        const LineTransform& space_plan, std::span<cplx> v) {
  const std::size_t n = time_plan.size();
  const std::size_t m = space_plan.size();
  if (v.size() != n * m)
    throw std::invalid_argument("apply_time_space_transform: length " + std::to_string(v.size()) +
                                ", expected " + std::to_string(n * m));
  std::vector<cplx> line(n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < n; ++k) line[k] = v[k * m + j];
    time_plan.apply(line);
    for (std::size_t k = 0; k < n; ++k) v[k * m + j] = line[k];
  }
  for (std::size_t k = 0; k < n; ++k) space_plan.apply(v.subspan(k * m, m));
}

std::vector<cplx> apply_time_space_transform(const LineTransform& time_plan,
                                             const LineTransform& space_plan,
                                             std::span<const cplx> v) {
  std::vector<cplx> out(v.begin(), v.end());
  apply_time_space_transform_inplace(time_plan, space_plan, out);
  return out;
}

}  // namespace wavepint
