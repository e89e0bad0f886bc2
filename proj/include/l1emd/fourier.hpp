#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "l1emd/errors.hpp"
#include "l1emd/measures.hpp"

namespace l1emd {

/// Unnormalized 1-D DFT of fixed length n. Powers of two use an iterative
/// radix-2 transform; other lengths use Bluestein's chirp-z reduction to a
/// power-of-two circular convolution. Immutable after construction.
template <typename Real>
class Fft1d {
public:
  using Complex = std::complex<Real>;

  explicit Fft1d(int n) : n_(n) {
    if (n < 1) {
      throw InvalidArgument("FFT length must be >= 1");
    }
    pow2_ = (n & (n - 1)) == 0;
    if (pow2_) {
      init_radix2(n);
      return;
    }
    int m = 1;
    while (m < 2 * n - 1) {
      m <<= 1;
    }
    init_radix2(m);

    chirp_.resize(static_cast<std::size_t>(n));
    const auto two_n = static_cast<std::int64_t>(2) * n;
    for (std::int64_t j = 0; j < n; ++j) {
      // j^2 mod 2n keeps the phase argument small.
      const auto r = static_cast<Real>((j * j) % two_n);
      const Real angle = -std::numbers::pi_v<Real> * r / static_cast<Real>(n);
      chirp_[static_cast<std::size_t>(j)] = Complex(std::cos(angle), std::sin(angle));
    }
    kernel_.assign(static_cast<std::size_t>(m), Complex(0));
    kernel_[0] = std::conj(chirp_[0]);
    for (int j = 1; j < n; ++j) {
      kernel_[static_cast<std::size_t>(j)] = std::conj(chirp_[static_cast<std::size_t>(j)]);
      kernel_[static_cast<std::size_t>(m - j)] = std::conj(chirp_[static_cast<std::size_t>(j)]);
    }
    radix2(kernel_, false);
  }

  int size() const { return n_; }

  /// X_k = sum_j x_j exp(-2 pi i jk / n), in place.
  void forward(std::span<Complex> data) const { transform(data, false); }

  /// x_j = sum_k X_k exp(+2 pi i jk / n), in place, no 1/n factor.
  void backward(std::span<Complex> data) const { transform(data, true); }

private:
  void transform(std::span<Complex> data, bool inverse) const {
    if (static_cast<int>(data.size()) != n_) {
      throw InvalidArgument("FFT input length does not match the plan");
    }
    if (n_ == 1) {
      return;
    }
    if (pow2_) {
      radix2(data, inverse);
      return;
    }
    if (inverse) {
      for (auto& z : data) {
        z = std::conj(z);
      }
    }
    bluestein(data);
    if (inverse) {
      for (auto& z : data) {
        z = std::conj(z);
      }
    }
  }

  void init_radix2(int len) {
    len_ = len;
    bitrev_.resize(static_cast<std::size_t>(len));
    int bits = 0;
    while ((1 << bits) < len) {
      ++bits;
    }
    for (int i = 0; i < len; ++i) {
      int r = 0;
      for (int b = 0; b < bits; ++b) {
        r |= ((i >> b) & 1) << (bits - 1 - b);
      }
      bitrev_[static_cast<std::size_t>(i)] = r;
    }
    twiddle_.resize(static_cast<std::size_t>(std::max(1, len / 2)));
    for (int k = 0; k < len / 2; ++k) {
      const Real angle = -2 * std::numbers::pi_v<Real> * static_cast<Real>(k) / static_cast<Real>(len);
      twiddle_[static_cast<std::size_t>(k)] = Complex(std::cos(angle), std::sin(angle));
    }
  }

  void radix2(std::span<Complex> data, bool inverse) const {
    const int len = len_;
    for (int i = 0; i < len; ++i) {
      const int r = bitrev_[static_cast<std::size_t>(i)];
      if (i < r) {
        std::swap(data[i], data[r]);
      }
    }
    for (int half = 1; half < len; half <<= 1) {
      const int step = len / (2 * half);
      for (int start = 0; start < len; start += 2 * half) {
        for (int k = 0; k < half; ++k) {
          Complex w = twiddle_[static_cast<std::size_t>(k * step)];
          if (inverse) {
            w = std::conj(w);
          }
          const Complex t = w * data[start + k + half];
          data[start + k + half] = data[start + k] - t;
          data[start + k] += t;
        }
      }
    }
  }

  void bluestein(std::span<Complex> data) const {
    std::vector<Complex> work(static_cast<std::size_t>(len_), Complex(0));
    for (int j = 0; j < n_; ++j) {
      work[static_cast<std::size_t>(j)] = data[j] * chirp_[static_cast<std::size_t>(j)];
    }
    radix2(work, false);
    for (int i = 0; i < len_; ++i) {
      work[static_cast<std::size_t>(i)] *= kernel_[static_cast<std::size_t>(i)];
    }
    radix2(work, true);
    const Real scale = Real(1) / static_cast<Real>(len_);
    for (int k = 0; k < n_; ++k) {
      data[k] = work[static_cast<std::size_t>(k)] * scale * chirp_[static_cast<std::size_t>(k)];
    }
  }

  int n_ = 1;
  bool pow2_ = true;
  int len_ = 1;
  std::vector<int> bitrev_;
  std::vector<Complex> twiddle_;
  std::vector<Complex> chirp_;
  std::vector<Complex> kernel_;
};

/// Shared, cached plan for length n.
template <typename Real>
std::shared_ptr<const Fft1d<Real>> fft_plan(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const Fft1d<Real>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_shared<const Fft1d<Real>>(n);
  }
  return slot;
}

/// In-place unnormalized 2-D transform of a square complex table: columns
/// (axis a) first, then rows (axis b).
template <typename Real>
void fft2_in_place(Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& f, bool inverse) {
  const auto n = static_cast<int>(f.rows());
  if (f.cols() != n) {
    throw InvalidArgument("2-D transform needs a square table");
  }
  if (n == 0) {
    return;
  }
  const auto plan = fft_plan<Real>(n);
  for (int b = 0; b < n; ++b) {
    std::span<std::complex<Real>> column(f.col(b).data(), static_cast<std::size_t>(n));
    inverse ? plan->backward(column) : plan->forward(column);
  }
  std::vector<std::complex<Real>> row(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      row[static_cast<std::size_t>(b)] = f(a, b);
    }
    inverse ? plan->backward(row) : plan->forward(row);
    for (int b = 0; b < n; ++b) {
      f(a, b) = row[static_cast<std::size_t>(b)];
    }
  }
}

/// Fourier coefficients on Z_n^2 with the 1/n^2 convention:
/// coeffs(u, v) = n^-2 sum_{a,b} f(a, b) exp(-2 pi i (au + bv) / n).
struct SpectralField {
  ComplexField coeffs;

  int n() const { return static_cast<int>(coeffs.rows()); }
};

/// Pointwise table m(u, v) defining T_m f = sum m(u, v) fhat(u, v) e_uv.
class Multiplier {
public:
  explicit Multiplier(ComplexField values);

  static Multiplier identity(int n);
  static Multiplier zero(int n);

  const ComplexField& values() const { return values_; }
  int n() const { return static_cast<int>(values_.rows()); }
  std::complex<double> operator()(int u, int v) const { return values_(u, v); }

  friend Multiplier operator*(const Multiplier& x, const Multiplier& y);

private:
  ComplexField values_;
};

template <typename Derived>
SpectralField dft2(const Eigen::MatrixBase<Derived>& f) {
  if (f.rows() != f.cols()) {
    throw InvalidArgument("dft2 needs a square field");
  }
  SpectralField out{f.template cast<std::complex<double>>()};
  fft2_in_place(out.coeffs, false);
  const auto n = static_cast<double>(f.rows());
  out.coeffs /= n * n;
  return out;
}

/// Transform of a measure; the measure must live on the torus.
SpectralField dft2(const SignedMeasure& x);

/// f(a, b) = sum_{u,v} coeffs(u, v) exp(2 pi i (au + bv) / n).
ComplexField idft2(const SpectralField& s);

template <typename Derived>
ComplexField apply_multiplier(const Multiplier& m, const Eigen::MatrixBase<Derived>& f) {
  if (f.rows() != m.n() || f.cols() != m.n()) {
    throw InvalidArgument("multiplier and field have different sizes");
  }
  SpectralField s = dft2(f);
  s.coeffs.array() *= m.values().array();
  return idft2(s);
}

/// Largest |imag| entry.
double imaginary_residue(const ComplexField& z);

/// Real part, after checking the imaginary residue is at most tol * max(1, max |real|).
Field real_part_checked(const ComplexField& z, double tol = 1e-9);

/// Cyclic forward difference along axis 1 (a) or 2 (b): h(x + e_j) - h(x).
template <typename Derived>
typename Derived::PlainObject partial_diff(int axis, const Eigen::MatrixBase<Derived>& h) {
  if (axis != 1 && axis != 2) {
    throw InvalidArgument("partial_diff axis must be 1 or 2");
  }
  const auto n = h.rows();
  typename Derived::PlainObject out(n, h.cols());
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < h.cols(); ++b) {
      out(a, b) = axis == 1 ? h((a + 1) % n, b) - h(a, b) : h(a, (b + 1) % h.cols()) - h(a, b);
    }
  }
  return out;
}

/// partial_diff on a measure's mass table; the measure must live on the torus.
Field partial_diff(int axis, const SignedMeasure& h);

/// |e^{2 pi i t / n} - 1|^2 = 4 sin^2(pi t / n).
double chord_squared(int t, int n);
/// e^{2 pi i t / n} - 1.
std::complex<double> chord(int t, int n);

/// m1 = |e_u - 1|^2 / (|e_u - 1|^2 + |e_v - 1|^2), zero at the origin. Needs n >= 2.
Multiplier multiplier_m1(int n);
/// m2 = (e^{-2 pi i u/n} - 1)(e^{2 pi i v/n} - 1) / (|e_u - 1|^2 + |e_v - 1|^2), zero at the origin.
Multiplier multiplier_m2(int n);

/// Empirical lower bound on ||T_m||_{p->p} (counting measure): the largest
/// ratio ||T_m f||_p / ||f||_p over seeded Gaussian, Dirac and random-sign fields.
double estimate_multiplier_pnorm(const Multiplier& m, double p, int trials, std::uint64_t seed);

} // namespace l1emd
