#include <doctest.h>

#include <cmath>

#include "l1emd/errors.hpp"
#include "l1emd/fourier.hpp"
#include "l1emd/random.hpp"
#include "naive_spectral.hpp"

using namespace l1emd;

namespace {

Field random_field(std::uint64_t seed, int n) {
  Rng rng(seed);
  Field f(n, n);
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    f.data()[i] = rng.normal();
  }
  return f;
}

ComplexField random_complex(std::uint64_t seed, int n) {
  return random_field(seed, n).cast<std::complex<double>>() +
         std::complex<double>(0, 1) * random_field(seed + 1000, n).cast<std::complex<double>>();
}

double max_abs(const ComplexField& z) { return z.size() == 0 ? 0.0 : z.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("1-D transform matches the direct sum for assorted lengths") {
  for (int n : {1, 2, 3, 5, 6, 7, 8, 12, 13, 31, 32, 100}) {
    const ComplexField z = random_complex(static_cast<std::uint64_t>(n), n).col(0);
    std::vector<std::complex<double>> data(z.data(), z.data() + n);
    fft_plan<double>(n)->forward(data);
    for (int k = 0; k < n; ++k) {
      std::complex<double> direct = 0.0;
      for (int j = 0; j < n; ++j) {
        direct += z(j) * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / n);
      }
      CHECK(std::abs(data[static_cast<std::size_t>(k)] - direct) < 1e-10 * n);
    }
  }
}

TEST_CASE("1-D plan rejects bad sizes") {
  CHECK_THROWS_AS(Fft1d<double>(0), InvalidArgument);
  std::vector<std::complex<double>> three(3);
  CHECK_THROWS_AS(fft_plan<double>(4)->forward(three), InvalidArgument);
}

TEST_CASE("single-precision plan") {
  const int n = 10;
  std::vector<std::complex<float>> data(n);
  data[1] = 1.0f;
  fft_plan<float>(n)->forward(data);
  for (int k = 0; k < n; ++k) {
    const auto expected = std::polar(1.0f, -2.0f * std::numbers::pi_v<float> * k / n);
    CHECK(std::abs(data[static_cast<std::size_t>(k)] - expected) < 1e-5f);
  }
}

TEST_CASE("dft2 matches the naive sum") {
  for (int n : {1, 2, 3, 4, 5, 7, 8, 9, 16}) {
    const ComplexField f = random_complex(static_cast<std::uint64_t>(40 + n), n);
    CHECK(max_abs(dft2(f).coeffs - naive::dft2(f)) < 1e-10);
  }
}

TEST_CASE("round trip is the identity") {
  for (int n = 1; n <= 40; ++n) {
    const ComplexField f = random_complex(static_cast<std::uint64_t>(n), n);
    CHECK(max_abs(idft2(dft2(f)) - f) < 1e-10);
  }
}

TEST_CASE("known coefficients") {
  const int n = 4;
  const DomainSpec d(n, Topology::Torus);
  const SpectralField s = dft2(dirac(d, {0, 0}).measure());
  CHECK(max_abs(s.coeffs - ComplexField::Constant(n, n, 1.0 / 16)) < 1e-15);

  SpectralField u = dft2(uniform(d).measure());
  CHECK(std::abs(u.coeffs(0, 0) - 1.0 / 16) < 1e-15);
  u.coeffs(0, 0) = 0.0;
  CHECK(max_abs(u.coeffs) < 1e-15);

  CHECK_THROWS_AS(dft2(dirac(DomainSpec(4, Topology::Grid), {0, 0}).measure()), InvalidArgument);
}

TEST_CASE("parseval and conjugate symmetry for real input") {
  for (int n : {5, 8, 9}) {
    const Field f = random_field(static_cast<std::uint64_t>(70 + n), n);
    const ComplexField c = dft2(f).coeffs;
    CHECK(c.cwiseAbs2().sum() * n * n == doctest::Approx(f.squaredNorm()).epsilon(1e-12));
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        CHECK(std::abs(c(u, v) - std::conj(c((n - u) % n, (n - v) % n))) < 1e-13);
      }
    }
  }
}

TEST_CASE("multiplier algebra") {
  const int n = 6;
  const Field f = random_field(3, n);
  const Multiplier m1 = multiplier_m1(n);
  const Multiplier m2 = multiplier_m2(n);
  CHECK(m1(0, 0) == 0.0);
  CHECK(m2(0, 0) == 0.0);
  CHECK(max_abs(apply_multiplier(Multiplier::identity(n), f) - f.cast<std::complex<double>>()) < 1e-12);
  CHECK(max_abs(apply_multiplier(Multiplier::zero(n), f)) == 0.0);
  // Composition is the pointwise product.
  const ComplexField twice = apply_multiplier(m2, apply_multiplier(m1, f));
  CHECK(max_abs(twice - apply_multiplier(m1 * m2, f)) < 1e-12);
  CHECK_THROWS_AS(Multiplier(ComplexField::Zero(2, 3)), InvalidArgument);
  CHECK_THROWS_AS(m1 * multiplier_m1(5), InvalidArgument);
  CHECK_THROWS_AS(apply_multiplier(m1, random_field(1, 5)), InvalidArgument);
  CHECK_THROWS_AS(multiplier_m1(1), InvalidArgument);
}

TEST_CASE("multiplier m1 against the naive spectral sum") {
  const int n = 5;
  const Field f = random_field(11, n);
  const naive::Symbol m1 = [](int u, int v, int m) {
    const double cu = std::norm(naive::e_minus_one(u, m));
    return naive::Complex(cu / (cu + std::norm(naive::e_minus_one(v, m))));
  };
  CHECK(max_abs(apply_multiplier(multiplier_m1(n), f) - naive::spectral_sum(f, m1)) < 1e-10);
  // m1 + its transpose is 1 away from the origin.
  const ComplexField sum = multiplier_m1(n).values() + multiplier_m1(n).values().transpose();
  CHECK(std::abs(sum(0, 0)) == 0.0);
  CHECK(std::abs(sum(2, 3) - 1.0) < 1e-15);
}

TEST_CASE("chord helpers") {
  CHECK(chord_squared(0, 7) == 0.0);
  CHECK(chord_squared(2, 4) == doctest::Approx(4.0));
  CHECK(std::abs(chord(1, 4) - std::complex<double>(-1.0, 1.0)) < 1e-15);
  for (int t = 0; t < 9; ++t) {
    CHECK(std::norm(chord(t, 9)) == doctest::Approx(chord_squared(t, 9)).epsilon(1e-14));
  }
}

TEST_CASE("partial differences are cyclic") {
  Field h(3, 3);
  h << 1, 2, 3, 4, 5, 6, 7, 8, 10;
  const Field d1 = partial_diff(1, h);
  const Field d2 = partial_diff(2, h);
  CHECK(d1(0, 0) == 3.0);
  CHECK(d1(2, 2) == -7.0);
  CHECK(d2(2, 1) == 2.0);
  CHECK(d2(0, 2) == -2.0);
  CHECK_THROWS_AS(partial_diff(3, h), InvalidArgument);
}

TEST_CASE("real part check") {
  ComplexField z = ComplexField::Constant(2, 2, {1.0, 1e-12});
  CHECK(real_part_checked(z)(1, 1) == 1.0);
  z(0, 1) = {1.0, 1e-6};
  CHECK_THROWS_AS(real_part_checked(z), SolverError);
}

TEST_CASE("p-norm estimate is deterministic and sane") {
  const Multiplier id = Multiplier::identity(6);
  CHECK(estimate_multiplier_pnorm(id, 1.0, 6, 1) == doctest::Approx(1.0));
  const double a = estimate_multiplier_pnorm(multiplier_m1(8), 1.0, 9, 4);
  CHECK(a == estimate_multiplier_pnorm(multiplier_m1(8), 1.0, 9, 4));
  CHECK(a > 0.0);
  // m1 is bounded by 1 pointwise, so its 2 -> 2 norm is at most 1.
  CHECK(estimate_multiplier_pnorm(multiplier_m1(8), 2.0, 9, 4) <= 1.0 + 1e-12);
  CHECK_THROWS_AS(estimate_multiplier_pnorm(id, 0.5, 3, 1), InvalidArgument);
  CHECK_THROWS_AS(estimate_multiplier_pnorm(id, 1.0, 0, 1), InvalidArgument);
}
