#include "l1emd/fourier.hpp"

#include <cmath>
#include <string>

#include "l1emd/random.hpp"

namespace l1emd {

namespace {

void require_torus(const SignedMeasure& x, const char* op) {
  if (!x.domain().is_torus()) {
    throw InvalidArgument(std::string(op) + " is defined on the torus; got a grid measure");
  }
}

double lp_norm(const ComplexField& z, double p) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    total += std::pow(std::abs(z.data()[i]), p);
  }
  return std::pow(total, 1.0 / p);
}

} // namespace

Multiplier::Multiplier(ComplexField values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw InvalidArgument("multiplier table must be square");
  }
  if (!values_.allFinite()) {
    throw InvalidArgument("multiplier has a non-finite entry");
  }
}

Multiplier Multiplier::identity(int n) { return Multiplier(ComplexField::Ones(n, n)); }

Multiplier Multiplier::zero(int n) { return Multiplier(ComplexField::Zero(n, n)); }

Multiplier operator*(const Multiplier& x, const Multiplier& y) {
  if (x.n() != y.n()) {
    throw InvalidArgument("multipliers have different sizes");
  }
  return Multiplier(x.values().cwiseProduct(y.values()));
}

SpectralField dft2(const SignedMeasure& x) {
  require_torus(x, "dft2");
  return dft2(x.mass());
}

ComplexField idft2(const SpectralField& s) {
  ComplexField out = s.coeffs;
  fft2_in_place(out, true);
  return out;
}

double imaginary_residue(const ComplexField& z) {
  return z.size() == 0 ? 0.0 : z.imag().cwiseAbs().maxCoeff();
}

Field real_part_checked(const ComplexField& z, double tol) {
  Field re = z.real();
  const double scale = std::max(1.0, re.size() == 0 ? 0.0 : re.cwiseAbs().maxCoeff());
  const double residue = imaginary_residue(z);
  if (residue > tol * scale) {
    throw SolverError("operator output should be real; imaginary residue " + std::to_string(residue));
  }
  return re;
}

Field partial_diff(int axis, const SignedMeasure& h) {
  require_torus(h, "partial_diff");
  return partial_diff(axis, h.mass());
}

double chord_squared(int t, int n) {
  const double s = std::sin(std::numbers::pi * static_cast<double>(t) / static_cast<double>(n));
  return 4.0 * s * s;
}

std::complex<double> chord(int t, int n) {
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
  const double half = std::sin(0.5 * theta);
  // cos(theta) - 1 = -2 sin^2(theta / 2), without cancellation near zero.
  return {-2.0 * half * half, std::sin(theta)};
}

Multiplier multiplier_m1(int n) {
  if (n < 2) {
    throw InvalidArgument("multiplier_m1 needs n >= 2");
  }
  ComplexField m = ComplexField::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == 0 && v == 0) {
        continue;
      }
      const double cu = chord_squared(u, n);
      m(u, v) = cu / (cu + chord_squared(v, n));
    }
  }
  return Multiplier(std::move(m));
}

Multiplier multiplier_m2(int n) {
  if (n < 2) {
    throw InvalidArgument("multiplier_m2 needs n >= 2");
  }
  ComplexField m = ComplexField::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == 0 && v == 0) {
        continue;
      }
      m(u, v) = std::conj(chord(u, n)) * chord(v, n) / (chord_squared(u, n) + chord_squared(v, n));
    }
  }
  return Multiplier(std::move(m));
}

double estimate_multiplier_pnorm(const Multiplier& m, double p, int trials, std::uint64_t seed) {
  if (!(p >= 1.0)) {
    throw InvalidArgument("estimate_multiplier_pnorm needs p >= 1");
  }
  if (trials < 1) {
    throw InvalidArgument("estimate_multiplier_pnorm needs at least one trial");
  }
  const int n = m.n();
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    Field f = Field::Zero(n, n);
    switch (t % 3) {
    case 0:
      for (Eigen::Index i = 0; i < f.size(); ++i) {
        f.data()[i] = rng.normal();
      }
      break;
    case 1:
      f(static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
        static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))) = 1.0;
      break;
    default:
      for (Eigen::Index i = 0; i < f.size(); ++i) {
        f.data()[i] = (rng.bits() >> 63) != 0 ? 1.0 : -1.0;
      }
      break;
    }
    const double denom = lp_norm(f.cast<std::complex<double>>(), p);
    if (denom == 0.0) {
      continue;
    }
    best = std::max(best, lp_norm(apply_multiplier(m, f), p) / denom);
  }
  return best;
}

} // namespace l1emd
