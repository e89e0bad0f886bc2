#include "l1emd/embedding.hpp"

#include <cmath>
#include <string>

#include "l1emd/errors.hpp"

namespace l1emd {

namespace {

void require_side(int n, const char* op) {
  if (n < 2) {
    throw InvalidArgument(std::string(op) + " needs n >= 2");
  }
}

void require_torus_measure(const SignedMeasure& x, const char* op) {
  if (!x.domain().is_torus()) {
    throw InvalidArgument(std::string(op) + " acts on torus measures; convert grid measures with grid_to_torus");
  }
  require_side(x.n(), op);
}

template <typename Numerator>
Multiplier gradient_multiplier(int n, Numerator numerator) {
  ComplexField m = ComplexField::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == 0 && v == 0) {
        continue;
      }
      m(u, v) = numerator(u, v) / (chord_squared(u, n) + chord_squared(v, n));
    }
  }
  return Multiplier(std::move(m));
}

Field apply_real(const Multiplier& m, const Field& f) { return real_part_checked(apply_multiplier(m, f)); }

/// T f - (T f)(0, 0): the spectral sum against (e_uv - 1).
Field apply_based(const Multiplier& m, const Field& f) {
  Field out = apply_real(m, f);
  const double base = out(0, 0);
  out.array() -= base;
  return out;
}

} // namespace

Multiplier multiplier_A(int n) {
  require_side(n, "multiplier_A");
  return gradient_multiplier(n, [n](int u, int) { return chord(u, n); });
}

Multiplier multiplier_B(int n) {
  require_side(n, "multiplier_B");
  return gradient_multiplier(n, [n](int, int v) { return chord(v, n); });
}

Multiplier multiplier_S(int n) {
  require_side(n, "multiplier_S");
  ComplexField m(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      m(u, v) = std::sqrt(chord_squared(u, n)) + std::sqrt(chord_squared(v, n));
    }
  }
  return Multiplier(std::move(m));
}

Field op_A(const SignedMeasure& x) {
  require_torus_measure(x, "op_A");
  return apply_real(multiplier_A(x.n()), x.mass());
}

Field op_B(const SignedMeasure& x) {
  require_torus_measure(x, "op_B");
  return apply_real(multiplier_B(x.n()), x.mass());
}

Field op_S(const SignedMeasure& x) {
  require_torus_measure(x, "op_S");
  return apply_real(multiplier_S(x.n()), x.mass());
}

Field op_A_star(const Field& f) {
  require_side(static_cast<int>(f.rows()), "op_A_star");
  return apply_based(Multiplier(multiplier_A(static_cast<int>(f.rows())).values().conjugate()), f);
}

Field op_B_star(const Field& g) {
  require_side(static_cast<int>(g.rows()), "op_B_star");
  return apply_based(Multiplier(multiplier_B(static_cast<int>(g.rows())).values().conjugate()), g);
}

Field reconstruct(const Field& h) {
  require_side(static_cast<int>(h.rows()), "reconstruct");
  if (std::abs(h(0, 0)) > 1e-12) {
    throw InvalidArgument("reconstruct needs h(0,0) = 0, got " + std::to_string(h(0, 0)));
  }
  return op_A_star(partial_diff(1, h)) + op_B_star(partial_diff(2, h));
}

EmbeddedVector embed_signed(const SignedMeasure& x, Variant variant) {
  EmbeddedVector out{x.domain(), variant, {}, {}};
  if (variant == Variant::AB) {
    out.partA = op_A(x);
    out.partB = op_B(x);
  } else {
    out.partA = op_S(x);
    out.partB = Field(0, 0);
  }
  return out;
}

EmbeddedVector embed(const ProbabilityMeasure& mu, Variant variant) {
  if (!mu.domain().is_torus()) {
    throw InvalidArgument("embed acts on torus measures; convert grid measures with grid_to_torus");
  }
  return embed_signed(center(mu), variant);
}

double embedded_distance(const EmbeddedVector& x, const EmbeddedVector& y) {
  if (!(x.domain == y.domain) || x.variant != y.variant) {
    throw InvalidArgument("embedded vectors come from different domains or variants");
  }
  double total = (x.partA - y.partA).cwiseAbs().sum();
  if (x.partB.size() != 0 || y.partB.size() != 0) {
    total += (x.partB - y.partB).cwiseAbs().sum();
  }
  return total;
}

double embedded_norm(const SignedMeasure& x, Variant variant) {
  const EmbeddedVector image = embed_signed(x, variant);
  return image.partA.cwiseAbs().sum() + (image.partB.size() ? image.partB.cwiseAbs().sum() : 0.0);
}

SignedMeasure grid_to_torus(const SignedMeasure& x) {
  if (x.domain().is_torus()) {
    throw InvalidArgument("grid_to_torus expects a grid measure");
  }
  const int n = x.n();
  Field mass = Field::Zero(2 * n, 2 * n);
  mass.topLeftCorner(n, n) = x.mass();
  return SignedMeasure(DomainSpec(2 * n, Topology::Torus), std::move(mass));
}

ProbabilityMeasure grid_to_torus(const ProbabilityMeasure& mu) {
  return ProbabilityMeasure(grid_to_torus(mu.measure()));
}

} // namespace l1emd
