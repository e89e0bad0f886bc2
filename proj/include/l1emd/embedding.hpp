#pragma once

#include "l1emd/fourier.hpp"
#include "l1emd/measures.hpp"

namespace l1emd {

/// AB: mu -> (A mu, B mu) into L1 + L1. S: the single operator with
/// multiplier |e_u - 1| + |e_v - 1|.
enum class Variant { AB, S };

/// Image of a measure in L1(Z_n^2) (+) L1(Z_n^2). For Variant::S, partB is empty.
struct EmbeddedVector {
  DomainSpec domain;
  Variant variant = Variant::AB;
  Field partA;
  Field partB;
};

/// (e^{2 pi i u/n} - 1) / (|e_u - 1|^2 + |e_v - 1|^2), zero at the origin.
Multiplier multiplier_A(int n);
/// (e^{2 pi i v/n} - 1) / (|e_u - 1|^2 + |e_v - 1|^2), zero at the origin.
Multiplier multiplier_B(int n);
/// |e^{2 pi i u/n} - 1| + |e^{2 pi i v/n} - 1|.
Multiplier multiplier_S(int n);

// The operators drop the (0,0) frequency, so only the M0 part of the input
// matters. Inputs must live on the torus with n >= 2.
Field op_A(const SignedMeasure& x);
Field op_B(const SignedMeasure& x);
Field op_S(const SignedMeasure& x);

/// Adjoints on functions; the (e_uv - 1) factor makes the output vanish at (0,0).
Field op_A_star(const Field& f);
Field op_B_star(const Field& g);

/// A*(d1 h) + B*(d2 h), which returns h whenever h(0,0) = 0.
Field reconstruct(const Field& h);

/// Embeds mu - U. Grid measures must go through grid_to_torus first.
EmbeddedVector embed(const ProbabilityMeasure& mu, Variant variant = Variant::AB);

/// Applies the variant's operators to a signed measure without centering.
EmbeddedVector embed_signed(const SignedMeasure& x, Variant variant = Variant::AB);

/// Sum of |difference| over all cells of both parts (counting measure).
double embedded_distance(const EmbeddedVector& x, const EmbeddedVector& y);

/// L1 norm of the image of x; equals embedded_distance(embed(mu), embed(nu)) for x = mu - nu.
double embedded_norm(const SignedMeasure& x, Variant variant = Variant::AB);

/// Places a side-n grid measure in the corner quadrant of the side-2n torus.
SignedMeasure grid_to_torus(const SignedMeasure& x);
ProbabilityMeasure grid_to_torus(const ProbabilityMeasure& mu);

} // namespace l1emd
