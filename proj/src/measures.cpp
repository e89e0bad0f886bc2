#include "l1emd/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "l1emd/errors.hpp"
#include "l1emd/random.hpp"

namespace l1emd {

namespace {

void require_same_domain(const DomainSpec& x, const DomainSpec& y) {
  if (!(x == y)) {
    throw InvalidArgument("measures live on different domains");
  }
}

std::string describe(Point p) {
  return "(" + std::to_string(p.a) + ", " + std::to_string(p.b) + ")";
}

// Partial Fisher-Yates over the n^2 cells.
std::vector<Point> sample_distinct_cells(Rng& rng, const DomainSpec& domain, int k) {
  const int cells = domain.cells();
  std::vector<int> index(static_cast<std::size_t>(cells));
  std::iota(index.begin(), index.end(), 0);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(cells - i)));
    std::swap(index[i], index[j]);
    out.push_back({index[i] / domain.n, index[i] % domain.n});
  }
  return out;
}

ProbabilityMeasure dirichlet(Rng& rng, const DomainSpec& domain) {
  Field mass(domain.n, domain.n);
  for (int a = 0; a < domain.n; ++a) {
    for (int b = 0; b < domain.n; ++b) {
      mass(a, b) = rng.exponential();
    }
  }
  // exponential() returns exactly 0 with probability 2^-53; masses must stay positive.
  mass = mass.cwiseMax(1e-300);
  double total = 0.0;
  for (int a = 0; a < domain.n; ++a) {
    for (int b = 0; b < domain.n; ++b) {
      total += mass(a, b);
    }
  }
  mass /= total;
  return ProbabilityMeasure(SignedMeasure(domain, std::move(mass)));
}

ProbabilityMeasure draw_single(Rng& rng, const DomainSpec& domain, MeasureKind kind) {
  switch (kind.family) {
  case MeasureKind::Family::SparseK:
    return uniform_on_set(domain, sample_distinct_cells(rng, domain, kind.k));
  case MeasureKind::Family::DenseDirichlet:
    return dirichlet(rng, domain);
  case MeasureKind::Family::DiracPair:
    break;
  }
  throw InvalidArgument("DiracPair draws two measures; use random_pair");
}

void check_kind(const DomainSpec& domain, MeasureKind kind) {
  if (kind.family == MeasureKind::Family::SparseK && (kind.k < 1 || kind.k > domain.cells())) {
    throw InvalidArgument("SparseK needs 1 <= k <= n^2, got k = " + std::to_string(kind.k));
  }
}

} // namespace

DomainSpec::DomainSpec(int side, Topology topo) : n(side), topology(topo) {
  if (side < 1) {
    throw InvalidArgument("side length must be >= 1, got " + std::to_string(side));
  }
}

SignedMeasure::SignedMeasure(DomainSpec domain, Field mass) : domain_(domain), mass_(std::move(mass)) {
  if (mass_.rows() != domain_.n || mass_.cols() != domain_.n) {
    throw InvalidArgument("mass table is " + std::to_string(mass_.rows()) + "x" +
                          std::to_string(mass_.cols()) + ", expected " + std::to_string(domain_.n) +
                          "x" + std::to_string(domain_.n));
  }
  if (!mass_.allFinite()) {
    throw InvalidArgument("mass table has a non-finite entry");
  }
}

SignedMeasure SignedMeasure::zero(DomainSpec domain) {
  return SignedMeasure(domain, Field::Zero(domain.n, domain.n));
}

double SignedMeasure::total_mass() const {
  double total = 0.0;
  for (int a = 0; a < domain_.n; ++a) {
    for (int b = 0; b < domain_.n; ++b) {
      total += mass_(a, b);
    }
  }
  return total;
}

bool SignedMeasure::in_zero_mass_space(double tol) const { return std::abs(total_mass()) <= tol; }

std::vector<Point> SignedMeasure::support() const {
  std::vector<Point> out;
  for (int a = 0; a < domain_.n; ++a) {
    for (int b = 0; b < domain_.n; ++b) {
      if (mass_(a, b) != 0.0) {
        out.push_back({a, b});
      }
    }
  }
  return out;
}

SignedMeasure operator+(const SignedMeasure& x, const SignedMeasure& y) {
  require_same_domain(x.domain(), y.domain());
  return SignedMeasure(x.domain(), x.mass() + y.mass());
}

SignedMeasure operator-(const SignedMeasure& x, const SignedMeasure& y) {
  require_same_domain(x.domain(), y.domain());
  return SignedMeasure(x.domain(), x.mass() - y.mass());
}

SignedMeasure operator-(const SignedMeasure& x) { return SignedMeasure(x.domain(), -x.mass()); }

SignedMeasure operator*(double c, const SignedMeasure& x) { return SignedMeasure(x.domain(), c * x.mass()); }

ProbabilityMeasure::ProbabilityMeasure(SignedMeasure measure) : measure_(std::move(measure)) {
  const Field& m = measure_.mass();
  if ((m.array() < -kNegativeClamp).any()) {
    throw InvalidArgument("probability measure has a negative entry (min " +
                          std::to_string(m.minCoeff()) + ")");
  }
  if ((m.array() < 0.0).any()) {
    measure_ = SignedMeasure(measure_.domain(), m.cwiseMax(0.0));
  }
  const double total = measure_.total_mass();
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw InvalidArgument("probability measure has total mass " + std::to_string(total));
  }
}

SignedMeasure from_dense(DomainSpec domain, const Field& values) { return SignedMeasure(domain, values); }

ProbabilityMeasure dirac(DomainSpec domain, Point p) {
  if (!domain.contains(p)) {
    throw InvalidArgument("point " + describe(p) + " outside domain of side " + std::to_string(domain.n));
  }
  Field mass = Field::Zero(domain.n, domain.n);
  mass(p.a, p.b) = 1.0;
  return ProbabilityMeasure(SignedMeasure(domain, std::move(mass)));
}

ProbabilityMeasure uniform(DomainSpec domain) {
  return ProbabilityMeasure(
      SignedMeasure(domain, Field::Constant(domain.n, domain.n, 1.0 / static_cast<double>(domain.cells()))));
}

ProbabilityMeasure uniform_on_set(DomainSpec domain, const std::vector<Point>& points) {
  if (points.empty()) {
    throw InvalidArgument("uniform_on_set needs at least one point");
  }
  Field mass = Field::Zero(domain.n, domain.n);
  const double w = 1.0 / static_cast<double>(points.size());
  for (const Point& p : points) {
    if (!domain.contains(p)) {
      throw InvalidArgument("point " + describe(p) + " outside domain of side " + std::to_string(domain.n));
    }
    if (mass(p.a, p.b) != 0.0) {
      throw InvalidArgument("duplicate point " + describe(p));
    }
    mass(p.a, p.b) = w;
  }
  return ProbabilityMeasure(SignedMeasure(domain, std::move(mass)));
}

JordanParts jordan_decompose(const SignedMeasure& x) {
  return {SignedMeasure(x.domain(), x.mass().cwiseMax(0.0)),
          SignedMeasure(x.domain(), (-x.mass()).cwiseMax(0.0))};
}

SignedMeasure difference(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  return mu.measure() - nu.measure();
}

SignedMeasure center(const ProbabilityMeasure& mu) {
  SignedMeasure out = mu.measure() - uniform(mu.domain()).measure();
  const double total = out.total_mass();
  if (std::abs(total) > kZeroMassTolerance) {
    out = SignedMeasure(out.domain(), out.mass().array() - total / out.domain().cells());
  }
  return out;
}

double linf_norm(const SignedMeasure& x) { return x.mass().cwiseAbs().maxCoeff(); }

ProbabilityMeasure random_measure(std::uint64_t seed, DomainSpec domain, MeasureKind kind) {
  check_kind(domain, kind);
  Rng rng(seed);
  return draw_single(rng, domain, kind);
}

std::pair<ProbabilityMeasure, ProbabilityMeasure> random_pair(std::uint64_t seed, DomainSpec domain,
                                                              MeasureKind kind) {
  check_kind(domain, kind);
  Rng rng(seed);
  if (kind.family == MeasureKind::Family::DiracPair) {
    if (domain.cells() < 2) {
      throw InvalidArgument("DiracPair needs at least two cells");
    }
    const auto cells = sample_distinct_cells(rng, domain, 2);
    return {dirac(domain, cells[0]), dirac(domain, cells[1])};
  }
  auto first = draw_single(rng, domain, kind);
  auto second = draw_single(rng, domain, kind);
  return {std::move(first), std::move(second)};
}

ProbabilityMeasure random_dirac(std::uint64_t seed, DomainSpec domain) {
  Rng rng(seed);
  return dirac(domain, sample_distinct_cells(rng, domain, 1).front());
}

} // namespace l1emd
