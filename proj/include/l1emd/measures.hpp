#pragma once

#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace l1emd {

/// Real function on the n x n cells, indexed (a, b) with a along e1.
using Field = Eigen::MatrixXd;
using ComplexField = Eigen::MatrixXcd;

enum class Topology { Grid, Torus };

struct Point {
  int a = 0;
  int b = 0;

  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Side length n means n cells per axis: {0,...,n-1}^2 or Z_n^2.
struct DomainSpec {
  int n = 1;
  Topology topology = Topology::Grid;

  DomainSpec() = default;
  DomainSpec(int side, Topology topo);

  int cells() const { return n * n; }
  bool contains(Point p) const { return p.a >= 0 && p.a < n && p.b >= 0 && p.b < n; }
  bool is_torus() const { return topology == Topology::Torus; }

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

/// Membership tolerance for M0 (total mass zero).
inline constexpr double kZeroMassTolerance = 1e-12;
/// Largest |total mass| that operations on M0 accept (after renormalizing).
inline constexpr double kBalanceTolerance = 1e-9;
inline constexpr double kProbabilityTolerance = 1e-12;
/// Negative entries above this are representational noise and get clamped.
inline constexpr double kNegativeClamp = 1e-14;

class SignedMeasure {
public:
  SignedMeasure(DomainSpec domain, Field mass);

  static SignedMeasure zero(DomainSpec domain);

  const DomainSpec& domain() const { return domain_; }
  const Field& mass() const { return mass_; }
  int n() const { return domain_.n; }

  double operator()(int a, int b) const { return mass_(a, b); }
  double operator()(Point p) const { return mass_(p.a, p.b); }

  /// Row-major sequential sum.
  double total_mass() const;
  bool in_zero_mass_space(double tol = kZeroMassTolerance) const;

  /// Cells with nonzero mass in row-major order.
  std::vector<Point> support() const;

private:
  DomainSpec domain_;
  Field mass_;
};

SignedMeasure operator+(const SignedMeasure& x, const SignedMeasure& y);
SignedMeasure operator-(const SignedMeasure& x, const SignedMeasure& y);
SignedMeasure operator-(const SignedMeasure& x);
SignedMeasure operator*(double c, const SignedMeasure& x);

/// Nonnegative measure of total mass one.
class ProbabilityMeasure {
public:
  explicit ProbabilityMeasure(SignedMeasure measure);

  const SignedMeasure& measure() const { return measure_; }
  operator const SignedMeasure&() const { return measure_; }

  const DomainSpec& domain() const { return measure_.domain(); }
  const Field& mass() const { return measure_.mass(); }
  double operator()(int a, int b) const { return measure_(a, b); }
  double operator()(Point p) const { return measure_(p); }

private:
  SignedMeasure measure_;
};

struct JordanParts {
  SignedMeasure positive;
  SignedMeasure negative;
};

struct MeasureKind {
  enum class Family { SparseK, DenseDirichlet, DiracPair };

  Family family = Family::DiracPair;
  int k = 0;

  static MeasureKind sparse(int k) { return {Family::SparseK, k}; }
  static MeasureKind dense() { return {Family::DenseDirichlet, 0}; }
  static MeasureKind dirac_pair() { return {Family::DiracPair, 0}; }
};

SignedMeasure from_dense(DomainSpec domain, const Field& values);

ProbabilityMeasure dirac(DomainSpec domain, Point p);
ProbabilityMeasure uniform(DomainSpec domain);
ProbabilityMeasure uniform_on_set(DomainSpec domain, const std::vector<Point>& points);

/// Unique split into disjointly supported nonnegative parts; positive - negative == x bit-exactly.
JordanParts jordan_decompose(const SignedMeasure& x);

SignedMeasure difference(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu);

/// mu - U, the isometric image of a probability measure in M0.
SignedMeasure center(const ProbabilityMeasure& mu);

double linf_norm(const SignedMeasure& x);

/// Pure function of its arguments. DiracPair is rejected here; use random_pair.
ProbabilityMeasure random_measure(std::uint64_t seed, DomainSpec domain, MeasureKind kind);

/// Two measures of the given family. DiracPair yields Diracs at distinct points
/// (needs n >= 2); other families yield two independent draws.
std::pair<ProbabilityMeasure, ProbabilityMeasure> random_pair(std::uint64_t seed, DomainSpec domain,
                                                              MeasureKind kind);

/// Dirac at a uniformly random cell.
ProbabilityMeasure random_dirac(std::uint64_t seed, DomainSpec domain);

} // namespace l1emd
