#pragma once

#include <cstdlib>
#include <span>
#include <vector>

#include "l1emd/measures.hpp"

namespace l1emd {

/// Euclidean distance on the grid; geodesic Euclidean distance on the torus
/// (per-axis shorter arc, then l2).
class GroundMetric {
public:
  explicit GroundMetric(DomainSpec domain) : domain_(domain) {}

  const DomainSpec& domain() const { return domain_; }

  /// Throws InvalidArgument for points outside the domain.
  double operator()(Point p, Point q) const;

  /// Unchecked distance for in-range points.
  double distance(Point p, Point q) const {
    return axis_gap_distance(std::abs(p.a - q.a), std::abs(p.b - q.b));
  }

  double axis_gap_distance(int da, int db) const;

  /// Largest distance between two cells.
  double diameter() const;

private:
  DomainSpec domain_;
};

double ground_distance(const GroundMetric& metric, Point p, Point q);

struct PlanEntry {
  Point source;
  Point target;
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<PlanEntry> entries;
  double cost = 0.0;
};

struct TransportResult {
  double cost = 0.0;
  TransportPlan plan;
};

/// Lipschitz witness with f(0,0) = 0.
struct DualPotential {
  Field values;
};

struct DualResult {
  double value = 0.0;
  DualPotential witness;
};

struct PlanReport {
  bool feasible = false;
  double max_marginal_violation = 0.0;
  double cost_recomputed = 0.0;
};

struct MatchingResult {
  double cost = 0.0;
  /// assignment[i] is the index in B matched to A[i].
  std::vector<int> assignment;
};

/// Marginal tolerance used by verify_plan and the emd postcondition.
inline constexpr double kMarginalTolerance = 1e-9;
/// Relative imbalance above which emd_norm refuses to rebalance the parts.
inline constexpr double kMaxRelativeImbalance = 1e-6;
/// Largest side accepted by the dual LP.
inline constexpr int kDualMaxSide = 32;
inline constexpr int kBruteForceMaxPoints = 9;

/// Optimal transport between two probability measures on their full supports.
TransportResult emd(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu, const GroundMetric& metric);

/// Optimal transport between two nonnegative measures of (nearly) equal total
/// mass. The negative part is rescaled to the positive part's total first.
TransportResult transport(const SignedMeasure& supply, const SignedMeasure& demand, const GroundMetric& metric);

/// tau(x+, x-) for x in M0. Zero for the zero measure.
double emd_norm(const SignedMeasure& x, const GroundMetric& metric);

/// Hungarian algorithm, O(k^3).
MatchingResult min_weight_matching(std::span<const Point> A, std::span<const Point> B, const GroundMetric& metric);

/// Exhaustive minimum over all k! bijections; k <= 9.
double brute_force_matching(std::span<const Point> A, std::span<const Point> B, const GroundMetric& metric);

/// Kantorovich dual: maximize sum f * x over f that are 1-Lipschitz on the
/// 4-neighbour edges and on every pair of support points. Solved as the
/// network LP it is (uncapacitated transshipment, successive shortest paths).
DualResult dual_potential(const SignedMeasure& x, const GroundMetric& metric);

/// Largest violation of |f(p) - f(q)| <= d(p, q) over the given points, all pairs.
double lipschitz_violation(const DualPotential& f, std::span<const Point> points, const GroundMetric& metric);

/// Recomputes both marginals and the cost independently of any solver.
PlanReport verify_plan(const TransportPlan& plan, const SignedMeasure& supply, const SignedMeasure& demand,
                       const GroundMetric& metric);

} // namespace l1emd
