#include "l1emd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l1emd/errors.hpp"
#include "network_simplex.hpp"

namespace l1emd {

namespace {

struct Atoms {
  std::vector<Point> points;
  std::vector<double> mass;
  double total = 0.0;
};

Atoms positive_atoms(const SignedMeasure& x) {
  Atoms out;
  for (int a = 0; a < x.n(); ++a) {
    for (int b = 0; b < x.n(); ++b) {
      const double m = x(a, b);
      if (m < 0.0) {
        throw InvalidArgument("transport marginals must be nonnegative");
      }
      if (m > 0.0) {
        out.points.push_back({a, b});
        out.mass.push_back(m);
        out.total += m;
      }
    }
  }
  return out;
}

void require_metric_domain(const DomainSpec& measure, const GroundMetric& metric) {
  if (!(measure == metric.domain())) {
    throw InvalidArgument("measure and ground metric live on different domains");
  }
}

} // namespace

double GroundMetric::axis_gap_distance(int da, int db) const {
  if (domain_.is_torus()) {
    da = std::min(da, domain_.n - da);
    db = std::min(db, domain_.n - db);
  }
  return std::hypot(static_cast<double>(da), static_cast<double>(db));
}

double GroundMetric::operator()(Point p, Point q) const {
  if (!domain_.contains(p) || !domain_.contains(q)) {
    throw InvalidArgument("point outside the metric's domain");
  }
  return distance(p, q);
}

double GroundMetric::diameter() const {
  const int far = domain_.is_torus() ? domain_.n / 2 : domain_.n - 1;
  return axis_gap_distance(far, far);
}

double ground_distance(const GroundMetric& metric, Point p, Point q) { return metric(p, q); }

TransportResult transport(const SignedMeasure& supply, const SignedMeasure& demand, const GroundMetric& metric) {
  require_metric_domain(supply.domain(), metric);
  require_metric_domain(demand.domain(), metric);

  Atoms src = positive_atoms(supply);
  Atoms dst = positive_atoms(demand);
  if (src.points.empty() && dst.points.empty()) {
    return {};
  }
  const double scale = std::max(src.total, dst.total);
  if (std::abs(src.total - dst.total) > kMaxRelativeImbalance * scale) {
    throw InvalidArgument("supply and demand totals differ: " + std::to_string(src.total) + " vs " +
                          std::to_string(dst.total));
  }
  const double ratio = src.total / dst.total;
  for (double& m : dst.mass) {
    m *= ratio;
  }

  detail::TransportSimplex simplex(src.points, src.mass, dst.points, dst.mass, metric);
  simplex.run();

  TransportResult result;
  for (const auto& f : simplex.flows()) {
    // Degenerate tree arcs can hold rounding-level mass.
    if (f.mass <= 1e-15 * scale) {
      continue;
    }
    const Point p = src.points[static_cast<std::size_t>(f.source)];
    const Point q = dst.points[static_cast<std::size_t>(f.target)];
    result.plan.entries.push_back({p, q, f.mass});
    result.plan.cost += f.mass * metric.distance(p, q);
  }
  result.cost = result.plan.cost;

  Field row = Field::Zero(supply.n(), supply.n());
  Field col = Field::Zero(supply.n(), supply.n());
  for (const auto& e : result.plan.entries) {
    row(e.source.a, e.source.b) += e.mass;
    col(e.target.a, e.target.b) += e.mass;
  }
  for (std::size_t i = 0; i < src.points.size(); ++i) {
    row(src.points[i].a, src.points[i].b) -= src.mass[i];
  }
  for (std::size_t j = 0; j < dst.points.size(); ++j) {
    col(dst.points[j].a, dst.points[j].b) -= dst.mass[j];
  }
  const double violation = std::max(row.cwiseAbs().maxCoeff(), col.cwiseAbs().maxCoeff());
  if (violation > kMarginalTolerance * std::max(1.0, scale)) {
    throw SolverError("transport plan violates its marginals by " + std::to_string(violation));
  }
  return result;
}

TransportResult emd(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu, const GroundMetric& metric) {
  if (!(mu.domain() == nu.domain())) {
    throw InvalidArgument("emd: measures live on different domains");
  }
  return transport(mu.measure(), nu.measure(), metric);
}

double emd_norm(const SignedMeasure& x, const GroundMetric& metric) {
  const double total = x.total_mass();
  if (std::abs(total) > kBalanceTolerance) {
    throw InvalidArgument("emd_norm needs total mass 0, got " + std::to_string(total));
  }
  const JordanParts parts = jordan_decompose(x);
  return transport(parts.positive, parts.negative, metric).cost;
}

double lipschitz_violation(const DualPotential& f, std::span<const Point> points, const GroundMetric& metric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const Point p = points[i];
      const Point q = points[j];
      const double gap = std::abs(f.values(p.a, p.b) - f.values(q.a, q.b)) - metric(p, q);
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

PlanReport verify_plan(const TransportPlan& plan, const SignedMeasure& supply, const SignedMeasure& demand,
                       const GroundMetric& metric) {
  require_metric_domain(supply.domain(), metric);
  require_metric_domain(demand.domain(), metric);
  PlanReport report;
  Field row = supply.mass();
  Field col = demand.mass();
  bool nonnegative = true;
  for (const auto& e : plan.entries) {
    if (!supply.domain().contains(e.source) || !supply.domain().contains(e.target)) {
      report.feasible = false;
      report.max_marginal_violation = std::numeric_limits<double>::infinity();
      return report;
    }
    nonnegative = nonnegative && e.mass >= 0.0;
    row(e.source.a, e.source.b) -= e.mass;
    col(e.target.a, e.target.b) -= e.mass;
    report.cost_recomputed += e.mass * metric.distance(e.source, e.target);
  }
  report.max_marginal_violation = std::max(row.cwiseAbs().maxCoeff(), col.cwiseAbs().maxCoeff());
  report.feasible = nonnegative && report.max_marginal_violation <= kMarginalTolerance;
  return report;
}

} // namespace l1emd
