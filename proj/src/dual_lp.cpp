#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "l1emd/errors.hpp"
#include "l1emd/transport.hpp"

namespace l1emd {

namespace {

// Constraint graph of the dual LP. Each directed arc u -> v with cost c stands
// for f(u) - f(v) <= c in the LP and for an uncapacitated arc in its network dual.
struct ConstraintGraph {
  struct Arc {
    int from;
    int to;
    double cost;
  };

  int nodes = 0;
  std::vector<Arc> arcs;
  std::vector<int> out_start, out_list, in_start, in_list;

  void finalize() {
    out_start.assign(static_cast<std::size_t>(nodes) + 1, 0);
    in_start.assign(static_cast<std::size_t>(nodes) + 1, 0);
    for (const Arc& e : arcs) {
      ++out_start[static_cast<std::size_t>(e.from) + 1];
      ++in_start[static_cast<std::size_t>(e.to) + 1];
    }
    for (int u = 0; u < nodes; ++u) {
      out_start[u + 1] += out_start[u];
      in_start[u + 1] += in_start[u];
    }
    out_list.resize(arcs.size());
    in_list.resize(arcs.size());
    std::vector<int> out_fill(out_start.begin(), out_start.end() - 1);
    std::vector<int> in_fill(in_start.begin(), in_start.end() - 1);
    for (int e = 0; e < static_cast<int>(arcs.size()); ++e) {
      out_list[out_fill[arcs[e].from]++] = e;
      in_list[in_fill[arcs[e].to]++] = e;
    }
  }
};

ConstraintGraph build_constraint_graph(const DomainSpec& domain, const std::vector<Point>& support,
                                       const GroundMetric& metric) {
  ConstraintGraph g;
  const int n = domain.n;
  g.nodes = n * n;
  auto id = [n](Point p) { return p.a * n + p.b; };
  auto add_pair = [&](Point p, Point q) {
    const double d = metric.distance(p, q);
    g.arcs.push_back({id(p), id(q), d});
    g.arcs.push_back({id(q), id(p), d});
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Point p{a, b};
      if (a + 1 < n) {
        add_pair(p, {a + 1, b});
      } else if (domain.is_torus() && n > 2) {
        add_pair(p, {0, b});
      }
      if (b + 1 < n) {
        add_pair(p, {a, b + 1});
      } else if (domain.is_torus() && n > 2) {
        add_pair(p, {a, 0});
      }
    }
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      add_pair(support[i], support[j]);
    }
  }
  g.finalize();
  return g;
}

} // namespace

DualResult dual_potential(const SignedMeasure& x, const GroundMetric& metric) {
  const DomainSpec& domain = x.domain();
  if (!(domain == metric.domain())) {
    throw InvalidArgument("measure and ground metric live on different domains");
  }
  if (domain.n > kDualMaxSide) {
    throw InvalidArgument("dual LP is limited to side " + std::to_string(kDualMaxSide) + ", got " +
                          std::to_string(domain.n));
  }
  const double total = x.total_mass();
  if (std::abs(total) > kBalanceTolerance) {
    throw InvalidArgument("dual_potential needs total mass 0, got " + std::to_string(total));
  }

  const int n = domain.n;
  const int nodes = n * n;
  const JordanParts parts = jordan_decompose(x);
  const double pos_total = parts.positive.total_mass();
  const double neg_total = parts.negative.total_mass();

  DualResult result;
  result.witness.values = Field::Zero(n, n);
  if (pos_total == 0.0 && neg_total == 0.0) {
    return result;
  }
  const double ratio = pos_total / neg_total;

  std::vector<double> excess(static_cast<std::size_t>(nodes));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      excess[static_cast<std::size_t>(a * n + b)] = parts.positive(a, b) - ratio * parts.negative(a, b);
    }
  }

  const std::vector<Point> support = x.support();
  const ConstraintGraph g = build_constraint_graph(domain, support, metric);

  // Successive shortest paths on the uncapacitated transshipment problem.
  // Potentials keep every residual arc at nonnegative reduced cost.
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double mass_tol = 1e-15 * std::max(1.0, pos_total);
  std::vector<double> flow(g.arcs.size(), 0.0);
  std::vector<double> pi(static_cast<std::size_t>(nodes), 0.0);
  std::vector<double> dist(static_cast<std::size_t>(nodes));
  std::vector<int> via(static_cast<std::size_t>(nodes));
  std::vector<char> settled(static_cast<std::size_t>(nodes));
  // via[v] encodes the arc used to reach v: e >= 0 forward, ~e backward.
  constexpr int kNone = std::numeric_limits<int>::min();
  using Item = std::pair<double, int>;

  for (;;) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(via.begin(), via.end(), kNone);
    std::fill(settled.begin(), settled.end(), 0);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    bool any_source = false;
    for (int u = 0; u < nodes; ++u) {
      if (excess[u] > mass_tol) {
        dist[u] = 0.0;
        heap.push({0.0, u});
        any_source = true;
      }
    }
    if (!any_source) {
      break;
    }

    int sink = -1;
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (settled[u]) {
        continue;
      }
      settled[u] = 1;
      if (excess[u] < -mass_tol) {
        sink = u;
        break;
      }
      for (int k = g.out_start[u]; k < g.out_start[u + 1]; ++k) {
        const int e = g.out_list[k];
        const int v = g.arcs[e].to;
        const double rc = std::max(0.0, g.arcs[e].cost + pi[u] - pi[v]);
        if (d + rc < dist[v]) {
          dist[v] = d + rc;
          via[v] = e;
          heap.push({dist[v], v});
        }
      }
      for (int k = g.in_start[u]; k < g.in_start[u + 1]; ++k) {
        const int e = g.in_list[k];
        if (flow[e] <= 0.0) {
          continue;
        }
        const int v = g.arcs[e].from;
        const double rc = std::max(0.0, -g.arcs[e].cost + pi[u] - pi[v]);
        if (d + rc < dist[v]) {
          dist[v] = d + rc;
          via[v] = ~e;
          heap.push({dist[v], v});
        }
      }
    }
    if (sink < 0) {
      // Only rounding-level supply is left once every deficit is filled.
      double left = 0.0;
      for (double e : excess) {
        left += std::max(0.0, e);
      }
      if (left <= 1e-12 * std::max(1.0, pos_total)) {
        break;
      }
      throw SolverError("dual LP: no augmenting path although excess remains");
    }

    const double reach = dist[sink];
    for (int u = 0; u < nodes; ++u) {
      pi[u] += std::min(dist[u], reach);
    }

    double delta = -excess[sink];
    int source = sink;
    while (via[source] != kNone) {
      const int e = via[source];
      if (e >= 0) {
        source = g.arcs[e].from;
      } else {
        delta = std::min(delta, flow[~e]);
        source = g.arcs[~e].to;
      }
    }
    delta = std::min(delta, excess[source]);

    for (int v = sink; v != source;) {
      const int e = via[v];
      if (e >= 0) {
        flow[e] += delta;
        v = g.arcs[e].from;
      } else {
        flow[~e] -= delta;
        v = g.arcs[~e].to;
      }
    }
    excess[source] -= delta;
    excess[sink] += delta;
  }

  // Network-dual potentials give f = -pi; pin the base point.
  Field& f = result.witness.values;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      f(a, b) = -pi[static_cast<std::size_t>(a * n + b)];
    }
  }
  const double base = f(0, 0);
  f.array() -= base;
  result.value = (f.array() * x.mass().array()).sum();

  double violation = 0.0;
  for (const auto& e : g.arcs) {
    const double df = f(e.from / n, e.from % n) - f(e.to / n, e.to % n);
    violation = std::max(violation, df - e.cost);
  }
  if (violation > 1e-9) {
    throw SolverError("dual LP witness violates the Lipschitz constraints by " + std::to_string(violation));
  }
  return result;
}

} // namespace l1emd
