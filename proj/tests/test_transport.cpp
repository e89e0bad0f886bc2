#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "l1emd/errors.hpp"
#include "l1emd/random.hpp"
#include "l1emd/transport.hpp"

using namespace l1emd;

namespace {

std::vector<Point> distinct_points(Rng& rng, int n, int k) {
  std::vector<int> cells(static_cast<std::size_t>(n * n));
  std::iota(cells.begin(), cells.end(), 0);
  std::vector<Point> out;
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n * n - i)));
    std::swap(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(j)]);
    out.push_back({cells[static_cast<std::size_t>(i)] / n, cells[static_cast<std::size_t>(i)] % n});
  }
  return out;
}

SignedMeasure random_signed(std::uint64_t seed, const DomainSpec& d) {
  Rng rng(seed);
  Field f(d.n, d.n);
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    f.data()[i] = rng.normal();
  }
  f.array() -= f.mean();
  return SignedMeasure(d, f);
}

// On a single grid row W1 is the L1 distance between cumulative distributions.
double line_oracle(const Field& x) {
  double running = 0.0;
  double total = 0.0;
  for (Eigen::Index b = 0; b + 1 < x.cols(); ++b) {
    running += x(0, b);
    total += std::abs(running);
  }
  return total;
}

} // namespace

TEST_CASE("ground metric values") {
  const GroundMetric grid(DomainSpec(8, Topology::Grid));
  const GroundMetric torus(DomainSpec(8, Topology::Torus));
  CHECK(grid({0, 0}, {3, 4}) == 5.0);
  CHECK(torus({0, 0}, {3, 4}) == 5.0);
  CHECK(grid({0, 0}, {7, 7}) == doctest::Approx(7.0 * std::sqrt(2.0)));
  CHECK(torus({0, 0}, {7, 7}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(torus({0, 1}, {0, 6}) == 3.0);
  CHECK(grid.diameter() == doctest::Approx(7.0 * std::sqrt(2.0)));
  CHECK(torus.diameter() == doctest::Approx(4.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(grid({0, 0}, {8, 0}), InvalidArgument);
}

TEST_CASE("ground metric satisfies the metric axioms") {
  for (auto topo : {Topology::Grid, Topology::Torus}) {
    const int n = 5;
    const GroundMetric d(DomainSpec(n, topo));
    std::vector<Point> pts;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        pts.push_back({a, b});
      }
    }
    for (Point p : pts) {
      CHECK(d(p, p) == 0.0);
      for (Point q : pts) {
        CHECK(d(p, q) == d(q, p));
        if (!(p == q)) {
          CHECK(d(p, q) >= 1.0);
        }
        for (Point r : pts) {
          CHECK(d(p, r) <= d(p, q) + d(q, r) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("emd of diracs is their distance") {
  const DomainSpec d(8, Topology::Grid);
  const GroundMetric metric(d);
  CHECK(emd(dirac(d, {0, 0}), dirac(d, {3, 4}), metric).cost == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(emd(dirac(d, {2, 2}), dirac(d, {2, 2}), metric).cost == 0.0);
}

TEST_CASE("split mass to a midpoint") {
  const DomainSpec d(4, Topology::Grid);
  const auto mu = uniform_on_set(d, {{0, 0}, {0, 2}});
  const auto nu = dirac(d, {0, 1});
  const auto r = emd(mu, nu, GroundMetric(d));
  CHECK(r.cost == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.plan.entries.size() == 2);
}

TEST_CASE("transport matches the one-dimensional closed form") {
  const DomainSpec d(12, Topology::Grid);
  const GroundMetric metric(d);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    Field f = Field::Zero(12, 12);
    for (int b = 0; b < 12; ++b) {
      f(0, b) = rng.normal();
    }
    f.array() -= f.sum() / 12.0;
    f.block(1, 0, 11, 12).setZero();
    const SignedMeasure x(d, f);
    CHECK(emd_norm(x, metric) == doctest::Approx(line_oracle(f)).epsilon(1e-10));
  }
}

TEST_CASE("plans satisfy their marginals") {
  for (auto topo : {Topology::Grid, Topology::Torus}) {
    const DomainSpec d(10, topo);
    const GroundMetric metric(d);
    const auto mu = random_measure(1, d, MeasureKind::dense());
    const auto nu = random_measure(2, d, MeasureKind::sparse(7));
    const auto r = emd(mu, nu, metric);
    const PlanReport rep = verify_plan(r.plan, mu.measure(), nu.measure(), metric);
    CHECK(rep.feasible);
    CHECK(rep.max_marginal_violation <= 1e-12);
    CHECK(rep.cost_recomputed == doctest::Approx(r.cost).epsilon(1e-12));
    // A tree solution has at most |supp mu| + |supp nu| - 1 arcs.
    CHECK(r.plan.entries.size() <= 100 + 7 - 1);
  }
}

TEST_CASE("verify_plan flags infeasible plans") {
  const DomainSpec d(4, Topology::Grid);
  const GroundMetric metric(d);
  TransportPlan plan;
  plan.entries.push_back({{0, 0}, {1, 1}, 0.5});
  const auto rep = verify_plan(plan, dirac(d, {0, 0}).measure(), dirac(d, {1, 1}).measure(), metric);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.max_marginal_violation == doctest::Approx(0.5));
}

TEST_CASE("emd_norm is a norm on zero-mass measures") {
  const DomainSpec d(6, Topology::Torus);
  const GroundMetric metric(d);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SignedMeasure x = random_signed(2 * seed, d);
    const SignedMeasure y = random_signed(2 * seed + 1, d);
    const double nx = emd_norm(x, metric);
    CHECK(nx > 0.0);
    CHECK(emd_norm(-x, metric) == doctest::Approx(nx).epsilon(1e-12));
    CHECK(emd_norm(2.5 * x, metric) == doctest::Approx(2.5 * nx).epsilon(1e-12));
    CHECK(emd_norm(x + y, metric) <= nx + emd_norm(y, metric) + 1e-9);
    // Distinct cells are at distance >= 1, so every positive atom moves at least its mass.
    CHECK(linf_norm(x) <= nx + 1e-12);
    CHECK(jordan_decompose(x).positive.total_mass() <= nx + 1e-12);
  }
  CHECK(emd_norm(SignedMeasure::zero(d), metric) == 0.0);
}

TEST_CASE("crude bound on the grid") {
  for (int n : {2, 5, 9}) {
    const DomainSpec d(n, Topology::Grid);
    const GroundMetric metric(d);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const SignedMeasure x = random_signed(100 + seed, d);
      const double bound = std::sqrt(2.0) * (n - 1) * jordan_decompose(x).positive.total_mass();
      CHECK(emd_norm(x, metric) <= bound + 1e-9);
    }
  }
}

TEST_CASE("transport input validation") {
  const DomainSpec d(4, Topology::Grid);
  const GroundMetric metric(d);
  const SignedMeasure a = dirac(d, {0, 0}).measure();
  CHECK_THROWS_AS(transport(a, 2.0 * a, metric), InvalidArgument);
  CHECK_THROWS_AS(transport(-1.0 * a, -1.0 * a, metric), InvalidArgument);
  CHECK_THROWS_AS(transport(a, a, GroundMetric(DomainSpec(4, Topology::Torus))), InvalidArgument);
  CHECK_THROWS_AS(emd_norm(a, metric), InvalidArgument);
  // Imbalance within 1e-6 relative is renormalized.
  CHECK(transport(a, (1.0 + 1e-8) * dirac(d, {0, 1}).measure(), metric).cost == doctest::Approx(1.0));
}

TEST_CASE("matching agrees with brute force") {
  const GroundMetric metric(DomainSpec(16, Topology::Grid));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const int k = 1 + static_cast<int>(seed % 8);
    const auto A = distinct_points(rng, 16, k);
    const auto B = distinct_points(rng, 16, k);
    const MatchingResult m = min_weight_matching(A, B, metric);
    CHECK(m.cost == doctest::Approx(brute_force_matching(A, B, metric)).epsilon(1e-12));
    REQUIRE(m.assignment.size() == static_cast<std::size_t>(k));
    double recomputed = 0.0;
    std::vector<int> seen(m.assignment);
    std::sort(seen.begin(), seen.end());
    for (int i = 0; i < k; ++i) {
      CHECK(seen[static_cast<std::size_t>(i)] == i);
      recomputed += metric(A[static_cast<std::size_t>(i)], B[static_cast<std::size_t>(m.assignment[i])]);
    }
    CHECK(recomputed == doctest::Approx(m.cost).epsilon(1e-12));
  }
}

TEST_CASE("uniform sets: emd is matching cost over k") {
  const DomainSpec d(8, Topology::Grid);
  const GroundMetric metric(d);
  Rng rng(1);
  const auto A = distinct_points(rng, 8, 4);
  const auto B = distinct_points(rng, 8, 4);
  const double tau = emd(uniform_on_set(d, A), uniform_on_set(d, B), metric).cost;
  CHECK(tau == doctest::Approx(brute_force_matching(A, B, metric) / 4).epsilon(1e-12));
}

TEST_CASE("matching edge cases") {
  const GroundMetric metric(DomainSpec(4, Topology::Grid));
  const std::vector<Point> none;
  const std::vector<Point> one = {{1, 1}};
  CHECK(min_weight_matching(none, none, metric).cost == 0.0);
  CHECK(brute_force_matching(none, none, metric) == 0.0);
  CHECK_THROWS_AS(min_weight_matching(one, none, metric), InvalidArgument);
  CHECK_THROWS_AS(brute_force_matching(one, none, metric), InvalidArgument);
  std::vector<Point> ten(10, Point{0, 0});
  CHECK_THROWS_AS(brute_force_matching(ten, ten, metric), InvalidArgument);
}

TEST_CASE("dual potential closes the duality gap") {
  for (auto topo : {Topology::Grid, Topology::Torus}) {
    for (int n : {2, 3, 6}) {
      const DomainSpec d(n, topo);
      const GroundMetric metric(d);
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SignedMeasure x = random_signed(500 + seed, d);
        const DualResult dual = dual_potential(x, metric);
        const double tau = emd_norm(x, metric);
        CHECK(std::abs(dual.value - tau) <= 1e-9 * (1.0 + tau));
        CHECK(dual.witness.values(0, 0) == 0.0);
        // The witness is 1-Lipschitz wherever the measure lives.
        CHECK(lipschitz_violation(dual.witness, x.support(), metric) <= 1e-9);
      }
    }
  }
}

TEST_CASE("dual potential of a sparse measure") {
  const DomainSpec d(8, Topology::Grid);
  const GroundMetric metric(d);
  const auto mu = random_measure(5, d, MeasureKind::sparse(5));
  const auto nu = random_measure(6, d, MeasureKind::sparse(5));
  const SignedMeasure x = difference(mu, nu);
  CHECK(dual_potential(x, metric).value == doctest::Approx(emd_norm(x, metric)).epsilon(1e-7));
}

TEST_CASE("dual potential validation") {
  const DomainSpec big(33, Topology::Grid);
  CHECK_THROWS_AS(dual_potential(SignedMeasure::zero(big), GroundMetric(big)), InvalidArgument);
  const DomainSpec d(4, Topology::Grid);
  CHECK_THROWS_AS(dual_potential(dirac(d, {0, 0}).measure(), GroundMetric(d)), InvalidArgument);
  CHECK(dual_potential(SignedMeasure::zero(d), GroundMetric(d)).value == 0.0);
}
