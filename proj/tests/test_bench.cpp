#include <doctest.h>

#include <cmath>

#include "l1emd/bench.hpp"
#include "l1emd/errors.hpp"
#include "l1emd/random.hpp"
#include "l1emd/transport.hpp"

using namespace l1emd;

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.n = 1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.n = 8;
  cfg.pair_count = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.pair_count = 10;
  cfg.mix.dense = 0.5;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.mix = {1.2, -0.2, 0.0, 8};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  CHECK_THROWS_AS(run_distortion_experiment(cfg), InvalidArgument);
}

TEST_CASE("name parsing") {
  CHECK(parse_variant("ab") == Variant::AB);
  CHECK(parse_variant("s") == Variant::S);
  CHECK(variant_name(Variant::S) == "s");
  CHECK(parse_topology("torus") == Topology::Torus);
  CHECK(topology_name(Topology::Grid) == "grid");
  CHECK_THROWS_AS(parse_variant("AB"), InvalidArgument);
  CHECK_THROWS_AS(parse_topology("plane"), InvalidArgument);
}

TEST_CASE("calibration fixture") {
  // Pins determinism of the sampler and solvers, not a ground truth.
  CHECK(calibrate(8, 42, 200) == doctest::Approx(0.61339976296674081).epsilon(1e-12));
  CHECK(calibrate(8, 42, 200) == calibrate(8, 42, 200));
  CHECK_THROWS_AS(calibrate(8, 42, 0), InvalidArgument);
}

TEST_CASE("calibrated scale bounds every sampled pair") {
  ExperimentConfig cfg;
  cfg.n = 6;
  const double kappa = calibrate(cfg, 50, 3);
  for (int i = 0; i < 50; ++i) {
    const auto [mu, nu] = sample_pair(cfg, derive_seed(3, static_cast<std::uint64_t>(i)));
    const PairEvaluation e = evaluate_pair(cfg, mu, nu);
    CHECK(e.tau <= kappa * e.embedded * (1.0 + 1e-12));
    CHECK(e.tau == doctest::Approx(emd(mu, nu, GroundMetric(cfg.domain())).cost).epsilon(1e-12));
  }
}

TEST_CASE("single dirac pair has unit distortion") {
  ExperimentConfig cfg;
  cfg.pair_count = 1;
  cfg.mix = {1.0, 0.0, 0.0, 8};
  const DistortionReport r = run_distortion_experiment(cfg);
  CHECK(r.evaluated_pairs == 1);
  CHECK(r.distortion == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("both variants report distortion at least one") {
  ExperimentConfig cfg;
  cfg.n = 8;
  cfg.pair_count = 40;
  cfg.seed = 5;
  for (Variant v : {Variant::AB, Variant::S}) {
    cfg.variant = v;
    const DistortionReport r = run_distortion_experiment(cfg);
    CHECK(r.distortion >= 1.0);
    CHECK(r.kappa > 0.0);
    CHECK(r.wall_ms == 0.0);
  }
}

TEST_CASE("distortion at n = 16 stays within the n = 8 growth allowance") {
  ExperimentConfig cfg;
  cfg.pair_count = 500;
  cfg.seed = 7;
  cfg.n = 8;
  const double base = run_distortion_experiment(cfg).distortion / std::log(8.0);
  cfg.n = 16;
  const DistortionReport r = run_distortion_experiment(cfg);
  CHECK(r.distortion == doctest::Approx(3.1430664933873267).epsilon(1e-12));
  CHECK(r.distortion <= 4.0 * std::log(16.0) * base);
}

TEST_CASE("torus metric experiment") {
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.pair_count = 30;
  cfg.metric = Topology::Torus;
  const DistortionReport r = run_distortion_experiment(cfg);
  CHECK(r.distortion >= 1.0);
  CHECK(to_json(r)["metric"] == "torus");
}

TEST_CASE("sweep output is fixed-format") {
  ExperimentConfig cfg;
  cfg.pair_count = 10;
  const std::vector<int> ns = {4, 6};
  const auto rows = run_scaling_sweep(ns, cfg);
  REQUIRE(rows.size() == 2);
  const std::string csv = sweep_csv(rows);
  CHECK(csv.starts_with("n,variant,pairs,seed,kappa,max_expansion,max_contraction,distortion,wall_ms\n4,ab,10,0,"));
  CHECK(csv == sweep_csv(run_scaling_sweep(ns, cfg)));
  const std::vector<int> bad = {1};
  CHECK_THROWS_AS(run_scaling_sweep(bad, cfg), InvalidArgument);
}

TEST_CASE("nearest-neighbour fixture") {
  NnConfig cfg;
  cfg.base.n = 16;
  cfg.base.seed = 11;
  cfg.dataset_size = 64;
  cfg.query_count = 16;
  const NnReport r = run_nn_experiment(cfg);
  CHECK(r.recall_at_1 == doctest::Approx(0.6875));
  CHECK(r.mean_rank_of_true_nn == doctest::Approx(3.4375));
  CHECK(r.degenerate);
  CHECK(to_json(r).dump() == to_json(run_nn_experiment(cfg)).dump());
}

TEST_CASE("nearest neighbour on a hand-built set") {
  ExperimentConfig base;
  base.n = 8;
  const DomainSpec d = base.domain();
  const std::vector<ProbabilityMeasure> data = {dirac(d, {0, 0}), dirac(d, {7, 7}), dirac(d, {0, 7})};
  const std::vector<ProbabilityMeasure> queries = {dirac(d, {1, 1}), dirac(d, {6, 6})};
  const NnReport r = evaluate_nn(base, data, queries);
  CHECK(r.recall_at_1 == 1.0);
  CHECK(r.mean_rank_of_true_nn == 1.0);
  CHECK_FALSE(r.degenerate);
  CHECK_THROWS_AS(evaluate_nn(base, std::span(data).first(1), queries), InvalidArgument);
}
