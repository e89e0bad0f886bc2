#include "l1emd/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "l1emd/errors.hpp"
#include "l1emd/io.hpp"
#include "l1emd/random.hpp"
#include "l1emd/transport.hpp"

namespace l1emd {

namespace {

// Calibration pairs come from a stream disjoint from the held-out pairs.
constexpr std::uint64_t kCalibrationStream = 0x6b61707061ULL;

MeasureKind pick_kind(const ExperimentConfig& cfg, Rng& rng) {
  const double r = rng.uniform();
  if (r < cfg.mix.dirac_pair) {
    return MeasureKind::dirac_pair();
  }
  if (r < cfg.mix.dirac_pair + cfg.mix.sparse) {
    return MeasureKind::sparse(std::min(cfg.mix.sparse_k, cfg.n * cfg.n));
  }
  return MeasureKind::dense();
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

void ExperimentConfig::validate() const {
  if (n < 2) {
    throw InvalidArgument("experiment needs n >= 2");
  }
  if (pair_count < 1) {
    throw InvalidArgument("pair_count must be >= 1");
  }
  if (calibration_samples < 0) {
    throw InvalidArgument("calibration_samples must be >= 0");
  }
  const double weights[] = {mix.dirac_pair, mix.sparse, mix.dense};
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw InvalidArgument("generator weights must be nonnegative");
    }
  }
  if (std::abs(mix.dirac_pair + mix.sparse + mix.dense - 1.0) > 1e-9) {
    throw InvalidArgument("generator weights must sum to 1");
  }
  if (mix.sparse > 0.0 && mix.sparse_k < 1) {
    throw InvalidArgument("sparse_k must be >= 1");
  }
}

std::pair<ProbabilityMeasure, ProbabilityMeasure> sample_pair(const ExperimentConfig& cfg,
                                                              std::uint64_t stream_seed) {
  Rng rng(stream_seed);
  const MeasureKind kind = pick_kind(cfg, rng);
  return random_pair(derive_seed(stream_seed, 1), cfg.domain(), kind);
}

ProbabilityMeasure sample_measure(const ExperimentConfig& cfg, std::uint64_t stream_seed) {
  Rng rng(stream_seed);
  const MeasureKind kind = pick_kind(cfg, rng);
  if (kind.family == MeasureKind::Family::DiracPair) {
    return random_dirac(derive_seed(stream_seed, 1), cfg.domain());
  }
  return random_measure(derive_seed(stream_seed, 1), cfg.domain(), kind);
}

EmbeddedVector embed_for(const ExperimentConfig& cfg, const ProbabilityMeasure& mu) {
  if (mu.domain().is_torus()) {
    return embed(mu, cfg.variant);
  }
  return embed(grid_to_torus(mu), cfg.variant);
}

PairEvaluation evaluate_pair(const ExperimentConfig& cfg, const ProbabilityMeasure& mu,
                             const ProbabilityMeasure& nu) {
  const SignedMeasure diff = difference(mu, nu);
  PairEvaluation out;
  out.tau = emd_norm(diff, GroundMetric(diff.domain()));
  // The operators are linear, so the distance of the images is the norm of the difference's image.
  out.embedded = embedded_norm(diff.domain().is_torus() ? diff : grid_to_torus(diff), cfg.variant);
  return out;
}

double calibrate(const ExperimentConfig& cfg, int samples, std::uint64_t seed) {
  cfg.validate();
  if (samples < 1) {
    throw InvalidArgument("calibrate needs at least one sample");
  }
  double kappa = 0.0;
  bool any = false;
  for (int i = 0; i < samples; ++i) {
    const auto [mu, nu] = sample_pair(cfg, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const PairEvaluation e = evaluate_pair(cfg, mu, nu);
    if (e.tau <= kMinTau) {
      continue;
    }
    any = true;
    kappa = std::max(kappa, e.tau / e.embedded);
  }
  if (!any) {
    throw InvalidArgument("calibration sample is degenerate: every pair has tau = 0");
  }
  return kappa;
}

double calibrate(int n, std::uint64_t seed, int samples) {
  ExperimentConfig cfg;
  cfg.n = n;
  return calibrate(cfg, samples, seed);
}

DistortionReport run_distortion_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  DistortionReport r;
  r.n = cfg.n;
  r.variant = cfg.variant;
  r.metric = cfg.metric;
  r.seed = cfg.seed;
  r.pair_count = cfg.pair_count;
  const int calibration_samples = cfg.calibration_samples > 0 ? cfg.calibration_samples : cfg.pair_count;
  r.kappa = calibrate(cfg, calibration_samples, mix_seed(cfg.seed ^ kCalibrationStream));

  for (int i = 0; i < cfg.pair_count; ++i) {
    const auto [mu, nu] = sample_pair(cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    const PairEvaluation e = evaluate_pair(cfg, mu, nu);
    if (e.tau <= kMinTau) {
      continue;
    }
    ++r.evaluated_pairs;
    r.max_expansion = std::max(r.max_expansion, e.embedded / e.tau);
    r.max_contraction = std::max(r.max_contraction, e.tau / e.embedded);
    if (e.tau > (1.0 + kHeldoutSlack) * r.kappa * e.embedded) {
      ++r.heldout_violations;
    }
  }
  if (r.evaluated_pairs == 0) {
    throw InvalidArgument("every sampled pair has tau = 0; distortion is undefined");
  }
  r.distortion = r.max_expansion * r.max_contraction;
  if (cfg.record_time) {
    r.wall_ms = elapsed_ms(start);
  }
  return r;
}

std::vector<DistortionReport> run_scaling_sweep(std::span<const int> ns, const ExperimentConfig& tmpl) {
  std::vector<DistortionReport> rows;
  for (int n : ns) {
    if (n < 2) {
      throw InvalidArgument("sweep sizes must be >= 2");
    }
    ExperimentConfig cfg = tmpl;
    cfg.n = n;
    rows.push_back(run_distortion_experiment(cfg));
  }
  return rows;
}

std::string sweep_csv(const std::vector<DistortionReport>& rows) {
  std::ostringstream out;
  out << "n,variant,pairs,seed,kappa,max_expansion,max_contraction,distortion,wall_ms\n";
  for (const auto& r : rows) {
    out << r.n << ',' << variant_name(r.variant) << ',' << r.pair_count << ',' << r.seed << ','
        << format_double(r.kappa) << ',' << format_double(r.max_expansion) << ','
        << format_double(r.max_contraction) << ',' << format_double(r.distortion) << ','
        << format_double(r.wall_ms) << '\n';
  }
  return out.str();
}

NnReport evaluate_nn(const ExperimentConfig& base, std::span<const ProbabilityMeasure> data,
                     std::span<const ProbabilityMeasure> queries) {
  if (data.size() < 2) {
    throw InvalidArgument("nn experiment needs dataset_size >= 2");
  }
  if (queries.empty()) {
    throw InvalidArgument("nn experiment needs query_count >= 1");
  }
  const GroundMetric metric(data.front().domain());
  std::vector<EmbeddedVector> images;
  for (const auto& mu : data) {
    images.push_back(embed_for(base, mu));
  }

  NnReport r;
  r.n = base.n;
  r.variant = base.variant;
  r.metric = base.metric;
  r.seed = base.seed;
  r.dataset_size = static_cast<int>(data.size());
  r.query_count = static_cast<int>(queries.size());

  int hits = 0;
  double rank_sum = 0.0;
  std::vector<double> tau(data.size());
  std::vector<double> emb(data.size());
  for (const auto& query : queries) {
    const EmbeddedVector qimage = embed_for(base, query);
    for (std::size_t i = 0; i < data.size(); ++i) {
      tau[i] = emd_norm(difference(query, data[i]), metric);
      emb[i] = embedded_distance(qimage, images[i]);
    }
    // Ties go to the lowest index.
    const auto true_nn = static_cast<std::size_t>(std::min_element(tau.begin(), tau.end()) - tau.begin());
    const auto emb_nn = static_cast<std::size_t>(std::min_element(emb.begin(), emb.end()) - emb.begin());
    const auto tied = std::count_if(tau.begin(), tau.end(), [&](double t) { return t <= tau[true_nn] + kMinTau; });
    if (tied > 1) {
      r.degenerate = true;
    }
    hits += true_nn == emb_nn ? 1 : 0;

    std::size_t rank = 1;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (emb[i] < emb[true_nn] || (emb[i] == emb[true_nn] && i < true_nn)) {
        ++rank;
      }
    }
    rank_sum += static_cast<double>(rank);
  }
  r.recall_at_1 = static_cast<double>(hits) / static_cast<double>(queries.size());
  r.mean_rank_of_true_nn = rank_sum / static_cast<double>(queries.size());
  return r;
}

NnReport run_nn_experiment(const NnConfig& cfg) {
  cfg.base.validate();
  if (cfg.dataset_size < 2) {
    throw InvalidArgument("nn experiment needs dataset_size >= 2");
  }
  if (cfg.query_count < 1) {
    throw InvalidArgument("nn experiment needs query_count >= 1");
  }
  const ExperimentConfig& base = cfg.base;
  std::vector<ProbabilityMeasure> data;
  std::vector<ProbabilityMeasure> queries;
  for (int i = 0; i < cfg.dataset_size; ++i) {
    data.push_back(sample_measure(base, derive_seed(base.seed, static_cast<std::uint64_t>(i))));
  }
  for (int q = 0; q < cfg.query_count; ++q) {
    queries.push_back(
        sample_measure(base, derive_seed(base.seed, static_cast<std::uint64_t>(cfg.dataset_size + q))));
  }
  return evaluate_nn(base, data, queries);
}

std::string variant_name(Variant v) { return v == Variant::AB ? "ab" : "s"; }

Variant parse_variant(const std::string& s) {
  if (s == "ab") {
    return Variant::AB;
  }
  if (s == "s") {
    return Variant::S;
  }
  throw InvalidArgument("variant must be 'ab' or 's', got '" + s + "'");
}

std::string topology_name(Topology t) { return t == Topology::Grid ? "grid" : "torus"; }

Topology parse_topology(const std::string& s) {
  if (s == "grid") {
    return Topology::Grid;
  }
  if (s == "torus") {
    return Topology::Torus;
  }
  throw InvalidArgument("metric must be 'grid' or 'torus', got '" + s + "'");
}

nlohmann::json to_json(const DistortionReport& r) {
  return {
      {"n", r.n},
      {"variant", variant_name(r.variant)},
      {"metric", topology_name(r.metric)},
      {"seed", r.seed},
      {"kappa", r.kappa},
      {"max_expansion", r.max_expansion},
      {"max_contraction", r.max_contraction},
      {"distortion", r.distortion},
      {"pair_count", r.pair_count},
      {"evaluated_pairs", r.evaluated_pairs},
      {"heldout_violations", r.heldout_violations},
      {"wall_time", r.wall_ms},
  };
}

nlohmann::json to_json(const NnReport& r) {
  return {
      {"n", r.n},
      {"variant", variant_name(r.variant)},
      {"metric", topology_name(r.metric)},
      {"seed", r.seed},
      {"dataset_size", r.dataset_size},
      {"query_count", r.query_count},
      {"recall_at_1", r.recall_at_1},
      {"mean_rank_of_true_nn", r.mean_rank_of_true_nn},
      {"degenerate", r.degenerate},
  };
}

} // namespace l1emd
