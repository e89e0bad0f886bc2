#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "l1emd/embedding.hpp"
#include "l1emd/measures.hpp"

namespace l1emd {

/// Probabilities of each generator family for sampled measures and pairs.
struct GeneratorMix {
  double dirac_pair = 0.4;
  double sparse = 0.4;
  double dense = 0.2;
  int sparse_k = 8;
};

struct ExperimentConfig {
  int n = 8;
  int pair_count = 100;
  std::uint64_t seed = 0;
  GeneratorMix mix;
  /// Grid measures are embedded through the side-2n torus; torus measures directly.
  Topology metric = Topology::Grid;
  Variant variant = Variant::AB;
  /// Pairs used to fit kappa; 0 means pair_count.
  int calibration_samples = 0;
  /// Wall time is left at 0 unless asked for, so reports stay reproducible.
  bool record_time = false;

  /// Throws InvalidArgument on a bad config.
  void validate() const;
  DomainSpec domain() const { return DomainSpec(n, metric); }
};

struct DistortionReport {
  int n = 0;
  Variant variant = Variant::AB;
  Topology metric = Topology::Grid;
  std::uint64_t seed = 0;
  double kappa = 0.0;
  /// max over pairs of embdist / tau
  double max_expansion = 0.0;
  /// max over pairs of tau / embdist
  double max_contraction = 0.0;
  double distortion = 0.0;
  int pair_count = 0;
  /// Pairs with tau > 1e-12 that entered the ratios.
  int evaluated_pairs = 0;
  /// Held-out pairs with tau > 1.01 * kappa * embdist.
  int heldout_violations = 0;
  double wall_ms = 0.0;
};

struct PairEvaluation {
  double tau = 0.0;
  double embedded = 0.0;
};

struct NnConfig {
  ExperimentConfig base;
  int dataset_size = 64;
  int query_count = 16;
};

struct NnReport {
  int n = 0;
  Variant variant = Variant::AB;
  Topology metric = Topology::Grid;
  std::uint64_t seed = 0;
  int dataset_size = 0;
  int query_count = 0;
  double recall_at_1 = 0.0;
  double mean_rank_of_true_nn = 0.0;
  /// Some query had several exact-EMD nearest neighbours.
  bool degenerate = false;
};

/// Ratios below this tau are undefined and skipped.
inline constexpr double kMinTau = 1e-12;
inline constexpr double kHeldoutSlack = 0.01;

/// The pair drawn for one stream seed: family picked by the mix, then drawn.
std::pair<ProbabilityMeasure, ProbabilityMeasure> sample_pair(const ExperimentConfig& cfg, std::uint64_t stream_seed);

/// A single measure; the DiracPair family contributes a single Dirac.
ProbabilityMeasure sample_measure(const ExperimentConfig& cfg, std::uint64_t stream_seed);

/// Exact tau under the config's metric and L1 distance of the embedded images.
PairEvaluation evaluate_pair(const ExperimentConfig& cfg, const ProbabilityMeasure& mu, const ProbabilityMeasure& nu);

/// Image of a measure under the config's embedding (through the 2n torus for grids).
EmbeddedVector embed_for(const ExperimentConfig& cfg, const ProbabilityMeasure& mu);

/// kappa = max tau / embdist over `samples` pairs drawn from streams derive_seed(seed, i).
/// Throws InvalidArgument when every pair has tau = 0.
double calibrate(const ExperimentConfig& cfg, int samples, std::uint64_t seed);
double calibrate(int n, std::uint64_t seed, int samples);

DistortionReport run_distortion_experiment(const ExperimentConfig& cfg);

/// One report per n, each with the template's seed.
std::vector<DistortionReport> run_scaling_sweep(std::span<const int> ns, const ExperimentConfig& tmpl);

/// Columns n,variant,pairs,seed,kappa,max_expansion,max_contraction,distortion,wall_ms.
std::string sweep_csv(const std::vector<DistortionReport>& rows);

NnReport run_nn_experiment(const NnConfig& cfg);

/// Recall of exact-EMD nearest neighbours by embedded-L1 nearest neighbours on
/// explicit data. Ties in either metric go to the lowest dataset index.
NnReport evaluate_nn(const ExperimentConfig& base, std::span<const ProbabilityMeasure> data,
                     std::span<const ProbabilityMeasure> queries);

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);
std::string topology_name(Topology t);
Topology parse_topology(const std::string& s);

nlohmann::json to_json(const DistortionReport& r);
nlohmann::json to_json(const NnReport& r);

} // namespace l1emd
