// Command-line front end: exact EMD, the L1 embedding, and the distortion harness.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "l1emd/bench.hpp"
#include "l1emd/embedding.hpp"
#include "l1emd/errors.hpp"
#include "l1emd/io.hpp"
#include "l1emd/transport.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw l1emd::InvalidArgument("cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw l1emd::InvalidArgument("failed writing '" + path + "'");
  }
}

std::vector<int> parse_sizes(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw l1emd::InvalidArgument("bad size '" + item + "' in --ns");
    }
  }
  if (out.empty()) {
    throw l1emd::InvalidArgument("--ns is empty");
  }
  return out;
}

struct ExperimentFlags {
  int n = 8;
  int pairs = 100;
  std::uint64_t seed = 0;
  std::string variant = "ab";
  std::string metric = "grid";
  int calibration_samples = 0;
  bool record_time = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--variant", variant, "Embedding: ab or s")->check(CLI::IsMember({"ab", "s"}));
    cmd->add_option("--metric", metric, "Ground metric: grid or torus")->check(CLI::IsMember({"grid", "torus"}));
  }

  l1emd::ExperimentConfig config() const {
    l1emd::ExperimentConfig cfg;
    cfg.n = n;
    cfg.pair_count = pairs;
    cfg.seed = seed;
    cfg.variant = l1emd::parse_variant(variant);
    cfg.metric = l1emd::parse_topology(metric);
    cfg.calibration_samples = calibration_samples;
    cfg.record_time = record_time;
    return cfg;
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact planar earthmover distance and its Fourier-multiplier L1 embedding"};
  app.require_subcommand(1);

  // emd
  std::string emd_a, emd_b, emd_plan;
  std::optional<std::string> emd_metric;
  auto* emd_cmd = app.add_subcommand("emd", "Exact transportation cost between two measure files");
  emd_cmd->add_option("measure_a", emd_a, "First measure file")->required();
  emd_cmd->add_option("measure_b", emd_b, "Second measure file")->required();
  emd_cmd->add_option("--metric", emd_metric, "Override the files' topology: grid or torus")
      ->check(CLI::IsMember({"grid", "torus"}));
  emd_cmd->add_option("--plan", emd_plan, "Write the optimal plan here");

  // embed
  std::string embed_in, embed_out, embed_variant = "ab";
  bool embed_to_torus = false;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a probability measure into L1");
  embed_cmd->add_option("measure", embed_in, "Measure file (torus, or grid with --to-torus)")->required();
  embed_cmd->add_option("--out", embed_out, "Vector file")->required();
  embed_cmd->add_option("--variant", embed_variant, "ab or s")->check(CLI::IsMember({"ab", "s"}));
  embed_cmd->add_flag("--to-torus", embed_to_torus, "Place a grid measure on the 2n torus first");

  // distortion
  ExperimentFlags dist_flags;
  std::string dist_out;
  auto* dist_cmd = app.add_subcommand("distortion", "Measure empirical distortion for one n");
  dist_cmd->add_option("--n", dist_flags.n, "Side length")->required();
  dist_cmd->add_option("--pairs", dist_flags.pairs, "Number of held-out pairs")->required();
  dist_cmd->add_option("--calibration-samples", dist_flags.calibration_samples, "Calibration pairs (default: --pairs)");
  dist_cmd->add_flag("--record-time", dist_flags.record_time, "Record wall time (output no longer reproducible)");
  dist_cmd->add_option("--out", dist_out, "JSON report")->required();
  dist_flags.attach(dist_cmd);

  // sweep
  ExperimentFlags sweep_flags;
  std::string sweep_ns = "8,16,32,64", sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Distortion across several n, as CSV");
  sweep_cmd->add_option("--ns", sweep_ns, "Comma-separated side lengths");
  sweep_cmd->add_option("--pairs", sweep_flags.pairs, "Pairs per n");
  sweep_cmd->add_option("--calibration-samples", sweep_flags.calibration_samples, "Calibration pairs per n");
  sweep_cmd->add_flag("--record-time", sweep_flags.record_time, "Record wall time (output no longer reproducible)");
  sweep_cmd->add_option("--out", sweep_out, "CSV output")->required();
  sweep_flags.attach(sweep_cmd);

  // nn
  ExperimentFlags nn_flags;
  int nn_dataset = 64, nn_queries = 16;
  std::string nn_out;
  auto* nn_cmd = app.add_subcommand("nn", "Nearest-neighbour recall of the embedding against exact EMD");
  nn_cmd->add_option("--n", nn_flags.n, "Side length")->required();
  nn_cmd->add_option("--dataset", nn_dataset, "Dataset size")->required();
  nn_cmd->add_option("--queries", nn_queries, "Number of queries")->required();
  nn_cmd->add_option("--out", nn_out, "JSON report")->required();
  nn_flags.attach(nn_cmd);

  // calibrate
  ExperimentFlags cal_flags;
  int cal_samples = 200;
  std::string cal_out;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit the scale kappa = max tau / embedded distance");
  cal_cmd->add_option("--n", cal_flags.n, "Side length")->required();
  cal_cmd->add_option("--samples", cal_samples, "Number of pairs")->required();
  cal_cmd->add_option("--out", cal_out, "Also write the JSON result here");
  cal_flags.attach(cal_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*emd_cmd) {
      auto a = l1emd::read_measure_file(emd_a);
      auto b = l1emd::read_measure_file(emd_b);
      if (a.n() != b.n()) {
        throw l1emd::InvalidArgument("measures have different side lengths");
      }
      const auto topology = emd_metric ? l1emd::parse_topology(*emd_metric) : a.domain().topology;
      const l1emd::DomainSpec domain(a.n(), topology);
      a = l1emd::SignedMeasure(domain, a.mass());
      b = l1emd::SignedMeasure(domain, b.mass());
      const auto result = l1emd::transport(a, b, l1emd::GroundMetric(domain));
      if (!emd_plan.empty()) {
        std::ostringstream plan;
        l1emd::write_plan(plan, result.plan);
        write_text(emd_plan, plan.str());
      }
      std::cout << "cost " << l1emd::format_double(result.cost) << '\n';
    } else if (*embed_cmd) {
      auto x = l1emd::read_measure_file(embed_in);
      if (!x.domain().is_torus()) {
        if (!embed_to_torus) {
          throw l1emd::InvalidArgument("embed needs a torus measure; pass --to-torus for grid input");
        }
        x = l1emd::grid_to_torus(x);
      }
      const auto image = l1emd::embed(l1emd::ProbabilityMeasure(x), l1emd::parse_variant(embed_variant));
      std::ostringstream out;
      l1emd::write_embedded(out, image);
      write_text(embed_out, out.str());
    } else if (*dist_cmd) {
      const auto report = l1emd::run_distortion_experiment(dist_flags.config());
      write_text(dist_out, l1emd::to_json(report).dump(2) + "\n");
    } else if (*sweep_cmd) {
      const auto ns = parse_sizes(sweep_ns);
      const auto rows = l1emd::run_scaling_sweep(ns, sweep_flags.config());
      write_text(sweep_out, l1emd::sweep_csv(rows));
    } else if (*nn_cmd) {
      l1emd::NnConfig cfg;
      cfg.base = nn_flags.config();
      cfg.dataset_size = nn_dataset;
      cfg.query_count = nn_queries;
      const auto report = l1emd::run_nn_experiment(cfg);
      write_text(nn_out, l1emd::to_json(report).dump(2) + "\n");
    } else if (*cal_cmd) {
      const auto cfg = cal_flags.config();
      const double kappa = l1emd::calibrate(cfg, cal_samples, cfg.seed);
      const nlohmann::json j = {{"n", cfg.n},
                                {"samples", cal_samples},
                                {"seed", cfg.seed},
                                {"variant", l1emd::variant_name(cfg.variant)},
                                {"metric", l1emd::topology_name(cfg.metric)},
                                {"kappa", kappa}};
      const std::string text = j.dump(2) + "\n";
      std::cout << text;
      if (!cal_out.empty()) {
        write_text(cal_out, text);
      }
    }
  } catch (const l1emd::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const l1emd::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
