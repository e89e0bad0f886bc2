#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "l1emd/transport.hpp"

namespace l1emd::detail {

struct BipartiteFlow {
  int source = 0;
  int target = 0;
  double mass = 0.0;
};

/// Primal network simplex for the uncapacitated transportation problem on the
/// complete bipartite graph sources x targets. Arc costs are looked up from the
/// ground metric by axis gap, so no per-arc storage is needed; only spanning
/// tree arcs can carry flow, and their flow is kept on the child node.
///
/// Supplies and demands must be positive and have equal totals up to rounding.
class TransportSimplex {
public:
  TransportSimplex(std::span<const Point> sources, std::span<const double> supply, std::span<const Point> targets,
                   std::span<const double> demand, const GroundMetric& metric);

  /// Runs to optimality. Throws SolverError if the tree becomes inconsistent.
  void run();

  double cost() const;
  std::vector<BipartiteFlow> flows() const;
  std::int64_t pivots() const { return pivots_; }

private:
  static constexpr signed char kUp = 1;
  static constexpr signed char kDown = -1;

  int source_of(std::int64_t e) const;
  int target_of(std::int64_t e) const;
  double arc_cost(std::int64_t e) const;
  double real_cost(int i, int j) const {
    return gap_[static_cast<std::size_t>(std::abs(sa_[i] - ta_[j]) * side_ + std::abs(sb_[i] - tb_[j]))];
  }

  bool find_entering_arc();
  void find_join_node();
  bool find_leaving_arc();
  void change_flow();
  void update_tree_structure();
  void update_potential();

  int m_ = 0;
  int k_ = 0;
  int node_num_ = 0;
  int root_ = 0;
  int side_ = 1;
  std::int64_t arc_num_ = 0;

  std::vector<int> sa_, sb_, ta_, tb_;
  std::vector<double> gap_;
  std::vector<char> art_up_;
  double art_cost_ = 1.0;
  double eps_ = 0.0;

  std::vector<int> parent_, thread_, rev_thread_, succ_num_, last_succ_, dirty_revs_;
  std::vector<std::int64_t> pred_;
  std::vector<signed char> pred_dir_;
  std::vector<double> pred_flow_, pi_;

  std::int64_t block_size_ = 10;
  std::int64_t next_arc_ = 0;
  std::int64_t in_arc_ = -1;
  int join_ = 0, u_in_ = 0, v_in_ = 0, u_out_ = 0, v_out_ = 0;
  double delta_ = 0.0;
  std::int64_t pivots_ = 0;
};

} // namespace l1emd::detail
