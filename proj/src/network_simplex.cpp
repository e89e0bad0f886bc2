#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l1emd/errors.hpp"

namespace l1emd::detail {

TransportSimplex::TransportSimplex(std::span<const Point> sources, std::span<const double> supply,
                                   std::span<const Point> targets, std::span<const double> demand,
                                   const GroundMetric& metric)
    : m_(static_cast<int>(sources.size())), k_(static_cast<int>(targets.size())), side_(metric.domain().n) {
  if (supply.size() != sources.size() || demand.size() != targets.size()) {
    throw InvalidArgument("supply/demand length does not match the point lists");
  }
  node_num_ = m_ + k_;
  root_ = node_num_;
  arc_num_ = static_cast<std::int64_t>(m_) * k_;

  for (const Point& p : sources) {
    sa_.push_back(p.a);
    sb_.push_back(p.b);
  }
  for (const Point& p : targets) {
    ta_.push_back(p.a);
    tb_.push_back(p.b);
  }

  gap_.resize(static_cast<std::size_t>(side_) * side_);
  double max_cost = 0.0;
  for (int da = 0; da < side_; ++da) {
    for (int db = 0; db < side_; ++db) {
      const double d = metric.axis_gap_distance(da, db);
      gap_[static_cast<std::size_t>(da * side_ + db)] = d;
      max_cost = std::max(max_cost, d);
    }
  }
  // Any unit routed source -> root -> target can be rerouted along the direct
  // arc for at most max_cost, so this price keeps artificial arcs empty at the optimum.
  art_cost_ = 2.0 * max_cost + 1.0;
  eps_ = 1e-12 * (1.0 + art_cost_);

  const auto nodes = static_cast<std::size_t>(node_num_) + 1;
  parent_.assign(nodes, 0);
  thread_.assign(nodes, 0);
  rev_thread_.assign(nodes, 0);
  succ_num_.assign(nodes, 0);
  last_succ_.assign(nodes, 0);
  pred_.assign(nodes, -1);
  pred_dir_.assign(nodes, kUp);
  pred_flow_.assign(nodes, 0.0);
  pi_.assign(nodes, 0.0);
  art_up_.assign(nodes, 1);

  parent_[root_] = -1;
  pred_[root_] = -1;
  thread_[root_] = 0;
  rev_thread_[0] = root_;
  succ_num_[root_] = node_num_ + 1;
  last_succ_[root_] = root_ - 1;
  pi_[root_] = 0.0;

  for (int u = 0; u < node_num_; ++u) {
    parent_[u] = root_;
    pred_[u] = arc_num_ + u;
    thread_[u] = u + 1;
    rev_thread_[u + 1] = u;
    succ_num_[u] = 1;
    last_succ_[u] = u;
    if (u < m_) {
      if (!(supply[u] > 0.0)) {
        throw InvalidArgument("transport supplies must be positive");
      }
      art_up_[u] = 1;
      pred_dir_[u] = kUp;
      pi_[u] = 0.0;
      pred_flow_[u] = supply[u];
    } else {
      const double d = demand[u - m_];
      if (!(d > 0.0)) {
        throw InvalidArgument("transport demands must be positive");
      }
      art_up_[u] = 0;
      pred_dir_[u] = kDown;
      pi_[u] = art_cost_;
      pred_flow_[u] = d;
    }
  }

  block_size_ = std::max<std::int64_t>(10, static_cast<std::int64_t>(std::ceil(std::sqrt(double(arc_num_)))));
}

int TransportSimplex::source_of(std::int64_t e) const {
  if (e < arc_num_) {
    return static_cast<int>(e / k_);
  }
  const int u = static_cast<int>(e - arc_num_);
  return art_up_[u] ? u : root_;
}

int TransportSimplex::target_of(std::int64_t e) const {
  if (e < arc_num_) {
    return m_ + static_cast<int>(e % k_);
  }
  const int u = static_cast<int>(e - arc_num_);
  return art_up_[u] ? root_ : u;
}

double TransportSimplex::arc_cost(std::int64_t e) const {
  if (e < arc_num_) {
    return real_cost(static_cast<int>(e / k_), static_cast<int>(e % k_));
  }
  return art_up_[e - arc_num_] ? 0.0 : art_cost_;
}

// Block search pivot rule over the real arcs.
bool TransportSimplex::find_entering_arc() {
  double best = -eps_;
  in_arc_ = -1;
  std::int64_t cnt = block_size_;
  std::int64_t e = next_arc_;
  int i = static_cast<int>(e / k_);
  int j = static_cast<int>(e % k_);
  for (std::int64_t scanned = 0; scanned < arc_num_; ++scanned) {
    const double c = real_cost(i, j) + pi_[i] - pi_[m_ + j];
    if (c < best) {
      best = c;
      in_arc_ = e;
    }
    ++e;
    if (++j == k_) {
      j = 0;
      if (++i == m_) {
        i = 0;
        e = 0;
      }
    }
    if (--cnt == 0) {
      if (in_arc_ >= 0) {
        break;
      }
      cnt = block_size_;
    }
  }
  if (in_arc_ < 0) {
    return false;
  }
  next_arc_ = e;
  return true;
}

void TransportSimplex::find_join_node() {
  int u = source_of(in_arc_);
  int v = target_of(in_arc_);
  while (u != v) {
    if (succ_num_[u] < succ_num_[v]) {
      u = parent_[u];
    } else {
      v = parent_[v];
    }
  }
  join_ = u;
}

bool TransportSimplex::find_leaving_arc() {
  const int first = source_of(in_arc_);
  const int second = target_of(in_arc_);
  constexpr double inf = std::numeric_limits<double>::infinity();
  delta_ = inf;
  int result = 0;
  for (int u = first; u != join_; u = parent_[u]) {
    const double d = pred_dir_[u] == kUp ? pred_flow_[u] : inf;
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
    }
  }
  for (int u = second; u != join_; u = parent_[u]) {
    const double d = pred_dir_[u] == kDown ? pred_flow_[u] : inf;
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
    }
  }
  if (result == 0) {
    return false;
  }
  // Rounding can leave tree flows at -1e-17 or so; never push negative flow.
  delta_ = std::max(delta_, 0.0);
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return true;
}

void TransportSimplex::change_flow() {
  if (delta_ > 0.0) {
    for (int u = source_of(in_arc_); u != join_; u = parent_[u]) {
      pred_flow_[u] -= pred_dir_[u] * delta_;
    }
    for (int u = target_of(in_arc_); u != join_; u = parent_[u]) {
      pred_flow_[u] += pred_dir_[u] * delta_;
    }
  }
}

void TransportSimplex::update_tree_structure() {
  const int old_rev_thread = rev_thread_[u_out_];
  const int old_succ_num = succ_num_[u_out_];
  const int old_last_succ = last_succ_[u_out_];
  v_out_ = parent_[u_out_];
  const signed char in_dir = u_in_ == source_of(in_arc_) ? kUp : kDown;

  if (u_in_ == u_out_) {
    parent_[u_in_] = v_in_;
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = in_dir;
    pred_flow_[u_in_] = delta_;

    if (thread_[v_in_] != u_out_) {
      int after = thread_[old_last_succ];
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
      after = thread_[v_in_];
      thread_[v_in_] = u_out_;
      rev_thread_[u_out_] = v_in_;
      thread_[old_last_succ] = after;
      rev_thread_[after] = old_last_succ;
    }
  } else {
    // When old_rev_thread == v_in, join and v_out coincide.
    const int thread_continue = old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

    // Re-hang the stem u_in ... u_out below v_in, fixing thread and parent.
    int stem = u_in_;
    int par_stem = v_in_;
    int next_stem = 0;
    int last = last_succ_[u_in_];
    int before = 0;
    int after = thread_[last];
    thread_[v_in_] = u_in_;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    while (stem != u_out_) {
      next_stem = parent_[stem];
      thread_[last] = next_stem;
      dirty_revs_.push_back(last);

      before = rev_thread_[stem];
      thread_[before] = after;
      rev_thread_[after] = before;

      parent_[stem] = par_stem;
      par_stem = stem;
      stem = next_stem;

      last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
      after = thread_[last];
    }
    parent_[u_out_] = par_stem;
    thread_[last] = thread_continue;
    rev_thread_[thread_continue] = last;
    last_succ_[u_out_] = last;

    if (old_rev_thread != v_in_) {
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
    }

    for (int u : dirty_revs_) {
      rev_thread_[thread_[u]] = u;
    }

    // Shift pred arcs (and their flow) down the reversed stem.
    int tmp_sc = 0;
    const int tmp_ls = last_succ_[u_out_];
    for (int u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
      pred_[u] = pred_[p];
      pred_dir_[u] = static_cast<signed char>(-pred_dir_[p]);
      pred_flow_[u] = pred_flow_[p];
      tmp_sc += succ_num_[u] - succ_num_[p];
      succ_num_[u] = tmp_sc;
      last_succ_[p] = tmp_ls;
    }
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = in_dir;
    pred_flow_[u_in_] = delta_;
    succ_num_[u_in_] = old_succ_num;
  }

  const int up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
  const int last_succ_out = last_succ_[u_out_];
  for (int u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u]) {
    last_succ_[u] = last_succ_out;
  }

  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
      last_succ_[u] = old_rev_thread;
    }
  } else if (last_succ_out != old_last_succ) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ; u = parent_[u]) {
      last_succ_[u] = last_succ_out;
    }
  }

  for (int u = v_in_; u != join_; u = parent_[u]) {
    succ_num_[u] += old_succ_num;
  }
  for (int u = v_out_; u != join_; u = parent_[u]) {
    succ_num_[u] -= old_succ_num;
  }
}

void TransportSimplex::update_potential() {
  const double sigma = pi_[v_in_] - pi_[u_in_] - pred_dir_[u_in_] * arc_cost(in_arc_);
  const int end = thread_[last_succ_[u_in_]];
  for (int u = u_in_; u != end; u = thread_[u]) {
    pi_[u] += sigma;
  }
}

void TransportSimplex::run() {
  if (m_ == 0 || k_ == 0) {
    return;
  }
  while (find_entering_arc()) {
    find_join_node();
    if (!find_leaving_arc()) {
      throw SolverError("transport simplex: unbounded pivot cycle");
    }
    change_flow();
    update_tree_structure();
    update_potential();
    ++pivots_;
  }
}

double TransportSimplex::cost() const {
  double total = 0.0;
  for (int u = 0; u < node_num_; ++u) {
    if (pred_[u] < arc_num_) {
      total += pred_flow_[u] * arc_cost(pred_[u]);
    }
  }
  return total;
}

std::vector<BipartiteFlow> TransportSimplex::flows() const {
  std::vector<BipartiteFlow> out;
  for (int u = 0; u < node_num_; ++u) {
    const std::int64_t e = pred_[u];
    if (e < arc_num_ && pred_flow_[u] > 0.0) {
      out.push_back({static_cast<int>(e / k_), static_cast<int>(e % k_), pred_flow_[u]});
    }
  }
  std::sort(out.begin(), out.end(), [](const BipartiteFlow& x, const BipartiteFlow& y) {
    return x.source != y.source ? x.source < y.source : x.target < y.target;
  });
  return out;
}

} // namespace l1emd::detail
