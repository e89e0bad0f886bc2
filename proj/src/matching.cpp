#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "l1emd/errors.hpp"
#include "l1emd/transport.hpp"

namespace l1emd {

namespace {

void require_same_size(std::span<const Point> A, std::span<const Point> B) {
  if (A.size() != B.size()) {
    throw InvalidArgument("matching needs equal-size point sets, got " + std::to_string(A.size()) + " and " +
                          std::to_string(B.size()));
  }
}

} // namespace

MatchingResult min_weight_matching(std::span<const Point> A, std::span<const Point> B, const GroundMetric& metric) {
  require_same_size(A, B);
  const int k = static_cast<int>(A.size());
  MatchingResult result;
  if (k == 0) {
    return result;
  }

  Eigen::MatrixXd cost(k + 1, k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      cost(i + 1, j + 1) = metric(A[i], B[j]);
    }
  }

  // Shortest augmenting path Hungarian method with row/column potentials,
  // 1-based with column 0 as the virtual start.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0), minv(k + 1);
  std::vector<int> p(k + 1, 0), way(k + 1, 0);
  std::vector<char> used(k + 1);
  for (int i = 1; i <= k; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= k; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.assignment.assign(static_cast<std::size_t>(k), -1);
  for (int j = 1; j <= k; ++j) {
    result.assignment[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  }
  for (int i = 0; i < k; ++i) {
    result.cost += cost(i + 1, result.assignment[static_cast<std::size_t>(i)] + 1);
  }
  return result;
}

double brute_force_matching(std::span<const Point> A, std::span<const Point> B, const GroundMetric& metric) {
  require_same_size(A, B);
  if (A.size() > static_cast<std::size_t>(kBruteForceMaxPoints)) {
    throw InvalidArgument("brute_force_matching is limited to " + std::to_string(kBruteForceMaxPoints) + " points");
  }
  const std::size_t k = A.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = k == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  if (k == 0) {
    return best;
  }
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      total += metric(A[i], B[perm[i]]);
    }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

} // namespace l1emd
