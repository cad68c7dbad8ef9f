#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "bco/errors.hpp"
#include "bco/instance.hpp"

namespace bco {

inline constexpr int kBruteForceMaxNodes = 10;
inline constexpr int kExactMaxNodes = 18;

/// Exhaustive minimum over all undirected tours. Node 0 is fixed first and
/// each tour is enumerated in one orientation only (order[1] < order[n-1]).
/// Ties resolve to the lexicographically smallest order because enumeration
/// is lexicographic and only strict improvements are kept.
inline Tour brute_force_solve(const TspInstance& instance) {
  const int n = instance.n();
  if (n > kBruteForceMaxNodes)
    throw InstanceTooLarge("brute force is limited to " + std::to_string(kBruteForceMaxNodes) + " nodes");
  const SquareMatrix d = instance.distance_matrix();

  std::vector<int> perm(static_cast<std::size_t>(n - 1));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<int> best;
  double best_len = std::numeric_limits<double>::infinity();
  do {
    if (perm.front() > perm.back()) continue;  // one orientation per undirected tour
    double len = d(0, perm.front()) + d(perm.back(), 0);
    for (int k = 0; k + 1 < n - 1; ++k) len += d(perm[k], perm[k + 1]);
    if (len < best_len) {
      best_len = len;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Tour tour;
  tour.order.reserve(static_cast<std::size_t>(n));
  tour.order.push_back(0);
  tour.order.insert(tour.order.end(), best.begin(), best.end());
  return tour;
}

/// Exact solver via dynamic programming over node subsets.
///
/// h[S][j] = length of the cheapest path that starts at j, visits every node
/// in S exactly once, and ends back at node 0 (node 0 is never a member of
/// S). The optimum is h[all nodes but 0][0]. Reconstruction walks forward,
/// always taking the lowest-indexed next node that still completes at the
/// optimal length, which yields the lexicographically smallest optimal order.
inline Tour exact_solve(const TspInstance& instance) {
  const int n = instance.n();
  if (n > kExactMaxNodes)
    throw InstanceTooLarge("exact solver is limited to " + std::to_string(kExactMaxNodes) + " nodes");
  const SquareMatrix d = instance.distance_matrix();

  const int m = n - 1;  // nodes 1..n-1, bit k-1 stands for node k
  const std::size_t nsets = std::size_t{1} << m;
  std::vector<double> h(nsets * static_cast<std::size_t>(n), 0.0);
  const auto at = [&](std::size_t set, int j) -> double& { return h[set * n + j]; };

  for (int j = 0; j < n; ++j) at(0, j) = d(j, 0);
  for (std::size_t set = 1; set < nsets; ++set) {
    for (int j = 0; j < n; ++j) {
      if (j > 0 && (set >> (j - 1)) & 1U) continue;  // j itself cannot be unvisited
      double best = std::numeric_limits<double>::infinity();
      for (int k = 1; k < n; ++k) {
        if (!((set >> (k - 1)) & 1U)) continue;
        const double cand = d(j, k) + at(set ^ (std::size_t{1} << (k - 1)), k);
        if (cand < best) best = cand;
      }
      at(set, j) = best;
    }
  }

  Tour tour;
  tour.order.reserve(static_cast<std::size_t>(n));
  tour.order.push_back(0);
  std::size_t remaining = nsets - 1;
  int current = 0;
  while (remaining != 0) {
    const double target = at(remaining, current);
    for (int k = 1; k < n; ++k) {
      if (!((remaining >> (k - 1)) & 1U)) continue;
      const std::size_t rest = remaining ^ (std::size_t{1} << (k - 1));
      // Exact comparison: target was computed as the min of these very values.
      if (d(current, k) + at(rest, k) == target) {
        tour.order.push_back(k);
        remaining = rest;
        current = k;
        break;
      }
    }
  }
  return tour;
}

/// Greedy next-closest-unvisited construction; distance ties break to the
/// lowest node index.
inline Tour nearest_neighbor(const TspInstance& instance, int start) {
  const int n = instance.n();
  if (start < 0 || start >= n) throw InvalidArgument("start node out of range");
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  Tour tour;
  tour.order.reserve(static_cast<std::size_t>(n));
  tour.order.push_back(start);
  visited[start] = 1;
  int current = start;
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (visited[j]) continue;
      const double dj = instance.distance(current, j);
      if (dj < best_d) {
        best_d = dj;
        best = j;
      }
    }
    visited[best] = 1;
    tour.order.push_back(best);
    current = best;
  }
  return tour;
}

}  // namespace bco
