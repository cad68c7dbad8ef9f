#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "bco/blackout.hpp"
#include "bco/categorical.hpp"
#include "bco/config.hpp"
#include "bco/denoiser.hpp"
#include "bco/errors.hpp"
#include "bco/instance.hpp"
#include "bco/matrix.hpp"
#include "bco/rng.hpp"
#include "bco/schedule.hpp"

namespace bco {

enum class Variant { blackout_original, blackout_improved, blackout_more_improved, categorical };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::blackout_original: return "blackout_original";
    case Variant::blackout_improved: return "blackout_improved";
    case Variant::blackout_more_improved: return "blackout_more_improved";
    case Variant::categorical: return "categorical";
  }
  return "?";
}

struct ReverseRunConfig {
  Variant variant = Variant::blackout_original;
  int steps = 50;    // greedy regime default; sampling runs typically use 10
  int samples = 16;  // parallel chains for sampling-based decoding
  std::uint64_t seed = 0;
  bool two_opt = false;
  bool two_opt_after_select = false;  // refine only the winning sample instead
  double alpha = 0.2;                 // more_improved schedule knob
  double beta_min = 1e-4;             // categorical corruption ramp
  double beta_max = 0.2;
  BlackoutConfig blackout;

  void validate() const {
    if (steps < 2) throw ConfigError("steps must be at least 2");
    if (samples < 1) throw ConfigError("samples must be at least 1");
    blackout.validate();
  }
};

inline Schedule schedule_for(const ReverseRunConfig& config) {
  switch (config.variant) {
    case Variant::blackout_original: return original_schedule(config.steps, config.blackout);
    case Variant::blackout_improved: return improved_schedule(config.steps, config.blackout);
    case Variant::blackout_more_improved:
      return more_improved_schedule(config.steps, config.alpha, config.blackout);
    case Variant::categorical: break;
  }
  throw ConfigError("categorical variant has no observation-time schedule");
}

namespace detail {

inline EdgeMatrix threshold_half(const ProbHeatmap& probs) {
  EdgeMatrix out(probs.n());
  for (int i = 0; i < probs.n(); ++i)
    for (int j = i + 1; j < probs.n(); ++j) out.set_sym(i, j, probs(i, j) >= 0.5);
  return out;
}

inline ProbHeatmap reverse_blackout(const TspInstance& instance, const Denoiser& denoiser,
                                    const ReverseRunConfig& config, Rng& rng) {
  const Schedule schedule = schedule_for(config);
  const int K = schedule.K();
  EdgeMatrix x(instance.n());  // blackout state at t_K
  for (int k = K; k >= 1; --k) {
    const double t_k = schedule.times[k - 1];
    const DenoiserOutput out = denoiser.predict({x, t_k, instance});
    if (k == 1) return out.edge_probs;
    // Threshold the predicted marginals into a clean-state estimate and
    // repair it to cover the known survivors before bridging down.
    EdgeMatrix x0_hat = EdgeMatrix::max_of(detail::threshold_half(out.edge_probs), x);
    x = reverse_bridge_sample(x, x0_hat, schedule.times[k - 2], t_k, rng);
  }
  throw ConfigError("unreachable: steps >= 2 enforced by validate");
}

inline ProbHeatmap reverse_categorical(const TspInstance& instance, const Denoiser& denoiser,
                                       const ReverseRunConfig& config, Rng& rng) {
  const int T = config.steps;
  std::vector<double> betas(static_cast<std::size_t>(T));
  for (int t = 1; t <= T; ++t)
    betas[t - 1] = config.beta_min + (config.beta_max - config.beta_min) *
                                         static_cast<double>(t - 1) / (T - 1);
  // Stationary start: the symmetric flip chain mixes toward a fair coin.
  EdgeMatrix x(instance.n());
  for (int i = 0; i < instance.n(); ++i)
    for (int j = i + 1; j < instance.n(); ++j) x.set_sym(i, j, rng.bernoulli(0.5));

  for (int t = T; t >= 1; --t) {
    // Denoisers live on the continuous time axis; map step t onto it.
    const double t_cont = config.blackout.horizon_T * static_cast<double>(t) / T;
    const ProbHeatmap probs = denoiser.predict_x0_probs({x, t_cont, instance});
    if (t == 1) return probs;
    x = reverse_step_cat(x, probs, t, betas, rng);
  }
  throw ConfigError("unreachable: steps >= 2 enforced by validate");
}

}  // namespace detail

/// Runs one reverse chain and returns the final step's predicted edge
/// probabilities (not the binary sample — the marginals carry the ranking
/// information decoding needs). chain_index selects the derived RNG stream,
/// so chains are reproducible independently of execution order.
inline ProbHeatmap run_reverse(const TspInstance& instance, const Denoiser& denoiser,
                               const ReverseRunConfig& config, int chain_index = 0) {
  config.validate();
  Rng rng = Rng(config.seed).child(static_cast<std::uint64_t>(chain_index));
  if (config.variant == Variant::categorical)
    return detail::reverse_categorical(instance, denoiser, config, rng);
  return detail::reverse_blackout(instance, denoiser, config, rng);
}

/// Distance-normalized edge ranking: (A_ij + A_ji) / |c_i - c_j|.
inline SquareMatrix score_matrix(const ProbHeatmap& heatmap, const TspInstance& instance) {
  const int n = instance.n();
  if (heatmap.n() != n) throw InvalidArgument("dimension mismatch");
  SquareMatrix scores(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = instance.distance(i, j);
      if (!(d > 0.0)) throw DegenerateInstance("coincident nodes have no defined score");
      scores.set_sym(i, j, (heatmap(i, j) + heatmap(j, i)) / d);
    }
  }
  return scores;
}

/// Builds a Hamiltonian cycle by accepting edges in descending score order
/// (ties: lexicographically smaller pair first) subject to degree <= 2 and
/// no premature cycle; the n-th accepted edge closes the tour. A complete
/// graph always admits completion, so this cannot fail on finite scores.
inline Tour greedy_construct(const SquareMatrix& scores, int n) {
  if (n < 3) throw InvalidArgument("need at least 3 nodes");
  if (scores.n() != n) throw InvalidArgument("dimension mismatch");

  struct Candidate {
    double score;
    int i, j;
  };
  std::vector<Candidate> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!std::isfinite(scores(i, j))) throw InvalidArgument("scores must be finite");
      edges.push_back({scores(i, j), i, j});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };

  std::vector<std::array<int, 2>> adjacent(static_cast<std::size_t>(n), {-1, -1});
  int accepted = 0;
  for (const Candidate& e : edges) {
    if (accepted == n) break;
    if (degree[e.i] >= 2 || degree[e.j] >= 2) continue;
    const int ri = find(e.i);
    const int rj = find(e.j);
    if (ri == rj && accepted != n - 1) continue;  // would close a subtour early
    parent[ri] = rj;
    adjacent[e.i][degree[e.i]++] = e.j;
    adjacent[e.j][degree[e.j]++] = e.i;
    ++accepted;
  }
  assert(accepted == n && "complete graph must admit a Hamiltonian cycle");

  Tour tour;
  tour.order.reserve(static_cast<std::size_t>(n));
  int prev = -1;
  int current = 0;
  for (int step = 0; step < n; ++step) {
    tour.order.push_back(current);
    const int next = (adjacent[current][0] != prev) ? adjacent[current][0] : adjacent[current][1];
    prev = current;
    current = next;
  }
  assert(current == 0 && "walk must return to the start");
  return tour;
}

/// First-improvement 2-opt: sweep all segment reversals, apply any swap that
/// shortens the tour by more than 1e-12, and repeat until a full sweep finds
/// none. Length never increases; termination follows from the strict
/// decrease per applied swap.
inline Tour two_opt(const TspInstance& instance, const Tour& tour) {
  validate_tour(instance, tour);
  const int n = instance.n();
  const SquareMatrix d = instance.distance_matrix();
  constexpr double kMinGain = 1e-12;

  std::vector<int> order = tour.order;
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // reversing the whole tour is a no-op
        const int a = order[(i + n - 1) % n];
        const int b = order[i];
        const int c = order[j];
        const int e = order[(j + 1) % n];
        const double delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
        if (delta < -kMinGain) {
          std::reverse(order.begin() + i, order.begin() + j + 1);
          improved = true;
        }
      }
    }
  }
  return Tour{std::move(order)};
}

struct SolveResult {
  Tour tour;
  ProbHeatmap heatmap;
  double length = 0.0;
  double wall_seconds = 0.0;
  int chains_run = 1;
  int winning_chain = 0;
};

/// One exhaustive reverse chain, scored and greedily decoded; optional 2-opt.
inline SolveResult solve_greedy(const TspInstance& instance, const Denoiser& denoiser,
                                const ReverseRunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  result.heatmap = run_reverse(instance, denoiser, config, 0);
  result.tour = greedy_construct(score_matrix(result.heatmap, instance), instance.n());
  if (config.two_opt) result.tour = two_opt(instance, result.tour);
  result.length = tour_length(instance, result.tour);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

/// Best-of-k decoding: independent chains with seed-derived streams, each
/// decoded greedily (and 2-opted per candidate unless deferred); the
/// shortest candidate wins, ties to the lowest chain index. The reduction is
/// by chain index, so the result does not depend on execution order.
inline SolveResult solve_sampling(const TspInstance& instance, const Denoiser& denoiser,
                                  const ReverseRunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  SolveResult best;
  bool have_best = false;
  for (int chain = 0; chain < config.samples; ++chain) {
    SolveResult candidate;
    candidate.heatmap = run_reverse(instance, denoiser, config, chain);
    candidate.tour = greedy_construct(score_matrix(candidate.heatmap, instance), instance.n());
    if (config.two_opt && !config.two_opt_after_select)
      candidate.tour = two_opt(instance, candidate.tour);
    candidate.length = tour_length(instance, candidate.tour);
    candidate.winning_chain = chain;
    if (!have_best || candidate.length < best.length) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  if (config.two_opt && config.two_opt_after_select) {
    best.tour = two_opt(instance, best.tour);
    best.length = tour_length(instance, best.tour);
  }
  best.chains_run = config.samples;
  best.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return best;
}

}  // namespace bco
