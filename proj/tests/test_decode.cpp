#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "bco/decode.hpp"
#include "bco/solvers.hpp"

using namespace bco;

namespace {

TspInstance unit_square() {
  return TspInstance(4, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}

bool same_cycle(const Tour& a, const Tour& b) {
  // equal as undirected cycles
  return tour_to_edge_matrix(a) == tour_to_edge_matrix(b);
}

bool heatmaps_equal(const ProbHeatmap& a, const ProbHeatmap& b) {
  if (a.n() != b.n()) return false;
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace

TEST_CASE("run_reverse with the oracle recovers the clean heatmap on every variant") {
  for (std::uint64_t seed : {0ULL, 5ULL}) {
    const TspInstance inst = generate_random(9, 40 + seed);
    const Tour opt = exact_solve(inst);
    const EdgeMatrix x0 = tour_to_edge_matrix(opt);
    const OracleDenoiser oracle(x0);
    for (Variant variant : {Variant::blackout_original, Variant::blackout_improved,
                            Variant::blackout_more_improved, Variant::categorical}) {
      ReverseRunConfig config;
      config.variant = variant;
      config.steps = 8;
      config.seed = seed;
      const ProbHeatmap heatmap = run_reverse(inst, oracle, config);
      for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
          CHECK(heatmap(i, j) == static_cast<double>(x0(i, j)));
    }
  }
}

TEST_CASE("run_reverse is deterministic per seed and chain") {
  const TspInstance inst = generate_random(10, 46);
  const HeuristicDenoiser denoiser;
  ReverseRunConfig config;
  config.variant = Variant::categorical;
  config.steps = 12;
  config.seed = 99;
  CHECK(heatmaps_equal(run_reverse(inst, denoiser, config), run_reverse(inst, denoiser, config)));
  CHECK(heatmaps_equal(run_reverse(inst, denoiser, config, 3), run_reverse(inst, denoiser, config, 3)));
}

TEST_CASE("run_reverse with the heuristic keeps square sides above diagonals") {
  const TspInstance square = unit_square();
  const HeuristicDenoiser denoiser;
  ReverseRunConfig config;
  config.steps = 10;
  config.seed = 1;
  const ProbHeatmap heatmap = run_reverse(square, denoiser, config);
  const SquareMatrix scores = score_matrix(heatmap, square);
  for (int side = 0; side < 4; ++side) {
    const int i = side, j = (side + 1) % 4;
    CHECK(scores(i, j) > scores(0, 2));
    CHECK(scores(i, j) > scores(1, 3));
  }
}

TEST_CASE("score_matrix normalizes by distance") {
  const TspInstance inst(3, {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.8}});
  ProbHeatmap heatmap(3);
  heatmap.set_sym(0, 1, 0.8);
  const SquareMatrix scores = score_matrix(heatmap, inst);
  CHECK(scores(0, 1) == Catch::Approx(3.2).margin(1e-12));  // 2*0.8 / 0.5
  CHECK(scores(1, 0) == scores(0, 1));
  CHECK(scores(0, 2) == 0.0);

  const TspInstance degenerate(3, {{0.2, 0.2}, {0.2, 0.2}, {0.9, 0.9}});
  CHECK_THROWS_AS(score_matrix(heatmap, degenerate), DegenerateInstance);
}

TEST_CASE("coordinate scaling rescales scores but not the greedy tour") {
  const TspInstance inst = generate_random(12, 47);
  const double lambda = 0.5;
  std::vector<Point> scaled_coords;
  for (const Point& p : inst.coords()) scaled_coords.push_back({p.x * lambda, p.y * lambda});
  const TspInstance scaled(12, scaled_coords);

  ProbHeatmap heatmap(12);
  Rng rng(48);
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) heatmap.set_sym(i, j, rng.uniform());

  const SquareMatrix s1 = score_matrix(heatmap, inst);
  const SquareMatrix s2 = score_matrix(heatmap, scaled);
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      CHECK(s2(i, j) == Catch::Approx(s1(i, j) / lambda).epsilon(1e-12));
  CHECK(same_cycle(greedy_construct(s1, 12), greedy_construct(s2, 12)));
}

TEST_CASE("greedy_construct follows a perfect heatmap") {
  const TspInstance inst = generate_random(11, 49);
  const Tour opt = exact_solve(inst);
  const EdgeMatrix x0 = tour_to_edge_matrix(opt);
  ProbHeatmap heatmap(11);
  for (int i = 0; i < 11; ++i)
    for (int j = i + 1; j < 11; ++j) heatmap.set_sym(i, j, static_cast<double>(x0(i, j)));
  const Tour decoded = greedy_construct(score_matrix(heatmap, inst), 11);
  CHECK(same_cycle(decoded, opt));
}

TEST_CASE("greedy_construct corner cases") {
  // n = 3: the only cycle
  SquareMatrix any3(3);
  any3.set_sym(0, 1, -5.0);
  any3.set_sym(0, 2, 2.0);
  any3.set_sym(1, 2, 0.0);
  CHECK(same_cycle(greedy_construct(any3, 3), Tour{{0, 1, 2}}));

  // all-equal scores: lexicographic tie-break gives a fixed tour
  const SquareMatrix flat(4, 1.0);
  CHECK(greedy_construct(flat, 4).order == std::vector<int>{0, 1, 3, 2});

  SquareMatrix bad(4, 1.0);
  bad(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(greedy_construct(bad, 4), InvalidArgument);
  CHECK_THROWS_AS(greedy_construct(flat, 2), InvalidArgument);
}

TEST_CASE("greedy_construct always yields a Hamiltonian cycle on random scores") {
  Rng rng(50);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + rng.uniform_int(62);
    SquareMatrix scores(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) scores.set_sym(i, j, 10.0 * (rng.uniform() - 0.5));
    const Tour tour = greedy_construct(scores, n);
    // a valid permutation visiting everything once
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : tour.order) {
      REQUIRE(v >= 0);
      REQUIRE(v < n);
      REQUIRE(!seen[v]);
      seen[v] = 1;
    }
    REQUIRE(static_cast<int>(tour.order.size()) == n);
  }
}

TEST_CASE("positive scaling of scores leaves the greedy tour unchanged") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + rng.uniform_int(20);
    SquareMatrix scores(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) scores.set_sym(i, j, rng.uniform());
    SquareMatrix scaled(n);
    const double factor = 0.25 + 10.0 * rng.uniform();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) scaled.set_sym(i, j, factor * scores(i, j));
    CHECK(greedy_construct(scores, n).order == greedy_construct(scaled, n).order);
  }
}

TEST_CASE("two_opt uncrosses the square") {
  const TspInstance square = unit_square();
  const Tour crossed{{0, 2, 1, 3}};
  REQUIRE(tour_length(square, crossed) == Catch::Approx(4.8284271247461901).margin(1e-12));
  const Tour fixed = two_opt(square, crossed);
  CHECK(tour_length(square, fixed) == Catch::Approx(4.0).margin(1e-12));

  // already optimal: unchanged
  const Tour perimeter{{0, 1, 2, 3}};
  CHECK(two_opt(square, perimeter).order == perimeter.order);

  CHECK_THROWS_AS(two_opt(square, Tour{{0, 1, 2}}), InvalidTour);
}

TEST_CASE("two_opt lands between the heuristic and the optimum") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TspInstance inst = generate_random(12, 60 + seed);
    const double opt = tour_length(inst, exact_solve(inst));
    const Tour nn = nearest_neighbor(inst, 0);
    const double nn_len = tour_length(inst, nn);
    const double refined = tour_length(inst, two_opt(inst, nn));
    CHECK(refined >= opt - 1e-9);
    CHECK(refined <= nn_len + 1e-12);
  }
}

TEST_CASE("two_opt never increases length on random tours") {
  Rng rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + rng.uniform_int(30);
    const TspInstance inst = generate_random(n, 700 + static_cast<std::uint64_t>(trial));
    Tour t;
    t.order.resize(static_cast<std::size_t>(n));
    std::iota(t.order.begin(), t.order.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(t.order[i], t.order[rng.uniform_int(i + 1)]);
    CHECK(tour_length(inst, two_opt(inst, t)) <= tour_length(inst, t) + 1e-12);
  }
}

TEST_CASE("solve_greedy with the oracle closes the gap") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TspInstance inst = generate_random(12, 80 + seed);
    const Tour opt = exact_solve(inst);
    const OracleDenoiser oracle(tour_to_edge_matrix(opt));
    ReverseRunConfig config;
    config.steps = 6;
    config.seed = seed;
    const SolveResult result = solve_greedy(inst, oracle, config);
    CHECK(optimality_gap(result.length, tour_length(inst, opt)) ==
          Catch::Approx(0.0).margin(1e-9));
  }
}

TEST_CASE("solve_greedy two-opt flag never hurts and results are reproducible") {
  const TspInstance inst = generate_random(14, 85);
  const HeuristicDenoiser denoiser;
  ReverseRunConfig config;
  config.steps = 12;
  config.seed = 3;

  const SolveResult raw = solve_greedy(inst, denoiser, config);
  config.two_opt = true;
  const SolveResult refined = solve_greedy(inst, denoiser, config);
  CHECK(refined.length <= raw.length + 1e-12);

  const SolveResult again = solve_greedy(inst, denoiser, config);
  CHECK(again.tour.order == refined.tour.order);
  CHECK(again.length == refined.length);
  CHECK(heatmaps_equal(again.heatmap, refined.heatmap));
}

TEST_CASE("solve_sampling degenerates to solve_greedy at one sample") {
  const TspInstance inst = generate_random(10, 90);
  const HeuristicDenoiser denoiser;
  ReverseRunConfig config;
  config.steps = 10;
  config.samples = 1;
  config.seed = 17;
  const SolveResult sampled = solve_sampling(inst, denoiser, config);
  const SolveResult greedy = solve_greedy(inst, denoiser, config);
  CHECK(sampled.tour.order == greedy.tour.order);
  CHECK(sampled.length == greedy.length);
}

TEST_CASE("solve_sampling is at least as good as its first chain") {
  const TspInstance inst = generate_random(12, 95);
  const HeuristicDenoiser denoiser;
  ReverseRunConfig config;
  config.variant = Variant::categorical;  // chain-to-chain diversity
  config.steps = 10;
  config.samples = 16;
  config.seed = 4;
  const SolveResult best = solve_sampling(inst, denoiser, config);
  config.samples = 1;
  const SolveResult first = solve_sampling(inst, denoiser, config);
  CHECK(best.length <= first.length + 1e-12);
}

TEST_CASE("sampling beats or ties greedy on average at equal steps") {
  double greedy_gap = 0.0, sample_gap = 0.0;
  const int count = 10;
  for (int k = 0; k < count; ++k) {
    const TspInstance inst = generate_random(10, 900 + static_cast<std::uint64_t>(k));
    const double opt = tour_length(inst, exact_solve(inst));
    const HeuristicDenoiser denoiser;
    ReverseRunConfig config;
    config.variant = Variant::categorical;
    config.steps = 10;
    config.seed = static_cast<std::uint64_t>(k);
    config.samples = 1;
    greedy_gap += optimality_gap(solve_greedy(inst, denoiser, config).length, opt);
    config.samples = 16;
    sample_gap += optimality_gap(solve_sampling(inst, denoiser, config).length, opt);
  }
  CHECK(sample_gap / count <= greedy_gap / count + 1e-12);
}
