#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "bco/blackout.hpp"
#include "bco/instance.hpp"

using namespace bco;

namespace {

EdgeMatrix ring(int n) {
  Tour t;
  t.order.resize(static_cast<std::size_t>(n));
  std::iota(t.order.begin(), t.order.end(), 0);
  return tour_to_edge_matrix(t);
}

EdgeMatrix single_edge() {
  EdgeMatrix m(3);
  m.set_sym(0, 1, true);
  return m;
}

bool symmetric_zero_diag(const EdgeMatrix& m) {
  for (int i = 0; i < m.n(); ++i) {
    if (m(i, i) != 0) return false;
    for (int j = 0; j < m.n(); ++j)
      if (m(i, j) != m(j, i)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("survival_prob is the exponential decay") {
  CHECK(survival_prob(0.0) == 1.0);
  CHECK(survival_prob(std::log(2.0)) == Catch::Approx(0.5).margin(1e-15));
  CHECK(survival_prob(15.0) == Catch::Approx(3.0590232050182579e-7).margin(1e-18));
  CHECK_THROWS_AS(survival_prob(-1e-9), InvalidArgument);
}

TEST_CASE("forward_sample at t=0 is the identity") {
  const EdgeMatrix x0 = ring(6);
  Rng rng(1);
  CHECK(forward_sample(x0, 0.0, rng) == x0);
  CHECK_THROWS_AS(forward_sample(x0, -0.1, rng), InvalidArgument);
  CHECK_THROWS_AS(forward_sample(x0, 15.1, rng), InvalidArgument);
}

TEST_CASE("forward_sample is pure death and symmetric") {
  const EdgeMatrix x0 = ring(8);
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = 15.0 * rng.uniform();
    const EdgeMatrix x_t = forward_sample(x0, t, rng);
    CHECK(x_t.subset_of(x0));
    CHECK(symmetric_zero_diag(x_t));
  }
}

TEST_CASE("forward_sample mean active count is binomial at t = ln 2") {
  const int n = 8;
  const EdgeMatrix x0 = ring(n);  // n undirected active edges
  Rng rng(3);
  const int trials = 100000;
  long long total = 0;
  for (int trial = 0; trial < trials; ++trial)
    total += forward_sample(x0, std::log(2.0), rng).active_edges();
  const double mean = static_cast<double>(total) / trials;
  // sum of n Bernoulli(1/2): mean n/2, var n/4
  const double band = 3.0 * std::sqrt(n * 0.25 / trials);
  CHECK(std::abs(mean - n * 0.5) < band);
}

TEST_CASE("forward_marginal scales active edges by survival") {
  const EdgeMatrix x0 = single_edge();
  const ProbHeatmap at0 = forward_marginal(x0, 0.0);
  CHECK(at0(0, 1) == 1.0);
  CHECK(at0(0, 2) == 0.0);
  const ProbHeatmap half = forward_marginal(x0, std::log(2.0));
  CHECK(half(0, 1) == Catch::Approx(0.5).margin(1e-15));
  CHECK(half(1, 0) == half(0, 1));
  CHECK(half(0, 2) == 0.0);  // dead stays dead at every t
  CHECK(forward_marginal(x0, 15.0)(0, 2) == 0.0);
}

TEST_CASE("bridge_param endpoints and value") {
  CHECK(bridge_param(1.0, 1.0) == 0.0);
  CHECK(bridge_param(0.0, 2.5) == 1.0);
  // frozen: (e^-s - e^-t) / (1 - e^-t) at (ln 2, 15), 30-digit evaluation
  CHECK(bridge_param(std::log(2.0), 15.0) ==
        Catch::Approx(0.49999984704879296).margin(1e-15));
  CHECK_THROWS_AS(bridge_param(2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bridge_param(0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(bridge_param(-0.1, 1.0), InvalidArgument);

  // stays in [0,1] across magnitudes, including tiny intervals
  for (double t : {1e-8, 1e-4, 0.5, 15.0}) {
    for (double frac : {0.0, 0.25, 0.75, 1.0}) {
      const double r = bridge_param(t * frac, t);
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
  }
}

TEST_CASE("reverse_bridge_sample degenerate and endpoint behavior") {
  const EdgeMatrix x0 = ring(5);
  Rng rng(4);

  // o == n: state pinned regardless of r
  const EdgeMatrix pinned = reverse_bridge_sample(x0, x0, 0.5, 1.0, rng);
  CHECK(pinned == x0);

  // s = 0: full reconstruction
  EdgeMatrix dead(5);
  const EdgeMatrix rebuilt = reverse_bridge_sample(dead, x0, 0.0, 2.0, rng);
  CHECK(rebuilt == x0);

  // inconsistent states rejected
  EdgeMatrix extra(5);
  extra.set_sym(0, 2, true);
  CHECK_THROWS_AS(reverse_bridge_sample(extra, x0, 0.5, 1.0, rng), InconsistentStates);
  CHECK_THROWS_AS(reverse_bridge_sample(dead, x0, 1.0, 1.0, rng), InvalidArgument);
}

TEST_CASE("reverse_bridge_sample hits the bridge parameter empirically") {
  const EdgeMatrix x0 = single_edge();
  const EdgeMatrix dead(3);
  Rng rng(5);
  const int trials = 100000;
  int born = 0;
  for (int trial = 0; trial < trials; ++trial)
    born += reverse_bridge_sample(dead, x0, 1.0, 2.0, rng)(0, 1);
  // frozen: r(1, 2) = 0.26894142136999512, 30-digit evaluation
  const double r = 0.26894142136999512;
  const double band = 3.0 * std::sqrt(r * (1.0 - r) / trials);
  CHECK(std::abs(static_cast<double>(born) / trials - r) < band);
}

TEST_CASE("reverse_bridge_sample outputs stay sandwiched and symmetric") {
  const EdgeMatrix x0 = ring(7);
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = 0.1 + 14.0 * rng.uniform();
    const double s = t * rng.uniform() * 0.99;
    const EdgeMatrix x_t = forward_sample(x0, t, rng);
    const EdgeMatrix x_s = reverse_bridge_sample(x_t, x0, s, t, rng);
    CHECK(x_t.subset_of(x_s));
    CHECK(x_s.subset_of(x0));
    CHECK(symmetric_zero_diag(x_s));
  }
}

TEST_CASE("bridge marginal consistency: resurrect to e^{-s}") {
  // forward to t then bridge back to s: an edge alive at 0 must be alive at
  // s with probability e^{-s}
  const EdgeMatrix x0 = single_edge();
  const double s = 0.4, t = 1.7;
  Rng rng(7);
  const int trials = 100000;
  int alive = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const EdgeMatrix x_t = forward_sample(x0, t, rng);
    alive += reverse_bridge_sample(x_t, x0, s, t, rng)(0, 1);
  }
  const double p = std::exp(-s);
  const double band = 3.0 * std::sqrt(p * (1.0 - p) / trials);
  CHECK(std::abs(static_cast<double>(alive) / trials - p) < band);
}

TEST_CASE("loss_full frozen values") {
  const EdgeMatrix x0 = single_edge();
  const EdgeMatrix x_t(3);  // the edge died: d = 1

  RateMatrix y(3, BlackoutConfig{}.epsilon_rate);
  y.set_sym(0, 1, 1.0);
  // frozen: 0.5 * e^-1 * (1 - 0), 30-digit evaluation
  CHECK(loss_full(y, x0, x_t, 1.0, 0.5) == Catch::Approx(0.18393972058572116).margin(1e-15));

  y.set_sym(0, 1, 0.5);
  // frozen: 0.5 * e^-1 * (0.5 + ln 2), 30-digit evaluation
  CHECK(loss_full(y, x0, x_t, 1.0, 0.5) == Catch::Approx(0.21946715900983734).margin(1e-15));

  CHECK_THROWS_AS(loss_full(y, x0, x_t, 0.5, 1.0), InvalidArgument);
  RateMatrix bad(3, 0.0);
  CHECK_THROWS_AS(loss_full(bad, x0, x_t, 1.0, 0.5), InvalidRate);
  EdgeMatrix inconsistent(3);
  inconsistent.set_sym(0, 2, true);
  CHECK_THROWS_AS(loss_full(y, x0, inconsistent, 1.0, 0.5), InconsistentStates);
}

TEST_CASE("loss_simplified and the weight factorization") {
  const EdgeMatrix x0 = single_edge();
  const EdgeMatrix x_t(3);
  RateMatrix y(3, 0.3);
  y.set_sym(0, 1, 1.0);
  // x_tk = x0 makes every d zero; the loss is just the sum of the rates
  CHECK(loss_simplified(y, x0, x0) == Catch::Approx(1.0 + 0.3 + 0.3).margin(1e-12));

  // d = 1, y = 1 contributes exactly 1; d = 0 edges contribute y each
  RateMatrix ones(3, 1.0);
  CHECK(loss_simplified(ones, x0, x_t) == Catch::Approx(3.0).margin(1e-15));

  // loss_full = (t_k - t_{k-1}) e^{-t_k} * loss_simplified
  const double t_k = 1.3, t_km1 = 0.45;
  const double w = (t_k - t_km1) * std::exp(-t_k);
  RateMatrix mixed(3, 0.2);
  mixed.set_sym(0, 1, 0.7);
  CHECK(loss_full(mixed, x0, x_t, t_k, t_km1) ==
        Catch::Approx(w * loss_simplified(mixed, x0, x_t)).margin(1e-12));
}

TEST_CASE("loss_gradient analytic values and finite differences") {
  const EdgeMatrix x0 = single_edge();
  const EdgeMatrix x_t(3);

  RateMatrix y(3, 0.3);
  y.set_sym(0, 1, 1.0);
  const SquareMatrix g = loss_gradient(y, x0, x_t, 1.0, 0.5);
  CHECK(g(0, 1) == Catch::Approx(0.0).margin(1e-15));  // minimum at y = d
  const double w = 0.5 * std::exp(-1.0);
  CHECK(g(0, 2) == Catch::Approx(w).margin(1e-15));  // d = 0: constant slope w

  // finite-difference oracle over random admissible points
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + rng.uniform_int(4);
    Tour t;
    t.order.resize(static_cast<std::size_t>(n));
    std::iota(t.order.begin(), t.order.end(), 0);
    const EdgeMatrix base = tour_to_edge_matrix(t);
    const double t_k = 0.2 + 10.0 * rng.uniform();
    const double t_km1 = t_k * rng.uniform() * 0.95;
    const EdgeMatrix corrupted = forward_sample(base, t_k, rng);
    RateMatrix rates(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) rates.set_sym(i, j, 0.05 + 0.9 * rng.uniform());

    const SquareMatrix grad = loss_gradient(rates, base, corrupted, t_k, t_km1);
    const int i = rng.uniform_int(n - 1);
    const int j = i + 1 + rng.uniform_int(n - i - 1);
    const double h = 1e-6;
    RateMatrix up = rates, down = rates;
    up.set_sym(i, j, rates(i, j) + h);
    down.set_sym(i, j, rates(i, j) - h);
    const double fd =
        (loss_full(up, base, corrupted, t_k, t_km1) - loss_full(down, base, corrupted, t_k, t_km1)) /
        (2.0 * h);
    const double scale = std::max({std::abs(fd), std::abs(grad(i, j)), 1e-8});
    CHECK(std::abs(fd - grad(i, j)) / scale < 1e-5);
  }
}

TEST_CASE("forward_trajectory chains Markov steps over the schedule") {
  const EdgeMatrix x0 = ring(10);
  const Schedule schedule = original_schedule(12);
  Rng rng(9);
  const std::vector<EdgeMatrix> frames = forward_trajectory(x0, schedule, rng);
  REQUIRE(frames.size() == 13);  // x0 plus one frame per observation time
  CHECK(frames.front() == x0);
  for (std::size_t k = 1; k < frames.size(); ++k) CHECK(frames[k].subset_of(frames[k - 1]));

  Schedule bad;
  bad.times = {2.0, 1.0};
  CHECK_THROWS_AS(forward_trajectory(x0, bad, rng), ScheduleError);
}

TEST_CASE("forward_trajectory final frame is almost surely blacked out") {
  const EdgeMatrix x0 = ring(10);
  const Schedule schedule = original_schedule(8);
  Rng rng(10);
  long long survivors = 0;
  for (int trial = 0; trial < 1000; ++trial)
    survivors += forward_trajectory(x0, schedule, rng).back().active_edges();
  // expected survivors = 1000 * 10 * e^-15 ~ 0.003; even 3 would be wild
  CHECK(survivors <= 3);
}

TEST_CASE("Markov composition: two-leg corruption matches single-shot") {
  const EdgeMatrix x0 = single_edge();
  Rng rng(11);
  const int trials = 100000;
  const double t1 = 0.8, t2 = 2.0;
  int direct = 0, composed = 0;
  for (int trial = 0; trial < trials; ++trial) {
    direct += forward_sample(x0, t2, rng)(0, 1);
    composed += forward_sample(forward_sample(x0, t1, rng), t2 - t1, rng)(0, 1);
  }
  const double p = std::exp(-t2);
  const double band = 3.0 * std::sqrt(p * (1.0 - p) / trials);
  CHECK(std::abs(static_cast<double>(direct) / trials - p) < band);
  CHECK(std::abs(static_cast<double>(composed) / trials - p) < band);
}
