#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "bco/errors.hpp"
#include "bco/matrix.hpp"
#include "bco/rng.hpp"

namespace bco {

/// Symmetric two-state flip kernel [[1-b, b], [b, 1-b]].
struct TransitionMatrix {
  double p[2][2];

  double operator()(int from, int to) const { return p[from][to]; }
};

inline TransitionMatrix make_qt(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must be in (0,1)");
  return TransitionMatrix{{{1.0 - beta, beta}, {beta, 1.0 - beta}}};
}

/// Row-stochastic product of per-step kernels; symmetric because every
/// factor is.
struct CumulativeTransition {
  double p[2][2] = {{1.0, 0.0}, {0.0, 1.0}};  // empty product = identity

  double operator()(int from, int to) const { return p[from][to]; }
};

inline CumulativeTransition cumulative(std::span<const double> betas) {
  CumulativeTransition q;
  for (double beta : betas) {
    const TransitionMatrix step = make_qt(beta);
    double next[2][2];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next[a][b] = q.p[a][0] * step.p[0][b] + q.p[a][1] * step.p[1][b];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) q.p[a][b] = next[a][b];
  }
  return q;
}

/// Off-diagonal of the cumulative kernel in closed form:
/// (1 - prod(1 - 2 beta_s)) / 2. Used as an independent check on the
/// iterated product.
inline double cumulative_flip_closed_form(std::span<const double> betas) {
  double prod = 1.0;
  for (double beta : betas) prod *= 1.0 - 2.0 * beta;
  return 0.5 * (1.0 - prod);
}

/// Each undirected edge's state is redrawn from the row of the cumulative
/// kernel selected by its clean state; mirrored for symmetry.
inline EdgeMatrix forward_sample_cat(const EdgeMatrix& x0, const CumulativeTransition& qbar, Rng& rng) {
  EdgeMatrix out(x0.n());
  for (int i = 0; i < x0.n(); ++i)
    for (int j = i + 1; j < x0.n(); ++j) out.set_sym(i, j, rng.bernoulli(qbar(x0(i, j), 1)));
  return out;
}

/// Exact two-state posterior P(x_{t-1} = 1 | x_t, x0) by Bayes rule:
/// P(x_{t-1} = v) is proportional to q_t(v, x_t) * qbar_{t-1}(x0, v).
inline double posterior(int x_t_state, int x0_state, const TransitionMatrix& q_t,
                        const CumulativeTransition& qbar_tm1) {
  if ((x_t_state & ~1) || (x0_state & ~1)) throw InvalidArgument("states must be bits");
  const double w1 = q_t(1, x_t_state) * qbar_tm1(x0_state, 1);
  const double w0 = q_t(0, x_t_state) * qbar_tm1(x0_state, 0);
  const double total = w0 + w1;
  if (!(total > 0.0)) throw DegeneratePosterior("posterior normalizer vanished");
  return w1 / total;
}

/// One reverse step at 1-based step index t: per edge, the two conditional
/// posteriors are mixed by the predicted probability that the clean state is
/// active, and the previous state is sampled from the mixture.
inline EdgeMatrix reverse_step_cat(const EdgeMatrix& x_t, const ProbHeatmap& x0_probs, int t,
                                   std::span<const double> betas, Rng& rng) {
  if (t < 1 || t > static_cast<int>(betas.size())) throw InvalidArgument("step index out of range");
  if (x_t.n() != x0_probs.n()) throw InvalidArgument("dimension mismatch");
  const TransitionMatrix q_t = make_qt(betas[t - 1]);
  const CumulativeTransition qbar_tm1 = cumulative(betas.subspan(0, static_cast<std::size_t>(t - 1)));

  EdgeMatrix out(x_t.n());
  for (int i = 0; i < x_t.n(); ++i) {
    for (int j = i + 1; j < x_t.n(); ++j) {
      const int state = x_t(i, j);
      const double p1 = x0_probs(i, j);
      const double mixed = p1 * posterior(state, 1, q_t, qbar_tm1) +
                           (1.0 - p1) * posterior(state, 0, q_t, qbar_tm1);
      out.set_sym(i, j, rng.bernoulli(mixed));
    }
  }
  return out;
}

/// Binary cross-entropy between predicted edge probabilities and the clean
/// state, summed over undirected edges. Probabilities are clamped away from
/// {0,1} so the result stays finite.
inline double bce_loss(const ProbHeatmap& x0_probs, const EdgeMatrix& x0) {
  if (x0_probs.n() != x0.n()) throw InvalidArgument("dimension mismatch");
  constexpr double kClamp = 1e-12;
  double total = 0.0;
  for (int i = 0; i < x0.n(); ++i) {
    for (int j = i + 1; j < x0.n(); ++j) {
      const double p = std::min(1.0 - kClamp, std::max(kClamp, x0_probs(i, j)));
      total -= x0(i, j) ? std::log(p) : std::log(1.0 - p);
    }
  }
  return total;
}

}  // namespace bco
