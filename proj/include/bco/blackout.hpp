#pragma once

#include <cmath>
#include <vector>

#include "bco/config.hpp"
#include "bco/errors.hpp"
#include "bco/matrix.hpp"
#include "bco/rng.hpp"
#include "bco/schedule.hpp"

namespace bco {

/// Probability that an active edge is still active at time t under the
/// unit-rate pure-death dynamics.
inline double survival_prob(double t) {
  if (t < 0.0) throw InvalidArgument("time must be nonnegative");
  return std::exp(-t);
}

/// One corruption draw: every active edge of x0 independently survives to
/// time t with probability e^{-t}; inactive edges stay inactive. One coin
/// per undirected edge, mirrored into both triangles.
inline EdgeMatrix forward_sample(const EdgeMatrix& x0, double t, Rng& rng,
                                 const BlackoutConfig& config = {}) {
  if (t < 0.0 || t > config.horizon_T) throw InvalidArgument("time outside [0, horizon_T]");
  const double p = std::exp(-t);
  EdgeMatrix out(x0.n());
  for (int i = 0; i < x0.n(); ++i)
    for (int j = i + 1; j < x0.n(); ++j)
      if (x0(i, j)) out.set_sym(i, j, rng.bernoulli(p));
  return out;
}

/// Per-edge survival marginal: x0(i,j) * e^{-t}.
inline ProbHeatmap forward_marginal(const EdgeMatrix& x0, double t, const BlackoutConfig& config = {}) {
  if (t < 0.0 || t > config.horizon_T) throw InvalidArgument("time outside [0, horizon_T]");
  const double p = std::exp(-t);
  ProbHeatmap out(x0.n());
  for (int i = 0; i < x0.n(); ++i)
    for (int j = i + 1; j < x0.n(); ++j)
      if (x0(i, j)) out.set_sym(i, j, p);
  return out;
}

/// Bridge transition parameter r = (e^{-s} - e^{-t}) / (1 - e^{-t}) for a
/// step backward from time t to time s: the probability that an edge which
/// is alive at 0 and dead at t was still alive at s. Evaluated via expm1
/// so small times don't cancel; clamped into [0,1] against drift.
inline double bridge_param(double s, double t) {
  if (!(t > 0.0) || s < 0.0 || s > t) throw InvalidArgument("need 0 <= s <= t and t > 0");
  const double num = std::expm1(-s) - std::expm1(-t);
  const double den = -std::expm1(-t);
  const double r = num / den;
  return std::min(1.0, std::max(0.0, r));
}

/// One reverse step from state x_t at time t to time s < t, conditioned on a
/// predicted clean state x0_hat. Per undirected edge with clean state o and
/// corrupted state n, the intermediate state m follows
///   P(m) = C(o-n, m-n) r^{m-n} (1-r)^{o-m},
/// which for binary edges reduces to: edges alive at t stay alive, edges
/// dead at t with o = 1 resurrect with probability r. Births only; the
/// output is sandwiched between x_t and x0_hat.
inline EdgeMatrix reverse_bridge_sample(const EdgeMatrix& x_t, const EdgeMatrix& x0_hat, double s,
                                        double t, Rng& rng) {
  if (!(t > 0.0) || s < 0.0 || s >= t) throw InvalidArgument("need 0 <= s < t");
  if (x_t.n() != x0_hat.n()) throw InvalidArgument("state dimensions differ");
  const double r = bridge_param(s, t);
  EdgeMatrix out(x_t.n());
  for (int i = 0; i < x_t.n(); ++i) {
    for (int j = i + 1; j < x_t.n(); ++j) {
      const int n = x_t(i, j);
      const int o = x0_hat(i, j);
      if (n > o)
        throw InconsistentStates("x_t has an active edge the predicted clean state lacks");
      if (n == o) {
        out.set_sym(i, j, n != 0);  // zero-trial bridge: state is pinned
      } else {
        out.set_sym(i, j, rng.bernoulli(r));
      }
    }
  }
  return out;
}

namespace detail {

/// Shared core of the two losses: sum over undirected edges of
/// w * (y - d*log y) with d = (x0 - x_tk) in {0,1}. Diagonal excluded,
/// each undirected edge counted once.
inline double weighted_rate_loss(const RateMatrix& y, const EdgeMatrix& x0, const EdgeMatrix& x_tk,
                                 double weight) {
  if (y.n() != x0.n() || x0.n() != x_tk.n()) throw InvalidArgument("dimension mismatch");
  double total = 0.0;
  for (int i = 0; i < x0.n(); ++i) {
    for (int j = i + 1; j < x0.n(); ++j) {
      if (x_tk(i, j) > x0(i, j)) throw InconsistentStates("x_tk must be a subset of x0");
      const double yi = y(i, j);
      if (!(yi > 0.0)) throw InvalidRate("rates must be strictly positive");
      const double d = static_cast<double>(x0(i, j) - x_tk(i, j));
      total += weight * (yi - d * std::log(yi));
    }
  }
  return total;
}

}  // namespace detail

/// Training loss for one observation interval (t_{k-1}, t_k]: the interval
/// weight (t_k - t_{k-1}) e^{-t_k} times the per-edge rate likelihood term
/// y - d*log y, summed over undirected edges.
inline double loss_full(const RateMatrix& y, const EdgeMatrix& x0, const EdgeMatrix& x_tk, double t_k,
                        double t_km1) {
  if (!(t_km1 < t_k)) throw InvalidArgument("need t_{k-1} < t_k");
  return detail::weighted_rate_loss(y, x0, x_tk, (t_k - t_km1) * std::exp(-t_k));
}

/// Same likelihood term with the time weighting dropped.
inline double loss_simplified(const RateMatrix& y, const EdgeMatrix& x0, const EdgeMatrix& x_tk) {
  return detail::weighted_rate_loss(y, x0, x_tk, 1.0);
}

/// Analytic derivative of loss_full with respect to each undirected edge's
/// rate: w * (1 - d/y). Both triangles carry the undirected derivative.
inline SquareMatrix loss_gradient(const RateMatrix& y, const EdgeMatrix& x0, const EdgeMatrix& x_tk,
                                  double t_k, double t_km1) {
  if (!(t_km1 < t_k)) throw InvalidArgument("need t_{k-1} < t_k");
  if (y.n() != x0.n() || x0.n() != x_tk.n()) throw InvalidArgument("dimension mismatch");
  const double weight = (t_k - t_km1) * std::exp(-t_k);
  SquareMatrix grad(y.n());
  for (int i = 0; i < x0.n(); ++i) {
    for (int j = i + 1; j < x0.n(); ++j) {
      if (x_tk(i, j) > x0(i, j)) throw InconsistentStates("x_tk must be a subset of x0");
      const double yi = y(i, j);
      if (!(yi > 0.0)) throw InvalidRate("rates must be strictly positive");
      const double d = static_cast<double>(x0(i, j) - x_tk(i, j));
      grad.set_sym(i, j, weight * (1.0 - d / yi));
    }
  }
  return grad;
}

/// Frames of one corruption run observed at each schedule time, plus the
/// clean state at t = 0 in front. Markov-chained: frame k+1 is drawn from
/// frame k with survival e^{-(t_{k+1} - t_k)}.
inline std::vector<EdgeMatrix> forward_trajectory(const EdgeMatrix& x0, const Schedule& schedule,
                                                  Rng& rng, const BlackoutConfig& config = {}) {
  validate_schedule(schedule, config);
  std::vector<EdgeMatrix> frames;
  frames.reserve(static_cast<std::size_t>(schedule.K()) + 1);
  frames.push_back(x0);
  double prev_t = 0.0;
  for (int k = 0; k < schedule.K(); ++k) {
    const double dt = schedule.times[k] - prev_t;
    frames.push_back(forward_sample(frames.back(), dt, rng, config));
    prev_t = schedule.times[k];
  }
  return frames;
}

}  // namespace bco
