#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "bco/blackout.hpp"
#include "bco/config.hpp"
#include "bco/errors.hpp"
#include "bco/instance.hpp"
#include "bco/matrix.hpp"
#include "bco/rng.hpp"
#include "bco/schedule.hpp"

namespace bco {

struct DenoiserInput {
  const EdgeMatrix& x_t;
  double t;
  const TspInstance& instance;
};

/// What a predictor must deliver: per-edge expected birth rates toward the
/// clean state (consumed by the bridge reversal) and per-edge clean-state
/// probabilities (consumed by the categorical reversal and by decoding).
struct DenoiserOutput {
  RateMatrix delta_rates;
  ProbHeatmap edge_probs;
};

namespace detail {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// rank_matrix(i, j) = position of edge (i,j) among each endpoint's incident
/// edges by length (0 = shortest), averaged over the two endpoints. Distance
/// ties break by node index, so ranks are deterministic.
inline SquareMatrix edge_rank_matrix(const TspInstance& instance) {
  const int n = instance.n();
  SquareMatrix half_ranks(n);  // half_ranks(u, v) = rank of (u,v) at endpoint u
  std::vector<int> others(static_cast<std::size_t>(n - 1));
  for (int u = 0; u < n; ++u) {
    others.clear();
    for (int v = 0; v < n; ++v)
      if (v != u) others.push_back(v);
    std::sort(others.begin(), others.end(), [&](int a, int b) {
      const double da = instance.distance(u, a);
      const double db = instance.distance(u, b);
      return da < db || (da == db && a < b);
    });
    for (std::size_t pos = 0; pos < others.size(); ++pos)
      half_ranks(u, others[pos]) = static_cast<double>(pos);
  }
  SquareMatrix ranks(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) ranks.set_sym(i, j, 0.5 * (half_ranks(i, j) + half_ranks(j, i)));
  return ranks;
}

}  // namespace detail

/// Sinusoidal time encoding: F/2 wavelengths geometrically spaced from
/// horizon_T/100 to horizon_T, a (sin, cos) pair per wavelength.
inline std::vector<double> time_features(double t, int count, double horizon_T = 15.0) {
  if (count <= 0 || count % 2 != 0) throw InvalidArgument("feature count must be even and positive");
  if (t < 0.0) throw InvalidArgument("time must be nonnegative");
  const int half = count / 2;
  const double lambda_min = 0.01 * horizon_T;
  std::vector<double> features;
  features.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < half; ++j) {
    const double frac = (half == 1) ? 1.0 : static_cast<double>(j) / (half - 1);
    const double lambda = lambda_min * std::pow(horizon_T / lambda_min, frac);
    features.push_back(std::sin(t / lambda));
    features.push_back(std::cos(t / lambda));
  }
  return features;
}

/// Exact predictor for testing: it knows the clean state. Requires the
/// corrupted state to be a subset of it (pure-death consistency).
inline DenoiserOutput oracle_predict(const DenoiserInput& input, const EdgeMatrix& x0_true,
                                     const BlackoutConfig& config = {}) {
  const int n = input.x_t.n();
  if (n != x0_true.n() || n != input.instance.n()) throw InvalidArgument("dimension mismatch");
  DenoiserOutput out{RateMatrix(n, config.epsilon_rate), ProbHeatmap(n)};
  for (int i = 0; i < n; ++i) {
    out.delta_rates(i, i) = config.epsilon_rate;
    for (int j = i + 1; j < n; ++j) {
      if (input.x_t(i, j) > x0_true(i, j))
        throw InconsistentStates("x_t has an active edge the clean state lacks");
      const double delta = static_cast<double>(x0_true(i, j) - input.x_t(i, j));
      out.delta_rates.set_sym(i, j, std::max(config.epsilon_rate, delta));
      out.edge_probs.set_sym(i, j, static_cast<double>(x0_true(i, j)));
    }
  }
  return out;
}

/// Untrained baseline: shorter edges (by incident rank) get higher clean
/// probability through a logistic in the rank, survivors are pinned to 1.
inline DenoiserOutput heuristic_predict(const DenoiserInput& input, double a = 2.0, double b = 1.5,
                                        const BlackoutConfig& config = {}) {
  const int n = input.x_t.n();
  if (n != input.instance.n()) throw InvalidArgument("dimension mismatch");
  const SquareMatrix ranks = detail::edge_rank_matrix(input.instance);
  DenoiserOutput out{RateMatrix(n, config.epsilon_rate), ProbHeatmap(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = input.x_t(i, j) ? 1.0 : detail::sigmoid(a - b * ranks(i, j));
      out.edge_probs.set_sym(i, j, p);
      out.delta_rates.set_sym(i, j,
                              std::min(1.0, std::max(config.epsilon_rate, p - input.x_t(i, j))));
    }
  }
  return out;
}

/// Linear-logistic edge model over {edge length, normalized incident rank,
/// current state, sinusoidal time features}. A stand-in at desk scale for a
/// learned network; the interface is the contract.
struct LinearEdgeModel {
  static constexpr int kBaseFeatures = 3;

  int time_feature_count = 8;  // F, even
  double bias = 0.0;
  std::vector<double> weights;  // kBaseFeatures + F entries

  int feature_count() const { return kBaseFeatures + time_feature_count; }

  static LinearEdgeModel zeros(int F = 8) {
    if (F <= 0 || F % 2 != 0) throw InvalidArgument("F must be even and positive");
    LinearEdgeModel m;
    m.time_feature_count = F;
    m.weights.assign(static_cast<std::size_t>(m.feature_count()), 0.0);
    return m;
  }
};

namespace detail {

/// Feature vector of one undirected edge; symmetric in (i, j) by
/// construction, which is what makes the model permutation equivariant.
inline void edge_features(const TspInstance& instance, const SquareMatrix& ranks, const EdgeMatrix& x_t,
                          const std::vector<double>& tf, int i, int j, std::vector<double>& out) {
  const int n = instance.n();
  out.clear();
  out.push_back(instance.distance(i, j));
  out.push_back(ranks(i, j) / static_cast<double>(n - 2));
  out.push_back(static_cast<double>(x_t(i, j)));
  out.insert(out.end(), tf.begin(), tf.end());
}

}  // namespace detail

inline DenoiserOutput model_predict(const LinearEdgeModel& model, const DenoiserInput& input,
                                    const BlackoutConfig& config = {}) {
  const int n = input.x_t.n();
  if (n != input.instance.n()) throw InvalidArgument("dimension mismatch");
  if (static_cast<int>(model.weights.size()) != model.feature_count())
    throw InvalidArgument("weight vector does not match feature count");
  const SquareMatrix ranks = detail::edge_rank_matrix(input.instance);
  const std::vector<double> tf = time_features(input.t, model.time_feature_count, config.horizon_T);
  DenoiserOutput out{RateMatrix(n, config.epsilon_rate), ProbHeatmap(n)};
  std::vector<double> features;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      detail::edge_features(input.instance, ranks, input.x_t, tf, i, j, features);
      double z = model.bias;
      for (std::size_t f = 0; f < features.size(); ++f) z += model.weights[f] * features[f];
      if (!std::isfinite(z)) throw NumericError("non-finite model score");
      const double sig = detail::sigmoid(z);
      out.delta_rates.set_sym(i, j, std::min(1.0, std::max(config.epsilon_rate, sig)));
      out.edge_probs.set_sym(i, j, std::min(1.0, input.x_t(i, j) + sig));
    }
  }
  return out;
}

/// Pluggable predictor interface. Bridge reversal consumes the full output;
/// the categorical reversal only needs the clean-state probabilities, which
/// carry no pure-death consistency requirement.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual DenoiserOutput predict(const DenoiserInput& input) const = 0;
  virtual ProbHeatmap predict_x0_probs(const DenoiserInput& input) const {
    return predict(input).edge_probs;
  }
};

class OracleDenoiser : public Denoiser {
 public:
  OracleDenoiser(EdgeMatrix x0_true, BlackoutConfig config = {})
      : x0_(std::move(x0_true)), config_(config) {}

  DenoiserOutput predict(const DenoiserInput& input) const override {
    return oracle_predict(input, x0_, config_);
  }

  /// The clean state is known outright, whatever the corrupted state is.
  ProbHeatmap predict_x0_probs(const DenoiserInput& input) const override {
    const int n = x0_.n();
    if (input.x_t.n() != n) throw InvalidArgument("dimension mismatch");
    ProbHeatmap probs(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) probs.set_sym(i, j, static_cast<double>(x0_(i, j)));
    return probs;
  }

 private:
  EdgeMatrix x0_;
  BlackoutConfig config_;
};

class HeuristicDenoiser : public Denoiser {
 public:
  explicit HeuristicDenoiser(double a = 2.0, double b = 1.5, BlackoutConfig config = {})
      : a_(a), b_(b), config_(config) {}

  DenoiserOutput predict(const DenoiserInput& input) const override {
    return heuristic_predict(input, a_, b_, config_);
  }

 private:
  double a_;
  double b_;
  BlackoutConfig config_;
};

class LinearModelDenoiser : public Denoiser {
 public:
  explicit LinearModelDenoiser(LinearEdgeModel model, BlackoutConfig config = {})
      : model_(std::move(model)), config_(config) {}

  DenoiserOutput predict(const DenoiserInput& input) const override {
    return model_predict(model_, input, config_);
  }

  const LinearEdgeModel& model() const { return model_; }

 private:
  LinearEdgeModel model_;
  BlackoutConfig config_;
};

// ---------------------------------------------------------------------------
// Training.
// ---------------------------------------------------------------------------

struct TrainingExample {
  TspInstance instance;
  Tour optimal;
};

struct TrainOptions {
  int epochs = 30;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
};

struct TrainResult {
  LinearEdgeModel model;
  std::vector<double> loss_trace;  // epochs + 1 entries; last is post-training
};

namespace detail {

/// Core of the training loss: one corruption draw against a precomputed
/// rank matrix. Gradient (weights then bias) is optional; the rate clamp
/// contributes zero gradient where it binds.
inline double prepared_loss_and_grad(const LinearEdgeModel& model, const TspInstance& instance,
                                     const SquareMatrix& ranks, const EdgeMatrix& x0,
                                     const EdgeMatrix& x_t, double t_k, double t_km1,
                                     const BlackoutConfig& config, std::vector<double>* grad) {
  if (!(t_km1 < t_k)) throw InvalidArgument("need t_{k-1} < t_k");
  const int n = instance.n();
  const std::vector<double> tf = time_features(t_k, model.time_feature_count, config.horizon_T);
  const double weight = (t_k - t_km1) * std::exp(-t_k);
  const std::size_t param_count = model.weights.size() + 1;
  if (grad) grad->assign(param_count, 0.0);

  double loss = 0.0;
  std::vector<double> features;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (x_t(i, j) > x0(i, j)) throw InconsistentStates("x_t must be a subset of x0");
      detail::edge_features(instance, ranks, x_t, tf, i, j, features);
      double z = model.bias;
      for (std::size_t f = 0; f < features.size(); ++f) z += model.weights[f] * features[f];
      if (!std::isfinite(z)) throw NumericError("non-finite model score");
      const double sig = detail::sigmoid(z);
      const double y = std::min(1.0, std::max(config.epsilon_rate, sig));
      const double d = static_cast<double>(x0(i, j) - x_t(i, j));
      loss += weight * (y - d * std::log(y));
      if (grad) {
        const bool clamped = sig < config.epsilon_rate;
        const double dz = clamped ? 0.0 : weight * (1.0 - d / y) * sig * (1.0 - sig);
        for (std::size_t f = 0; f < features.size(); ++f) (*grad)[f] += dz * features[f];
        (*grad)[param_count - 1] += dz;
      }
    }
  }
  return loss;
}

}  // namespace detail

/// Loss of one corruption draw plus, optionally, its gradient with respect
/// to the model parameters (weights then bias).
inline double sample_loss_and_grad(const LinearEdgeModel& model, const TspInstance& instance,
                                   const EdgeMatrix& x0, const EdgeMatrix& x_t, double t_k,
                                   double t_km1, const BlackoutConfig& config,
                                   std::vector<double>* grad) {
  return detail::prepared_loss_and_grad(model, instance, detail::edge_rank_matrix(instance), x0,
                                        x_t, t_k, t_km1, config, grad);
}

/// Full-batch gradient descent on the interval-weighted rate loss. Each
/// epoch redraws, per example, a uniform schedule index and a fresh
/// corruption of the optimal tour's edge matrix; the mean gradient over the
/// batch drives one update. The reported trace is evaluated on a separate,
/// fixed set of draws so entries are comparable across epochs (entry e is
/// the model before update e; the last entry is the final model).
/// Deterministic for a fixed seed.
inline TrainResult train_model(LinearEdgeModel model, const std::vector<TrainingExample>& data,
                               const Schedule& schedule, const TrainOptions& options = {},
                               const BlackoutConfig& config = {}) {
  if (data.empty()) throw InvalidArgument("training data must not be empty");
  validate_schedule(schedule, config);
  if (static_cast<int>(model.weights.size()) != model.feature_count())
    throw InvalidArgument("weight vector does not match feature count");

  const Rng root(options.seed);
  const std::size_t param_count = model.weights.size() + 1;

  struct Prepared {
    EdgeMatrix x0;
    SquareMatrix ranks;
    // fixed evaluation draw for the loss trace
    EdgeMatrix eval_x_t;
    double eval_t_k;
    double eval_t_km1;
  };
  std::vector<Prepared> prepared;
  prepared.reserve(data.size());
  constexpr std::uint64_t kEvalStream = 0x9000000000000000ULL;
  for (std::size_t s = 0; s < data.size(); ++s) {
    Prepared p{tour_to_edge_matrix(data[s].optimal), detail::edge_rank_matrix(data[s].instance),
               EdgeMatrix(), 0.0, 0.0};
    Rng eval_rng = root.child(kEvalStream + s);
    const int k = eval_rng.uniform_int(schedule.K());
    p.eval_t_k = schedule.times[k];
    p.eval_t_km1 = (k > 0) ? schedule.times[k - 1] : 0.0;
    p.eval_x_t = forward_sample(p.x0, p.eval_t_k, eval_rng, config);
    prepared.push_back(std::move(p));
  }

  const auto eval_loss = [&] {
    double loss_sum = 0.0;
    for (std::size_t s = 0; s < data.size(); ++s)
      loss_sum += detail::prepared_loss_and_grad(model, data[s].instance, prepared[s].ranks,
                                                 prepared[s].x0, prepared[s].eval_x_t,
                                                 prepared[s].eval_t_k, prepared[s].eval_t_km1,
                                                 config, nullptr);
    return loss_sum / static_cast<double>(data.size());
  };

  std::vector<double> grad(param_count, 0.0);
  std::vector<double> sample_grad(param_count, 0.0);
  TrainResult result;
  result.loss_trace.reserve(static_cast<std::size_t>(options.epochs) + 1);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    result.loss_trace.push_back(eval_loss());
    Rng epoch_rng = root.child(static_cast<std::uint64_t>(epoch));
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t s = 0; s < data.size(); ++s) {
      Rng rng = epoch_rng.child(s);
      const int k = rng.uniform_int(schedule.K());
      const double t_k = schedule.times[k];
      const double t_km1 = (k > 0) ? schedule.times[k - 1] : 0.0;
      const EdgeMatrix x_t = forward_sample(prepared[s].x0, t_k, rng, config);
      detail::prepared_loss_and_grad(model, data[s].instance, prepared[s].ranks, prepared[s].x0,
                                     x_t, t_k, t_km1, config, &sample_grad);
      for (std::size_t p = 0; p < param_count; ++p) grad[p] += sample_grad[p];
    }
    const double inv = 1.0 / static_cast<double>(data.size());
    for (std::size_t f = 0; f < model.weights.size(); ++f)
      model.weights[f] -= options.learning_rate * grad[f] * inv;
    model.bias -= options.learning_rate * grad[param_count - 1] * inv;
  }
  result.loss_trace.push_back(eval_loss());
  result.model = std::move(model);
  return result;
}

// ---------------------------------------------------------------------------
// Model file format: line 1 "linear-edge-model v1", line 2 = F, line 3 =
// bias, then one weight per line, 17 significant digits.
// ---------------------------------------------------------------------------

inline void save_model(const LinearEdgeModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  char buf[48];
  out << "linear-edge-model v1\n" << model.time_feature_count << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", model.bias);
  out << buf << "\n";
  for (double w : model.weights) {
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    out << buf << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

inline LinearEdgeModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string header;
  if (!std::getline(in, header) || header != "linear-edge-model v1")
    throw ParseError("bad model header", 1);
  LinearEdgeModel model;
  if (!(in >> model.time_feature_count) || model.time_feature_count <= 0 ||
      model.time_feature_count % 2 != 0)
    throw ParseError("bad feature count", 2);
  if (!(in >> model.bias)) throw ParseError("bad bias", 3);
  model.weights.resize(static_cast<std::size_t>(model.feature_count()));
  for (std::size_t f = 0; f < model.weights.size(); ++f) {
    if (!(in >> model.weights[f])) throw ParseError("missing weight", 4 + static_cast<int>(f));
  }
  return model;
}

}  // namespace bco
