// Copyright 2026 The bs4nn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bs4nn/learning.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bs4nn/errors.hpp"
#include "bs4nn/evaluation.hpp"
#include "bs4nn/rng.hpp"

namespace bs4nn {

namespace {

constexpr double kDeltaNormEps = 1e-12;
constexpr float kAlphaFloor = 1e-6f;

void check_same_size(const char* what, Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw StructuralError(std::string(what) + ": size mismatch " +
                          std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

void validate_config(const TrainConfig& cfg, int num_weight_layers) {
  if (!(cfg.eta > 0.0)) throw ConfigError("config: eta must be > 0");
  if (!(cfg.mu > 0.0)) throw ConfigError("config: mu must be > 0");
  if (cfg.gamma < 1) throw ConfigError("config: gamma must be >= 1");
  if (cfg.lambda < 0.0) throw ConfigError("config: lambda must be >= 0");
  if (cfg.epochs < 0) throw ConfigError("config: epochs must be >= 0");
  if (cfg.decay.fraction < 0.0 || cfg.decay.fraction >= 1.0) {
    throw ConfigError("config: decay fraction must lie in [0, 1)");
  }
  if (cfg.decay.every_epochs < 1) {
    throw ConfigError("config: decay period must be >= 1 epoch");
  }
  if (cfg.t_max < 1) throw ConfigError("config: t_max must be >= 1");
  if (static_cast<int>(cfg.layer_inits.size()) != num_weight_layers) {
    throw ConfigError("config: " + std::to_string(cfg.layer_inits.size()) +
                      " layer inits for " + std::to_string(num_weight_layers) +
                      " layers");
  }
  for (const LayerInit& init : cfg.layer_inits) {
    if (init.w_low > init.w_high) {
      throw ConfigError("config: weight init range low > high");
    }
    if (!(init.alpha > 0.0f)) throw ConfigError("config: alpha must be > 0");
    if (!(init.theta > 0.0f)) throw ConfigError("config: theta must be > 0");
  }
}

VectorXi compute_targets(const SpikeTimes& output_times, int label, int gamma) {
  const int n = output_times.size();
  if (label < 0 || label >= n) {
    throw StructuralError("compute_targets: label " + std::to_string(label) +
                          " outside [0, " + std::to_string(n) + ")");
  }
  const int t_max = output_times.t_max;
  const int tau = output_times.times.minCoeff();
  VectorXi targets(n);
  for (int j = 0; j < n; ++j) {
    if (j == label) {
      targets[j] = std::max(tau - gamma, 0);
    } else if (output_times.times[j] < tau + gamma) {
      targets[j] = std::min(tau + gamma, t_max);
    } else {
      targets[j] = output_times.times[j];
    }
  }
  return targets;
}

VectorXd compute_errors(const SpikeTimes& actual, const VectorXi& targets) {
  check_same_size("compute_errors", actual.times.size(), targets.size());
  return (targets - actual.times).cast<double>() / actual.t_max;
}

double compute_loss(const VectorXd& errors, const Network& net, double lambda) {
  double loss = 0.5 * errors.squaredNorm();
  if (lambda != 0.0) {
    double weight_norm = 0.0;
    for (const Layer& layer : net.layers) {
      weight_norm += layer.weights.cast<double>().squaredNorm();
    }
    loss += lambda * weight_norm;
  }
  return loss;
}

VectorXd output_deltas(const VectorXd& errors, int t_max) {
  return -errors / t_max;
}

VectorXd hidden_deltas(const VectorXd& delta_next, const Layer& next_layer,
                       const SpikeTimes& times_pre,
                       const SpikeTimes& times_post) {
  check_same_size("hidden_deltas: delta", delta_next.size(),
                  next_layer.weights.rows());
  check_same_size("hidden_deltas: pre times", times_pre.times.size(),
                  next_layer.weights.cols());
  check_same_size("hidden_deltas: post times", times_post.times.size(),
                  next_layer.weights.rows());
  const auto post_times = times_post.times.array();
  const int pre = static_cast<int>(times_pre.times.size());
  VectorXd delta(pre);
  for (int j = 0; j < pre; ++j) {
    delta[j] = (delta_next.array() *
                next_layer.weights.col(j).cast<double>().array() *
                (post_times >= times_pre.times[j]).cast<double>())
                   .sum();
  }
  return delta;
}

VectorXd normalize_deltas(VectorXd delta) {
  const double l1 = delta.cwiseAbs().sum();
  if (l1 >= kDeltaNormEps) {
    delta /= l1;
  }
  return delta;
}

MatrixXd weight_gradients(const VectorXd& delta, float alpha,
                          const SpikeTimes& times_pre,
                          const SpikeTimes& times_post) {
  check_same_size("weight_gradients", delta.size(), times_post.times.size());
  const int post = static_cast<int>(delta.size());
  const int pre = static_cast<int>(times_pre.times.size());
  const auto post_times = times_post.times.array();
  const VectorXd scaled = -static_cast<double>(alpha) * delta;
  MatrixXd grad(post, pre);
  for (int i = 0; i < pre; ++i) {
    grad.col(i) =
        scaled.array() * (post_times >= times_pre.times[i]).cast<double>();
  }
  return grad;
}

double alpha_gradient(const VectorXd& delta, const Layer& layer,
                      const SpikeTimes& times_pre,
                      const SpikeTimes& times_post) {
  check_same_size("alpha_gradient: delta", delta.size(), layer.weights.rows());
  check_same_size("alpha_gradient: pre times", times_pre.times.size(),
                  layer.weights.cols());
  check_same_size("alpha_gradient: post times", times_post.times.size(),
                  layer.weights.rows());
  const auto post_times = times_post.times.array();
  const int pre = static_cast<int>(times_pre.times.size());
  // causal[j] accumulates sum_i sign(w_ji) * [t_i <= t_j], column by column.
  VectorXi causal = VectorXi::Zero(delta.size());
  for (int i = 0; i < pre; ++i) {
    causal.array() +=
        ((layer.weights.col(i).array() >= 0.0f).cast<int>() * 2 - 1) *
        (post_times >= times_pre.times[i]).cast<int>();
  }
  return -delta.dot(causal.cast<double>());
}

void apply_updates(Network& net, const Gradients& grads,
                   const TrainConfig& cfg) {
  check_same_size("apply_updates", static_cast<Eigen::Index>(grads.weight.size()),
                  static_cast<Eigen::Index>(net.layers.size()));
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Layer& layer = net.layers[l];
    const MatrixXd& g = grads.weight[l];
    if (!g.allFinite() || !std::isfinite(grads.alpha[l])) {
      throw NumericError("apply_updates: non-finite gradient in layer " +
                         std::to_string(l));
    }
    // W - eta * (g + 2 lambda W) = (1 - 2 eta lambda) W - eta g, fused into
    // one elementwise pass.
    const double keep = 1.0 - 2.0 * cfg.eta * cfg.lambda;
    layer.weights =
        (keep * layer.weights.cast<double>() - cfg.eta * g).cast<float>();
    if (!layer.weights.allFinite()) {
      throw NumericError("apply_updates: weights diverged in layer " +
                         std::to_string(l));
    }
    double a = static_cast<double>(layer.alpha) - cfg.mu * grads.alpha[l];
    layer.alpha = std::max(static_cast<float>(a), kAlphaFloor);
  }
}

TrainStepResult train_step(Network& net, const SpikeTimes& input, int label,
                           const TrainConfig& cfg) {
  const ForwardTrace trace = network_forward(net, input, /*training_mode=*/true);
  const int num_layers = static_cast<int>(net.layers.size());
  const SpikeTimes& output_times = trace.layers.back().times;

  const VectorXi targets = compute_targets(output_times, label, cfg.gamma);
  const VectorXd errors = compute_errors(output_times, targets);

  TrainStepResult result;
  result.loss = compute_loss(errors, net, cfg.lambda);
  const Decision decision = classify(trace);
  result.predicted = decision.category;
  result.decision_time = decision.decision_time;

  Gradients grads;
  grads.weight.resize(num_layers);
  grads.alpha.resize(num_layers);
  grads.delta.resize(num_layers);

  VectorXd delta = normalize_deltas(output_deltas(errors, net.t_max));
  for (int l = num_layers - 1; l >= 0; --l) {
    const SpikeTimes& times_pre = l == 0 ? input : trace.layers[l - 1].times;
    const SpikeTimes& times_post = trace.layers[l].times;
    grads.delta[l] = delta;
    grads.weight[l] =
        weight_gradients(delta, net.layers[l].alpha, times_pre, times_post);
    grads.alpha[l] = alpha_gradient(delta, net.layers[l], times_pre, times_post);
    if (l > 0) {
      delta = normalize_deltas(
          hidden_deltas(delta, net.layers[l], times_pre, times_post));
    }
  }

  apply_updates(net, grads, cfg);
  return result;
}

std::vector<EpochStats> fit(Network& net, const LabeledDataset& train,
                            const TrainConfig& cfg, const LabeledDataset* test,
                            const EpochCallback& on_epoch, int eval_threads) {
  validate_network(net);
  validate_config(cfg, static_cast<int>(net.layers.size()));
  if (train.size() == 0) {
    throw ConfigError("fit: empty training set");
  }

  TrainConfig working = cfg;
  Rng rng(derive_seed(cfg.seed, kSeedStreamFit));
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<EpochStats> history;
  history.reserve(cfg.epochs);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (epoch > 1 && (epoch - 1) % cfg.decay.every_epochs == 0) {
      working.eta *= 1.0 - cfg.decay.fraction;
      working.mu *= 1.0 - cfg.decay.fraction;
    }
    const auto start = std::chrono::steady_clock::now();
    rng.shuffle(order);
    double loss_sum = 0.0;
    long correct = 0;
    for (int idx : order) {
      const SpikeTimes input = encode_image(train.images[idx], net.t_max);
      const TrainStepResult step =
          train_step(net, input, train.labels[idx], working);
      loss_sum += step.loss;
      correct += step.predicted == train.labels[idx] ? 1 : 0;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / train.size();
    stats.train_accuracy = static_cast<double>(correct) / train.size();
    stats.eta = working.eta;
    stats.mu = working.mu;
    if (test != nullptr && test->size() > 0) {
      stats.test_accuracy = accuracy(net, *test, eval_threads);
    }
    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return history;
}

Network init_network(const std::vector<int>& arch, const TrainConfig& cfg) {
  if (arch.size() < 2) {
    throw ConfigError("init_network: need at least input and output widths");
  }
  for (int width : arch) {
    if (width < 1) throw ConfigError("init_network: layer width must be >= 1");
  }
  validate_config(cfg, static_cast<int>(arch.size()) - 1);

  Rng rng(derive_seed(cfg.seed, kSeedStreamInit));
  Network net;
  net.t_max = cfg.t_max;
  net.layers.resize(arch.size() - 1);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const LayerInit& init = cfg.layer_inits[l];
    Layer& layer = net.layers[l];
    layer.weights.resize(arch[l + 1], arch[l]);
    for (int j = 0; j < layer.weights.rows(); ++j) {
      for (int i = 0; i < layer.weights.cols(); ++i) {
        layer.weights(j, i) =
            static_cast<float>(rng.uniform(init.w_low, init.w_high));
      }
    }
    layer.alpha = init.alpha;
    layer.theta = init.theta;
  }
  validate_network(net);
  return net;
}

Preset preset_mnist() {
  Preset p;
  p.name = "mnist";
  p.hidden = {600};
  p.config.eta = 0.1;
  p.config.mu = 0.01;
  p.config.gamma = 1;
  p.config.lambda = 1e-6;
  p.config.epochs = 100;
  p.config.t_max = 256;
  p.config.layer_inits = {
      {0.0, 5.0, 5.0f, 100.0f},   // input -> hidden
      {0.0, 50.0, 5.0f, 100.0f},  // hidden -> output
  };
  return p;
}

Preset preset_fashion() {
  Preset p;
  p.name = "fashion";
  p.hidden = {1000};
  p.config.eta = 0.1;
  p.config.mu = 0.01;
  p.config.gamma = 1;
  p.config.lambda = 1e-6;
  p.config.epochs = 100;
  p.config.t_max = 256;
  p.config.layer_inits = {
      {0.0, 1.0, 5.0f, 700.0f},
      {0.0, 1.0, 10.0f, 700.0f},
  };
  return p;
}

Preset preset_fashion_deep() {
  Preset p;
  p.name = "fashion-deep";
  p.hidden = {600, 600};
  p.config.eta = 0.1;
  p.config.mu = 0.01;
  p.config.gamma = 1;
  p.config.lambda = 1e-6;
  p.config.epochs = 100;
  p.config.t_max = 256;
  p.config.layer_inits = {
      {-10.0, 10.0, 10.0f, 500.0f},
      {-10.0, 10.0, 10.0f, 500.0f},
      {-10.0, 10.0, 10.0f, 500.0f},
  };
  return p;
}

}  // namespace bs4nn
