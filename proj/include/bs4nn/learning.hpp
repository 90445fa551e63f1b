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

#ifndef BS4NN_LEARNING_HPP_
#define BS4NN_LEARNING_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bs4nn/data.hpp"
#include "bs4nn/network.hpp"

namespace bs4nn {

// Per-layer initialization: proxy weights drawn uniformly from
// [w_low, w_high), plus the initial scaling factor and threshold.
struct LayerInit {
  double w_low = 0.0;
  double w_high = 1.0;
  float alpha = 1.0f;
  float theta = 1.0f;
};

struct DecaySchedule {
  double fraction = 0.30;  // eta and mu shrink by this fraction...
  int every_epochs = 10;   // ...once per this many epochs
};

struct TrainConfig {
  double eta = 0.1;      // weight learning rate
  double mu = 0.01;      // scaling-factor learning rate
  int gamma = 1;         // target margin, in time steps
  double lambda = 1e-6;  // L2 coefficient on the proxy weights
  int epochs = 100;
  DecaySchedule decay;
  std::uint64_t seed = 0;
  int t_max = 256;
  std::vector<LayerInit> layer_inits;  // one per non-input layer
};

void validate_config(const TrainConfig& cfg, int num_weight_layers);

// Target firing times from the observed output times (Eq. style:
// tau = min time; the labeled neuron is pulled gamma steps before tau, every
// other neuron is pushed to at least tau + gamma). Both ends are clamped into
// [0, t_max]; with the upper clamp, the all-silent case (tau == t_max) reduces
// to T_label = t_max - gamma and T_other = t_max.
VectorXi compute_targets(const SpikeTimes& output_times, int label, int gamma);

// e_j = (T_j - t_j) / t_max.
VectorXd compute_errors(const SpikeTimes& actual, const VectorXi& targets);

// L = 1/2 sum e_j^2 + lambda * sum over all proxy weights squared.
double compute_loss(const VectorXd& errors, const Network& net, double lambda);

// Output-layer deltas: delta_j = -e_j / t_max.
VectorXd output_deltas(const VectorXd& errors, int t_max);

// Backpropagated deltas for the presynaptic side of `next_layer`:
//   delta_j = sum_k delta_next_k * W_kj * [t_j <= t_k]
// using the real-valued proxies in place of the scaled binary weights.
VectorXd hidden_deltas(const VectorXd& delta_next, const Layer& next_layer,
                       const SpikeTimes& times_pre,
                       const SpikeTimes& times_post);

// Scales the vector to unit L1 norm. Vectors with L1 norm below 1e-12 are
// returned unchanged.
VectorXd normalize_deltas(VectorXd delta);

// dL/dW_ji = dL/dB_ji = -alpha * delta_j if t_i <= t_j else 0. The
// straight-through estimator passes the binary-weight gradient to the proxy
// unchanged, so this one matrix serves both.
MatrixXd weight_gradients(const VectorXd& delta, float alpha,
                          const SpikeTimes& times_pre,
                          const SpikeTimes& times_post);

// dL/dalpha = -sum_j delta_j * sum_i sign(w_ji) * [t_i <= t_j].
double alpha_gradient(const VectorXd& delta, const Layer& layer,
                      const SpikeTimes& times_pre,
                      const SpikeTimes& times_post);

struct Gradients {
  std::vector<MatrixXd> weight;  // dL/dW per layer
  std::vector<double> alpha;     // dL/dalpha per layer
  std::vector<VectorXd> delta;   // normalized deltas per layer
};

// SGD step: W <- W - eta * (dL/dW + 2 * lambda * W); alpha <- alpha - mu *
// dL/dalpha, floored at 1e-6 to stay positive. Throws NumericError when a
// gradient or an updated weight is non-finite.
void apply_updates(Network& net, const Gradients& grads,
                   const TrainConfig& cfg);

struct TrainStepResult {
  double loss = 0.0;  // pre-update loss, including the L2 term
  int predicted = 0;
  int decision_time = 0;
};

// One online update: forward in training mode, targets, errors, loss, deltas
// (each layer's deltas are normalized before they feed that layer's gradients
// and the backpropagation to the previous layer), gradients, update.
TrainStepResult train_step(Network& net, const SpikeTimes& input, int label,
                           const TrainConfig& cfg);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = -1.0;  // negative when no test set was given
  double eta = 0.0;
  double mu = 0.0;
  double wall_seconds = 0.0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Online SGD over the dataset: per-epoch seeded shuffle, one train_step per
// sample, eta and mu multiplied by (1 - decay.fraction) every
// decay.every_epochs epochs. Images are encoded with the network's t_max.
// When `test` is non-null the test accuracy is evaluated after every epoch
// (read-only, parallelized over eval_threads).
std::vector<EpochStats> fit(Network& net, const LabeledDataset& train,
                            const TrainConfig& cfg,
                            const LabeledDataset* test = nullptr,
                            const EpochCallback& on_epoch = {},
                            int eval_threads = 1);

// Fresh network: weights drawn from the per-layer configured ranges with the
// generator seeded from cfg.seed, alpha and theta set from the config.
// `arch` lists every layer width including input and output.
Network init_network(const std::vector<int>& arch, const TrainConfig& cfg);

// Canned experiment setups (architecture hidden widths + full TrainConfig).
struct Preset {
  std::string name;
  std::vector<int> hidden;
  TrainConfig config;
};

Preset preset_mnist();
Preset preset_fashion();
Preset preset_fashion_deep();

}  // namespace bs4nn

#endif  // BS4NN_LEARNING_HPP_
