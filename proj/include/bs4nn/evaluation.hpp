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

#ifndef BS4NN_EVALUATION_HPP_
#define BS4NN_EVALUATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "bs4nn/data.hpp"
#include "bs4nn/network.hpp"

namespace bs4nn {

// Aggregated test-set measurements. All tallies are integer sums internally,
// so results are identical for any thread count.
struct EvalReport {
  double accuracy = 0.0;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>
      confusion;                 // row = true class, column = predicted
  Eigen::MatrixXd mean_firing_time;  // output neuron (row) x true class (col)
  double mean_decision_time = 0.0;
  VectorXd mean_decision_time_per_class;
  VectorXd mean_input_spikes;   // per true class, spikes until decision
  VectorXd mean_hidden_spikes;  // per true class, all hidden layers combined
  VectorXd mean_total_spikes;   // input + hidden
  int samples = 0;
};

// Full test pass: per-sample forward, decision by first output spike (with
// max-potential fallback), spike tallies counting every real input or hidden
// spike with time <= decision_time. Fake spikes never count.
EvalReport evaluate(const Network& net, const LabeledDataset& dataset,
                    int threads = 1);

// Plain accuracy, cheaper bookkeeping than evaluate().
double accuracy(const Network& net, const LabeledDataset& dataset,
                int threads = 1);

// Accuracy under pixel jitter: for each level J, every test image is
// perturbed once with uniform noise in [-J*max_intensity, +J*max_intensity]
// (per-image streams derived from `seed`, so results do not depend on thread
// count), re-encoded, and classified.
std::vector<double> noise_robustness(const Network& net,
                                     const LabeledDataset& dataset,
                                     const std::vector<double>& levels,
                                     std::uint64_t seed, int threads = 1);

struct SweepPoint {
  float theta = 0.0f;
  double accuracy = 0.0;
  double mean_response_time = 0.0;  // mean first-output-spike step (or t_max)
};

// Speed-accuracy trade-off: every neuron's threshold is overridden by each
// value in turn (the stored network is untouched) and the dataset is
// re-evaluated. theta = 0 is allowed here and makes every neuron fire at its
// first non-negative potential.
std::vector<SweepPoint> threshold_sweep(const Network& net,
                                        const LabeledDataset& dataset,
                                        const std::vector<float>& thetas,
                                        int threads = 1);

// Membrane potential alpha * c_j(t) of every output neuron for t = 0..t_max.
// Returns a (num_classes x t_max+1) matrix; each row is a step function that
// keeps integrating past the neuron's own firing time.
MatrixXf membrane_trace(const Network& net, const SpikeTimes& input);

struct WeightStats {
  std::vector<double> positive_fraction;  // count(w >= 0) / count, per layer
};

WeightStats weight_stats(const Network& net);

// Writes per-neuron weight reconstructions for the first hidden layer as
// binary portable graymaps: real_<n>.pgm (min-max scaled to 0..255) and
// binary_<n>.pgm (sign map, 0 or 255). The layer fan-in must equal
// width * height.
void export_weight_maps(const Network& net, int width, int height,
                        const std::string& directory,
                        const std::vector<int>& neuron_indices);

// Accuracy when the scaled binary weights are replaced by the real-valued
// proxies: the forward pass accumulates floats instead of integer counts,
// same firing rule, same readout. Throws UnsupportedError when
// proxies_present is false (deployment models carry no proxies).
double proxy_inference_check(const Network& net, const LabeledDataset& dataset,
                             bool proxies_present = true, int threads = 1);

}  // namespace bs4nn

#endif  // BS4NN_EVALUATION_HPP_
