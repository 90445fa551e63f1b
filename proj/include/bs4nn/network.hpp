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

#ifndef BS4NN_NETWORK_HPP_
#define BS4NN_NETWORK_HPP_

#include <cstdint>
#include <vector>

#include "bs4nn/encoding.hpp"
#include "bs4nn/errors.hpp"
#include "bs4nn/types.hpp"

namespace bs4nn {

// One fully connected layer of single-spike integrate-and-fire neurons.
// `weights` holds the real-valued proxies (postsynaptic x presynaptic); the
// binary weights used in the forward pass are always sign(weights) and are
// derived on demand, never stored, so they cannot go stale.
struct Layer {
  MatrixXf weights;
  float alpha = 1.0f;  // scaling factor applied to every binary synapse
  float theta = 1.0f;  // firing threshold

  int fan_in() const { return static_cast<int>(weights.cols()); }
  int fan_out() const { return static_cast<int>(weights.rows()); }
};

struct Network {
  std::vector<Layer> layers;
  int t_max = 0;

  int input_size() const { return layers.empty() ? 0 : layers.front().fan_in(); }
  int num_classes() const { return layers.empty() ? 0 : layers.back().fan_out(); }
};

// Throws unless alpha > 0, theta > 0 and all weights are finite.
void validate_layer(const Layer& layer);
// Validates every layer plus dimension chaining and t_max >= 1.
void validate_network(const Network& net);

// Elementwise sign with the total tie rule sign(0) = +1. Returns a matrix of
// +1/-1 in the scalar type of the input. Throws NumericError on non-finite
// entries.
template <typename Derived>
typename Derived::PlainObject binarize(const Eigen::MatrixBase<Derived>& w) {
  if (!w.allFinite()) {
    throw NumericError("binarize: non-finite weight entry");
  }
  using Scalar = typename Derived::Scalar;
  return w.unaryExpr(
      [](Scalar v) { return v >= Scalar(0) ? Scalar(1) : Scalar(-1); });
}

// Result of simulating one layer over steps 0..t_max.
//   times:        first-crossing step per neuron, t_max for neurons that never
//                 crossed (the fake spike).
//   fired:        1 where the threshold was actually crossed, 0 for fakes.
//   final_counts: net spike count per neuron after all input spikes arrived,
//                 i.e. sum_i sign(w_ji); the final membrane potential is
//                 alpha * final_counts.
struct LayerResult {
  SpikeTimes times;
  std::vector<std::uint8_t> fired;
  VectorXi final_counts;
};

// A layer lowered to the representation the simulator consumes: the sign
// matrix as column-major int so a presynaptic neuron's fan-out is contiguous.
struct BinarizedLayer {
  MatrixXi signs;  // post x pre, entries +1/-1
  float alpha = 1.0f;
  float theta = 1.0f;
};

BinarizedLayer make_binarized(const Layer& layer);

// Smallest integer count c with alpha * c >= theta, computed exactly (the
// products are exact in double for |c| <= 2^24). Returns fan_in + 1 when no
// reachable count can cross.
int min_crossing_count(float alpha, float theta, int fan_in);

// Event-driven forward pass for one layer: presynaptic spikes are bucketed by
// time step, an integer net counter is maintained per neuron, and each neuron
// fires at the first step where alpha * count >= theta. A spike arriving at
// step t is integrated at step t, so same-step causality is t_pre <= t_post.
LayerResult layer_forward(const SpikeTimes& input, const Layer& layer);
LayerResult layer_forward(const SpikeTimes& input, const BinarizedLayer& layer);

// Differential-testing twin of layer_forward: iterates literally over every
// time step and every synapse. Same observable contract, same exact
// alpha * (integer count) potential representation, so the two paths must
// agree bit-for-bit. Kept deliberately naive and textually independent of the
// event-driven path.
LayerResult layer_forward_dense(const SpikeTimes& input, const Layer& layer);

struct ForwardTrace {
  std::vector<LayerResult> layers;  // one entry per non-input layer
  int decision_time = 0;            // first output spike step, or t_max
  int t_max = 0;
};

// Runs all layers in order. Every neuron receives a recorded firing time:
// real crossings keep their step, silent neurons get the fake spike at t_max,
// and fake spikes propagate downstream (they contribute to the final
// potentials read by the fallback). Training mode and test mode produce the
// same trace; test mode merely permits stopping after the first output spike,
// which this implementation does not need since later events never change any
// value recorded at or before the decision time.
ForwardTrace network_forward(const Network& net, const SpikeTimes& input,
                             bool training_mode);

struct Decision {
  int category = 0;
  int decision_time = 0;
};

// First output spike wins (argmin of firing times, ties to the lowest index).
// When the earliest time is t_max and no minimal neuron actually fired, the
// decision falls back to the maximum final potential alpha * c_j, which with a
// layer-shared alpha is the maximum final net count.
Decision classify(const ForwardTrace& trace);

}  // namespace bs4nn

#endif  // BS4NN_NETWORK_HPP_
