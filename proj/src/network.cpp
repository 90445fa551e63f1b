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

#include "bs4nn/network.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace bs4nn {

void validate_layer(const Layer& layer) {
  if (!(layer.alpha > 0.0f)) {
    throw StructuralError("layer: alpha must be > 0");
  }
  if (!(layer.theta > 0.0f)) {
    throw StructuralError("layer: theta must be > 0");
  }
  if (!layer.weights.allFinite()) {
    throw NumericError("layer: non-finite weight");
  }
  if (layer.weights.rows() < 1 || layer.weights.cols() < 1) {
    throw StructuralError("layer: empty weight matrix");
  }
}

void validate_network(const Network& net) {
  if (net.layers.empty()) {
    throw StructuralError("network: no layers");
  }
  if (net.t_max < 1) {
    throw StructuralError("network: t_max must be >= 1");
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    validate_layer(net.layers[l]);
    if (l > 0 && net.layers[l].fan_in() != net.layers[l - 1].fan_out()) {
      throw StructuralError("network: layer " + std::to_string(l) +
                            " fan-in " + std::to_string(net.layers[l].fan_in()) +
                            " != previous fan-out " +
                            std::to_string(net.layers[l - 1].fan_out()));
    }
  }
}

BinarizedLayer make_binarized(const Layer& layer) {
  BinarizedLayer out;
  out.signs = layer.weights.unaryExpr(
      [](float w) { return w >= 0.0f ? 1 : -1; });
  out.alpha = layer.alpha;
  out.theta = layer.theta;
  return out;
}

int min_crossing_count(float alpha, float theta, int fan_in) {
  if (!(alpha > 0.0f)) {
    throw StructuralError("min_crossing_count: alpha must be > 0");
  }
  const double a = alpha;
  const double th = theta;
  const double q = th / a;
  if (q > static_cast<double>(fan_in) + 1.0) {
    return fan_in + 1;
  }
  long long c = static_cast<long long>(std::ceil(q));
  if (c < -fan_in) c = -fan_in;
  // ceil() can land one off after the division rounding; the products below
  // are exact, so these fixups make c the true minimum. Counts never leave
  // [-fan_in, fan_in], so c is clamped to that range.
  while (a * static_cast<double>(c) < th) ++c;
  while (c > -fan_in && a * static_cast<double>(c - 1) >= th) --c;
  if (c > fan_in) return fan_in + 1;
  return static_cast<int>(c);
}

namespace {

// Counting sort of spike indices by time step. offsets has t_max + 2 entries;
// indices firing at step t occupy order[offsets[t] .. offsets[t+1]).
void bucket_by_time(const VectorXi& times, int t_max, std::vector<int>& order,
                    std::vector<int>& offsets) {
  const int n = static_cast<int>(times.size());
  offsets.assign(static_cast<std::size_t>(t_max) + 2, 0);
  for (int i = 0; i < n; ++i) ++offsets[times[i] + 1];
  for (int t = 0; t <= t_max; ++t) offsets[t + 1] += offsets[t];
  order.resize(n);
  std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
  for (int i = 0; i < n; ++i) order[cursor[times[i]]++] = i;
}

}  // namespace

LayerResult layer_forward(const SpikeTimes& input, const BinarizedLayer& layer) {
  validate_spike_times(input);
  const int pre = static_cast<int>(layer.signs.cols());
  const int post = static_cast<int>(layer.signs.rows());
  if (input.size() != pre) {
    throw StructuralError("layer_forward: input size " +
                          std::to_string(input.size()) + " != fan-in " +
                          std::to_string(pre));
  }
  const int t_max = input.t_max;

  std::vector<int> order, offsets;
  bucket_by_time(input.times, t_max, order, offsets);

  LayerResult result;
  result.times.t_max = t_max;
  result.times.times = VectorXi::Constant(post, t_max);
  result.fired.assign(post, 0);
  VectorXi counts = VectorXi::Zero(post);

  const int c_min = min_crossing_count(layer.alpha, layer.theta, pre);
  std::vector<int> remaining(post);
  for (int j = 0; j < post; ++j) remaining[j] = j;

  for (int t = 0; t <= t_max; ++t) {
    const int begin = offsets[t];
    const int end = offsets[t + 1];
    // Potentials only move at steps with arrivals; step 0 is always checked
    // because the initial count 0 already crosses when theta <= 0.
    if (begin == end && t != 0) continue;
    for (int k = begin; k < end; ++k) {
      counts += layer.signs.col(order[k]);
    }
    if (!remaining.empty()) {
      std::size_t kept = 0;
      for (std::size_t r = 0; r < remaining.size(); ++r) {
        const int j = remaining[r];
        if (counts[j] >= c_min) {
          result.times.times[j] = t;
          result.fired[j] = 1;
        } else {
          remaining[kept++] = j;
        }
      }
      remaining.resize(kept);
    }
  }

  result.final_counts = std::move(counts);
  return result;
}

namespace {

// Shape and parameter checks cheap enough for the per-sample path. Weight
// finiteness is an invariant maintained at construction, load, and update
// time, so it is not re-verified here.
void check_layer_params(const Layer& layer) {
  if (!(layer.alpha > 0.0f) || !(layer.theta > 0.0f)) {
    throw StructuralError("layer: alpha and theta must be > 0");
  }
  if (layer.weights.rows() < 1 || layer.weights.cols() < 1) {
    throw StructuralError("layer: empty weight matrix");
  }
}

}  // namespace

LayerResult layer_forward(const SpikeTimes& input, const Layer& layer) {
  check_layer_params(layer);
  return layer_forward(input, make_binarized(layer));
}

LayerResult layer_forward_dense(const SpikeTimes& input, const Layer& layer) {
  validate_layer(layer);
  validate_spike_times(input);
  const int pre = layer.fan_in();
  const int post = layer.fan_out();
  if (input.size() != pre) {
    throw StructuralError("layer_forward_dense: input size " +
                          std::to_string(input.size()) + " != fan-in " +
                          std::to_string(pre));
  }
  const int t_max = input.t_max;
  const double alpha = layer.alpha;
  const double theta = layer.theta;

  LayerResult result;
  result.times.t_max = t_max;
  result.times.times = VectorXi::Constant(post, t_max);
  result.fired.assign(post, 0);
  result.final_counts = VectorXi::Zero(post);

  for (int t = 0; t <= t_max; ++t) {
    for (int i = 0; i < pre; ++i) {
      if (input.times[i] != t) continue;
      for (int j = 0; j < post; ++j) {
        result.final_counts[j] += layer.weights(j, i) >= 0.0f ? 1 : -1;
      }
    }
    for (int j = 0; j < post; ++j) {
      if (!result.fired[j] &&
          alpha * static_cast<double>(result.final_counts[j]) >= theta) {
        result.fired[j] = 1;
        result.times.times[j] = t;
      }
    }
  }
  return result;
}

ForwardTrace network_forward(const Network& net, const SpikeTimes& input,
                             bool training_mode) {
  (void)training_mode;  // both modes compute the canonical full trace
  if (net.layers.empty() || net.t_max < 1) {
    throw StructuralError("network_forward: empty network");
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    check_layer_params(net.layers[l]);
    if (l > 0 && net.layers[l].fan_in() != net.layers[l - 1].fan_out()) {
      throw StructuralError("network_forward: layer dimension mismatch");
    }
  }
  if (input.t_max != net.t_max) {
    throw StructuralError("network_forward: input t_max " +
                          std::to_string(input.t_max) + " != network t_max " +
                          std::to_string(net.t_max));
  }
  if (input.size() != net.input_size()) {
    throw StructuralError("network_forward: input size " +
                          std::to_string(input.size()) + " != first layer fan-in " +
                          std::to_string(net.input_size()));
  }

  ForwardTrace trace;
  trace.t_max = net.t_max;
  trace.layers.reserve(net.layers.size());
  const SpikeTimes* current = &input;
  for (const Layer& layer : net.layers) {
    trace.layers.push_back(layer_forward(*current, layer));
    current = &trace.layers.back().times;
  }
  trace.decision_time = trace.layers.back().times.times.minCoeff();
  return trace;
}

Decision classify(const ForwardTrace& trace) {
  const LayerResult& out = trace.layers.back();
  const int n = static_cast<int>(out.times.times.size());
  int best_time = out.times.times[0];
  for (int j = 1; j < n; ++j) best_time = std::min(best_time, out.times.times[j]);

  bool any_minimal_fired = false;
  for (int j = 0; j < n; ++j) {
    if (out.times.times[j] == best_time && out.fired[j]) {
      any_minimal_fired = true;
      break;
    }
  }

  Decision d;
  d.decision_time = best_time;
  if (best_time == trace.t_max && !any_minimal_fired) {
    // No real output spike: highest final potential alpha * c_j decides.
    int best = 0;
    for (int j = 1; j < n; ++j) {
      if (out.final_counts[j] > out.final_counts[best]) best = j;
    }
    d.category = best;
  } else {
    for (int j = 0; j < n; ++j) {
      if (out.times.times[j] == best_time) {
        d.category = j;
        break;
      }
    }
  }
  return d;
}

}  // namespace bs4nn
