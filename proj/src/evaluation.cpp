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

#include "bs4nn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "bs4nn/errors.hpp"
#include "bs4nn/rng.hpp"

namespace bs4nn {

namespace {

struct CompiledNetwork {
  std::vector<BinarizedLayer> layers;
  int t_max = 0;
};

CompiledNetwork compile(const Network& net) {
  validate_network(net);
  CompiledNetwork c;
  c.t_max = net.t_max;
  c.layers.reserve(net.layers.size());
  for (const Layer& layer : net.layers) {
    c.layers.push_back(make_binarized(layer));
  }
  return c;
}

ForwardTrace run_compiled(const CompiledNetwork& net, const SpikeTimes& input) {
  ForwardTrace trace;
  trace.t_max = net.t_max;
  trace.layers.reserve(net.layers.size());
  const SpikeTimes* current = &input;
  for (const BinarizedLayer& layer : net.layers) {
    trace.layers.push_back(layer_forward(*current, layer));
    current = &trace.layers.back().times;
  }
  trace.decision_time = trace.layers.back().times.times.minCoeff();
  return trace;
}

// Runs fn(begin, end, slot) on `threads` contiguous chunks. Slot order is
// fixed, so any per-slot partial results can be merged deterministically.
template <typename Fn>
void parallel_chunks(int n, int threads, const Fn& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int s = 0; s < threads; ++s) {
    const int begin = s * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end, s] { fn(begin, end, s); });
  }
  for (std::thread& t : pool) t.join();
}

// Integer tallies accumulated per worker; merged after the join. Everything
// downstream (means, accuracy) is derived from exact integer sums, so reports
// do not depend on the thread count.
struct EvalTally {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> confusion;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> firing_time_sum;
  std::vector<std::int64_t> decision_time_sum;
  std::vector<std::int64_t> input_spikes_sum;
  std::vector<std::int64_t> hidden_spikes_sum;
  std::vector<std::int64_t> class_count;

  explicit EvalTally(int classes) {
    confusion.setZero(classes, classes);
    firing_time_sum.setZero(classes, classes);
    decision_time_sum.assign(classes, 0);
    input_spikes_sum.assign(classes, 0);
    hidden_spikes_sum.assign(classes, 0);
    class_count.assign(classes, 0);
  }

  void merge(const EvalTally& other) {
    confusion += other.confusion;
    firing_time_sum += other.firing_time_sum;
    for (std::size_t k = 0; k < class_count.size(); ++k) {
      decision_time_sum[k] += other.decision_time_sum[k];
      input_spikes_sum[k] += other.input_spikes_sum[k];
      hidden_spikes_sum[k] += other.hidden_spikes_sum[k];
      class_count[k] += other.class_count[k];
    }
  }
};

void check_dataset(const Network& net, const LabeledDataset& dataset) {
  if (dataset.size() == 0) {
    throw ConfigError("evaluation: empty dataset");
  }
  if (dataset.images.front().size() != net.input_size()) {
    throw StructuralError("evaluation: image size " +
                          std::to_string(dataset.images.front().size()) +
                          " != network input " +
                          std::to_string(net.input_size()));
  }
  if (dataset.num_classes > net.num_classes()) {
    throw StructuralError("evaluation: dataset has more classes than outputs");
  }
}

}  // namespace

EvalReport evaluate(const Network& net, const LabeledDataset& dataset,
                    int threads) {
  check_dataset(net, dataset);
  const CompiledNetwork compiled = compile(net);
  const int classes = net.num_classes();
  const int n = dataset.size();

  std::vector<EvalTally> tallies(std::max(1, std::min(threads, n)),
                                 EvalTally(classes));
  parallel_chunks(n, threads, [&](int begin, int end, int slot) {
    EvalTally& tally = tallies[slot];
    for (int s = begin; s < end; ++s) {
      const SpikeTimes input = encode_image(dataset.images[s], compiled.t_max);
      const ForwardTrace trace = run_compiled(compiled, input);
      const Decision d = classify(trace);
      const int truth = dataset.labels[s];

      tally.confusion(truth, d.category) += 1;
      tally.class_count[truth] += 1;
      tally.decision_time_sum[truth] += d.decision_time;
      const LayerResult& out = trace.layers.back();
      for (int j = 0; j < classes; ++j) {
        tally.firing_time_sum(j, truth) += out.times.times[j];
      }
      // Spikes until the decision: all real events with time <= decision_time.
      // Input spikes are all real; hidden fakes are excluded via `fired`.
      std::int64_t input_spikes = 0;
      for (int i = 0; i < input.size(); ++i) {
        if (input.times[i] <= d.decision_time) ++input_spikes;
      }
      std::int64_t hidden_spikes = 0;
      for (std::size_t l = 0; l + 1 < trace.layers.size(); ++l) {
        const LayerResult& lr = trace.layers[l];
        for (int j = 0; j < lr.times.size(); ++j) {
          if (lr.fired[j] && lr.times.times[j] <= d.decision_time) {
            ++hidden_spikes;
          }
        }
      }
      tally.input_spikes_sum[truth] += input_spikes;
      tally.hidden_spikes_sum[truth] += hidden_spikes;
    }
  });

  EvalTally total(classes);
  for (const EvalTally& t : tallies) total.merge(t);

  EvalReport report;
  report.samples = n;
  report.confusion = total.confusion;
  report.accuracy =
      static_cast<double>(total.confusion.diagonal().sum()) / n;
  report.mean_firing_time.setZero(classes, classes);
  report.mean_decision_time_per_class.setZero(classes);
  report.mean_input_spikes.setZero(classes);
  report.mean_hidden_spikes.setZero(classes);
  report.mean_total_spikes.setZero(classes);
  std::int64_t decision_sum = 0;
  for (int c = 0; c < classes; ++c) {
    decision_sum += total.decision_time_sum[c];
    const std::int64_t count = total.class_count[c];
    if (count == 0) continue;
    for (int j = 0; j < classes; ++j) {
      report.mean_firing_time(j, c) =
          static_cast<double>(total.firing_time_sum(j, c)) / count;
    }
    report.mean_decision_time_per_class[c] =
        static_cast<double>(total.decision_time_sum[c]) / count;
    report.mean_input_spikes[c] =
        static_cast<double>(total.input_spikes_sum[c]) / count;
    report.mean_hidden_spikes[c] =
        static_cast<double>(total.hidden_spikes_sum[c]) / count;
    report.mean_total_spikes[c] =
        report.mean_input_spikes[c] + report.mean_hidden_spikes[c];
  }
  report.mean_decision_time = static_cast<double>(decision_sum) / n;
  return report;
}

double accuracy(const Network& net, const LabeledDataset& dataset,
                int threads) {
  check_dataset(net, dataset);
  const CompiledNetwork compiled = compile(net);
  const int n = dataset.size();
  std::vector<std::int64_t> correct(std::max(1, std::min(threads, n)), 0);
  parallel_chunks(n, threads, [&](int begin, int end, int slot) {
    std::int64_t local = 0;
    for (int s = begin; s < end; ++s) {
      const SpikeTimes input = encode_image(dataset.images[s], compiled.t_max);
      const ForwardTrace trace = run_compiled(compiled, input);
      if (classify(trace).category == dataset.labels[s]) ++local;
    }
    correct[slot] = local;
  });
  std::int64_t total = 0;
  for (std::int64_t c : correct) total += c;
  return static_cast<double>(total) / n;
}

std::vector<double> noise_robustness(const Network& net,
                                     const LabeledDataset& dataset,
                                     const std::vector<double>& levels,
                                     std::uint64_t seed, int threads) {
  check_dataset(net, dataset);
  for (double level : levels) {
    if (level < 0.0 || level > 1.0) {
      throw ConfigError("noise_robustness: level " + std::to_string(level) +
                        " outside [0, 1]");
    }
  }
  const CompiledNetwork compiled = compile(net);
  const int n = dataset.size();

  std::vector<double> accuracies;
  accuracies.reserve(levels.size());
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double level = levels[li];
    const std::uint64_t level_seed =
        derive_seed(derive_seed(seed, kSeedStreamNoise), li);
    std::vector<std::int64_t> correct(std::max(1, std::min(threads, n)), 0);
    parallel_chunks(n, threads, [&](int begin, int end, int slot) {
      std::int64_t local = 0;
      for (int s = begin; s < end; ++s) {
        Rng rng(derive_seed(level_seed, static_cast<std::uint64_t>(s)));
        const IntensityImage noisy =
            add_jitter_noise(dataset.images[s], level, rng);
        const SpikeTimes input = encode_image(noisy, compiled.t_max);
        const ForwardTrace trace = run_compiled(compiled, input);
        if (classify(trace).category == dataset.labels[s]) ++local;
      }
      correct[slot] = local;
    });
    std::int64_t total = 0;
    for (std::int64_t c : correct) total += c;
    accuracies.push_back(static_cast<double>(total) / n);
  }
  return accuracies;
}

std::vector<SweepPoint> threshold_sweep(const Network& net,
                                        const LabeledDataset& dataset,
                                        const std::vector<float>& thetas,
                                        int threads) {
  check_dataset(net, dataset);
  for (float theta : thetas) {
    if (theta < 0.0f) {
      throw ConfigError("threshold_sweep: theta must be >= 0");
    }
  }
  CompiledNetwork compiled = compile(net);
  const int n = dataset.size();

  std::vector<SweepPoint> points;
  points.reserve(thetas.size());
  for (float theta : thetas) {
    for (BinarizedLayer& layer : compiled.layers) layer.theta = theta;
    std::vector<std::int64_t> correct(std::max(1, std::min(threads, n)), 0);
    std::vector<std::int64_t> response(correct.size(), 0);
    parallel_chunks(n, threads, [&](int begin, int end, int slot) {
      std::int64_t local_correct = 0;
      std::int64_t local_response = 0;
      for (int s = begin; s < end; ++s) {
        const SpikeTimes input = encode_image(dataset.images[s], compiled.t_max);
        const ForwardTrace trace = run_compiled(compiled, input);
        const Decision d = classify(trace);
        if (d.category == dataset.labels[s]) ++local_correct;
        local_response += d.decision_time;
      }
      correct[slot] = local_correct;
      response[slot] = local_response;
    });
    std::int64_t correct_total = 0, response_total = 0;
    for (std::size_t k = 0; k < correct.size(); ++k) {
      correct_total += correct[k];
      response_total += response[k];
    }
    SweepPoint p;
    p.theta = theta;
    p.accuracy = static_cast<double>(correct_total) / n;
    p.mean_response_time = static_cast<double>(response_total) / n;
    points.push_back(p);
  }
  return points;
}

MatrixXf membrane_trace(const Network& net, const SpikeTimes& input) {
  const CompiledNetwork compiled = compile(net);
  validate_spike_times(input);
  const int t_max = compiled.t_max;

  // Everything up to the output layer runs normally; the output layer is
  // re-integrated step by step to expose the whole potential series.
  SpikeTimes pre = input;
  for (std::size_t l = 0; l + 1 < compiled.layers.size(); ++l) {
    pre = layer_forward(pre, compiled.layers[l]).times;
  }
  const BinarizedLayer& out = compiled.layers.back();
  if (pre.size() != out.signs.cols()) {
    throw StructuralError("membrane_trace: input does not match network");
  }

  const int classes = static_cast<int>(out.signs.rows());
  MatrixXf series(classes, t_max + 1);
  VectorXi counts = VectorXi::Zero(classes);
  for (int t = 0; t <= t_max; ++t) {
    for (int i = 0; i < pre.size(); ++i) {
      if (pre.times[i] == t) counts += out.signs.col(i);
    }
    series.col(t) = counts.cast<float>() * out.alpha;
  }
  return series;
}

WeightStats weight_stats(const Network& net) {
  validate_network(net);
  WeightStats stats;
  for (const Layer& layer : net.layers) {
    const auto positive =
        (layer.weights.array() >= 0.0f).cast<std::int64_t>().sum();
    stats.positive_fraction.push_back(static_cast<double>(positive) /
                                      layer.weights.size());
  }
  return stats;
}

namespace {

void write_pgm(const std::string& path, int width, int height,
               const std::vector<std::uint8_t>& pixels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot open graymap for writing: " + path);
  }
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) {
    throw FormatError("graymap write failed: " + path);
  }
}

}  // namespace

void export_weight_maps(const Network& net, int width, int height,
                        const std::string& directory,
                        const std::vector<int>& neuron_indices) {
  validate_network(net);
  const Layer& hidden = net.layers.front();
  if (hidden.fan_in() != width * height) {
    throw ConfigError("export_weight_maps: fan-in " +
                      std::to_string(hidden.fan_in()) + " != " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  std::filesystem::create_directories(directory);
  const int n_pixels = width * height;
  std::vector<std::uint8_t> real_map(n_pixels), binary_map(n_pixels);
  for (int neuron : neuron_indices) {
    if (neuron < 0 || neuron >= hidden.fan_out()) {
      throw ConfigError("export_weight_maps: neuron index " +
                        std::to_string(neuron) + " out of range");
    }
    const auto row = hidden.weights.row(neuron);
    const float lo = row.minCoeff();
    const float hi = row.maxCoeff();
    const float span = hi - lo;
    for (int i = 0; i < n_pixels; ++i) {
      real_map[i] = span > 0.0f
                        ? static_cast<std::uint8_t>(
                              std::lround((row[i] - lo) / span * 255.0f))
                        : 0;
      binary_map[i] = row[i] >= 0.0f ? 255 : 0;
    }
    const std::string stem =
        directory + "/neuron_" + std::to_string(neuron);
    write_pgm(stem + "_real.pgm", width, height, real_map);
    write_pgm(stem + "_binary.pgm", width, height, binary_map);
  }
}

namespace {

// Forward pass with the real-valued proxies in place of alpha * sign(w):
// float accumulation, same bucketed sweep, same firing rule and readout.
struct RealLayerResult {
  SpikeTimes times;
  std::vector<std::uint8_t> fired;
  Eigen::VectorXf final_potential;
};

RealLayerResult real_layer_forward(const SpikeTimes& input,
                                   const MatrixXf& weights,  // post x pre,
                                                             // column-major
                                   float theta) {
  const int pre = static_cast<int>(weights.cols());
  const int post = static_cast<int>(weights.rows());
  if (input.size() != pre) {
    throw StructuralError("proxy forward: input size mismatch");
  }
  const int t_max = input.t_max;

  RealLayerResult result;
  result.times.t_max = t_max;
  result.times.times = VectorXi::Constant(post, t_max);
  result.fired.assign(post, 0);
  Eigen::VectorXf potential = Eigen::VectorXf::Zero(post);

  std::vector<std::vector<int>> buckets(t_max + 1);
  for (int i = 0; i < pre; ++i) buckets[input.times[i]].push_back(i);

  for (int t = 0; t <= t_max; ++t) {
    if (buckets[t].empty() && t != 0) continue;
    for (int i : buckets[t]) potential += weights.col(i);
    for (int j = 0; j < post; ++j) {
      if (!result.fired[j] && potential[j] >= theta) {
        result.fired[j] = 1;
        result.times.times[j] = t;
      }
    }
  }
  result.final_potential = potential;
  return result;
}

}  // namespace

double proxy_inference_check(const Network& net, const LabeledDataset& dataset,
                             bool proxies_present, int threads) {
  if (!proxies_present) {
    throw UnsupportedError(
        "proxy_inference_check: model carries no real-valued weights");
  }
  check_dataset(net, dataset);
  // Column-major copies so a presynaptic neuron's fan-out is contiguous.
  std::vector<MatrixXf> fanouts;
  fanouts.reserve(net.layers.size());
  for (const Layer& layer : net.layers) {
    fanouts.push_back(layer.weights);
  }

  const int n = dataset.size();
  std::vector<std::int64_t> correct(std::max(1, std::min(threads, n)), 0);
  parallel_chunks(n, threads, [&](int begin, int end, int slot) {
    std::int64_t local = 0;
    for (int s = begin; s < end; ++s) {
      SpikeTimes current = encode_image(dataset.images[s], net.t_max);
      RealLayerResult out;
      for (std::size_t l = 0; l < fanouts.size(); ++l) {
        out = real_layer_forward(current, fanouts[l], net.layers[l].theta);
        current = out.times;
      }
      // Same decision rule: earliest spike, lowest index on ties, fallback to
      // the maximum final potential when no output actually fired.
      const int classes = static_cast<int>(out.times.size());
      int best_time = out.times.times.minCoeff();
      bool any_fired = false;
      for (int j = 0; j < classes; ++j) {
        if (out.times.times[j] == best_time && out.fired[j]) any_fired = true;
      }
      int predicted = 0;
      if (best_time == net.t_max && !any_fired) {
        for (int j = 1; j < classes; ++j) {
          if (out.final_potential[j] > out.final_potential[predicted]) {
            predicted = j;
          }
        }
      } else {
        for (int j = 0; j < classes; ++j) {
          if (out.times.times[j] == best_time) {
            predicted = j;
            break;
          }
        }
      }
      if (predicted == dataset.labels[s]) ++local;
    }
    correct[slot] = local;
  });
  std::int64_t total = 0;
  for (std::int64_t c : correct) total += c;
  return static_cast<double>(total) / n;
}

}  // namespace bs4nn
