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

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bs4nn/errors.hpp"
#include "bs4nn/learning.hpp"
#include "bs4nn/rng.hpp"
#include "doctest.h"
#include "support/builders.hpp"

namespace bs4nn {
namespace {

using bs4nn_test::make_layer;
using bs4nn_test::make_times;

LabeledDataset random_dataset(int count, int pixels, int classes,
                              std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset ds;
  ds.num_classes = classes;
  for (int n = 0; n < count; ++n) {
    IntensityImage img;
    img.width = pixels;
    img.height = 1;
    img.max_intensity = 255;
    img.pixels.resize(pixels);
    for (int i = 0; i < pixels; ++i) img.pixels[i] = rng.uniform_below(256);
    ds.images.push_back(img);
    ds.labels.push_back(rng.uniform_below(classes));
  }
  return ds;
}

Network small_trainable_net(std::uint64_t seed, int pixels, int classes) {
  TrainConfig cfg;
  cfg.t_max = 32;
  cfg.seed = seed;
  cfg.layer_inits = {{-1.0, 1.0, 1.0f, 2.0f}, {-1.0, 1.0, 1.0f, 2.0f}};
  return init_network({pixels, 6, classes}, cfg);
}

TEST_CASE("evaluate is pure and thread-count invariant") {
  const LabeledDataset ds = random_dataset(64, 10, 3, 11);
  const Network net = small_trainable_net(4, 10, 3);
  const EvalReport a = evaluate(net, ds, 1);
  const EvalReport b = evaluate(net, ds, 4);
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.confusion == b.confusion);
  CHECK(a.mean_firing_time == b.mean_firing_time);
  CHECK(a.mean_decision_time == b.mean_decision_time);
  CHECK(a.mean_input_spikes == b.mean_input_spikes);
  CHECK(a.mean_hidden_spikes == b.mean_hidden_spikes);

  CHECK(a.samples == 64);
  CHECK(a.confusion.sum() == 64);
  // Row sums are the per-class sample counts; the diagonal is the accuracy.
  long diag = 0;
  for (int c = 0; c < 3; ++c) diag += a.confusion(c, c);
  CHECK(a.accuracy == doctest::Approx(static_cast<double>(diag) / 64));
  CHECK(accuracy(net, ds, 2) == a.accuracy);
}

TEST_CASE("a net that always fires one output concentrates the confusion") {
  // Positive weights to output 1, strongly negative elsewhere.
  Network net;
  net.t_max = 16;
  net.layers.push_back(
      make_layer({{-1.0f, -1.0f}, {1.0f, 1.0f}, {-1.0f, -1.0f}}, 1.0f, 1.0f));
  const LabeledDataset ds = random_dataset(40, 2, 3, 9);
  const EvalReport report = evaluate(net, ds, 1);
  for (int c = 0; c < 3; ++c) {
    CHECK(report.confusion(c, 0) == 0);
    CHECK(report.confusion(c, 2) == 0);
  }
  long class1 = 0;
  for (int n = 0; n < ds.size(); ++n) class1 += ds.labels[n] == 1 ? 1 : 0;
  CHECK(report.accuracy ==
        doctest::Approx(static_cast<double>(class1) / ds.size()));
}

TEST_CASE("spike counts exclude fakes and respect the single-spike bound") {
  const LabeledDataset ds = random_dataset(32, 12, 2, 21);
  const Network net = small_trainable_net(7, 12, 2);
  const EvalReport report = evaluate(net, ds, 1);
  for (int c = 0; c < 2; ++c) {
    CHECK(report.mean_input_spikes[c] <= 12.0);
    CHECK(report.mean_hidden_spikes[c] <= 6.0);
    CHECK(report.mean_total_spikes[c] ==
          doctest::Approx(report.mean_input_spikes[c] +
                          report.mean_hidden_spikes[c]));
  }
}

TEST_CASE("noise robustness at level zero equals clean accuracy") {
  const LabeledDataset ds = random_dataset(48, 8, 2, 31);
  const Network net = small_trainable_net(9, 8, 2);
  const std::vector<double> acc = noise_robustness(net, ds, {0.0, 0.5}, 77, 2);
  REQUIRE(acc.size() == 2);
  CHECK(acc[0] == accuracy(net, ds, 1));

  // Deterministic in the seed, regardless of threads.
  const std::vector<double> again = noise_robustness(net, ds, {0.0, 0.5}, 77, 1);
  CHECK(acc == again);

  CHECK_THROWS_AS(noise_robustness(net, ds, {1.5}, 1, 1), ConfigError);
}

TEST_CASE("threshold sweep at the training theta reproduces evaluate") {
  const LabeledDataset ds = random_dataset(56, 9, 3, 41);
  // Excitatory-only network: counts only grow, so response time is
  // rigorously monotone in theta here.
  TrainConfig cfg;
  cfg.t_max = 32;
  cfg.seed = 13;
  cfg.layer_inits = {{0.0, 1.0, 1.0f, 2.0f}, {0.0, 1.0, 1.0f, 2.0f}};
  const Network net = init_network({9, 6, 3}, cfg);

  const float trained_theta = net.layers[0].theta;
  const std::vector<SweepPoint> points =
      threshold_sweep(net, ds, {0.0f, trained_theta, 5.0f}, 2);
  REQUIRE(points.size() == 3);
  const EvalReport base = evaluate(net, ds, 1);
  CHECK(points[1].accuracy == base.accuracy);
  CHECK(points[1].mean_response_time == base.mean_decision_time);

  // Response time is non-decreasing in theta.
  CHECK(points[0].mean_response_time <= points[1].mean_response_time);
  CHECK(points[1].mean_response_time <= points[2].mean_response_time);

  // theta = 0 fires everything immediately.
  CHECK(points[0].mean_response_time == 0.0);

  CHECK_THROWS_AS(threshold_sweep(net, ds, {-1.0f}, 1), ConfigError);
}

TEST_CASE("membrane trace is a step function consistent with the forward pass") {
  Network net;
  net.t_max = 16;
  net.layers.push_back(make_layer({{1.0f}, {1.0f}}, 1.0f, 1.0f));
  net.layers.push_back(make_layer({{1.0f, 1.0f}, {0.0f, 0.0f}}, 2.0f, 3.0f));
  // Second output row is all positive-zero signs: +1, +1 as well; make it
  // inhibitory instead to get a flat trace.
  net.layers[1].weights.row(1) << -1.0f, -1.0f;

  const SpikeTimes input = make_times({4}, 16);
  const MatrixXf series = membrane_trace(net, input);
  REQUIRE(series.rows() == 2);
  REQUIRE(series.cols() == 17);
  for (int t = 0; t < 4; ++t) CHECK(series(0, t) == 0.0f);
  for (int t = 4; t <= 16; ++t) CHECK(series(0, t) == 4.0f);   // 2 * count 2
  for (int t = 4; t <= 16; ++t) CHECK(series(1, t) == -4.0f);  // inhibitory

  // The classified neuron's series is the first to reach theta.
  const ForwardTrace trace = network_forward(net, input, false);
  const Decision d = classify(trace);
  CHECK(d.category == 0);
  CHECK(series(0, d.decision_time) >= net.layers[1].theta);
}

TEST_CASE("weight stats count the nonnegative fraction per layer") {
  Network net;
  net.t_max = 8;
  net.layers.push_back(make_layer({{1.0f, -2.0f, 0.0f, 3.0f}}, 1.0f, 1.0f));
  const WeightStats stats = weight_stats(net);
  REQUIRE(stats.positive_fraction.size() == 1);
  CHECK(stats.positive_fraction[0] == doctest::Approx(0.75));

  TrainConfig cfg;
  cfg.t_max = 16;
  cfg.layer_inits = {{0.0, 5.0, 5.0f, 100.0f}};
  const Network positive = init_network({6, 3}, cfg);
  CHECK(weight_stats(positive).positive_fraction[0] == 1.0);
}

TEST_CASE("weight maps export PGMs with the sign map matching the real map") {
  Network net;
  net.t_max = 8;
  net.layers.push_back(
      make_layer({{-1.0f, 2.0f, 0.5f, -3.0f}, {1.0f, 1.0f, 1.0f, 1.0f}}, 1.0f,
                 1.0f));
  const std::string dir =
      (std::filesystem::temp_directory_path() / "bs4nn_maps_test").string();
  export_weight_maps(net, 2, 2, dir, {0, 1});

  auto read = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "P5");
    int w, h, maxval;
    in >> w >> h >> maxval;
    in.get();
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(px.data()), w * h);
    return px;
  };

  const auto real0 = read(dir + "/neuron_0_real.pgm");
  const auto bin0 = read(dir + "/neuron_0_binary.pgm");
  REQUIRE(real0.size() == 4);
  // Min-max scaling: -3 -> 0, 2 -> 255.
  CHECK(real0[3] == 0);
  CHECK(real0[1] == 255);
  // Binary map is the pixelwise sign of the real map.
  const float expected[] = {-1.0f, 2.0f, 0.5f, -3.0f};
  for (int i = 0; i < 4; ++i) {
    CHECK(bin0[i] == (expected[i] >= 0.0f ? 255 : 0));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("proxy inference equals the binary path when W is already alpha*B") {
  Network net;
  net.t_max = 24;
  net.layers.push_back(make_layer({{2.0f, -2.0f, 2.0f},
                                   {-2.0f, 2.0f, -2.0f}},
                                  2.0f, 3.0f));
  const LabeledDataset ds = random_dataset(50, 3, 2, 51);
  const double binary_acc = accuracy(net, ds, 1);
  const double proxy_acc = proxy_inference_check(net, ds, true, 2);
  CHECK(proxy_acc == binary_acc);

  CHECK_THROWS_AS(proxy_inference_check(net, ds, false, 1), UnsupportedError);
}

}  // namespace
}  // namespace bs4nn
