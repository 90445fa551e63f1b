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

#include "bs4nn/persistence.hpp"

#include <utility>
#include <vector>

#include "bs4nn/errors.hpp"
#include "bs4nn/rng.hpp"
#include "doctest.h"
#include "support/builders.hpp"

namespace bs4nn {
namespace {

using bs4nn_test::make_layer;
using bs4nn_test::random_layer;
using bs4nn_test::random_times;

Network random_network(std::uint64_t seed, std::vector<int> arch, int t_max) {
  Rng rng(seed);
  Network net;
  net.t_max = t_max;
  for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
    net.layers.push_back(random_layer(rng, arch[l], arch[l + 1]));
  }
  return net;
}

TEST_CASE("checkpoint round-trip restores weights bit-exactly") {
  const Network net = random_network(17, {9, 7, 3}, 48);
  const std::vector<std::uint8_t> bytes = save_model_bytes(net, true);
  const LoadedModel loaded = load_model_bytes(bytes);
  CHECK(loaded.has_real_weights);
  REQUIRE(loaded.network.layers.size() == net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    CHECK(loaded.network.layers[l].weights == net.layers[l].weights);
    CHECK(loaded.network.layers[l].alpha == net.layers[l].alpha);
    CHECK(loaded.network.layers[l].theta == net.layers[l].theta);
  }
}

TEST_CASE("deployment round-trip preserves every classification") {
  const Network net = random_network(23, {12, 8, 4}, 32);
  const LoadedModel deployed = load_model_bytes(save_model_bytes(net, false));
  CHECK_FALSE(deployed.has_real_weights);

  Rng rng(5);
  Network deployed_net = deployed.network;
  deployed_net.t_max = net.t_max;
  for (int round = 0; round < 100; ++round) {
    const SpikeTimes input = random_times(rng, 12, net.t_max);
    const Decision a = classify(network_forward(net, input, false));
    const Decision b = classify(network_forward(deployed_net, input, false));
    CHECK(a.category == b.category);
    CHECK(a.decision_time == b.decision_time);
  }
}

TEST_CASE("sign payload packs row-major, LSB first, zero-padded") {
  // W = [[1, -1], [-1, 1]] -> bits 1,0,0,1 -> byte 0b00001001.
  Network net;
  net.t_max = 8;
  net.layers.push_back(make_layer({{1.0f, -1.0f}, {-1.0f, 1.0f}}, 1.0f, 1.0f));
  const std::vector<std::uint8_t> bytes = save_model_bytes(net, false);
  // Header: magic(4) + version(1) + flags(1) + count(2); layer header: 16.
  REQUIRE(bytes.size() == 8 + 16 + 1);
  CHECK(bytes[8 + 16] == 0b00001001);

  CHECK(bytes[0] == 'B');
  CHECK(bytes[1] == 'S');
  CHECK(bytes[2] == '4');
  CHECK(bytes[3] == 'N');
  CHECK(bytes[4] == 1);  // version
  CHECK(bytes[5] == 0);  // flags: deployment
}

TEST_CASE("payload size formula holds for awkward dimensions") {
  for (const auto& [in, out] : std::vector<std::pair<int, int>>{
           {1, 1}, {7, 3}, {8, 2}, {9, 5}, {600, 10}, {784, 600}}) {
    Rng rng(static_cast<std::uint64_t>(in * 1000 + out));
    Network net;
    net.t_max = 16;
    net.layers.push_back(random_layer(rng, in, out));
    const std::size_t expected_payload =
        (static_cast<std::size_t>(in) * out + 7) / 8;
    const std::vector<std::uint8_t> deploy = save_model_bytes(net, false);
    CHECK(deploy.size() == 8 + 16 + expected_payload);
    const std::vector<std::uint8_t> checkpoint = save_model_bytes(net, true);
    CHECK(checkpoint.size() ==
          8 + 16 + expected_payload + 4 * static_cast<std::size_t>(in) * out);
  }
}

TEST_CASE("784-600-10 deployment sizes match the hand arithmetic") {
  Network net;
  net.t_max = 256;
  Rng rng(1);
  net.layers.push_back(random_layer(rng, 784, 600));
  net.layers.push_back(random_layer(rng, 600, 10));

  const ModelSizeReport report = model_size_report(net);
  REQUIRE(report.layers.size() == 2);
  CHECK(report.layers[0].packed_payload_bytes == 58800);
  CHECK(report.layers[1].packed_payload_bytes == 750);
  CHECK(report.layers[0].dense_bytes == 1881600);
  CHECK(report.layers[1].dense_bytes == 24000);
  CHECK(report.total_dense_bytes == 1905600);
  CHECK(report.total_packed_bytes == 59550 + 2 * 16);
  // Real weights add (784*600 + 600*10) * 4 bytes on top of the sign file.
  CHECK(save_model_bytes(net, true).size() ==
        save_model_bytes(net, false).size() + 4ull * (784 * 600 + 600 * 10));
}

TEST_CASE("size report of a single 1x8 layer has payload ratio 32") {
  Network net;
  net.t_max = 8;
  Rng rng(2);
  net.layers.push_back(random_layer(rng, 1, 8));
  const ModelSizeReport report = model_size_report(net);
  CHECK(report.layers[0].packed_payload_bytes == 1);
  CHECK(report.layers[0].dense_bytes == 32);
  CHECK(report.payload_ratio == doctest::Approx(32.0));

  const ModelSizeReport empty = model_size_report(Network{});
  CHECK(empty.layers.empty());
  CHECK(empty.total_dense_bytes == 0);
}

TEST_CASE("loader rejects foreign and future files") {
  const Network net = random_network(3, {4, 2}, 16);
  std::vector<std::uint8_t> bytes = save_model_bytes(net, true);

  SUBCASE("bad magic") {
    bytes[0] = 'X';
    CHECK_THROWS_AS(load_model_bytes(bytes), FormatError);
  }
  SUBCASE("future version") {
    bytes[4] = 2;
    CHECK_THROWS_AS(load_model_bytes(bytes), FormatError);
  }
  SUBCASE("truncated payload") {
    bytes.resize(bytes.size() - 5);
    CHECK_THROWS_AS(load_model_bytes(bytes), FormatError);
  }
  SUBCASE("trailing bytes") {
    bytes.push_back(0);
    CHECK_THROWS_AS(load_model_bytes(bytes), FormatError);
  }
}

TEST_CASE("deployment load yields weights equal to their own signs") {
  const Network net = random_network(29, {6, 5}, 16);
  const LoadedModel deployed = load_model_bytes(save_model_bytes(net, false));
  const MatrixXf b = binarize(net.layers[0].weights);
  CHECK(deployed.network.layers[0].weights == b);
}

}  // namespace
}  // namespace bs4nn
