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

#ifndef BS4NN_PERSISTENCE_HPP_
#define BS4NN_PERSISTENCE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bs4nn/network.hpp"

namespace bs4nn {

// Binary model container (see docs/model_format.md):
//   magic "BS4N" | version u8 = 1 | flags u8 (bit0: real weights appended) |
//   layer_count u16 LE | per layer: in_dim u32 LE, out_dim u32 LE, alpha f32
//   LE, theta f32 LE, sign payload of ceil(in*out/8) bytes | then, if bit0 is
//   set: all real weights as f32 LE in the same layer/row-major order.
// Sign bits are packed row-major (postsynaptic-major), least-significant bit
// first, one zero-padded payload per layer; bit 1 means +1, bit 0 means -1.

// Serializes to the format above. include_real = false writes the deployment
// form (signs and per-layer scalars only). Returns the byte count written.
std::size_t save_model(const Network& net, const std::string& path,
                       bool include_real);

std::vector<std::uint8_t> save_model_bytes(const Network& net,
                                           bool include_real);

struct LoadedModel {
  Network network;
  // True when the file carried real-valued proxies. Deployment files come
  // back with weights set to the signs themselves (+1/-1), so sign(W) is
  // unchanged and all firing behavior is identical.
  bool has_real_weights = false;
};

LoadedModel load_model(const std::string& path);
LoadedModel load_model_bytes(const std::vector<std::uint8_t>& bytes);

// Per-layer storage accounting: packed deployment bytes versus dense 32-bit
// float storage.
struct LayerSizeInfo {
  int in_dim = 0;
  int out_dim = 0;
  std::size_t packed_payload_bytes = 0;  // ceil(in*out/8)
  std::size_t header_bytes = 0;          // dims + alpha + theta
  std::size_t dense_bytes = 0;           // 4 * in * out
};

struct ModelSizeReport {
  std::vector<LayerSizeInfo> layers;
  std::size_t total_packed_bytes = 0;  // headers + payloads
  std::size_t total_dense_bytes = 0;
  double payload_ratio = 0.0;  // dense / payload (32 exactly, padding aside)
  double total_ratio = 0.0;    // dense / (headers + payloads)
};

ModelSizeReport model_size_report(const Network& net);

}  // namespace bs4nn

#endif  // BS4NN_PERSISTENCE_HPP_
