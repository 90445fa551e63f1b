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

#include <cstring>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "bs4nn/errors.hpp"

namespace bs4nn {

namespace {

constexpr char kMagic[4] = {'B', 'S', '4', 'N'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kFlagRealWeights = 0x01;
constexpr std::size_t kLayerHeaderBytes = 16;  // in, out, alpha, theta

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_f32(std::vector<std::uint8_t>& b, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(b, bits);
}

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_]) |
                      static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | bytes_[pos_ + k];
    pos_ += 4;
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  const std::uint8_t* raw(std::size_t n) {
    need(n);
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw FormatError("model file truncated: need " + std::to_string(n) +
                        " bytes at offset " + std::to_string(pos_));
    }
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

std::size_t sign_payload_bytes(int in_dim, int out_dim) {
  const std::size_t n = static_cast<std::size_t>(in_dim) * out_dim;
  return (n + 7) / 8;
}

}  // namespace

std::vector<std::uint8_t> save_model_bytes(const Network& net,
                                           bool include_real) {
  validate_network(net);
  std::vector<std::uint8_t> bytes;
  bytes.insert(bytes.end(), kMagic, kMagic + 4);
  bytes.push_back(kVersion);
  bytes.push_back(include_real ? kFlagRealWeights : 0);
  put_u16(bytes, static_cast<std::uint16_t>(net.layers.size()));

  for (const Layer& layer : net.layers) {
    put_u32(bytes, static_cast<std::uint32_t>(layer.fan_in()));
    put_u32(bytes, static_cast<std::uint32_t>(layer.fan_out()));
    put_f32(bytes, layer.alpha);
    put_f32(bytes, layer.theta);
    // Sign bits: row-major (postsynaptic-major), LSB first, bit 1 <=> +1.
    std::uint8_t acc = 0;
    int nbits = 0;
    for (int j = 0; j < layer.fan_out(); ++j) {
      for (int i = 0; i < layer.fan_in(); ++i) {
        if (layer.weights(j, i) >= 0.0f) acc |= static_cast<std::uint8_t>(1u << nbits);
        if (++nbits == 8) {
          bytes.push_back(acc);
          acc = 0;
          nbits = 0;
        }
      }
    }
    if (nbits > 0) bytes.push_back(acc);
  }

  if (include_real) {
    for (const Layer& layer : net.layers) {
      for (int j = 0; j < layer.fan_out(); ++j) {
        for (int i = 0; i < layer.fan_in(); ++i) {
          put_f32(bytes, layer.weights(j, i));
        }
      }
    }
  }
  return bytes;
}

std::size_t save_model(const Network& net, const std::string& path,
                       bool include_real) {
  const std::vector<std::uint8_t> bytes = save_model_bytes(net, include_real);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot open model file for writing: " + path);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw FormatError("model write failed: " + path);
  }
  return bytes.size();
}

LoadedModel load_model_bytes(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  const std::uint8_t* magic = r.raw(4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("model magic mismatch: not a BS4N file");
  }
  const std::uint8_t version = r.u8();
  if (version != kVersion) {
    throw FormatError("unsupported model version " + std::to_string(version) +
                      " (expected " + std::to_string(kVersion) + ")");
  }
  const std::uint8_t flags = r.u8();
  const bool has_real = (flags & kFlagRealWeights) != 0;
  const int layer_count = r.u16();
  if (layer_count < 1) {
    throw FormatError("model has no layers");
  }

  LoadedModel loaded;
  loaded.has_real_weights = has_real;
  loaded.network.t_max = 256;  // timing constant is not part of the container
  loaded.network.layers.resize(layer_count);

  std::vector<std::pair<int, int>> dims(layer_count);
  for (int l = 0; l < layer_count; ++l) {
    Layer& layer = loaded.network.layers[l];
    const std::uint32_t in_dim = r.u32();
    const std::uint32_t out_dim = r.u32();
    if (in_dim < 1 || out_dim < 1 || in_dim > (1u << 24) || out_dim > (1u << 24)) {
      throw FormatError("model layer " + std::to_string(l) +
                        " has implausible dimensions");
    }
    layer.alpha = r.f32();
    layer.theta = r.f32();
    dims[l] = {static_cast<int>(in_dim), static_cast<int>(out_dim)};
    const std::size_t payload = sign_payload_bytes(dims[l].first, dims[l].second);
    const std::uint8_t* signs = r.raw(payload);
    layer.weights.resize(dims[l].second, dims[l].first);
    std::size_t bit = 0;
    for (int j = 0; j < dims[l].second; ++j) {
      for (int i = 0; i < dims[l].first; ++i, ++bit) {
        const bool positive = (signs[bit >> 3] >> (bit & 7)) & 1;
        layer.weights(j, i) = positive ? 1.0f : -1.0f;
      }
    }
  }

  if (has_real) {
    for (int l = 0; l < layer_count; ++l) {
      Layer& layer = loaded.network.layers[l];
      for (int j = 0; j < dims[l].second; ++j) {
        for (int i = 0; i < dims[l].first; ++i) {
          layer.weights(j, i) = r.f32();
        }
      }
    }
  }

  if (r.remaining() != 0) {
    throw FormatError("model file has " + std::to_string(r.remaining()) +
                      " trailing bytes");
  }
  validate_network(loaded.network);
  return loaded;
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open model file: " + path);
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_model_bytes(bytes);
}

ModelSizeReport model_size_report(const Network& net) {
  ModelSizeReport report;
  std::size_t payload_total = 0;
  for (const Layer& layer : net.layers) {
    LayerSizeInfo info;
    info.in_dim = layer.fan_in();
    info.out_dim = layer.fan_out();
    info.packed_payload_bytes = sign_payload_bytes(info.in_dim, info.out_dim);
    info.header_bytes = kLayerHeaderBytes;
    info.dense_bytes =
        4 * static_cast<std::size_t>(info.in_dim) * info.out_dim;
    report.layers.push_back(info);
    report.total_packed_bytes += info.packed_payload_bytes + info.header_bytes;
    report.total_dense_bytes += info.dense_bytes;
    payload_total += info.packed_payload_bytes;
  }
  if (payload_total > 0) {
    report.payload_ratio =
        static_cast<double>(report.total_dense_bytes) / payload_total;
  }
  if (report.total_packed_bytes > 0) {
    report.total_ratio = static_cast<double>(report.total_dense_bytes) /
                         report.total_packed_bytes;
  }
  return report;
}

}  // namespace bs4nn
