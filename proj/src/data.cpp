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

#include "bs4nn/data.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "bs4nn/errors.hpp"

namespace bs4nn {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open file: " + path);
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

std::vector<std::uint8_t> gunzip(const std::vector<std::uint8_t>& in,
                                 const std::string& path) {
  z_stream strm{};
  // 15 window bits + 16 selects gzip decoding.
  if (inflateInit2(&strm, 15 + 16) != Z_OK) {
    throw FormatError("zlib init failed for " + path);
  }
  std::vector<std::uint8_t> out;
  out.reserve(in.size() * 4);
  std::uint8_t buffer[1 << 16];
  strm.next_in = const_cast<Bytef*>(in.data());
  strm.avail_in = static_cast<uInt>(in.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    strm.next_out = buffer;
    strm.avail_out = sizeof(buffer);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw FormatError("corrupt gzip stream: " + path);
    }
    out.insert(out.end(), buffer, buffer + (sizeof(buffer) - strm.avail_out));
  }
  inflateEnd(&strm);
  return out;
}

// Reads path, transparently decompressing if the gzip magic is present.
std::vector<std::uint8_t> read_maybe_gzip(const std::string& path) {
  std::vector<std::uint8_t> bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 0x1F && bytes[1] == 0x8B) {
    return gunzip(bytes, path);
  }
  return bytes;
}

std::uint32_t read_u32_be(const std::vector<std::uint8_t>& b, std::size_t pos) {
  return (static_cast<std::uint32_t>(b[pos]) << 24) |
         (static_cast<std::uint32_t>(b[pos + 1]) << 16) |
         (static_cast<std::uint32_t>(b[pos + 2]) << 8) |
         static_cast<std::uint32_t>(b[pos + 3]);
}

void append_u32_be(std::vector<std::uint8_t>& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 24));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& b) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot open file for writing: " + path);
  }
  out.write(reinterpret_cast<const char*>(b.data()),
            static_cast<std::streamsize>(b.size()));
  if (!out) {
    throw FormatError("write failed: " + path);
  }
}

std::string hex_magic(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%08X", v);
  return buf;
}

}  // namespace

std::vector<IntensityImage> load_idx_images(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_maybe_gzip(path);
  if (bytes.size() < 16) {
    throw FormatError("IDX image file too short: " + path);
  }
  const std::uint32_t magic = read_u32_be(bytes, 0);
  if (magic != kImageMagic) {
    throw FormatError("IDX image magic mismatch in " + path + ": expected " +
                      hex_magic(kImageMagic) + ", observed " + hex_magic(magic));
  }
  const std::uint32_t count = read_u32_be(bytes, 4);
  const std::uint32_t rows = read_u32_be(bytes, 8);
  const std::uint32_t cols = read_u32_be(bytes, 12);
  const std::size_t expected =
      16 + static_cast<std::size_t>(count) * rows * cols;
  if (bytes.size() != expected) {
    throw FormatError("IDX image payload length mismatch in " + path +
                      ": expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  std::vector<IntensityImage> images(count);
  std::size_t pos = 16;
  for (std::uint32_t n = 0; n < count; ++n) {
    IntensityImage& img = images[n];
    img.width = static_cast<int>(cols);
    img.height = static_cast<int>(rows);
    img.max_intensity = 255;
    img.pixels.resize(static_cast<int>(rows * cols));
    for (int i = 0; i < img.pixels.size(); ++i) {
      img.pixels[i] = bytes[pos++];
    }
  }
  return images;
}

std::vector<int> load_idx_labels(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_maybe_gzip(path);
  if (bytes.size() < 8) {
    throw FormatError("IDX label file too short: " + path);
  }
  const std::uint32_t magic = read_u32_be(bytes, 0);
  if (magic != kLabelMagic) {
    throw FormatError("IDX label magic mismatch in " + path + ": expected " +
                      hex_magic(kLabelMagic) + ", observed " + hex_magic(magic));
  }
  const std::uint32_t count = read_u32_be(bytes, 4);
  if (bytes.size() != 8 + static_cast<std::size_t>(count)) {
    throw FormatError("IDX label payload length mismatch in " + path +
                      ": expected " + std::to_string(8 + count) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  std::vector<int> labels(count);
  for (std::uint32_t n = 0; n < count; ++n) {
    const int v = bytes[8 + n];
    if (v > 9) {
      throw InputDomainError("IDX label " + std::to_string(n) + " = " +
                             std::to_string(v) + " outside [0, 9] in " + path);
    }
    labels[n] = v;
  }
  return labels;
}

void save_idx_images(const std::vector<IntensityImage>& images,
                     const std::string& path) {
  std::vector<std::uint8_t> bytes;
  const int rows = images.empty() ? 0 : images.front().height;
  const int cols = images.empty() ? 0 : images.front().width;
  append_u32_be(bytes, kImageMagic);
  append_u32_be(bytes, static_cast<std::uint32_t>(images.size()));
  append_u32_be(bytes, static_cast<std::uint32_t>(rows));
  append_u32_be(bytes, static_cast<std::uint32_t>(cols));
  for (const IntensityImage& img : images) {
    validate_image(img);
    if (img.height != rows || img.width != cols) {
      throw StructuralError("save_idx_images: images differ in dimensions");
    }
    if (img.max_intensity > 255) {
      throw StructuralError("save_idx_images: max_intensity exceeds 8-bit range");
    }
    for (int i = 0; i < img.pixels.size(); ++i) {
      bytes.push_back(static_cast<std::uint8_t>(img.pixels[i]));
    }
  }
  write_file(path, bytes);
}

void save_idx_labels(const std::vector<int>& labels, const std::string& path) {
  std::vector<std::uint8_t> bytes;
  append_u32_be(bytes, kLabelMagic);
  append_u32_be(bytes, static_cast<std::uint32_t>(labels.size()));
  for (std::size_t n = 0; n < labels.size(); ++n) {
    if (labels[n] < 0 || labels[n] > 9) {
      throw InputDomainError("save_idx_labels: label " + std::to_string(n) +
                             " outside [0, 9]");
    }
    bytes.push_back(static_cast<std::uint8_t>(labels[n]));
  }
  write_file(path, bytes);
}

LabeledDataset make_dataset(std::vector<IntensityImage> images,
                            std::vector<int> labels,
                            std::vector<std::string> class_names) {
  if (images.size() != labels.size()) {
    throw StructuralError("make_dataset: " + std::to_string(images.size()) +
                          " images vs " + std::to_string(labels.size()) +
                          " labels");
  }
  LabeledDataset ds;
  ds.num_classes =
      class_names.empty() ? 10 : static_cast<int>(class_names.size());
  for (std::size_t n = 0; n < images.size(); ++n) {
    validate_image(images[n]);
    if (images[n].width != images.front().width ||
        images[n].height != images.front().height) {
      throw StructuralError("make_dataset: image " + std::to_string(n) +
                            " differs in dimensions");
    }
    if (labels[n] < 0 || labels[n] >= ds.num_classes) {
      throw InputDomainError("make_dataset: label " + std::to_string(labels[n]) +
                             " outside [0, " + std::to_string(ds.num_classes) +
                             ")");
    }
  }
  ds.images = std::move(images);
  ds.labels = std::move(labels);
  ds.class_names = std::move(class_names);
  return ds;
}

const std::vector<std::string>& fashion_mnist_class_names() {
  static const std::vector<std::string> names = {
      "T-shirt/top", "Trouser", "Pullover", "Dress",  "Coat",
      "Sandal",      "Shirt",   "Sneaker",  "Bag",    "Ankle boot"};
  return names;
}

LabeledDataset dataset_head(const LabeledDataset& dataset, int count) {
  if (count <= 0 || count >= dataset.size()) {
    return dataset;
  }
  LabeledDataset out;
  out.images.assign(dataset.images.begin(), dataset.images.begin() + count);
  out.labels.assign(dataset.labels.begin(), dataset.labels.begin() + count);
  out.class_names = dataset.class_names;
  out.num_classes = dataset.num_classes;
  return out;
}

}  // namespace bs4nn
