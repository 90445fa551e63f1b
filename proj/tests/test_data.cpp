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

#include <unistd.h>
#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "bs4nn/errors.hpp"
#include "bs4nn/rng.hpp"
#include "doctest.h"

namespace bs4nn {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("bs4nn_data_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::vector<IntensityImage> random_images(int count, int rows, int cols,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<IntensityImage> images(count);
  for (IntensityImage& img : images) {
    img.width = cols;
    img.height = rows;
    img.max_intensity = 255;
    img.pixels.resize(rows * cols);
    for (int i = 0; i < img.pixels.size(); ++i) {
      img.pixels[i] = rng.uniform_below(256);
    }
  }
  return images;
}

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

TEST_CASE("IDX image save/load round-trip") {
  TempDir tmp;
  const auto images = random_images(7, 5, 3, 99);
  const std::string path = tmp.file("imgs.idx");
  save_idx_images(images, path);
  const auto loaded = load_idx_images(path);
  REQUIRE(loaded.size() == images.size());
  for (std::size_t n = 0; n < images.size(); ++n) {
    CHECK(loaded[n].pixels == images[n].pixels);
    CHECK(loaded[n].width == 3);
    CHECK(loaded[n].height == 5);
    CHECK(loaded[n].max_intensity == 255);
  }

  // Loading then re-serializing reproduces the exact bytes.
  const std::string path2 = tmp.file("imgs2.idx");
  save_idx_images(loaded, path2);
  CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("IDX label save/load round-trip and domain check") {
  TempDir tmp;
  const std::vector<int> labels = {0, 9, 3, 3, 7, 1};
  const std::string path = tmp.file("labels.idx");
  save_idx_labels(labels, path);
  CHECK(load_idx_labels(path) == labels);

  CHECK_THROWS_AS(save_idx_labels({10}, tmp.file("bad.idx")),
                  InputDomainError);
}

void gzip_file(const std::string& src, const std::string& dst) {
  const std::vector<std::uint8_t> raw = slurp(src);
  z_stream strm{};
  REQUIRE(deflateInit2(&strm, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                       Z_DEFAULT_STRATEGY) == Z_OK);
  std::vector<std::uint8_t> out(deflateBound(&strm, raw.size()) + 64);
  strm.next_in = const_cast<Bytef*>(raw.data());
  strm.avail_in = static_cast<uInt>(raw.size());
  strm.next_out = out.data();
  strm.avail_out = static_cast<uInt>(out.size());
  REQUIRE(deflate(&strm, Z_FINISH) == Z_STREAM_END);
  out.resize(out.size() - strm.avail_out);
  deflateEnd(&strm);
  std::ofstream f(dst, std::ios::binary);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
}

TEST_CASE("gzip containers are transparent") {
  TempDir tmp;
  const auto images = random_images(4, 2, 2, 5);
  save_idx_images(images, tmp.file("imgs.idx"));
  gzip_file(tmp.file("imgs.idx"), tmp.file("imgs.idx.gz"));
  const auto loaded = load_idx_images(tmp.file("imgs.idx.gz"));
  REQUIRE(loaded.size() == images.size());
  for (std::size_t n = 0; n < images.size(); ++n) {
    CHECK(loaded[n].pixels == images[n].pixels);
  }

  const std::vector<int> labels = {4, 2, 0, 9};
  save_idx_labels(labels, tmp.file("labels.idx"));
  gzip_file(tmp.file("labels.idx"), tmp.file("labels.idx.gz"));
  CHECK(load_idx_labels(tmp.file("labels.idx.gz")) == labels);

  // A corrupt gzip body is a format error, not silent garbage.
  std::vector<std::uint8_t> bad = slurp(tmp.file("imgs.idx.gz"));
  bad.resize(bad.size() / 2);
  std::ofstream f(tmp.file("bad.gz"), std::ios::binary);
  f.write(reinterpret_cast<const char*>(bad.data()),
          static_cast<std::streamsize>(bad.size()));
  f.close();
  CHECK_THROWS_AS(load_idx_images(tmp.file("bad.gz")), FormatError);
}

TEST_CASE("image loader rejects wrong magic, label magic, truncation") {
  TempDir tmp;
  const std::string path = tmp.file("labels.idx");
  save_idx_labels({1, 2, 3, 4, 5, 6, 7, 8, 9, 0}, path);
  // A label file handed to the image loader reports its observed magic.
  CHECK_THROWS_WITH_AS(load_idx_images(path),
                       doctest::Contains("0x00000801"), FormatError);

  const std::string img_path = tmp.file("imgs.idx");
  save_idx_images(random_images(2, 2, 2, 1), img_path);
  CHECK_THROWS_AS(load_idx_labels(img_path), FormatError);

  // Truncate the image payload.
  std::vector<std::uint8_t> bytes = slurp(img_path);
  bytes.resize(bytes.size() - 3);
  std::ofstream out(tmp.file("trunc.idx"), std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();
  CHECK_THROWS_AS(load_idx_images(tmp.file("trunc.idx")), FormatError);

  // Empty file.
  std::ofstream(tmp.file("empty.idx"), std::ios::binary).close();
  CHECK_THROWS_AS(load_idx_labels(tmp.file("empty.idx")), FormatError);
  CHECK_THROWS_AS(load_idx_images(tmp.file("missing.idx")), FormatError);
}

TEST_CASE("make_dataset validates and bundles") {
  auto images = random_images(10, 2, 2, 3);
  std::vector<int> labels(10, 1);
  const LabeledDataset ds = make_dataset(images, labels);
  CHECK(ds.size() == 10);
  CHECK(ds.num_classes == 10);

  labels.pop_back();
  CHECK_THROWS_AS(make_dataset(images, labels), StructuralError);

  labels.push_back(12);
  CHECK_THROWS_AS(make_dataset(images, labels), InputDomainError);

  const LabeledDataset fashion = make_dataset(
      random_images(3, 2, 2, 4), {0, 9, 5}, fashion_mnist_class_names());
  CHECK(fashion.num_classes == 10);
  CHECK(fashion.class_names[9] == "Ankle boot");
}

TEST_CASE("dataset_head keeps the leading samples") {
  const LabeledDataset ds =
      make_dataset(random_images(6, 2, 2, 8), {0, 1, 2, 3, 4, 5});
  const LabeledDataset head = dataset_head(ds, 4);
  CHECK(head.size() == 4);
  CHECK(head.labels == std::vector<int>({0, 1, 2, 3}));
  CHECK(dataset_head(ds, 0).size() == 6);
  CHECK(dataset_head(ds, 99).size() == 6);
}

}  // namespace
}  // namespace bs4nn
