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

#ifndef BS4NN_DATA_HPP_
#define BS4NN_DATA_HPP_

#include <string>
#include <vector>

#include "bs4nn/encoding.hpp"

namespace bs4nn {

struct LabeledDataset {
  std::vector<IntensityImage> images;
  std::vector<int> labels;
  std::vector<std::string> class_names;  // optional, for reporting
  int num_classes = 0;

  int size() const { return static_cast<int>(images.size()); }
};

// Parses a big-endian IDX image container (magic 0x00000803): count, rows,
// cols as 32-bit big-endian, then count*rows*cols unsigned bytes. Files that
// start with the gzip magic 0x1F 0x8B are decompressed transparently.
// Intensities come back with max_intensity = 255.
std::vector<IntensityImage> load_idx_images(const std::string& path);

// Parses a big-endian IDX label container (magic 0x00000801); every label
// must lie in [0, 9].
std::vector<int> load_idx_labels(const std::string& path);

// Serializers for the same containers (round-trip partners of the loaders,
// also used to build test fixtures). Images must share dimensions and have
// max_intensity <= 255.
void save_idx_images(const std::vector<IntensityImage>& images,
                     const std::string& path);
void save_idx_labels(const std::vector<int>& labels, const std::string& path);

// Bundles images and labels after validating that lengths match, dimensions
// agree, and every label is within range. num_classes is class_names.size()
// when names are given, otherwise 10.
LabeledDataset make_dataset(std::vector<IntensityImage> images,
                            std::vector<int> labels,
                            std::vector<std::string> class_names = {});

// The ten Fashion-MNIST category strings.
const std::vector<std::string>& fashion_mnist_class_names();

// First `count` samples of a dataset (count <= 0 or >= size returns a copy).
LabeledDataset dataset_head(const LabeledDataset& dataset, int count);

}  // namespace bs4nn

#endif  // BS4NN_DATA_HPP_
