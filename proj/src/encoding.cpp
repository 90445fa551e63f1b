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

#include "bs4nn/encoding.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "bs4nn/errors.hpp"

namespace bs4nn {

void validate_image(const IntensityImage& img) {
  if (img.max_intensity < 1) {
    throw StructuralError("image: max_intensity must be >= 1, got " +
                          std::to_string(img.max_intensity));
  }
  if (static_cast<long>(img.width) * img.height != img.pixels.size()) {
    throw StructuralError("image: width*height (" +
                          std::to_string(img.width) + "x" +
                          std::to_string(img.height) +
                          ") does not match pixel count " +
                          std::to_string(img.pixels.size()));
  }
  for (int i = 0; i < img.pixels.size(); ++i) {
    const int p = img.pixels[i];
    if (p < 0 || p > img.max_intensity) {
      throw InputDomainError("image: pixel " + std::to_string(i) + " = " +
                             std::to_string(p) + " outside [0, " +
                             std::to_string(img.max_intensity) + "]");
    }
  }
}

void validate_spike_times(const SpikeTimes& spikes) {
  if (spikes.t_max < 1) {
    throw StructuralError("spike times: t_max must be >= 1, got " +
                          std::to_string(spikes.t_max));
  }
  for (int i = 0; i < spikes.times.size(); ++i) {
    const int t = spikes.times[i];
    if (t < 0 || t > spikes.t_max) {
      throw InputDomainError("spike times: entry " + std::to_string(i) +
                             " = " + std::to_string(t) + " outside [0, " +
                             std::to_string(spikes.t_max) + "]");
    }
  }
}

SpikeTimes encode_image(const IntensityImage& img, int t_max) {
  validate_image(img);
  if (t_max < 1) {
    throw ConfigError("encode_image: t_max must be >= 1");
  }
  SpikeTimes out;
  out.t_max = t_max;
  out.times.resize(img.pixels.size());
  const std::int64_t imax = img.max_intensity;
  for (int i = 0; i < img.pixels.size(); ++i) {
    // Exact floor((imax - p) / imax * t_max): nonnegative integer division.
    out.times[i] =
        static_cast<int>((imax - img.pixels[i]) * static_cast<std::int64_t>(t_max) / imax);
  }
  return out;
}

IntensityImage add_jitter_noise(const IntensityImage& img, double noise_level,
                                Rng& rng) {
  validate_image(img);
  if (noise_level < 0.0 || noise_level > 1.0) {
    throw ConfigError("add_jitter_noise: noise level " +
                      std::to_string(noise_level) + " outside [0, 1]");
  }
  const double amplitude = noise_level * img.max_intensity;
  IntensityImage out = img;
  for (int i = 0; i < out.pixels.size(); ++i) {
    double v = img.pixels[i] + rng.uniform(-amplitude, amplitude);
    if (v < 0.0) v = 0.0;
    if (v > img.max_intensity) v = static_cast<double>(img.max_intensity);
    out.pixels[i] = static_cast<int>(std::llround(v));
  }
  return out;
}

}  // namespace bs4nn
