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

#ifndef BS4NN_ENCODING_HPP_
#define BS4NN_ENCODING_HPP_

#include "bs4nn/rng.hpp"
#include "bs4nn/types.hpp"

namespace bs4nn {

// A grayscale image with integer intensities in [0, max_intensity].
struct IntensityImage {
  VectorXi pixels;  // row-major, width * height entries
  int width = 0;
  int height = 0;
  int max_intensity = 255;

  int size() const { return static_cast<int>(pixels.size()); }
};

// First-spike times for a population of neurons, one integer step per neuron,
// each in [0, t_max]. An entry equal to t_max means "fires at the final step":
// a real spike for a zero-intensity pixel, a fake spike for a downstream
// neuron that never crossed its threshold.
struct SpikeTimes {
  VectorXi times;
  int t_max = 0;

  int size() const { return static_cast<int>(times.size()); }
};

// Throws InputDomainError / StructuralError if the image violates its
// invariants (pixel out of range, size mismatch, max_intensity < 1).
void validate_image(const IntensityImage& img);

// Throws if any entry is outside [0, t_max] or t_max < 1.
void validate_spike_times(const SpikeTimes& spikes);

// Intensity-to-latency conversion: brighter pixels spike earlier.
//
//   t_i = floor((max_intensity - pixel_i) / max_intensity * t_max)
//
// computed in exact integer arithmetic, so intensity max_intensity maps to
// step 0 and intensity 0 maps to exactly t_max.
SpikeTimes encode_image(const IntensityImage& img, int t_max);

// Adds an independent uniform draw in [-noise_level * max_intensity,
// +noise_level * max_intensity] to every pixel, clamps to [0, max_intensity],
// and rounds to the nearest integer intensity. noise_level must lie in [0, 1].
IntensityImage add_jitter_noise(const IntensityImage& img, double noise_level,
                                Rng& rng);

}  // namespace bs4nn

#endif  // BS4NN_ENCODING_HPP_
