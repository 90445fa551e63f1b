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
//
// Term-by-term reference enumerations of the backward-pass formulas. These
// stay scalar, loop-based, and independent of the library implementations so
// they can serve as differential-testing oracles.

#ifndef BS4NN_TESTS_NAIVE_GRADIENTS_HPP_
#define BS4NN_TESTS_NAIVE_GRADIENTS_HPP_

#include <vector>

#include "bs4nn/network.hpp"

namespace bs4nn_test {

inline std::vector<double> naive_output_deltas(const std::vector<double>& e,
                                               int t_max) {
  std::vector<double> delta(e.size());
  for (std::size_t j = 0; j < e.size(); ++j) {
    delta[j] = -e[j] / static_cast<double>(t_max);
  }
  return delta;
}

// delta_j = sum_k delta_next[k] * w(k, j) * [t_pre[j] <= t_post[k]]
inline std::vector<double> naive_hidden_deltas(
    const std::vector<double>& delta_next, const bs4nn::MatrixXf& w,
    const std::vector<int>& t_pre, const std::vector<int>& t_post) {
  std::vector<double> delta(t_pre.size(), 0.0);
  for (std::size_t j = 0; j < t_pre.size(); ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < delta_next.size(); ++k) {
      if (t_pre[j] <= t_post[k]) {
        sum += delta_next[k] * static_cast<double>(w(static_cast<int>(k),
                                                     static_cast<int>(j)));
      }
    }
    delta[j] = sum;
  }
  return delta;
}

// g(j, i) = -alpha * delta[j] if t_pre[i] <= t_post[j] else 0
inline std::vector<std::vector<double>> naive_weight_gradients(
    const std::vector<double>& delta, float alpha,
    const std::vector<int>& t_pre, const std::vector<int>& t_post) {
  std::vector<std::vector<double>> g(delta.size(),
                                     std::vector<double>(t_pre.size(), 0.0));
  for (std::size_t j = 0; j < delta.size(); ++j) {
    for (std::size_t i = 0; i < t_pre.size(); ++i) {
      if (t_pre[i] <= t_post[j]) {
        g[j][i] = -static_cast<double>(alpha) * delta[j];
      }
    }
  }
  return g;
}

// dL/dalpha = -sum_j delta[j] * sum_i sign(w(j, i)) * [t_pre[i] <= t_post[j]]
inline double naive_alpha_gradient(const std::vector<double>& delta,
                                   const bs4nn::MatrixXf& w,
                                   const std::vector<int>& t_pre,
                                   const std::vector<int>& t_post) {
  double grad = 0.0;
  for (std::size_t j = 0; j < delta.size(); ++j) {
    double inner = 0.0;
    for (std::size_t i = 0; i < t_pre.size(); ++i) {
      if (t_pre[i] <= t_post[j]) {
        inner += w(static_cast<int>(j), static_cast<int>(i)) >= 0.0f ? 1.0 : -1.0;
      }
    }
    grad -= delta[j] * inner;
  }
  return grad;
}

}  // namespace bs4nn_test

#endif  // BS4NN_TESTS_NAIVE_GRADIENTS_HPP_
