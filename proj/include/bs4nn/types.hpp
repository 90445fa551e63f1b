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

#ifndef BS4NN_TYPES_HPP_
#define BS4NN_TYPES_HPP_

#include <Eigen/Core>

namespace bs4nn {

// Weight matrices are postsynaptic x presynaptic in Eigen's default
// column-major storage, so a presynaptic neuron's fan-out (one column) is
// contiguous; the forward sweep and the column-wise backward kernels both
// stream memory in order.
using Eigen::MatrixXd;
using Eigen::MatrixXf;
using Eigen::MatrixXi;
using Eigen::VectorXd;
using Eigen::VectorXi;

}  // namespace bs4nn

#endif  // BS4NN_TYPES_HPP_
