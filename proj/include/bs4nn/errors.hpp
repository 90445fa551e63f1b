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

#ifndef BS4NN_ERRORS_HPP_
#define BS4NN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bs4nn {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-supplied configuration (hyperparameters, ranges, flags).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// A value violates the domain contract of an input (pixel range, spike range).
class InputDomainError : public Error {
 public:
  explicit InputDomainError(const std::string& what) : Error(what) {}
};

// Shapes or sizes that do not fit together.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what) : Error(what) {}
};

// Malformed or truncated external data (IDX containers, model files).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(what) {}
};

// Non-finite values where finite numbers are required.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(what) {}
};

// Operation that the given object cannot support (e.g. proxy inference on a
// sign-only model).
class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(what) {}
};

}  // namespace bs4nn

#endif  // BS4NN_ERRORS_HPP_
