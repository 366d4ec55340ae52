// Copyright 2020 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace leadersel {

// Invalid input: malformed graphs, mismatched dimensions, bad parameters.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine could not produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// The instance is outside what the selection scheme is meant for (e.g. every
// shifted mode already Hurwitz, so there is nothing to select).
class DegenerateInstance : public std::runtime_error {
 public:
  explicit DegenerateInstance(const std::string& what)
      : std::runtime_error(what) {}
};

// A requested computation exceeds a size guard.
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what)
      : std::runtime_error(what) {}
};

// A stabilizing gain cannot exist: an unstable eigenvector of the shifted
// mode lies outside the controllable subspace of the leaders.
class SynthesisError : public std::runtime_error {
 public:
  explicit SynthesisError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace leadersel
