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

#include <cstdint>
#include <string_view>

namespace leadersel {

// Seed for a named random stream derived from one master seed, so each
// experiment component draws from an independent, reproducible sequence.
std::uint64_t substream_seed(std::uint64_t master, std::string_view name);

// Seed for the i-th member of a family of streams (e.g. trials).
std::uint64_t indexed_seed(std::uint64_t base, std::uint64_t index);

}  // namespace leadersel
