// Copyright 2026 The qtoken Authors
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

#ifndef QTOKEN_RNG_HPP
#define QTOKEN_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>

#include "qtoken/bloch.hpp"

namespace qtoken {

using Engine = std::mt19937_64;

/// Identifies one reproducible random stream. Work items in a sweep get
/// their own stream_index so results do not depend on scheduling.
struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  /// Deterministic sub-stream for the k-th child task of this stream.
  RngSeed child(std::uint64_t k) const noexcept;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Default master seed used when the caller does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 20240801;

Engine make_engine(const RngSeed& seed);

/// Uniform in [0, 1).
double uniform01(Engine& engine);

/// A point drawn from the uniform measure on the sphere
/// (z uniform on [-1, 1], phi uniform on [0, 2pi)).
BlochAngles sample_uniform_sphere(Engine& engine);

}  // namespace qtoken

#endif  // QTOKEN_RNG_HPP
