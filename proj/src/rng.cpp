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

#include "qtoken/rng.hpp"

#include <algorithm>
#include <array>

namespace qtoken {

namespace {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngSeed RngSeed::child(std::uint64_t k) const noexcept {
  return {master_seed, mix64(stream_index ^ mix64(k + 0x632be59bd9b4e019ULL))};
}

Engine make_engine(const RngSeed& seed) {
  const std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(seed.master_seed), static_cast<std::uint32_t>(seed.master_seed >> 32),
      static_cast<std::uint32_t>(seed.stream_index), static_cast<std::uint32_t>(seed.stream_index >> 32)};
  std::seed_seq sequence(words.begin(), words.end());
  return Engine(sequence);
}

double uniform01(Engine& engine) {
  // 53 random mantissa bits; avoids std::generate_canonical's rounding to 1.
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

BlochAngles sample_uniform_sphere(Engine& engine) {
  const double z = std::clamp(2.0 * uniform01(engine) - 1.0, -1.0, 1.0);
  const double phi = kTwoPi * uniform01(engine);
  return BlochAngles::from_z(z, phi);
}

}  // namespace qtoken
