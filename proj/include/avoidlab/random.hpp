// Copyright 2026 The avoidlab Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "avoidlab/errors.hpp"

namespace avoidlab {

// Deterministic seeding. Every randomized entry point takes its seed
// explicitly; sub-streams are derived by mixing indices into the parent.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(seed);
  for (auto p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ull));
  return h;
}

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). Rejection sampling, identical on every platform.
inline std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform_below: empty range");
  if ((bound & (bound - 1)) == 0) return rng() & (bound - 1);
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

inline bool random_bit(Rng &rng) { return (rng() >> 63) != 0; }

}  // namespace avoidlab
