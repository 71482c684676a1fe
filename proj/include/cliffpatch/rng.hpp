// Copyright 2026 The cliffpatch Authors
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
#include <random>

namespace cliffpatch {

using Rng = std::mt19937_64;

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Independent stream for (master seed, stream id, sub id).
inline Rng derive_rng(uint64_t master, uint64_t stream, uint64_t sub = 0) {
    uint64_t s = splitmix64(master ^ splitmix64(stream ^ splitmix64(sub + 0x5851f42d4c957f2dull)));
    std::seed_seq seq{static_cast<uint32_t>(s), static_cast<uint32_t>(s >> 32)};
    return Rng(seq);
}

}  // namespace cliffpatch
