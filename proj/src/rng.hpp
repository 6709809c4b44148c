/*
 * Copyright 2026 The tdmac-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace tdmac {

using Rng = std::mt19937_64;

// Reserved stream ids. Per-instance streams use small indices (record or
// instance number), so these sit at the top of the 64-bit range.
inline constexpr std::uint64_t kMismatchStream = 0xFFFF'FFFF'FFFF'FF01ull;
inline constexpr std::uint64_t kOperandStream = 0xFFFF'FFFF'FFFF'FF02ull;
inline constexpr std::uint64_t kQuantizationStream = 0xFFFF'FFFF'FFFF'FF03ull;
inline constexpr std::uint64_t kThermalStream = 0xFFFF'FFFF'FFFF'FF04ull;

/// Independent, reproducible generator for (seed, stream).
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace tdmac
