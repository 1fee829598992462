#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cifcompare {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective mixer on 64-bit integers.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the independent stream number `index` under `base`:
/// splitmix64(base ^ splitmix64(index)). Streams for different indices are
/// decorrelated, so replicate b can run anywhere and reproduce exactly.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// FNV-1a, stable across platforms (std::hash is not).
std::uint64_t stable_hash(std::string_view text) noexcept;

}  // namespace cifcompare
