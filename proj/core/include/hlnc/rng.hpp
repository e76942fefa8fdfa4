#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace hlnc {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// FNV-1a; used to fold names into stream keys.
constexpr std::uint64_t hash_name(std::string_view s)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Deterministic generator keyed by a tuple of integers, e.g.
/// (seed, purpose, N, block). Independent of thread scheduling.
inline Rng make_stream(std::initializer_list<std::uint64_t> key)
{
    std::uint64_t h = 0x5EEDULL;
    for (auto k : key)
        h = mix64(h ^ k);
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Rng(seq);
}

} // namespace hlnc
