#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace lrvkit {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for an independent stream identified by a key path, e.g.
/// (master seed, experiment id, replication index). Depends only on the
/// keys, never on scheduling order.
[[nodiscard]] std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept;

/// Stable 64-bit FNV-1a hash, used to turn experiment names into stream keys.
[[nodiscard]] std::uint64_t stable_hash(std::string_view text) noexcept;

/// Seeded source of standard normal and uniform draws.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    [[nodiscard]] double normal() { return normal_(engine_); }
    [[nodiscard]] double uniform() { return uniform_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace lrvkit
