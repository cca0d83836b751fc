#pragma once

#include <cstdint>
#include <vector>

#include "picm/rational.hpp"

namespace picm {

/// Deterministic splitmix64 stream. Hand-rolled so that seeded runs produce
/// byte-identical output on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

/// Random rational a/b with 1 <= b <= max_den and 0 <= a <= b.
Rat01 random_rat01(Rng& rng, std::uint64_t max_den);

/// Random rational in [0,1), i.e. a < b.
Rat01 random_rat01_half_open(Rng& rng, std::uint64_t max_den);

std::vector<Rat01> random_points(Rng& rng, std::size_t count, std::uint64_t max_den,
                                 bool half_open = false);

}  // namespace picm
