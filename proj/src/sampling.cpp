#include "picm/sampling.hpp"

namespace picm {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw domain_error("bound must be >= 1");
    // rejection sampling keeps the distribution uniform
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
}

Rat01 random_rat01(Rng& rng, std::uint64_t max_den) {
    const std::uint64_t den = 1 + rng.below(max_den);
    const std::uint64_t num = rng.below(den + 1);
    return Rat01::reduce(BigInt(num), BigInt(den));
}

Rat01 random_rat01_half_open(Rng& rng, std::uint64_t max_den) {
    const std::uint64_t den = 1 + rng.below(max_den);
    const std::uint64_t num = rng.below(den);
    return Rat01::reduce(BigInt(num), BigInt(den));
}

std::vector<Rat01> random_points(Rng& rng, std::size_t count, std::uint64_t max_den,
                                 bool half_open) {
    std::vector<Rat01> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(half_open ? random_rat01_half_open(rng, max_den)
                                : random_rat01(rng, max_den));
    return out;
}

}  // namespace picm
