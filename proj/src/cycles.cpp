#include "picm/cycles.hpp"

#include <algorithm>

namespace picm {

std::optional<std::uint64_t> cycle_level(int p, const Rat01& x, std::uint64_t max_steps) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (x.is_one()) return std::nullopt;
    const BigInt b = x.den();
    if (gcd(BigInt(p), b) != 1) return std::nullopt;
    return mul_order(p, b, max_steps).convert_to<std::uint64_t>();
}

CycleSet cycle_of(int p, const Rat01& x) {
    const auto level = cycle_level(p, x);
    if (!level) throw domain_error("point is not a discontinuity candidate for this p");
    const std::uint64_t m = *level;
    const BigInt b = x.den();

    // orbit of the numerator under multiplication by p mod b
    std::vector<BigInt> orbit;
    orbit.reserve(m);
    BigInt a = x.num();
    for (std::uint64_t n = 0; n < m; ++n) {
        orbit.push_back(a);
        a = a * p % b;
    }
    const BigInt a_min = *std::min_element(orbit.begin(), orbit.end());

    BigInt pm1 = pow(BigInt(p), static_cast<unsigned>(m)) - 1;

    CycleSet cycle;
    cycle.p = p;
    cycle.level = m;
    cycle.label = a_min * (pm1 / b);
    std::sort(orbit.begin(), orbit.end());
    cycle.points.reserve(m);
    for (const auto& num : orbit) cycle.points.push_back(Rat01::reduce(num, b));
    return cycle;
}

CycleSet cycle_from_label(int p, std::uint64_t level, const BigInt& label) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (level < 1) throw domain_error("level must be >= 1");
    const BigInt pm1 = pow(BigInt(p), static_cast<unsigned>(level)) - 1;
    if (label < 0 || label >= pm1)
        throw std::invalid_argument("label out of range [0, p^m - 2]");
    CycleSet c = cycle_of(p, Rat01::reduce(label, pm1));
    if (c.level != level)
        throw std::invalid_argument("label has exact period " + std::to_string(c.level) +
                                    ", not " + std::to_string(level));
    if (c.label != label)
        throw std::invalid_argument("label is not the canonical (minimal) orbit representative");
    return c;
}

CycleStep cycle_image(int p, const Rat01& x) {
    if (!cycle_level(p, x))
        throw domain_error("point is not a discontinuity candidate for this p");
    const Rat px = Rat(p) * x.value();
    const BigInt k = floor_rat(px);
    return {Rat01::from_rat(px - Rat(k)), k.convert_to<int>()};
}

CycleStep cycle_preimage(int p, const Rat01& x) {
    if (!cycle_level(p, x))
        throw domain_error("point is not a discontinuity candidate for this p");
    // (x + q)/p lands back among the candidates iff p divides num + q*den
    const BigInt binv = mod_inverse(x.den(), p);
    const BigInt q = (p - x.num() * binv % p) % p;
    return {Rat01::from_rat((x.value() + Rat(q)) / p), q.convert_to<int>()};
}

std::vector<CycleSet> enumerate_levels(int p, std::uint64_t m, std::uint64_t budget) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (m < 1) throw domain_error("level must be >= 1");

    const BigInt pm = pow(BigInt(p), static_cast<unsigned>(m));
    if (pm > budget) {
        const std::uint64_t required =
            pm > (std::numeric_limits<std::uint64_t>::max)()
                ? (std::numeric_limits<std::uint64_t>::max)()
                : pm.convert_to<std::uint64_t>();
        throw resource_error("enumeration scans p^m = " + pm.str() +
                                 " labels; raise the budget (PICM_BUDGET) to at least that",
                             required);
    }
    const std::uint64_t q = pm.convert_to<std::uint64_t>() - 1;  // p^m - 1

    std::vector<CycleSet> out;
    std::vector<bool> visited(q, false);
    std::vector<std::uint64_t> orbit;
    for (std::uint64_t l = 0; l < q; ++l) {
        if (visited[l]) continue;
        orbit.clear();
        std::uint64_t cur = l;
        do {
            visited[cur] = true;
            orbit.push_back(cur);
            cur = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(cur) * static_cast<unsigned>(p)) % q);
        } while (cur != l);
        if (orbit.size() != m) continue;  // shorter orbits belong to their own (lower) level
        CycleSet c;
        c.p = p;
        c.level = m;
        c.label = l;  // an unvisited label is its orbit's minimum
        std::sort(orbit.begin(), orbit.end());
        c.points.reserve(m);
        for (auto num : orbit) c.points.push_back(Rat01::reduce(BigInt(num), BigInt(q)));
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

int mobius(std::uint64_t n) {
    int mu = 1;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            n /= f;
            if (n % f == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

}  // namespace

BigInt count_levels(int p, std::uint64_t m) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (m < 1) throw domain_error("level must be >= 1");
    BigInt sum = 0;
    for (std::uint64_t d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        const int mu = mobius(d);
        if (mu == 0) continue;
        sum += mu * pow(BigInt(p), static_cast<unsigned>(m / d));
    }
    BigInt count = sum / m;
    if (m == 1) count -= 1;  // the constant word p-1 would be the excluded point x = 1
    return count;
}

}  // namespace picm
