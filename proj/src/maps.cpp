#include "picm/maps.hpp"

#include <algorithm>
#include <stdexcept>

namespace picm {

Rat01 apply_padic(const PadicMap& map, const Rat01& x) {
    if (x.is_one()) throw domain_error("S_p is defined on [0,1); x = 1 rejected");
    return mod1(Rat(map.p) * x.value());
}

std::vector<Rat01> preimages_padic(const PadicMap& map, const Rat01& x) {
    std::vector<Rat01> out;
    out.reserve(map.p);
    for (int k = 0; k < map.p; ++k)
        out.push_back(Rat01::from_rat((x.value() + k) / map.p));
    return out;
}

bool dirac_invariant(const PadicMap& map, const Rat01& x) {
    if (x.is_one()) throw domain_error("S_p is defined on [0,1); x = 1 rejected");
    return apply_padic(map, x) == x;
}

std::vector<Rat01> dirac_fixed_points(int p) {
    if (p < 2) throw domain_error("p must be >= 2");
    std::vector<Rat01> out;
    for (int k = 0; k + 1 < p; ++k) out.push_back(Rat01::reduce(k, p - 1));
    return out;
}

PiecewiseMap PiecewiseMap::from_breakpoints(std::vector<Rat01> breakpoints) {
    if (breakpoints.size() < 2) throw validation_error("need at least two breakpoints");
    if (!breakpoints.front().is_zero() || !breakpoints.back().is_one())
        throw validation_error("breakpoints must start at 0 and end at 1");
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw validation_error("breakpoints must be strictly increasing");
    return PiecewiseMap(std::move(breakpoints));
}

PiecewiseMap PiecewiseMap::padic(int p) {
    if (p < 2) throw domain_error("p must be >= 2");
    std::vector<Rat01> bp;
    bp.reserve(p + 1);
    for (int k = 0; k <= p; ++k) bp.push_back(Rat01::reduce(k, p));
    return PiecewiseMap(std::move(bp));
}

void PiecewiseMap::check_branch(int k) const {
    if (k < 1 || k > branch_count()) throw std::out_of_range("branch index out of range");
}

Rat PiecewiseMap::slope(int k) const {
    check_branch(k);
    return Rat(1) / (breakpoints_[k].value() - breakpoints_[k - 1].value());
}

Rat PiecewiseMap::intercept(int k) const {
    check_branch(k);
    return -breakpoints_[k - 1].value() * slope(k);
}

Rat01 apply_piecewise(const PiecewiseMap& map, const Rat01& x) {
    if (x.is_one()) throw domain_error("S is defined on [0,1); x = 1 rejected");
    const auto& bp = map.breakpoints();
    // last interval with a_k <= x
    int k = static_cast<int>(std::upper_bound(bp.begin(), bp.end(), x) - bp.begin());
    return Rat01::from_rat(map.slope(k) * x.value() + map.intercept(k));
}

Rat01 branch_inverse(const PiecewiseMap& map, int k, const Rat01& y) {
    if (k < 1 || k > map.branch_count()) throw std::out_of_range("branch index out of range");
    const auto& bp = map.breakpoints();
    const Rat& a = bp[static_cast<size_t>(k) - 1].value();
    const Rat& b = bp[static_cast<size_t>(k)].value();
    return Rat01::from_rat(a + y.value() * (b - a));
}

}  // namespace picm
