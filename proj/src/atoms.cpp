#include "picm/atoms.hpp"

#include <algorithm>

namespace picm {

Rat JumpCoefficients::total() const {
    Rat sum = 0;
    for (const auto& [key, alpha] : entries) sum += alpha;
    return sum;
}

Cdf jump_level1(int p, int l) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (l < 0 || l > p - 2) throw std::out_of_range("label must lie in [0, p-2]");
    return Cdf::jump({Atom{Rat01::reduce(l, p - 1), Rat(1)}});
}

Cdf jump_from_cycle(const CycleSet& cycle) {
    // round-trip through the canonical constructor validates the cycle
    CycleSet canonical = cycle_from_label(cycle.p, cycle.level, cycle.label);
    if (canonical.points != cycle.points)
        throw validation_error("cycle points do not match the label's orbit");
    std::vector<Atom> atoms;
    atoms.reserve(cycle.points.size());
    const Rat mass(1, BigInt(cycle.level));
    for (const auto& pt : cycle.points) atoms.push_back({pt, mass});
    return Cdf::jump(std::move(atoms));
}

Cdf synthesize_jump(const JumpCoefficients& coeffs) {
    if (coeffs.p < 2) throw domain_error("p must be >= 2");
    if (coeffs.total() != 1)
        throw validation_error("jump coefficients must sum to exactly 1");
    std::vector<Atom> atoms;
    for (const auto& [key, alpha] : coeffs.entries) {
        if (alpha < 0) throw validation_error("jump coefficients must be non-negative");
        if (alpha == 0) continue;
        const auto& [level, label] = key;
        const CycleSet cycle = cycle_from_label(coeffs.p, level, label);  // key error if bad
        const Rat mass = alpha / BigInt(level);
        for (const auto& pt : cycle.points) atoms.push_back({pt, mass});
    }
    // cycle sets are disjoint, so locations never coincide
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    return Cdf::jump(std::move(atoms));
}

JumpCoefficients decompose_jump(int p, const Cdf& jump_cdf) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (jump_cdf.kind() != Cdf::Kind::jump)
        throw domain_error("decompose_jump expects a jump CDF");

    // descending mass, then ascending location, for a deterministic order
    std::vector<Atom> todo = jump_cdf.as_jump().atoms;
    std::sort(todo.begin(), todo.end(), [](const Atom& a, const Atom& b) {
        if (a.mass != b.mass) return a.mass > b.mass;
        return a.location < b.location;
    });

    JumpCoefficients out;
    out.p = p;
    while (!todo.empty()) {
        const Atom head = todo.front();
        if (!cycle_level(p, head.location))
            throw not_invariant_error("not an invariant jump function: atom at " +
                                      head.location.str() +
                                      " is not a discontinuity candidate");
        const CycleSet cycle = cycle_of(p, head.location);
        std::vector<Atom> rest;
        rest.reserve(todo.size());
        size_t consumed = 0;
        for (const auto& atom : todo) {
            const bool in_cycle = std::binary_search(cycle.points.begin(), cycle.points.end(),
                                                     atom.location);
            if (!in_cycle) {
                rest.push_back(atom);
                continue;
            }
            if (atom.mass != head.mass)
                throw not_invariant_error(
                    "not an invariant jump function: unequal masses within the cycle of " +
                    head.location.str());
            ++consumed;
        }
        if (consumed != cycle.points.size())
            throw not_invariant_error(
                "not an invariant jump function: cycle of " + head.location.str() +
                " is only partially charged");
        out.entries[{cycle.level, cycle.label}] = head.mass * BigInt(cycle.level);
        todo = std::move(rest);
    }
    if (out.total() != 1)
        throw validation_error("decomposition left residual mass");  // unreachable for valid input
    return out;
}

namespace {

Rat mass_in_interval(const AtomicMeasure& mu, const Rat& lo, const Rat& hi) {
    Rat sum = 0;
    for (const auto& atom : mu.atoms) {
        const Rat& loc = atom.location.value();
        if (lo <= loc && loc < hi) sum += atom.mass;
    }
    return sum;
}

}  // namespace

InvarianceReport check_invariance_measure(int p, const AtomicMeasure& mu,
                                          const std::vector<std::pair<Rat01, Rat01>>& intervals) {
    if (p < 2) throw domain_error("p must be >= 2");
    InvarianceReport report;
    report.max_abs_residual = 0;
    for (const auto& [lo, hi] : intervals) {
        if (hi < lo) throw domain_error("interval endpoints out of order");
        IntervalResidual row;
        row.lo = lo;
        row.hi = hi;
        row.measure = mass_in_interval(mu, lo.value(), hi.value());
        row.preimage_measure = 0;
        for (int k = 0; k < p; ++k) {
            // S_p^{-1}([lo,hi)) = union of [(lo+k)/p, (hi+k)/p)
            row.preimage_measure +=
                mass_in_interval(mu, (lo.value() + k) / p, (hi.value() + k) / p);
        }
        row.residual = row.preimage_measure - row.measure;
        if (row.residual != 0) report.all_zero = false;
        const Rat abs_res = row.residual < 0 ? Rat(-row.residual) : row.residual;
        if (abs_res > report.max_abs_residual) report.max_abs_residual = abs_res;
        report.rows.push_back(std::move(row));
    }
    return report;
}

bool breakpoint_atom_check(int p, const AtomicMeasure& mu) {
    if (p < 2) throw domain_error("p must be >= 2");
    for (const auto& atom : mu.atoms) {
        const Rat scaled = atom.location.value() * p;
        if (denominator(scaled) == 1 && numerator(scaled) != 0) return false;
    }
    return true;
}

}  // namespace picm
