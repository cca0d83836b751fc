#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "picm/rational.hpp"

namespace picm {

/// One minimal cycle of discontinuity points: the forward orbit
/// { (label * p^n mod (p^m - 1)) / (p^m - 1) : n = 0..m-1 } of exact period m.
/// The label is canonical (the minimum over the orbit); base-p it reads as an
/// aperiodic digit word.
struct CycleSet {
    int p = 0;
    std::uint64_t level = 0;  // m
    BigInt label;             // canonical l in [0, p^m - 2]
    std::vector<Rat01> points;  // sorted, exactly `level` distinct points in [0,1)
};

/// Candidate discontinuity points of invariant CDFs: the rationals
/// i/(p^m - 1), i = 0..p^m-2. A reduced a/b in [0,1) belongs iff
/// gcd(b, p) = 1; its level is the multiplicative order of p mod b.
std::optional<std::uint64_t> cycle_level(int p, const Rat01& x, std::uint64_t max_steps = 0);

/// Full forward orbit of x under S_p with canonical label. Domain error when
/// x has no level (gcd(den, p) != 1 or x = 1).
CycleSet cycle_of(int p, const Rat01& x);

/// Rebuilds a cycle from (p, level, label); rejects labels that are not
/// canonical representatives of exact period `level`.
CycleSet cycle_from_label(int p, std::uint64_t level, const BigInt& label);

/// A point of a cycle together with the branch digit that reaches it.
struct CycleStep {
    Rat01 point;
    int digit;
};

/// The unique (y, k) with y = S_p(x) and x = (y + k)/p; y stays in the cycle.
CycleStep cycle_image(int p, const Rat01& x);

/// The unique preimage of x under S_p that lies among the discontinuity
/// candidates: (z, q) with z = (x + q)/p and S_p(z) = x.
CycleStep cycle_preimage(int p, const Rat01& x);

/// All cycles of exact level m, canonical labels ascending. The scan touches
/// p^m - 1 labels, so it is capped by `budget` (resource error beyond it).
std::vector<CycleSet> enumerate_levels(int p, std::uint64_t m, std::uint64_t budget);

/// Number of cycles of exact level m: the aperiodic-necklace count
/// (1/m) * sum_{d | m} mobius(d) p^{m/d}, minus 1 at m = 1 (the label p - 1
/// would be the excluded point x = 1).
BigInt count_levels(int p, std::uint64_t m);

}  // namespace picm
