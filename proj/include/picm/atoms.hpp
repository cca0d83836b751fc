#pragma once

#include <map>
#include <utility>
#include <vector>

#include "picm/cdf.hpp"
#include "picm/cycles.hpp"

namespace picm {

/// Weights of a jump solution: (level, canonical label) -> alpha >= 0.
/// A standalone solution has weights summing to 1; each cycle point of a
/// keyed cycle carries mass alpha/level.
struct JumpCoefficients {
    int p = 0;
    std::map<std::pair<std::uint64_t, BigInt>, Rat> entries;

    Rat total() const;
};

/// The single-atom invariant CDF with its jump at l/(p-1), l in [0, p-2].
Cdf jump_level1(int p, int l);

/// The invariant CDF carried by a cycle: one atom of mass 1/m at each of its
/// m points. Validates the cycle before building.
Cdf jump_from_cycle(const CycleSet& cycle);

/// Finite convex combination of cycle jump CDFs. Coefficients must be keyed
/// by canonical labels and sum to exactly 1.
Cdf synthesize_jump(const JumpCoefficients& coeffs);

/// Greedy inverse of synthesize_jump. Each atom must sit on a discontinuity
/// candidate and every point of its cycle must carry the same mass;
/// otherwise the input is not an invariant jump function.
JumpCoefficients decompose_jump(int p, const Cdf& jump_cdf);

struct IntervalResidual {
    Rat01 lo, hi;          // the half-open interval [lo, hi)
    Rat measure;           // mu([lo, hi))
    Rat preimage_measure;  // mu(S_p^{-1}([lo, hi)))
    Rat residual;          // preimage_measure - measure
};

struct InvarianceReport {
    std::vector<IntervalResidual> rows;
    bool all_zero = true;
    Rat max_abs_residual;
};

/// Compares mu(S_p^{-1}([x,y))) with mu([x,y)) exactly for each interval.
InvarianceReport check_invariance_measure(int p, const AtomicMeasure& mu,
                                          const std::vector<std::pair<Rat01, Rat01>>& intervals);

/// True iff no atom sits on a branch breakpoint k/p, k = 1..p-1. Invariant
/// measures put no mass there, so a false result rules invariance out.
bool breakpoint_atom_check(int p, const AtomicMeasure& mu);

}  // namespace picm
