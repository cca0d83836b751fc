#pragma once

#include <vector>

#include "picm/rational.hpp"

namespace picm {

/// The p-adic transformation S_p(x) = p*x mod 1 on [0,1).
struct PadicMap {
    int p;
    explicit PadicMap(int p_) : p(p_) {
        if (p < 2) throw domain_error("p must be >= 2");
    }
};

/// S_p(x). Domain is [0,1); x = 1 is rejected, never wrapped.
Rat01 apply_padic(const PadicMap& map, const Rat01& x);

/// The p preimages {(x+k)/p : k = 0..p-1} of x in ascending order.
std::vector<Rat01> preimages_padic(const PadicMap& map, const Rat01& x);

/// Whether the Dirac measure at x is invariant, i.e. S_p(x) = x.
/// Equivalently x is one of k/(p-1), k = 0..p-2.
bool dirac_invariant(const PadicMap& map, const Rat01& x);

/// The Dirac fixed points k/(p-1), k = 0..p-2, ascending.
std::vector<Rat01> dirac_fixed_points(int p);

/// A piecewise-increasing map with rational breakpoints
/// 0 = a_1 < ... < a_{p+1} = 1 and affine branches; branch k is the unique
/// increasing affine bijection [a_k, a_{k+1}] -> [0,1].
class PiecewiseMap {
public:
    static PiecewiseMap from_breakpoints(std::vector<Rat01> breakpoints);

    /// S_p written with p equal-width affine branches.
    static PiecewiseMap padic(int p);

    int branch_count() const { return static_cast<int>(breakpoints_.size()) - 1; }
    const std::vector<Rat01>& breakpoints() const { return breakpoints_; }

    /// f_k(x) = slope*x + intercept on [a_k, a_{k+1}], k is 1-based.
    Rat slope(int k) const;
    Rat intercept(int k) const;

private:
    explicit PiecewiseMap(std::vector<Rat01> breakpoints) : breakpoints_(std::move(breakpoints)) {}
    void check_branch(int k) const;
    std::vector<Rat01> breakpoints_;
};

/// S(x) for x in [0,1); selects the branch whose interval contains x.
Rat01 apply_piecewise(const PiecewiseMap& map, const Rat01& x);

/// The unique preimage of y under branch k (1-based), a point of [a_k, a_{k+1}].
Rat01 branch_inverse(const PiecewiseMap& map, int k, const Rat01& y);

}  // namespace picm
