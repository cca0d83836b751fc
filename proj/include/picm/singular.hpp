#pragma once

#include "picm/atoms.hpp"
#include "picm/cdf.hpp"
#include "picm/transfer.hpp"

namespace picm {

/// Digit weights of a base-p Bernoulli measure. Uniform weights give the
/// identity (Lebesgue); non-uniform weights give a continuous singular CDF.
/// Membership in the invariant family is verified, not assumed.
struct BernoulliWeights {
    int p = 0;
    std::vector<Rat> w;

    static BernoulliWeights make(int p, std::vector<Rat> w);
    Cdf to_cdf() const;
    bool is_uniform() const;
};

/// Truncated digit sum: with base-p digits d_1 d_2 ... of x,
/// sum_{n <= digits} (prod_{i<n} w_{d_i}) (sum_{j<d_n} w_j).
/// Truncation error is at most (max_k w_k)^digits; exact for terminating
/// expansions.
EvalValue bernoulli_eval(const BernoulliWeights& bw, const Rat01& x, unsigned digits);

struct ResidualReport {
    std::vector<Rat01> points;
    std::vector<Rat> residuals;  // |phi(x) - sum_k [phi((x+k)/p) - phi(k/p)]|
    Rat max_residual;
    bool pass = true;   // every residual <= tol
    bool exact = true;  // every evaluation was exact
};

/// Pointwise residual of the invariance equation at each given point,
/// summed literally from p + 1 evaluations per point. Use tol = 0 for
/// exactly evaluable CDFs.
ResidualReport verify_invariance(int p, const Cdf& cdf, const std::vector<Rat01>& points,
                                 const Rat& tol, const EvalOptions& opts = {});

struct ExtractOptions {
    unsigned quotient_scale = 60;      // difference-quotient step h = p^{-quotient_scale}
    unsigned bernoulli_digits = 192;   // evaluation depth during extraction
    double negative_tolerance = 1e-9;  // how negative the remainder may dip
    std::uint64_t level_budget = 0;    // 0 means default_term_budget()
};

/// Canonical three-part split of an invariant CDF.
struct PartsReport {
    double ac_slope = 0;      // weight of the identity part
    JumpCoefficients jump;    // exact cycle coefficients (from exact right limits)
    double singular_mass = 0; // remainder mass at 1
    double mass_balance = 0;  // ac_slope + jump total + singular_mass
    std::vector<std::pair<Rat01, double>> residual_grid;  // sampled singular remainder
    bool decomposition_ok = true;  // remainder stayed above -negative_tolerance
    double min_remainder = 0;
};

/// Splits phi into ac_slope * identity + jump part + singular remainder.
/// Jump coefficients come from exact one-sided limits at every cycle of
/// level <= max_level; the identity weight is the median difference
/// quotient over the probe grid at step p^{-quotient_scale} (an
/// almost-everywhere-derivative surrogate that is blind to the
/// measure-zero jump and singular sets).
PartsReport extract_parts(int p, const Cdf& cdf, std::uint64_t max_level, std::uint64_t grid_n,
                          const ExtractOptions& opts = {});

}  // namespace picm
