#pragma once

#include <functional>
#include <optional>

#include "picm/cdf.hpp"
#include "picm/maps.hpp"

namespace picm {

/// Term budget for summations that have to be evaluated term by term
/// (sampled grids, arbitrary callables). Closed-form aggregation paths
/// (identity, poly, piecewise-linear, jump, Bernoulli) are not metered.
/// PICM_BUDGET overrides the built-in default of 2^26.
std::uint64_t default_term_budget();

struct TransferOptions {
    std::uint64_t term_budget = 0;   // 0 means default_term_budget()
    unsigned bernoulli_digits = 64;  // evaluation depth for Bernoulli CDFs
};

/// One application of the transfer operator at x:
/// sum_{k=0}^{p-1} [phi((x+k)/p) - phi(k/p)], summed literally from p
/// pointwise evaluations.
EvalValue transfer_apply(const PadicMap& map, const Cdf& cdf, const Rat01& x,
                         const TransferOptions& opts = {});

/// General piecewise version: sum_k [phi(f_k^{-1}(x)) - phi(f_k^{-1}(0))].
EvalValue transfer_apply(const PiecewiseMap& map, const Cdf& cdf, const Rat01& x,
                         const TransferOptions& opts = {});

/// m-th transfer power for S_p from its closed form
/// sum_{k=0}^{p^m-1} [phi((x+k)/p^m) - phi(k/p^m)], never by composition.
/// The sum is aggregated exactly per CDF variant (arithmetic series,
/// floor counts, power sums), so huge p^m stay cheap; only the sampled
/// variant falls back to literal summation under the term budget.
EvalValue transfer_power_padic(int p, const Cdf& cdf, std::uint64_t m, const Rat01& x,
                               const TransferOptions& opts = {});

/// The same closed-form sum for an arbitrary evaluator, term by term under
/// the budget. Used for cross-checks and as the sampled fallback.
EvalValue transfer_power_fn(int p, std::uint64_t m, const Rat01& x,
                            const std::function<EvalValue(const Rat01&)>& phi,
                            const TransferOptions& opts = {});

/// Windowed Cesaro mean of (T^m phi)(x) for m in [m_lo, m_hi]. A proxy for
/// a Banach limit: agrees with it whenever the iterate sequence converges,
/// which covers every certified example; results are marked as proxy values
/// at the CLI boundary.
EvalValue cesaro_proxy(int p, const Cdf& cdf, const Rat01& x, std::uint64_t m_lo,
                       std::uint64_t m_hi, const TransferOptions& opts = {});

struct ConvergenceReport {
    std::vector<std::uint64_t> m_values;
    std::vector<Rat> sup_errors;  // sup over the grid of |T^m phi(x) - x|
    std::vector<Rat01> grid;
    bool exact = true;
};

/// sup_errors[i] = max over grid of |T^{m_values[i]} phi(x) - x|.
ConvergenceReport convergence_profile(int p, const Cdf& cdf, const std::vector<Rat01>& grid,
                                      std::uint64_t m_max, const TransferOptions& opts = {});

/// Result of normalizing a raw limit grid: either a CDF of class P, or the
/// degenerate unit point mass at 1 (which falls outside the class).
struct LimitCdf {
    std::optional<Cdf> cdf;
    bool unit_point_mass_at_one = false;
};

/// Turns a raw grid of Cesaro-proxy values into a distribution function:
/// validates monotonicity, estimates the left limit at 1 by secant
/// extrapolation, rescales by it, and recognizes the identity when the
/// normalized grid matches it node for node. A zero limit yields the unit
/// point mass at 1.
LimitCdf normalize_limit_grid(const std::vector<GridPoint>& raw);

}  // namespace picm
