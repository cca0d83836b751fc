#include "picm/transfer.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

namespace picm {

std::uint64_t default_term_budget() {
    if (const char* env = std::getenv("PICM_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{1} << 26;
}

namespace {

std::uint64_t resolve_budget(const TransferOptions& opts) {
    return opts.term_budget != 0 ? opts.term_budget : default_term_budget();
}

BigInt ceil_rat(const Rat& r) { return -floor_rat(-r); }

// sum_{k=0}^{q-1} k^i for i = 0..max_i, via the telescoping identity
// sum_{t<=i} binom(i+1,t) S_t = q^{i+1}
std::vector<Rat> power_sums(const BigInt& q, size_t max_i) {
    std::vector<Rat> s(max_i + 1);
    s[0] = Rat(q);
    std::vector<BigInt> qpow(max_i + 2);
    qpow[0] = 1;
    for (size_t i = 1; i < qpow.size(); ++i) qpow[i] = qpow[i - 1] * q;
    for (size_t i = 1; i <= max_i; ++i) {
        // binomials binom(i+1, t)
        BigInt binom = 1;  // binom(i+1, 0)
        Rat acc = 0;
        for (size_t t = 0; t < i; ++t) {
            acc += Rat(binom) * s[t];
            binom = binom * (BigInt(i) + 1 - t) / (BigInt(t) + 1);
        }
        s[i] = (Rat(qpow[i + 1]) - acc) / Rat(BigInt(i) + 1);
    }
    return s;
}

// closed-form T^m for a polynomial: sum_k [((x+k)/q)^j - (k/q)^j] expands into
// power sums of k
Rat transfer_poly(const PolyData& data, const BigInt& q, const Rat& x) {
    const size_t deg = data.coeffs.size() - 1;
    if (deg == 0) return 0;
    const std::vector<Rat> s = power_sums(q, deg > 0 ? deg - 1 : 0);
    Rat total = 0;
    Rat qpow = 1;  // q^j
    for (size_t j = 1; j <= deg; ++j) {
        qpow *= Rat(q);
        const Rat& c = data.coeffs[j];
        if (c == 0) continue;
        // sum_{i=0}^{j-1} binom(j,i) x^{j-i} S_i(q)
        BigInt binom = 1;  // binom(j, 0)
        std::vector<Rat> xpows(j + 1);
        xpows[0] = 1;
        for (size_t e = 1; e <= j; ++e) xpows[e] = xpows[e - 1] * x;
        Rat inner = 0;
        for (size_t i = 0; i < j; ++i) {
            inner += Rat(binom) * xpows[j - i] * s[i];
            binom = binom * (BigInt(j) - i) / (BigInt(i) + 1);
        }
        total += c * inner / qpow;
    }
    return total;
}

// closed-form T^m for a piecewise-linear CDF: each linear piece contributes an
// arithmetic series over the contiguous k-range it captures
Rat pl_grid_sum(const PiecewiseLinearData& data, const BigInt& q, const Rat& t) {
    const auto& knots = data.knots;
    Rat total = 0;
    for (size_t j = 0; j + 1 < knots.size(); ++j) {
        const Rat& u0 = knots[j].x.value();
        const Rat& u1 = knots[j + 1].x.value();
        const Rat& v0 = knots[j].value;
        const Rat slope = (knots[j + 1].value - v0) / (u1 - u0);
        const BigInt k_lo = ceil_rat(Rat(q) * u0 - t);
        const BigInt k_hi = ceil_rat(Rat(q) * u1 - t);  // exclusive
        if (k_hi <= k_lo) continue;
        const BigInt n = k_hi - k_lo;
        const Rat ksum = Rat((k_lo + k_hi - 1) * n, 2);
        total += Rat(n) * (v0 - slope * u0 + slope * t / Rat(q)) + slope * ksum / Rat(q);
    }
    return total;
}

Rat transfer_pl(const PiecewiseLinearData& data, const BigInt& q, const Rat01& x) {
    if (x.is_one()) return 1;  // telescoping
    return pl_grid_sum(data, q, x.value()) - pl_grid_sum(data, q, Rat(0));
}

// closed-form T^m for a jump CDF: the atom at y is crossed by exactly
// floor(qy) - floor(qy - x) of the q shifted copies
Rat transfer_jump(const JumpData& data, const BigInt& q, const Rat01& x) {
    Rat total = 0;
    for (const auto& atom : data.atoms) {
        const Rat qy = Rat(q) * atom.location.value();
        const BigInt count = floor_rat(qy) - floor_rat(qy - x.value());
        if (count != 0) total += atom.mass * Rat(count);
    }
    return total;
}

EvalValue transfer_power_impl(int p, const Cdf& cdf, std::uint64_t m, const Rat01& x,
                              const TransferOptions& opts) {
    const BigInt q = pow(BigInt(p), static_cast<unsigned>(m));
    switch (cdf.kind()) {
        case Cdf::Kind::identity:
            return {x.value(), true};
        case Cdf::Kind::poly:
            return {transfer_poly(cdf.as_poly(), q, x.value()), true};
        case Cdf::Kind::piecewise_linear:
            return {transfer_pl(cdf.as_piecewise_linear(), q, x), true};
        case Cdf::Kind::jump:
            return {transfer_jump(cdf.as_jump(), q, x), true};
        case Cdf::Kind::bernoulli: {
            // The truncated digit CDF telescopes under the p^m-term sum: the
            // first m digits of (x+k)/p^m are the digits of k, so every term
            // reduces to its weight prefix times the same shortened digit
            // sum of x, and the prefixes sum to 1.
            const unsigned digits = opts.bernoulli_digits;
            EvalOptions eo;
            eo.bernoulli_digits = digits > m ? digits - static_cast<unsigned>(m) : 0;
            EvalValue v = eval(cdf, x, eo);
            if (digits <= m) v.exact = x.is_zero() || x.is_one();
            return v;
        }
        case Cdf::Kind::mixture: {
            Rat acc = 0;
            bool exact = true;
            for (const auto& [w, part] : cdf.as_mixture().parts) {
                if (w == 0) continue;
                EvalValue v = transfer_power_impl(p, part, m, x, opts);
                acc += w * v.value;
                exact = exact && v.exact;
            }
            return {acc, exact};
        }
        case Cdf::Kind::sampled: {
            EvalOptions eo;
            eo.bernoulli_digits = opts.bernoulli_digits;
            return transfer_power_fn(
                p, m, x, [&](const Rat01& z) { return eval(cdf, z, eo); }, opts);
        }
    }
    throw std::logic_error("unreachable CDF kind");
}

}  // namespace

EvalValue transfer_apply(const PadicMap& map, const Cdf& cdf, const Rat01& x,
                         const TransferOptions& opts) {
    EvalOptions eo;
    eo.bernoulli_digits = opts.bernoulli_digits;
    Rat acc = 0;
    bool exact = true;
    for (int k = 0; k < map.p; ++k) {
        const Rat01 zx = Rat01::from_rat((x.value() + k) / map.p);
        const Rat01 z0 = Rat01::reduce(k, map.p);
        const EvalValue a = eval(cdf, zx, eo);
        const EvalValue b = eval(cdf, z0, eo);
        acc += a.value - b.value;
        exact = exact && a.exact && b.exact;
    }
    return {acc, exact};
}

EvalValue transfer_apply(const PiecewiseMap& map, const Cdf& cdf, const Rat01& x,
                         const TransferOptions& opts) {
    EvalOptions eo;
    eo.bernoulli_digits = opts.bernoulli_digits;
    Rat acc = 0;
    bool exact = true;
    for (int k = 1; k <= map.branch_count(); ++k) {
        const Rat01 zx = branch_inverse(map, k, x);
        const Rat01 z0 = branch_inverse(map, k, Rat01::zero());
        const EvalValue a = eval(cdf, zx, eo);
        const EvalValue b = eval(cdf, z0, eo);
        acc += a.value - b.value;
        exact = exact && a.exact && b.exact;
    }
    return {acc, exact};
}

EvalValue transfer_power_padic(int p, const Cdf& cdf, std::uint64_t m, const Rat01& x,
                               const TransferOptions& opts) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (m < 1) throw domain_error("power must be >= 1");
    return transfer_power_impl(p, cdf, m, x, opts);
}

EvalValue transfer_power_fn(int p, std::uint64_t m, const Rat01& x,
                            const std::function<EvalValue(const Rat01&)>& phi,
                            const TransferOptions& opts) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (m < 1) throw domain_error("power must be >= 1");
    const BigInt q_big = pow(BigInt(p), static_cast<unsigned>(m));
    const std::uint64_t budget = resolve_budget(opts);
    if (q_big > budget) {
        const std::uint64_t required = q_big > (std::numeric_limits<std::uint64_t>::max)()
                                           ? (std::numeric_limits<std::uint64_t>::max)()
                                           : q_big.convert_to<std::uint64_t>();
        throw resource_error("summation needs p^m = " + q_big.str() +
                                 " terms; raise the budget (PICM_BUDGET) to at least that",
                             required);
    }
    const std::uint64_t q = q_big.convert_to<std::uint64_t>();
    Rat acc = 0;
    bool exact = true;
    for (std::uint64_t k = 0; k < q; ++k) {
        const EvalValue a = phi(Rat01::from_rat((x.value() + k) / Rat(q_big)));
        const EvalValue b = phi(Rat01::reduce(BigInt(k), q_big));
        acc += a.value - b.value;
        exact = exact && a.exact && b.exact;
    }
    return {acc, exact};
}

EvalValue cesaro_proxy(int p, const Cdf& cdf, const Rat01& x, std::uint64_t m_lo,
                       std::uint64_t m_hi, const TransferOptions& opts) {
    if (m_lo < 1 || m_hi < m_lo) throw domain_error("need 1 <= m_lo <= m_hi");
    Rat acc = 0;
    bool exact = true;
    for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
        const EvalValue v = transfer_power_padic(p, cdf, m, x, opts);
        acc += v.value;
        exact = exact && v.exact;
    }
    return {acc / Rat(BigInt(m_hi - m_lo + 1)), exact};
}

ConvergenceReport convergence_profile(int p, const Cdf& cdf, const std::vector<Rat01>& grid,
                                      std::uint64_t m_max, const TransferOptions& opts) {
    if (m_max < 1) throw domain_error("m_max must be >= 1");
    ConvergenceReport report;
    report.grid = grid;
    for (std::uint64_t m = 1; m <= m_max; ++m) {
        Rat sup = 0;
        for (const auto& x : grid) {
            const EvalValue v = transfer_power_padic(p, cdf, m, x, opts);
            Rat err = v.value - x.value();
            if (err < 0) err = -err;
            if (err > sup) sup = err;
            report.exact = report.exact && v.exact;
        }
        report.m_values.push_back(m);
        report.sup_errors.push_back(std::move(sup));
    }
    return report;
}

LimitCdf normalize_limit_grid(const std::vector<GridPoint>& raw) {
    if (raw.size() < 2) throw validation_error("limit grid needs at least two nodes");
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].value < 0 || raw[i].value > 1)
            throw validation_error("limit grid values must lie in [0,1]");
        if (i > 0) {
            if (!(raw[i - 1].x < raw[i].x))
                throw validation_error("limit grid nodes must be strictly increasing");
            if (raw[i - 1].value > raw[i].value)
                throw validation_error("limit grid values must be non-decreasing");
        }
    }

    // left limit at 1, by secant extrapolation through the last nodes below 1
    std::vector<const GridPoint*> interior;
    for (const auto& gp : raw)
        if (!gp.x.is_one()) interior.push_back(&gp);
    if (interior.empty()) throw validation_error("limit grid needs a node below 1");
    Rat alpha;
    if (interior.size() == 1) {
        alpha = interior.back()->value;
    } else {
        const GridPoint& a = *interior[interior.size() - 2];
        const GridPoint& b = *interior[interior.size() - 1];
        alpha = b.value +
                (b.value - a.value) / (b.x.value() - a.x.value()) * (Rat(1) - b.x.value());
    }
    if (alpha > 1) alpha = 1;

    if (alpha == 0) return {std::nullopt, true};

    std::vector<GridPoint> out;
    out.reserve(raw.size() + 1);
    bool is_identity = true;
    for (const auto* gp : interior) {
        Rat v = gp->value / alpha;
        if (v > 1) v = 1;
        is_identity = is_identity && v == gp->x.value();
        out.push_back({gp->x, std::move(v)});
    }
    out.push_back({Rat01::one(), Rat(1)});
    if (is_identity) return {Cdf::identity(), false};
    return {Cdf::sampled(std::move(out)), false};
}

}  // namespace picm
