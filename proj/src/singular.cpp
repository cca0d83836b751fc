#include "picm/singular.hpp"

#include <algorithm>

namespace picm {

BernoulliWeights BernoulliWeights::make(int p, std::vector<Rat> w) {
    Cdf::bernoulli(p, w);  // reuse the CDF validation
    return BernoulliWeights{p, std::move(w)};
}

Cdf BernoulliWeights::to_cdf() const { return Cdf::bernoulli(p, w); }

bool BernoulliWeights::is_uniform() const {
    const Rat u(1, p);
    return std::all_of(w.begin(), w.end(), [&](const Rat& x) { return x == u; });
}

EvalValue bernoulli_eval(const BernoulliWeights& bw, const Rat01& x, unsigned digits) {
    EvalOptions opts;
    opts.bernoulli_digits = digits;
    return eval(bw.to_cdf(), x, opts);
}

ResidualReport verify_invariance(int p, const Cdf& cdf, const std::vector<Rat01>& points,
                                 const Rat& tol, const EvalOptions& opts) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (tol < 0) throw domain_error("tolerance must be >= 0");
    const PadicMap map(p);
    TransferOptions topts;
    topts.bernoulli_digits = opts.bernoulli_digits;

    ResidualReport report;
    report.max_residual = 0;
    report.points = points;
    report.residuals.reserve(points.size());
    for (const auto& x : points) {
        const EvalValue lhs = eval(cdf, x, opts);
        const EvalValue rhs = transfer_apply(map, cdf, x, topts);
        Rat res = lhs.value - rhs.value;
        if (res < 0) res = -res;
        report.exact = report.exact && lhs.exact && rhs.exact;
        if (res > tol) report.pass = false;
        if (res > report.max_residual) report.max_residual = res;
        report.residuals.push_back(std::move(res));
    }
    return report;
}

namespace {

// raw (unnormalized) jump part: mass alpha/m at each point of each keyed cycle
struct RawJump {
    std::vector<Atom> atoms;  // sorted by location

    Rat value_at(const Rat& x) const {
        Rat sum = 0;
        for (const auto& a : atoms) {
            if (a.location.value() < x)
                sum += a.mass;
            else
                break;
        }
        return sum;
    }
};

}  // namespace

PartsReport extract_parts(int p, const Cdf& cdf, std::uint64_t max_level, std::uint64_t grid_n,
                          const ExtractOptions& opts) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (max_level < 1) throw domain_error("max_level must be >= 1");
    if (grid_n < 8) throw domain_error("grid_n must be >= 8");

    EvalOptions eo;
    eo.bernoulli_digits = opts.bernoulli_digits;
    const std::uint64_t budget =
        opts.level_budget != 0 ? opts.level_budget : default_term_budget();

    PartsReport report;
    report.jump.p = p;

    // jump coefficients from exact one-sided limits at each cycle representative
    RawJump raw_jump;
    for (std::uint64_t m = 1; m <= max_level; ++m) {
        for (const auto& cycle : enumerate_levels(p, m, budget)) {
            const Rat01& rep = cycle.points.front();
            const Rat jump_size =
                eval_right(cdf, rep, eo).value - eval(cdf, rep, eo).value;
            if (jump_size <= 0) continue;
            report.jump.entries[{m, cycle.label}] = jump_size * BigInt(m);
            for (const auto& pt : cycle.points) raw_jump.atoms.push_back({pt, jump_size});
        }
    }
    std::sort(raw_jump.atoms.begin(), raw_jump.atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });

    // identity weight: median difference quotient of (phi - jump part) at the
    // probe grid, step h = p^{-quotient_scale}
    const Rat h = Rat(1) / pow(BigInt(p), opts.quotient_scale);
    std::vector<Rat> quotients;
    quotients.reserve(grid_n);
    for (std::uint64_t i = 0; i < grid_n; ++i) {
        const Rat01 x = Rat01::reduce(BigInt(i), BigInt(grid_n));
        const Rat01 xh = Rat01::from_rat(x.value() + h);
        const Rat dphi = eval(cdf, xh, eo).value - eval(cdf, x, eo).value;
        const Rat djump = raw_jump.value_at(xh.value()) - raw_jump.value_at(x.value());
        quotients.push_back((dphi - djump) / h);
    }
    std::sort(quotients.begin(), quotients.end());
    Rat alpha = quotients.size() % 2 == 1
                    ? quotients[quotients.size() / 2]
                    : (quotients[quotients.size() / 2 - 1] + quotients[quotients.size() / 2]) / 2;
    if (alpha < 0) alpha = 0;
    if (alpha > 1) alpha = 1;
    report.ac_slope = rat_to_double(alpha);

    // singular remainder on the reporting grid
    Rat jump_total = report.jump.total();
    Rat min_remainder = 1;
    report.residual_grid.reserve(grid_n + 1);
    for (std::uint64_t i = 0; i <= grid_n; ++i) {
        const Rat01 x = Rat01::reduce(BigInt(i), BigInt(grid_n));
        const Rat remainder =
            eval(cdf, x, eo).value - alpha * x.value() - raw_jump.value_at(x.value());
        if (remainder < min_remainder) min_remainder = remainder;
        report.residual_grid.emplace_back(x, rat_to_double(remainder));
    }
    const Rat singular = Rat(1) - alpha - jump_total;  // remainder at x = 1
    report.singular_mass = rat_to_double(singular);
    report.mass_balance = report.ac_slope + rat_to_double(jump_total) + report.singular_mass;
    report.min_remainder = rat_to_double(min_remainder);
    report.decomposition_ok = report.min_remainder >= -opts.negative_tolerance;
    return report;
}

}  // namespace picm
