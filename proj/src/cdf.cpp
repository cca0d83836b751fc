#include "picm/cdf.hpp"

#include <algorithm>
#include <variant>

namespace picm {

namespace {
struct IdentityData {};
}  // namespace

// Variant order matches Cdf::Kind.
struct CdfNode {
    std::variant<IdentityData, PolyData, PiecewiseLinearData, JumpData, BernoulliData,
                 MixtureData, SampledData>
        data;
};

namespace {

void validate_monotone_grid(const std::vector<GridPoint>& g, const char* what) {
    if (g.size() < 2) throw validation_error(std::string(what) + ": need at least two points");
    if (!g.front().x.is_zero() || g.front().value != 0)
        throw validation_error(std::string(what) + ": must start at (0, 0)");
    if (!g.back().x.is_one() || g.back().value != 1)
        throw validation_error(std::string(what) + ": must end at (1, 1)");
    for (size_t i = 0; i + 1 < g.size(); ++i) {
        if (!(g[i].x < g[i + 1].x))
            throw validation_error(std::string(what) + ": x values must be strictly increasing");
        if (g[i].value > g[i + 1].value)
            throw validation_error(std::string(what) + ": values must be non-decreasing");
    }
}

Rat poly_eval(const std::vector<Rat>& coeffs, const Rat& x) {
    Rat acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Rat interpolate(const std::vector<GridPoint>& g, const Rat01& x) {
    auto it = std::lower_bound(g.begin(), g.end(), x,
                               [](const GridPoint& gp, const Rat01& v) { return gp.x < v; });
    if (it != g.end() && it->x == x) return it->value;
    const GridPoint& hi = *it;
    const GridPoint& lo = *(it - 1);
    const Rat t = (x.value() - lo.x.value()) / (hi.x.value() - lo.x.value());
    return lo.value + t * (hi.value - lo.value);
}

EvalValue eval_bernoulli(const BernoulliData& data, const Rat01& x, unsigned digits) {
    const int p = static_cast<int>(data.weights.size());
    if (x.is_one()) return {Rat(1), true};
    std::vector<Rat> partial(data.weights.size() + 1);  // partial[d] = w_0 + ... + w_{d-1}
    partial[0] = 0;
    for (size_t j = 0; j < data.weights.size(); ++j) partial[j + 1] = partial[j] + data.weights[j];

    Rat acc = 0;
    Rat prefix = 1;
    Rat r = x.value();
    for (unsigned n = 0; n < digits; ++n) {
        if (r == 0) return {acc, true};  // terminating expansion
        const Rat t = r * p;
        const size_t d = floor_rat(t).convert_to<size_t>();
        acc += prefix * partial[d];
        prefix *= data.weights[d];
        if (prefix == 0) return {acc, true};  // tail carries zero measure
        r = t - Rat(d);
    }
    return {acc, r == 0};
}

EvalValue eval_dispatch(const CdfNode& node, const Rat01& x, const EvalOptions& opts,
                        bool right) {
    return std::visit(
        [&](const auto& data) -> EvalValue {
            using T = std::decay_t<decltype(data)>;
            if constexpr (std::is_same_v<T, IdentityData>) {
                (void)data;
                return {x.value(), true};
            } else if constexpr (std::is_same_v<T, PolyData>) {
                return {poly_eval(data.coeffs, x.value()), true};
            } else if constexpr (std::is_same_v<T, PiecewiseLinearData>) {
                return {interpolate(data.knots, x), true};
            } else if constexpr (std::is_same_v<T, JumpData>) {
                const auto& atoms = data.atoms;
                size_t idx;
                if (right) {
                    // phi(x+) = mass of atoms with location <= x
                    idx = static_cast<size_t>(
                        std::upper_bound(
                            atoms.begin(), atoms.end(), x,
                            [](const Rat01& v, const Atom& a) { return v < a.location; }) -
                        atoms.begin());
                } else {
                    // phi(x) = mass of atoms with location < x (left-continuous)
                    idx = static_cast<size_t>(
                        std::lower_bound(
                            atoms.begin(), atoms.end(), x,
                            [](const Atom& a, const Rat01& v) { return a.location < v; }) -
                        atoms.begin());
                }
                return {data.prefix_mass[idx], true};
            } else if constexpr (std::is_same_v<T, BernoulliData>) {
                // continuous (all weights < 1), so the right limit equals the value
                return eval_bernoulli(data, x, opts.bernoulli_digits);
            } else if constexpr (std::is_same_v<T, MixtureData>) {
                Rat acc = 0;
                bool exact = true;
                for (const auto& [w, part] : data.parts) {
                    if (w == 0) continue;
                    EvalValue v = right ? eval_right(part, x, opts) : eval(part, x, opts);
                    acc += w * v.value;
                    exact = exact && v.exact;
                }
                return {acc, exact};
            } else {
                static_assert(std::is_same_v<T, SampledData>);
                auto it = std::lower_bound(
                    data.grid.begin(), data.grid.end(), x,
                    [](const GridPoint& gp, const Rat01& v) { return gp.x < v; });
                if (!right && it != data.grid.end() && it->x == x) return {it->value, true};
                return {interpolate(data.grid, x), false};
            }
        },
        node.data);
}

}  // namespace

Cdf Cdf::identity() {
    return Cdf(std::make_shared<const CdfNode>(CdfNode{IdentityData{}}));
}

Cdf Cdf::poly(std::vector<Rat> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    if (coeffs.empty() || coeffs[0] != 0)
        throw validation_error("poly CDF: constant term must be 0");
    Rat sum = 0;
    for (const auto& c : coeffs) sum += c;
    if (sum != 1) throw validation_error("poly CDF: coefficients must sum to 1 so phi(1) = 1");
    // monotonicity checked exactly on a fixed grid
    Rat prev = 0;
    for (int i = 1; i <= 256; ++i) {
        Rat v = poly_eval(coeffs, Rat(i, 256));
        if (v < prev) throw validation_error("poly CDF: not non-decreasing on [0,1]");
        prev = v;
    }
    return Cdf(std::make_shared<const CdfNode>(CdfNode{PolyData{std::move(coeffs)}}));
}

Cdf Cdf::piecewise_linear(std::vector<GridPoint> knots) {
    validate_monotone_grid(knots, "piecewise-linear CDF");
    return Cdf(std::make_shared<const CdfNode>(CdfNode{PiecewiseLinearData{std::move(knots)}}));
}

Cdf Cdf::jump(std::vector<Atom> atoms) {
    if (atoms.empty()) throw validation_error("jump CDF: needs at least one atom");
    Rat total = 0;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].mass <= 0) throw validation_error("jump CDF: masses must be positive");
        if (atoms[i].location.is_one())
            throw validation_error("jump CDF: atom locations must lie in [0,1)");
        if (i > 0 && !(atoms[i - 1].location < atoms[i].location))
            throw validation_error("jump CDF: atoms must be sorted by distinct locations");
        total += atoms[i].mass;
    }
    if (total > 1) throw validation_error("jump CDF: total mass exceeds 1");
    if (total != 1)
        for (auto& a : atoms) a.mass /= total;  // rescale so phi(1) = 1
    JumpData data{std::move(atoms), {}};
    data.prefix_mass.reserve(data.atoms.size() + 1);
    Rat acc = 0;
    data.prefix_mass.push_back(acc);
    for (const auto& a : data.atoms) {
        acc += a.mass;
        data.prefix_mass.push_back(acc);
    }
    return Cdf(std::make_shared<const CdfNode>(CdfNode{std::move(data)}));
}

Cdf Cdf::bernoulli(int p, std::vector<Rat> weights) {
    if (p < 2) throw domain_error("p must be >= 2");
    if (static_cast<int>(weights.size()) != p)
        throw validation_error("Bernoulli CDF: need exactly p weights");
    Rat sum = 0;
    for (const auto& w : weights) {
        if (w < 0) throw validation_error("Bernoulli CDF: weights must be non-negative");
        if (w >= 1)
            throw validation_error(
                "Bernoulli CDF: weight 1 degenerates to a point mass; use a jump CDF");
        sum += w;
    }
    if (sum != 1) throw validation_error("Bernoulli CDF: weights must sum to 1");
    return Cdf(std::make_shared<const CdfNode>(CdfNode{BernoulliData{std::move(weights)}}));
}

Cdf Cdf::mixture(std::vector<std::pair<Rat, Cdf>> parts) {
    if (parts.empty()) throw validation_error("mixture CDF: needs at least one component");
    Rat sum = 0;
    for (const auto& [w, part] : parts) {
        (void)part;
        if (w < 0) throw validation_error("mixture CDF: weights must be non-negative");
        sum += w;
    }
    if (sum != 1) throw validation_error("mixture CDF: weights must sum to 1");
    return Cdf(std::make_shared<const CdfNode>(CdfNode{MixtureData{std::move(parts)}}));
}

Cdf Cdf::sampled(std::vector<GridPoint> grid) {
    validate_monotone_grid(grid, "sampled CDF");
    return Cdf(std::make_shared<const CdfNode>(CdfNode{SampledData{std::move(grid)}}));
}

Cdf::Kind Cdf::kind() const { return static_cast<Kind>(node_->data.index()); }

const PolyData& Cdf::as_poly() const { return std::get<PolyData>(node_->data); }
const PiecewiseLinearData& Cdf::as_piecewise_linear() const {
    return std::get<PiecewiseLinearData>(node_->data);
}
const JumpData& Cdf::as_jump() const { return std::get<JumpData>(node_->data); }
const BernoulliData& Cdf::as_bernoulli() const { return std::get<BernoulliData>(node_->data); }
const MixtureData& Cdf::as_mixture() const { return std::get<MixtureData>(node_->data); }
const SampledData& Cdf::as_sampled() const { return std::get<SampledData>(node_->data); }

bool Cdf::is_exact() const {
    switch (kind()) {
        case Kind::sampled:
            return false;
        case Kind::mixture:
            for (const auto& [w, part] : as_mixture().parts) {
                (void)w;
                if (!part.is_exact()) return false;
            }
            return true;
        default:
            return true;
    }
}

EvalValue eval(const Cdf& cdf, const Rat01& x, const EvalOptions& opts) {
    return eval_dispatch(*cdf.node_, x, opts, /*right=*/false);
}

EvalValue eval_right(const Cdf& cdf, const Rat01& x, const EvalOptions& opts) {
    if (x.is_one()) throw domain_error("right limit undefined at x = 1");
    return eval_dispatch(*cdf.node_, x, opts, /*right=*/true);
}

AtomicMeasure AtomicMeasure::from_atoms(std::vector<Atom> atoms) {
    Rat total = 0;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].mass <= 0) throw validation_error("atomic measure: masses must be positive");
        if (atoms[i].location.is_one())
            throw validation_error("atomic measure: locations must lie in [0,1)");
        if (i > 0 && !(atoms[i - 1].location < atoms[i].location))
            throw validation_error("atomic measure: atoms must be sorted by distinct locations");
        total += atoms[i].mass;
    }
    if (total > 1) throw validation_error("atomic measure: total mass exceeds 1");
    return AtomicMeasure{std::move(atoms)};
}

Rat AtomicMeasure::total_mass() const {
    Rat total = 0;
    for (const auto& a : atoms) total += a.mass;
    return total;
}

Cdf cdf_from_measure(const AtomicMeasure& m) {
    if (m.total_mass() != 1) throw validation_error("measure must have total mass exactly 1");
    return Cdf::jump(m.atoms);
}

AtomicMeasure measure_from_cdf(const Cdf& cdf) {
    if (cdf.kind() != Cdf::Kind::jump)
        throw domain_error("measure_from_cdf expects a jump CDF");
    return AtomicMeasure{cdf.as_jump().atoms};
}

std::vector<Rat01> uniform_grid(std::size_t n) {
    if (n < 2) throw domain_error("grid needs at least two points");
    std::vector<Rat01> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(Rat01::reduce(BigInt(i), BigInt(n - 1)));
    return out;
}

}  // namespace picm
