#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "picm/rational.hpp"

namespace picm {

/// One atom of a purely atomic measure: location in [0,1), positive mass.
struct Atom {
    Rat01 location;
    Rat mass;
};

/// Finite atomic measure: sorted distinct locations, total mass <= 1.
struct AtomicMeasure {
    std::vector<Atom> atoms;

    /// Validates sorting, distinctness, positivity and total mass.
    static AtomicMeasure from_atoms(std::vector<Atom> atoms);
    Rat total_mass() const;
};

struct GridPoint {
    Rat01 x;
    Rat value;
};

class Cdf;

struct PolyData {
    std::vector<Rat> coeffs;  // phi(x) = sum coeffs[j] * x^j
};
struct PiecewiseLinearData {
    std::vector<GridPoint> knots;  // strictly increasing x, non-decreasing values, (0,0)..(1,1)
};
struct JumpData {
    std::vector<Atom> atoms;       // masses rescaled so they sum to 1
    std::vector<Rat> prefix_mass;  // prefix_mass[i] = sum of masses of atoms[0..i-1]
};
struct BernoulliData {
    std::vector<Rat> weights;  // size p >= 2, each in [0,1), summing to 1
};
struct MixtureData {
    std::vector<std::pair<Rat, Cdf>> parts;  // weights >= 0 summing to 1
};
struct SampledData {
    std::vector<GridPoint> grid;  // strictly increasing x from 0 to 1, values 0 to 1
};

struct CdfNode;
class Cdf;

struct EvalOptions {
    unsigned bernoulli_digits = 64;  // truncation depth for Bernoulli digit sums
};

struct EvalValue {
    Rat value;
    bool exact = true;  // false when truncated (Bernoulli tail) or interpolated (sampled)
};

/// Left-continuous value phi(x), x in [0,1].
EvalValue eval(const Cdf& cdf, const Rat01& x, const EvalOptions& opts = {});

/// Right limit phi(x+), x in [0,1).
EvalValue eval_right(const Cdf& cdf, const Rat01& x, const EvalOptions& opts = {});

/// A distribution function of class P: non-decreasing, left-continuous,
/// phi(0) = 0, phi(1) = 1. Immutable value type; cheap to copy.
///
/// Variants: identity, poly (exact polynomial members of the class, used as
/// transfer-operator inputs like x^2), piecewise linear, jump (atomic
/// measure), Bernoulli digit CDF, mixture, sampled grid (numeric pipelines
/// only; evaluation off-grid interpolates and is flagged approximate).
class Cdf {
public:
    enum class Kind { identity, poly, piecewise_linear, jump, bernoulli, mixture, sampled };

    static Cdf identity();
    static Cdf poly(std::vector<Rat> coeffs);
    static Cdf piecewise_linear(std::vector<GridPoint> knots);
    /// Atoms sorted by location, masses > 0, total in (0,1]; masses are
    /// rescaled so the CDF reaches 1.
    static Cdf jump(std::vector<Atom> atoms);
    static Cdf bernoulli(int p, std::vector<Rat> weights);
    static Cdf mixture(std::vector<std::pair<Rat, Cdf>> parts);
    static Cdf sampled(std::vector<GridPoint> grid);

    Cdf(const Cdf&) = default;
    Cdf(Cdf&&) noexcept = default;
    Cdf& operator=(const Cdf&) = default;
    Cdf& operator=(Cdf&&) noexcept = default;
    ~Cdf() = default;

    Kind kind() const;

    const PolyData& as_poly() const;
    const PiecewiseLinearData& as_piecewise_linear() const;
    const JumpData& as_jump() const;
    const BernoulliData& as_bernoulli() const;
    const MixtureData& as_mixture() const;
    const SampledData& as_sampled() const;

    /// True when every evaluation is exact (no sampled component).
    bool is_exact() const;

private:
    explicit Cdf(std::shared_ptr<const CdfNode> node) : node_(std::move(node)) {}
    friend EvalValue eval(const Cdf&, const Rat01&, const EvalOptions&);
    friend EvalValue eval_right(const Cdf&, const Rat01&, const EvalOptions&);
    std::shared_ptr<const CdfNode> node_;
};

/// Jump CDF of a normalized atomic measure (total mass must be exactly 1).
Cdf cdf_from_measure(const AtomicMeasure& m);

/// Atomic measure of a jump CDF (inverse of cdf_from_measure).
AtomicMeasure measure_from_cdf(const Cdf& cdf);

/// n equally spaced points i/(n-1), i = 0..n-1; requires n >= 2.
std::vector<Rat01> uniform_grid(std::size_t n);

}  // namespace picm
