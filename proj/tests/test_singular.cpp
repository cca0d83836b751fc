#include <doctest.h>

#include <cmath>

#include "picm/sampling.hpp"
#include "picm/singular.hpp"

using namespace picm;

namespace {
Rat01 r(const char* s) { return Rat01::from_string(s); }
Rat q(const char* s) { return rat_from_string(s); }

BernoulliWeights skew() { return BernoulliWeights::make(2, {q("1/4"), q("3/4")}); }

Rat rat_pow(const Rat& base, unsigned e) {
    Rat out = 1;
    for (unsigned i = 0; i < e; ++i) out *= base;
    return out;
}
}  // namespace

TEST_CASE("bernoulli_eval worked values") {
    const BernoulliWeights uniform = BernoulliWeights::make(2, {q("1/2"), q("1/2")});
    CHECK(bernoulli_eval(uniform, r("5/8"), 3).value == q("5/8"));
    CHECK(uniform.is_uniform());

    CHECK(bernoulli_eval(skew(), r("1/2"), 1).value == q("1/4"));
    CHECK_FALSE(skew().is_uniform());

    const BernoulliWeights w3 = BernoulliWeights::make(3, {q("1/2"), q("1/3"), q("1/6")});
    CHECK(bernoulli_eval(w3, r("2/3"), 1).value == q("5/6"));
}

TEST_CASE("uniform weights reproduce the identity at terminating expansions") {
    for (int p : {2, 3, 5}) {
        std::vector<Rat> w(p, Rat(1, p));
        const BernoulliWeights bw = BernoulliWeights::make(p, w);
        Rng rng(101 + p);
        for (int i = 0; i < 100; ++i) {
            const unsigned j = 1 + static_cast<unsigned>(rng.below(8));
            const BigInt den = pow(BigInt(p), j);
            const BigInt num = BigInt(rng.below(1000)) % (den + 1);
            const Rat01 x = Rat01::reduce(num, den);
            const EvalValue v = bernoulli_eval(bw, x, j + 1);
            CHECK(v.exact);
            CHECK(v.value == x.value());
        }
    }
}

TEST_CASE("bernoulli_eval is monotone and tightens with more digits") {
    const BernoulliWeights bw = skew();
    Rng rng(211);
    for (int i = 0; i < 200; ++i) {
        Rat01 a = random_rat01(rng, 3000);
        Rat01 b = random_rat01(rng, 3000);
        if (b < a) std::swap(a, b);
        CHECK(bernoulli_eval(bw, a, 32).value <= bernoulli_eval(bw, b, 32).value);
    }
    // |value(d) - value(d')| <= (max w)^{min(d,d')}
    for (int i = 0; i < 100; ++i) {
        const Rat01 x = random_rat01(rng, 3000);
        const unsigned d1 = 8 + static_cast<unsigned>(rng.below(20));
        const unsigned d2 = 8 + static_cast<unsigned>(rng.below(20));
        Rat diff = bernoulli_eval(bw, x, d1).value - bernoulli_eval(bw, x, d2).value;
        if (diff < 0) diff = -diff;
        const unsigned dmin = std::min(d1, d2);
        CHECK(diff <= rat_pow(q("3/4"), dmin));
    }
}

TEST_CASE("invariance residuals vanish exactly for exact members") {
    Rng rng(307);
    const auto points = random_points(rng, 200, 2000);
    const auto id_report = verify_invariance(2, Cdf::identity(), points, 0);
    CHECK(id_report.pass);
    CHECK(id_report.exact);
    CHECK(id_report.max_residual == 0);

    const Cdf phi21 = jump_from_cycle(cycle_of(2, r("1/3")));
    Rng rng2(308);
    const auto report = verify_invariance(2, phi21, random_points(rng2, 1000, 5000), 0);
    CHECK(report.pass);
    CHECK(report.max_residual == 0);
}

TEST_CASE("the skew Bernoulli family satisfies the equation within truncation") {
    Rng rng(401);
    const auto points = random_points(rng, 100, 10000);
    EvalOptions eo;
    eo.bernoulli_digits = 64;
    const auto report =
        verify_invariance(2, skew().to_cdf(), points, q("1/1000000000"), eo);
    CHECK(report.pass);

    // residuals decay geometrically in the digit budget
    Rat prev_max = -1;
    for (unsigned digits : {12u, 24u, 48u}) {
        EvalOptions opts;
        opts.bernoulli_digits = digits;
        const auto rep = verify_invariance(2, skew().to_cdf(), points, q("1"), opts);
        if (prev_max >= 0) CHECK(rep.max_residual * 16 <= prev_max);
        prev_max = rep.max_residual;
        CHECK(rep.max_residual <= rat_pow(q("3/4"), digits - 1));
    }
}

TEST_CASE("a CDF that breaks the equation is reported") {
    // an asymmetric two-atom jump is not invariant
    const Cdf bad = Cdf::jump({{r("1/3"), q("1/4")}, {r("2/3"), q("3/4")}});
    Rng rng(409);
    const auto report = verify_invariance(2, bad, random_points(rng, 50, 100), 0);
    CHECK_FALSE(report.pass);
    CHECK(report.max_residual > 0);
}

TEST_CASE("extract_parts on pure components") {
    const PartsReport id_parts = extract_parts(2, Cdf::identity(), 6, 64);
    CHECK(id_parts.ac_slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id_parts.jump.entries.empty());
    CHECK(std::abs(id_parts.singular_mass) < 1e-12);
    CHECK(id_parts.decomposition_ok);

    const Cdf phi21 = jump_from_cycle(cycle_of(2, r("1/3")));
    const PartsReport jump_parts = extract_parts(2, phi21, 6, 64);
    CHECK(jump_parts.ac_slope == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(jump_parts.jump.entries.size() == 1);
    CHECK(jump_parts.jump.entries.at({2, 1}) == 1);
    CHECK(std::abs(jump_parts.singular_mass) < 1e-12);
}

TEST_CASE("extract_parts recovers a constructed three-part mixture") {
    const Cdf mix = Cdf::mixture({{q("3/10"), Cdf::identity()},
                                  {q("1/2"), jump_level1(2, 0)},
                                  {q("1/5"), skew().to_cdf()}});
    const PartsReport parts = extract_parts(2, mix, 8, 512);
    CHECK(std::abs(parts.ac_slope - 0.3) < 1e-3);
    REQUIRE(parts.jump.entries.size() == 1);
    CHECK(parts.jump.entries.at({1, 0}) == q("1/2"));  // exact one-sided limits
    CHECK(std::abs(parts.singular_mass - 0.2) < 1e-3);
    CHECK(parts.decomposition_ok);
    CHECK(parts.mass_balance == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("an overweight jump makes the remainder go negative") {
    // a lone atom on a 2-cycle point claims coefficient 2, which overshoots
    const Cdf lone = Cdf::jump({{r("1/3"), q("1")}});
    const PartsReport parts = extract_parts(2, lone, 4, 64);
    CHECK_FALSE(parts.decomposition_ok);
    CHECK(parts.min_remainder < -0.5);
}
