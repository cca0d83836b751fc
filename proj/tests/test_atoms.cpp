#include <doctest.h>

#include "picm/atoms.hpp"
#include "picm/maps.hpp"
#include "picm/sampling.hpp"

using namespace picm;

namespace {
Rat01 r(const char* s) { return Rat01::from_string(s); }
Rat q(const char* s) { return rat_from_string(s); }

// p-adic refinement [i/p^j, (i+1)/p^j) down to cells finer than every atom gap
std::vector<std::pair<Rat01, Rat01>> refinement(int p, int depth) {
    std::vector<std::pair<Rat01, Rat01>> out;
    BigInt cells = 1;
    for (int j = 1; j <= depth; ++j) {
        cells *= p;
        for (BigInt i = 0; i < cells; ++i)
            out.emplace_back(Rat01::reduce(i, cells), Rat01::reduce(i + 1, cells));
    }
    return out;
}
}  // namespace

TEST_CASE("level-1 jump solutions") {
    const Cdf a = jump_level1(2, 0);
    REQUIRE(a.as_jump().atoms.size() == 1);
    CHECK(a.as_jump().atoms[0].location == Rat01::zero());
    CHECK(a.as_jump().atoms[0].mass == 1);

    const Cdf b = jump_level1(3, 1);
    CHECK(b.as_jump().atoms[0].location == r("1/2"));

    CHECK_THROWS_AS(jump_level1(2, 1), std::out_of_range);
    CHECK_THROWS_AS(jump_level1(2, -1), std::out_of_range);
}

TEST_CASE("cycle jump solutions put mass 1/m on each point") {
    const Cdf two = jump_from_cycle(cycle_of(2, r("1/3")));
    REQUIRE(two.as_jump().atoms.size() == 2);
    CHECK(two.as_jump().atoms[0].location == r("1/3"));
    CHECK(two.as_jump().atoms[0].mass == q("1/2"));
    CHECK(two.as_jump().atoms[1].location == r("2/3"));

    const Cdf three = jump_from_cycle(cycle_of(2, r("1/7")));
    REQUIRE(three.as_jump().atoms.size() == 3);
    for (const auto& atom : three.as_jump().atoms) CHECK(atom.mass == q("1/3"));

    const Cdf one = jump_from_cycle(cycle_of(3, r("1/2")));
    REQUIRE(one.as_jump().atoms.size() == 1);
    CHECK(one.as_jump().atoms[0].mass == 1);

    CycleSet mangled = cycle_of(2, r("1/7"));
    mangled.points[0] = r("2/7");  // duplicate point, no longer the orbit
    CHECK_THROWS_AS(jump_from_cycle(mangled), validation_error);
}

TEST_CASE("equivalence of the measure bridge and the cycle construction") {
    const AtomicMeasure m = AtomicMeasure::from_atoms(
        {{r("1/7"), q("1/3")}, {r("2/7"), q("1/3")}, {r("4/7"), q("1/3")}});
    const Cdf via_measure = cdf_from_measure(m);
    const Cdf via_cycle = jump_from_cycle(cycle_of(2, r("1/7")));
    REQUIRE(via_measure.as_jump().atoms.size() == via_cycle.as_jump().atoms.size());
    for (size_t i = 0; i < 3; ++i) {
        CHECK(via_measure.as_jump().atoms[i].location == via_cycle.as_jump().atoms[i].location);
        CHECK(via_measure.as_jump().atoms[i].mass == via_cycle.as_jump().atoms[i].mass);
    }
}

TEST_CASE("synthesize_jump") {
    JumpCoefficients single;
    single.p = 2;
    single.entries[{1, 0}] = q("1");
    const Cdf chi = synthesize_jump(single);
    REQUIRE(chi.as_jump().atoms.size() == 1);
    CHECK(chi.as_jump().atoms[0].location == Rat01::zero());

    JumpCoefficients two;
    two.p = 2;
    two.entries[{1, 0}] = q("1/2");
    two.entries[{2, 1}] = q("1/2");
    const Cdf mix = synthesize_jump(two);
    REQUIRE(mix.as_jump().atoms.size() == 3);
    CHECK(mix.as_jump().atoms[0].location == Rat01::zero());
    CHECK(mix.as_jump().atoms[0].mass == q("1/2"));
    CHECK(mix.as_jump().atoms[1].location == r("1/3"));
    CHECK(mix.as_jump().atoms[1].mass == q("1/4"));
    CHECK(mix.as_jump().atoms[2].location == r("2/3"));
    CHECK(mix.as_jump().atoms[2].mass == q("1/4"));

    JumpCoefficients level3;
    level3.p = 2;
    level3.entries[{3, 1}] = q("1/3");
    level3.entries[{3, 3}] = q("2/3");
    const Cdf six = synthesize_jump(level3);
    REQUIRE(six.as_jump().atoms.size() == 6);
    for (const auto& atom : six.as_jump().atoms) {
        const bool in_first = atom.location == r("1/7") || atom.location == r("2/7") ||
                              atom.location == r("4/7");
        CHECK(atom.mass == (in_first ? q("1/9") : q("2/9")));
    }
}

TEST_CASE("synthesize_jump rejects bad inputs") {
    JumpCoefficients off;
    off.p = 2;
    off.entries[{1, 0}] = q("1/2");
    CHECK_THROWS_AS(synthesize_jump(off), validation_error);  // sums to 1/2

    JumpCoefficients noncanonical;
    noncanonical.p = 2;
    noncanonical.entries[{3, 2}] = q("1");  // 2 is in the orbit of 1
    CHECK_THROWS_AS(synthesize_jump(noncanonical), std::invalid_argument);
}

TEST_CASE("decompose_jump inverts synthesis") {
    const Cdf cdf = Cdf::jump({{r("0/1"), q("1/2")}, {r("1/3"), q("1/4")}, {r("2/3"), q("1/4")}});
    const JumpCoefficients c = decompose_jump(2, cdf);
    REQUIRE(c.entries.size() == 2);
    CHECK(c.entries.at({1, 0}) == q("1/2"));
    CHECK(c.entries.at({2, 1}) == q("1/2"));

    const JumpCoefficients dirac3 = decompose_jump(3, Cdf::jump({{r("1/2"), q("1")}}));
    REQUIRE(dirac3.entries.size() == 1);
    CHECK(dirac3.entries.at({1, 1}) == 1);
}

TEST_CASE("decompose_jump rejects non-invariant inputs") {
    CHECK_THROWS_AS(decompose_jump(2, Cdf::jump({{r("1/2"), q("1")}})), not_invariant_error);
    CHECK_THROWS_WITH_AS(decompose_jump(2, Cdf::jump({{r("1/2"), q("1")}})),
                         doctest::Contains("not an invariant jump function"),
                         not_invariant_error);
    // charged cycle point with the wrong partner mass
    CHECK_THROWS_AS(decompose_jump(2, Cdf::jump({{r("1/3"), q("1/4")}, {r("2/3"), q("3/4")}})),
                    not_invariant_error);
    // partially charged cycle
    CHECK_THROWS_AS(decompose_jump(2, Cdf::jump({{r("1/3"), q("1")}})), not_invariant_error);
}

TEST_CASE("decompose after synthesize is the identity on coefficients") {
    Rng rng(2024);
    for (int p : {2, 3}) {
        // all canonical keys with level <= 5
        std::vector<std::pair<std::uint64_t, BigInt>> keys;
        for (std::uint64_t m = 1; m <= 5; ++m)
            for (const auto& c : enumerate_levels(p, m, 1 << 22)) keys.emplace_back(m, c.label);

        for (int trial = 0; trial < 40; ++trial) {
            JumpCoefficients coeffs;
            coeffs.p = p;
            const int picks = 1 + static_cast<int>(rng.below(5));
            Rat total = 0;
            for (int i = 0; i < picks; ++i) {
                const auto& key = keys[rng.below(keys.size())];
                const Rat w(BigInt(1 + rng.below(9)), BigInt(1 + rng.below(9)));
                coeffs.entries[key] += w;
                total += w;
            }
            for (auto& [key, alpha] : coeffs.entries) alpha /= total;

            const JumpCoefficients back = decompose_jump(p, synthesize_jump(coeffs));
            REQUIRE(back.entries.size() == coeffs.entries.size());
            for (const auto& [key, alpha] : coeffs.entries) CHECK(back.entries.at(key) == alpha);
        }
    }
}

TEST_CASE("synthesize after decompose is the identity on atom lists") {
    const Cdf cdf = Cdf::jump({{r("0/1"), q("1/3")},
                               {r("1/7"), q("1/9")},
                               {r("2/7"), q("1/9")},
                               {r("1/3"), q("1/6")},
                               {r("4/7"), q("1/9")},
                               {r("2/3"), q("1/6")}});
    const Cdf again = synthesize_jump(decompose_jump(2, cdf));
    const auto& a = cdf.as_jump().atoms;
    const auto& b = again.as_jump().atoms;
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].location == b[i].location);
        CHECK(a[i].mass == b[i].mass);
    }
}

TEST_CASE("invariance check: Dirac fixed points pass exactly") {
    const auto intervals = refinement(2, 6);
    const AtomicMeasure dirac0 = AtomicMeasure::from_atoms({{Rat01::zero(), q("1")}});
    const auto report = check_invariance_measure(2, dirac0, intervals);
    CHECK(report.all_zero);
    CHECK(report.max_abs_residual == 0);
}

TEST_CASE("invariance check: the two-cycle measure passes") {
    const AtomicMeasure mu =
        AtomicMeasure::from_atoms({{r("1/3"), q("1/2")}, {r("2/3"), q("1/2")}});
    CHECK(check_invariance_measure(2, mu, refinement(2, 6)).all_zero);
}

TEST_CASE("invariance check: a stray atom fails with residual -1") {
    const AtomicMeasure mu = AtomicMeasure::from_atoms({{r("1/4"), q("1")}});
    const auto report =
        check_invariance_measure(2, mu, {{r("1/4"), r("1/2")}});
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].residual == q("-1"));
    CHECK_FALSE(report.all_zero);
}

TEST_CASE("synthesized measures pass the interval check; off-cycle diracs fail") {
    Rng rng(555);
    for (int p : {2, 3}) {
        JumpCoefficients coeffs;
        coeffs.p = p;
        coeffs.entries[{1, 0}] = q("1/3");
        coeffs.entries[{2, 1}] = q("2/3");
        const AtomicMeasure mu = measure_from_cdf(synthesize_jump(coeffs));
        CHECK(check_invariance_measure(p, mu, refinement(p, 5)).all_zero);

        int failures = 0, trials = 0;
        while (trials < 50) {
            const Rat01 x = random_rat01_half_open(rng, 200);
            if (dirac_invariant(PadicMap(p), x)) continue;
            ++trials;
            const AtomicMeasure dirac = AtomicMeasure::from_atoms({{x, q("1")}});
            if (!check_invariance_measure(p, dirac, refinement(p, 9)).all_zero) ++failures;
        }
        CHECK(failures == trials);
    }
}

TEST_CASE("breakpoint atoms rule out invariance") {
    CHECK(breakpoint_atom_check(2, AtomicMeasure::from_atoms({{Rat01::zero(), q("1")}})));
    CHECK_FALSE(breakpoint_atom_check(2, AtomicMeasure::from_atoms({{r("1/2"), q("1")}})));
    CHECK(breakpoint_atom_check(
        3, AtomicMeasure::from_atoms({{r("1/8"), q("1/2")}, {r("3/8"), q("1/2")}})));
}
