"""Smoke tests for the python bindings."""

import math

import pytest

import picm


def test_rat01_basics():
    x = picm.Rat01("2/6")
    assert str(x) == "1/3"
    assert x.num == 1 and x.den == 3
    assert float(x) == pytest.approx(1 / 3)
    assert picm.Rat01(1, 2) == picm.Rat01("1/2")
    with pytest.raises(Exception):
        picm.Rat01("3/2")


def test_number_theory():
    assert picm.mul_order(2, 7) == 3
    assert picm.mod_pow(2, 10, 1000) == 24
    # p^m - 1 overflows 64-bit; the bindings carry big ints as python ints
    assert picm.mod_pow(5, 40, 5**40 - 1) == 1


def test_dynamics():
    assert str(picm.apply_padic(2, "1/3")) == "2/3"
    assert [str(v) for v in picm.preimages_padic(2, "1/3")] == ["1/6", "2/3"]
    assert picm.dirac_invariant(3, "1/2")
    assert not picm.dirac_invariant(2, "1/3")


def test_cycles():
    assert picm.cycle_level(2, "1/3") == 2
    assert picm.cycle_level(2, "1/2") is None
    c = picm.cycle_of(2, "1/7")
    assert c.level == 3 and c.label == 1
    assert [str(pt) for pt in c.points] == ["1/7", "2/7", "4/7"]
    assert [picm.count_levels(2, m) for m in (1, 2, 3, 6)] == [1, 1, 2, 9]
    assert len(picm.enumerate_levels(3, 2)) == 3


def test_transfer_closed_form():
    square = picm.Cdf.poly(["0", "0", "1"])
    out = picm.transfer_power(2, square, 3, "1/2")
    assert out["value"] == "15/32" and out["exact"]
    # huge powers stay cheap through the aggregated closed form
    out30 = picm.transfer_power(2, square, 30, "1/2")
    assert abs(out30["float"] - 0.5) < 1e-9


def test_jump_solutions_are_fixed_points():
    phi = picm.jump_from_cycle(picm.cycle_of(2, "1/3"))
    rep = picm.verify_invariance(2, phi, points=200, seed=5, tol="0")
    assert rep["pass"] and rep["exact"] and rep["max_residual"] == 0


def test_synthesis_roundtrip():
    coeffs = {(1, 0): "1/2", (2, 1): "1/2"}
    cdf = picm.synthesize_jump(2, coeffs)
    back = picm.decompose_jump(2, cdf)
    assert back == {(1, 0): "1/2", (2, 1): "1/2"}
    with pytest.raises(ValueError):
        picm.decompose_jump(2, picm.Cdf.jump([("1/2", "1")]))


def test_bernoulli():
    assert picm.bernoulli_eval(2, ["1/2", "1/2"], "5/8", 3)["value"] == "5/8"
    assert picm.bernoulli_eval(2, ["1/4", "3/4"], "1/2", 1)["value"] == "1/4"
    rep = picm.verify_invariance(
        2, picm.Cdf.bernoulli(2, ["1/4", "3/4"]), points=50, seed=7, tol="1/1000000000"
    )
    assert rep["pass"]


def test_extract_parts():
    mix = picm.Cdf.mixture(
        [
            ("3/10", picm.Cdf.identity()),
            ("1/2", picm.jump_level1(2, 0)),
            ("1/5", picm.Cdf.bernoulli(2, ["1/4", "3/4"])),
        ]
    )
    parts = picm.extract_parts(2, mix, max_level=6, grid_n=256)
    assert math.isclose(parts["ac_slope"], 0.3, abs_tol=1e-3)
    assert parts["jump"] == {(1, 0): "1/2"}
    assert math.isclose(parts["singular_mass"], 0.2, abs_tol=1e-3)


def test_cesaro_and_profile():
    square = picm.Cdf.poly(["0", "0", "1"])
    prox = picm.cesaro_proxy(2, square, "1/2", 1, 20)
    assert prox["value"] == "8178893/16777216" and prox["exact"]
    sups = picm.convergence_profile(2, square, 101, 8)
    assert sups == [2.0 ** -(m + 2) for m in range(1, 9)]


def test_measure_invariance_bindings():
    intervals = [(f"{i}/8", f"{i + 1}/8") for i in range(8)]
    rep = picm.check_invariance(2, [("0/1", "1/1")], intervals)
    assert rep["all_zero"]
    rep = picm.check_invariance(2, [("1/4", "1/1")], [("1/4", "1/2")])
    assert not rep["all_zero"]
    assert picm.breakpoint_atom_check(2, [("1/4", "1/1")])
    assert not picm.breakpoint_atom_check(2, [("1/2", "1/1")])


def test_cdf_json_roundtrip():
    phi = picm.Cdf.piecewise_linear([("0/1", "0"), ("1/2", "1/4"), ("1/1", "1")])
    again = picm.Cdf.from_json(phi.to_json())
    assert again.eval("1/4")["value"] == phi.eval("1/4")["value"]
