from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from renormray.circle import Angle, Arc, double, sigma_pow
from renormray.towers import (
    ComponentAddress,
    RayPair,
    Tower,
    feigenbaum_tower,
    in_shadow,
    omega_probe,
    pair_words,
    rabbit_tower,
    shadow_Kc,
    shadow_component,
    subwindow,
    theta,
    tune,
    validate,
    window,
    window_at,
    window_endpoints,
    window_length,
)


def test_feigenbaum_levels():
    t = feigenbaum_tower(3)
    assert [(p.period, str(p.lo), str(p.hi)) for p in t.levels] == [
        (2, "1/3", "2/3"),
        (4, "2/5", "3/5"),
        (8, "7/17", "10/17"),
    ]


def test_rabbit_levels():
    t = rabbit_tower(2)
    assert t.level(1).period == 3 and t.level(2).period == 9
    assert str(t.level(1).lo) == "1/7"


def test_pair_words():
    assert pair_words(RayPair(2, Angle(1, 3), Angle(2, 3))) == ("01", "10")
    assert pair_words(RayPair(3, Angle(1, 7), Angle(2, 7))) == ("001", "010")


def test_tune_substitutes_words():
    base = RayPair(2, Angle(1, 3), Angle(2, 3))
    # 1/3 = 0.(01): substituting 01 -> 0110 gives 0.(0110) = 2/5
    assert tune(base, Angle(1, 3)) == Angle(2, 5)
    assert tune(base, Angle(2, 3)) == Angle(3, 5)


def test_window_first_level():
    w = window(feigenbaum_tower(1).level(1))
    comps = w.s.components
    assert [(str(a.start), str(a.end)) for a in comps] == [("1/3", "5/12"), ("7/12", "2/3")]
    assert w.lo1 == Angle(5, 12) and w.hi1 == Angle(7, 12)


def test_window_endpoint_dynamics():
    for pair in feigenbaum_tower(4).levels:
        w = window(pair)
        assert sigma_pow(w.lo1, pair.period) == pair.hi
        assert sigma_pow(w.hi1, pair.period) == pair.lo


def test_window_at_length_formula():
    pair = feigenbaum_tower(3).level(3)
    for j in range(1, pair.period + 1):
        s = window_at(pair, j)
        assert all(a.length == window_length(pair, j) for a in s.components)
        assert window_length(pair, j) == pair.width / (1 << (pair.period - j + 1))


def test_window_shift_is_sigma_image():
    pair = feigenbaum_tower(2).level(2)
    for j in range(1, pair.period):
        assert window_at(pair, j).sigma_image() == window_at(pair, j + 1)


def test_subwindow_example():
    pair = feigenbaum_tower(1).level(1)
    sub = subwindow(pair, 2)
    got = [(str(a.start), str(a.end)) for a in sub.arcs.components]
    assert got == [("1/6", "5/24"), ("7/24", "1/3"), ("2/3", "17/24"), ("19/24", "5/6")]


def test_subwindow_maps_onto_windows():
    pair = feigenbaum_tower(2).level(2)
    for j in range(1, pair.period + 1):
        sub = subwindow(pair, j)
        p = pair.period
        targets = {(a.start, a.end) for a in window_at(pair, j).components}
        for arc in sub.labeled.values():
            img = (sigma_pow(arc.start, p), sigma_pow(arc.end, p))
            assert img in targets


def test_invalid_pair_rejected():
    bad = RayPair(2, Angle(1, 5), Angle(2, 3))
    with pytest.raises(ValueError):
        window(bad)


def test_shadow_examples():
    comb = feigenbaum_tower(2)
    assert in_shadow(Angle(1, 3), comb, 1, 1)
    assert in_shadow(Angle(2, 5), comb, 1, 1)
    assert not in_shadow(Angle(1, 7), comb, 1, 1)


def test_shadow_orbit_must_stay():
    comb = feigenbaum_tower(1)
    # 5/12 is in the window but its sigma^2 image 2/3... stays; 1/12 maps out
    assert not in_shadow(Angle(1, 12), comb, 1, 1)


def test_theta_examples():
    comb = feigenbaum_tower(2)
    assert theta(comb, 1, Angle(2, 3)).value == Angle(0)
    assert theta(comb, 1, Angle(4, 5)).value == Angle(1, 3)
    assert theta(comb, 1, Angle(1, 5)).value == Angle(2, 3)
    res = theta(comb, 1, Angle(1, 3))
    assert res.value == Angle(0) and res.boundary_collapse


def test_theta_precondition():
    comb = feigenbaum_tower(1)
    with pytest.raises(ValueError):
        theta(comb, 1, Angle(1, 7))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=200), st.integers(min_value=1, max_value=200))
def test_theta_semiconjugacy_property(a, b):
    comb = feigenbaum_tower(1)
    den = 2 * b + 1
    u = Angle(a % den, den)
    pair = comb.level(1)
    t = sigma_pow(tune(pair, u), pair.period - 1)
    if not in_shadow(t, comb, 1, pair.period):
        return
    lhs = theta(comb, 1, sigma_pow(t, pair.period)).value
    assert lhs == double(theta(comb, 1, t).value)


def test_shadow_kc_limits():
    comb = feigenbaum_tower(8)
    shad = shadow_Kc(comb, 1)
    bits = format(shad.tau1.prefix_bits(8), "08b")
    assert bits == "01101001"  # Thue-Morse prefix
    assert shad.tau1.refine(8) + shad.tau2.refine(8) in (Angle(0), Angle(1, 256), Angle(255, 256))


def test_component_shadow_critical():
    comb = feigenbaum_tower(3)
    addr = ComponentAddress.critical(comb, 3)
    shad = shadow_component(comb, addr, 3)
    assert len(shad.components.components) <= 4
    assert shad.components.total_length > 0
    assert shad.classification == "case2(0)"


def test_component_address_compatibility():
    with pytest.raises(ValueError):
        ComponentAddress((1, 2)).check_compatible(feigenbaum_tower(2), 2)


def test_omega_probe_rational_source():
    # source 1/3 = 0.(01); target 2/3 = 0.(10) is hit after one shift
    hits = omega_probe(Angle(1, 3), [Angle(2, 3)], horizon=8, bits=6)
    assert hits[0][1] == 1


def test_omega_probe_no_hit_reported_as_none():
    hits = omega_probe(Angle(0), [Angle(1, 2)], horizon=10, bits=6)
    assert hits[0][1] is None


def test_validate_passes_stock_towers():
    assert validate(feigenbaum_tower(4)).passed
    assert validate(rabbit_tower(3)).passed


def test_validate_flags_bad_tower():
    bad = Tower((RayPair(2, Angle(1, 3), Angle(2, 3)), RayPair(4, Angle(1, 5), Angle(2, 5))))
    report = validate(bad)
    assert not report.passed
    assert any(e.check in ("nesting_S", "nesting_s") for e in report.failures())


def test_validate_flags_nonperiodic_pair():
    bad = Tower((RayPair(2, Angle(1, 5), Angle(2, 3)),))
    report = validate(bad)
    assert any(e.check == "pair_periodic" and not e.passed for e in report.entries)
