import cmath
import math

import pytest

from renormray.circle import Angle
from renormray.plane import (
    Params,
    beta_point,
    expansion_report,
    feigenbaum_parameter,
    green,
    periodic_points,
    telescope_check,
    trace_ray,
)
from renormray.render import render
from renormray.towers import feigenbaum_tower

ALPHA = (1 - math.sqrt(5)) / 2


def test_green_squaring_map():
    assert green(Params(0), 2.0) == pytest.approx(math.log(2), abs=1e-12)
    assert green(Params(0), cmath.exp(0.3j)) == 0.0


def test_green_chebyshev():
    # z = w + 1/w conjugates z^2 - 2 to w^2, so G(3) = ln((3 + sqrt 5)/2)
    assert green(Params(-2), 3.0) == pytest.approx(math.log((3 + math.sqrt(5)) / 2), abs=1e-10)


def test_green_functional_equation():
    params = Params(-0.4 + 0.3j)
    z = 1.7 + 0.9j
    assert green(params, z * z + params.c) == pytest.approx(2 * green(params, z), abs=1e-10)


def test_ray_squaring_is_radial():
    path = trace_ray(Params(0), Angle(1, 3), level_min=1e-9)
    direction = cmath.exp(2j * math.pi / 3)
    for z in path.points:
        assert abs(z / abs(z) - direction) < 1e-9
    assert abs(path.landing - direction) < 1e-6


def test_ray_chebyshev_lands_at_beta():
    path = trace_ray(Params(-2), Angle(0), level_min=1e-9)
    assert abs(path.landing - 2.0) < 1e-6


def test_ray_basilica_alpha():
    for t in (Angle(1, 3), Angle(2, 3)):
        path = trace_ray(Params(-1), t, level_min=1e-22)
        assert not path.aborted
        assert abs(path.landing - ALPHA) < 1e-6


def test_ray_levels_decrease():
    path = trace_ray(Params(0.25j), Angle(1, 7), level_min=1e-6)
    assert all(b < a for a, b in zip(path.levels, path.levels[1:]))


def test_ray_commutes_with_dynamics():
    params = Params(-1)
    p1 = trace_ray(params, Angle(1, 3), level_min=1e-4)
    p2 = trace_ray(params, Angle(2, 3), level_min=1e-4)
    # f maps the point at level l on R_t to level 2l on R_2t
    for z, l in zip(p1.points, p1.levels):
        if l < 0.5:
            idx = min(range(len(p2.levels)), key=lambda i: abs(p2.levels[i] - 2 * l))
            if abs(p2.levels[idx] - 2 * l) < 1e-9:
                assert abs((z * z + params.c) - p2.points[idx]) < 1e-6


def test_periodic_points_squaring():
    pts = periodic_points(Params(0), 1)
    assert len(pts) == 2
    roots = sorted(z.real for z, _ in pts)
    assert roots == pytest.approx([0.0, 1.0], abs=1e-10)
    mults = sorted(abs(m) for _, m in pts)
    assert mults == pytest.approx([0.0, 2.0], abs=1e-10)


def test_periodic_points_basilica_fixed():
    pts = periodic_points(Params(-1), 1)
    roots = sorted(z.real for z, _ in pts)
    assert roots == pytest.approx([ALPHA, (1 + math.sqrt(5)) / 2], abs=1e-10)


def test_periodic_points_basilica_two_cycle():
    pts = periodic_points(Params(-1), 2)
    assert any(abs(z) < 1e-8 for z, _ in pts)
    assert any(abs(z + 1) < 1e-8 for z, _ in pts)
    super_mults = [abs(m) for z, m in pts if abs(z) < 1e-8 or abs(z + 1) < 1e-8]
    assert max(super_mults) < 1e-7


def test_periodic_points_count_and_fixed_inclusion():
    params = Params(0.1 + 0.2j)
    fixed = {z for z, _ in periodic_points(params, 1)}
    period4 = [z for z, _ in periodic_points(params, 4)]
    assert len(period4) == 16
    for zf in fixed:
        assert min(abs(zf - z) for z in period4) < 1e-8


def test_periodic_points_budget():
    with pytest.raises(ValueError):
        periodic_points(Params(0), 13)


def test_beta_basilica_matched():
    res = beta_point(Params(-1), feigenbaum_tower(1), 1)
    assert res.matched
    assert abs(res.beta - ALPHA) < 1e-6


def test_beta_squaring_unmatched():
    res = beta_point(Params(0), feigenbaum_tower(1), 1)
    assert not res.matched


def test_feigenbaum_depths():
    assert feigenbaum_parameter(1) == -1.0
    assert feigenbaum_parameter(2) == pytest.approx(-1.3107026, abs=1e-6)
    # superstability: the critical orbit closes up exactly at time 2^depth
    c = feigenbaum_parameter(5)
    x = 0.0
    for _ in range(1 << 5):
        x = x * x + c
    assert abs(x) < 1e-10


def test_expansion_chebyshev_fixed_point():
    rep = expansion_report(Params(-2), [2.0], 5)
    assert rep.euclidean["min"] == pytest.approx(4.0**5, rel=1e-12)
    assert rep.euclidean["max"] == rep.euclidean["min"]
    assert rep.excluded == 0


def test_expansion_circle():
    sample = [cmath.exp(2j * math.pi * k / 16) for k in range(16)]
    rep = expansion_report(Params(0), sample, 3)
    assert rep.euclidean["min"] == pytest.approx(8.0, rel=1e-9)
    assert rep.euclidean["max"] == pytest.approx(8.0, rel=1e-9)
    assert rep.spherical["geomean"] == pytest.approx(8.0, rel=1e-9)


def test_expansion_excludes_escapers():
    rep = expansion_report(Params(0), [3.0, 0.5], 4)
    assert rep.excluded == 1


def test_telescope_fixed_point():
    rep = telescope_check(Params(-2), 2.0, 0.3, 0.5, 0.01, list(range(11)))
    assert rep.passed
    assert rep.univalence_is_heuristic
    assert all(s.margin is not None and s.margin > 0.01 for s in rep.stages)


def test_telescope_density_failure():
    rep = telescope_check(Params(-2), 2.0, 0.3, 1.5, 0.01, list(range(11)))
    assert not rep.passed
    assert all(not s.time_density_ok for s in rep.stages)


def test_telescope_times_must_increase():
    with pytest.raises(ValueError):
        telescope_check(Params(0), 1.0, 0.3, 0.5, 0.01, [0, 2, 1])


def test_render_deterministic_and_ppm():
    scene = {
        "c": [0.0, 0.0],
        "width": 40,
        "height": 30,
        "scale": 4.0,
        "layers": [{"type": "julia", "max_iter": 40}, {"type": "points", "points": [[1.0, 0.0]]}],
    }
    d1, d2 = render(scene), render(scene)
    assert d1 == d2
    assert d1.startswith(b"P6\n40 30\n255\n")
    assert len(d1) == len(b"P6\n40 30\n255\n") + 40 * 30 * 3


def test_render_thread_count_invariance(monkeypatch):
    scene = {"c": [-1.0, 0.0], "width": 32, "height": 32, "layers": [{"type": "julia", "max_iter": 30}]}
    monkeypatch.setenv("RENORM_RAYS_THREADS", "1")
    one = render(scene)
    monkeypatch.setenv("RENORM_RAYS_THREADS", "3")
    three = render(scene)
    assert one == three
