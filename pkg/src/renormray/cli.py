"""Command-line entry point: one subcommand per operation family.

Exit codes: 0 success, 1 domain error (invalid tower, failed validation,
non-landing ray), 2 usage error.  Machine output goes to stdout as JSON
(sorted keys, so byte-identical across runs) unless --out names a file.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import selftest as selftest_mod
from .circle import Angle
from .lamination import build, export_svg, verify_unlinked
from .plane import (
    Params,
    beta_point,
    expansion_report,
    feigenbaum_parameter,
    green,
    periodic_points,
    telescope_check,
    trace_ray,
)
from .render import render as render_scene
from .rotation import minimal_rotation_set
from .towers import (
    RayPair,
    Tower,
    feigenbaum_tower,
    in_shadow,
    omega_probe,
    rabbit_tower,
    shadow_Kc,
    subwindow,
    theta,
    validate,
    window,
    window_at,
)


class DomainError(Exception):
    pass


def _angle(text: str) -> Angle:
    return Angle.parse(text)


def _complex(text: str) -> complex:
    return complex(text.replace(" ", "").replace("i", "j"))


def _tower(args) -> Tower:
    if args.tower == "feigenbaum":
        return feigenbaum_tower(args.depth)
    if args.tower == "rabbit":
        return rabbit_tower(args.depth)
    data = json.loads(args.tower)
    levels = [RayPair(int(lv["period"]), _angle(lv["lo"]), _angle(lv["hi"])) for lv in data]
    return Tower(tuple(levels[: args.depth] if args.depth else levels))


def _add_tower_flags(p, need_level=False):
    p.add_argument("--tower", required=True, help="'feigenbaum', 'rabbit', or JSON [{period, lo, hi}, ...]")
    p.add_argument("--depth", type=int, default=0, help="tower depth (required for named towers)")
    if need_level:
        p.add_argument("--level", type=int, required=True, help="tower level n (1-based)")


def _emit(obj, args) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _arcset_json(s) -> list:
    return [{"start": str(a.start), "length": f"{a.length.numerator}/{a.length.denominator}"} for a in s.components]


def cmd_tower(args):
    _emit(_tower(args).to_json(), args)


def cmd_window(args):
    comb = _tower(args)
    pair = comb.level(args.level)
    j = args.j
    if args.sub:
        sub = subwindow(pair, j)
        _emit(
            {
                "level": args.level,
                "j": j,
                "components": _arcset_json(sub.arcs),
                "labels": {k: {"start": str(a.start), "length": str(a.length)} for k, a in sub.labeled.items()},
            },
            args,
        )
    else:
        _emit({"level": args.level, "j": j, "components": _arcset_json(window_at(pair, j))}, args)


def cmd_shadow(args):
    comb = _tower(args)
    if args.kc:
        shad = shadow_Kc(comb, comb.depth)
        _emit(
            {
                "s": _arcset_json(shad.s),
                "tau1": str(shad.tau1.refine(args.bits)),
                "tau2": str(shad.tau2.refine(args.bits)),
                "bits": args.bits,
            },
            args,
        )
        return
    result = in_shadow(_angle(args.t), comb, args.level, args.j)
    _emit({"t": args.t, "level": args.level, "j": args.j, "in_shadow": result}, args)


def cmd_theta(args):
    comb = _tower(args)
    res = theta(comb, args.level, _angle(args.t))
    _emit({"t": args.t, "level": args.level, "value": str(res.value), "boundary_collapse": res.boundary_collapse}, args)


def cmd_omega(args):
    comb = _tower(args)
    source = shadow_Kc(comb, comb.depth).tau1
    targets = [_angle(t) for t in args.targets]
    hits = omega_probe(source, targets, args.horizon, args.bits)
    _emit({"hits": [{"target": str(t), "first_hit": k} for t, k in hits]}, args)


def cmd_validate(args):
    report = validate(_tower(args))
    _emit({"pass": report.passed, "checks": report.to_json()}, args)
    if not report.passed:
        raise DomainError("tower validation failed")


def cmd_rotset(args):
    nu = Fraction(args.nu)
    if not 0 <= nu < 1:
        print("rotset: --nu must lie in [0, 1)", file=sys.stderr)
        raise SystemExit(2)
    _emit(minimal_rotation_set(nu).to_json(), args)


def cmd_lamination(args):
    comb = _tower(args)
    family = build(comb, comb.depth, args.preimage_depth)
    report = verify_unlinked(family)
    svg = export_svg(family, circular_arcs=args.arcs)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(svg)
        print(json.dumps({"chords": len(family), "unlinked": report["pass"], "svg": args.out}, sort_keys=True))
    else:
        print(svg)
    if not report["pass"]:
        raise DomainError("chord family is linked")


def cmd_ray(args):
    params = Params(c=_complex(args.c))
    path = trace_ray(params, _angle(args.t), level_min=args.level_min)
    _emit(
        {
            "angle": args.t,
            "points": [[p.real, p.imag] for p in path.points[-10:]],
            "levels": path.levels[-10:],
            "landing": [path.landing.real, path.landing.imag] if path.landing is not None else None,
            "residual": path.residual,
            "landed": path.landed,
            "aborted": path.aborted,
            "abort_reason": path.abort_reason,
        },
        args,
    )
    if path.aborted:
        raise DomainError(path.abort_reason)


def cmd_green(args):
    params = Params(c=_complex(args.c))
    _emit({"z": args.z, "green": green(params, _complex(args.z))}, args)


def cmd_periodic(args):
    params = Params(c=_complex(args.c))
    pts = periodic_points(params, args.m)
    _emit(
        {"m": args.m, "points": [{"z": [z.real, z.imag], "multiplier": [w.real, w.imag]} for z, w in pts]},
        args,
    )


def cmd_beta(args):
    params = Params(c=_complex(args.c))
    res = beta_point(params, _tower(args), args.level)
    _emit(
        {
            "beta": [res.beta.real, res.beta.imag],
            "matched": res.matched,
            "candidates": [[z.real, z.imag] for z in res.candidates],
            "residuals": list(res.residuals),
        },
        args,
    )


def cmd_telescope(args):
    params = Params(c=_complex(args.c))
    times = [int(s) for s in args.times.split(",")]
    report = telescope_check(params, _complex(args.x), args.r, args.kappa, args.delta, times)
    _emit(
        {
            "pass": report.passed,
            "aborted_at": report.aborted_at,
            "univalence_is_heuristic": report.univalence_is_heuristic,
            "stages": [
                {
                    "l": s.l,
                    "n_l": s.n_l,
                    "time_density_ok": s.time_density_ok,
                    "branch_ok": s.branch_ok,
                    "margin": s.margin,
                    "margin_ok": s.margin_ok,
                    "univalent_heuristic": s.univalent_heuristic,
                    "note": s.note,
                }
                for s in report.stages
            ],
        },
        args,
    )


def cmd_render(args):
    with open(args.scene) as fh:
        scene = json.load(fh)
    data = render_scene(scene)
    with open(args.out, "wb") as fh:
        fh.write(data)
    print(json.dumps({"out": args.out, "bytes": len(data)}, sort_keys=True))


def cmd_selftest(args):
    checks = selftest_mod.run_all()
    _emit({"pass": all(c.passed for c in checks), "checks": [c.to_json() for c in checks]}, args)
    if not all(c.passed for c in checks):
        raise DomainError("selftest failed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="renormray", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tower", help="emit the levels of a tower")
    _add_tower_flags(p)

    p = sub.add_parser("window", help="window s_{n,j} or sub-window of a tower level")
    _add_tower_flags(p, need_level=True)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--sub", action="store_true", help="emit the four-arc sub-window")

    p = sub.add_parser("shadow", help="shadow membership, or the K_c shadow with --kc")
    _add_tower_flags(p)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--t", help="angle p/q")
    p.add_argument("--kc", action="store_true")
    p.add_argument("--bits", type=int, default=8)

    p = sub.add_parser("theta", help="level-n itinerary semiconjugacy value")
    _add_tower_flags(p, need_level=True)
    p.add_argument("--t", required=True)

    p = sub.add_parser("omega", help="first hit times of doubled tau1 prefixes near targets")
    _add_tower_flags(p)
    p.add_argument("--targets", nargs="+", required=True)
    p.add_argument("--horizon", type=int, default=65536)
    p.add_argument("--bits", type=int, default=8)

    p = sub.add_parser("validate", help="full invariant scan of a tower")
    _add_tower_flags(p)

    p = sub.add_parser("rotset", help="minimal rotation set for a rotation number")
    p.add_argument("--nu", required=True)

    p = sub.add_parser("lamination", help="chord family of a tower, as SVG")
    _add_tower_flags(p)
    p.add_argument("--preimage-depth", type=int, default=0)
    p.add_argument("--arcs", action="store_true", help="draw hyperbolic arcs instead of straight chords")
    p.add_argument("--out")

    p = sub.add_parser("ray", help="trace an external ray")
    p.add_argument("--c", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--level-min", type=float, default=1e-9)

    p = sub.add_parser("green", help="Green level of a point")
    p.add_argument("--c", required=True)
    p.add_argument("--z", required=True)

    p = sub.add_parser("periodic", help="roots of f^m(z) = z with multipliers")
    p.add_argument("--c", required=True)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("beta", help="shared landing point of a level's ray pair")
    _add_tower_flags(p, need_level=True)
    p.add_argument("--c", required=True)

    p = sub.add_parser("telescope", help="stage conditions of a telescope at x")
    p.add_argument("--c", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--times", required=True, help="comma-separated, starting at 0")

    p = sub.add_parser("render", help="render a scene JSON to binary PPM")
    p.add_argument("--scene", required=True)
    p.add_argument("--out", required=True)

    sub.add_parser("selftest", help="run the embedded exact consistency suite")

    for name, prs in sub.choices.items():
        if name not in ("render", "lamination"):
            prs.add_argument("--out", help="write JSON here instead of stdout")
    return parser


_HANDLERS = {
    "tower": cmd_tower,
    "window": cmd_window,
    "shadow": cmd_shadow,
    "theta": cmd_theta,
    "omega": cmd_omega,
    "validate": cmd_validate,
    "rotset": cmd_rotset,
    "lamination": cmd_lamination,
    "ray": cmd_ray,
    "green": cmd_green,
    "periodic": cmd_periodic,
    "beta": cmd_beta,
    "telescope": cmd_telescope,
    "render": cmd_render,
    "selftest": cmd_selftest,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tower", None) in ("feigenbaum", "rabbit") and not args.depth:
        parser.error("named towers need --depth")
    try:
        _HANDLERS[args.command](args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
