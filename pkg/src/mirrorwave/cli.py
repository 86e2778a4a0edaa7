"""Command-line front end: figure-ready CSV data for every library operation.

Subcommands
-----------
profile     density profile of a released beam (plus optional per-term columns)
components  formal densities of the four Moshinsky terms, forbidden region included
cornu       Fresnel/Cornu universal representation of the beam profiles
visibility  fringe visibility and peak height versus mirror/beam velocity ratio
oracle      numerical cross-validation run; exit status reports pass/fail

All numeric flags use lab units (cm/s, ms, um) matching the figure
captions; files carry a comment-prefixed manifest with both lab and SI
values.  Output is deterministic: identical flags produce byte-identical
files apart from the timestamp header line.

Exit codes: 0 success, 1 usage/configuration error, 2 numerical-validation
failure.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone

import numpy as np

from . import analysis
from .oracle import (
    OracleConfigError,
    OracleNumericalError,
    compare,
    default_config,
    evolve_grid,
    evolve_quadrature,
)
from .physics import (
    SPECIES_MASSES,
    MirrorKind,
    MirrorLaw,
    PhysicalContext,
    Scenario,
    from_si,
    to_si,
)
from .waves import critical_points, psi_moving

FORMAT_VERSION = 1


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1 (argparse defaults to 2)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_table(path: str, command: str, params: dict, columns, rows) -> None:
    lines = [f"# mirrorwave {command} (format_version = {FORMAT_VERSION})"]
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines.append(f"# generated = {stamp}")
    for key, value in params.items():
        lines.append(f"# {key} = {_fmt(value)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _context(args) -> PhysicalContext:
    try:
        mass = SPECIES_MASSES[args.species]
    except KeyError:
        raise SystemExit(
            f"error: unknown species {args.species!r}; available: "
            + ", ".join(sorted(SPECIES_MASSES))
        ) from None
    return PhysicalContext(mass=mass, species_label=args.species)


def _mirror_law(args) -> MirrorLaw:
    chosen = [
        name
        for name, on in (
            ("--v", args.v is not None),
            ("--sudden", getattr(args, "sudden", False)),
            ("--static", getattr(args, "static", False)),
        )
        if on
    ]
    if len(chosen) != 1:
        raise SystemExit(
            "error: exactly one of --v, --sudden, --static must be given"
            f" (got {', '.join(chosen) or 'none'})"
        )
    if args.v is not None:
        return MirrorLaw.moving(to_si(args.v, "cm/s"))
    if getattr(args, "sudden", False):
        return MirrorLaw.sudden_removal()
    return MirrorLaw.static()


def _scenario(args, mirror: MirrorLaw | None = None) -> Scenario:
    ctx = _context(args)
    if mirror is None:
        mirror = _mirror_law(args)
    k = ctx.wavenumber(to_si(args.vk, "cm/s"))
    return Scenario(ctx, k, mirror, to_si(args.t, "ms"))


def _scenario_params(s: Scenario) -> dict:
    p = {
        "species": s.context.species_label,
        "mass_kg": s.context.mass,
        "hbar_Js": s.context.hbar,
        "k_per_m": s.k,
        "vk_cm_per_s": from_si(s.v_k, "cm/s"),
        "t_ms": from_si(s.time, "ms"),
        "mirror": s.mirror.kind.value,
    }
    if s.mirror.kind is MirrorKind.MOVING:
        p["v_cm_per_s"] = from_si(s.mirror_velocity, "cm/s")
        cp = critical_points(s)
        p["x_minus_um"] = from_si(cp.x_minus, "um")
        p["x_plus_um"] = from_si(cp.x_plus, "um")
        p["x_mirror_um"] = from_si(cp.x_mirror, "um")
    if s.mirror.kind is not MirrorKind.STATIC:
        p["front_um"] = from_si(s.v_k * s.time, "um")
    return p


def _grid(args, s: Scenario) -> np.ndarray:
    if (args.xmin is None) != (args.xmax is None):
        raise SystemExit("error: give both --xmin and --xmax or neither")
    if args.points < 1:
        raise SystemExit("error: --points must be >= 1")
    if args.xmin is None:
        v_eff = s.mirror_velocity if s.mirror.kind is MirrorKind.MOVING else s.v_k
        lo = -1.5 * s.v_k * s.time
        hi = 1.1 * max(v_eff, s.v_k) * s.time
    else:
        lo, hi = to_si(args.xmin, "um"), to_si(args.xmax, "um")
    if lo > hi or (lo == hi and args.points > 1):
        raise SystemExit("error: need xmin < xmax (or a single point with --points 1)")
    return np.linspace(lo, hi, args.points)


def _add_scenario_flags(p, mirror_required: bool = False):
    p.add_argument("--vk", type=float, required=True, help="beam velocity (cm/s)")
    p.add_argument("--t", type=float, required=True, help="evolution time (ms)")
    p.add_argument("--species", default="87Rb", help="beam species (default 87Rb)")
    if mirror_required:
        p.add_argument("--v", type=float, required=True, help="mirror velocity (cm/s)")
    else:
        p.add_argument("--v", type=float, help="mirror velocity (cm/s)")
        p.add_argument("--sudden", action="store_true", help="suddenly removed mirror")
        p.add_argument("--static", action="store_true", help="mirror held fixed")


def _add_grid_flags(p):
    p.add_argument("--xmin", type=float, help="left grid edge (um)")
    p.add_argument("--xmax", type=float, help="right grid edge (um)")
    p.add_argument("--points", type=int, default=2000, help="grid points (default 2000)")


def cmd_profile(args) -> int:
    s = _scenario(args)
    xs = _grid(args, s)
    prof = analysis.profile(s, xs, with_components=args.components)
    params = _scenario_params(s)
    params["points"] = len(xs)
    columns = ["x_um", "density"]
    cols = [from_si(xs, "um"), prof.densities]
    if args.components and prof.components is not None:
        wc = prof.components
        columns += ["m1_abs2", "m2_abs2", "m3_abs2", "m4_abs2"]
        cols += [np.abs(wc.m1) ** 2, np.abs(wc.m2) ** 2, np.abs(wc.m3) ** 2, np.abs(wc.m4) ** 2]
    _write_table(args.out, "profile", params, columns, np.column_stack(cols))
    return 0


def cmd_components(args) -> int:
    s = _scenario(args, MirrorLaw.moving(to_si(args.v, "cm/s")))
    xs = _grid(args, s)
    wc = psi_moving(xs, s.time, s)
    params = _scenario_params(s)
    params["points"] = len(xs)
    params["note"] = "component densities are formal values, forbidden region included"
    rows = np.column_stack(
        [
            from_si(xs, "um"),
            np.abs(wc.m1) ** 2,
            np.abs(wc.m2) ** 2,
            np.abs(wc.m3) ** 2,
            np.abs(wc.m4) ** 2,
            np.abs(wc.psi) ** 2,
        ]
    )
    _write_table(
        args.out,
        "components",
        params,
        ["x_um", "m1_abs2", "m2_abs2", "m3_abs2", "m4_abs2", "density"],
        rows,
    )
    return 0


def cmd_cornu(args) -> int:
    if args.points < 1:
        raise SystemExit("error: --points must be >= 1")
    theta = np.linspace(args.theta_min, args.theta_max, args.points)
    c, s = analysis.universal_enhanced, analysis.universal_ordinary
    from .specialfn import fresnel

    cc, ss = fresnel(theta)
    rows = np.column_stack([theta, cc, ss, c(theta), s(theta)])
    params = {
        "theta_min": float(args.theta_min),
        "theta_max": float(args.theta_max),
        "points": args.points,
    }
    _write_table(
        args.out,
        "cornu",
        params,
        ["theta", "C", "S", "density_enhanced", "density_ordinary"],
        rows,
    )
    return 0


def cmd_visibility(args) -> int:
    try:
        vks = [float(v) for v in args.vk.split(",") if v]
    except ValueError:
        raise SystemExit("error: --vk expects a comma-separated list of cm/s values")
    if not vks:
        raise SystemExit("error: --vk list is empty")
    if args.ratio_min <= 0 or args.ratio_max < args.ratio_min:
        raise SystemExit("error: need 0 < ratio-min <= ratio-max")
    if args.ratio_points < 1:
        raise SystemExit("error: --ratio-points must be >= 1")
    ratios = np.linspace(args.ratio_min, args.ratio_max, args.ratio_points)
    ctx = _context(args)
    t = to_si(args.t, "ms")
    columns = ["v_over_vk"]
    data = [ratios]
    params: dict = {
        "species": args.species,
        "t_ms": float(args.t),
        "ratio_min": float(args.ratio_min),
        "ratio_max": float(args.ratio_max),
    }
    for vk_cm in vks:
        k = ctx.wavenumber(to_si(vk_cm, "cm/s"))
        template = Scenario(ctx, k, MirrorLaw.sudden_removal(), t)
        scan = analysis.enhancement_scan(ratios, template)
        tag = _fmt(vk_cm)
        columns += [f"V_vk{tag}", f"Pmax_vk{tag}"]
        data += [
            np.array([p.visibility for p in scan]),
            np.array([p.p_max for p in scan]),
        ]
        params[f"vk_cm_per_s_{tag}"] = vk_cm
    _write_table(args.out, "visibility", params, columns, np.column_stack(data))
    return 0


def cmd_oracle(args) -> int:
    s = _scenario(args)
    window = None
    if args.window_lo is not None or args.window_hi is not None:
        if args.window_lo is None or args.window_hi is None:
            raise SystemExit("error: give both --window-lo and --window-hi or neither")
        window = (to_si(args.window_lo, "um"), to_si(args.window_hi, "um"))
    try:
        cfg = default_config(s, comparison_window=window)
        overrides = {}
        if args.domain_um is not None:
            overrides["domain_length"] = to_si(args.domain_um, "um")
        if args.grid_points is not None:
            overrides["grid_points"] = args.grid_points
        if args.dt_us is not None:
            overrides["time_step"] = to_si(args.dt_us, "ms") * 1e-3
        if args.trunc_um is not None:
            overrides["truncation_window"] = to_si(args.trunc_um, "um")
        if overrides:
            from dataclasses import replace

            cfg = replace(cfg, **overrides)
        if args.oracle == "grid":
            oracle_prof = evolve_grid(s, cfg)
            trunc_note = {}
        else:
            xs = np.linspace(cfg.comparison_window[0], cfg.comparison_window[1], args.points)
            qr = evolve_quadrature(s, cfg, xs, tolerance=args.tolerance)
            oracle_prof = qr.profile
            trunc_note = {
                "max_truncation_estimate": float(np.max(qr.truncation_estimate)),
                "truncation_flagged": qr.flagged,
            }
    except OracleConfigError as exc:
        print(f"oracle configuration rejected: {exc}", file=sys.stderr)
        return 1
    except OracleNumericalError as exc:
        print(f"oracle numerical failure: {exc}", file=sys.stderr)
        return 2

    ana = analysis.profile(s, oracle_prof.xs)
    rep = compare(ana, oracle_prof)
    params = _scenario_params(s)
    params.update(
        {
            "oracle": args.oracle,
            "domain_length_m": cfg.domain_length,
            "grid_points": cfg.grid_points,
            "time_step_s": cfg.time_step,
            "truncation_window_m": cfg.truncation_window,
            "window_lo_um": from_si(cfg.comparison_window[0], "um"),
            "window_hi_um": from_si(cfg.comparison_window[1], "um"),
            "tolerance": args.tolerance,
            "max_abs_err": rep.max_abs_err,
            "rms_err": rep.rms_err,
        }
    )
    params.update(trunc_note)
    passed = rep.max_abs_err <= args.tolerance and not trunc_note.get(
        "truncation_flagged", False
    )
    params["validation"] = "pass" if passed else "fail"
    rows = np.column_stack(
        [
            from_si(oracle_prof.xs, "um"),
            ana.densities,
            oracle_prof.densities,
            np.abs(ana.densities - oracle_prof.densities),
        ]
    )
    _write_table(
        args.out,
        "oracle",
        params,
        ["x_um", "density_analytic", "density_oracle", "abs_error"],
        rows,
    )
    print(rep.report)
    return 0 if passed else 2


def _build_parser() -> _Parser:
    parser = _Parser(prog="mirrorwave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="density profile data file")
    _add_scenario_flags(p)
    _add_grid_flags(p)
    p.add_argument("--components", action="store_true", help="include per-term densities")
    p.add_argument("--out", required=True, help="output CSV path ('-' for stdout)")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("components", help="densities of the four Moshinsky terms")
    _add_scenario_flags(p, mirror_required=True)
    _add_grid_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("cornu", help="universal Cornu-spiral representation")
    p.add_argument("--theta-min", type=float, default=-3.0)
    p.add_argument("--theta-max", type=float, default=3.0)
    p.add_argument("--points", type=int, default=601)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cornu)

    p = sub.add_parser("visibility", help="fringe visibility vs velocity ratio")
    p.add_argument("--vk", required=True, help="comma-separated beam velocities (cm/s)")
    p.add_argument("--t", type=float, required=True, help="evolution time (ms)")
    p.add_argument("--species", default="87Rb")
    p.add_argument("--ratio-min", type=float, default=1.1)
    p.add_argument("--ratio-max", type=float, default=10.0)
    p.add_argument("--ratio-points", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("oracle", help="validate the analytic solution numerically")
    _add_scenario_flags(p)
    p.add_argument("--oracle", choices=("grid", "quadrature"), required=True)
    p.add_argument("--tolerance", type=float, required=True, help="max abs density error")
    p.add_argument("--window-lo", type=float, help="comparison window left edge (um)")
    p.add_argument("--window-hi", type=float, help="comparison window right edge (um)")
    p.add_argument("--domain-um", type=float, help="override grid-oracle domain length (um)")
    p.add_argument("--grid-points", type=int, help="override grid intervals N")
    p.add_argument("--dt-us", type=float, help="override time step (microseconds)")
    p.add_argument("--trunc-um", type=float, help="override quadrature support depth (um)")
    p.add_argument("--points", type=int, default=201, help="quadrature evaluation points")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        return exc.code if exc.code is not None else 0
    except (ValueError, OracleConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OracleNumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
