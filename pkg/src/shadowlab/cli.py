"""Command-line front end: construct / check / dims / render / plot.

Exit codes: 0 thick (or success for non-verdict commands), 2 not thick,
3 inconclusive (marginal float verdict without exact fallback), 64 parse or
parameter errors, 65 budget or component-cap errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .dims import dimension_report
from .errors import (
    BudgetExceeded,
    ShadowlabError,
    SpecFormatError,
    TooManyComponents,
)
from .families import (
    centered_inner_shift,
    cross_corner,
    mendivil_taylor,
    polygon_blind,
    polytope_union,
    rotated_square,
    simplex_ifs,
    triangle_grid_ifs,
    venetian_blind,
)
from .ifs import attractor_sample
from .render import coverage_plot_svg, render_ifs_svg, render_segments_svg
from .scalars import EXACT, FLOAT, parse_scalar, to_float
from .shadows import (
    disconnectedness_check,
    empirical_coverage,
    line_witness,
    thick_shadow_check,
    union_coverage,
    vertices_in_attractor,
)
from .specfile import (
    SegmentSpec,
    UnionSpec,
    canonical_json,
    emit_ifs_spec,
    emit_segments_spec,
    input_digest,
    parse_spec,
    report_document,
)

EXIT_THICK = 0
EXIT_NOT_THICK = 2
EXIT_INCONCLUSIVE = 3
EXIT_INPUT = 64
EXIT_BUDGET = 65

CHECK_VERTEX_TOLERANCE = 0.25


def _thread_cap() -> int:
    raw = os.environ.get("SHADOWLAB_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise SpecFormatError(f"SHADOWLAB_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise SpecFormatError("SHADOWLAB_THREADS must be >= 1")
    return cap


def _scalar_arg(text: str):
    try:
        return parse_scalar(text)
    except SpecFormatError as exc:
        raise SpecFormatError(f"bad numeric argument {text!r}: {exc}") from exc


def _points_arg(text: str):
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        pts.append(tuple(_scalar_arg(c) for c in chunk.split(",")))
    if not pts:
        raise SpecFormatError("empty vertex list")
    return tuple(pts)


def _write_out(data, out_path):
    if isinstance(data, str):
        data = data.encode("utf-8")
    if out_path in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        with open(out_path, "wb") as fh:
            fh.write(data)


def _error_json(exc: Exception) -> bytes:
    return canonical_json({"error": {"type": type(exc).__name__, "message": str(exc)}})


# -- construct ----------------------------------------------------------------


def _construct(args) -> bytes:
    fam = args.family
    if fam == "mendivil-taylor":
        res = mendivil_taylor(_scalar_arg(args.t), _scalar_arg(args.s))
        meta = {
            "family": fam,
            "t": str(res.t),
            "s": str(res.s),
            "predicted_thick": res.predicted_thick,
        }
        return emit_ifs_spec(res.ifs, meta)
    if fam == "rotated-square":
        res = rotated_square(_scalar_arg(args.r))
        meta = {
            "family": fam,
            "r": str(res.r),
            "predicted_thick": res.predicted_thick,
            "predicted_disconnected": res.predicted_disconnected,
        }
        return emit_ifs_spec(res.ifs, meta)
    if fam == "cross-corner":
        res = cross_corner(args.n, args.d)
        meta = {
            "family": fam,
            "n": res.n,
            "d": res.d,
            "digit_count": len(res.digits),
            "corner_count": res.corner_count,
            "paper_floor_count": res.paper_floor_count,
            "ceiling_count": res.ceiling_count,
            "formula_mismatch": res.formula_mismatch,
            "dimension": res.dimension,
            "predicted_thick": True,
            "predicted_disconnected": True,
        }
        return emit_ifs_spec(res.ifs, meta)
    if fam == "simplex":
        verts = _points_arg(args.vertices)
        if args.inner_shift:
            shift = _points_arg(args.inner_shift)[0]
        else:
            shift = centered_inner_shift(verts, _scalar_arg(args.inner_ratio))
        res = simplex_ifs(verts, _scalar_arg(args.inner_ratio), shift, _scalar_arg(args.contraction))
        meta = {
            "family": fam,
            "contraction": str(res.contraction),
            "predicted_thick": True,
        }
        return emit_ifs_spec(res.ifs, meta)
    if fam == "triangle-grid":
        res = triangle_grid_ifs(_points_arg(args.vertices), _scalar_arg(args.contraction))
        meta = {
            "family": fam,
            "depth": res.depth,
            "map_count": res.map_count,
            "dimension_estimate": res.dimension_estimate,
            "predicted_thick": True,
        }
        return emit_ifs_spec(res.ifs, meta)
    if fam == "polytope-union":
        res = polytope_union(
            _points_arg(args.vertices), _scalar_arg(args.contraction),
            inner_ratio=_scalar_arg(args.inner_ratio),
        )
        members = [
            json.loads(emit_ifs_spec(m.ifs, {"family": "simplex", "piece": i}))
            for i, m in enumerate(res.members)
        ]
        doc = {
            "version": 1,
            "type": "ifs_union",
            "dim": res.members[0].ifs.dim,
            "members": members,
            "meta": {"family": fam, "pieces": len(members), "predicted_thick": True},
        }
        return canonical_json(doc)
    if fam == "venetian-blind":
        base = Fraction(_scalar_arg(args.eps_base))
        eps = [base**j for j in range(1, args.levels + 1)]
        res = venetian_blind(eps, args.levels)
        meta = {
            "family": fam,
            "levels": args.levels,
            "eps_base": str(base),
            "connector_sum": str(res.connector_sum),
            "length_radicand": str(res.radicand),
            "gamma_length": res.gamma_length,
        }
        return emit_segments_spec(res.gamma_segments, meta)
    if fam == "polygon-blind":
        res = polygon_blind(
            _points_arg(args.vertices),
            eps_base=Fraction(_scalar_arg(args.eps_base)),
            blind_levels=args.blind_levels,
            cascade_depth=args.cascade_depth,
        )
        segs = [s for g in res.groups for s in g.segments]
        meta = {
            "family": fam,
            "groups": [
                {"side": g.side, "vertex": g.vertex, "kind": g.kind, "segments": len(g.segments)}
                for g in res.groups
            ],
            "cascade_depth": res.cascade_depth,
            "tail_bound": res.tail_bound,
        }
        return emit_segments_spec(segs, meta)
    raise SpecFormatError(f"unknown family {fam!r}")


# -- check ----------------------------------------------------------------------


def _hyperplane_payload(h):
    return {"normal": list(h.normal), "offset": h.offset}


def _shadow_payload(ifs, report, ctx):
    payload = {
        "verdict": report.verdict,
        "tested_splits": report.tested_splits,
        "component_count": report.components.count,
        "parts": [list(p) for p in report.components.parts],
        "part_diameters": list(report.components.diameters),
        "arithmetic_mode": report.arithmetic_mode,
        "marginal": report.marginal,
        "failing_split": None,
        "witness": None,
    }
    if report.failing_split is not None:
        split, _ = report.failing_split
        payload["failing_split"] = list(split)
        payload["witness"] = _hyperplane_payload(line_witness(ifs, report, ctx))
    return payload


def _check_single(ifs, args, ctx):
    shadow = thick_shadow_check(ifs, ctx)
    payloads = {"dim": ifs.dim, "exact": ctx.exact, "shadow": _shadow_payload(ifs, shadow, ctx)}
    disc = disconnectedness_check(ifs, args.max_level, ctx)
    payloads["disconnect"] = {
        "levels": list(disc.levels),
        "max_diameters": list(disc.max_diameters),
        "verdict": disc.verdict,
        "ratio": disc.ratio,
        "marginal": disc.marginal,
    }
    cov = empirical_coverage(ifs, args.directions, args.level)
    payloads["coverage"] = {
        "level": cov.level,
        "directions": [list(u) for u in cov.directions],
        "gaps": list(cov.gaps),
        "max_gap": cov.max_gap,
    }
    verts = vertices_in_attractor(ifs, CHECK_VERTEX_TOLERANCE)
    payloads["vertices"] = {
        "vertices": [list(v) for v in verts.vertices],
        "present": list(verts.present),
        "min_distances": list(verts.min_distances),
        "radius_bound": verts.radius_bound,
        "tolerance": verts.tolerance,
    }
    marginal = shadow.marginal or disc.marginal
    return payloads, shadow.verdict, marginal


def _check(args):
    with open(args.spec, "rb") as fh:
        raw = fh.read()
    parsed = parse_spec(raw)
    ctx = EXACT if args.exact else FLOAT
    if isinstance(parsed, SegmentSpec):
        raise SpecFormatError("check requires an ifs spec, got segments")
    if isinstance(parsed, UnionSpec):
        member_payloads = []
        verdicts = []
        marginal = False
        for member in parsed.members:
            pay, verdict, marg = _check_single(member, args, ctx)
            member_payloads.append(pay)
            verdicts.append(verdict)
            marginal = marginal or marg
        merged = union_coverage(parsed.members, args.directions, args.level)
        payloads = {
            "members": member_payloads,
            "coverage": {
                "level": merged.level,
                "directions": [list(u) for u in merged.directions],
                "gaps": list(merged.gaps),
                "max_gap": merged.max_gap,
            },
        }
        verdict = "thick" if all(v == "thick" for v in verdicts) else "not_thick"
    else:
        payloads, verdict, marginal = _check_single(parsed, args, ctx)
    report = report_document(payloads, input_digest(raw))
    _write_out(report, args.output)
    if marginal and not ctx.exact:
        return EXIT_INCONCLUSIVE
    return EXIT_THICK if verdict == "thick" else EXIT_NOT_THICK


def _dims(args):
    with open(args.spec, "rb") as fh:
        raw = fh.read()
    parsed = parse_spec(raw)
    if not hasattr(parsed, "maps"):
        raise SpecFormatError("dims requires an ifs spec")
    levels = tuple(int(x) for x in args.levels.split(","))
    scales = (
        [float(Fraction(parse_scalar(s))) for s in args.scales.split(",")]
        if args.scales
        else None
    )
    rep = dimension_report(parsed, root_levels=levels, scales=scales)
    payload = {
        "dim": parsed.dim,
        "similarity_dim": rep.similarity_dim,
        "similarity_residual": rep.similarity_residual,
        "affinity_bound_closed": rep.affinity_bound_closed,
        "affinity_roots": [
            {"level": r.level, "value": r.value, "saturated": r.saturated}
            for r in rep.affinity_roots
        ],
        "box": {
            "scales": list(rep.box.scales),
            "counts": list(rep.box.counts),
            "slope": rep.box.slope,
            "residual": rep.box.residual,
            "exact": rep.box.exact,
        },
        "bracket": list(rep.bracket) if rep.bracket else None,
    }
    _write_out(report_document({"dimension": payload}, input_digest(raw)), args.output)
    return 0


def _render(args):
    with open(args.spec, "rb") as fh:
        raw = fh.read()
    parsed = parse_spec(raw)
    if isinstance(parsed, SegmentSpec):
        svg = render_segments_svg(parsed.segments)
        _write_out(svg, args.output)
        return 0
    if isinstance(parsed, UnionSpec):
        raise SpecFormatError("render takes a single ifs or segments spec")
    witness = None
    if args.report:
        with open(args.report, "rb") as fh:
            rep = json.loads(fh.read())
        if rep.get("input_digest") != input_digest(raw):
            raise SpecFormatError("report does not match this spec (digest mismatch)")
        w = rep.get("shadow", {}).get("witness")
        if w:
            witness = (
                tuple(to_float(parse_scalar(c)) for c in w["normal"]),
                to_float(parse_scalar(w["offset"])),
            )
    points = None
    if args.style == "points":
        points = attractor_sample(parsed, args.points, method=args.method, seed=args.seed)
    svg = render_ifs_svg(
        parsed,
        level=args.level,
        style=args.style if args.style != "points" else "components",
        project_axis={"x": 0, "y": 1, "z": 2}[args.project],
        witness=witness,
        points=points,
    )
    _write_out(svg, args.output)
    return 0


def _plot(args):
    with open(args.report, "rb") as fh:
        rep = json.loads(fh.read())
    cov = rep.get("coverage")
    if not cov:
        raise SpecFormatError("report has no coverage payload")
    directions = [tuple(to_float(parse_scalar(c)) for c in u) for u in cov["directions"]]
    gaps = [to_float(parse_scalar(g)) if isinstance(g, str) else float(g) for g in cov["gaps"]]
    _write_out(coverage_plot_svg(directions, gaps), args.output)
    return 0


# -- argument parsing --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SpecFormatError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shadowlab", description=__doc__)
    p.add_argument("--version", action="version", version=f"shadowlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="emit a family spec file")
    c.add_argument("family", choices=[
        "mendivil-taylor", "rotated-square", "cross-corner", "simplex",
        "triangle-grid", "polytope-union", "venetian-blind", "polygon-blind",
    ])
    c.add_argument("--t")
    c.add_argument("--s")
    c.add_argument("--r")
    c.add_argument("--n", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--vertices")
    c.add_argument("--inner-ratio", default="3/10")
    c.add_argument("--inner-shift")
    c.add_argument("--contraction", default="1/5")
    c.add_argument("--eps-base", default="1/8")
    c.add_argument("--levels", type=int, default=6)
    c.add_argument("--blind-levels", type=int, default=6)
    c.add_argument("--cascade-depth", type=int, default=12)
    c.add_argument("-o", "--output")

    k = sub.add_parser("check", help="thickness / disconnectedness report")
    k.add_argument("spec")
    k.add_argument("--exact", action="store_true")
    k.add_argument("--level", type=int, default=4, help="coverage iteration level")
    k.add_argument("--directions", type=int, default=360)
    k.add_argument("--max-level", type=int, default=3, help="disconnectedness levels")
    k.add_argument("-o", "--output")

    d = sub.add_parser("dims", help="dimension report")
    d.add_argument("spec")
    d.add_argument("--exact", action="store_true")
    d.add_argument("--levels", default="1,2")
    d.add_argument("--scales")
    d.add_argument("-o", "--output")

    r = sub.add_parser("render", help="emit an SVG figure")
    r.add_argument("spec")
    r.add_argument("--level", type=int, default=1)
    r.add_argument("--style", choices=["components", "bodies", "points"], default="components")
    r.add_argument("--project", choices=["x", "y", "z"], default="z")
    r.add_argument("--report")
    r.add_argument("--method", choices=["deterministic", "chaos"], default="deterministic")
    r.add_argument("--seed", type=int, default=0x5EED)
    r.add_argument("--points", type=int, default=2000)
    r.add_argument("-o", "--output")

    pl = sub.add_parser("plot", help="coverage gap plot")
    pl.add_argument("report")
    pl.add_argument("-o", "--output")
    return p


def main(argv=None) -> int:
    try:
        _thread_cap()
        parser = build_parser()
        args = parser.parse_args(argv)
        if args.command == "construct":
            _write_out(_construct(args), args.output)
            return 0
        if args.command == "check":
            return _check(args)
        if args.command == "dims":
            return _dims(args)
        if args.command == "render":
            return _render(args)
        if args.command == "plot":
            return _plot(args)
        raise SpecFormatError(f"unknown command {args.command!r}")
    except (BudgetExceeded, TooManyComponents) as exc:
        sys.stdout.buffer.write(_error_json(exc))
        return EXIT_BUDGET
    except (ShadowlabError, OSError, ValueError, KeyError) as exc:
        sys.stdout.buffer.write(_error_json(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
