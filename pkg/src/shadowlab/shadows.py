"""Decision procedures for everywhere-very-thick shadows and disconnectedness.

The primary decision is combinatorial: split the connected components of the
level-1 images into two nonempty groups in every possible way and test whether
the two group hulls always intersect.  If some split separates, the system's
attractor misses a whole line inside its hull, and that line is produced as a
re-verifiable witness.  Sampled projection sweeps provide an independent
falsification channel, and geometric decay of component diameters certifies
total disconnectedness (one-sided: failure is reported as inconclusive).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .convex import ConvexPointSet, Hyperplane, hull_vertices_2d
from .errors import (
    BudgetExceeded,
    DegenerateInput,
    InvalidWitness,
    TooManyComponents,
)
from .ifs import (
    BODY_BUDGET,
    ComponentDecomposition,
    IteratedFunctionSystem,
    attractor_sample,
    component_decomposition,
    iterate_bodies,
    sample_radius_bound,
)
from .convex import hulls_intersect
from .scalars import EXACT, FLOAT, Context, to_float

COMPONENT_CAP = 20
DIRECTION_SEED = 0xD12EC7
GAP_CLAMP = 1e-9


@dataclass(frozen=True)
class ShadowReport:
    verdict: str                       # "thick" | "not_thick"
    components: ComponentDecomposition
    tested_splits: int
    failing_split: Optional[tuple]     # (component index tuple, Hyperplane)
    arithmetic_mode: str
    marginal: bool


@dataclass(frozen=True)
class CoverageReport:
    dim: int
    level: int
    directions: tuple                  # unit vectors as float tuples
    gaps: tuple                        # uncovered length per direction
    max_gap: float


@dataclass(frozen=True)
class DisconnectReport:
    levels: tuple
    max_diameters: tuple               # euclidean floats, one per level
    verdict: str                       # "certified_disconnected" | "inconclusive"
    ratio: Optional[float]             # certified uniform decay factor rho < 1
    arithmetic_mode: str
    marginal: bool


@dataclass(frozen=True)
class VertexReport:
    vertices: tuple
    present: tuple                     # bool per vertex
    min_distances: tuple
    radius_bound: float
    tolerance: float


def _part_point_sets(decomp: ComponentDecomposition, ctx: Context):
    sets = []
    dim = decomp.bodies[0].dim
    for part in decomp.parts:
        pts = []
        seen = set()
        for idx in part:
            for p in decomp.bodies[idx].points:
                if p not in seen:
                    seen.add(p)
                    pts.append(p)
        if ctx.exact and dim == 2 and len(pts) > 64:
            # same hull, far fewer generators for the split LPs
            pts = list(hull_vertices_2d(ConvexPointSet(2, tuple(pts)), ctx))
        sets.append(tuple(pts))
    return sets


def _splits_lex(r: int):
    """Proper unordered splits as subsets containing component 0, lex order."""
    subsets = []
    for size in range(0, r - 1):
        subsets.extend((0,) + rest for rest in combinations(range(1, r), size))
    return sorted(subsets)


def thick_shadow_check(
    ifs: IteratedFunctionSystem,
    ctx: Context = EXACT,
    component_cap: int = COMPONENT_CAP,
) -> ShadowReport:
    """Decide the everywhere-very-thick-shadow property for 1-dim projections.

    Thick iff for every proper split of the level-1 components the two side
    hulls intersect (touching counts).  On failure, returns the
    lexicographically first failing split with its separating hyperplane.
    """
    bodies = iterate_bodies(ifs, 1)
    decomp = component_decomposition(bodies, ctx, level=1)
    r = decomp.count
    if r > component_cap:
        raise TooManyComponents(f"{r} level-1 components exceed cap {component_cap}")
    marginal = decomp.marginal
    if r == 1:
        return ShadowReport("thick", decomp, 0, None, _mode(ctx, decomp), marginal)

    part_pts = _part_point_sets(decomp, ctx)
    tested = 0
    for split in _splits_lex(r):
        comp = tuple(i for i in range(r) if i not in split)
        side_a = ConvexPointSet(ifs.dim, tuple(p for i in split for p in part_pts[i]))
        side_b = ConvexPointSet(ifs.dim, tuple(p for i in comp for p in part_pts[i]))
        res = hulls_intersect(side_a, side_b, ctx)
        tested += 1
        marginal = marginal or res.marginal
        if not res.intersects:
            return ShadowReport(
                "not_thick", decomp, tested, (split, res.separator), _mode(ctx, decomp), marginal
            )
    return ShadowReport("thick", decomp, tested, None, _mode(ctx, decomp), marginal)


def _mode(ctx: Context, decomp: ComponentDecomposition) -> str:
    return "exact" if ctx.exact else decomp.mode


def _interval(points, normal):
    vals = [sum(n * x for n, x in zip(normal, p)) for p in points]
    return min(vals), max(vals)


def line_witness(ifs: IteratedFunctionSystem, report: ShadowReport, ctx: Context = EXACT) -> Hyperplane:
    """A hyperplane through conv(seed) missing every level-1 image.

    Shifts the failing split's separator to the midpoint of the support gap
    and re-verifies both postconditions by support queries.
    """
    if report.failing_split is None:
        raise InvalidWitness("report has no failing split (verdict thick)")
    split, sep = report.failing_split
    normal = tuple(ctx.scalar(x) for x in sep.normal)
    decomp = report.components
    lo_parts, hi_parts = [], []
    for i, part in enumerate(decomp.parts):
        pts = [ctx.point(p) for idx in part for p in decomp.bodies[idx].points]
        lo, hi = _interval(pts, normal)
        (lo_parts if i in split else hi_parts).append((lo, hi))
    a_max = max(hi for _, hi in lo_parts)
    b_min = min(lo for lo, _ in hi_parts)
    if not a_max < b_min:
        # orientation from the stored separator can be reversed
        lo_parts, hi_parts = hi_parts, lo_parts
        a_max = max(hi for _, hi in lo_parts)
        b_min = min(lo for lo, _ in hi_parts)
    offset = (a_max + b_min) / ctx.scalar(2)
    witness = Hyperplane(normal=normal, offset=offset)

    for bdy in decomp.bodies:
        lo, hi = _interval([ctx.point(p) for p in bdy.points], normal)
        if not (ctx.sign(offset - hi) > 0 or ctx.sign(lo - offset) > 0):
            raise InvalidWitness("witness hyperplane meets a level-1 image")
    lo_c, hi_c = _interval([ctx.point(p) for p in ifs.seed.points], normal)
    if ctx.sign(offset - lo_c) < 0 or ctx.sign(hi_c - offset) < 0:
        raise InvalidWitness("witness hyperplane misses the seed hull")
    return witness


# -- sampled projection coverage -------------------------------------------------


def _direction_grid(dim: int, n_directions: int):
    if n_directions < 1:
        raise DegenerateInput("need at least one direction")
    if dim == 2:
        thetas = [j * math.pi / n_directions for j in range(n_directions)]
        return np.array([[math.cos(t), math.sin(t)] for t in thetas])
    rng = np.random.default_rng(DIRECTION_SEED)
    g = rng.standard_normal((n_directions, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _bodies_array(ifs: IteratedFunctionSystem, level: int, budget: int) -> np.ndarray:
    """Level-k images of the seed generators as a float array (B, P, d)."""
    if len(ifs.maps) ** level > budget:
        raise BudgetExceeded(f"{len(ifs.maps)}^{level} bodies exceed budget {budget}")
    arr = np.array([[list(map(to_float, p)) for p in ifs.seed.points]], dtype=float)
    mats = [np.array([[to_float(x) for x in row] for row in m.matrix]) for m in ifs.maps]
    trs = [np.array([to_float(x) for x in m.translation]) for m in ifs.maps]
    for _ in range(level):
        arr = np.concatenate([arr @ M.T + t for M, t in zip(mats, trs)], axis=0)
    return arr


def union_length(lo: np.ndarray, hi: np.ndarray) -> float:
    """Total length of the union of intervals [lo_i, hi_i]."""
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    run = np.maximum.accumulate(hi)
    prev = np.concatenate(([-np.inf], run[:-1]))
    return float(np.maximum(hi - np.maximum(lo, prev), 0.0).sum())


def coverage_from_arrays(
    bodies: np.ndarray, hull_points: np.ndarray, directions: np.ndarray, level: int
) -> CoverageReport:
    gaps = []
    seed_proj = hull_points @ directions.T     # (P0, D)
    chunk = 64
    for start in range(0, len(directions), chunk):
        dirs = directions[start : start + chunk]
        proj = np.einsum("bpk,ck->bpc", bodies, dirs)
        lo = proj.min(axis=1)                  # (B, C)
        hi = proj.max(axis=1)
        for c in range(dirs.shape[0]):
            span_lo = seed_proj[:, start + c].min()
            span_hi = seed_proj[:, start + c].max()
            covered = union_length(
                np.clip(lo[:, c], span_lo, span_hi), np.clip(hi[:, c], span_lo, span_hi)
            )
            gap = (span_hi - span_lo) - covered
            span = max(1.0, span_hi - span_lo)
            gaps.append(0.0 if gap <= GAP_CLAMP * span else gap)
    return CoverageReport(
        dim=bodies.shape[2],
        level=level,
        directions=tuple(map(tuple, directions.tolist())),
        gaps=tuple(gaps),
        max_gap=max(gaps),
    )


def empirical_coverage(
    ifs: IteratedFunctionSystem,
    n_directions: int,
    level: int,
    budget: int = BODY_BUDGET,
    directions: Optional[Sequence[Sequence[float]]] = None,
) -> CoverageReport:
    """Sampled falsification of thickness: per-direction uncovered length.

    For each unit direction u the level-k body projections are merged by an
    interval sweep; the gap is |pi_u(C)| minus the covered length.  A thick
    system has gap 0 at every level; a separated split shows up as a positive
    gap near its witness normal at every level >= 1.
    """
    if directions is None:
        dirs = _direction_grid(ifs.dim, n_directions)
    else:
        dirs = np.asarray([[float(c) for c in u] for u in directions], dtype=float)
        dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    bodies = _bodies_array(ifs, level, budget)
    hull_pts = np.array([[to_float(c) for c in p] for p in ifs.seed.points])
    return coverage_from_arrays(bodies, hull_pts, dirs, level)


def union_coverage(
    systems: Sequence[IteratedFunctionSystem],
    n_directions: int,
    level: int,
    budget: int = BODY_BUDGET,
) -> CoverageReport:
    """Coverage sweep for a union of attractors against the union's hull.

    Merges every member's level-k bodies and compares the projection union
    against the projection of the combined seed hull per direction.
    """
    if not systems:
        raise DegenerateInput("no member systems")
    dim = systems[0].dim
    if any(s.dim != dim for s in systems):
        raise DegenerateInput("members must share one ambient dimension")
    dirs = _direction_grid(dim, n_directions)
    hull_pts = np.array(
        [[to_float(c) for c in p] for s in systems for p in s.seed.points]
    )
    arrays = [_bodies_array(s, level, budget) for s in systems]
    # member body arrays can have different generator counts, so project per
    # member and merge the intervals jointly
    chunk_dirs = dirs
    seed_proj = hull_pts @ chunk_dirs.T
    gap_list = []
    for c in range(len(chunk_dirs)):
        lo_all, hi_all = [], []
        for arr in arrays:
            proj = arr @ chunk_dirs[c]
            lo_all.append(proj.min(axis=1))
            hi_all.append(proj.max(axis=1))
        lo = np.concatenate(lo_all)
        hi = np.concatenate(hi_all)
        span_lo, span_hi = seed_proj[:, c].min(), seed_proj[:, c].max()
        covered = union_length(np.clip(lo, span_lo, span_hi), np.clip(hi, span_lo, span_hi))
        gap = (span_hi - span_lo) - covered
        gap_list.append(0.0 if gap <= GAP_CLAMP * max(1.0, span_hi - span_lo) else gap)
    return CoverageReport(
        dim=dim,
        level=level,
        directions=tuple(map(tuple, dirs.tolist())),
        gaps=tuple(gap_list),
        max_gap=max(gap_list),
    )


# -- total disconnectedness -------------------------------------------------------


def disconnectedness_check(
    ifs: IteratedFunctionSystem,
    max_level: int,
    ctx: Context = EXACT,
    budget: int = BODY_BUDGET,
) -> DisconnectReport:
    """Certify total disconnectedness by geometric decay of component diameters.

    Computes the maximal component diameter for k = 1..max_level and certifies
    when each consecutive pair contracts by a uniform factor rho < 1.  The
    criterion is sufficient only, so a failed certificate reports
    "inconclusive", never "connected".
    """
    if max_level < 2:
        raise DegenerateInput("max_level must be >= 2")
    if len(ifs.maps) ** max_level > budget:
        raise BudgetExceeded(f"{len(ifs.maps)}^{max_level} bodies exceed budget {budget}")
    diams = []        # values in context arithmetic (squared when exact)
    marginal = False
    mode = "exact" if ctx.exact else "float"
    for k in range(1, max_level + 1):
        decomp = component_decomposition(iterate_bodies(ifs, k, budget), ctx, level=k)
        marginal = marginal or decomp.marginal
        diams.append(max(decomp.diameters))
    ratios = []
    certified = True
    for prev, cur in zip(diams, diams[1:]):
        if ctx.is_zero(prev):
            ratios.append(ctx.scalar(0))
            continue
        ratio = cur / prev
        ratios.append(ratio)
        if not ctx.sign(ctx.scalar(1) - ratio) > 0:
            certified = False
    rho = None
    if certified and ratios:
        worst = max(ratios)
        rho = math.sqrt(to_float(worst)) if ctx.exact else to_float(worst)
    floats = tuple(
        math.sqrt(to_float(dv)) if ctx.exact else to_float(dv) for dv in diams
    )
    return DisconnectReport(
        levels=tuple(range(1, max_level + 1)),
        max_diameters=floats,
        verdict="certified_disconnected" if certified else "inconclusive",
        ratio=rho,
        arithmetic_mode=mode,
        marginal=marginal,
    )


# -- exposed-point necessary condition --------------------------------------------


def vertices_in_attractor(
    ifs: IteratedFunctionSystem,
    tolerance: float,
    budget: int = 10**5,
) -> VertexReport:
    """Check the necessary condition that seed-hull vertices belong to K.

    A vertex counts as present when its distance to the deterministic sample
    plus the sampling radius bound is within the tolerance.  For d = 2 the
    vertices are the exact hull vertices; for d >= 3 the seed generators serve
    as the candidate exposed points.
    """
    if ifs.dim == 2:
        verts = hull_vertices_2d(ifs.seed, EXACT)
    else:
        seen, verts = set(), []
        for p in ifs.seed.points:
            if p not in seen:
                seen.add(p)
                verts.append(p)
        verts = tuple(verts)
    sample = np.asarray(attractor_sample(ifs, budget), dtype=float)
    radius = sample_radius_bound(ifs, budget)
    vf = np.array([[to_float(c) for c in v] for v in verts])
    dists = np.sqrt(((vf[:, None, :] - sample[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
    present = tuple(bool(dv + radius <= tolerance) for dv in dists)
    return VertexReport(
        vertices=tuple(verts),
        present=present,
        min_distances=tuple(map(float, dists)),
        radius_bound=radius,
        tolerance=float(tolerance),
    )
