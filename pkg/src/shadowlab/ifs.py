"""Affine iterated function systems and component analysis of their iterates.

An IFS here is a list of invertible affine contractions together with a seed
body whose hull C satisfies phi_i(C) subset C.  Individual maps are normally
required to satisfy |T| < 1; systems whose maps only contract *eventually*
(every length-k composition has norm < 1 for some small k) are accepted at the
system level, because the simplex construction genuinely produces such maps
while still having a well-defined attractor.
"""

from __future__ import annotations

import math
import random

import numpy as np
from dataclasses import dataclass
from typing import Optional, Sequence

from .convex import ConvexPointSet, diameter_squared, hulls_intersect_decision, point_in_hull
from .errors import (
    BudgetExceeded,
    DegenerateInput,
    DimensionMismatch,
    NotContractive,
    SingularMatrix,
)
from .linalg import det, identity, mat_float, mat_mul, mat_vec, norm_less_than, solve
from .linalg import operator_norm_float, operator_norm_upper_bound
from .scalars import EXACT, FLOAT, Context

CHAOS_SEED = 0x5EED
CHAOS_BURN_IN = 100
BODY_BUDGET = 10**6
_NORM_MARGIN = 1e-12


@dataclass(frozen=True)
class AffineMap:
    """One contraction x -> matrix @ x + translation."""

    matrix: tuple
    translation: tuple

    def __post_init__(self):
        m = tuple(tuple(row) for row in self.matrix)
        t = tuple(self.translation)
        if len(m) != len(t) or any(len(row) != len(t) for row in m):
            raise DimensionMismatch("matrix/translation shape mismatch")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", t)

    @property
    def dim(self) -> int:
        return len(self.translation)

    def __call__(self, point):
        return tuple(v + t for v, t in zip(mat_vec(self.matrix, point), self.translation))


def operator_norm(matrix, ctx: Context = FLOAT):
    """Largest singular value.

    Float mode: closed form for d <= 2, cyclic Jacobi on T^T T for d >= 3.
    Exact mode: a certified rational upper bound (Sylvester-test bisection,
    relative slack 1e-13), which is what contractivity decisions need.
    """
    if ctx.exact:
        return operator_norm_upper_bound(matrix, ctx)
    return operator_norm_float(matrix)


def make_affine_map(matrix, translation, ctx: Context = FLOAT) -> AffineMap:
    """Validated constructor: rejects singular or non-contractive matrices."""
    m = AffineMap(matrix=matrix, translation=translation)
    d = det(tuple(tuple(ctx.scalar(x) for x in row) for row in m.matrix))
    if ctx.is_zero(d):
        raise SingularMatrix("matrix is singular")
    if ctx.exact:
        if not norm_less_than(m.matrix, 1, ctx):
            raise NotContractive(
                f"operator norm {operator_norm_float(m.matrix):.6g} >= 1",
                norm=operator_norm_float(m.matrix),
            )
    else:
        nrm = operator_norm_float(m.matrix)
        if not nrm < 1.0:
            raise NotContractive(f"operator norm {nrm:.6g} >= 1", norm=nrm)
    return m


def _eventually_contractive(maps, max_depth=8, budget=200000):
    """Smallest k <= max_depth with max over length-k products of |T_sigma| < 1."""
    mats = [mat_float(m.matrix) for m in maps]
    level = list(mats)
    for k in range(1, max_depth + 1):
        worst = max(operator_norm_float(M) for M in level)
        if worst < 1.0 - _NORM_MARGIN:
            return k, worst
        if len(level) * len(mats) > budget:
            break
        level = [mat_mul(A, M) for A in mats for M in level]
    return None, worst


@dataclass(frozen=True)
class IteratedFunctionSystem:
    dim: int
    maps: tuple
    seed: ConvexPointSet

    def __len__(self):
        return len(self.maps)


def make_ifs(
    maps: Sequence[AffineMap],
    seed: ConvexPointSet,
    ctx: Context = EXACT,
    check_seed_invariance: bool = True,
    check_contractivity: bool = True,
) -> IteratedFunctionSystem:
    """Assemble and validate an IFS.

    Contractivity is checked per map first; if some map has norm >= 1 the
    system is still accepted when all compositions of some length k <= 8
    contract (see module docstring).  Seed invariance phi_i(C) subset C is
    verified by LP membership of every mapped generator and can be switched
    off for exploratory inputs.
    """
    maps = tuple(maps)
    if not maps:
        raise DegenerateInput("IFS needs at least one map")
    d = maps[0].dim
    if any(m.dim != d for m in maps) or seed.dim != d:
        raise DimensionMismatch("maps and seed must share one ambient dimension")
    for m in maps:
        dd = det(tuple(tuple(ctx.scalar(x) for x in row) for row in m.matrix))
        if ctx.is_zero(dd):
            raise SingularMatrix("IFS map has singular matrix")
    if check_contractivity:
        norms = [operator_norm_float(m.matrix) for m in maps]
        if max(norms) >= 1.0 - _NORM_MARGIN:
            k, worst = _eventually_contractive(maps)
            if k is None:
                raise NotContractive(
                    f"system is not eventually contractive (max product norm {worst:.6g})",
                    norm=worst,
                )
    if check_seed_invariance:
        for m in maps:
            for p in seed.points:
                q = tuple(ctx.scalar(x) for x in m(tuple(ctx.scalar(c) for c in p)))
                if not point_in_hull(q, seed, ctx):
                    raise DegenerateInput(
                        f"seed is not invariant: map sends generator {p} outside conv(seed)"
                    )
    return IteratedFunctionSystem(dim=d, maps=maps, seed=seed)


def compose(ifs: IteratedFunctionSystem, word: Sequence[int]) -> AffineMap:
    """phi_word = phi_{w0} o phi_{w1} o ... o phi_{wk-1}."""
    if len(word) == 0:
        raise DegenerateInput("empty word")
    for letter in word:
        if not 0 <= letter < len(ifs.maps):
            raise DegenerateInput(f"letter {letter} out of range 0..{len(ifs.maps) - 1}")
    M = identity(ifs.dim)
    t = tuple([0] * ifs.dim)
    for letter in reversed(word):
        g = ifs.maps[letter]
        M = mat_mul(g.matrix, M)
        t = tuple(v + b for v, b in zip(mat_vec(g.matrix, t), g.translation))
    return AffineMap(matrix=M, translation=t)


def fixed_point(m: AffineMap, ctx: Context = EXACT):
    """The unique x with phi(x) = x, solving (I - T) x = b."""
    d = m.dim
    A = tuple(
        tuple((1 if i == j else 0) - m.matrix[i][j] for j in range(d)) for i in range(d)
    )
    return solve(A, m.translation, ctx)


def _map_body(m: AffineMap, b: ConvexPointSet) -> ConvexPointSet:
    return ConvexPointSet(dim=b.dim, points=tuple(m(p) for p in b.points))


def iterate_bodies(ifs: IteratedFunctionSystem, k: int, budget: int = BODY_BUDGET):
    """All level-k images phi_sigma(seed), sigma in Sigma^k, in word-lex order."""
    if k < 0:
        raise DegenerateInput("level must be >= 0")
    if len(ifs.maps) ** k > budget:
        raise BudgetExceeded(f"{len(ifs.maps)}^{k} bodies exceed budget {budget}")
    bodies = [ifs.seed]
    for _ in range(k):
        bodies = [_map_body(m, b) for m in ifs.maps for b in bodies]
    return bodies


def _deterministic_depth(n_maps: int, budget: int) -> int:
    if n_maps == 1:
        # the attractor is one fixed point; deep iteration only tightens the
        # radius bound and costs a single orbit
        return 60
    k = 0
    while n_maps ** (k + 1) <= budget:
        k += 1
    return k


def attractor_sample(
    ifs: IteratedFunctionSystem,
    budget: int,
    method: str = "deterministic",
    seed: int = CHAOS_SEED,
):
    """Float point sample of the attractor.

    deterministic: {phi_sigma(p0) : sigma in Sigma^k} for the largest k with
    N^k <= budget, p0 the fixed point of maps[0].  chaos: a random-orbit run
    with a fixed default PRNG seed and a 100-step burn-in.
    """
    if budget < 1:
        raise DegenerateInput("budget must be >= 1")
    p0 = fixed_point(ifs.maps[0], FLOAT)
    fmaps = [
        (mat_float(m.matrix), tuple(float(x) for x in FLOAT.point(m.translation)))
        for m in ifs.maps
    ]
    if method == "deterministic":
        k = _deterministic_depth(len(ifs.maps), budget)
        points = [p0]
        for _ in range(k):
            points = [
                tuple(sum(M[i][j] * p[j] for j in range(ifs.dim)) + t[i] for i in range(ifs.dim))
                for (M, t) in fmaps
                for p in points
            ]
        return points
    if method == "chaos":
        rng = random.Random(seed)
        x = p0
        out = []
        for step in range(CHAOS_BURN_IN + budget):
            M, t = fmaps[rng.randrange(len(fmaps))]
            x = tuple(sum(M[i][j] * x[j] for j in range(ifs.dim)) + t[i] for i in range(ifs.dim))
            if step >= CHAOS_BURN_IN:
                out.append(x)
        return out
    raise DegenerateInput(f"unknown sampling method {method!r}")


def sample_radius_bound(ifs: IteratedFunctionSystem, budget: int) -> float:
    """Hausdorff bound between the deterministic sample and the attractor.

    Equals the largest level-k body diameter at the sampling depth.
    """
    k = _deterministic_depth(len(ifs.maps), budget)
    worst = 0.0
    for b in iterate_bodies(ifs, k, budget=max(budget, len(ifs.maps) ** k)):
        worst = max(worst, math.sqrt(float(diameter_squared(b, FLOAT))))
    return worst


# -- connected components -------------------------------------------------------


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            if rj < ri:
                ri, rj = rj, ri
            self.parent[rj] = ri


@dataclass(frozen=True)
class ComponentDecomposition:
    """Partition of bodies into connected components of their union."""

    level: Optional[int]
    bodies: tuple
    parts: tuple          # tuple of tuples of body indices, canonically ordered
    diameters: tuple      # per part; squared in exact mode, euclidean in float
    marginal: bool
    mode: str

    @property
    def count(self) -> int:
        return len(self.parts)


def _candidate_pairs(bodies, slack: float):
    """Index pairs whose float bounding boxes touch within ``slack``.

    Float boxes only prune: any pair a sound method might join is kept
    (coordinates are O(1) here, so the absolute slack dominates rounding).
    Pairs come out sorted, so downstream processing is deterministic.
    """
    d = bodies[0].dim
    n = len(bodies)
    los = np.empty((n, d))
    his = np.empty((n, d))
    for i, b in enumerate(bodies):
        arr = np.array([[float(FLOAT.scalar(c)) for c in p] for p in b.points])
        los[i] = arr.min(axis=0)
        his[i] = arr.max(axis=0)
    order = np.argsort(los[:, 0], kind="stable")
    slo, shi = los[order], his[order]
    pairs = []
    for pos in range(n):
        j = pos + 1
        limit = np.searchsorted(slo[:, 0], shi[pos, 0] + slack, side="right")
        if limit <= j:
            continue
        js = np.arange(j, limit)
        ok = np.all(
            (slo[js] <= shi[pos] + slack) & (slo[pos] <= shi[js] + slack), axis=1
        )
        a = order[pos]
        for jj in js[ok]:
            b_ = order[jj]
            pairs.append((a, b_) if a < b_ else (b_, a))
    pairs.sort()
    return pairs


def _part_diameter(bodies, part, ctx: Context):
    pts = []
    seen = set()
    for idx in part:
        for p in bodies[idx].points:
            q = ctx.point(p)
            if q not in seen:
                seen.add(q)
                pts.append(q)
    merged = ConvexPointSet(dim=bodies[part[0]].dim, points=tuple(pts))
    if merged.dim == 2 and len(pts) > 64:
        from .convex import hull_vertices_2d

        merged = ConvexPointSet(dim=2, points=hull_vertices_2d(merged, ctx))
    d2 = diameter_squared(merged, ctx)
    return d2 if ctx.exact else math.sqrt(d2)


def component_decomposition(
    bodies: Sequence[ConvexPointSet],
    ctx: Context = EXACT,
    level: Optional[int] = None,
) -> ComponentDecomposition:
    """Connected components of a union of convex bodies.

    Compact convex sets have a connected union exactly when they are chained
    by pairwise intersections, so components are found by union-find over the
    pairwise hull-intersection graph (touching counts).  A bounding-box sweep
    prunes pairs; pairs already connected need no LP.  The resulting partition
    is independent of body order and of the pruning.
    """
    bodies = list(bodies)
    if not bodies:
        raise DegenerateInput("no bodies")
    d = bodies[0].dim
    if any(b.dim != d for b in bodies):
        raise DimensionMismatch("bodies must share one ambient dimension")
    slack = max(ctx.tol, 1e-9)
    uf = _UnionFind(len(bodies))
    marginal = False
    escalated = False
    fast_2d = ctx.exact and d == 2
    if fast_2d:
        from .convex import _sat_disjoint_2d, hull_vertices_2d

        pts = [tuple(ctx.point(p) for p in b.points) for b in bodies]
        ptsets = [frozenset(ps) for ps in pts]
        hulls = [hull_vertices_2d(b, ctx) for b in bodies]
    for i, j in _candidate_pairs(bodies, slack):
        if uf.find(i) == uf.find(j):
            continue
        if fast_2d:
            hit = bool(ptsets[i] & ptsets[j]) or not _sat_disjoint_2d(
                pts[i], pts[j], hulls[i], hulls[j]
            )
        else:
            hit, marg, esc = hulls_intersect_decision(bodies[i], bodies[j], ctx)
            marginal = marginal or marg
            escalated = escalated or esc
        if hit:
            uf.union(i, j)
    groups = {}
    for i in range(len(bodies)):
        groups.setdefault(uf.find(i), []).append(i)
    parts = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=min))
    diameters = tuple(_part_diameter(bodies, part, ctx) for part in parts)
    mode = "exact" if (ctx.exact or escalated) else "float"
    return ComponentDecomposition(
        level=level,
        bodies=tuple(bodies),
        parts=parts,
        diameters=diameters,
        marginal=marginal,
        mode=mode,
    )
