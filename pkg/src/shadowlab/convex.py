"""Convex bodies as finite generating point sets.

A body is conv(points) but the hull is never materialized: every query is a
support evaluation or an LP feasibility problem, so the same code serves d = 2
and d >= 3.  All operations are pure; bodies are immutable and hashable.

Intersection semantics are those of closed sets: hulls touching in a single
point intersect.  Float-mode answers within the tolerance of the feasibility
boundary are flagged ``marginal`` (decided by re-testing with both bodies
shrunk by the tolerance about their centroids, or by the width of the
separating gap); callers may enable exact fallback on the context to escalate
marginal queries to rational arithmetic automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DegenerateInput, DimensionMismatch, ZeroDirection
from .linalg import det, solve
from .linprog import solve_phase1
from .scalars import EXACT, Context, to_float


@dataclass(frozen=True)
class ConvexPointSet:
    """Finite generating point set of a convex body; denotes conv(points)."""

    dim: int
    points: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise DegenerateInput("dimension must be positive")
        if not self.points:
            raise DegenerateInput("empty point set")
        pts = tuple(tuple(p) for p in self.points)
        for p in pts:
            if len(p) != self.dim:
                raise DimensionMismatch(f"point {p} has length {len(p)}, expected {self.dim}")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)


def body(points) -> ConvexPointSet:
    pts = tuple(tuple(p) for p in points)
    if not pts:
        raise DegenerateInput("empty point set")
    return ConvexPointSet(dim=len(pts[0]), points=pts)


@dataclass(frozen=True)
class Hyperplane:
    """The set {x : <normal, x> = offset}; normal is nonzero."""

    normal: tuple
    offset: object

    def value(self, point):
        return sum(n * x for n, x in zip(self.normal, point)) - self.offset


@dataclass(frozen=True)
class IntersectionResult:
    intersects: bool
    point: Optional[tuple]            # common point when intersecting
    separator: Optional[Hyperplane]   # strict separator when disjoint
    marginal: bool                    # float verdict within tol of flipping
    mode: str                         # "float" or "exact"
    escalated: bool = False

    def __bool__(self):
        return self.intersects


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def support(b: ConvexPointSet, u, ctx: Context = EXACT):
    """max_{p in body} <p, u>, the support function of conv(points) at u."""
    if len(u) != b.dim:
        raise DimensionMismatch(f"direction length {len(u)} != dim {b.dim}")
    uu = ctx.point(u)
    return max(_dot(ctx.point(p), uu) for p in b.points)


def projection_interval(b: ConvexPointSet, u, ctx: Context = EXACT):
    """Projection of the body onto the line spanned by u, as [lo, hi].

    Float mode normalizes u to unit length; exact mode keeps u as given and
    reports the interval in <., u> units so the result stays in the field.
    """
    if len(u) != b.dim:
        raise DimensionMismatch(f"direction length {len(u)} != dim {b.dim}")
    uu = list(ctx.point(u))
    if all(ctx.is_zero(c) for c in uu):
        raise ZeroDirection("projection direction is zero")
    if not ctx.exact:
        nrm = math.sqrt(sum(c * c for c in uu))
        uu = [c / nrm for c in uu]
    hi = support(b, uu, ctx)
    lo = -support(b, [-c for c in uu], ctx)
    return lo, hi


def diameter_squared(b: ConvexPointSet, ctx: Context = EXACT):
    """Max squared pairwise distance between generators (= squared hull diameter)."""
    pts = [ctx.point(p) for p in b.points]
    best = ctx.scalar(0)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d2 = sum((a - c) * (a - c) for a, c in zip(pts[i], pts[j]))
            if d2 > best:
                best = d2
    return best


def diameter(b: ConvexPointSet, ctx: Context = EXACT):
    """Hull diameter; in exact mode the *squared* diameter (stays in the field)."""
    d2 = diameter_squared(b, ctx)
    if ctx.exact:
        return d2
    return math.sqrt(d2)


def _centroid(pts):
    n = len(pts)
    return tuple(sum(col) / n for col in zip(*pts))


def _shrink(pts, amount):
    """Pull every point toward the centroid by at most ``amount`` (floats)."""
    c = _centroid(pts)
    radius = max(math.dist(p, c) for p in pts)
    if radius <= amount:
        return [c for _ in pts]
    k = amount / radius
    return [tuple(ci + (1.0 - k) * (pi - ci) for pi, ci in zip(p, c)) for p in pts]


def _intersection_lp(pa, pb, ctx: Context):
    """Phase-1 LP for conv(pa) cap conv(pb); returns (result, pa, pb)."""
    d = len(pa[0])
    columns = [tuple(p) + (1, 0) for p in pa] + [tuple(-x for x in p) + (0, 1) for p in pb]
    rhs = [0] * d + [1, 1]
    return solve_phase1(columns, rhs, ctx)


def _separator_from_duals(res, pa, pb, ctx: Context) -> Hyperplane:
    d = len(pa[0])
    normal = tuple(res.duals[:d])
    if all(ctx.is_zero(c) for c in normal):
        raise RuntimeError("degenerate separating functional")
    hi_a = max(_dot(normal, p) for p in pa)
    lo_b = min(_dot(normal, p) for p in pb)
    two = ctx.scalar(2)
    return Hyperplane(normal=normal, offset=(hi_a + lo_b) / two)


def hulls_intersect(a: ConvexPointSet, b: ConvexPointSet, ctx: Context = EXACT) -> IntersectionResult:
    """Decide conv(a) cap conv(b) != {} with a witness either way.

    Intersecting: the witness is a common point (a convex combination found by
    the phase-1 simplex).  Disjoint: the witness is a hyperplane with
    <n, x> <= c for all generators of ``a`` and >= c for all of ``b``, both
    strictly (midpoint of the dual-certified support gap).
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"ambient dimensions differ: {a.dim} vs {b.dim}")
    if ctx.exact:
        shared = set(map(ctx.point, a.points)) & set(map(ctx.point, b.points))
        if shared:
            return IntersectionResult(True, min(shared), None, False, "exact")
    pa = [ctx.point(p) for p in a.points]
    pb = [ctx.point(p) for p in b.points]
    res = _intersection_lp(pa, pb, ctx)

    if res.feasible:
        lam = res.x[: len(pa)]
        point = tuple(sum(l * p[k] for l, p in zip(lam, pa)) for k in range(a.dim))
        marginal = False
        if not ctx.exact:
            spa, spb = _shrink(pa, ctx.tol), _shrink(pb, ctx.tol)
            marginal = not _intersection_lp(spa, spb, ctx).feasible
        if marginal and ctx.exact_fallback:
            return _escalate(a, b)
        return IntersectionResult(True, point, None, marginal, _mode(ctx))

    sep = _separator_from_duals(res, pa, pb, ctx)
    marginal = False
    if not ctx.exact:
        nrm = math.sqrt(sum(to_float(c) ** 2 for c in sep.normal))
        hi_a = max(_dot(sep.normal, p) for p in pa)
        lo_b = min(_dot(sep.normal, p) for p in pb)
        marginal = (lo_b - hi_a) / nrm <= 2 * ctx.tol
    if marginal and ctx.exact_fallback:
        return _escalate(a, b)
    return IntersectionResult(False, None, sep, marginal, _mode(ctx))


def _mode(ctx: Context) -> str:
    return "exact" if ctx.exact else "float"


def _escalate(a: ConvexPointSet, b: ConvexPointSet) -> IntersectionResult:
    exact = hulls_intersect(a, b, EXACT)
    return IntersectionResult(
        exact.intersects, exact.point, exact.separator, False, "exact", escalated=True
    )


def _sat_disjoint_2d(pa, pb, hull_a=None, hull_b=None) -> bool:
    """Exact separating-axis test for closed 2-D hulls (exact scalars only).

    Complete in the plane: the Minkowski difference's edge directions come
    from the two hulls' edges, so their normals (plus the direction itself
    for degenerate hulls, and the difference vector for two points) always
    contain a separating axis when one exists.
    """
    hulls = [
        hull_a if hull_a is not None else hull_vertices_2d(ConvexPointSet(2, tuple(pa)), EXACT),
        hull_b if hull_b is not None else hull_vertices_2d(ConvexPointSet(2, tuple(pb)), EXACT),
    ]
    axes = []
    for h in hulls:
        m = len(h)
        if m == 1:
            continue
        edges = [(h[i], h[(i + 1) % m]) for i in range(m)] if m > 2 else [(h[0], h[1])]
        for a, b in edges:
            dx, dy = b[0] - a[0], b[1] - a[1]
            axes.append((-dy, dx))
            if m == 2:
                axes.append((dx, dy))
    if len(hulls[0]) == 1 and len(hulls[1]) == 1:
        p, q = hulls[0][0], hulls[1][0]
        if p == q:
            return False
        axes.append((q[0] - p[0], q[1] - p[1]))
    for u in axes:
        va = [_dot(u, p) for p in hulls[0]]
        vb = [_dot(u, p) for p in hulls[1]]
        if max(va) < min(vb) or max(vb) < min(va):
            return True
    return False


def hulls_intersect_decision(a: ConvexPointSet, b: ConvexPointSet, ctx: Context = EXACT):
    """Intersection verdict only, no witnesses; exact 2-D pairs go through the
    separating-axis test, everything else through the LP.  Returns
    (intersects, marginal, escalated)."""
    if ctx.exact and a.dim == 2 and b.dim == 2:
        pa = [ctx.point(p) for p in a.points]
        pb = [ctx.point(p) for p in b.points]
        if set(pa) & set(pb):
            return True, False, False
        return not _sat_disjoint_2d(pa, pb), False, False
    res = hulls_intersect(a, b, ctx)
    return res.intersects, res.marginal, res.escalated


def point_in_hull(point, b: ConvexPointSet, ctx: Context = EXACT) -> bool:
    """Membership point in conv(points), by barycentric solve or phase-1 LP."""
    if len(point) != b.dim:
        raise DimensionMismatch("point/body dimension mismatch")
    p = ctx.point(point)
    pts = [ctx.point(q) for q in b.points]
    if len(pts) == b.dim + 1:
        base = pts[0]
        M = tuple(tuple(pts[j + 1][i] - base[i] for j in range(b.dim)) for i in range(b.dim))
        if not ctx.is_zero(det(M)):
            coeffs = solve(M, tuple(p[i] - base[i] for i in range(b.dim)), ctx)
            s = sum(coeffs)
            lam0 = ctx.scalar(1) - s
            return ctx.sign(lam0) >= 0 and all(ctx.sign(c) >= 0 for c in coeffs)
    columns = [tuple(q) + (1,) for q in pts]
    rhs = list(p) + [1]
    return solve_phase1(columns, rhs, ctx).feasible


def hull_vertices_2d(b: ConvexPointSet, ctx: Context = EXACT) -> tuple:
    """Extreme points of a planar body in counterclockwise order.

    Monotone chain; collinear interior points are dropped.  Degenerate inputs
    collapse naturally: a segment yields its two endpoints, a point itself.
    """
    if b.dim != 2:
        raise DimensionMismatch("hull_vertices_2d requires dim = 2")
    pts = sorted(set(ctx.point(p) for p in b.points))
    if len(pts) <= 2:
        return tuple(pts)

    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and ctx.sign(cross(out[-2], out[-1], p)) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return tuple(hull)
