"""Generators for the explicit fractal families, with closed-form predictions.

Each generator returns exact-arithmetic maps (rationals, or Q(sqrt 2) for the
rotated square) so that the touching cases can be decided downstream, plus the
family's predicted verdicts for cross-checking against the generic checker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Optional, Sequence

import numpy as np

from .convex import ConvexPointSet, body, hull_vertices_2d, hulls_intersect
from .errors import (
    DegenerateInput,
    DegenerateSimplex,
    ImagesOverlap,
    NonSummableEpsilons,
    NotConvex,
    NoValidCornerCount,
    ParamOutOfRange,
)
from .ifs import AffineMap, IteratedFunctionSystem, fixed_point, make_ifs
from .linalg import det, mat_mul, mat_vec, solve
from .scalars import EXACT, QSqrt2, to_exact, to_float

SQRT2_HALF = QSqrt2(0, Fraction(1, 2))          # sqrt(2)/2
DISCONNECT_THRESHOLD = QSqrt2(Fraction(4, 7), Fraction(-1, 7))   # 1/(2 + 1/sqrt2)


def _unit_cube_points(d: int):
    return tuple(tuple(Fraction(c) for c in eps) for eps in product((0, 1), repeat=d))


def _diag(entries):
    d = len(entries)
    return tuple(tuple(entries[i] if i == j else Fraction(0) for j in range(d)) for i in range(d))


# -- Mendivil-Taylor -----------------------------------------------------------------


@dataclass(frozen=True)
class MendivilTaylor:
    ifs: IteratedFunctionSystem
    t: Fraction
    s: Fraction
    predicted_thick: bool


def mendivil_taylor(t, s) -> MendivilTaylor:
    """Four-map self-affine system on the unit square, one map per corner.

    Predicted thick iff (1-t)(1-s-t) <= t(s-t), the exact characterization of
    the family.  The corner-(1,1) map is (tx + (1-t), sy + (1-s)), the unique
    affine choice fixing that corner symmetrically.
    """
    t, s = Fraction(to_exact(t)), Fraction(to_exact(s))
    if not (0 < t < Fraction(1, 2) < s < 1 and s + t < 1):
        raise ParamOutOfRange(f"need 0 < t < 1/2 < s < 1 and s + t < 1; got t={t}, s={s}")
    maps = (
        AffineMap(_diag((t, s)), (Fraction(0), Fraction(0))),
        AffineMap(_diag((s, t)), (Fraction(0), 1 - t)),
        AffineMap(_diag((s, t)), (1 - s, Fraction(0))),
        AffineMap(_diag((t, s)), (1 - t, 1 - s)),
    )
    ifs = make_ifs(maps, body(_unit_cube_points(2)), EXACT)
    predicted = (1 - t) * (1 - s - t) <= t * (s - t)
    return MendivilTaylor(ifs=ifs, t=t, s=s, predicted_thick=predicted)


def mendivil_taylor_threshold(s) -> float:
    """The critical t for a given s: thick iff t >= (1 - sqrt(2s-1))/2."""
    s = to_float(s)
    return (1.0 - math.sqrt(2.0 * s - 1.0)) / 2.0


# -- rotated square ------------------------------------------------------------------


@dataclass(frozen=True)
class RotatedSquare:
    ifs: IteratedFunctionSystem
    r: Fraction
    predicted_thick: bool
    predicted_disconnected: bool


def rotated_square(r) -> RotatedSquare:
    """Four corner similarities of ratio r plus a pi/4-rotated center copy.

    Thick iff r >= 1/3; totally disconnected if r < 1/(2 + 1/sqrt2).  The
    rotation entries live in Q(sqrt 2), so exact checks stay exact.
    """
    r = Fraction(to_exact(r))
    if not 0 < r < Fraction(1, 2):
        raise ParamOutOfRange(f"need 0 < r < 1/2; got r={r}")
    rot = (
        (r * SQRT2_HALF, -r * SQRT2_HALF),
        (r * SQRT2_HALF, r * SQRT2_HALF),
    )
    maps = (
        AffineMap(_diag((r, r)), (Fraction(0), Fraction(0))),
        AffineMap(_diag((r, r)), (1 - r, Fraction(0))),
        AffineMap(_diag((r, r)), (Fraction(0), 1 - r)),
        AffineMap(_diag((r, r)), (1 - r, 1 - r)),
        AffineMap(rot, (Fraction(1, 2), Fraction(1, 2) - r * SQRT2_HALF)),
    )
    ifs = make_ifs(maps, body(_unit_cube_points(2)), EXACT)
    return RotatedSquare(
        ifs=ifs,
        r=r,
        predicted_thick=r >= Fraction(1, 3),
        predicted_disconnected=DISCONNECT_THRESHOLD > r,
    )


# -- cross and corner fractal cubes ----------------------------------------------------


@dataclass(frozen=True)
class CrossCorner:
    ifs: IteratedFunctionSystem
    n: int
    d: int
    digits: tuple                 # integer digit tuples
    corner_count: int             # N found by the hull search
    paper_floor_count: int        # floor((n-1)(d-1)/(2d) + 1/d)
    ceiling_count: int            # ceil(((n-1)(d-1)/2 + 1)/d)
    formula_mismatch: bool
    dimension: float              # log |digits| / log n


def _cross_cells(n: int, d: int):
    c = (n - 1) // 2
    cells = set()
    for j in range(1, n - 1):
        base = [c] * d
        for axis in range(d):
            v = list(base)
            v[axis] = j
            cells.add(tuple(v))
    return cells


def _cell_body(cells, n: int, d: int) -> ConvexPointSet:
    pts = set()
    for cell in cells:
        for eps in product((0, 1), repeat=d):
            pts.add(tuple(Fraction(cell[i] + eps[i], n) for i in range(d)))
    return ConvexPointSet(d, tuple(sorted(pts)))


def _cells_touch(a, b) -> bool:
    return max(abs(x - y) for x, y in zip(a, b)) <= 1


def _corner_chain(corner, count: int, n: int, d: int):
    return [
        tuple(j if corner[i] == 0 else n - 1 - j for i in range(d)) for j in range(count)
    ]


def cross_corner(n: int, d: int) -> CrossCorner:
    """Cross-and-corner digit system on the n^d grid.

    The corner chain length N is the smallest count whose chain hull meets the
    cross hull (decided exactly), subject to the chain cells touching neither
    the cross cells nor any other chain.  The floor-formula count from the
    source family is reported alongside; at (n=5, d=2) the hull criterion
    admits no valid N at all.
    """
    if n < 3 or n % 2 == 0:
        raise ParamOutOfRange(f"n must be odd and >= 3; got {n}")
    if d < 2:
        raise ParamOutOfRange(f"d must be >= 2; got {d}")
    cross = _cross_cells(n, d)
    cross_body = _cell_body(cross, n, d)
    corners = list(product((0, 1), repeat=d))
    found = None
    for count in range(1, (n + 1) // 2 + 1):
        chain = _corner_chain(corners[0], count, n, d)
        if hulls_intersect(_cell_body(chain, n, d), cross_body, EXACT).intersects:
            found = count
            break
    if found is None:
        raise NoValidCornerCount(f"no chain length reaches the cross hull for n={n}, d={d}")
    chains = [_corner_chain(c, found, n, d) for c in corners]
    for chain in chains:
        for cell in chain:
            if any(_cells_touch(cell, cc) for cc in cross):
                raise NoValidCornerCount(
                    f"chain of length {found} touches cross cells for n={n}, d={d}"
                )
    for ca, cb in combinations(chains, 2):
        if any(_cells_touch(x, y) for x in ca for y in cb):
            raise NoValidCornerCount(
                f"corner chains of length {found} touch each other for n={n}, d={d}"
            )
    digits = sorted(cross | {cell for chain in chains for cell in chain})
    ratio = Fraction(1, n)
    maps = tuple(
        AffineMap(_diag([ratio] * d), tuple(Fraction(c, n) for c in digit))
        for digit in digits
    )
    ifs = make_ifs(maps, body(_unit_cube_points(d)), EXACT)
    floor_count = int(Fraction((n - 1) * (d - 1), 2 * d) + Fraction(1, d))
    ceil_count = -(-((n - 1) * (d - 1) // 2 + 1) // d)
    return CrossCorner(
        ifs=ifs,
        n=n,
        d=d,
        digits=tuple(digits),
        corner_count=found,
        paper_floor_count=floor_count,
        ceiling_count=ceil_count,
        formula_mismatch=floor_count != found,
        dimension=math.log(len(digits)) / math.log(n),
    )


# -- simplex construction ---------------------------------------------------------------


@dataclass(frozen=True)
class SimplexIfs:
    ifs: IteratedFunctionSystem
    vertices: tuple
    inner_vertices: tuple
    contraction: Fraction


def _mat_inverse_exact(M):
    d = len(M)
    cols = [solve(M, tuple(1 if i == k else 0 for i in range(d)), EXACT) for k in range(d)]
    return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


def _barycentric(point, verts):
    d = len(point)
    base = verts[0]
    M = tuple(tuple(verts[j + 1][i] - base[i] for j in range(d)) for i in range(d))
    coeffs = solve(M, tuple(point[i] - base[i] for i in range(d)), EXACT)
    return (1 - sum(coeffs),) + tuple(coeffs)


def simplex_ifs(vertices, inner_ratio, inner_shift, contraction) -> SimplexIfs:
    """d+1 affine maps on a simplex, each fixing one vertex.

    Map i scales every edge vector at A_i by the contraction except the one
    toward A_{i-1}, which is sent onto the segment from A_i to the inner
    vertex A'_{i+1} (indices cyclic).  Validates affine independence, that the
    inner simplex is strictly interior, eventual contractivity of the system,
    and pairwise disjointness of the images.
    """
    verts = tuple(tuple(to_exact(c) for c in p) for p in vertices)
    d = len(verts[0])
    if len(verts) != d + 1:
        raise DegenerateSimplex(f"need {d + 1} vertices in dimension {d}")
    lam = Fraction(to_exact(contraction))
    if not 0 < lam < 1:
        raise ParamOutOfRange(f"contraction must lie in (0,1); got {lam}")
    r = Fraction(to_exact(inner_ratio))
    shift = tuple(to_exact(c) for c in inner_shift)
    base = verts[0]
    edges = tuple(tuple(verts[j + 1][i] - base[i] for j in range(d)) for i in range(d))
    if det(edges) == 0:
        raise DegenerateSimplex("vertices are affinely dependent")
    inner = tuple(tuple(r * p[i] + shift[i] for i in range(d)) for p in verts)
    for q in inner:
        if any(c <= 0 for c in _barycentric(q, verts)):
            raise ParamOutOfRange("inner simplex is not strictly inside the outer simplex")

    m = d + 1
    maps = []
    for i in range(m):
        cols_dom, cols_img = [], []
        for j in range(m):
            if j == i:
                continue
            v = tuple(verts[j][k] - verts[i][k] for k in range(d))
            cols_dom.append(v)
            if j == (i - 1) % m:
                cols_img.append(tuple(inner[(i + 1) % m][k] - verts[i][k] for k in range(d)))
            else:
                cols_img.append(tuple(lam * c for c in v))
        V = tuple(tuple(cols_dom[j][i2] for j in range(d)) for i2 in range(d))
        W = tuple(tuple(cols_img[j][i2] for j in range(d)) for i2 in range(d))
        T = mat_mul(W, _mat_inverse_exact(V))
        b = tuple(verts[i][k] - mat_vec(T, verts[i])[k] for k in range(d))
        maps.append(AffineMap(T, b))

    seed = ConvexPointSet(d, verts)
    ifs = make_ifs(tuple(maps), seed, EXACT)
    for mp, v in zip(maps, verts):
        if fixed_point(mp, EXACT) != tuple(v):
            raise DegenerateSimplex("constructed map does not fix its vertex")
    images = [ConvexPointSet(d, tuple(mp(p) for p in verts)) for mp in maps]
    for a, b_ in combinations(images, 2):
        if hulls_intersect(a, b_, EXACT).intersects:
            raise ImagesOverlap("simplex images are not pairwise disjoint")
    return SimplexIfs(ifs=ifs, vertices=verts, inner_vertices=inner, contraction=lam)


def centered_inner_shift(vertices, inner_ratio):
    """Shift placing the scaled copy concentric with the simplex."""
    verts = [tuple(to_exact(c) for c in p) for p in vertices]
    r = to_exact(inner_ratio)
    m = len(verts)
    centroid = tuple(sum(p[i] for p in verts) / Fraction(m) for i in range(len(verts[0])))
    return tuple((1 - r) * c for c in centroid)


# -- triangle grid (self-similar refinement of the simplex construction) ------------------


@dataclass(frozen=True)
class TriangleGrid:
    ifs: IteratedFunctionSystem
    depth: int                    # subdivision exponent: 4^depth cells
    map_count: int
    dimension_estimate: float
    images: tuple                 # the three covered target triangles


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _triangles_intersect_2d(t1, t2) -> bool:
    """Exact SAT test for closed triangles: no strictly separating edge line."""
    for tri, other in ((t1, t2), (t2, t1)):
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            inner = _orient(a, b, tri[(i + 2) % 3])
            if inner == 0:
                continue
            flip = inner > 0
            if all(
                (_orient(a, b, q) < 0 if flip else _orient(a, b, q) > 0) for q in other
            ):
                return False
    return True


def triangle_grid_ifs(triangle, contraction) -> TriangleGrid:
    """Self-similar cover of the simplex-IFS images by a dyadic triangle grid.

    The triangle splits into 4^depth half-scale copies, depth chosen so that
    2^-depth <= contraction/100 < 2^-depth+1; cells meeting any of the three
    target images are kept.  The result is a self-similar IFS of ratio
    2^-depth whose level-1 union covers the targets, so the thick-shadow
    criterion is inherited.
    """
    verts = tuple(tuple(to_exact(c) for c in p) for p in triangle)
    if len(verts) != 3 or _orient(*verts) == 0:
        raise DegenerateSimplex("need a nondegenerate triangle")
    lam = Fraction(to_exact(contraction))
    if not 0 < lam < 1:
        raise ParamOutOfRange("contraction must lie in (0,1)")
    depth = 1
    while Fraction(1, 2**depth) > lam / 100:
        depth += 1
    while depth > 1 and Fraction(1, 2 ** (depth - 1)) <= lam / 100:
        depth -= 1

    r = Fraction(3, 10)
    inner = simplex_images_only(verts, r, centered_inner_shift(verts, r), lam)

    m = 2**depth
    A = verts[0]
    u = tuple(Fraction(verts[1][i] - A[i], m) for i in range(2))
    v = tuple(Fraction(verts[2][i] - A[i], m) for i in range(2))

    def lattice(i, j):
        return (A[0] + i * u[0] + j * v[0], A[1] + i * u[1] + j * v[1])

    img_boxes = []
    for t in inner:
        xs = [p[0] for p in t]
        ys = [p[1] for p in t]
        img_boxes.append((min(xs), max(xs), min(ys), max(ys)))

    selected = []
    for i in range(m):
        for j in range(m - i):
            cells = [(lattice(i, j), lattice(i + 1, j), lattice(i, j + 1))]
            if i + j <= m - 2:
                cells.append((lattice(i + 1, j + 1), lattice(i, j + 1), lattice(i + 1, j)))
            for upright, cell in zip((True, False), cells):
                xs = [p[0] for p in cell]
                ys = [p[1] for p in cell]
                box = (min(xs), max(xs), min(ys), max(ys))
                for t, tb in zip(inner, img_boxes):
                    if box[0] > tb[1] or tb[0] > box[1] or box[2] > tb[3] or tb[2] > box[3]:
                        continue
                    if _triangles_intersect_2d(cell, t):
                        selected.append((upright, cell))
                        break

    ratio = Fraction(1, m)
    maps = []
    for upright, cell in selected:
        if upright:
            T = _diag((ratio, ratio))
            b = tuple(cell[0][k] - ratio * A[k] for k in range(2))
        else:
            T = _diag((-ratio, -ratio))
            b = tuple(cell[0][k] + ratio * A[k] for k in range(2))
        maps.append(AffineMap(T, b))
    # cell vertices are barycentric-dyadic points of the seed triangle, so the
    # seed-invariance LP scan is redundant here and skipped for speed
    ifs = make_ifs(tuple(maps), ConvexPointSet(2, verts), EXACT, check_seed_invariance=False)
    return TriangleGrid(
        ifs=ifs,
        depth=depth,
        map_count=len(maps),
        dimension_estimate=math.log(len(maps)) / (depth * math.log(2.0)),
        images=inner,
    )


def simplex_images_only(vertices, inner_ratio, inner_shift, contraction):
    """The d+1 simplex-map images as point tuples, without IFS validation."""
    verts = tuple(tuple(to_exact(c) for c in p) for p in vertices)
    d = len(verts[0])
    lam = Fraction(to_exact(contraction))
    r = Fraction(to_exact(inner_ratio))
    shift = tuple(to_exact(c) for c in inner_shift)
    inner = tuple(tuple(r * p[i] + shift[i] for i in range(d)) for p in verts)
    m = d + 1
    out = []
    for i in range(m):
        img = [verts[i]]
        for j in range(m):
            if j == i:
                continue
            if j == (i - 1) % m:
                img.append(inner[(i + 1) % m])
            else:
                img.append(
                    tuple(verts[i][k] + lam * (verts[j][k] - verts[i][k]) for k in range(d))
                )
        out.append(tuple(img))
    return tuple(out)


# -- polytope unions ----------------------------------------------------------------------


@dataclass(frozen=True)
class PolytopeUnion:
    members: tuple            # SimplexIfs per simplex
    simplices: tuple          # vertex tuples of the decomposition


def polytope_union(vertices, contraction, inner_ratio=Fraction(3, 10)) -> PolytopeUnion:
    """Simplex decomposition of a polytope with one simplex IFS per piece.

    Planar polygons are fan-triangulated from their hull; in higher dimension
    only simplices are accepted, since general triangulation needs the facet
    machinery this package deliberately avoids.
    """
    pts = tuple(tuple(to_exact(c) for c in p) for p in vertices)
    if not pts:
        raise DegenerateInput("no vertices")
    d = len(pts[0])
    if d == 2:
        hull = hull_vertices_2d(ConvexPointSet(2, pts), EXACT)
        if len(hull) < 3:
            raise DegenerateInput("polygon is degenerate")
        tris = tuple((hull[0], hull[k], hull[k + 1]) for k in range(1, len(hull) - 1))
    elif len(pts) == d + 1:
        tris = (pts,)
    else:
        raise DegenerateInput(
            "non-simplex polytopes are only triangulated in the plane"
        )
    members = tuple(
        simplex_ifs(tri, inner_ratio, centered_inner_shift(tri, inner_ratio), contraction)
        for tri in tris
    )
    return PolytopeUnion(members=members, simplices=tris)


# -- Venetian blinds -----------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    a: tuple
    b: tuple

    def length_squared(self):
        return sum((x - y) * (x - y) for x, y in zip(self.a, self.b))

    def length(self) -> float:
        return math.sqrt(to_float(self.length_squared()))


@dataclass(frozen=True)
class VenetianBlind:
    epsilons: tuple
    levels: tuple             # E_0 .. E_n as tuples of Segment
    connectors: tuple         # V_n
    connector_sum: Fraction   # S_n = sum 2^j eps_j, exact
    radicand: Fraction        # 1 + S_n^2, exact
    gamma_length: float       # S_n + sqrt(1 + S_n^2)

    @property
    def blinds(self):
        return self.levels[-1]

    @property
    def gamma_segments(self):
        return self.blinds + self.connectors


def _check_epsilons(epsilons, n: int):
    eps = [Fraction(to_exact(e)) for e in epsilons[:n]]
    if len(eps) < n:
        raise NonSummableEpsilons(f"need {n} epsilon values, got {len(eps)}")
    prev = None
    for j, e in enumerate(eps, start=1):
        if e <= 0:
            raise NonSummableEpsilons("epsilons must be positive")
        if prev is not None and 2 * e >= prev:
            raise NonSummableEpsilons(
                f"2^j eps_j must decrease: 2*eps_{j} = {2 * e} >= eps_{j - 1} = {prev}"
            )
        prev = e
    return eps


def _midpoint(a, b):
    return tuple((x + y) / 2 for x, y in zip(a, b))


def venetian_blind(epsilons, n: int) -> VenetianBlind:
    """Iterated blind refinement of the unit base segment.

    Level i+1 replaces each blind L(a,b) by L(a, mid + eps*e2) and
    L(mid, b + eps*e2); connectors stack vertical jumps so the union is a
    connected curve of exact length S_n + sqrt(1 + S_n^2), S_n = sum 2^j eps_j.
    """
    if n < 0 or n > 24:
        raise ParamOutOfRange("levels must lie in 0..24")
    eps = _check_epsilons(epsilons, n)
    e0 = Segment((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)))
    levels = [(e0,)]
    for i in range(n):
        e = eps[i]
        nxt = []
        for seg in levels[-1]:
            mid = _midpoint(seg.a, seg.b)
            nxt.append(Segment(seg.a, (mid[0], mid[1] + e)))
            nxt.append(Segment(mid, (seg.b[0], seg.b[1] + e)))
        levels.append(tuple(nxt))

    connectors: dict = {}
    for j in range(1, n + 1):
        prev_level = levels[j - 1]
        width = Fraction(1, 2**j)
        nxt: dict = {}
        for r in range(1, 2**j + 1):
            x = r * width
            if r % 2 == 1:
                seg = prev_level[(r - 1) // 2]
                y = _midpoint(seg.a, seg.b)[1]
            else:
                seg = prev_level[r // 2 - 1]
                y = seg.b[1]
            stack = list(connectors.get(Fraction(r, 2**j), ())) if r % 2 == 0 else []
            stack.append(Segment((x, y), (x, y + eps[j - 1])))
            nxt[x] = tuple(stack)
        connectors = nxt
    conn = tuple(seg for x in sorted(connectors) for seg in connectors[x])

    s_n = sum((Fraction(2**j) * eps[j - 1] for j in range(1, n + 1)), Fraction(0))
    conn_total = sum((seg.b[1] - seg.a[1] for seg in conn), Fraction(0))
    assert conn_total == s_n, "connector bookkeeping broke"
    width = Fraction(1, 2**n)
    for seg in levels[-1]:
        assert seg.b[0] - seg.a[0] == width
        assert seg.b[1] - seg.a[1] == s_n * width
    radicand = 1 + s_n * s_n
    return VenetianBlind(
        epsilons=tuple(eps),
        levels=tuple(levels),
        connectors=conn,
        connector_sum=s_n,
        radicand=radicand,
        gamma_length=float(s_n) + math.sqrt(float(radicand)),
    )


def reflect_segments(segments: Sequence[Segment], about=Fraction(1, 2)):
    """Mirror segments across the vertical line x = about."""
    return tuple(
        Segment((2 * about - s.a[0], s.a[1]), (2 * about - s.b[0], s.b[1])) for s in segments
    )


def segment_sweep(segments: Sequence[Segment], base: Segment, thetas) -> tuple:
    """Per-angle uncovered length of the base segment's projection.

    Directions are u = (sin t, cos t): the fibers are exactly the lines of
    slope -tan t, so t in [0, pi/2] covers the downward family and t in
    [0, pi) everything.
    """
    segs = np.array(
        [[[to_float(c) for c in s.a], [to_float(c) for c in s.b]] for s in segments]
    )
    basep = np.array([[to_float(c) for c in base.a], [to_float(c) for c in base.b]])
    gaps = []
    from .shadows import GAP_CLAMP, union_length

    for t in thetas:
        u = np.array([math.sin(t), math.cos(t)])
        pr = segs @ u
        lo, hi = pr.min(axis=1), pr.max(axis=1)
        blo, bhi = float(min(basep @ u)), float(max(basep @ u))
        covered = union_length(np.clip(lo, blo, bhi), np.clip(hi, blo, bhi))
        gap = (bhi - blo) - covered
        gaps.append(0.0 if gap <= GAP_CLAMP * max(1.0, bhi - blo) else gap)
    return tuple(gaps)


# -- polygon blinds --------------------------------------------------------------------------


@dataclass(frozen=True)
class BlindGroup:
    side: int
    vertex: int
    kind: str                 # "obtuse" or "cascade"
    segments: tuple


@dataclass(frozen=True)
class PolygonBlind:
    polygon: tuple
    groups: tuple
    vertex_points: tuple
    cascade_depth: int
    tail_bound: float         # untouched cascade-tail length, all directions


def _point_in_polygon(p, hull) -> bool:
    m = len(hull)
    for i in range(m):
        if _orient(hull[i], hull[(i + 1) % m], p) < 0:
            return False
    return True


def _unit_blind_segments(eps_scale, eps_base, levels: int):
    eps = [eps_scale * eps_base**j for j in range(1, levels + 1)]
    blind = venetian_blind(eps, levels)
    return blind.blinds + reflect_segments(blind.blinds)


def polygon_blind(
    vertices,
    eps_base=Fraction(1, 8),
    blind_levels: int = 6,
    cascade_depth: int = 12,
) -> PolygonBlind:
    """Blind cover of a convex polygon's boundary, split at side midpoints.

    Each half-side runs from the midpoint toward its vertex.  A half-side
    whose vertex angle is at least pi/2 carries one (reflected) blind; an
    acute vertex gets the dyadic cascade of shrinking blinds toward the
    vertex, truncated at cascade_depth, plus the vertex point itself.  Blind
    heights are halved until every emitted segment lies inside the polygon.
    """
    pts = tuple(tuple(to_exact(c) for c in p) for p in vertices)
    if len(pts) < 3:
        raise DegenerateInput("need at least 3 vertices")
    hull = hull_vertices_2d(ConvexPointSet(2, pts), EXACT)
    if len(hull) < 3:
        raise DegenerateInput("polygon is degenerate")
    if set(hull) != set(pts):
        raise NotConvex("vertex list is not a convex polygon")
    m = len(hull)
    centroid = tuple(sum(p[i] for p in hull) / Fraction(m) for i in range(2))

    def inward(mid, vert):
        e = (vert[0] - mid[0], vert[1] - mid[1])
        w = (-e[1], e[0])
        toward = (centroid[0] - mid[0], centroid[1] - mid[1])
        if w[0] * toward[0] + w[1] * toward[1] < 0:
            w = (e[1], -e[0])
        return w

    def place(mid, vert, w, segs, a=Fraction(0), b=Fraction(1)):
        e = (vert[0] - mid[0], vert[1] - mid[1])
        span = b - a
        out = []
        for s in segs:
            pa = (a + s.a[0] * span, s.a[1] * span)
            pb = (a + s.b[0] * span, s.b[1] * span)
            out.append(
                Segment(
                    (mid[0] + pa[0] * e[0] + pa[1] * w[0], mid[1] + pa[0] * e[1] + pa[1] * w[1]),
                    (mid[0] + pb[0] * e[0] + pb[1] * w[0], mid[1] + pb[0] * e[1] + pb[1] * w[1]),
                )
            )
        return tuple(out)

    def fitted(mid, vert, w, a, b):
        scale = Fraction(1, 4)
        for _ in range(200):
            segs = place(mid, vert, w, _unit_blind_segments(scale, eps_base, blind_levels), a=a, b=b)
            if all(
                _point_in_polygon(s.a, hull) and _point_in_polygon(s.b, hull) for s in segs
            ):
                return segs
            scale /= 2
        raise DegenerateInput("could not fit a blind inside the polygon")

    groups = []
    for k in range(m):
        v0, v1 = hull[k], hull[(k + 1) % m]
        mid = _midpoint(v0, v1)
        for vert, vidx in ((v1, (k + 1) % m), (v0, k)):
            prev_v = hull[(vidx - 1) % m]
            next_v = hull[(vidx + 1) % m]
            e1 = (prev_v[0] - vert[0], prev_v[1] - vert[1])
            e2 = (next_v[0] - vert[0], next_v[1] - vert[1])
            acute = e1[0] * e2[0] + e1[1] * e2[1] > 0
            w = inward(mid, vert)
            if not acute:
                segs = fitted(mid, vert, w, Fraction(0), Fraction(1))
                groups.append(BlindGroup(side=k, vertex=vidx, kind="obtuse", segments=segs))
            else:
                segs = []
                for j in range(cascade_depth):
                    a = 1 - Fraction(1, 2**j)
                    b = 1 - Fraction(1, 2 ** (j + 1))
                    segs.extend(fitted(mid, vert, w, a, b))
                groups.append(
                    BlindGroup(side=k, vertex=vidx, kind="cascade", segments=tuple(segs))
                )

    tail = 0.0
    for g in groups:
        if g.kind == "cascade":
            v0, v1 = hull[g.side], hull[(g.side + 1) % m]
            half = math.dist(tuple(map(to_float, v0)), tuple(map(to_float, v1))) / 2.0
            tail += half * 2.0**-cascade_depth
    return PolygonBlind(
        polygon=hull,
        groups=tuple(groups),
        vertex_points=hull,
        cascade_depth=cascade_depth,
        tail_bound=tail,
    )


def polygon_blind_sweep(pb: PolygonBlind, thetas) -> tuple:
    """Uncovered projection length of the polygon per direction."""
    segs = [s for g in pb.groups for s in g.segments]
    segs += [Segment(p, p) for p in pb.vertex_points]
    arr = np.array([[[to_float(c) for c in s.a], [to_float(c) for c in s.b]] for s in segs])
    poly = np.array([[to_float(c) for c in p] for p in pb.polygon])
    from .shadows import union_length

    gaps = []
    for t in thetas:
        u = np.array([math.sin(t), math.cos(t)])
        pr = arr @ u
        lo, hi = pr.min(axis=1), pr.max(axis=1)
        pv = poly @ u
        blo, bhi = float(pv.min()), float(pv.max())
        covered = union_length(np.clip(lo, blo, bhi), np.clip(hi, blo, bhi))
        gaps.append(max(0.0, (bhi - blo) - covered))
    return tuple(gaps)
