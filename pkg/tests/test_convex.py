"""Convex kernel: support queries, LP hull intersection, hulls, diameters."""

import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shadowlab.convex import (
    ConvexPointSet,
    body,
    diameter,
    diameter_squared,
    hull_vertices_2d,
    hulls_intersect,
    point_in_hull,
    projection_interval,
    support,
)
from shadowlab.errors import DimensionMismatch, ZeroDirection
from shadowlab.scalars import EXACT, FLOAT, Context

UNIT_SQUARE = body([(0, 0), (1, 0), (1, 1), (0, 1)])
TRIANGLE = body([(0, 0), (1, 0), (0, 1)])


def test_support_examples():
    assert support(UNIT_SQUARE, (1, 0), EXACT) == 1
    assert support(UNIT_SQUARE, (1, 1), EXACT) == 2
    assert support(TRIANGLE, (1, 1), EXACT) == 1


def test_support_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        support(UNIT_SQUARE, (1, 0, 0), EXACT)


def test_projection_interval_examples():
    assert projection_interval(UNIT_SQUARE, (0, 1), EXACT) == (0, 1)
    # unnormalized rational mode: <.,(1,1)> units
    assert projection_interval(UNIT_SQUARE, (1, 1), EXACT) == (0, 2)
    seg = body([(0, 0), (1, 0)])
    assert projection_interval(seg, (0, 1), EXACT) == (0, 0)
    with pytest.raises(ZeroDirection):
        projection_interval(UNIT_SQUARE, (0, 0), EXACT)


def test_projection_interval_float_normalizes():
    lo, hi = projection_interval(UNIT_SQUARE, (1, 1), FLOAT)
    assert abs(lo) < 1e-12 and abs(hi - math.sqrt(2)) < 1e-12


def test_diameter_examples():
    assert diameter(UNIT_SQUARE, EXACT) == 2          # squared in exact mode
    assert abs(diameter(UNIT_SQUARE, FLOAT) - math.sqrt(2)) < 1e-12
    assert diameter(body([(0, 0)]), EXACT) == 0
    assert diameter(body([(0, 0), (3, 4)]), EXACT) == 25
    assert diameter(body([(0, 0), (3, 4)]), FLOAT) == 5.0


def test_hulls_intersect_disjoint_with_separator():
    a = body([(0, 0), (1, 0), (0, 1)])
    b = body([(1, 1), (2, 1), (1, 2)])
    res = hulls_intersect(a, b, EXACT)
    assert not res.intersects and res.point is None
    n, c = res.separator.normal, res.separator.offset
    va = [sum(x * y for x, y in zip(n, p)) for p in a.points]
    vb = [sum(x * y for x, y in zip(n, p)) for p in b.points]
    assert max(va) < c < min(vb)
    # (1,1) with any offset strictly between 1 and 2 is also a valid separator
    # of these triangles; the contract only pins the strict-separation shape
    assert max(p[0] + p[1] for p in a.points) == 1
    assert min(p[0] + p[1] for p in b.points) == 2


def test_hulls_intersect_touching_corner():
    b2 = body([(1, 1), (2, 1), (2, 2), (1, 2)])
    res = hulls_intersect(UNIT_SQUARE, b2, EXACT)
    assert res.intersects
    assert res.point == (1, 1)


def test_hulls_intersect_cross_corner_touch():
    # origin chain of cross_corner(7,2) touches the cross hull at exactly
    # (2/7, 2/7): the hull's lower-left edge is x + y = 4/7
    n = 7

    def cell(i, j):
        return [(F(i + a, n), F(j + b, n)) for a in (0, 1) for b in (0, 1)]

    cross_cells = [(j, 3) for j in range(1, 6)] + [(3, j) for j in range(1, 6)]
    cross = body([p for c in cross_cells for p in cell(*c)])
    chain = body(cell(0, 0) + cell(1, 1))
    res = hulls_intersect(chain, cross, EXACT)
    assert res.intersects and res.point == (F(2, 7), F(2, 7))
    resf = hulls_intersect(chain, cross, FLOAT)
    assert resf.intersects and resf.marginal
    # single corner cube alone is strictly separated
    res1 = hulls_intersect(body(cell(0, 0)), cross, EXACT)
    assert not res1.intersects


def test_exact_fallback_escalates_marginal():
    ctx = Context(exact=False, tol=1e-9, exact_fallback=True)
    a = body([(0, 0), (1, 0), (1, 1), (0, 1)])
    b = body([(F(1) + F(1, 10**12), 0), (2, 0), (2, 1), (F(1) + F(1, 10**12), 1)])
    res = hulls_intersect(a, b, ctx)
    assert res.escalated and res.mode == "exact"
    assert not res.intersects          # exactly disjoint by 1e-12


def test_hull_vertices_2d_examples():
    five = body([(0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 2))])
    assert hull_vertices_2d(five, EXACT) == ((0, 0), (1, 0), (1, 1), (0, 1))
    collinear = body([(0, 0), (1, 1), (2, 2)])
    assert hull_vertices_2d(collinear, EXACT) == ((0, 0), (2, 2))
    with pytest.raises(DimensionMismatch):
        hull_vertices_2d(body([(0, 0, 0)]), EXACT)


def test_hull_vertices_2d_cross_corner_octagon():
    # the n=7 cross hull is an octagon containing (1/7,3/7) and (3/7,1/7)
    n = 7
    pts = []
    for j in range(1, 6):
        for c in ((j, 3), (3, j)):
            for a in (0, 1):
                for b_ in (0, 1):
                    pts.append((F(c[0] + a, n), F(c[1] + b_, n)))
    hull = hull_vertices_2d(body(pts), EXACT)
    assert len(hull) == 8
    assert (F(1, 7), F(3, 7)) in hull and (F(3, 7), F(1, 7)) in hull


def _random_rational_points(rng, dim, count, denom=8, span=4):
    return [
        tuple(F(rng.randint(-span * denom, span * denom), denom) for _ in range(dim))
        for _ in range(count)
    ]


def _grid_combination_probe(rng, pa, pb, tries=200):
    """One-sided oracle: a sampled convex combination of A inside conv(B)
    forces an intersection verdict."""
    for _ in range(tries):
        k = rng.randint(1, min(3, len(pa)))
        chosen = rng.sample(range(len(pa)), k)
        weights = [F(rng.randint(1, 16)) for _ in chosen]
        total = sum(weights)
        pt = tuple(
            sum(w * pa[i][c] for w, i in zip(weights, chosen)) / total
            for c in range(len(pa[0]))
        )
        if point_in_hull(pt, body(pb), EXACT):
            return pt
    return None


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_hulls_intersect_against_oracles(dim):
    rng = random.Random(1000 + dim)
    for trial in range(12):
        pa = _random_rational_points(rng, dim, rng.randint(2, min(12, dim + 5)))
        pb = _random_rational_points(rng, dim, rng.randint(2, min(12, dim + 5)))
        a, b = body(pa), body(pb)
        res = hulls_intersect(a, b, EXACT)
        assert res.intersects == hulls_intersect(b, a, EXACT).intersects  # symmetry
        if res.intersects:
            # certificate: the witness point lies in both hulls
            assert point_in_hull(res.point, a, EXACT)
            assert point_in_hull(res.point, b, EXACT)
        else:
            # dual certificate: strict separation of the generator sets
            n, c = res.separator.normal, res.separator.offset
            assert max(sum(x * y for x, y in zip(n, p)) for p in pa) < c
            assert min(sum(x * y for x, y in zip(n, p)) for p in pb) > c
            # grid oracle must not find a common point
            assert _grid_combination_probe(rng, pa, pb, tries=60) is None
        probe = _grid_combination_probe(rng, pa, pb, tries=40)
        if probe is not None:
            assert res.intersects


@given(
    st.lists(
        st.tuples(st.integers(-8, 8), st.integers(-8, 8)), min_size=1, max_size=8
    ),
    st.tuples(st.integers(-4, 4), st.integers(-4, 4)),
)
@settings(max_examples=60, deadline=None)
def test_support_pair_nonnegative(pts, u):
    b = body([(F(x), F(y)) for x, y in pts])
    uu = (F(u[0]), F(u[1]))
    if uu == (0, 0):
        return
    total = support(b, uu, EXACT) + support(b, tuple(-c for c in uu), EXACT)
    assert total >= 0
    # equality iff all points project to one value (hull within a hyperplane)
    vals = {uu[0] * F(x) + uu[1] * F(y) for x, y in pts}
    assert (total == 0) == (len(vals) == 1)


@given(
    st.lists(
        st.tuples(st.integers(-8, 8), st.integers(-8, 8)), min_size=2, max_size=7
    ),
    st.integers(0, 1000),
)
@settings(max_examples=50, deadline=None)
def test_projection_invariant_under_convex_combination(pts, seed):
    rng = random.Random(seed)
    base = [(F(x), F(y)) for x, y in pts]
    w = [F(rng.randint(0, 5)) for _ in base]
    if sum(w) == 0:
        w[0] = F(1)
    total = sum(w)
    extra = tuple(sum(wi * p[c] for wi, p in zip(w, base)) / total for c in range(2))
    u = (F(3), F(-2))
    before = projection_interval(body(base), u, EXACT)
    after = projection_interval(body(base + [extra]), u, EXACT)
    assert before == after


def test_point_in_hull_barycentric_and_lp_paths():
    assert point_in_hull((F(1, 3), F(1, 3)), TRIANGLE, EXACT)
    assert not point_in_hull((1, 1), TRIANGLE, EXACT)
    five = body([(0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 2))])
    assert point_in_hull((F(1, 2), F(99, 100)), five, EXACT)
    assert not point_in_hull((F(1, 2), F(101, 100)), five, EXACT)
