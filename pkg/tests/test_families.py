"""Family generators: parameters, predictions, construction invariants."""

import math
from fractions import Fraction as F

import pytest

from shadowlab.convex import point_in_hull
from shadowlab.errors import (
    DegenerateSimplex,
    ImagesOverlap,
    NonSummableEpsilons,
    NotConvex,
    NoValidCornerCount,
    ParamOutOfRange,
)
from shadowlab.families import (
    Segment,
    cross_corner,
    centered_inner_shift,
    mendivil_taylor,
    mendivil_taylor_threshold,
    polygon_blind,
    polygon_blind_sweep,
    polytope_union,
    reflect_segments,
    rotated_square,
    segment_sweep,
    simplex_ifs,
    triangle_grid_ifs,
    venetian_blind,
)
from shadowlab.ifs import make_affine_map, operator_norm
from shadowlab.scalars import EXACT
from shadowlab.shadows import thick_shadow_check

# -- Mendivil-Taylor ---------------------------------------------------------


def test_mt_parameter_validation():
    for t, s in [(F(1, 2), F(7, 10)), (F(1, 4), F(1, 2)), (F(2, 5), F(3, 5)), (0, F(3, 5))]:
        with pytest.raises(ParamOutOfRange):
            mendivil_taylor(t, s)


def test_mt_predictions():
    assert mendivil_taylor(F(1, 4), F(7, 10)).predicted_thick is True
    assert mendivil_taylor(F(15, 100), F(7, 10)).predicted_thick is False
    assert mendivil_taylor_threshold(F(7, 10)) == pytest.approx(0.1837722, abs=5e-8)


def test_mt_prediction_matches_checker_on_subgrid():
    for ti in range(5, 50, 11):
        for si in range(55, 100, 11):
            if ti + si >= 100:
                continue
            fam = mendivil_taylor(F(ti, 100), F(si, 100))
            verdict = thick_shadow_check(fam.ifs, EXACT).verdict
            assert (verdict == "thick") == fam.predicted_thick


# -- rotated square ------------------------------------------------------------


def test_rotated_square_predictions():
    fam = rotated_square(F(35, 100))
    assert fam.predicted_thick and fam.predicted_disconnected
    assert rotated_square(F(30, 100)).predicted_thick is False
    high = rotated_square(F(45, 100))
    assert high.predicted_thick and not high.predicted_disconnected
    with pytest.raises(ParamOutOfRange):
        rotated_square(F(1, 2))


def test_rotated_square_exact_boundary():
    assert rotated_square(F(1, 3)).predicted_thick is True
    # 1/3 < 1/(2 + 1/sqrt2) so the boundary system is also disconnected
    assert rotated_square(F(1, 3)).predicted_disconnected is True


# -- cross and corner ---------------------------------------------------------


def test_cross_corner_examples():
    cc7 = cross_corner(7, 2)
    assert cc7.corner_count == 2
    assert cc7.paper_floor_count == 2 and not cc7.formula_mismatch
    cc9 = cross_corner(9, 2)
    assert cc9.corner_count == 3 and cc9.ceiling_count == 3
    assert cc9.paper_floor_count == 2 and cc9.formula_mismatch
    assert len(cc9.digits) == 25
    assert cc9.dimension == pytest.approx(math.log(25) / math.log(9), abs=1e-12)
    with pytest.raises(NoValidCornerCount):
        cross_corner(5, 2)
    with pytest.raises(ParamOutOfRange):
        cross_corner(8, 2)
    with pytest.raises(ParamOutOfRange):
        cross_corner(7, 1)


def test_cross_corner_dimension_decreases_toward_one():
    dims = [cross_corner(n, 2).dimension for n in (9, 11, 15, 21)]
    assert all(a > b for a, b in zip(dims, dims[1:]))
    assert all(d > 1 for d in dims)


def test_cross_corner_d3():
    with pytest.raises(NoValidCornerCount):
        cross_corner(7, 3)
    cc = cross_corner(9, 3)
    assert cc.corner_count == 3
    assert len(cc.digits) == 19 + 8 * 3


# -- simplex --------------------------------------------------------------------


def test_simplex_t0_matrix():
    sx = simplex_ifs([(0, 0), (1, 0), (0, 1)], F(3, 10), (F(1, 5), F(1, 5)), F(1, 5))
    assert sx.ifs.maps[0].matrix == ((F(1, 5), F(1, 2)), (F(0), F(1, 5)))
    assert sx.inner_vertices[1] == (F(1, 2), F(1, 5))


def test_simplex_validation_errors():
    with pytest.raises(DegenerateSimplex):
        simplex_ifs([(0, 0), (1, 0), (2, 0)], F(3, 10), (F(1, 5), F(1, 5)), F(1, 5))
    with pytest.raises(ParamOutOfRange):
        simplex_ifs([(0, 0), (1, 0), (0, 1)], F(3, 10), (F(1, 5), F(1, 5)), F(3, 2))
    with pytest.raises(ParamOutOfRange):
        # inner simplex outside
        simplex_ifs([(0, 0), (1, 0), (0, 1)], F(3, 10), (F(4, 5), F(4, 5)), F(1, 5))
    with pytest.raises(NotContractive):
        # inner simplex too large: products never contract
        simplex_ifs([(0, 0), (1, 0), (0, 1)], F(9, 10), (F(3, 100), F(3, 100)), F(1, 5))


def test_simplex_images_pairwise_disjoint():
    from shadowlab.convex import ConvexPointSet, hulls_intersect
    from itertools import combinations

    sx = simplex_ifs([(0, 0), (1, 0), (0, 1)], F(3, 10), (F(1, 5), F(1, 5)), F(1, 5))
    imgs = [
        ConvexPointSet(2, tuple(m(p) for p in sx.ifs.seed.points)) for m in sx.ifs.maps
    ]
    for a, b in combinations(imgs, 2):
        assert not hulls_intersect(a, b, EXACT).intersects


def test_simplex_thick_both_dims():
    sx = simplex_ifs([(0, 0), (1, 0), (0, 1)], F(3, 10), (F(1, 5), F(1, 5)), F(1, 5))
    assert thick_shadow_check(sx.ifs, EXACT).verdict == "thick"
    s3 = simplex_ifs(
        [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], F(3, 10), (F(1, 5),) * 3, F(1, 5)
    )
    assert thick_shadow_check(s3.ifs, EXACT).verdict == "thick"


# -- triangle grid -----------------------------------------------------------------


def test_triangle_grid_depth_bracketing():
    # 2^-8 <= 0.5/100 < 2^-7
    tg = triangle_grid_ifs([(0, 0), (4, 0), (0, 4)], F(1, 2))
    assert tg.depth == 8
    assert tg.map_count == len(tg.ifs.maps)
    # map count m = O(2^(2n) * lambda)
    assert tg.map_count <= 4**tg.depth * float(F(1, 2)) * 1.5
    with pytest.raises(DegenerateSimplex):
        triangle_grid_ifs([(0, 0), (1, 1), (2, 2)], F(1, 2))


def test_triangle_grid_covers_images_and_is_thick():
    tg = triangle_grid_ifs([(0, 0), (1, 0), (0, 1)], F(1, 2))
    # each target image vertex lies in some selected cell
    from shadowlab.ifs import iterate_bodies

    cells = iterate_bodies(tg.ifs, 1)
    for img in tg.images:
        for q in img:
            assert any(point_in_hull(q, cell, EXACT) for cell in cells)
    rep = thick_shadow_check(tg.ifs, EXACT)
    assert rep.verdict == "thick"


# -- polytope unions -----------------------------------------------------------------


def test_polytope_union_counts():
    tri = polytope_union([(0, 0), (1, 0), (0, 1)], F(1, 5))
    assert len(tri.members) == 1
    sq = polytope_union([(0, 0), (1, 0), (1, 1), (0, 1)], F(1, 5))
    assert len(sq.members) == 2
    pent = polytope_union(
        [(0, 0), (2, 0), (3, 2), (1, 4), (-1, 2)], F(1, 5)
    )
    assert len(pent.members) == 3
    for member in pent.members:
        assert thick_shadow_check(member.ifs, EXACT).verdict == "thick"


# -- venetian blinds ------------------------------------------------------------------


def test_venetian_blind_lengths():
    eps = [F(1, 8**j) for j in range(1, 14)]
    vb1 = venetian_blind(eps, 1)
    assert vb1.connector_sum == F(1, 4)
    assert vb1.radicand == F(17, 16)
    assert vb1.gamma_length == pytest.approx(1.2807764064044151, abs=1e-12)
    vb0 = venetian_blind(eps, 0)
    assert vb0.gamma_length == 1.0 and len(vb0.blinds) == 1
    # n -> infinity: S -> 1/3, length -> (1 + sqrt(10))/3
    vb13 = venetian_blind(eps, 13)
    assert vb13.gamma_length == pytest.approx((1 + math.sqrt(10)) / 3, abs=1e-7)


def test_venetian_blind_exact_radicand_chain():
    eps = [F(1, 8**j) for j in range(1, 13)]
    for n in range(1, 13):
        vb = venetian_blind(eps, n)
        s_n = sum(F(2**j, 8**j) for j in range(1, n + 1))
        assert vb.connector_sum == s_n
        assert vb.radicand == 1 + s_n * s_n
        assert len(vb.blinds) == 2**n


def test_venetian_blind_validation():
    with pytest.raises(NonSummableEpsilons):
        venetian_blind([F(1, 8), F(1, 8)], 2)    # 2^j eps_j not decreasing
    with pytest.raises(NonSummableEpsilons):
        venetian_blind([F(1, 8)], 2)             # prefix too short
    with pytest.raises(ParamOutOfRange):
        venetian_blind([F(1, 8)], 25)


def test_venetian_blind_coverage_small():
    eps = [F(1, 8**j) for j in range(1, 9)]
    vb = venetian_blind(eps, 8)
    base = Segment((F(0), F(0)), (F(1), F(0)))
    thetas = [i * math.pi / 2 / 199 for i in range(200)]
    assert max(segment_sweep(vb.blinds, base, thetas)) == 0.0
    both = vb.blinds + reflect_segments(vb.blinds)
    thetas_full = [i * math.pi / 299 for i in range(300)]
    assert max(segment_sweep(both, base, thetas_full)) == 0.0


# -- polygon blinds --------------------------------------------------------------------


def test_polygon_blind_square_all_obtuse():
    pb = polygon_blind([(0, 0), (1, 0), (1, 1), (0, 1)], blind_levels=4, cascade_depth=10)
    assert len(pb.groups) == 8
    assert all(g.kind == "obtuse" for g in pb.groups)


def test_polygon_blind_triangle_cascades():
    pb = polygon_blind([(0, 0), (1, 0), (F(1, 2), F(87, 100))], blind_levels=4, cascade_depth=10)
    assert sum(1 for g in pb.groups if g.kind == "cascade") == 6
    thetas = [i * math.pi / 359 for i in range(360)]
    gaps = polygon_blind_sweep(pb, thetas)
    assert max(gaps) <= pb.tail_bound + 1e-9


def test_polygon_blind_rejects_nonconvex():
    with pytest.raises(NotConvex):
        polygon_blind([(0, 0), (2, 0), (1, F(1, 2)), (2, 2), (0, 2)])


# -- cross-family construction invariants -------------------------------------------------


def test_generator_maps_validate_and_leave_seed_invariant():
    families = [
        mendivil_taylor(F(1, 4), F(7, 10)).ifs,
        rotated_square(F(35, 100)).ifs,
        cross_corner(7, 2).ifs,
    ]
    for ifs in families:
        for m in ifs.maps:
            make_affine_map(m.matrix, m.translation, EXACT)   # contractive + invertible
            for p in ifs.seed.points:
                assert point_in_hull(m(p), ifs.seed, EXACT)
    # the simplex family is only eventually contractive; its maps are still
    # invertible and seed-invariant
    sx = simplex_ifs([(0, 0), (1, 0), (0, 1)], F(3, 10), (F(1, 5), F(1, 5)), F(1, 5))
    assert max(operator_norm(m.matrix) for m in sx.ifs.maps) > 1
    for m in sx.ifs.maps:
        for p in sx.ifs.seed.points:
            assert point_in_hull(m(p), sx.ifs.seed, EXACT)
