"""IFS core: map validation, composition, iteration, components."""

import math
import random
from fractions import Fraction as F

import pytest

from shadowlab.convex import body, point_in_hull
from shadowlab.errors import BudgetExceeded, DegenerateInput, NotContractive, SingularMatrix
from shadowlab.ifs import (
    AffineMap,
    attractor_sample,
    component_decomposition,
    compose,
    fixed_point,
    iterate_bodies,
    make_affine_map,
    make_ifs,
    operator_norm,
)
from shadowlab.families import mendivil_taylor, rotated_square
from shadowlab.scalars import EXACT, FLOAT

UNIT_SQUARE = body([(0, 0), (1, 0), (1, 1), (0, 1)])


def _norm_2x2_oracle(m):
    """Largest singular value via the explicit quadratic on T^T T."""
    (a, b), (c, d) = m
    g11, g12, g22 = a * a + c * c, a * b + c * d, b * b + d * d
    tr, det = g11 + g22, g11 * g22 - g12 * g12
    lam = (tr + math.sqrt(tr * tr - 4 * det)) / 2
    return math.sqrt(lam)


def test_make_affine_map_examples():
    m = make_affine_map([[0.5, 0], [0, 0.5]], (0, 0))
    assert m.dim == 2
    with pytest.raises(NotContractive) as err:
        make_affine_map([[1.0, 0], [0, 0.5]], (0, 0))
    assert err.value.norm == 1.0
    with pytest.raises(SingularMatrix):
        make_affine_map([[1, 1], [1, 1]], (0, 0))
    # simplex map T0 is valid, with operator norm from the quadratic formula
    t0 = [[0.2, 0.5], [0, 0.2]]
    make_affine_map(t0, (0, 0))
    assert abs(operator_norm(t0) - _norm_2x2_oracle(t0)) < 1e-12
    assert abs(operator_norm(t0) - 0.5701562) < 5e-8


def test_operator_norm_examples():
    assert abs(operator_norm([[0.3, 0], [0, 0.7]]) - 0.7) < 1e-15
    r = 0.37
    c, s = r * math.cos(math.pi / 4), r * math.sin(math.pi / 4)
    assert abs(operator_norm([[c, -s], [s, c]]) - r) < 1e-12
    # exact mode: certified rational upper bound
    ub = operator_norm([[F(1, 5), F(1, 2)], [0, F(1, 5)]], EXACT)
    f = operator_norm([[0.2, 0.5], [0, 0.2]])
    assert f <= float(ub) <= f + 1e-10


def test_compose_examples():
    half = AffineMap(((F(1, 2), 0), (0, F(1, 2))), (0, 0))
    shift = AffineMap(((F(1, 2), 0), (0, F(1, 2))), (F(1, 2), 0))
    ifs = make_ifs((half, shift), UNIT_SQUARE, EXACT)
    assert compose(ifs, [0]).matrix == half.matrix
    assert compose(ifs, [0]).translation == half.translation
    m = compose(ifs, [0, 0])
    assert m.matrix == ((F(1, 4), 0), (0, F(1, 4)))
    # phi_0 after phi_1: x/4 + (1/4, 0)
    m2 = compose(ifs, [0, 1])
    assert m2.matrix == ((F(1, 4), 0), (0, F(1, 4)))
    assert m2.translation == (F(1, 4), 0)
    # concatenation equals composition of partial words
    w1, w2 = [1, 0], [0, 1]
    lhs = compose(ifs, w1 + w2)
    g1, g2 = compose(ifs, w1), compose(ifs, w2)
    for p in [(0, 0), (1, 0), (F(1, 3), F(2, 7))]:
        assert lhs(p) == g1(g2(p))
    with pytest.raises(DegenerateInput):
        compose(ifs, [2])
    with pytest.raises(DegenerateInput):
        compose(ifs, [])


def test_fixed_point_examples():
    assert fixed_point(AffineMap(((F(1, 2), 0), (0, F(1, 2))), (0, 0)), EXACT) == (0, 0)
    assert fixed_point(
        AffineMap(((F(1, 2), 0), (0, F(1, 2))), (F(1, 2), F(1, 2))), EXACT
    ) == (1, 1)
    # corrected Mendivil-Taylor corner map fixes (1,1)
    mt = mendivil_taylor(F(1, 4), F(7, 10))
    assert fixed_point(mt.ifs.maps[3], EXACT) == (1, 1)
    fps = [fixed_point(m, EXACT) for m in mt.ifs.maps]
    assert set(fps) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_iterate_bodies_levels():
    mt = mendivil_taylor(F(1, 4), F(7, 10))
    assert iterate_bodies(mt.ifs, 0) == [mt.ifs.seed]
    level1 = iterate_bodies(mt.ifs, 1)
    assert len(level1) == 4
    # phi_1 image is the corner rectangle [0, t] x [0, s]
    assert set(level1[0].points) == {
        (0, 0), (F(1, 4), 0), (F(1, 4), F(7, 10)), (0, F(7, 10))
    }
    with pytest.raises(BudgetExceeded):
        iterate_bodies(mt.ifs, 3, budget=10)


def test_iterate_bodies_multiset_recursion():
    mt = mendivil_taylor(F(3, 10), F(3, 5))
    lvl2 = iterate_bodies(mt.ifs, 2)
    rebuilt = [
        tuple(m(p) for p in b.points) for m in mt.ifs.maps for b in iterate_bodies(mt.ifs, 1)
    ]
    assert sorted(tuple(b.points) for b in lvl2) == sorted(rebuilt)


def test_iterated_bodies_stay_in_seed_hull():
    mt = mendivil_taylor(F(1, 4), F(7, 10))
    for b in iterate_bodies(mt.ifs, 2):
        for p in b.points:
            assert point_in_hull(p, mt.ifs.seed, EXACT)


def test_attractor_sample_examples():
    mt = mendivil_taylor(F(1, 4), F(7, 10))
    assert attractor_sample(mt.ifs, 1) == [(0.0, 0.0)]
    # Cantor middle thirds embedded on the x-axis, depth 2
    third = ((F(1, 3), 0), (0, F(1, 3)))
    maps = (AffineMap(third, (0, 0)), AffineMap(third, (F(2, 3), 0)))
    cantor = make_ifs(maps, body([(0, 0), (1, 0)]), EXACT)
    pts = attractor_sample(cantor, 4)
    assert sorted(p[0] for p in pts) == pytest.approx([0, 2 / 9, 2 / 3, 8 / 9])
    chaos = attractor_sample(mt.ifs, 500, method="chaos")
    assert len(chaos) == 500
    assert all(-1e-12 <= x <= 1 + 1e-12 and -1e-12 <= y <= 1 + 1e-12 for x, y in chaos)
    # fixed seed: reproducible
    assert chaos == attractor_sample(mt.ifs, 500, method="chaos")


def test_component_decomposition_examples():
    sq1 = body([(0, 0), (1, 0), (1, 1), (0, 1)])
    sq2 = body([(2, 0), (3, 0), (3, 1), (2, 1)])
    two = component_decomposition([sq1, sq2], EXACT)
    assert two.count == 2
    touching = body([(1, 1), (2, 1), (2, 2), (1, 2)])
    one = component_decomposition([sq1, touching], EXACT)
    assert one.count == 1 and one.parts == ((0, 1),)
    # rotated square at r = 0.35: five pairwise disjoint level-1 pieces
    rs = rotated_square(F(35, 100))
    dec = component_decomposition(iterate_bodies(rs.ifs, 1), EXACT)
    assert dec.count == 5


def test_component_decomposition_order_independent():
    rs = rotated_square(F(35, 100))
    bodies = iterate_bodies(rs.ifs, 2)
    base = component_decomposition(bodies, EXACT)
    rng = random.Random(7)
    perm = list(range(len(bodies)))
    rng.shuffle(perm)
    shuffled = component_decomposition([bodies[i] for i in perm], EXACT)
    # map shuffled parts back to original indices
    back = sorted(tuple(sorted(perm[i] for i in part)) for part in shuffled.parts)
    assert back == sorted(base.parts)
    assert sorted(shuffled.diameters) == sorted(base.diameters)


def test_eventually_contractive_system_accepted():
    # the simplex family's corner maps exceed norm 1 individually
    from shadowlab.families import simplex_ifs

    sx = simplex_ifs([(0, 0), (1, 0), (0, 1)], F(3, 10), (F(1, 5), F(1, 5)), F(1, 5))
    norms = [operator_norm(m.matrix) for m in sx.ifs.maps]
    assert max(norms) > 1.0
    with pytest.raises(NotContractive):
        make_affine_map(sx.ifs.maps[1].matrix, sx.ifs.maps[1].translation)


def test_expanding_system_rejected():
    grow = AffineMap(((F(3, 2), 0), (0, F(3, 2))), (0, 0))
    with pytest.raises(NotContractive):
        make_ifs((grow,), UNIT_SQUARE, EXACT, check_seed_invariance=False)


def test_seed_invariance_validation():
    escape = AffineMap(((F(1, 2), 0), (0, F(1, 2))), (2, 2))
    with pytest.raises(DegenerateInput):
        make_ifs((escape,), UNIT_SQUARE, EXACT)
    make_ifs((escape,), UNIT_SQUARE, EXACT, check_seed_invariance=False)


def test_diameter_decay_bound():
    mt = mendivil_taylor(F(1, 4), F(7, 10))
    from shadowlab.convex import diameter

    norms = [operator_norm(m.matrix) for m in mt.ifs.maps]
    diam_c = diameter(mt.ifs.seed, FLOAT)
    rng = random.Random(3)
    for _ in range(10):
        word = [rng.randrange(4) for _ in range(rng.randint(1, 5))]
        g = compose(mt.ifs, word)
        img = body([g(p) for p in mt.ifs.seed.points])
        bound = diam_c
        for letter in word:
            bound *= norms[letter]
        assert diameter(img, FLOAT) <= bound + 1e-9
