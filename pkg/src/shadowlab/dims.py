"""Dimension machinery: singular values, pressure roots, box counting.

The affinity dimension is never reported as a point value, only bracketed:
finite-level pressure roots s_k (monotone upper bounds) above, box-count
estimates below, with the closed-form bound from the per-map singular values
alongside.  Self-similar systems additionally get the exact similarity
dimension from the moment equation sum r_i^s = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, DegenerateInput, SingularMatrix, TooFewScales
from .ifs import IteratedFunctionSystem
from .linalg import det, mat_float, mat_mul, singular_values_float
from .scalars import FLOAT, Context, to_float

BISECT_TOL = 1e-13
ROOT_BUDGET = 300000


def singular_values(matrix, ctx: Context = FLOAT):
    """Descending singular values; closed form for d <= 2, Jacobi for d >= 3."""
    Tf = mat_float(tuple(tuple(ctx.scalar(x) for x in row) for row in matrix))
    if abs(det(Tf)) == 0.0:
        raise SingularMatrix("matrix is singular")
    return singular_values_float(Tf)


def singular_value_function(matrix, s: float, ctx: Context = FLOAT) -> float:
    """phi^s(T) = a_1 ... a_{r-1} * a_r^(s-r+1) with r = ceil(s); phi^0 = 1."""
    alphas = singular_values(matrix, ctx)
    d = len(alphas)
    if not 0 <= s <= d:
        raise DegenerateInput(f"s = {s} outside [0, {d}]")
    if s == 0:
        return 1.0
    r = math.ceil(s)
    value = 1.0
    for a in alphas[: r - 1]:
        value *= a
    return value * alphas[r - 1] ** (s - r + 1)


def similarity_dimension(ratios: Sequence) -> float:
    """Unique root of sum r_i^s = 1 for ratios in (0,1), by bisection."""
    rs = [to_float(r) for r in ratios]
    if not rs:
        raise DegenerateInput("no ratios")
    if any(not 0.0 < r < 1.0 for r in rs):
        raise DegenerateInput("ratios must lie in (0, 1)")

    def f(s):
        return sum(r**s for r in rs) - 1.0

    if abs(f(0.0)) < BISECT_TOL:
        return 0.0
    lo, hi = 0.0, 1.0
    while f(hi) > 0.0:
        hi *= 2.0
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def affinity_bound_closed(ifs: IteratedFunctionSystem) -> float:
    """Closed-form upper bound for the affinity dimension, valid on [1, 2].

    Uses the per-map first singular values summed against the worst second
    singular value: the pressure at level 1 is at most
    (sum_i a_{i,1}) * a_2^{s-1}, so the bound is the s making that equal 1.
    Reduces to 1 + log(N r)/log(1/r) for N equal similarities of ratio r.
    """
    if ifs.dim < 2:
        raise DegenerateInput("affinity bound needs ambient dimension >= 2")
    svs = [singular_values(m.matrix) for m in ifs.maps]
    sum_a1 = sum(s[0] for s in svs)
    a2 = max(s[1] for s in svs)
    if a2 >= 1.0:
        return float(ifs.dim)
    bound = 1.0 + math.log(sum_a1) / math.log(1.0 / a2)
    return min(float(ifs.dim), bound)


@dataclass(frozen=True)
class AffinityRoot:
    level: int
    value: float
    saturated: bool      # pressure still above 1 at s = d; value clamped to d


def _level_singular_values(ifs: IteratedFunctionSystem, level: int, budget: int) -> np.ndarray:
    n = len(ifs.maps)
    if n**level > budget:
        raise BudgetExceeded(f"{n}^{level} words exceed budget {budget}")
    mats = [mat_float(m.matrix) for m in ifs.maps]
    prods = [tuple(tuple(row) for row in np.eye(ifs.dim).tolist())]
    for _ in range(level):
        prods = [mat_mul(M, P) for M in mats for P in prods]
    return np.array([singular_values_float(P) for P in prods])


def _pressure(svals: np.ndarray, s: float, d: int) -> float:
    if s == 0:
        return float(len(svals))
    r = math.ceil(s)
    logs = np.log(svals)
    acc = logs[:, : r - 1].sum(axis=1) + (s - r + 1) * logs[:, r - 1]
    return float(np.exp(acc).sum())


def affinity_root(
    ifs: IteratedFunctionSystem, level: int, budget: int = ROOT_BUDGET
) -> AffinityRoot:
    """Root s_k of P_k(s) = sum over length-k words of phi^s(T_word) = 1.

    P_k is monotone decreasing in s, so s_k upper-bounds the affinity
    dimension; roots along k, 2k, 4k, ... are non-increasing by
    submultiplicativity.
    """
    svals = _level_singular_values(ifs, level, budget)
    d = ifs.dim
    if abs(_pressure(svals, 0.0, d) - 1.0) < BISECT_TOL:
        return AffinityRoot(level=level, value=0.0, saturated=False)
    if _pressure(svals, float(d), d) > 1.0:
        return AffinityRoot(level=level, value=float(d), saturated=True)
    lo, hi = 0.0, float(d)
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if _pressure(svals, mid, d) > 1.0:
            lo = mid
        else:
            hi = mid
    return AffinityRoot(level=level, value=0.5 * (lo + hi), saturated=False)


# -- box counting ------------------------------------------------------------------


@dataclass(frozen=True)
class BoxCount:
    scales: tuple
    counts: tuple
    slope: float
    residual: float
    exact: bool          # counts from digit occupancy, not a point sample


def _fit_loglog(log_inv_scales, log_counts):
    xs = np.asarray(log_inv_scales)
    ys = np.asarray(log_counts)
    xbar, ybar = xs.mean(), ys.mean()
    denom = ((xs - xbar) ** 2).sum()
    if denom == 0.0:
        raise DegenerateInput("degenerate scale list")
    slope = float(((xs - xbar) * (ys - ybar)).sum() / denom)
    fit = ybar + slope * (xs - xbar)
    return slope, float(np.abs(fit - ys).max())


def box_count_dimension(points: Sequence, scales: Sequence[float]) -> BoxCount:
    """Grid-occupancy estimate of box dimension from a point sample."""
    if len(scales) < 3:
        raise TooFewScales("need at least 3 scales")
    pts = np.asarray([[to_float(c) for c in p] for p in points], dtype=float)
    if pts.size == 0:
        raise DegenerateInput("no points")
    counts = []
    for s in scales:
        cells = set(map(tuple, np.floor(pts / float(s)).astype(np.int64)))
        counts.append(len(cells))
    slope, residual = _fit_loglog(
        [math.log(1.0 / float(s)) for s in scales], [math.log(c) for c in counts]
    )
    return BoxCount(tuple(float(s) for s in scales), tuple(counts), slope, residual, exact=False)


def digit_box_count(base_n: int, digit_count: int, levels: Sequence[int]) -> BoxCount:
    """Exact occupancy for a fractal-cube digit system: count = |D|^m at scale n^-m."""
    if len(levels) < 3:
        raise TooFewScales("need at least 3 levels")
    log_inv = [m * math.log(base_n) for m in levels]
    log_cnt = [m * math.log(digit_count) for m in levels]
    slope, residual = _fit_loglog(log_inv, log_cnt)
    return BoxCount(
        scales=tuple(float(base_n) ** -m for m in levels),
        counts=tuple(digit_count**m for m in levels),
        slope=slope,
        residual=residual,
        exact=True,
    )


# -- assembled report --------------------------------------------------------------


@dataclass(frozen=True)
class DimensionReport:
    similarity_dim: Optional[float]
    similarity_residual: Optional[float]
    affinity_bound_closed: Optional[float]
    affinity_roots: tuple
    box: Optional[BoxCount]
    bracket: Optional[tuple]      # (max(1, box slope), min root)


def similarity_ratio(matrix, ctx: Context = FLOAT):
    """Ratio r if the matrix is r * orthogonal (T^T T = r^2 I), else None."""
    T = tuple(tuple(ctx.scalar(x) for x in row) for row in matrix)
    d = len(T)
    G = mat_mul(tuple(zip(*T)), T)
    c = G[0][0]
    for i in range(d):
        for j in range(d):
            if i == j:
                if not ctx.is_zero(G[i][i] - c):
                    return None
            elif not ctx.is_zero(G[i][j]):
                return None
    return math.sqrt(to_float(c))


def _fractal_cube_digits(ifs: IteratedFunctionSystem):
    """Detect maps of the form x -> (x + digit)/n and return (n, digit count)."""
    first = ifs.maps[0].matrix
    ratio = to_float(first[0][0])
    if ratio <= 0:
        return None
    n = round(1.0 / ratio)
    if n < 2 or abs(1.0 / ratio - n) > 1e-12:
        return None
    digits = set()
    for m in ifs.maps:
        for i in range(ifs.dim):
            for j in range(ifs.dim):
                want = 1.0 / n if i == j else 0.0
                if abs(to_float(m.matrix[i][j]) - want) > 1e-12:
                    return None
        digit = tuple(round(to_float(t) * n) for t in m.translation)
        if any(abs(to_float(t) * n - k) > 1e-9 for t, k in zip(m.translation, digit)):
            return None
        digits.add(digit)
    return n, len(digits)


def dimension_report(
    ifs: IteratedFunctionSystem,
    root_levels: Sequence[int] = (1, 2),
    scales: Optional[Sequence[float]] = None,
    sample_budget: int = 20000,
) -> DimensionReport:
    from .ifs import attractor_sample

    sim_dim = sim_res = None
    ratios = [similarity_ratio(m.matrix) for m in ifs.maps]
    if all(r is not None for r in ratios):
        sim_dim = similarity_dimension(ratios)
        sim_res = abs(sum(r**sim_dim for r in ratios) - 1.0)

    bound = affinity_bound_closed(ifs) if ifs.dim >= 2 else None
    roots = tuple(affinity_root(ifs, k) for k in root_levels)

    cube = _fractal_cube_digits(ifs)
    if cube is not None:
        n, ndigits = cube
        box = digit_box_count(n, ndigits, levels=(1, 2, 3, 4, 5))
    else:
        pts = attractor_sample(ifs, sample_budget)
        box = box_count_dimension(pts, scales or [2.0**-m for m in range(3, 9)])

    usable = [r.value for r in roots if not r.saturated] or [r.value for r in roots]
    bracket = (max(1.0, box.slope), min(usable)) if roots else None
    return DimensionReport(
        similarity_dim=sim_dim,
        similarity_residual=sim_res,
        affinity_bound_closed=bound,
        affinity_roots=roots,
        box=box,
        bracket=bracket,
    )
