"""Phase-1 simplex over an arithmetic context.

Solves  min 1.w  s.t.  A x + w = b, x >= 0, w >= 0  (w artificial) for the
feasibility problems used by the convex kernel: hull-hull intersection and
point-in-hull membership.  Problem sizes are a handful of rows and at most a
few hundred columns, so a dense tableau with Bland's anti-cycling rule is both
simple and fast enough.  In exact mode every pivot is a field operation and the
optimum is exact; in float mode the context tolerance doubles as the pivot
tolerance.

The artificial columns are kept in the tableau, which makes the dual vector
available at termination: y_i = sum of phase-1 costs of basic rows applied to
the i-th artificial column.  When the optimum is positive (infeasible), the
duals certify a separating functional, which the convex kernel turns into a
witness hyperplane.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import Context

_MAX_PIVOTS = 20000


@dataclass
class Phase1Result:
    objective: object          # optimal sum of artificials, >= 0
    x: list                    # values of the original columns
    duals: tuple               # simplex multipliers, one per constraint row
    feasible: bool             # objective == 0 under the context's sign test


def solve_phase1(columns, rhs, ctx: Context) -> Phase1Result:
    """Phase-1 feasibility for  sum_j x_j * columns[j] = rhs,  x >= 0."""
    m = len(rhs)
    n = len(columns)
    zero = ctx.scalar(0)
    one = ctx.scalar(1)

    rows = []
    for i in range(m):
        row = [ctx.scalar(col[i]) for col in columns] + [ctx.scalar(rhs[i])]
        if ctx.sign(row[-1]) < 0:
            row = [-v for v in row]
        body, b = row[:-1], row[-1]
        art = [one if k == i else zero for k in range(m)]
        rows.append(body + art + [b])
    basis = [n + i for i in range(m)]
    width = n + m

    for _ in range(_MAX_PIVOTS):
        # reduced costs: rc_j = c_j - sum over artificial-basic rows of row[j]
        art_rows = [i for i in range(m) if basis[i] >= n]
        enter = -1
        for j in range(width):
            cj = one if j >= n else zero
            rc = cj
            for i in art_rows:
                rc = rc - rows[i][j]
            if ctx.sign(rc) < 0:
                enter = j
                break  # Bland: first improving column
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            coef = rows[i][enter]
            if ctx.sign(coef) > 0:
                ratio = rows[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            # phase-1 objective is bounded below by 0; unbounded pivot means
            # numerical trouble in float mode
            break
        piv = rows[leave][enter]
        rows[leave] = [v / piv for v in rows[leave]]
        for i in range(m):
            if i == leave:
                continue
            f = rows[i][enter]
            if f == 0:
                continue
            pivot_row = rows[leave]
            rows[i] = [a - f * b for a, b in zip(rows[i], pivot_row)]
        basis[leave] = enter
    else:
        raise RuntimeError("simplex pivot limit exceeded")

    objective = zero
    for i in range(m):
        if basis[i] >= n:
            objective = objective + rows[i][-1]

    x = [zero] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = rows[i][-1]

    duals = tuple(
        sum((rows[i][n + k] for i in range(m) if basis[i] >= n), zero) for k in range(m)
    )
    return Phase1Result(
        objective=objective,
        x=x,
        duals=duals,
        feasible=ctx.sign(objective) <= 0,
    )
