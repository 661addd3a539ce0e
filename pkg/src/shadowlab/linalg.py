"""Small dense matrix routines over floats and exact fields.

Matrices are plain tuples of row tuples.  Dimensions here are tiny (d <= 4,
levels of composed maps), so everything is written directly: closed forms for
2x2 spectra, cyclic Jacobi for symmetric d >= 3, fraction-free-ish Gaussian
elimination for exact solves, and Sylvester's criterion for the exact
contractivity test |T| < 1  <=>  I - T^T T positive definite.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import SingularMatrix
from .scalars import Context, to_float

JACOBI_RESIDUAL = 1e-13


def mat_from(rows):
    return tuple(tuple(r) for r in rows)


def identity(d, one=1, zero=0):
    return tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d))


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return tuple(
        tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)) for i in range(n)
    )


def mat_vec(A, v):
    return tuple(sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A)))


def transpose(A):
    return tuple(zip(*A))


def mat_float(A):
    return tuple(tuple(to_float(x) for x in row) for row in A)


def gram(A):
    """T^T T."""
    return mat_mul(transpose(A), A)


def det(A):
    """Determinant by expansion/elimination; exact for exact entries."""
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if n == 3:
        a, b, c = A[0]
        d_, e, f = A[1]
        g, h, i = A[2]
        return a * (e * i - f * h) - b * (d_ * i - f * g) + c * (d_ * h - e * g)
    rows = [list(r) for r in A]
    sign = 1
    acc = None
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return 0 * rows[0][0]
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        p = rows[col][col]
        acc = p if acc is None else acc * p
        for r in range(col + 1, n):
            factor = rows[r][col] / p
            for c in range(col, n):
                rows[r][c] = rows[r][c] - factor * rows[col][c]
    return acc if sign > 0 else -acc


def solve(A, b, ctx: Context):
    """Solve A x = b by Gaussian elimination (partial pivoting in float mode)."""
    n = len(A)
    rows = [[ctx.scalar(x) for x in A[i]] + [ctx.scalar(b[i])] for i in range(n)]
    for col in range(n):
        if ctx.exact:
            piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        else:
            piv = max(range(col, n), key=lambda r: abs(rows[r][col]))
            if abs(rows[piv][col]) <= ctx.tol * 1e-6:
                piv = None
        if piv is None:
            raise SingularMatrix("singular linear system")
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        for r in range(n):
            if r == col or rows[r][col] == 0:
                continue
            factor = rows[r][col] / p
            for c in range(col, n + 1):
                rows[r][c] = rows[r][c] - factor * rows[col][c]
    return tuple(rows[i][n] / rows[i][i] for i in range(n))


def jacobi_eigenvalues(S, residual=JACOBI_RESIDUAL, max_sweeps=60):
    """Eigenvalues of a symmetric float matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below ``residual``
    relative to max(1, |S|_F).  Returns eigenvalues in descending order.
    """
    n = len(S)
    a = [list(map(float, row)) for row in S]
    scale = max(1.0, math.sqrt(sum(x * x for row in a for x in row)))
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[i][j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= residual * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p][q] == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
    return tuple(sorted((a[i][i] for i in range(n)), reverse=True))


def symmetric_eigenvalues_float(S):
    """Eigenvalues of a symmetric matrix, descending; 2x2 closed form, else Jacobi."""
    n = len(S)
    if n == 1:
        return (float(S[0][0]),)
    if n == 2:
        a, b = float(S[0][0]), float(S[0][1])
        c = float(S[1][1])
        half = 0.5 * (a + c)
        disc = math.sqrt(max(0.0, (0.5 * (a - c)) ** 2 + b * b))
        return (half + disc, half - disc)
    return jacobi_eigenvalues(S)


def singular_values_float(T):
    """Singular values of a float matrix, descending (sqrt of spec of T^T T)."""
    Tf = mat_float(T)
    eigs = symmetric_eigenvalues_float(gram(Tf))
    return tuple(math.sqrt(max(0.0, e)) for e in eigs)


def operator_norm_float(T) -> float:
    return singular_values_float(T)[0]


def leading_minors_positive(S, ctx: Context) -> bool:
    """Sylvester's criterion: all leading principal minors of S are > 0."""
    n = len(S)
    for k in range(1, n + 1):
        minor = det(tuple(tuple(S[i][j] for j in range(k)) for i in range(k)))
        if ctx.sign(minor) <= 0:
            return False
    return True


def norm_less_than(T, bound, ctx: Context) -> bool:
    """Exact test |T| < bound via positive definiteness of bound^2 I - T^T T."""
    G = gram(tuple(tuple(ctx.scalar(x) for x in row) for row in T))
    b2 = ctx.scalar(bound) * ctx.scalar(bound)
    S = tuple(
        tuple((b2 if i == j else 0) - G[i][j] for j in range(len(G))) for i in range(len(G))
    )
    return leading_minors_positive(S, ctx)


def operator_norm_upper_bound(T, ctx: Context, rel=Fraction(1, 10**13)):
    """Certified rational upper bound on |T| (exact mode).

    Bisects q over rationals using the Sylvester test |T| < q, starting from a
    float estimate.  The returned q satisfies |T| < q and is within ``rel``
    relative slack of the true norm.
    """
    est = operator_norm_float(mat_float(T))
    if est == 0.0:
        return Fraction(0)
    lo = Fraction(0)
    hi = Fraction(est).limit_denominator(10**15) * (1 + Fraction(1, 10**6)) + rel
    while not norm_less_than(T, hi, ctx):
        hi *= 2
    while hi - lo > rel * hi:
        mid = (lo + hi) / 2
        if norm_less_than(T, mid, ctx):
            hi = mid
        else:
            lo = mid
    return hi
