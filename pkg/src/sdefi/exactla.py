"""Exact linear algebra over the complex rationals.

Matrices are lists of rows of :class:`CRational`.  Everything here is a
field computation — no tolerances, no floats — so ranks, nullspaces,
determinants and characteristic polynomials are certificates, not estimates.
Univariate polynomials (for characteristic/minimal-polynomial work) are
dense coefficient lists, ascending degree.
"""

from __future__ import annotations

from .algebra import CoeffLike, CRational, _as_crational

Matrix = list  # list[list[CRational]]
Vector = list  # list[CRational]


def as_matrix(rows) -> Matrix:
    out = [[_as_crational(x) for x in row] for row in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> Matrix:
    return [[CRational(1 if i == j else 0) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return [[CRational(0) for _ in range(m)] for _ in range(n)]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c: CoeffLike) -> Matrix:
    c = _as_crational(c)
    return [[x * c for x in row] for row in a]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    if any(len(r) != k for r in a):
        raise ValueError("incompatible shapes")
    out = zeros(n, m)
    for i in range(n):
        for j in range(m):
            s = CRational(0)
            for t in range(k):
                s = s + a[i][t] * b[t][j]
            out[i][j] = s
    return out


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return [sum((x * y for x, y in zip(row, v)), CRational(0)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def trace(a: Matrix) -> CRational:
    return sum((a[i][i] for i in range(len(a))), CRational(0))


def is_zero_matrix(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def is_diagonal(a: Matrix) -> bool:
    return all(a[i][j].is_zero() for i in range(len(a)) for j in range(len(a[i])) if i != j)


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def mat_to_complex(a: Matrix):
    import numpy as np

    return np.array([[complex(x) for x in row] for row in a], dtype=complex)


# -- elimination ---------------------------------------------------------------

def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (exact Gauss-Jordan); returns (R, pivot_columns)."""
    m = [row[:] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if not m[i][c].is_zero()), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = CRational(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][c].is_zero():
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix) -> list[Vector]:
    """Exact kernel basis; each vector has coefficient 1 at its free column."""
    if not a:
        return []
    cols = len(a[0])
    red, pivots = rref(a)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis: list[Vector] = []
    for fc in free:
        v = [CRational(0)] * cols
        v[fc] = CRational(1)
        for r_idx, pc in enumerate(pivots):
            v[pc] = -red[r_idx][fc]
        basis.append(v)
    return basis


def det(a: Matrix) -> CRational:
    """Exact determinant via elimination with pivot bookkeeping."""
    n = len(a)
    m = [row[:] for row in a]
    out = CRational(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if pivot_row is None:
            return CRational(0)
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            out = -out
        out = out * m[c][c]
        inv = CRational(1) / m[c][c]
        for i in range(c + 1, n):
            if not m[i][c].is_zero():
                factor = m[i][c] * inv
                m[i] = [x - factor * y for x, y in zip(m[i], m[c])]
    return out


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [row[:] + ident_row[:] for row, ident_row in zip(a, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def char_poly(a: Matrix) -> list[CRational]:
    """Monic characteristic polynomial det(xI - A), coefficients ascending.

    Faddeev-LeVerrier recurrence: M_1 = I, c_{n-1} = -tr(A M_1);
    M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
    """
    n = len(a)
    coeffs = [CRational(0)] * (n + 1)
    coeffs[n] = CRational(1)
    m = identity(n)
    for k in range(1, n + 1):
        if k > 1:
            m = mat_mul(a, m)
            for i in range(n):
                m[i][i] = m[i][i] + coeffs[n - k + 1]
        coeffs[n - k] = -(trace(mat_mul(a, m)) / k)
    return coeffs


# -- dense univariate polynomials (ascending coefficients) ----------------------

def poly_trim(p: list[CRational]) -> list[CRational]:
    while p and p[-1].is_zero():
        p = p[:-1]
    return p


def poly_eval(p: list[CRational], x: CRational) -> CRational:
    out = CRational(0)
    for c in reversed(p):
        out = out * x + c
    return out


def poly_deriv(p: list[CRational]) -> list[CRational]:
    return [c * k for k, c in enumerate(p)][1:]


def poly_divmod(num: list[CRational], den: list[CRational]) -> tuple[list[CRational], list[CRational]]:
    num, den = poly_trim(num[:]), poly_trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    q = [CRational(0)] * max(0, len(num) - len(den) + 1)
    r = num
    inv_lead = CRational(1) / den[-1]
    while len(r) >= len(den):
        shift = len(r) - len(den)
        c = r[-1] * inv_lead
        q[shift] = c
        r = poly_trim([rc - c * den[k - shift] if 0 <= k - shift < len(den) else rc
                       for k, rc in enumerate(r)])
    return q, r


def poly_monic(p: list[CRational]) -> list[CRational]:
    p = poly_trim(p)
    if not p:
        return p
    inv = CRational(1) / p[-1]
    return [c * inv for c in p]


def poly_gcd(a: list[CRational], b: list[CRational]) -> list[CRational]:
    """Monic gcd over the complex-rational field (Euclid)."""
    a, b = poly_trim(a[:]), poly_trim(b[:])
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)
