"""Small dense linear algebra over either scalar backend.

Exact matrices are reduced with fraction-free-of-rounding Gaussian
elimination (first nonzero pivot, deterministic); float matrices go through
numpy's SVD with the configured relative tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .scalar import get_eps, is_exact

Vector = tuple
Matrix = tuple  # tuple of row tuples


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def cross(a: Sequence, b: Sequence) -> Vector:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(s, a: Sequence) -> Vector:
    return tuple(s * x for x in a)


def det3(a: Sequence, b: Sequence, c: Sequence):
    return dot(a, cross(b, c))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(m: Matrix, v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def det(m: Matrix):
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if len(m) == 3:
        return det3(m[0], m[1], m[2])
    raise ValueError("only 2x2 and 3x3 determinants are needed")


def adj3(m: Matrix) -> Matrix:
    """Adjugate of a 3x3 matrix (transpose of the cofactor matrix)."""
    c0 = cross(m[1], m[2])
    c1 = cross(m[2], m[0])
    c2 = cross(m[0], m[1])
    # rows of the cofactor matrix are c0, c1, c2; the adjugate is its transpose
    return transpose((c0, c1, c2))


def _is_exact_matrix(m) -> bool:
    return all(is_exact(*row) for row in m)


def _rref(m):
    rows = [list(r) for r in m]
    n_rows, n_cols = len(rows), len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return rows, pivots


def _singular_values(m) -> np.ndarray:
    return np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)


def rank(m: Matrix) -> int:
    if _is_exact_matrix(m):
        m = [[Fraction(x) for x in row] for row in m]
        return len(_rref(m)[1])
    s = _singular_values(m)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > get_eps() * s[0]))


def nullspace(m: Matrix) -> list[Vector]:
    """Basis of the right null space.

    Exact: one vector per free column, with that free entry equal to 1.
    Float: right singular vectors of the (numerically) vanishing singular
    values, each scaled to unit norm.
    """
    n_cols = len(m[0])
    if _is_exact_matrix(m):
        rows, pivots = _rref([[Fraction(x) for x in row] for row in m])
        free = [c for c in range(n_cols) if c not in pivots]
        basis = []
        for f in free:
            vec = [Fraction(0)] * n_cols
            vec[f] = Fraction(1)
            for row_index, p in enumerate(pivots):
                vec[p] = -rows[row_index][f]
            basis.append(tuple(vec))
        return basis
    a = np.asarray(m, dtype=float)
    padded = np.vstack([a, np.zeros((max(0, n_cols - a.shape[0]), n_cols))])
    _, s, vt = np.linalg.svd(padded)
    top = s[0] if s.size and s[0] > 0 else 1.0
    return [tuple(float(x) for x in vt[i]) for i in range(n_cols) if s[i] <= get_eps() * top]


def smallest_singular_vector(m: Matrix) -> tuple[Vector, np.ndarray]:
    """Float helper: (unit null-vector estimate, singular values)."""
    a = np.asarray(m, dtype=float)
    n_cols = a.shape[1]
    padded = np.vstack([a, np.zeros((max(0, n_cols - a.shape[0]), n_cols))])
    _, s, vt = np.linalg.svd(padded)
    return tuple(float(x) for x in vt[-1]), s


def solve(m: Matrix, rhs: Sequence) -> Vector:
    """Solve a square nonsingular system."""
    if _is_exact_matrix(m) and is_exact(*rhs):
        aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(m, rhs)]
        rows, pivots = _rref(aug)
        if len(pivots) != len(m) or pivots[-1] == len(m):
            raise np.linalg.LinAlgError("singular system")
        return tuple(row[-1] for row in rows)
    return tuple(float(x) for x in np.linalg.solve(np.asarray(m, float), np.asarray(rhs, float)))


def frobenius(m: Matrix) -> float:
    try:
        return math.sqrt(sum(float(x) ** 2 for row in m for x in row))
    except OverflowError:
        return math.inf


def poly_eval(coeffs: Sequence, t):
    """Evaluate a polynomial given lowest-degree-first coefficients."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def poly_trim(coeffs: Sequence) -> list:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_derivative(coeffs: Sequence) -> list:
    return [i * c for i, c in enumerate(coeffs)][1:]


def poly_divmod(num: Sequence, den: Sequence) -> tuple[list, list]:
    num, den = poly_trim(num), poly_trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quotient = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    rem = list(num)
    while len(rem) >= len(den) and rem:
        shift = len(rem) - len(den)
        f = rem[-1] / den[-1]
        quotient[shift] = f
        for i, d in enumerate(den):
            rem[shift + i] -= f * d
        rem = poly_trim(rem)
    return quotient, rem


def poly_gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd of two rational polynomials (lowest degree first)."""
    a, b = poly_trim([Fraction(x) for x in a]), poly_trim([Fraction(x) for x in b])
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def interpolate(xs: Sequence, ys: Sequence) -> list:
    """Coefficients (lowest first) of the interpolating polynomial, exact."""
    n = len(xs)
    vander = [[Fraction(x) ** k for k in range(n)] for x in xs]
    return list(solve(vander, ys))
