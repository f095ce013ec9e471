"""Dense exact linear algebra over ``QQ`` or a prime field.

Prime-field matrices are ``int64`` arrays with entries in ``[0, p)``;
``p < 2**31`` keeps every ``a - b*c`` update inside int64.  Rational
matrices are numpy ``object`` arrays of ``Fraction``.
"""

from __future__ import annotations

import numpy as np

from .core import Field


def rref(A: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows and
    ``pivots[i]`` is the pivot column of row ``i``.
    """
    A = np.array(A, dtype=field.dtype, copy=True)
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = field.inv(A[r, c])
        A[r] = field.normalize(A[r] * inv)
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows] = field.normalize(A[rows] - np.outer(col[rows], A[r]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(A: np.ndarray, field: Field) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, field)[1])


def nullspace(A: np.ndarray, field: Field) -> np.ndarray:
    """Basis of ``{v : A v = 0}`` as the rows of a matrix in reduced echelon form."""
    ncols = A.shape[1]
    if A.shape[0] == 0:
        basis = field.zeros((ncols, ncols))
        for i in range(ncols):
            basis[i, i] = field.one
        return basis
    R, pivots = rref(A, field)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = field.zeros((len(free), ncols))
    for i, f in enumerate(free):
        basis[i, f] = field.one
        for row, pc in enumerate(pivots):
            basis[i, pc] = field.neg(R[row, f])
    if basis.shape[0]:
        basis, _ = rref(basis, field)
    return basis


def row_space(A: np.ndarray, field: Field) -> np.ndarray:
    if A.shape[0] == 0:
        return A
    return rref(A, field)[0]


def same_row_space(A: np.ndarray, B: np.ndarray, field: Field) -> bool:
    RA, RB = row_space(A, field), row_space(B, field)
    return RA.shape == RB.shape and bool(np.all(RA == RB))


def contains_row_space(A: np.ndarray, B: np.ndarray, field: Field) -> bool:
    """True when every row of ``B`` lies in the row space of ``A``."""
    if B.shape[0] == 0:
        return True
    if A.shape[0] == 0:
        return not np.any(B != 0)
    return rank(np.vstack([A, B]), field) == rank(A, field)


def matmul(A: np.ndarray, B: np.ndarray, field: Field) -> np.ndarray:
    """Exact product; over F_p the left factor is split in 16-bit halves."""
    if field.characteristic == 0:
        return np.dot(A, B) if A.size and B.size else field.zeros((A.shape[0], B.shape[-1]))
    p = field.p
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    lo = A & 0xFFFF
    hi = A >> 16
    out = (np.dot(hi, B) % p) * 65536 + np.dot(lo, B)
    return out % p


def solve_in_row_space(R: np.ndarray, pivots: list[int], v: np.ndarray, field: Field):
    """Coefficients ``c`` with ``c @ R == v`` for an RREF ``R``, or ``None``."""
    coeffs = v[pivots] if pivots else v[:0]
    if R.shape[0]:
        recon = matmul(coeffs.reshape(1, -1), R, field)[0]
    else:
        recon = field.zeros(v.shape)
    return coeffs if np.all(recon == v) else None
