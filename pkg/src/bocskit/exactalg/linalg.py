"""Dense exact linear algebra over a finite field.

Matrices are int64 numpy arrays whose entries are field elements in the
integer encoding of :mod:`bocskit.exactalg.fields`.  Every routine takes the
field explicitly.  Prime fields get a fast path (plain modular arithmetic,
float64 BLAS for products), which is where nearly all the work happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import GF, gf

MATRIX_CAP = 256


class LinAlgError(ValueError):
    pass


class CapError(LinAlgError):
    """A configured size cap was exceeded."""


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


# -- products --

_BLAS_LIMIT = 1 << 52


def matmul(A: np.ndarray, B: np.ndarray, F: GF) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[0]:
        raise LinAlgError(f"shape mismatch {A.shape} @ {B.shape}")
    if F.n == 1:
        p = F.p
        inner = A.shape[-1]
        if inner == 0:
            return np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
        if inner * (p - 1) ** 2 < _BLAS_LIMIT:
            out = A.astype(np.float64) @ B.astype(np.float64)
            return np.mod(out, p).astype(np.int64)
        return (A @ B) % p
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for k in range(A.shape[-1]):
        out = F.add(out, F.mul(A[..., k, None], B[None, k, ...]) if B.ndim == 2 else F.mul(A[..., k], B[k]))
    return np.asarray(out, dtype=np.int64)


def mat_add(A, B, F: GF) -> np.ndarray:
    return np.asarray(F.add(np.asarray(A), np.asarray(B)), dtype=np.int64)


def mat_sub(A, B, F: GF) -> np.ndarray:
    return np.asarray(F.sub(np.asarray(A), np.asarray(B)), dtype=np.int64)


def mat_scale(c: int, A, F: GF) -> np.ndarray:
    return np.asarray(F.mul(c, np.asarray(A)), dtype=np.int64)


def lin_comb(coeffs, mats, F: GF, shape=None) -> np.ndarray:
    """sum_i coeffs[i] * mats[i]; mats is a sequence or a stacked array."""
    mats = np.asarray(mats, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64)
    if mats.shape[0] == 0:
        return np.zeros(shape, dtype=np.int64)
    if F.n == 1:
        flat = mats.reshape(mats.shape[0], -1)
        return matmul(coeffs[None, :], flat, F).reshape(mats.shape[1:])
    out = np.zeros(mats.shape[1:], dtype=np.int64)
    for c, M in zip(coeffs, mats):
        if c:
            out = mat_add(out, mat_scale(int(c), M, F), F)
    return out


# -- elimination --

_PANEL = 48


def _rref_blocked(R: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan over F_p by column panels; trailing updates go through BLAS."""
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c0 in range(0, n, _PANEL):
        if r == m:
            break
        c1 = min(n, c0 + _PANEL)
        sub = R[r:, c0:c1]
        if not np.any(sub):
            continue
        # find pivot rows/cols of the panel by plain elimination on a copy
        S, pc = _panel_pivots(sub.copy(), p)
        if not pc:
            continue
        rows = [r + i for i in S]
        cols = [c0 + j for j in pc]
        k = len(rows)
        Q = R[np.ix_(rows, cols)]
        Qi = _small_inverse(Q, p)
        top = matmul(Qi, R[rows], gf(p))
        others = np.ones(m, dtype=bool)
        others[rows] = False
        idx = np.nonzero(others)[0]
        coef = R[np.ix_(idx, cols)]
        hit = np.nonzero(np.any(coef, axis=1))[0]
        if hit.size:
            upd = matmul(coef[hit], top, gf(p))
            R[idx[hit]] = (R[idx[hit]] - upd) % p
        # move pivot rows up to positions r..r+k-1, keep others in order
        rowset = set(rows)
        rest = [i for i in range(r, m) if i not in rowset]
        R[r:] = np.concatenate([top, R[rest]]) if rest else top
        pivots.extend(cols)
        r += k
    return R, pivots


def _panel_pivots(sub: np.ndarray, p: int) -> tuple[list[int], list[int]]:
    m, b = sub.shape
    order = list(range(m))
    S, pc = [], []
    r = 0
    for c in range(b):
        if r == m:
            break
        nz = np.nonzero(sub[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            sub[[r, i]] = sub[[i, r]]
            order[r], order[i] = order[i], order[r]
        inv = pow(int(sub[r, c]), p - 2, p)
        sub[r] = sub[r] * inv % p
        col = sub[r + 1:, c]
        rows = np.nonzero(col)[0]
        if rows.size:
            sub[r + 1 + rows] = (sub[r + 1 + rows] - np.outer(col[rows], sub[r])) % p
        S.append(order[r])
        pc.append(c)
        r += 1
    return S, pc


def _small_inverse(Q: np.ndarray, p: int) -> np.ndarray:
    k = Q.shape[0]
    R, piv = _rref_simple(np.concatenate([Q, eye(k)], axis=1), gf(p))
    return R[:, k:]


def rref(A, F: GF) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise LinAlgError("rref needs a 2-d array")
    if F.n == 1 and R.shape[1] > 2 * _PANEL and R.shape[0] > _PANEL and R.shape[1] * (F.p - 1) ** 2 < _BLAS_LIMIT:
        return _rref_blocked(R, F.p)
    return _rref_simple(R, F)


def _rref_simple(R: np.ndarray, F: GF) -> tuple[np.ndarray, list[int]]:
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    prime = F.n == 1
    p = F.p
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        piv = int(R[r, c])
        if piv != 1:
            if prime:
                R[r] = R[r] * pow(piv, p - 2, p) % p
            else:
                R[r] = F.mul(F.inv(piv), R[r])
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            if prime:
                R[rows] = (R[rows] - np.outer(col[rows], R[r])) % p
            else:
                R[rows] = F.sub(R[rows], F.mul(col[rows, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, F: GF) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, F)[1])


def row_basis(A, F: GF) -> np.ndarray:
    """Echelon basis (rows) of the row space."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=np.int64)
    R, piv = rref(A, F)
    return R[: len(piv)]


def nullspace(A, F: GF) -> np.ndarray:
    """Rows forming a basis of {x : A x = 0}."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return eye(n)
    R, piv = rref(A, F)
    free = [j for j in range(n) if j not in set(piv)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for k, j in enumerate(free):
        K[k, j] = 1
        for r, c in enumerate(piv):
            K[k, c] = F.neg(int(R[r, j]))
    return K


def left_nullspace(A, F: GF) -> np.ndarray:
    return nullspace(np.asarray(A).T, F)


@dataclass(frozen=True)
class Solution:
    """Result of solving A x = b: a particular solution and the kernel of A."""
    consistent: bool
    particular: np.ndarray | None
    kernel: np.ndarray = dc_field(repr=False)


def solve(A, b, F: GF) -> Solution:
    """Solve A x = b (b a vector or a matrix of right-hand-side columns)."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    B = b[:, None] if vec else b
    if A.shape[0] != B.shape[0]:
        raise LinAlgError(f"shape mismatch {A.shape} vs {b.shape}")
    m, n = A.shape
    K = nullspace(A, F)
    aug = np.concatenate([A, B], axis=1)
    R, piv = rref(aug, F)
    if any(c >= n for c in piv):
        return Solution(False, None, K)
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for r, c in enumerate(piv):
        X[c] = R[r, n:]
    return Solution(True, X[:, 0] if vec else X, K)


def inverse(A, F: GF) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise LinAlgError("inverse of non-square matrix")
    R, piv = rref(np.concatenate([A, eye(n)], axis=1), F)
    if n and (len(piv) < n or piv[n - 1] != n - 1):
        raise LinAlgError("matrix is singular")
    return R[:, n:]


def is_invertible(A, F: GF) -> bool:
    A = np.asarray(A)
    return A.shape[0] == A.shape[1] and rank(A, F) == A.shape[0]


def mat_pow(A, e: int, F: GF) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    out = eye(A.shape[0])
    while e:
        if e & 1:
            out = matmul(out, A, F)
        A = matmul(A, A, F)
        e >>= 1
    return out


def is_nilpotent(A, F: GF) -> bool:
    n = np.asarray(A).shape[0]
    return n == 0 or not np.any(mat_pow(A, n, F))


def image_basis(A, F: GF) -> np.ndarray:
    """Columns spanning the image of A, as the rows of the returned array."""
    return row_basis(np.asarray(A).T, F)


def kernel_columns(A, F: GF) -> np.ndarray:
    """Basis of ker A as the columns of the returned matrix."""
    return nullspace(A, F).T


def complement_basis(S, n: int, F: GF) -> np.ndarray:
    """Unit vectors completing the row space of S to F^n."""
    S = np.asarray(S, dtype=np.int64).reshape(-1, n)
    piv = rref(S, F)[1] if S.shape[0] else []
    extra = [j for j in range(n) if j not in set(piv)]
    E = np.zeros((len(extra), n), dtype=np.int64)
    for k, j in enumerate(extra):
        E[k, j] = 1
    return E


def in_span(v, S, F: GF) -> bool:
    S = np.asarray(S, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64).reshape(1, -1)
    if S.size == 0:
        return not np.any(v)
    return rank(np.concatenate([S, v]), F) == rank(S, F)


def min_poly(A, F: GF) -> list[int]:
    """Monic minimal polynomial of a square matrix, low degree first."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    powers = [eye(n).reshape(-1)]
    P = eye(n)
    for d in range(1, n + 1):
        P = matmul(P, A, F)
        stack = np.array(powers).T
        sol = solve(stack, P.reshape(-1), F)
        if sol.consistent:
            return [int(F.neg(int(c))) for c in sol.particular] + [1]
        powers.append(P.reshape(-1))
    raise LinAlgError("minimal polynomial search failed")  # unreachable by Cayley-Hamilton


def poly_eval_matrix(coeffs, A, F: GF) -> np.ndarray:
    """Evaluate sum coeffs[i] A^i by Horner's rule."""
    A = np.asarray(A, dtype=np.int64)
    out = zeros(*A.shape)
    for c in reversed(list(coeffs)):
        out = matmul(out, A, F)
        if c:
            out = mat_add(out, mat_scale(int(c), eye(A.shape[0]), F), F)
    return out


def block_diag(*blocks) -> np.ndarray:
    blocks = [np.asarray(b, dtype=np.int64) for b in blocks]
    blocks = [b if b.ndim == 2 else b.reshape(b.shape[0], -1) for b in blocks]
    r = sum(b.shape[0] for b in blocks)
    c = sum(b.shape[1] for b in blocks)
    out = zeros(r, c)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


# -- immutable matrix value with a field tag --

@dataclass(frozen=True, eq=False)
class Matrix:
    """Immutable matrix over a tagged finite field."""
    field: GF
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.int64, ndmin=2)
        if e.ndim != 2:
            raise LinAlgError("Matrix entries must be 2-d")
        if e.size and (e.min() < 0 or e.max() >= self.field.q):
            raise LinAlgError(f"entries outside {self.field}")
        if max(e.shape) > MATRIX_CAP:
            raise CapError(f"matrix of shape {e.shape} exceeds cap {MATRIX_CAP}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise LinAlgError("field mismatch")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, matmul(self.entries, other.entries, self.field))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, mat_add(self.entries, other.entries, self.field))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, mat_sub(self.entries, other.entries, self.field))

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.entries.shape == other.entries.shape
                and bool(np.all(self.entries == other.entries)))

    def __hash__(self):
        return hash((self.field, self.entries.shape, self.entries.tobytes()))

    def rank(self) -> int:
        return rank(self.entries, self.field)

    def rref(self) -> tuple["Matrix", list[int]]:
        R, piv = rref(self.entries, self.field)
        return Matrix(self.field, R), piv

    def kernel(self) -> "Matrix":
        return Matrix(self.field, nullspace(self.entries, self.field).reshape(-1, self.cols))

    def inverse(self) -> "Matrix":
        return Matrix(self.field, inverse(self.entries, self.field))

    @classmethod
    def identity(cls, n: int, F: GF) -> "Matrix":
        return cls(F, eye(n))

    @classmethod
    def zero(cls, r: int, c: int, F: GF) -> "Matrix":
        return cls(F, zeros(r, c))


def solve_linear(A: Matrix, B: Matrix) -> Solution:
    """Solve A X = B for Matrix values; kernel rows span ker A."""
    A._check(B)
    if A.rows != B.rows:
        raise LinAlgError(f"shape mismatch {A.entries.shape} vs {B.entries.shape}")
    return solve(A.entries, B.entries, A.field)


__all__ = [
    "MATRIX_CAP", "LinAlgError", "CapError", "Matrix", "Solution", "gf",
    "matmul", "mat_add", "mat_sub", "mat_scale", "lin_comb", "rref", "rank",
    "row_basis", "nullspace", "left_nullspace", "solve", "solve_linear",
    "inverse", "is_invertible", "mat_pow", "is_nilpotent", "image_basis",
    "kernel_columns", "complement_basis", "in_span", "min_poly",
    "poly_eval_matrix", "block_diag", "eye", "zeros",
]
