"""Finite-dimensional algebras given by structure constants.

``mul[i, j, l]`` is the coefficient of b_l in b_i * b_j.  The radical is
computed with the p-power trace method (iterated kernels of the maps
a -> Tr(a~^(p^i)) / p^i mod p in the regular representation), which stays
correct in characteristic p where the plain trace form does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .fields import GF, gf
from .linalg import (CapError, LinAlgError, eye, lin_comb, matmul, nullspace,
                     rank, row_basis, rref)

ALGEBRA_CAP = 64


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FdAlgebra:
    """Associative unital algebra over ``field`` with basis b_0..b_{dim-1}."""
    field: GF
    mul: np.ndarray
    unit: np.ndarray
    labels: tuple[str, ...] = ()
    idempotents: tuple[tuple[int, ...], ...] = ()
    division_dims: tuple[int, ...] = ()
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        mul = np.asarray(self.mul, dtype=np.int64)
        d = mul.shape[0]
        if mul.shape != (d, d, d):
            raise AlgebraError(f"structure tensor has shape {mul.shape}")
        if d > ALGEBRA_CAP * self.field.n:
            raise CapError(f"algebra dimension {d} exceeds cap {ALGEBRA_CAP}")
        mul.setflags(write=False)
        unit = np.asarray(self.unit, dtype=np.int64).reshape(d)
        unit.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "unit", unit)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"b{i}" for i in range(d)))

    @property
    def dim(self) -> int:
        return self.mul.shape[0]

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    # -- arithmetic on coordinate vectors --
    def left_matrix(self, a) -> np.ndarray:
        """Matrix of x -> a*x (columns are images of basis vectors)."""
        a = np.asarray(a, dtype=np.int64)
        return lin_comb(a, self.mul, self.field, (self.dim, self.dim)).T.copy()

    def right_matrix(self, a) -> np.ndarray:
        """Matrix of x -> x*a."""
        a = np.asarray(a, dtype=np.int64)
        T = np.transpose(self.mul, (1, 0, 2))
        return lin_comb(a, T, self.field, (self.dim, self.dim)).T.copy()

    def product(self, a, b) -> np.ndarray:
        return matmul(self.left_matrix(a), np.asarray(b, dtype=np.int64)[:, None], self.field)[:, 0]

    def power(self, a, e: int) -> np.ndarray:
        out = self.unit.copy()
        a = np.asarray(a, dtype=np.int64)
        while e:
            if e & 1:
                out = self.product(out, a)
            a = self.product(a, a)
            e >>= 1
        return out

    def regular_matrices(self) -> np.ndarray:
        """Stack of left-regular matrices of the basis elements."""
        if "reg" not in self._cache:
            self._cache["reg"] = np.stack([self.left_matrix(self.basis_vector(i)) for i in range(self.dim)])
        return self._cache["reg"]

    # -- axioms --
    def check_associative(self) -> bool:
        F, d = self.field, self.dim
        L = self.regular_matrices()
        for i in range(d):
            for j in range(d):
                bij = self.mul[i, j]
                lhs = lin_comb(bij, L, F, (d, d))
                if not np.array_equal(lhs, matmul(L[i], L[j], F)):
                    return False
        return True

    def check_unit(self) -> bool:
        return (np.array_equal(self.left_matrix(self.unit), eye(self.dim))
                and np.array_equal(self.right_matrix(self.unit), eye(self.dim)))

    def check_idempotents(self) -> bool:
        if not self.idempotents:
            return True
        F = self.field
        es = [np.asarray(e, dtype=np.int64) for e in self.idempotents]
        total = np.zeros(self.dim, dtype=np.int64)
        for i, e in enumerate(es):
            for j, f in enumerate(es):
                prod = self.product(e, f)
                want = e if i == j else np.zeros_like(e)
                if not np.array_equal(prod, want):
                    return False
            total = np.asarray(F.add(total, e), dtype=np.int64)
        return np.array_equal(total, self.unit)

    def validate(self) -> None:
        if not self.check_associative():
            raise AlgebraError("structure constants are not associative")
        if not self.check_unit():
            raise AlgebraError("unit axiom fails")
        if not self.check_idempotents():
            raise AlgebraError("idempotents are not orthogonal or do not sum to 1")

    # -- serialisation --
    def to_json(self) -> dict:
        F = self.field
        enc = lambda a: [[int(x) for x in F.to_digits(int(c))] for c in a]
        return {
            "p": F.p, "n": F.n, "modulus": list(F.modulus) if F.n > 1 else None,
            "dim": self.dim, "basis": list(self.labels),
            "mul": [[enc(self.mul[i, j]) for j in range(self.dim)] for i in range(self.dim)],
            "unit": enc(self.unit),
            "idempotents": [enc(e) for e in self.idempotents],
            "division_dims": list(self.division_dims),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FdAlgebra":
        p, n = int(data["p"]), int(data.get("n", 1))
        F = GF(p, n, data["modulus"]) if n > 1 and data.get("modulus") else gf(p, n)
        dec = lambda v: [F.from_digits(c) if isinstance(c, list) else int(c) for c in v]
        d = int(data["dim"])
        mul = np.array([[dec(data["mul"][i][j]) for j in range(d)] for i in range(d)], dtype=np.int64)
        alg = cls(F, mul, np.array(dec(data["unit"]), dtype=np.int64),
                  tuple(data.get("basis") or ()),
                  tuple(tuple(dec(e)) for e in data.get("idempotents", [])),
                  tuple(data.get("division_dims", [])))
        alg.validate()
        return alg


# -- constructions --

def algebra_from_matrices(mats: Sequence[np.ndarray], F: GF, labels=None) -> tuple[FdAlgebra, np.ndarray]:
    """Algebra spanned by square matrices closed under products.

    Returns the algebra (structure constants w.r.t. an echelon basis of the
    span) and that basis as a stack of matrices.  The identity must lie in
    the span.
    """
    mats = [np.asarray(m, dtype=np.int64) for m in mats]
    if not mats:
        raise AlgebraError("empty matrix list")
    n = mats[0].shape[0]
    B = row_basis(np.stack([m.reshape(-1) for m in mats]), F)
    _, piv = rref(B, F)
    d = B.shape[0]
    basis = B.reshape(d, n, n)
    flat = np.stack([matmul(basis[i], basis[j], F).reshape(-1) for i in range(d) for j in range(d)])
    coords = flat[:, piv]
    if not np.array_equal(lin_comb_rows(coords, B, F), flat):
        raise AlgebraError("matrix span is not closed under multiplication")
    mul = coords.reshape(d, d, d)
    unit = eye(n).reshape(-1)[piv]
    if not np.array_equal(lin_comb(unit, B, F, (B.shape[1],)), eye(n).reshape(-1)):
        raise AlgebraError("identity is not in the span")
    return FdAlgebra(F, mul, unit, tuple(labels) if labels else ()), basis


def lin_comb_rows(C: np.ndarray, B: np.ndarray, F: GF) -> np.ndarray:
    return matmul(C, B, F)


def restrict_scalars(A: FdAlgebra) -> FdAlgebra:
    """The same algebra viewed over the prime field (basis beta^k * b_i)."""
    F = A.field
    if F.n == 1:
        return A
    m, d = F.n, A.dim
    P = F.prime_field
    powers = [F.from_digits([0] * k + [1]) for k in range(m)]
    mul = np.zeros((d * m, d * m, d * m), dtype=np.int64)
    for i in range(d):
        for k in range(m):
            for j in range(d):
                for l in range(m):
                    coeff = F.mul(F.mul(powers[k], powers[l]), A.mul[i, j])
                    mul[i * m + k, j * m + l] = F.to_digits(coeff).reshape(-1)
    unit = F.to_digits(A.unit).reshape(-1)
    idem = tuple(tuple(int(x) for x in F.to_digits(np.asarray(e)).reshape(-1)) for e in A.idempotents)
    return FdAlgebra(P, mul, unit, (), idem, A.division_dims)


def _extend_to_field(vecs: np.ndarray, F: GF, d: int) -> np.ndarray:
    """Prime-field coordinates (restricted basis) back to F-coordinates."""
    if vecs.shape[0] == 0:
        return np.zeros((0, d), dtype=np.int64)
    out = np.array([[F.from_digits(v[i * F.n:(i + 1) * F.n]) for i in range(d)] for v in vecs], dtype=np.int64)
    return row_basis(out, F)


# -- radical --

def _trace_power_digit(M: np.ndarray, p: int, i: int) -> int:
    """(Tr(M~^(p^i)) mod p^(i+1)) / p^i for the lift M~ with entries in [0, p)."""
    mod = p ** (i + 1)
    X = np.asarray(M, dtype=object) if mod * mod * M.shape[0] >= 1 << 62 else np.asarray(M, dtype=np.int64)
    R = X % mod
    for _ in range(i):
        R2 = R
        for _ in range(p - 1):
            R2 = (R2 @ R) % mod
        R = R2
    t = int(np.trace(R)) % mod
    if t % p**i:
        raise LinAlgError("p-power trace not divisible as expected")
    return t // p**i


def radical(A: FdAlgebra) -> np.ndarray:
    """Basis (rows, echelon form) of the Jacobson radical."""
    if "rad" in A._cache:
        return A._cache["rad"]
    F = A.field
    if F.n > 1:
        R = restrict_scalars(A)
        rad = _extend_to_field(radical(R), F, A.dim)
        A._cache["rad"] = rad
        return rad
    p, d = F.p, A.dim
    L = A.regular_matrices()
    I = eye(d)
    top = int(math.floor(math.log(d, p) + 1e-9)) if d > 1 else 0
    for i in range(top + 1):
        if I.shape[0] == 0:
            break
        # G[j, k] = g_i(u_k * b_j) for the current ideal basis u_k
        G = np.zeros((d, I.shape[0]), dtype=np.int64)
        for k, u in enumerate(I):
            Lu = lin_comb(u, L, F, (d, d))
            for j in range(d):
                G[j, k] = _trace_power_digit(matmul(Lu, L[j], F), p, i)
        lam = nullspace(G, F)
        I = row_basis(matmul(lam, I, F), F) if lam.shape[0] else np.zeros((0, d), dtype=np.int64)
    A._cache["rad"] = I
    return I


def nilpotency_index(A: FdAlgebra, S: np.ndarray) -> int | None:
    """Least t with span(S)^t = 0, or None if the span is not nilpotent."""
    F, d = A.field, A.dim
    S = np.asarray(S, dtype=np.int64).reshape(-1, d)
    if S.shape[0] == 0:
        return 1
    cur = S
    for t in range(1, d + 2):
        if cur.shape[0] == 0:
            return t
        prods = [A.product(x, y) for x in cur for y in S]
        cur = row_basis(np.stack(prods), F)
    return None


@dataclass(frozen=True)
class LocalData:
    is_local: bool
    k_dim_of_residue: int
    radical_dim: int
    n_factors: int | None = None


def local_data(A: FdAlgebra) -> LocalData:
    """Decide whether A/rad A is a field; also report the residue dimension."""
    F, d = A.field, A.dim
    J = radical(A)
    r = J.shape[0]
    res = d - r
    if res == 0:
        return LocalData(False, 0, r, 0)
    # A/J must be commutative to be a (finite) division ring.
    for i in range(d):
        for j in range(i + 1, d):
            c = np.asarray(F.sub(A.mul[i, j], A.mul[j, i]), dtype=np.int64)
            if np.any(c) and rank(np.vstack([J, c]), F) > r:
                return LocalData(False, res, r, None)
    # Number of field factors: dim {x : x^q - x in J} - dim J.
    q = F.q
    rows = [np.asarray(F.sub(A.power(A.basis_vector(i), q), A.basis_vector(i)), dtype=np.int64)
            for i in range(d)]
    img = np.stack(rows)
    if r:
        comp = nullspace(J, F)  # functionals vanishing on J: x -> comp . x
        img = matmul(img, comp.T, F)
    factors = nullspace(img.T, F).shape[0] - r
    return LocalData(factors == 1, res, r, factors)


def semisimple_quotient_is_field(A: FdAlgebra) -> bool:
    return local_data(A).is_local
