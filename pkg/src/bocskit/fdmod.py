"""Finite-dimensional modules over structure-constant algebras.

A module is a stack of action matrices, one per algebra basis element.
Everything heavy (Hom spaces, End algebras, splitting) runs over the prime
field; modules over F_{p^n} are restricted first, which leaves Hom spaces
unchanged as sets because the scalars become part of the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np
from sympy import Poly, symbols

from .exactalg.algebra import (FdAlgebra, algebra_from_matrices, local_data,
                               radical, restrict_scalars)
from .exactalg.fields import GF, expand_matrix, gf
from .exactalg.linalg import (CapError, LinAlgError, eye, image_basis, inverse,
                              lin_comb, mat_pow, matmul, nullspace,
                              poly_eval_matrix, min_poly, rank, row_basis, rref,
                              zeros, block_diag)

MODULE_DIM_CAP = 256


class ModuleError(ValueError):
    pass


class Inconclusive(RuntimeError):
    """A randomized search ran out of attempts; the verdict is 'unknown'."""


@dataclass(frozen=True, eq=False)
class FdModule:
    algebra: FdAlgebra
    actions: np.ndarray
    label: str = ""
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        act = np.asarray(self.actions, dtype=np.int64)
        if act.ndim != 3 or act.shape[0] != self.algebra.dim or act.shape[1] != act.shape[2]:
            raise ModuleError(f"action stack has shape {act.shape}")
        if act.shape[1] * self.algebra.field.n > MODULE_DIM_CAP:
            raise CapError(f"module dimension {act.shape[1]} exceeds cap {MODULE_DIM_CAP}")
        act.setflags(write=False)
        object.__setattr__(self, "actions", act)

    @property
    def field(self) -> GF:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.actions.shape[1]

    def act(self, a) -> np.ndarray:
        """Matrix of an algebra element given by coordinates."""
        return lin_comb(a, self.actions, self.field, (self.dim, self.dim))

    def check(self) -> bool:
        A, F = self.algebra, self.field
        if not np.array_equal(self.act(A.unit), eye(self.dim)):
            return False
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = matmul(self.actions[i], self.actions[j], F)
                if not np.array_equal(lhs, self.act(A.mul[i, j])):
                    return False
        return True

    def validate(self) -> None:
        if not self.check():
            raise ModuleError("action does not respect the structure constants")

    def restricted(self) -> "FdModule":
        """The module over the prime-field restriction of the algebra."""
        if self.field.n == 1:
            return self
        if "res" not in self._cache:
            F, m = self.field, self.field.n
            powers = [F.from_digits([0] * k + [1]) for k in range(m)]
            acts = [expand_matrix(F, F.mul(powers[k], self.actions[i]))
                    for i in range(self.algebra.dim) for k in range(m)]
            self._cache["res"] = FdModule(restrict_scalars(self.algebra), np.stack(acts), self.label)
        return self._cache["res"]

    def matrix_module(self) -> "MatrixModule":
        if "mm" not in self._cache:
            Mp = self.restricted()
            A, F = Mp.algebra, Mp.field
            P, sizes = _adapted(Mp)
            Pi = inverse(P, F)
            acts = [matmul(matmul(Pi, g, F), P, F) for g in Mp.actions]
            offs = tuple(int(x) for x in np.concatenate([[0], np.cumsum(sizes)]))
            gens = []
            for g, i, j in _block_generators(A):
                G = zeros(Mp.dim, Mp.dim)
                G[offs[j]:offs[j + 1], offs[i]:offs[i + 1]] = acts[g][offs[j]:offs[j + 1], offs[i]:offs[i + 1]]
                gens.append(G)
            stack = np.stack(gens) if gens else np.zeros((0, Mp.dim, Mp.dim), dtype=np.int64)
            self._cache["mm"] = MatrixModule(F, stack, offs, P, self.field.n)
        return self._cache["mm"]

    def dim_vector(self) -> tuple[int, ...]:
        A = self.algebra
        if not A.idempotents:
            return (self.dim,)
        return tuple(rank(self.act(e), self.field) for e in A.idempotents)

    def to_json(self) -> dict:
        F = self.field
        enc = (lambda M: M.tolist()) if F.n == 1 else (lambda M: [[F.to_digits(int(x)).tolist() for x in row] for row in M])
        return {"algebra": self.algebra.to_json(), "dim": self.dim, "label": self.label,
                "actions": [enc(M) for M in self.actions]}

    @classmethod
    def from_json(cls, data: dict, algebra: FdAlgebra | None = None) -> "FdModule":
        A = algebra or FdAlgebra.from_json(data["algebra"])
        F = A.field
        dec = (lambda M: M) if F.n == 1 else (lambda M: [[F.from_digits(x) for x in row] for row in M])
        acts = np.array([dec(M) for M in data["actions"]], dtype=np.int64).reshape(A.dim, data["dim"], data["dim"])
        M = cls(A, acts, data.get("label", ""))
        M.validate()
        return M


# -- constructions --

def base_change(M: FdModule, P: np.ndarray) -> FdModule:
    """The isomorphic module with actions P^-1 M_g P."""
    F = M.field
    Pi = inverse(P, F)
    acts = np.stack([matmul(matmul(Pi, g, F), P, F) for g in M.actions])
    return FdModule(M.algebra, acts, M.label)


def direct_sum(*mods: FdModule) -> FdModule:
    A = mods[0].algebra
    acts = np.stack([block_diag(*[m.actions[i] for m in mods]) for i in range(A.dim)])
    return FdModule(A, acts, "+".join(m.label for m in mods if m.label))


def submodule(M: FdModule, cols: np.ndarray, complement: np.ndarray | None = None) -> FdModule:
    """Restriction to the invariant subspace spanned by the columns of ``cols``."""
    F = M.field
    cols = np.asarray(cols, dtype=np.int64)
    k = cols.shape[1]
    if complement is None:
        complement = _complete_columns(cols, F)
    P = np.concatenate([cols, complement], axis=1)
    Pi = inverse(P, F)
    acts = []
    for g in M.actions:
        B = matmul(matmul(Pi, g, F), cols, F)
        if np.any(B[k:]):
            raise ModuleError("subspace is not invariant")
        acts.append(B[:k])
    return FdModule(M.algebra, np.stack(acts), M.label)


def _complete_columns(cols: np.ndarray, F: GF) -> np.ndarray:
    n = cols.shape[0]
    _, piv = rref(cols.T, F)
    extra = [j for j in range(n) if j not in set(piv)]
    E = zeros(n, len(extra))
    for k, j in enumerate(extra):
        E[j, k] = 1
    return E


def random_base_change(M: FdModule, rng: np.random.Generator) -> FdModule:
    F = M.field
    while True:
        P = rng.integers(0, F.q, (M.dim, M.dim))
        if rank(P, F) == M.dim:
            return base_change(M, P)


def _adapted(M: FdModule) -> tuple[np.ndarray, list[int]]:
    """Basis adapted to M = (+) e_i M, and the block sizes."""
    A, F = M.algebra, M.field
    if not A.idempotents:
        return eye(M.dim), [M.dim]
    cols, sizes = [], []
    for e in A.idempotents:
        B = image_basis(M.act(e), F)
        sizes.append(B.shape[0])
        cols.append(B.T.reshape(M.dim, -1))
    P = np.concatenate(cols, axis=1)
    if P.shape[1] != M.dim:
        raise ModuleError("idempotents do not decompose the module")
    return P, sizes


def _block_generators(A: FdAlgebra) -> list[tuple[int, int, int]]:
    """(basis index g, source block i, target block j) with e_j b_g e_i nonzero,
    skipping elements of the span of the idempotents (their action is forced)."""
    if "blockgens" in A._cache:
        return A._cache["blockgens"]
    F = A.field
    if not A.idempotents:
        out = [(g, 0, 0) for g in range(A.dim)
               if rank(np.vstack([A.unit, A.basis_vector(g)]), F) > 1]
    else:
        E = np.array(A.idempotents, dtype=np.int64)
        out = []
        for g in range(A.dim):
            if rank(np.vstack([E, A.basis_vector(g)]), F) == E.shape[0]:
                continue
            for i, ei in enumerate(E):
                for j, ej in enumerate(E):
                    if np.any(A.product(A.product(ej, A.basis_vector(g)), ei)):
                        out.append((g, i, j))
    A._cache["blockgens"] = out
    return out


# -- generator-matrix modules: the common currency of the heavy routines --

@dataclass(frozen=True, eq=False)
class MatrixModule:
    """Module over the prime field given by generator matrices.

    The basis is adapted to a block decomposition (e.g. M = (+) e_i M):
    block b occupies coordinates offsets[b]:offsets[b+1], and each generator
    maps one block into one block.  ``to_orig`` maps these coordinates back to
    the coordinates of the object the module came from.
    """
    field: GF
    gens: np.ndarray
    offsets: tuple[int, ...]
    to_orig: np.ndarray
    own_degree: int = 1
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.offsets, self.offsets[1:]))

    def block_of(self, i: int) -> int:
        for b in range(len(self.offsets) - 1):
            if self.offsets[b] <= i < self.offsets[b + 1]:
                return b
        raise IndexError(i)

    def subquotient(self, cols: np.ndarray) -> "MatrixModule":
        """Restriction to an invariant, block-homogeneous subspace (columns)."""
        F = self.field
        cols = np.asarray(cols, dtype=np.int64)
        blocks = []
        for c in range(cols.shape[1]):
            nz = np.nonzero(cols[:, c])[0]
            bs = {self.block_of(int(i)) for i in nz}
            if len(bs) != 1:
                raise ModuleError("subspace basis is not block-homogeneous")
            blocks.append(bs.pop())
        order = sorted(range(cols.shape[1]), key=lambda c: (blocks[c], c))
        cols = cols[:, order]
        nb = len(self.offsets) - 1
        sizes = [sum(1 for c in order if blocks[c] == b) for b in range(nb)]
        comp = _complete_columns(cols, F)
        P = np.concatenate([cols, comp], axis=1)
        Pi = inverse(P, F)
        k = cols.shape[1]
        gens = []
        for g in self.gens:
            B = matmul(matmul(Pi, g, F), cols, F)
            if np.any(B[k:]):
                raise ModuleError("subspace is not invariant")
            gens.append(B[:k])
        offs = tuple(int(x) for x in np.concatenate([[0], np.cumsum(sizes)]))
        return MatrixModule(F, np.stack(gens) if gens else np.zeros((0, k, k), dtype=np.int64),
                            offs, matmul(self.to_orig, cols, F), self.own_degree)


def as_matrix_module(M) -> MatrixModule:
    if isinstance(M, MatrixModule):
        return M
    return M.matrix_module()


def _mm_hom(M: MatrixModule, N: MatrixModule) -> np.ndarray:
    """Hom between matrix modules, in their adapted coordinates.

    Spins a basis of M out of seed vectors living in single blocks, writes
    every basis image as a linear function of the seed images and collects
    the relations; the only unknowns are the seed images.
    """
    F = M.field
    p = F.p
    m, n = M.dim, N.dim
    if M.gens.shape[0] != N.gens.shape[0] or len(M.offsets) != len(N.offsets):
        raise ModuleError("modules have different generator data")
    if m == 0 or n == 0:
        return np.zeros((0, n, m), dtype=np.int64)
    offM, offN = M.offsets, N.offsets
    nb = len(offM) - 1
    sN = N.sizes
    gens = list(zip(M.gens, N.gens))

    ech = zeros(0, m)
    piv: list[int] = []
    U: list[np.ndarray] = []
    seeds: list[int] = []
    tree: list[tuple] = []

    def add(v):
        nonlocal ech
        r = v % p if not piv else (v - matmul(v[piv][None, :], ech, F)[0]) % p
        nz = np.nonzero(r)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        r = r * pow(int(r[c]), p - 2, p) % p
        if ech.shape[0]:
            ech = (ech - np.outer(ech[:, c], r)) % p
        ech = np.vstack([ech, r])
        piv.append(c)
        return True

    for b in range(nb):
        for t in range(offM[b], offM[b + 1]):
            if len(U) == m:
                break
            v = np.zeros(m, dtype=np.int64)
            v[t] = 1
            if not add(v):
                continue
            seeds.append(b)
            queue = [len(U)]
            U.append(v)
            tree.append(("seed", len(seeds) - 1))
            while queue:
                j = queue.pop(0)
                for gi, (GM, _) in enumerate(gens):
                    w = matmul(GM, U[j][:, None], F)[:, 0]
                    if np.any(w) and add(w):
                        queue.append(len(U))
                        U.append(w)
                        tree.append(("child", j, gi))
    K = sum(sN[b] for b in seeds)
    if K == 0:
        return np.zeros((0, n, m), dtype=np.int64)
    colof = np.concatenate([[0], np.cumsum([sN[b] for b in seeds])]).astype(int)
    T = np.zeros((m, n, K), dtype=np.int64)
    for j, node in enumerate(tree):
        if node[0] == "seed":
            k = node[1]
            b = seeds[k]
            T[j, offN[b]:offN[b + 1], colof[k]:colof[k + 1]] = eye(sN[b])
        else:
            _, par, gi = node
            T[j] = matmul(gens[gi][1], T[par], F)
    Umat = np.array(U, dtype=np.int64).T
    Ui = inverse(Umat, F)
    Tflat = T.reshape(m, n * K)
    R = zeros(0, K)
    for GM, GN in gens:
        C = matmul(matmul(Ui, GM, F), Umat, F)  # GM u_j = sum_l C[l, j] u_l
        lhs = matmul(GN, T.transpose(1, 0, 2).reshape(n, m * K), F).reshape(n, m, K).transpose(1, 0, 2)
        rhs = matmul(C.T, Tflat, F).reshape(m, n, K)
        rows = ((lhs - rhs) % p).reshape(m * n, K)
        rows = rows[np.any(rows, axis=1)]
        if rows.shape[0]:
            R = row_basis(np.vstack([R, rows]), F)
            if R.shape[0] == K:
                return np.zeros((0, n, m), dtype=np.int64)
    Y = nullspace(R, F) if R.shape[0] else eye(K)
    FU = matmul(Tflat.reshape(m * n, K), Y.T, F).reshape(m, n, -1).transpose(2, 1, 0)
    out = np.stack([matmul(fu, Ui, F) for fu in FU])
    return row_basis(out.reshape(len(out), -1), F).reshape(-1, n, m)


def _mm_to_orig(f: np.ndarray, M: MatrixModule, N: MatrixModule) -> np.ndarray:
    F = M.field
    key = "from_orig"
    if key not in M._cache:
        M._cache[key] = inverse(M.to_orig, F) if M.to_orig.shape[0] == M.to_orig.shape[1] else None
    Mi = M._cache[key]
    if Mi is None:
        raise ModuleError("module coordinates are not square; no original basis")
    return np.stack([matmul(matmul(N.to_orig, g, F), Mi, F) for g in f]) if len(f) else \
        np.zeros((0, N.to_orig.shape[0], M.to_orig.shape[0]), dtype=np.int64)


def hom_space(M, N) -> np.ndarray:
    """Basis of Hom(M, N) as matrices over the prime field (original coordinates)."""
    Mm, Nm = as_matrix_module(M), as_matrix_module(N)
    return _mm_to_orig(_mm_hom(Mm, Nm), Mm, Nm)


def _check_pair(M: FdModule, N: FdModule):
    if M.algebra is not N.algebra and M.algebra.to_json() != N.algebra.to_json():
        raise ModuleError("modules over different algebras")


def hom_space_naive(M: FdModule, N: FdModule) -> np.ndarray:
    """Hom via the full Kronecker-product system over all basis actions (oracle)."""
    _check_pair(M, N)
    if M.field.n > 1:
        return hom_space_naive(M.restricted(), N.restricted())
    F = M.field
    m, n = M.dim, N.dim
    blocks = []
    for g in range(M.algebra.dim):
        # row-major vec: f[a, b] -> a*m + b
        blocks.append((np.kron(N.actions[g], eye(m)) - np.kron(eye(n), M.actions[g].T)) % F.p)
    K = nullspace(np.vstack(blocks), F)
    return row_basis(K, F).reshape(-1, n, m) if K.shape[0] else np.zeros((0, n, m), dtype=np.int64)


def is_hom(f: np.ndarray, M, N) -> bool:
    Mm, Nm = as_matrix_module(M), as_matrix_module(N)
    F = Mm.field
    fa = matmul(matmul(inverse(Nm.to_orig, F), f, F), Mm.to_orig, F)
    return all(np.array_equal(matmul(gn, fa, F), matmul(fa, gm, F)) for gm, gn in zip(Mm.gens, Nm.gens))


# -- endomorphisms --

@dataclass(frozen=True, eq=False)
class EndData:
    basis: np.ndarray  # adapted coordinates of the matrix module
    algebra: FdAlgebra
    radical: np.ndarray
    residue_dim: int  # over the module's own field
    is_local: bool
    n_factors: int | None


def _mm_end(M: MatrixModule) -> EndData:
    if "end" in M._cache:
        return M._cache["end"]
    F = M.field
    basis = _mm_hom(M, M)
    alg, basis = algebra_from_matrices(list(basis), F)
    ld = local_data(alg)
    rad = radical(alg)
    res = alg.dim - rad.shape[0]
    if res % M.own_degree:
        raise ModuleError("residue dimension not divisible by the coefficient degree")
    ed = EndData(basis, alg, rad, res // M.own_degree, ld.is_local, ld.n_factors)
    M._cache["end"] = ed
    return ed


def end_data(M) -> EndData:
    return _mm_end(as_matrix_module(M))


def _fitting_split(f: np.ndarray, F: GF) -> tuple[np.ndarray, np.ndarray] | None:
    d = f.shape[0]
    fN = mat_pow(f, d, F)
    r = rank(fN, F)
    if r == 0 or r == d:
        return None
    return nullspace(fN, F).T, image_basis(fN, F).T


def _primary_splitter(f: np.ndarray, F: GF) -> np.ndarray | None:
    """g(f) for an irreducible factor g of the minimal polynomial, if f is not primary."""
    mu = min_poly(f, F)
    y = symbols("y")
    facs = Poly(list(reversed(mu)), y, modulus=F.p).factor_list()[1]
    if len(facs) < 2:
        return None
    g = [int(c) % F.p for c in reversed(facs[0][0].all_coeffs())]
    return poly_eval_matrix(g, f, F)


def _splitting_endomorphism(M: MatrixModule, rng: np.random.Generator, tries: int = 64) -> np.ndarray | None:
    """An endomorphism that is neither nilpotent nor invertible, if End is not local."""
    ed = _mm_end(M)
    if ed.is_local:
        return None
    F = M.field
    B = ed.basis
    alg = ed.algebra
    d = M.dim
    cands = []
    if ed.n_factors and ed.n_factors > 1:
        # commutative residue algebra: elements with x^p - x in rad separate the factors
        rows = [np.asarray(F.sub(alg.power(alg.basis_vector(i), F.p), alg.basis_vector(i))) for i in range(alg.dim)]
        comp = nullspace(ed.radical, F) if ed.radical.shape[0] else eye(alg.dim)
        img = matmul(np.stack(rows), comp.T, F)
        for x in nullspace(img.T, F):
            cands.append(lin_comb(x, B, F, (d, d)))
    cands.extend(B)
    cands.extend(lin_comb(rng.integers(0, F.p, B.shape[0]), B, F, (d, d)) for _ in range(tries))
    for f in cands:
        if _fitting_split(f, F) is not None:
            return f
        g = _primary_splitter(f, F)
        if g is not None and _fitting_split(g, F) is not None:
            return g
    return None


@dataclass(frozen=True)
class IndecCertificate:
    indecomposable: bool
    residue_dim: int | None = None
    radical_dim: int | None = None
    idempotent: np.ndarray | None = None


def is_indecomposable(M, seed: int = 0) -> tuple[bool, IndecCertificate]:
    """End-locality test; certificate is the residue data or a splitting idempotent."""
    Mm = as_matrix_module(M)
    if Mm.dim == 0:
        return False, IndecCertificate(False)
    ed = _mm_end(Mm)
    if ed.is_local:
        return True, IndecCertificate(True, ed.residue_dim, ed.radical.shape[0])
    F = Mm.field
    f = _splitting_endomorphism(Mm, np.random.default_rng(seed))
    if f is None:
        raise Inconclusive("End is not local but no splitting endomorphism was found")
    ker, img = _fitting_split(f, F)
    P = np.concatenate([ker, img], axis=1)
    D = zeros(P.shape[0], P.shape[0])
    D[:ker.shape[1], :ker.shape[1]] = eye(ker.shape[1])
    e = matmul(matmul(P, D, F), inverse(P, F), F)
    e = _mm_to_orig(e[None], Mm, Mm)[0]
    return False, IndecCertificate(False, idempotent=e)


def decompose_mm(M, seed: int = 0) -> list[MatrixModule]:
    """Indecomposable summands as matrix modules (to_orig = inclusion columns)."""
    rng = np.random.default_rng(seed)
    Mm = as_matrix_module(M)
    F = Mm.field
    out, todo = [], [Mm]
    while todo:
        X = todo.pop()
        if X.dim == 0:
            continue
        if _mm_end(X).is_local:
            out.append(X)
            continue
        f = _splitting_endomorphism(X, rng)
        if f is None:
            raise Inconclusive("no splitting endomorphism found")
        ker, img = _fitting_split(f, F)
        todo.append(X.subquotient(img))
        todo.append(X.subquotient(ker))
    out.sort(key=lambda X: X.dim)
    return out


def decompose(M: FdModule, seed: int = 0) -> list[FdModule]:
    """Indecomposable summands of an FdModule (over the prime-field restriction)."""
    Mp = M.restricted()
    return [submodule(Mp, X.to_orig) for X in decompose_mm(Mp, seed)]


# -- isomorphism --

def _iso_indecomposable(M: MatrixModule, N: MatrixModule) -> bool:
    F = M.field
    H1 = _mm_hom(M, N)
    if H1.shape[0] == 0:
        return False
    H2 = _mm_hom(N, M)
    for g in H2:
        for f in H1:
            if np.any(mat_pow(matmul(g, f, F), M.dim, F)):
                return True
    return False


def iso_test(M, N, seed: int = 0) -> bool:
    """Decide M ~ N.

    For indecomposable M, M ~ N iff some composite g f with f : M -> N and
    g : N -> M (basis elements) is non-nilpotent.  Otherwise both sides are
    split into indecomposables and matched.  Deterministic apart from the
    splitting search, which raises Inconclusive rather than guessing.
    """
    Mm, Nm = as_matrix_module(M), as_matrix_module(N)
    if Mm.dim != Nm.dim or Mm.sizes != Nm.sizes:
        return False
    if Mm.dim == 0:
        return True
    okM, okN = _mm_end(Mm).is_local, _mm_end(Nm).is_local
    if okM != okN or _mm_end(Mm).algebra.dim != _mm_end(Nm).algebra.dim:
        return False
    if okM:
        return _iso_indecomposable(Mm, Nm)
    A, B = decompose_mm(Mm, seed), decompose_mm(Nm, seed)
    if len(A) != len(B):
        return False
    used = [False] * len(B)
    for X in A:
        for k, Y in enumerate(B):
            if not used[k] and X.sizes == Y.sizes and _iso_indecomposable(X, Y):
                used[k] = True
                break
        else:
            return False
    return True


def iso_classes(mods: Sequence, seed: int = 0) -> list[int]:
    """Class id per module, numbered by first occurrence."""
    ids: list[int] = []
    reps: list[int] = []
    for i, M in enumerate(mods):
        for r in reps:
            if iso_test(mods[r], M, seed):
                ids.append(ids[r])
                break
        else:
            reps.append(i)
            ids.append(len(reps) - 1)
    return ids


# -- endolength --

def endolength(M, seed: int = 0) -> int:
    """Length of M as a module over End(M).

    Indecomposable: dim M / dim K_M.  In general the sum over the distinct
    isomorphism classes of indecomposable summands (M^r has the same
    endolength as M).
    """
    Mm = as_matrix_module(M)
    if Mm.dim == 0:
        return 0
    ed = _mm_end(Mm)
    if ed.is_local:
        res = ed.residue_dim * Mm.own_degree
        if Mm.dim % res:
            raise ModuleError("dim M is not a multiple of dim K_M")
        return Mm.dim // res
    parts = decompose_mm(Mm, seed)
    ids = iso_classes(parts, seed)
    reps: dict[int, MatrixModule] = {}
    for X, c in zip(parts, ids):
        reps.setdefault(c, X)
    return sum(endolength(X) for X in reps.values())


def residue_dim(M) -> int:
    """dim K_M over the module's own field (M indecomposable)."""
    ed = end_data(M)
    if not ed.is_local:
        raise ModuleError("residue field only defined for indecomposables")
    return ed.residue_dim


# -- quivers and the Euler form --

@dataclass(frozen=True)
class Quiver:
    """Acyclic quiver; arrows are (source, target) pairs."""
    n_vertices: int
    arrows: tuple[tuple[int, int], ...]

    def paths(self) -> list[tuple]:
        """All paths as tuples of arrow indices (composition order: first arrow first)."""
        out = [("e", v) for v in range(self.n_vertices)]
        frontier = [(k,) for k in range(len(self.arrows))]
        while frontier:
            out.extend(frontier)
            nxt = []
            for pth in frontier:
                end = self.arrows[pth[-1]][1]
                for k, (s, _) in enumerate(self.arrows):
                    if s == end:
                        nxt.append(pth + (k,))
            frontier = nxt
            if len(out) > 4096:
                raise ModuleError("quiver has too many paths (cycle?)")
        return out

    def euler_form(self, x: Sequence[int], y: Sequence[int]) -> int:
        return (sum(a * b for a, b in zip(x, y))
                - sum(x[s] * y[t] for s, t in self.arrows))

    def q(self, x: Sequence[int]) -> int:
        return self.euler_form(x, x)


def path_algebra(Q: Quiver, F: GF) -> FdAlgebra:
    paths = Q.paths()
    idx = {pth: i for i, pth in enumerate(paths)}
    d = len(paths)

    def src(pth):
        return pth[1] if pth[0] == "e" else Q.arrows[pth[0]][0]

    def tgt(pth):
        return pth[1] if pth[0] == "e" else Q.arrows[pth[-1]][1]

    mul = np.zeros((d, d, d), dtype=np.int64)
    for a, pa in enumerate(paths):
        for b, pb in enumerate(paths):
            # a * b = "b then a"
            if tgt(pb) != src(pa):
                continue
            if pa[0] == "e":
                mul[a, b, b] = 1
            elif pb[0] == "e":
                mul[a, b, a] = 1
            else:
                mul[a, b, idx[pb + pa]] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[:Q.n_vertices] = 1
    idem = tuple(tuple(int(i == v) for i in range(d)) for v in range(Q.n_vertices))
    labels = tuple(f"e{p[1] + 1}" if p[0] == "e" else "a" + "".join(str(k) for k in p) for p in paths)
    return FdAlgebra(F, mul, unit, labels, idem, tuple([1] * Q.n_vertices))


def quiver_module(Q: Quiver, A: FdAlgebra, dims: Sequence[int], maps: Sequence[np.ndarray]) -> FdModule:
    """Representation with vector spaces F^dims[v] and a matrix per arrow."""
    F = A.field
    off = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    D = int(off[-1])
    paths = Q.paths()
    acts = []
    for pth in paths:
        G = zeros(D, D)
        if pth[0] == "e":
            v = pth[1]
            G[off[v]:off[v + 1], off[v]:off[v + 1]] = eye(dims[v])
        else:
            s = Q.arrows[pth[0]][0]
            mat = eye(dims[s])
            for k in pth:
                mat = matmul(np.asarray(maps[k], dtype=np.int64).reshape(dims[Q.arrows[k][1]], dims[Q.arrows[k][0]]), mat, F)
            t = Q.arrows[pth[-1]][1]
            G[off[t]:off[t + 1], off[s]:off[s + 1]] = mat
        acts.append(G)
    return FdModule(A, np.stack(acts))


@dataclass(frozen=True)
class EulerReport:
    dim_vector: tuple[int, ...]
    q_value: int
    dim_end: int
    dim_ext1: int

    @property
    def consistent(self) -> bool:
        return self.q_value == self.dim_end - self.dim_ext1


def euler_form_check(Q: Quiver, M: FdModule) -> EulerReport:
    """Compare q(dim M) with dim End - dim Ext^1 for a hereditary path algebra.

    Ext^1 is the cokernel of the differential of Hom(P., M) for the standard
    projective resolution 0 -> (+)_a P_t(a) (x) e_s M -> (+)_v P_v (x) e_v M -> M -> 0,
    i.e. of (phi_v) -> (phi_t M_a - M_a phi_s) : (+) End(e_v M) -> (+) Hom(e_s M, e_t M).
    """
    A = M.algebra
    if A.field.n > 1:
        raise ModuleError("Euler form check implemented over prime fields")
    F = A.field
    P, sizes = _adapted(M)
    Ma = base_change(M, P).actions
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    dims = tuple(int(s) for s in sizes)
    paths = Q.paths()
    arrow_idx = [paths.index((k,)) for k in range(len(Q.arrows))]
    # unknowns: phi_v as dims[v] x dims[v] blocks, row-major
    voff = np.concatenate([[0], np.cumsum([d * d for d in dims])]).astype(int)
    cols = int(voff[-1])
    rows = []
    for k, (s, t) in enumerate(Q.arrows):
        Mk = Ma[arrow_idx[k]][off[t]:off[t + 1], off[s]:off[s + 1]]
        ds, dt = dims[s], dims[t]
        # vec(phi_t Mk - Mk phi_s), row-major vec of a dt x ds matrix
        block = np.zeros((dt * ds, cols), dtype=np.int64)
        block[:, voff[t]:voff[t + 1]] = np.kron(eye(dt), Mk.T)
        block[:, voff[s]:voff[s + 1]] = (block[:, voff[s]:voff[s + 1]] - np.kron(Mk, eye(ds))) % F.p
        rows.append(block)
    D = np.vstack(rows) if rows else zeros(0, cols)
    r = rank(D, F) if D.shape[0] else 0
    dim_end = cols - r
    dim_ext1 = D.shape[0] - r
    if dim_end != hom_space(M, M).shape[0]:
        raise ModuleError("End dimension from the resolution disagrees with hom_space")
    return EulerReport(dims, Q.q(dims), dim_end, dim_ext1)
