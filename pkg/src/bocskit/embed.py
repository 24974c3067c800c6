"""Tensor functors Z (x)_Gamma - for Lambda-Gamma bimodules Z free of finite rank on the right.

Z = Gamma^r (columns), Gamma acting on the right coordinatewise and each
basis element of Lambda acting on the left by an r x r matrix of skew
polynomials.  Then Z (x) N = N^r and lambda acts by the block matrix whose
(i, j) block is the action of Z_lambda[i][j] on N.

Lambda may live over the prime field (always) or over D when Gamma = D[x]
is commutative; in the second case the F_p matrices are rewritten in a
D-basis of N.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .exactalg.algebra import FdAlgebra
from .exactalg.fields import GF
from .exactalg.linalg import (CapError, eye, inverse, is_invertible, matmul, nullspace, rank, zeros)
from .fdmod import MODULE_DIM_CAP, FdModule, Quiver, hom_space, path_algebra
from .fdmod import endolength as fd_endolength
from .fdmod import is_indecomposable as fd_is_indecomposable
from .fdmod import iso_test as fd_iso_test
from .fdmod import residue_dim as fd_residue_dim
from .skewpid import Atom, PidModule, SkewError, SkewPoly, SkewRing, indec_module, socle


class EmbedError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EmbeddingBimodule:
    algebra: FdAlgebra
    ring: SkewRing
    rank: int
    actions: tuple  # per Lambda basis element: r x r tuple of SkewPoly
    label: str = ""

    def __post_init__(self):
        F = self.algebra.field
        if F.p != self.ring.p:
            raise EmbedError("Lambda and Gamma have different characteristic")
        if not (F.n == 1 or (F.n == self.ring.m and self.ring.commutative)):
            raise EmbedError(f"Lambda over {F} needs Gamma = {F}[x] or a prime field")
        if len(self.actions) != self.algebra.dim:
            raise EmbedError("one action matrix per basis element of Lambda is required")
        for A in self.actions:
            if len(A) != self.rank or any(len(row) != self.rank for row in A):
                raise EmbedError("action matrices must be r x r")

    def _scalar_poly(self, c: int) -> SkewPoly:
        """c in Lambda's field as a constant of Gamma."""
        return self.ring.poly([c])

    def matrix_of(self, coords) -> list[list[SkewPoly]]:
        R, r = self.ring, self.rank
        out = [[R.poly([0]) for _ in range(r)] for _ in range(r)]
        for k, c in enumerate(coords):
            c = int(c)
            if not c:
                continue
            s = self._scalar_poly(c)
            for i in range(r):
                for j in range(r):
                    out[i][j] = out[i][j] + s * self.actions[k][i][j]
        return out

    def check(self) -> list[str]:
        """Problems with the algebra-map property (empty when Z is a bimodule)."""
        A, R, r = self.algebra, self.ring, self.rank
        probs = []
        unit = self.matrix_of(A.unit)
        if any(unit[i][j] != (R.one() if i == j else R.poly([0])) for i in range(r) for j in range(r)):
            probs.append("unit does not act as the identity")
        for a in range(A.dim):
            for b in range(A.dim):
                lhs = _pmat_mul(self.actions[a], self.actions[b], R)
                rhs = self.matrix_of(A.mul[a, b])
                if lhs != rhs:
                    probs.append(f"{A.labels[a]}*{A.labels[b]} is not respected")
        return probs

    def validate(self) -> "EmbeddingBimodule":
        probs = self.check()
        if probs:
            raise EmbedError("; ".join(probs))
        return self

    def to_json(self) -> dict:
        return {"lambda": self.algebra.to_json(), "gamma": self.ring.field_json(), "rank": self.rank,
                "label": self.label,
                "actions": {lab: [[f.to_json()["coeffs"] for f in row] for row in A]
                            for lab, A in zip(self.algebra.labels, self.actions)}}

    @classmethod
    def from_json(cls, data: dict) -> "EmbeddingBimodule":
        A = FdAlgebra.from_json(data["lambda"])
        g = data["gamma"]
        R = SkewRing(int(g["p"]), int(g.get("m", 1)), int(g.get("twist_exp", 0)))
        acts = []
        for lab in A.labels:
            rows = data["actions"][lab]
            acts.append(tuple(tuple(SkewPoly.from_json({**R.field_json(), "coeffs": c}) for c in row)
                              for row in rows))
        return cls(A, R, int(data["rank"]), tuple(acts), data.get("label", "")).validate()


def _pmat_mul(X, Y, R: SkewRing):
    r = len(X)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = R.poly([0])
            for k in range(r):
                acc = acc + X[i][k] * Y[k][j]
            row.append(acc)
        out.append(row)
    return out


# -- D-frames: rewriting F_p matrices of D-linear maps over D --

def _d_frame(N: PidModule) -> np.ndarray:
    """Invertible P with columns v_1, a v_1, ..., a^{m-1} v_1, v_2, ... (a = generator of D)."""
    R = N.ring
    F = R.D.prime_field
    cols = zeros(N.dim, 0)
    A = N.d_action
    for j in range(N.dim):
        e = zeros(N.dim, 1)
        e[j, 0] = 1
        if rank(np.concatenate([cols, e], axis=1), F) == cols.shape[1]:
            continue
        block = [e]
        for _ in range(R.m - 1):
            block.append(matmul(A, block[-1], F))
        cols = np.concatenate([cols] + block, axis=1)
        if cols.shape[1] == N.dim:
            break
    return cols


def _to_field(B: np.ndarray, D: GF) -> np.ndarray:
    m = D.n
    k, l = B.shape[0] // m, B.shape[1] // m
    out = np.zeros((k, l), dtype=np.int64)
    for i in range(k):
        for j in range(l):
            out[i, j] = D.from_digits(B[i * m:(i + 1) * m, j * m])
    return out


def _blocks(N: PidModule, r: int) -> np.ndarray:
    P = _d_frame(N)
    out = zeros(r * N.dim, r * N.dim)
    for i in range(r):
        out[i * N.dim:(i + 1) * N.dim, i * N.dim:(i + 1) * N.dim] = P
    return out


# -- the functor --

def apply(Z: EmbeddingBimodule, N: PidModule) -> FdModule:
    if N.ring != Z.ring:
        raise EmbedError("module is over a different ring")
    r = Z.rank
    if r * N.dim > MODULE_DIM_CAP:
        raise CapError(f"r * dim N = {r * N.dim} exceeds cap {MODULE_DIM_CAP}")
    F = Z.ring.D.prime_field
    mats = []
    cache: dict = {}
    for A in Z.actions:
        B = zeros(r * N.dim, r * N.dim)
        for i in range(r):
            for j in range(r):
                f = A[i][j]
                if f.is_zero():
                    continue
                if f not in cache:
                    cache[f] = N.act(f)
                B[i * N.dim:(i + 1) * N.dim, j * N.dim:(j + 1) * N.dim] = cache[f]
        mats.append(B)
    L = Z.algebra
    if L.field.n > 1:
        P = _blocks(N, r)
        Pi = inverse(P, F)
        mats = [_to_field(matmul(matmul(Pi, B, F), P, F), L.field) for B in mats]
    return FdModule(L, np.stack(mats), f"G({N.label})" if N.label else "")


def apply_map(Z: EmbeddingBimodule, f: np.ndarray, M: PidModule, N: PidModule) -> np.ndarray:
    """1 (x) f : Z (x) M -> Z (x) N, in the coordinates used by apply."""
    F = Z.ring.D.prime_field
    r = Z.rank
    B = zeros(r * N.dim, r * M.dim)
    for i in range(r):
        B[i * N.dim:(i + 1) * N.dim, i * M.dim:(i + 1) * M.dim] = f
    if Z.algebra.field.n > 1:
        B = _to_field(matmul(matmul(inverse(_blocks(N, r), F), B, F), _blocks(M, r), F), Z.algebra.field)
    return B


def twist_module(N: PidModule, f: SkewPoly) -> PidModule:
    """N with x acting as f (restriction along the endomorphism x -> f of a commutative Gamma)."""
    if not N.ring.commutative:
        raise EmbedError("ring endomorphisms x -> f are only used for commutative Gamma")
    return PidModule(N.ring, N.act(f), N.d_action, N.label)


def compose_endo(Z: EmbeddingBimodule, f: SkewPoly) -> EmbeddingBimodule:
    """Z (x)_Gamma Gamma_phi for phi(x) = f: substitute f for x in every entry."""
    R = Z.ring
    if not R.commutative:
        raise EmbedError("ring endomorphisms x -> f are only used for commutative Gamma")

    def sub(g: SkewPoly) -> SkewPoly:
        acc = R.poly([0])
        for c in reversed(g.coeffs):
            acc = acc * f + R.poly([c])
        return acc

    acts = tuple(tuple(tuple(sub(g) for g in row) for row in A) for A in Z.actions)
    return EmbeddingBimodule(Z.algebra, R, Z.rank, acts, Z.label + "*phi")


# -- the Kronecker exemplar --

def kronecker_algebra(q: int) -> FdAlgebra:
    from sympy import factorint
    (p, m), = factorint(q).items()
    from .exactalg.fields import gf
    return path_algebra(Quiver(2, ((0, 1), (0, 1))), gf(int(p), int(m)))


def kronecker_exemplar(q: int) -> tuple[FdAlgebra, SkewRing, EmbeddingBimodule]:
    """Lambda = Kronecker algebra over F_q, Gamma = F_q[x], Z = Gamma^2 with (N => N; 1, x)."""
    from sympy import factorint
    fac = factorint(q)
    if len(fac) != 1:
        raise EmbedError(f"{q} is not a prime power")
    (p, m), = fac.items()
    L = kronecker_algebra(q)
    R = SkewRing(int(p), int(m))
    zero, one, x = R.poly([0]), R.one(), R.x

    def unit(i, j, f):
        return tuple(tuple(f if (a, b) == (i, j) else zero for b in range(2)) for a in range(2))

    by_label = {"e1": unit(0, 0, one), "e2": unit(1, 1, one), "a0": unit(1, 0, one), "a1": unit(1, 0, x)}
    Z = EmbeddingBimodule(L, R, 2, tuple(by_label[lab] for lab in L.labels), "kronecker").validate()
    return L, R, Z


# -- verification --

def _pid_end_local(N: PidModule) -> bool:
    return fd_is_indecomposable(N.matrix_module())[0]


def find_iso(M, N, tries: int = 128, seed: int = 0) -> np.ndarray | None:
    """An invertible module map M -> N found by random combination of a Hom basis, or None."""
    H = hom_space(M, N)
    if len(H) == 0 or H.shape[1] != H.shape[2]:
        return None
    F = _prime_field_of(M)
    for h in H:
        if is_invertible(h, F):
            return h
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        c = rng.integers(0, F.p, size=len(H))
        h = np.tensordot(c, H, axes=1) % F.p
        if is_invertible(h, F):
            return h
    return None


def _prime_field_of(M) -> GF:
    if isinstance(M, PidModule):
        return M.ring.D.prime_field
    return M.field.prime_field


@dataclass
class VerificationReport:
    size: int
    indecomposable_ok: bool = True
    reflects_ok: bool = True
    exact_ok: bool = True
    functorial_ok: bool = True
    sequences_checked: int = 0
    pairs_checked: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.indecomposable_ok and self.reflects_ok and self.exact_ok and self.functorial_ok

    def to_json(self) -> dict:
        return {"size": self.size, "passed": self.passed, "indecomposable_ok": self.indecomposable_ok,
                "reflects_ok": self.reflects_ok, "exact_ok": self.exact_ok,
                "functorial_ok": self.functorial_ok, "pairs_checked": self.pairs_checked,
                "sequences_checked": self.sequences_checked, "failures": self.failures}


def socle_sequence(N: PidModule) -> tuple[PidModule, PidModule, np.ndarray, np.ndarray] | None:
    """0 -> S -> N -> N/S -> 0 with S the socle; None when N is semisimple."""
    cols = socle(N)
    if cols.shape[1] == N.dim:
        return None
    S = N.submodule(cols)
    Q, qmap = N.quotient(cols)
    return S, Q, cols, qmap


def intertwines(f: np.ndarray, M: FdModule, N: FdModule) -> bool:
    """f M_b = N_b f for every basis element b, over Lambda's field."""
    F = M.field
    return all(np.array_equal(matmul(f, a, F), matmul(b, f, F)) for a, b in zip(M.actions, N.actions))


def is_exact(f: np.ndarray, g: np.ndarray, F: GF) -> bool:
    """0 -> A -f-> B -g-> C -> 0 exact, by ranks."""
    a, b, c = f.shape[1], f.shape[0], g.shape[0]
    if np.any(matmul(g, f, F)):
        return False
    return rank(f, F) == a and rank(g, F) == c and a + c == b


def verify_embedding(Z: EmbeddingBimodule, family: Sequence[PidModule], seed: int = 0) -> VerificationReport:
    rep = VerificationReport(len(family))
    images = [apply(Z, N) for N in family]
    Fp = Z.ring.D.prime_field
    for k, (N, G) in enumerate(zip(family, images)):
        if _pid_end_local(N) and not fd_is_indecomposable(G, seed)[0]:
            rep.indecomposable_ok = False
            rep.failures.append({"check": "indecomposable", "member": k, "label": N.label,
                                 "idempotent": fd_is_indecomposable(G, seed)[1].idempotent.tolist()})
    for i, j in itertools.combinations(range(len(family)), 2):
        rep.pairs_checked += 1
        if fd_iso_test(family[i].matrix_module(), family[j].matrix_module(), seed):
            continue
        if fd_iso_test(images[i], images[j], seed):
            rep.reflects_ok = False
            h = find_iso(images[i], images[j], seed=seed)
            rep.failures.append({"check": "reflects", "pair": [i, j],
                                 "labels": [family[i].label, family[j].label],
                                 "iso": None if h is None else h.tolist()})
    for k, N in enumerate(family):
        seq = socle_sequence(N)
        if seq is None:
            continue
        S, Q, inc, proj = seq
        rep.sequences_checked += 1
        GS, GN, GQ = apply(Z, S), apply(Z, N), apply(Z, Q)
        fi, fp = apply_map(Z, inc, S, N), apply_map(Z, proj, N, Q)
        if not (intertwines(fi, GS, GN) and intertwines(fp, GN, GQ)):
            rep.functorial_ok = False
            rep.failures.append({"check": "functorial", "member": k, "label": N.label})
        F = Z.algebra.field
        if not is_exact(fi, fp, F):
            rep.exact_ok = False
            rep.failures.append({"check": "exact", "member": k, "label": N.label,
                                 "inclusion": fi.tolist(), "projection": fp.tolist()})
    return rep


@dataclass
class ControlReport:
    sample: str
    c: int
    c_prime: int
    rows: list[tuple[str, int, int]]

    def holds(self) -> bool:
        return all(a <= self.c * b and b <= self.c_prime * a for _, a, b in self.rows)

    def to_json(self) -> dict:
        return {"sample": self.sample, "c": self.c, "c_prime": self.c_prime,
                "rows": [{"label": l, "endol": a, "endol_image": b} for l, a, b in self.rows]}


def control_constants(Z: EmbeddingBimodule, family: Sequence[PidModule], sample: str = "") -> ControlReport:
    rows = []
    for N in family:
        a = fd_endolength(N.matrix_module())
        b = fd_endolength(apply(Z, N))
        rows.append((N.label, a, b))
    c = max((math.ceil(a / b) for _, a, b in rows if b), default=1)
    cp = max((math.ceil(b / a) for _, a, b in rows if a), default=1)
    return ControlReport(sample or f"{len(rows)} modules", c, cp, rows)


@dataclass
class FormulaRow:
    n: int
    dim: int
    endol: int
    residue_dim: int
    dim_ok: bool
    endol_ok: bool
    residue_ok: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class FormulaTable:
    atom: str
    full_on_sample: bool
    rows: list[FormulaRow]
    message: str = ""

    @property
    def holds(self) -> bool:
        return self.full_on_sample and all(r.dim_ok and r.endol_ok and r.residue_ok for r in self.rows)

    def to_json(self) -> dict:
        return {"atom": self.atom, "full_on_sample": self.full_on_sample, "holds": self.holds,
                "message": self.message, "rows": [r.to_json() for r in self.rows]}


def image_endolength_formula(Z: EmbeddingBimodule, p: Atom, n_max: int, seed: int = 0) -> FormulaTable:
    """dim G(E_n) = n dim G(E_1) and Endol G(E_n) = n Endol G(E_1), after a fullness precheck."""
    mods = [indec_module(p, n, seed) for n in range(1, n_max + 1)]
    imgs = [apply(Z, N) for N in mods]
    full = True
    for i in range(len(mods)):
        for j in range(len(mods)):
            if len(hom_space(mods[i].matrix_module(), mods[j].matrix_module())) != len(hom_space(imgs[i], imgs[j])):
                full = False
    table = FormulaTable(repr(p.poly), full, [])
    if not full:
        table.message = "Hom dimensions differ on the sample: the functor is not full here; formula not asserted"
        return table
    d1, e1, k1 = imgs[0].dim, fd_endolength(imgs[0], seed), fd_residue_dim(imgs[0])
    for n, G in enumerate(imgs, start=1):
        e, k = fd_endolength(G, seed), fd_residue_dim(G)
        table.rows.append(FormulaRow(n, G.dim, e, k, G.dim == n * d1, e == n * e1, k == k1))
    table.message = "verified on sample"
    return table
