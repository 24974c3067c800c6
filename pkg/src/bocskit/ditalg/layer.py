"""Layers (R, W) of admissible ditalgebras over a prime field and their modules.

R = D_1 x ... x D_n with D_i = F_{p^{d_i}}.  A degree-0 or degree-1 generator
g : i -> j spans either the free bimodule D_j (x)_k D_i ("free", k-dimension
d_i d_j) or, when d_i = d_j, the simple bimodule D with g*b = s^t(b)*g
("twisted" with exponent t).  A module gives each vertex i a D_i-space
e_iM, stored over F_p in a basis where D_i acts block-diagonally, and each
degree-0 generator a matrix e_iM -> e_jM.

Conventions.  A morphism (f0, f1): M -> N satisfies, for every degree-0
generator w with delta(w) = sum c*A*u*B,

    f0_j W^M - W^N f0_i = sum c * A^N f1(u) B^M,

and composition is (gf)0 = g0 f0 and
(gf)1(u) = g0 f1(u) + g1(u) f0 - sum c * A g1(u1) B f1(u2) C over
delta(u) = sum c*A*u1*B*u2*C.  With delta extended as a graded derivation
these are compatible exactly when delta^2 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace
from functools import reduce
from typing import Sequence

import numpy as np

from ..exactalg.algebra import FdAlgebra, LocalData, local_data
from ..exactalg.fields import gf
from ..exactalg.linalg import (eye, is_invertible, is_nilpotent, matmul, nullspace,
                               rank, rref, zeros)
from ..fdmod import Inconclusive
from . import words as W

DIT_DIM_CAP = 96


class DitError(ValueError):
    pass


@dataclass(frozen=True)
class Gen:
    label: str
    src: int
    tgt: int
    level: int = 1
    twist: int | None = None  # None: free bimodule

    def to_json(self) -> dict:
        out = {"label": self.label, "src": self.src, "tgt": self.tgt, "level": self.level}
        if self.twist is not None:
            out["twist"] = self.twist
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Gen":
        return cls(d["label"], int(d["src"]), int(d["tgt"]), int(d.get("level", 1)),
                   None if d.get("twist") is None else int(d["twist"]))


@dataclass(frozen=True, eq=False)
class Layer:
    p: int
    fields: tuple[int, ...]
    w0: tuple[Gen, ...]
    w1: tuple[Gen, ...] = ()
    delta: dict = dc_field(default_factory=dict)
    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(int(d) for d in self.fields))
        object.__setattr__(self, "w0", tuple(self.w0))
        object.__setattr__(self, "w1", tuple(self.w1))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"e{i + 1}" for i in range(len(self.fields))))
        labels = [g.label for g in self.w0 + self.w1]
        if len(set(labels)) != len(labels):
            raise DitError("generator labels must be distinct")
        for g in self.w0 + self.w1:
            if not (0 <= g.src < self.n and 0 <= g.tgt < self.n):
                raise DitError(f"generator {g.label} has a vertex out of range")
            if g.twist is not None and self.fields[g.src] != self.fields[g.tgt]:
                raise DitError(f"twisted generator {g.label} needs equal field degrees")
        object.__setattr__(self, "_gens", {g.label: g for g in self.w0 + self.w1})
        delta = {k: self.normalize(v) for k, v in self.delta.items()}
        object.__setattr__(self, "delta", {k: v for k, v in delta.items() if v})

    # -- basic data --
    @property
    def n(self) -> int:
        return len(self.fields)

    @property
    def c(self) -> int:
        return reduce(math.lcm, self.fields, 1)

    def c_i(self, i: int) -> int:
        return self.c // self.fields[i]

    def field(self, v: int):
        return gf(self.p, self.fields[v])

    def gen(self, label: str) -> Gen:
        return self._gens[label]

    def kinds(self) -> dict:
        return {**{g.label: "w" for g in self.w0}, **{g.label: "u" for g in self.w1}}

    def bimodule_dim(self, g: Gen) -> int:
        ds, dt = self.fields[g.src], self.fields[g.tgt]
        return ds if g.twist is not None else ds * dt

    def is_simple(self, g: Gen) -> bool:
        return g.twist is not None or math.gcd(self.fields[g.src], self.fields[g.tgt]) == 1

    def w0_dim(self, i: int, j: int) -> int:
        """dim_k e_i W0 e_j (generators j -> i)."""
        return sum(self.bimodule_dim(g) for g in self.w0 if g.tgt == i and g.src == j)

    def dim_w0(self) -> int:
        return sum(self.bimodule_dim(g) for g in self.w0)

    def delta_of(self, label: str) -> W.Sum:
        return self.delta.get(label, {})

    # -- words --
    def _ends(self, l) -> tuple[int, int]:
        if l[0] in ("w", "u"):
            g = self._gens[l[1]]
            return g.src, g.tgt
        return l[1], l[1]

    def normalize(self, s: W.Sum) -> W.Sum:
        out: W.Sum = {}
        for word, coef in s.items():
            r = self._normalize_word(tuple(word), coef)
            if r is not None:
                W.add_into(out, r[0], r[1], self.p)
        return out

    def _normalize_word(self, word, coef):
        p = self.p
        coef %= p
        if coef == 0:
            return None
        for k in range(len(word) - 1):
            if self._ends(word[k])[0] != self._ends(word[k + 1])[1]:
                return None
        anchor = self._ends(word[-1])[0] if word else None
        word = list(word)
        changed = True
        while changed:
            changed = False
            for k in range(len(word) - 1):
                a, b = word[k], word[k + 1]
                if a[0] in ("w", "u") and b[0] == "c":
                    g = self._gens[a[1]]
                    if g.twist is not None:
                        F = self.field(g.src)
                        word[k], word[k + 1] = ("c", g.tgt, int(F.frobenius(b[2], g.twist))), a
                        changed = True
        merged = []
        for l in word:
            if l[0] == "c" and merged and merged[-1][0] == "c":
                F = self.field(l[1])
                merged[-1] = ("c", l[1], int(F.mul(merged[-1][2], l[2])))
            else:
                merged.append(l)
        final = []
        for l in merged:
            if l[0] == "c":
                if l[2] == 0:
                    return None
                if l[2] < p:
                    coef = coef * l[2] % p
                    continue
            final.append(l)
        if len(final) > 1:
            final = [l for l in final if l[0] != "e"]
        if not final and anchor is not None:
            final = [("e", anchor)]
        return tuple(final), coef

    def word_ends(self, word) -> tuple[int, int]:
        return self._ends(word[-1])[0], self._ends(word[0])[1]

    def d(self, s: W.Sum) -> W.Sum:
        """delta extended to words as a graded derivation."""
        out: W.Sum = {}
        for word, coef in s.items():
            deg = 0
            for k, l in enumerate(word):
                if l[0] in ("w", "u"):
                    dl = self.delta.get(l[1])
                    if dl:
                        sign = -1 if deg % 2 else 1
                        pre, post = {word[:k]: 1}, {word[k + 1:]: 1}
                        term = W.concat(W.concat(pre, dl, self.p), post, self.p)
                        out = W.add(out, term, self.p, sign * coef)
                if l[0] == "u":
                    deg += 1
        return self.normalize(out)

    def delta_squared(self, label: str) -> W.Sum:
        return self.d(self.delta_of(label))

    # -- validation --
    def check(self) -> list[str]:
        """List of violated layer conditions (empty when admissible)."""
        problems = []
        levels = {g.label: g.level for g in self.w0}
        for g in self.w0 + self.w1:
            want = 1 if g in self.w0 else 2
            for word in self.delta_of(g.label):
                if W.degree(word) != want:
                    problems.append(f"delta({g.label}) has a term of degree {W.degree(word)}")
                if self.word_ends(word) != (g.src, g.tgt):
                    problems.append(f"delta({g.label}) has a term with the wrong ends")
                if g in self.w0:
                    for l in word:
                        if l[0] == "w" and levels[l[1]] >= g.level:
                            problems.append(f"delta({g.label}) uses {l[1]} of level {levels[l[1]]} >= {g.level}")
                if g.twist is not None:
                    tw = 0
                    for l in word:
                        if l[0] in ("w", "u"):
                            h = self._gens[l[1]]
                            if h.twist is None:
                                problems.append(f"delta({g.label}) mixes a free letter into a twisted generator")
                                break
                            tw += h.twist
                    else:
                        if tw % self.fields[g.src] != g.twist % self.fields[g.src]:
                            problems.append(f"delta({g.label}) has the wrong total twist")
            if self.delta_squared(g.label):
                problems.append(f"delta^2({g.label}) != 0")
        return problems

    def validate(self) -> "Layer":
        probs = self.check()
        if probs:
            raise DitError("; ".join(sorted(set(probs))))
        return self

    def relevel(self) -> "Layer":
        """Recompute filtration levels as dependency depths of delta."""
        deps = {g.label: {l[1] for word in self.delta_of(g.label) for l in word if l[0] == "w"} for g in self.w0}
        level: dict[str, int] = {}
        todo = [g.label for g in self.w0]
        while todo:
            progress = False
            for lab in list(todo):
                if all(d in level for d in deps[lab]):
                    level[lab] = 1 + max((level[d] for d in deps[lab]), default=0)
                    todo.remove(lab)
                    progress = True
            if not progress:
                raise DitError("delta is not triangular")
        return replace(self, w0=tuple(replace(g, level=level[g.label]) for g in self.w0))

    # -- serialisation --
    def to_json(self) -> dict:
        return {"p": self.p, "fields": list(self.fields), "names": list(self.names),
                "w0": [g.to_json() for g in self.w0], "w1": [g.to_json() for g in self.w1],
                "delta": {k: W.sum_to_json(v) for k, v in sorted(self.delta.items())}}

    @classmethod
    def from_json(cls, data: dict) -> "Layer":
        w0 = tuple(Gen.from_json(g) for g in data.get("w0", []))
        w1 = tuple(Gen.from_json({**g, "level": 0}) for g in data.get("w1", []))
        kinds = {**{g.label: "w" for g in w0}, **{g.label: "u" for g in w1}}
        p = int(data.get("p", 2))
        delta = {k: W.sum_from_json(v, kinds, p) for k, v in data.get("delta", {}).items()}
        return cls(p, tuple(data["fields"]), w0, w1, delta, tuple(data.get("names", ())))

    def __repr__(self):
        return f"Layer(p={self.p}, fields={self.fields}, W0={[g.label for g in self.w0]}, W1={[g.label for g in self.w1]})"


# -- modules --

def scalar_matrix(A: Layer, v: int, elem: int, ell: int) -> np.ndarray:
    F = A.field(v)
    B = F.mult_matrix(elem)
    d = A.fields[v]
    out = zeros(d * ell, d * ell)
    for k in range(ell):
        out[k * d:(k + 1) * d, k * d:(k + 1) * d] = B
    return out


def semilinear_block(A: Layer, g: Gen, elem: int) -> np.ndarray:
    """F_p-matrix of d -> elem * s^twist(d) on D (twisted generators)."""
    F = A.field(g.src)
    n = F.n
    cols = [F.to_digits(F.mul(elem, F.frobenius(F.from_digits([0] * j + [1]), g.twist))) for j in range(n)]
    return np.array(cols, dtype=np.int64).T


@dataclass(frozen=True, eq=False)
class DitModule:
    layer: Layer
    dims: tuple[int, ...]
    actions: dict
    label: str = ""
    _cache: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        A = self.layer
        dims = tuple(int(x) for x in self.dims)
        if len(dims) != A.n:
            raise DitError("one length per vertex is required")
        object.__setattr__(self, "dims", dims)
        acts = {}
        for g in A.w0:
            shape = (self.space_dim(g.tgt), self.space_dim(g.src))
            m = self.actions.get(g.label)
            m = zeros(*shape) if m is None else np.asarray(m, dtype=np.int64).reshape(shape) % A.p
            m.setflags(write=False)
            acts[g.label] = m
        object.__setattr__(self, "actions", acts)
        if self.dim > DIT_DIM_CAP:
            raise DitError(f"module dimension {self.dim} exceeds cap {DIT_DIM_CAP}")

    def space_dim(self, v: int) -> int:
        return self.layer.fields[v] * self.dims[v]

    @property
    def dim(self) -> int:
        return sum(self.space_dim(v) for v in range(self.layer.n))

    def is_sincere(self) -> bool:
        return all(self.dims)

    def support(self) -> list[int]:
        return [v for v in range(self.layer.n) if self.dims[v]]

    def d_action(self, v: int) -> np.ndarray:
        key = ("C", v)
        if key not in self._cache:
            A = self.layer
            self._cache[key] = scalar_matrix(A, v, A.field(v).generator, self.dims[v])
        return self._cache[key]

    def scalar(self, v: int, elem: int) -> np.ndarray:
        key = ("c", v, elem)
        if key not in self._cache:
            self._cache[key] = scalar_matrix(self.layer, v, elem, self.dims[v])
        return self._cache[key]

    def check(self) -> bool:
        """Twisted generators act semilinearly."""
        A = self.layer
        Fp = gf(A.p)
        for g in A.w0:
            if g.twist is None or A.fields[g.src] == 1:
                continue
            F = A.field(g.src)
            X = self.actions[g.label]
            lhs = matmul(X, self.d_action(g.src), Fp)
            rhs = matmul(self.scalar(g.tgt, int(F.frobenius(F.generator, g.twist))), X, Fp)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def eval_word(self, word) -> np.ndarray:
        """Matrix of a degree-0 word."""
        A = self.layer
        Fp = gf(A.p)
        out = None
        for l in reversed(word):
            if l[0] == "w":
                m = self.actions[l[1]]
            elif l[0] == "c":
                m = self.scalar(l[1], l[2])
            elif l[0] == "e":
                m = eye(self.space_dim(l[1]))
            else:
                raise DitError("degree-1 letter in a degree-0 word")
            out = m if out is None else matmul(m, out, Fp)
        return out

    def to_json(self) -> dict:
        return {"layer": self.layer.to_json(), "dims": list(self.dims), "label": self.label,
                "actions": {k: v.tolist() for k, v in sorted(self.actions.items())}}

    @classmethod
    def from_json(cls, data: dict, layer: Layer | None = None) -> "DitModule":
        A = layer or Layer.from_json(data["layer"])
        M = cls(A, tuple(data["dims"]), {k: np.array(v, dtype=np.int64) for k, v in data["actions"].items()},
                data.get("label", ""))
        if not M.check():
            raise DitError("module violates the twisted-generator semilinearity")
        return M


def random_action(A: Layer, g: Gen, dims: Sequence[int], rng: np.random.Generator, density: float = 1.0) -> np.ndarray:
    ds, dt = A.fields[g.src], A.fields[g.tgt]
    ls, lt = dims[g.src], dims[g.tgt]
    if g.twist is None:
        m = rng.integers(0, A.p, (dt * lt, ds * ls))
        if density < 1:
            m = m * (rng.random(m.shape) < density)
        return m.astype(np.int64)
    F = A.field(g.src)
    out = zeros(dt * lt, ds * ls)
    for a in range(lt):
        for b in range(ls):
            if rng.random() < density:
                e = int(rng.integers(0, F.q))
                out[a * dt:(a + 1) * dt, b * ds:(b + 1) * ds] = semilinear_block(A, g, e)
    return out


def random_module(A: Layer, dims: Sequence[int], rng: np.random.Generator, density: float = 1.0) -> DitModule:
    return DitModule(A, tuple(dims), {g.label: random_action(A, g, dims, rng, density) for g in A.w0})


# -- morphisms --

@dataclass
class _Layout:
    offsets0: list[int]
    shapes0: list[tuple[int, int]]
    offsets1: dict
    shapes1: dict
    size: int


def _layout(M: DitModule, N: DitModule) -> _Layout:
    A = M.layer
    off, o0, s0 = 0, [], []
    for v in range(A.n):
        o0.append(off)
        s0.append((N.space_dim(v), M.space_dim(v)))
        off += s0[-1][0] * s0[-1][1]
    o1, s1 = {}, {}
    for g in A.w1:
        o1[g.label] = off
        s1[g.label] = (N.space_dim(g.tgt), M.space_dim(g.src))
        off += s1[g.label][0] * s1[g.label][1]
    return _Layout(o0, s0, o1, s1, off)


@dataclass(frozen=True, eq=False)
class DitMorphism:
    f0: tuple[np.ndarray, ...]
    f1: dict

    def vector(self) -> np.ndarray:
        parts = [m.reshape(-1) for m in self.f0] + [self.f1[k].reshape(-1) for k in sorted(self.f1)]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def unpack(vec: np.ndarray, M: DitModule, N: DitModule) -> DitMorphism:
    L = _layout(M, N)
    f0 = tuple(vec[o:o + r * c].reshape(r, c) for o, (r, c) in zip(L.offsets0, L.shapes0))
    f1 = {k: vec[L.offsets1[k]:L.offsets1[k] + L.shapes1[k][0] * L.shapes1[k][1]].reshape(L.shapes1[k])
          for k in L.offsets1}
    return DitMorphism(f0, f1)


def pack(f: DitMorphism, M: DitModule, N: DitModule) -> np.ndarray:
    L = _layout(M, N)
    out = np.zeros(L.size, dtype=np.int64)
    for o, m in zip(L.offsets0, f.f0):
        out[o:o + m.size] = m.reshape(-1)
    for k, o in L.offsets1.items():
        out[o:o + f.f1[k].size] = f.f1[k].reshape(-1)
    return out


def _split_at_u(word):
    k = next(i for i, l in enumerate(word) if l[0] == "u")
    return word[:k], word[k][1], word[k + 1:]


def hom_system(M: DitModule, N: DitModule) -> np.ndarray:
    """Matrix whose kernel is the space of morphisms M -> N (packed)."""
    A = M.layer
    if N.layer is not A:
        raise DitError("modules over different layers")
    p = A.p
    L = _layout(M, N)
    blocks = []

    def row(size):
        return np.zeros((size, L.size), dtype=np.int64)

    for v in range(A.n):
        if A.fields[v] > 1 and M.dims[v] and N.dims[v]:
            nN, nM = L.shapes0[v]
            r = row(nN * nM)
            o = L.offsets0[v]
            r[:, o:o + nN * nM] = (np.kron(eye(nN), M.d_action(v).T) - np.kron(N.d_action(v), eye(nM))) % p
            blocks.append(r)
    for g in A.w1:
        r0, c0 = L.shapes1[g.label]
        if g.twist is not None and A.fields[g.src] > 1 and r0 and c0:
            F = A.field(g.src)
            sC = N.scalar(g.tgt, int(F.frobenius(F.generator, g.twist)))
            r = row(r0 * c0)
            o = L.offsets1[g.label]
            r[:, o:o + r0 * c0] = (np.kron(eye(r0), M.d_action(g.src).T) - np.kron(sC, eye(c0))) % p
            blocks.append(r)
    for g in A.w0:
        i, j = g.src, g.tgt
        nNj, nMi = N.space_dim(j), M.space_dim(i)
        if not nNj or not nMi:
            continue
        r = row(nNj * nMi)
        oj, oi = L.offsets0[j], L.offsets0[i]
        r[:, oj:oj + nNj * M.space_dim(j)] += np.kron(eye(nNj), M.actions[g.label].T)
        r[:, oi:oi + N.space_dim(i) * nMi] -= np.kron(N.actions[g.label], eye(nMi))
        for word, coef in A.delta_of(g.label).items():
            left, u, right = _split_at_u(word)
            Am = N.eval_word(left) if left else eye(nNj)
            Bm = M.eval_word(right) if right else eye(nMi)
            o = L.offsets1[u]
            size = L.shapes1[u][0] * L.shapes1[u][1]
            if size:
                r[:, o:o + size] -= coef * np.kron(Am, Bm.T)
        blocks.append(r % p)
    if not blocks:
        return np.zeros((0, L.size), dtype=np.int64)
    return np.vstack(blocks) % p


def dit_hom(M: DitModule, N: DitModule) -> np.ndarray:
    """Rows: a basis of Hom(M, N) as packed (f0, f1) vectors."""
    key = ("hom", id(N))
    if key in M._cache and M._cache[key][0] is N:
        return M._cache[key][1]
    S = hom_system(M, N)
    size = _layout(M, N).size
    H = nullspace(S, gf(M.layer.p)) if size else np.zeros((0, 0), dtype=np.int64)
    M._cache[key] = (N, H)
    return H


def is_morphism(vec: np.ndarray, M: DitModule, N: DitModule) -> bool:
    S = hom_system(M, N)
    return not np.any(matmul(S, np.asarray(vec).reshape(-1, 1), gf(M.layer.p)))


def compose(g: np.ndarray, f: np.ndarray, M: DitModule, N: DitModule, L: DitModule) -> np.ndarray:
    """g o f for f: M -> N, g: N -> L (packed vectors)."""
    A = M.layer
    Fp = gf(A.p)
    fm, gm = unpack(f, M, N), unpack(g, N, L)
    h0 = tuple(matmul(gm.f0[v], fm.f0[v], Fp) for v in range(A.n))
    h1 = {}
    for u in A.w1:
        lab = u.label
        acc = (matmul(gm.f0[u.tgt], fm.f1[lab], Fp) + matmul(gm.f1[lab], fm.f0[u.src], Fp)) % A.p
        for word, coef in A.delta_of(lab).items():
            k1 = next(i for i, l in enumerate(word) if l[0] == "u")
            k2 = next(i for i in range(k1 + 1, len(word)) if word[i][0] == "u")
            a, b, c = word[:k1], word[k1 + 1:k2], word[k2 + 1:]
            term = gm.f1[word[k1][1]]
            if a:
                term = matmul(L.eval_word(a), term, Fp)
            if b:
                term = matmul(term, N.eval_word(b), Fp)
            term = matmul(term, fm.f1[word[k2][1]], Fp)
            if c:
                term = matmul(term, M.eval_word(c), Fp)
            acc = (acc - coef * term) % A.p
        h1[lab] = acc
    return pack(DitMorphism(h0, h1), M, L)


def identity(M: DitModule) -> np.ndarray:
    A = M.layer
    f0 = tuple(eye(M.space_dim(v)) for v in range(A.n))
    L = _layout(M, M)
    f1 = {k: zeros(*L.shapes1[k]) for k in L.shapes1}
    return pack(DitMorphism(f0, f1), M, M)


def f0_block(vec: np.ndarray, M: DitModule, N: DitModule) -> np.ndarray:
    """Block-diagonal matrix of the f0 part."""
    from ..exactalg.linalg import block_diag
    return block_diag(*unpack(vec, M, N).f0)


# -- endomorphisms --

@dataclass(frozen=True, eq=False)
class DitEndData:
    basis: np.ndarray
    algebra: FdAlgebra | None
    local: LocalData


def _coordinates(basis: np.ndarray, Fp):
    R, piv = rref(basis, Fp)
    # basis rows are independent; solve through the pivot columns
    from ..exactalg.linalg import inverse
    sub = basis[:, piv]
    inv = inverse(sub.T, Fp)
    return lambda v: matmul(inv, np.asarray(v)[piv].reshape(-1, 1), Fp).reshape(-1)


def end_data(M: DitModule) -> DitEndData:
    if "end" in M._cache:
        return M._cache["end"]
    A = M.layer
    Fp = gf(A.p)
    B = dit_hom(M, M)
    r = B.shape[0]
    if r == 0:
        out = DitEndData(B, None, LocalData(False, 0, 0, 0))
    else:
        coords = _coordinates(B, Fp)
        mul = np.zeros((r, r, r), dtype=np.int64)
        for s in range(r):
            for t in range(r):
                mul[s, t] = coords(compose(B[s], B[t], M, M, M))
        alg = FdAlgebra(Fp, mul, coords(identity(M)))
        out = DitEndData(B, alg, local_data(alg))
    M._cache["end"] = out
    return out


def is_indecomposable(M: DitModule) -> bool:
    return M.dim > 0 and end_data(M).local.is_local


def residue_dim(M: DitModule) -> int:
    """d_M = dim_k of the residue division algebra of End(M) (M indecomposable)."""
    ed = end_data(M)
    if not ed.local.is_local:
        raise DitError("module is not indecomposable")
    return ed.local.k_dim_of_residue


def endolength(M: DitModule) -> int:
    d = residue_dim(M)
    if M.dim % d:
        raise DitError("residue dimension does not divide the module dimension")
    return M.dim // d


def iso_test(M: DitModule, N: DitModule, tries: int = 64, seed: int = 0) -> bool:
    if M.dims != N.dims:
        return False
    Fp = gf(M.layer.p)
    H, G = dit_hom(M, N), dit_hom(N, M)
    if len(H) == 0 or len(G) == 0:
        return False
    if is_indecomposable(M):
        for f in H:
            F0 = f0_block(f, M, N)
            for g in G:
                if not is_nilpotent(matmul(f0_block(g, N, M), F0, Fp), Fp):
                    return True
        return False
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        f = (rng.integers(0, M.layer.p, len(H)) @ H) % M.layer.p
        if is_invertible(f0_block(f, M, N), Fp):
            return True
    raise Inconclusive("no isomorphism found among random morphisms of a decomposable module")


# -- norms --

def norm(A: Layer, M: DitModule) -> int:
    return sum(A.w0_dim(i, j) * M.dims[i] * M.dims[j] for i in range(A.n) for j in range(A.n))


@dataclass(frozen=True)
class EnormReport:
    c: int
    c_i: tuple[int, ...]
    lengths: tuple[int, ...]      # l_{D_i}(e_i M)
    lengths_dm: tuple[int, ...]   # l_{D_M}(e_i M)
    norm: int
    enorm: int
    d_m: int

    def scaling_holds(self) -> bool:
        return self.enorm * self.d_m ** 2 == self.c ** 2 * self.norm

    def to_json(self) -> dict:
        return {"c": self.c, "c_i": list(self.c_i), "lengths": list(self.lengths),
                "lengths_DM": list(self.lengths_dm), "norm": self.norm, "enorm": self.enorm, "d_M": self.d_m}


def enorm(A: Layer, M: DitModule) -> EnormReport:
    if not is_indecomposable(M):
        raise DitError("the e-norm is defined for indecomposable modules only")
    dM = residue_dim(M)
    ldm = []
    for v in range(A.n):
        k = M.space_dim(v)
        if k % dM:
            raise DitError(f"D_M does not act freely on e_{v}M")
        ldm.append(k // dM)
    ci = tuple(A.c_i(i) for i in range(A.n))
    en = sum(ci[i] * ci[j] * A.w0_dim(i, j) * ldm[i] * ldm[j] for i in range(A.n) for j in range(A.n))
    return EnormReport(A.c, ci, M.dims, tuple(ldm), norm(A, M), en, dM)


# -- quasi-minimal layers --

def species_type(A: Layer, g: Gen) -> tuple[int, int]:
    """(dim over the left field, dim over the right field) of the bimodule of g."""
    bd = A.bimodule_dim(g)
    return bd // A.fields[g.tgt], bd // A.fields[g.src]


def minimal_is_infinite(A: Layer, g: Gen) -> bool:
    if g.src == g.tgt:
        return True
    a, b = species_type(A, g)
    return a * b >= 4


def quasi_minimal_generator(A: Layer) -> str | None:
    """Label of a simple degree-0 generator W0' with delta(W0') = 0 making A quasi-minimal."""
    if A.n not in (1, 2):
        return None
    for g in sorted(A.w0, key=lambda g: (g.level, A.w0.index(g))):
        if A.delta_of(g.label) or not A.is_simple(g):
            continue
        if A.n == 1 or g.src != g.tgt:
            return g.label
    return None


def minimal_layer(A: Layer, label: str) -> Layer:
    g = A.gen(label)
    return Layer(A.p, A.fields, (replace(g, level=1),), (), {}, A.names)


def extend_minimal(A: Layer, label: str, N: DitModule) -> DitModule:
    """L_Q E(N): other degree-0 generators act by zero."""
    return DitModule(A, N.dims, {label: N.actions[label]}, N.label)


def end_splitting(A: Layer, label: str, N: DitModule) -> tuple[int, int, int, int]:
    """(dim End(L N), dim End_Q(N), dim E0, dim E1) where E0 = {(f0, 0)} and E1 = {(0, f1)}."""
    LN = extend_minimal(A, label, N)
    H = dit_hom(LN, LN)
    Fp = gf(A.p)
    L = _layout(LN, LN)
    n0 = min(L.offsets1.values()) if L.offsets1 else L.size
    if H.shape[0] == 0:
        return 0, dit_hom(N, N).shape[0], 0, 0
    e0 = H.shape[0] - rank(H[:, n0:], Fp)
    e1 = H.shape[0] - rank(H[:, :n0], Fp)
    return H.shape[0], dit_hom(N, N).shape[0], e0, e1
