"""The three basic reductions of a layer and their functors on modules.

Each reduction returns a ``Reduction`` carrying the new layer, the functor
F (new modules -> old modules) and a partial inverse that brings an old
module into the image of F when it lies there.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from ..exactalg.fields import gf
from ..exactalg.linalg import (complement_basis, eye, inverse, matmul, nullspace,
                               rank, row_basis, zeros)
from . import words as W
from .layer import DitError, DitModule, Gen, Layer, species_type


@dataclass(frozen=True, eq=False)
class Reduction:
    kind: str                      # "deletion" | "regularization" | "reduction by X"
    source: Layer
    target: Layer
    forward: Callable[[DitModule], DitModule]
    backward: Callable[[DitModule], DitModule | None]
    info: dict


# -- deletion of idempotents --

def delete_idempotents(A: Layer, keep: Sequence[int]) -> Reduction:
    keep = sorted(set(int(v) for v in keep))
    if not keep:
        raise DitError("at least one idempotent must be kept")
    if any(not 0 <= v < A.n for v in keep):
        raise DitError("vertex out of range")
    pos = {v: k for k, v in enumerate(keep)}
    kept = lambda g: g.src in pos and g.tgt in pos
    w0 = tuple(replace(g, src=pos[g.src], tgt=pos[g.tgt]) for g in A.w0 if kept(g))
    w1 = tuple(replace(g, src=pos[g.src], tgt=pos[g.tgt]) for g in A.w1 if kept(g))
    labels = {g.label for g in w0 + w1}

    def relabel(s):
        out = {}
        for word, c in s.items():
            new = []
            for l in word:
                if l[0] in ("w", "u"):
                    if l[1] not in labels:
                        break
                    new.append(l)
                elif l[1] not in pos:
                    break
                else:
                    new.append((l[0], pos[l[1]]) + tuple(l[2:]))
            else:
                W.add_into(out, tuple(new), c, A.p)
        return out

    delta = {k: relabel(v) for k, v in A.delta.items() if k in labels}
    B = Layer(A.p, tuple(A.fields[v] for v in keep), w0, w1, delta, tuple(A.names[v] for v in keep))

    def forward(N: DitModule) -> DitModule:
        dims = [0] * A.n
        for v in keep:
            dims[v] = N.dims[pos[v]]
        return DitModule(A, tuple(dims), {g.label: N.actions[g.label] for g in B.w0}, N.label)

    def backward(M: DitModule) -> DitModule | None:
        if any(M.dims[v] for v in range(A.n) if v not in pos):
            return None
        return DitModule(B, tuple(M.dims[v] for v in keep), {g.label: M.actions[g.label] for g in B.w0}, M.label)

    return Reduction("deletion", A, B, forward, backward, {"keep": keep})


# -- regularization --

def split_off(A: Layer, label: str) -> Layer:
    """Change the basis of W1 so that delta(w) becomes a single generator.

    Works when delta(w) = sum c_k u_k with prime-field coefficients and every
    u_k spanning the same bimodule as w: u_j is replaced by u_j~ = delta(w).
    """
    g = A.gen(label)
    dw = A.delta_of(label)
    if not dw or any(len(word) != 1 or word[0][0] != "u" for word in dw):
        raise DitError(f"delta({label}) does not split off W1")
    us = [A.gen(word[0][1]) for word in dw]
    if any((u.src, u.tgt, u.twist) != (g.src, g.tgt, g.twist) for u in us):
        raise DitError(f"delta({label}) mixes bimodules different from that of {label}")
    if len(dw) == 1:
        return A
    p = A.p
    uj = min(us, key=lambda u: A.w1.index(u))
    cj = dw[(("u", uj.label),)]
    new = uj.label + "~"
    while new in A.kinds():
        new += "~"
    # u_j = cj^-1 (u_j~ - sum_{k != j} c_k u_k)
    inv = pow(int(cj), p - 2, p)
    expr = {(("u", new),): inv}
    for word, c in dw.items():
        if word[0][1] != uj.label:
            W.add_into(expr, word, -c * inv, p)
    rule = lambda l: expr if l == ("u", uj.label) else None
    delta = {k: W.substitute(v, rule, p) for k, v in A.delta.items() if k != uj.label}
    du = {}
    for word, c in dw.items():
        du = W.add(du, A.delta_of(word[0][1]), p, c)
    delta[new] = W.substitute(du, rule, p)
    w1 = tuple(replace(u, label=new) if u.label == uj.label else u for u in A.w1)
    return Layer(p, A.fields, A.w0, w1, {k: v for k, v in delta.items() if v}, A.names)


def regularization_pair(A: Layer, label: str | None = None) -> tuple[str, str, int]:
    """(w, u, c) with delta(w) = c*u, w of lowest level; raises if the precondition fails."""
    cands = sorted(A.w0, key=lambda g: (g.level, A.w0.index(g)))
    g = A.gen(label) if label else cands[0]
    if not A.is_simple(g):
        raise DitError(f"{g.label} does not span a simple bimodule")
    dw = A.delta_of(g.label)
    if not dw:
        raise DitError(f"delta({g.label}) = 0: nothing to regularize")
    if len(dw) != 1:
        raise DitError(f"delta({g.label}) is not a single degree-1 generator")
    (word, c), = dw.items()
    if len(word) != 1 or word[0][0] != "u":
        raise DitError(f"delta({g.label}) does not split off W1")
    u = A.gen(word[0][1])
    if (u.src, u.tgt, u.twist) != (g.src, g.tgt, g.twist):
        raise DitError(f"{u.label} and {g.label} span different bimodules")
    return g.label, u.label, c


def regularize(A: Layer, label: str | None = None) -> Reduction:
    if label is None:
        label = min(A.w0, key=lambda g: (g.level, A.w0.index(g))).label
    A0, A = A, split_off(A, label)
    wl, ul, c = regularization_pair(A, label)
    p = A.p
    cinv = pow(int(c), p - 2, p)

    def drop(s):
        return {w: k for w, k in s.items() if not any(l[0] in ("w", "u") and l[1] in (wl, ul) for l in w)}

    w0 = tuple(g for g in A.w0 if g.label != wl)
    w1 = tuple(g for g in A.w1 if g.label != ul)
    delta = {k: drop(v) for k, v in A.delta.items() if k not in (wl, ul)}
    B = Layer(p, A.fields, w0, w1, delta, A.names)
    order = sorted(A.w0, key=lambda g: (g.level, A.w0.index(g)))

    def forward(N: DitModule) -> DitModule:
        return DitModule(A0, N.dims, dict(N.actions), N.label)

    def gauge(M: DitModule) -> tuple[DitModule, np.ndarray]:
        """Isomorphic module with w acting by zero, and f1(u) of the isomorphism (id, f1)."""
        Fp = gf(p)
        h = (cinv * M.actions[wl]) % p
        acts = {wl: zeros(*M.actions[wl].shape)}
        new = DitModule(A, M.dims, acts)
        for g in order:
            if g.label == wl:
                continue
            X = M.actions[g.label].copy()
            for word, k in A.delta_of(g.label).items():
                left = next(i for i, l in enumerate(word) if l[0] == "u")
                if word[left][1] != ul:
                    continue
                a, b = word[:left], word[left + 1:]
                term = h
                if a:
                    term = matmul(new.eval_word(a), term, Fp)
                if b:
                    term = matmul(term, M.eval_word(b), Fp)
                X = (X - k * term) % p
            acts[g.label] = X
            new = DitModule(A, M.dims, acts)
        return new, h

    def backward(M: DitModule) -> DitModule:
        G, _ = gauge(M)
        return DitModule(B, M.dims, {g.label: G.actions[g.label] for g in w0}, M.label)

    return Reduction("regularization", A0, B, forward, backward,
                     {"removed": (wl, ul), "gauge": gauge, "w1_basis_changed": A is not A0})


# -- reduction by the A2 module X = S1 + S2 + P (+ eR) --

def _is_a2(A: Layer, g: Gen) -> bool:
    return (g.src != g.tgt and A.fields[g.src] == A.fields[g.tgt]
            and g.twist in (0, None) and species_type(A, g) == (1, 1))


def reduce_by_module(A: Layer, label: str | None = None) -> Reduction:
    """Reduce by all indecomposables of T_{D1 x D2}(W0^1) when W0^1 is an A2 bimodule.

    New vertices S1, S2, P replace the ends 1 -> 2 of W0^1; the radical maps
    S2 -> P and P -> S1 become new degree-1 generators.
    """
    cands = sorted(A.w0, key=lambda g: (g.level, A.w0.index(g)))
    g1 = A.gen(label) if label else cands[0]
    if A.delta_of(g1.label):
        raise DitError(f"delta({g1.label}) != 0: reduce by X needs a delta-free initial generator")
    if g1.src == g1.tgt:
        raise DitError(f"{g1.label} is a loop; the initial subalgebra is not A2")
    if not _is_a2(A, g1):
        a, b = species_type(A, g1)
        raise DitError(f"initial species has bimodule dimensions ({a}, {b}); only A2 data (1, 1) with "
                       f"no twist is implemented")
    p = A.p
    v1, v2 = g1.src, g1.tgt
    others = [v for v in range(A.n) if v not in (v1, v2)]
    # new vertex numbering: S1, S2, P, then the other vertices
    S1, S2, P = 0, 1, 2
    new_of = {v: 3 + k for k, v in enumerate(others)}
    comps = {v1: [S1, P], v2: [S2, P], **{v: [new_of[v]] for v in others}}
    d = A.fields[v1]
    fields = (d, d, d) + tuple(A.fields[v] for v in others)
    taken = set(A.names)

    def fresh(base):
        while base in taken:
            base += "'"
        taken.add(base)
        return base

    nS1, nS2, nP = fresh("S1"), fresh("S2"), fresh("P")
    cname = {S1: nS1, S2: nS2, P: nP, **{new_of[v]: A.names[v] for v in others}}
    names = (nS1, nS2, nP) + tuple(A.names[v] for v in others)

    def comp_label(lab, a, b):
        return f"{lab}[{cname[a]}>{cname[b]}]"

    new_w0, new_w1 = [], []
    for g in A.w0:
        if g.label == g1.label:
            continue
        for a in comps[g.src]:
            for b in comps[g.tgt]:
                new_w0.append(Gen(comp_label(g.label, a, b), a, b, g.level, g.twist))
    for g in A.w1:
        for a in comps[g.src]:
            for b in comps[g.tgt]:
                new_w1.append(Gen(comp_label(g.label, a, b), a, b, 0, g.twist))
    vi, vp = f"v[{nS2}>{nP}]", f"v[{nP}>{nS1}]"
    new_w1 += [Gen(vi, S2, P, 0, 0 if d > 1 else None), Gen(vp, P, S1, 0, 0 if d > 1 else None)]
    kinds = {**{g.label: "w" for g in new_w0}, **{g.label: "u" for g in new_w1}}

    def expand(l):
        """Block matrix {(b, a): Sum} for an old letter."""
        if l[0] in ("w", "u"):
            g = A.gen(l[1])
            if g.label == g1.label:
                return {(P, P): {(("e", P),): 1}}
            return {(b, a): {((kinds[comp_label(g.label, a, b)], comp_label(g.label, a, b)),): 1}
                    for a in comps[g.src] for b in comps[g.tgt]}
        v = l[1]
        if l[0] == "c":
            return {(a, a): {(("c", a, l[2]),): 1} for a in comps[v]}
        return {(a, a): {(("e", a),): 1} for a in comps[v]}

    def mat_mul(X, Y):
        out = {}
        for (b, c), s in X.items():
            for (c2, a), t in Y.items():
                if c == c2:
                    out[(b, a)] = W.add(out.get((b, a), {}), W.concat(s, t, p), p)
        return out

    def mat_add(X, Y, k=1):
        out = dict(X)
        for key, s in Y.items():
            out[key] = W.add(out.get(key, {}), s, p, k)
        return out

    def expand_sum(s):
        total = {}
        for word, c in s.items():
            acc = None
            for l in word:
                E = expand(l)
                acc = E if acc is None else mat_mul(acc, E)
            total = mat_add(total, acc, c)
        return total

    H = {v1: {(S1, P): {(("u", vp),): 1}}, v2: {(P, S2): {(("u", vi),): 1}}}
    delta = {}
    for g in A.w0 + A.w1:
        if g.label == g1.label:
            continue
        Wm = expand((("w" if g in A.w0 else "u"), g.label))
        dm = expand_sum(A.delta_of(g.label))
        if g in A.w0:
            dm = mat_add(dm, mat_mul(H.get(g.tgt, {}), Wm), -1)
            dm = mat_add(dm, mat_mul(Wm, H.get(g.src, {})), 1)
        else:
            dm = mat_add(dm, mat_mul(H.get(g.tgt, {}), Wm), -1)
            dm = mat_add(dm, mat_mul(Wm, H.get(g.src, {})), -1)
        for (b, a), s in dm.items():
            if s:
                lab = comp_label(g.label, a, b)
                delta[lab] = W.add(delta.get(lab, {}), s, p)
    B = Layer(p, fields, tuple(new_w0), tuple(new_w1), delta, names).relevel()

    def forward(N: DitModule) -> DitModule:
        """F^X(N): e_1 M = N_S1 + N_P, e_2 M = N_S2 + N_P."""
        dims = [0] * A.n
        dims[v1] = N.dims[S1] + N.dims[P]
        dims[v2] = N.dims[S2] + N.dims[P]
        for v in others:
            dims[v] = N.dims[new_of[v]]
        offs = {}
        for v in range(A.n):
            o = 0
            for a in comps[v]:
                offs[(v, a)] = o
                o += N.space_dim(a)
        acts = {}
        size = lambda v: A.fields[v] * dims[v]
        for g in A.w0:
            X = zeros(size(g.tgt), size(g.src))
            if g.label == g1.label:
                n = N.space_dim(P)
                X[offs[(v2, P)]:offs[(v2, P)] + n, offs[(v1, P)]:offs[(v1, P)] + n] = eye(n)
            else:
                for a in comps[g.src]:
                    for b in comps[g.tgt]:
                        blk = N.actions[comp_label(g.label, a, b)]
                        r0, c0 = offs[(g.tgt, b)], offs[(g.src, a)]
                        X[r0:r0 + blk.shape[0], c0:c0 + blk.shape[1]] = blk
            acts[g.label] = X
        return DitModule(A, tuple(dims), acts, N.label)

    def backward(M: DitModule) -> DitModule:
        """Bring the B-part into normal form and read off N with F^X(N) = M."""
        Fp = gf(p)
        C1, C2 = M.d_action(v1), M.d_action(v2)
        phi = M.actions[g1.label]
        K = nullspace(phi, Fp).T                    # ker phi (a D-subspace)
        Kb = _d_basis(C1, K, Fp, d)
        Cb = _d_extend(C1, Kb, Fp, d)                 # complement of ker phi
        Ib = matmul(phi, Cb, Fp)
        Jb = _d_extend(C2, Ib, Fp, d)
        P1 = np.concatenate([Kb, Cb], axis=1)
        P2 = np.concatenate([Jb, Ib], axis=1)
        Ps = {v1: P1, v2: P2}
        acts = {}
        for g in A.w0:
            X = M.actions[g.label]
            Pi = Ps.get(g.tgt)
            Po = Ps.get(g.src)
            if Pi is not None:
                X = matmul(inverse(Pi, Fp), X, Fp)
            if Po is not None:
                X = matmul(X, Po, Fp)
            acts[g.label] = X
        nd = [0] * B.n
        nd[S1] = Kb.shape[1] // d
        nd[P] = Cb.shape[1] // d
        nd[S2] = Jb.shape[1] // d
        for v in others:
            nd[new_of[v]] = M.dims[v]
        offs = {}
        for v in range(A.n):
            o = 0
            for a in comps[v]:
                offs[(v, a)] = o
                o += A.fields[v] * nd[a]
        nacts = {}
        for g in A.w0:
            if g.label == g1.label:
                continue
            for a in comps[g.src]:
                for b in comps[g.tgt]:
                    r0, c0 = offs[(g.tgt, b)], offs[(g.src, a)]
                    nacts[comp_label(g.label, a, b)] = acts[g.label][r0:r0 + A.fields[g.tgt] * nd[b],
                                                                     c0:c0 + A.fields[g.src] * nd[a]]
        return DitModule(B, tuple(nd), nacts, M.label)

    dim_x = 4 * d + sum(A.fields[v] for v in others)
    return Reduction("reduction by X", A, B, forward, backward,
                     {"generator": g1.label, "X": [nS1, nS2, nP] + [A.names[v] for v in others],
                      "dim_X": dim_x, "W0_prime_nonzero": bool(new_w0)})


def _d_basis(C: np.ndarray, S: np.ndarray, Fp, d: int) -> np.ndarray:
    """Columns v, Cv, ..., C^{d-1}v over a D-basis of the D-stable subspace S."""
    n = C.shape[0]
    cols = np.zeros((n, 0), dtype=np.int64)
    S = np.asarray(S, dtype=np.int64)
    S = S if S.ndim == 2 else S.reshape(n, -1)
    for k in range(S.shape[1]):
        v = S[:, k]
        if rank(np.concatenate([cols, v[:, None]], axis=1), Fp) == cols.shape[1]:
            continue
        blk = [v]
        for _ in range(d - 1):
            blk.append(matmul(C, blk[-1][:, None], Fp).reshape(-1))
        cols = np.concatenate([cols, np.stack(blk, axis=1)], axis=1)
    return cols


def _d_extend(C: np.ndarray, S: np.ndarray, Fp, d: int) -> np.ndarray:
    """D-adapted columns completing span(S) to the whole space (S excluded)."""
    n = C.shape[0]
    cols = np.asarray(S, dtype=np.int64)
    cols = cols if cols.ndim == 2 else cols.reshape(n, -1)
    start = cols.shape[1]
    for k in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[k] = 1
        if rank(np.concatenate([cols, e[:, None]], axis=1), Fp) == cols.shape[1]:
            continue
        blk = [e]
        for _ in range(d - 1):
            blk.append(matmul(C, blk[-1][:, None], Fp).reshape(-1))
        cols = np.concatenate([cols, np.stack(blk, axis=1)], axis=1)
    return cols[:, start:]
