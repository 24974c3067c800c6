"""Random admissible layers with delta^2 = 0 by construction."""

from __future__ import annotations

import numpy as np

from bocskit.ditalg.layer import Gen, Layer, is_indecomposable, random_module


def random_layer(rng: np.random.Generator, max_vertices: int = 3) -> Layer:
    """delta(w) is c*u, or w'*u with w' a delta-free level-1 generator; delta(u) = 0.

    Either shape has delta^2 = 0 because every letter it contains is closed.
    """
    p = int(rng.choice([2, 3]))
    n = int(rng.integers(1, max_vertices + 1))
    fields = tuple(int(rng.choice([1, 1, 2])) for _ in range(n))
    w0, w1, delta = [], [], {}
    for k in range(int(rng.integers(1, 4))):
        s, t = int(rng.integers(n)), int(rng.integers(n))
        twist = None
        if fields[s] == fields[t] > 1 and rng.random() < 0.3:
            twist = int(rng.integers(fields[s]))
        w0.append(Gen(f"a{k}", s, t, 1, twist))
    for k in range(int(rng.integers(0, 3))):
        s, t = int(rng.integers(n)), int(rng.integers(n))
        w = Gen(f"b{k}", s, t, 2)
        u = Gen(f"u{k}", s, t, 1)
        w0.append(w)
        w1.append(u)
        c = int(rng.integers(1, p))
        delta[w.label] = {(("u", u.label),): c}
        firsts = [g for g in w0 if g.level == 1 and g.twist is None and g.tgt == t]
        if firsts and rng.random() < 0.5:
            g = firsts[int(rng.integers(len(firsts)))]
            v = Gen(f"v{k}", s, g.src, 1)
            w1.append(v)
            delta[w.label] = {(("w", g.label), ("u", v.label)): c}
    return Layer(p, fields, tuple(w0), tuple(w1), delta)


def admissible_layers(seed: int, count: int, max_vertices: int = 3) -> list[Layer]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        A = random_layer(rng, max_vertices)
        if not A.check():
            out.append(A)
    return out


def random_indecomposables(A: Layer, rng: np.random.Generator, want: int, max_dim: int = 3,
                           tries: int = 400, sincere: bool = False) -> list:
    out = []
    for _ in range(tries):
        if len(out) >= want:
            break
        lo = 1 if sincere else 0
        dims = tuple(int(rng.integers(lo, max_dim + 1)) for _ in range(A.n))
        if not any(dims):
            continue
        M = random_module(A, dims, rng)
        if is_indecomposable(M):
            out.append(M)
    return out
