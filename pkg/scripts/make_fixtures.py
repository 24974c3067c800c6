"""Regenerate the JSON fixtures bundled under src/bocskit/fixtures."""

import itertools
import json
import pathlib

import numpy as np

from bocskit.ditalg import DitModule, Gen, Layer
from bocskit.embed import kronecker_exemplar
from bocskit.exactalg.algebra import algebra_from_matrices
from bocskit.exactalg.fields import gf
from bocskit.exactalg.linalg import eye, mat_pow, matmul
from bocskit.fdmod import Quiver, path_algebra
from bocskit.skewpid import Atom, SkewRing, indec_module

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "bocskit" / "fixtures"


def dump(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def perm_matrix(perm):
    n = len(perm)
    M = np.zeros((n, n), dtype=np.int64)
    for i, j in enumerate(perm):
        M[j, i] = 1
    return M


def group_algebra(F, perms):
    """Regular representation of the group generated by the given permutations."""
    n = len(perms[0])
    elems = {tuple(range(n))}
    frontier = list(elems)
    while frontier:
        g = frontier.pop()
        for h in perms:
            gh = tuple(h[g[i]] for i in range(n))
            if gh not in elems:
                elems.add(gh)
                frontier.append(gh)
    elems = sorted(elems)
    idx = {g: k for k, g in enumerate(elems)}
    mats = []
    for g in elems:
        # left multiplication on the group basis
        mats.append(perm_matrix([idx[tuple(g[h[i]] for i in range(n))] for h in elems]))
    return algebra_from_matrices(mats, F)[0]


def truncated(F, k):
    J = np.eye(k, k=-1, dtype=np.int64)
    return algebra_from_matrices([mat_pow(J, i, F) for i in range(k)], F)[0]


def span_closure(F, gens, n):
    mats = [eye(n)] + [np.asarray(g, dtype=np.int64) for g in gens]
    while True:
        new = list(mats)
        for a, b in itertools.product(mats, repeat=2):
            new.append(matmul(a, b, F))
        from bocskit.exactalg.linalg import row_basis
        B = row_basis(np.stack([m.reshape(-1) for m in new]), F)
        if B.shape[0] == len(row_basis(np.stack([m.reshape(-1) for m in mats]), F)):
            return algebra_from_matrices(list(B.reshape(-1, n, n)), F)[0]
        mats = list(B.reshape(-1, n, n))


def algebras():
    F2, F3 = gf(2), gf(3)
    c2, c3, c4 = (1, 0), (1, 2, 0), (1, 2, 3, 0)
    s3 = [(1, 0, 2), (1, 2, 0)]
    d4 = [(1, 2, 3, 0), (3, 2, 1, 0)]
    E = lambda i, j, n=3: np.eye(n, dtype=np.int64)[:, [i]] @ np.eye(n, dtype=np.int64)[[j], :]
    out = {
        "f2_c2": group_algebra(F2, [c2]),
        "f2_c3": group_algebra(F2, [c3]),
        "f2_c4": group_algebra(F2, [c4]),
        "f2_c2xc2": group_algebra(F2, [(1, 0, 2, 3), (0, 1, 3, 2)]),
        "f2_s3": group_algebra(F2, s3),
        "f2_d4": group_algebra(F2, d4),
        "f3_c3": group_algebra(F3, [c3]),
        "f3_c2": group_algebra(F3, [c2]),
        "f3_s3": group_algebra(F3, s3),
        "f2_trunc3": truncated(F2, 3),
        "f3_trunc4": truncated(F3, 4),
        "f2_a3_path": path_algebra(Quiver(3, ((0, 1), (1, 2))), F2),
        "f3_kronecker": path_algebra(Quiver(2, ((0, 1), (0, 1))), F3),
        "f2_m2": span_closure(F2, [E(0, 1, 2), E(1, 0, 2)], 2),
        "f3_upper3": span_closure(F3, [E(0, 1), E(1, 2), E(0, 0), E(1, 1)], 3),
        "f2_xy_sq": span_closure(F2, [E(0, 1) , E(0, 2)], 3),
        "f3_m2_x_k": span_closure(F3, [np.block([[np.array(E(0, 1, 2)), np.zeros((2, 1), int)], [np.zeros((1, 3), int)]]),
                                       np.block([[np.array(E(1, 0, 2)), np.zeros((2, 1), int)], [np.zeros((1, 3), int)]])], 3),
    }
    return out


def main():
    for q in (2, 3, 4):
        dump(OUT / f"kronecker_f{q}.json", kronecker_exemplar(q)[2].to_json())
    for name, A in algebras().items():
        A.validate()
        assert A.dim <= 8, name
        dump(OUT / "algebras" / f"{name}.json", A.to_json())
    # the one-loop layer with delta(w) = u
    L = Layer(2, (1,), (Gen("w", 0, 0, 1),), (Gen("u", 0, 0, 1),), {"w": {(("u", "u"),): 1}})
    dump(OUT / "layer_delta_w_u.json", L.to_json())
    K = Layer(3, (1, 1), (Gen("a", 0, 1, 1), Gen("b", 0, 1, 1)), (), {}, ("1", "2"))
    dump(OUT / "layer_kronecker_f3.json", K.to_json())
    fam = [DitModule(K, (1, 1), {"a": np.array([[1]]), "b": np.array([[lam]])}, f"M[{lam}]") for lam in range(3)]
    dump(OUT / "family_kronecker_f3.json", {"modules": [M.to_json() for M in fam]})
    R = SkewRing(2)
    S = indec_module(Atom(R.poly([0, 1])), 1)
    dump(OUT / "simple_module.json", S.to_json())
    dump(OUT / "family_f3_deg3.json", {"max_deg": 3, "levels": [1, 2, 3]})


if __name__ == "__main__":
    main()
