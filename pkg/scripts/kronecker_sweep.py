"""Push E_n^p through the Kronecker bimodule and tabulate endolengths and residues."""

import argparse
import itertools
import time
from dataclasses import dataclass

from bocskit.embed import apply, control_constants, kronecker_exemplar, verify_embedding
from bocskit.fdmod import endolength, is_indecomposable, iso_test, residue_dim
from bocskit.skewpid import indec_module, list_atoms


@dataclass
class Config:
    q: int = 3
    max_deg: int = 2
    n_max: int = 3
    seed: int = 0


def main(cfg: Config):
    t0 = time.time()
    L, R, Z = kronecker_exemplar(cfg.q)
    mods = [indec_module(a, n, cfg.seed) for a in list_atoms(R, cfg.max_deg) for n in range(1, cfg.n_max + 1)]
    imgs = [apply(Z, N) for N in mods]
    print(f"{'atom':28s} {'n':>2s} {'dim':>4s} {'Endol':>5s} {'K':>2s} indec")
    for N, G in zip(mods, imgs):
        print(f"{repr(N.atom.poly):28s} {N.length:2d} {G.dim:4d} {endolength(G, cfg.seed):5d} "
              f"{residue_dim(G):2d} {is_indecomposable(G, cfg.seed)[0]}")
    iso = sum(iso_test(G, H, cfg.seed) for G, H in itertools.combinations(imgs, 2))
    rep = verify_embedding(Z, mods, cfg.seed)
    ctrl = control_constants(Z, mods)
    print(f"\n{len(mods)} modules, isomorphic image pairs {iso}, verification passed {rep.passed} "
          f"({rep.sequences_checked} sequences), c = {ctrl.c}, c' = {ctrl.c_prime}, {time.time() - t0:.1f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--max-deg", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    main(Config(a.q, a.max_deg, a.n_max, a.seed))
