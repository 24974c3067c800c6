"""EBTII witnesses: many pairwise non-isomorphic indecomposables of one endolength, for growing endolengths.

"Infinitely many" is read as "as many as asked for below a degree cap": a
family is certified exactly for what it contains.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .embed import EmbeddingBimodule, apply, control_constants, verify_embedding
from .fdmod import endolength as fd_endolength
from .fdmod import is_indecomposable as fd_is_indecomposable
from .fdmod import iso_test as fd_iso_test
from .skewpid import PidModule, SkewRing, indec_module, list_atoms

DEFAULT_MAX_DEG = 6


class EbtiiError(RuntimeError):
    pass


@dataclass
class WitnessFamily:
    level: int
    endolength: int
    members: list
    over: str                      # "Gamma" or "Lambda"
    certificate: dict = dc_field(default_factory=dict)
    info: dict = dc_field(default_factory=dict)

    def __len__(self):
        return len(self.members)

    @property
    def labels(self) -> list[str]:
        return [M.label for M in self.members]

    def manifest(self) -> dict:
        return {"level": self.level, "endolength": self.endolength, "over": self.over,
                "size": len(self.members), "members": self.labels,
                "certificates": self.certificate, "info": self.info}


def _as_fd(M):
    return M.matrix_module() if isinstance(M, PidModule) else M


def certify(members: Sequence, seed: int = 0) -> dict:
    """Indecomposability, pairwise non-isomorphism and endolength of each member, from scratch."""
    indec, endols = [], []
    for M in members:
        X = _as_fd(M)
        indec.append(bool(fd_is_indecomposable(X, seed)[0]))
        endols.append(int(fd_endolength(X, seed)))
    iso_pairs = [[i, j] for i, j in itertools.combinations(range(len(members)), 2)
                 if fd_iso_test(_as_fd(members[i]), _as_fd(members[j]), seed)]
    return {"seed": seed, "indecomposable": indec, "endolengths": endols, "isomorphic_pairs": iso_pairs,
            "ok": all(indec) and not iso_pairs and len(set(endols)) <= 1}


def _largest_bucket(pairs):
    """Group (endolength, item) pairs; largest group, ties to the smaller endolength."""
    buckets: dict[int, list] = {}
    for e, item in pairs:
        buckets.setdefault(e, []).append(item)
    if not buckets:
        return None, []
    e = min(buckets, key=lambda k: (-len(buckets[k]), k))
    return e, buckets[e]


def pid_witnesses(R: SkewRing, n: int, count: int, max_deg: int = DEFAULT_MAX_DEG,
                  seed: int = 0) -> WitnessFamily:
    """{E_n^p} over pairwise non-similar atoms p, all of one endolength."""
    if count <= 0:
        return WitnessFamily(n, 0, [], "Gamma", certify([], seed))
    for deg in range(1, max_deg + 1):
        atoms = [a for a in list_atoms(R, deg) if n * a.deg * R.m <= 256]
        mods = [indec_module(a, n, seed) for a in atoms]
        e, bucket = _largest_bucket((fd_endolength(M.matrix_module(), seed), M) for M in mods)
        if len(bucket) >= count:
            members = bucket[:count]
            return WitnessFamily(n, e, members, "Gamma", certify(members, seed),
                                 {"max_atom_degree": deg, "atoms": [repr(M.atom.poly) for M in members]})
    raise EbtiiError(f"only {len(bucket)} non-similar atoms of one endolength up to degree {max_deg}; "
                     f"{count} requested")


def push_witnesses(Z: EmbeddingBimodule, fam: WitnessFamily, seed: int = 0) -> WitnessFamily:
    """Images under Z (x) -, cut down to the largest equal-endolength bucket."""
    if not fam.members:
        return WitnessFamily(fam.level, 0, [], "Lambda", certify([], seed))
    rep = verify_embedding(Z, fam.members, seed)
    if not rep.passed:
        raise EbtiiError(f"embedding failed verification on the family: {rep.failures[:1]}")
    ctrl = control_constants(Z, fam.members)
    imgs = [apply(Z, M) for M in fam.members]
    e, bucket = _largest_bucket((fd_endolength(G, seed), G) for G in imgs)
    info = {"c": ctrl.c, "c_prime": ctrl.c_prime, "source_endolength": fam.endolength,
            "bound_ok": e <= ctrl.c_prime * fam.endolength and fam.endolength <= ctrl.c * e}
    return WitnessFamily(fam.level, e, bucket, "Lambda", certify(bucket, seed), info)


@dataclass
class Ladder:
    families: list[WitnessFamily]
    gap: str
    message: str = ""

    @property
    def endolengths(self) -> list[int]:
        return [f.endolength for f in self.families]

    @property
    def strictly_increasing(self) -> bool:
        e = self.endolengths
        return all(a < b for a, b in zip(e, e[1:]))

    def manifest(self) -> dict:
        return {"gap": self.gap, "endolengths": self.endolengths, "message": self.message,
                "families": [f.manifest() for f in self.families]}


def ebtii_ladder(Z: EmbeddingBimodule, levels: Sequence[int], count: int = 10, max_deg: int = DEFAULT_MAX_DEG,
                 gap: str = "measured", max_level: int = 16, seed: int = 0) -> Ladder:
    """One certified family over Lambda per level, endolengths strictly increasing.

    gap="measured": the next image endolength must exceed c times the last one
    (c measured on the previous family).  gap="source": the next source
    endolength must exceed c times the last image endolength, the stronger
    rule used in the transfer argument.  Levels failing the rule are raised
    until it holds or max_level is passed.
    """
    levels = list(levels)
    if any(a >= b for a, b in zip(levels, levels[1:])):
        raise EbtiiError("levels must be strictly increasing")
    if gap not in ("measured", "source"):
        raise EbtiiError(f"unknown gap rule {gap!r}")
    out: list[WitnessFamily] = []
    n = 0
    for want in levels:
        n = max(want, n + 1)
        while True:
            if n > max_level:
                return Ladder(out, gap, f"level cap {max_level} reached before the next gap")
            try:
                src = pid_witnesses(Z.ring, n, count, max_deg, seed)
            except EbtiiError as e:
                return Ladder(out, gap, str(e))
            img = push_witnesses(Z, src, seed)
            if not out or _gap_ok(gap, src, img, out[-1]):
                break
            n += 1
        if len(img) < count:
            return Ladder(out, gap, f"level {n}: only {len(img)} images share one endolength")
        out.append(img)
    return Ladder(out, gap, "ok")


def _gap_ok(gap: str, src: WitnessFamily, img: WitnessFamily, last: WitnessFamily) -> bool:
    c = last.info["c"]
    if gap == "source":
        return src.endolength > c * last.endolength
    return img.endolength > c * last.endolength
