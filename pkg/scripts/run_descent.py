"""Run the reduction descent on the bundled layers and print each trace."""

import argparse
from dataclasses import dataclass

from bocskit import fixtures
from bocskit.ditalg import DitModule, Gen, Layer
from bocskit.ditalg.descent import descend


@dataclass
class Config:
    with_family: bool = True
    max_steps: int = 20


def cases(cfg: Config):
    yield "delta(w) = u", Layer.from_json(fixtures.load("layer_delta_w_u.json")), None
    K = Layer.from_json(fixtures.load("layer_kronecker_f3.json"))
    fam = None
    if cfg.with_family:
        fam = [DitModule.from_json(m, K) for m in fixtures.load("family_kronecker_f3.json")["modules"]]
    yield "Kronecker over F_3", K, fam
    yield "loop next to an arrow", Layer(3, (1, 1), (Gen("l", 0, 0), Gen("a", 0, 1))), None


def main(cfg: Config):
    for name, A, fam in cases(cfg):
        tr = descend(A, family=fam, max_steps=cfg.max_steps)
        print(f"== {name}: status {tr.status}, {len(tr.steps)} steps, q = {tr.q}")
        for s in tr.steps:
            drops = ", ".join(f"{b}->{a}" for a, b in s.enorms[:5])
            print(f"   {s.case:40s} strict={s.strict} verified={s.verified}  {drops}")
        if tr.minimal_generator:
            print(f"   minimal generator {tr.minimal_generator}, infinite {tr.minimal_infinite}")
        if tr.message:
            print(f"   {tr.message}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--no-family", action="store_true", help="run the Kronecker case without its family")
    ap.add_argument("--max-steps", type=int, default=20)
    a = ap.parse_args()
    main(Config(not a.no_family, a.max_steps))
