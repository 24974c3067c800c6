"""Command-line front end.

    bocskit endolength MODULE.json
    bocskit enorm LAYER.json MODULE.json
    bocskit reduce LAYER.json [--hints JSON] [--family FAMILY.json]
    bocskit embed-verify Z.json FAMILY.json
    bocskit ebtii Z.json --levels 1 2 3 --count 10 --cap 6
    bocskit pid list-atoms|module|ar-seq --field p^m ...

Z.json may be ``kronecker:q`` for the bundled exemplar.  Exit codes: 0 pass,
1 usage or cap error, 2 verification failure (certificate written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field as dc_field

from . import __version__
from .exactalg.linalg import CapError
from .exactalg.fields import FieldError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class JobSpec:
    command: str
    inputs: list[str]
    seed: int = 0
    cap_dim: int | None = None
    cap_deg: int = 6
    field: tuple[int, int] = (2, 1)
    out: str | None = None
    fmt: str = "json"
    extra: dict = dc_field(default_factory=dict)

    def stamp(self) -> dict:
        return {"tool": "bocskit", "version": __version__, "command": self.command, "seed": self.seed}


def parse_field(s: str) -> tuple[int, int]:
    try:
        if "^" in s:
            p, m = s.split("^")
            return int(p), int(m)
        return int(s), 1
    except ValueError:
        raise UsageError(f"bad field {s!r}; expected p or p^m")


def _parse_poly(s: str) -> list:
    """Coefficients low to high, as JSON: [1,0,1] or [[1,0],[0,1]] (digit vectors)."""
    try:
        c = json.loads(s)
    except json.JSONDecodeError:
        raise UsageError(f"bad polynomial {s!r}; expected a JSON list of coefficients")
    if not isinstance(c, list) or not c:
        raise UsageError("polynomial must be a nonempty list")
    return c


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(job: JobSpec, name: str, payload, rows: list[dict] | None = None) -> None:
    """Print payload and write it (and a CSV, when asked) under --out."""
    if job.fmt == "csv" and rows is not None:
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        text = buf.getvalue()
        ext = "csv"
    else:
        text = payload if isinstance(payload, str) else _dump(payload)
        ext = "jsonl" if isinstance(payload, str) else "json"
    sys.stdout.write(text)
    if job.out:
        os.makedirs(job.out, exist_ok=True)
        with open(os.path.join(job.out, f"{name}.{ext}"), "w") as fh:
            fh.write(text)


def _write_certificate(job: JobSpec, name: str, cert) -> None:
    d = job.out or "."
    os.makedirs(d, exist_ok=True)
    with open(os.path.join(d, f"{name}.certificate.json"), "w") as fh:
        fh.write(_dump(cert))


def _check_cap(job: JobSpec, dim: int, what: str) -> None:
    if job.cap_dim is not None and dim > job.cap_dim:
        raise CapError(f"--cap-dim: {what} has dimension {dim} > {job.cap_dim}")


# -- loaders --

def load_module(data: dict):
    from .fdmod import FdModule
    from .skewpid import PidModule
    if "x_action" in data:
        return PidModule.from_json(data)
    if "algebra" in data:
        return FdModule.from_json(data)
    raise UsageError("module JSON needs 'x_action' (Gamma-module) or 'algebra' (Lambda-module)")


def load_bimodule(ref: str):
    from .embed import EmbeddingBimodule, kronecker_exemplar
    if ref.startswith("kronecker:"):
        try:
            q = int(ref.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad exemplar {ref!r}")
        return kronecker_exemplar(q)[2]
    return EmbeddingBimodule.from_json(_load(ref))


def load_family(data: dict, R, seed: int):
    """Family manifest: {"modules": [PidModule JSON]} or {"atoms": [[coeffs]], "levels": [n]}
    or {"max_deg": k, "levels": [n]} (all canonical atoms up to degree k)."""
    from .skewpid import Atom, PidModule, indec_module, list_atoms
    if "modules" in data:
        return [PidModule.from_json(m) for m in data["modules"]]
    levels = data.get("levels", [1])
    if "atoms" in data:
        atoms = [Atom(R.poly([R.D.from_digits(c) if isinstance(c, list) else c for c in a])) for a in data["atoms"]]
    elif "max_deg" in data:
        atoms = list_atoms(R, int(data["max_deg"]))
    else:
        raise UsageError("family manifest needs 'modules', 'atoms' or 'max_deg'")
    return [indec_module(a, n, seed) for a in atoms for n in levels]


# -- subcommands --

def cmd_endolength(job: JobSpec) -> int:
    from .fdmod import endolength, is_indecomposable
    M = load_module(_load(job.inputs[0]))
    X = M.matrix_module() if hasattr(M, "x_action") else M
    _check_cap(job, X.dim, "module")
    e = endolength(X, job.seed)
    out = {**job.stamp(), "endolength": e, "dim": int(X.dim), "indecomposable": bool(is_indecomposable(X, job.seed)[0])}
    _emit(job, "endolength", out, [{"endolength": e, "dim": int(X.dim)}])
    return 0


def cmd_enorm(job: JobSpec) -> int:
    from .ditalg import DitModule, Layer, enorm, norm
    from .ditalg.layer import DitError
    A = Layer.from_json(_load(job.inputs[0])).validate()
    M = DitModule.from_json(_load(job.inputs[1]), A)
    _check_cap(job, M.dim, "module")
    try:
        rep = enorm(A, M)
    except DitError as e:
        out = {**job.stamp(), "norm": norm(A, M), "error": str(e)}
        _emit(job, "enorm", out)
        return 2
    ok = rep.scaling_holds()
    out = {**job.stamp(), **rep.to_json(), "scaling_holds": ok}
    _emit(job, "enorm", out, [{"norm": rep.norm, "enorm": rep.enorm, "c": rep.c, "d_M": rep.d_m}])
    if not ok:
        _write_certificate(job, "enorm", out)
        return 2
    return 0


def cmd_reduce(job: JobSpec) -> int:
    from .ditalg import DitModule, Layer
    from .ditalg.descent import descend
    A = Layer.from_json(_load(job.inputs[0])).validate()
    hints = job.extra.get("hints")
    if hints:
        hints = _load(hints) if os.path.exists(hints) else json.loads(hints)
    fam = None
    if job.extra.get("family"):
        fam = [DitModule.from_json(m, A) for m in _load(job.extra["family"])["modules"]]
    trace = descend(A, job.extra.get("q"), hints, fam)
    header = json.dumps(job.stamp(), sort_keys=True) + "\n"
    _emit(job, "trace", header + trace.to_jsonl())
    if not trace.ok:
        _write_certificate(job, "trace", [s.to_json() for s in trace.steps if not (s.verified and s.delta_sq_zero)])
        return 2
    return 0


def cmd_embed_verify(job: JobSpec) -> int:
    from .embed import control_constants, verify_embedding
    Z = load_bimodule(job.inputs[0])
    fam = load_family(_load(job.inputs[1]), Z.ring, job.seed)
    for N in fam:
        _check_cap(job, Z.rank * N.dim, f"image of {N.label}")
    rep = verify_embedding(Z, fam, job.seed)
    ctrl = control_constants(Z, fam)
    out = {**job.stamp(), "verification": rep.to_json(), "control": ctrl.to_json(), "control_holds": ctrl.holds()}
    rows = [{"module": l, "endol": a, "endol_image": b} for l, a, b in ctrl.rows]
    _emit(job, "embed_verify", out, rows)
    if not rep.passed:
        _write_certificate(job, "embed_verify", rep.failures)
        return 2
    return 0


def cmd_ebtii(job: JobSpec) -> int:
    from .ebtii import EbtiiError, ebtii_ladder
    Z = load_bimodule(job.inputs[0])
    x = job.extra
    try:
        lad = ebtii_ladder(Z, x["levels"], x["count"], job.cap_deg, x["gap"], seed=job.seed)
    except EbtiiError as e:
        raise UsageError(str(e))
    out = {**job.stamp(), **lad.manifest()}
    rows = [{"level": f.level, "endolength": f.endolength, "size": len(f), "certified": f.certificate["ok"]}
            for f in lad.families]
    _emit(job, "ebtii", out, rows)
    if job.out and job.fmt == "json":
        with open(os.path.join(job.out, "ebtii.csv"), "w") as fh:
            w = csv.DictWriter(fh, fieldnames=["level", "endolength", "size", "certified"], lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    if len(lad.families) < len(x["levels"]):
        _write_certificate(job, "ebtii", out)
        print(f"cap error: --cap-deg {job.cap_deg}: {lad.message}", file=sys.stderr)
        return 1
    ok = (lad.strictly_increasing
          and all(f.certificate["ok"] and len(f) >= x["count"] for f in lad.families))
    if not ok:
        _write_certificate(job, "ebtii", out)
        return 2
    return 0


def cmd_pid(job: JobSpec) -> int:
    from .skewpid import Atom, SkewError, ar_sequence, indec_module, list_atoms, SkewRing
    p, m = job.field
    R = SkewRing(p, m, job.extra.get("twist", 0))
    what = job.extra["what"]
    if what == "list-atoms":
        atoms = list_atoms(R, job.cap_deg)
        rows = [{"atom": repr(a.poly), "degree": a.deg, "bound": repr(a.bound().b)} for a in atoms]
        out = {**job.stamp(), "ring": repr(R), "max_deg": job.cap_deg, "count": len(atoms),
               "atoms": [{**r, "coeffs": a.poly.to_json()["coeffs"]} for r, a in zip(rows, atoms)]}
        _emit(job, "atoms", out, rows)
        return 0
    if job.extra.get("poly") is None:
        raise UsageError(f"pid {what} needs --poly")
    coeffs = _parse_poly(job.extra["poly"])
    f = R.poly([R.D.from_digits(c) if isinstance(c, list) else int(c) for c in coeffs])
    a = Atom(f)
    n = job.extra.get("n", 1)
    try:
        if what == "module":
            M = indec_module(a, n, job.seed)
            _check_cap(job, M.dim, "module")
            _emit(job, "module", {**job.stamp(), **M.to_json()})
            return 0
        seq = ar_sequence(a, n, job.seed)
    except SkewError as e:
        raise UsageError(str(e))
    checks = {"exact": seq.is_exact(), "maps_are_homs": seq.maps_are_homs(), "non_split": not seq.splits()}
    out = {**job.stamp(), "atom": repr(f), "n": n, "checks": checks,
           "left": seq.left.to_json(), "middle": seq.middle.to_json(), "right": seq.right.to_json(),
           "iota": seq.iota.tolist(), "pi": seq.pi.tolist()}
    _emit(job, "ar_seq", out, [{"atom": repr(f), "n": n, **checks}])
    if not all(checks.values()):
        _write_certificate(job, "ar_seq", out)
        return 2
    return 0


COMMANDS = {"endolength": cmd_endolength, "enorm": cmd_enorm, "reduce": cmd_reduce,
            "embed-verify": cmd_embed_verify, "ebtii": cmd_ebtii, "pid": cmd_pid}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-dim", type=int, default=None, help="largest module dimension accepted")
    common.add_argument("--cap-deg", type=int, default=6, help="largest atom degree searched")
    common.add_argument("--field", default="2", help="p or p^m")
    common.add_argument("--out", default=None, help="directory for artifacts")
    common.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
    ap = _Parser(prog="bocskit", description="endolength, reductions and embeddings over finite fields")
    ap.add_argument("--version", action="version", version=f"bocskit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("endolength", parents=[common])
    s.add_argument("module")
    s = sub.add_parser("enorm", parents=[common])
    s.add_argument("layer")
    s.add_argument("module")
    s = sub.add_parser("reduce", parents=[common])
    s.add_argument("layer")
    s.add_argument("--hints", default=None, help="JSON text or file")
    s.add_argument("--family", default=None, help="JSON file {modules: [...]}")
    s.add_argument("--q", type=int, default=None)
    s = sub.add_parser("embed-verify", parents=[common])
    s.add_argument("bimodule", help="Z.json or kronecker:q")
    s.add_argument("family")
    s = sub.add_parser("ebtii", parents=[common])
    s.add_argument("bimodule", help="Z.json or kronecker:q")
    s.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3])
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--cap", type=int, default=None, help="atom degree cap (same as --cap-deg)")
    s.add_argument("--gap", choices=["measured", "source"], default="measured")
    s = sub.add_parser("pid", parents=[common])
    s.add_argument("what", choices=["list-atoms", "module", "ar-seq"])
    s.add_argument("--twist", type=int, default=0)
    s.add_argument("--poly", default=None, help="coefficients low to high, JSON")
    s.add_argument("-n", type=int, default=1)
    return ap


def job_from_args(a: argparse.Namespace) -> JobSpec:
    if a.seed < 0 or (a.cap_dim is not None and a.cap_dim <= 0) or a.cap_deg <= 0:
        raise UsageError("seed must be non-negative and caps positive")
    inputs = [getattr(a, k) for k in ("module", "layer", "bimodule", "family") if isinstance(getattr(a, k, None), str)]
    if a.command == "enorm":
        inputs = [a.layer, a.module]
    elif a.command == "embed-verify":
        inputs = [a.bimodule, a.family]
    job = JobSpec(a.command, inputs, a.seed, a.cap_dim, a.cap_deg, parse_field(a.field), a.out, a.fmt)
    if a.command == "reduce":
        job.extra = {"hints": a.hints, "family": a.family, "q": a.q}
    elif a.command == "ebtii":
        if a.cap is not None:
            job.cap_deg = a.cap
        if a.count < 0:
            raise UsageError("--count must be non-negative")
        job.extra = {"levels": a.levels, "count": a.count, "gap": a.gap}
    elif a.command == "pid":
        job.extra = {"what": a.what, "twist": a.twist, "poly": a.poly, "n": a.n}
    return job


def run(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
        job = job_from_args(a)
        return COMMANDS[job.command](job)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except CapError as e:
        print(f"cap error: {e}", file=sys.stderr)
        return 1
    except FieldError as e:
        print(f"field error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
