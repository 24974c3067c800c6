"""Descent driver: reduce a layer step by step until a quasi-minimal layer appears.

The driver follows the induction on the e-norm: support deletion, then
regularization when delta(W0^1) != 0, otherwise deletion down to a loop
(or an infinite-type species) or reduction by the A2 module X.  A family of
indecomposable modules with common e-norm can be attached; it is carried
through every step and the e-norm inequality of that step is re-checked on
it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .layer import (DitError, DitModule, Layer, enorm, minimal_is_infinite, quasi_minimal_generator,
                    species_type)
from .reductions import Reduction, _is_a2, delete_idempotents, reduce_by_module, regularize

STEP_CAP = 24
GEN_CAP = 48  # generators in a layer before the driver gives up


@dataclass
class TraceStep:
    case: str
    kind: str
    generator: str | None
    before: Layer
    after: Layer
    enorms: list[tuple[int, int]]
    strict: bool
    verified: bool
    delta_sq_zero: bool

    def to_json(self) -> dict:
        return {"case": self.case, "kind": self.kind, "generator": self.generator,
                "vertices_before": list(self.before.names), "vertices_after": list(self.after.names),
                "w0_after": [g.label for g in self.after.w0],
                "enorms": [list(e) for e in self.enorms], "inequality": "<" if self.strict else "<=",
                "verified": self.verified, "delta_sq_zero": self.delta_sq_zero}


@dataclass
class ReductionTrace:
    start: Layer
    steps: list[TraceStep] = dc_field(default_factory=list)
    status: str = "running"
    final: Layer | None = None
    minimal_generator: str | None = None
    minimal_infinite: bool = False
    message: str = ""
    q: int | None = None

    @property
    def ok(self) -> bool:
        return all(s.verified and s.delta_sq_zero for s in self.steps)

    def minimal_layer(self) -> Layer | None:
        if self.minimal_generator is None:
            return None
        from .layer import minimal_layer
        return minimal_layer(self.final, self.minimal_generator)

    def to_jsonl(self) -> str:
        lines = [json.dumps({"step": k + 1, **s.to_json()}, sort_keys=True) for k, s in enumerate(self.steps)]
        end = {"status": self.status, "message": self.message, "q": self.q,
               "minimal_generator": self.minimal_generator, "minimal_infinite": self.minimal_infinite,
               "final_layer": self.final.to_json() if self.final is not None else None}
        lines.append(json.dumps(end, sort_keys=True))
        return "\n".join(lines) + "\n"


def _apply(trace: ReductionTrace, red: Reduction, case: str, family: list[DitModule], strict: bool,
           generator: str | None) -> list[DitModule]:
    A, B = red.source, red.target
    pairs, ok, new_family = [], True, []
    for M in family:
        N = red.backward(M)
        if N is None:
            raise DitError("a family member does not lie in the image of the reduction")
        before, after = enorm(A, M).enorm, enorm(B, N).enorm
        pairs.append((after, before))
        need_strict = strict and M.is_sincere()
        if red.kind == "reduction by X":
            need_strict = need_strict and red.info["W0_prime_nonzero"]
        ok &= after < before if need_strict else after <= before
        new_family.append(N)
    trace.steps.append(TraceStep(case, red.kind, generator, A, B, pairs, strict, bool(ok), not B.check()))
    return new_family


def descend(A: Layer, q: int | None = None, hints: dict | None = None,
            family: list[DitModule] | None = None, max_steps: int = STEP_CAP) -> ReductionTrace:
    """Run the reduction induction on A.

    hints: {"w0_1": label or list of labels (one per step, choosing W0^1),
            "keep": vertex names to keep once they all exist (support without a family)}.
    """
    A.validate()
    if q is not None and q < 1:
        raise DitError("q must be a positive integer")
    hints = dict(hints or {})
    picks = hints.get("w0_1") or []
    picks = [picks] if isinstance(picks, str) else list(picks)
    keep_names = hints.get("keep")
    family = list(family or [])
    if family:
        qs = {enorm(A, M).enorm for M in family}
        if len(qs) != 1:
            raise DitError(f"family members have different e-norms {sorted(qs)}")
        if q is not None and qs != {q}:
            raise DitError(f"family has e-norm {qs.pop()}, not {q}")
        q = qs.pop()
    trace = ReductionTrace(A, q=q)
    for _ in range(max_steps):
        if family:
            support = sorted(set().union(*(M.support() for M in family)))
            if len(support) < A.n:
                red = delete_idempotents(A, support)
                family = _apply(trace, red, "support deletion", family, False, None)
                A = red.target
        elif keep_names and set(keep_names) <= set(A.names) and len(keep_names) < A.n:
            red = delete_idempotents(A, [A.names.index(v) for v in keep_names])
            _apply(trace, red, "support deletion", [], False, None)
            A, keep_names = red.target, None
        if len(A.w0) + len(A.w1) > GEN_CAP:
            trace.status, trace.final = "cap", A
            trace.message = f"layer has more than {GEN_CAP} generators; attach a family or pass hints"
            return trace
        qm = quasi_minimal_generator(A)
        if qm is not None and minimal_is_infinite(A, A.gen(qm)):
            trace.status, trace.final, trace.minimal_generator = "quasi-minimal", A, qm
            trace.minimal_infinite = True
            trace.message = f"W0' = {qm} is simple with delta(W0') = 0"
            return trace
        if not A.w0:
            trace.status, trace.final = "finite", A
            trace.message = "no degree-0 generators remain: only semisimple modules"
            return trace
        cands = sorted(A.w0, key=lambda g: (g.level, A.w0.index(g)))
        pick = picks.pop(0) if picks else None
        if pick is not None and pick not in {g.label for g in A.w0}:
            raise DitError(f"hint names {pick!r}, which is not a degree-0 generator of {A.names}")
        g1 = A.gen(pick) if pick else cands[0]
        if A.delta_of(g1.label):
            try:
                red = regularize(A, g1.label)
            except DitError as e:
                trace.status, trace.final, trace.message = "unimplemented", A, f"Case 1: {e}"
                return trace
            family = _apply(trace, red, "Case 1: regularization", family, True, g1.label)
        elif g1.src == g1.tgt:
            red = delete_idempotents(A, [g1.src])
            family = _apply(trace, red, "Case 2.a: deletion", family, False, g1.label) if all(
                M.support() == [g1.src] for M in family) else _unsupported(trace, A, "Case 2.a")
            if family is None:
                return trace
        elif minimal_is_infinite(A, g1) and A.is_simple(g1):
            red = delete_idempotents(A, [g1.src, g1.tgt])
            family = _apply(trace, red, "Case 2.b: deletion (infinite type)", family, False, g1.label) if all(
                set(M.support()) <= {g1.src, g1.tgt} for M in family) else _unsupported(trace, A, "Case 2.b")
            if family is None:
                return trace
        elif _is_a2(A, g1):
            red = reduce_by_module(A, g1.label)
            family = _apply(trace, red, "Case 2.b: reduction by X (A2)", family, True, g1.label)
        else:
            a, b = species_type(A, g1)
            trace.status, trace.final = "unimplemented", A
            what = "twisted A2 species" if (a, b) == (1, 1) else "non-A2 species"
            trace.message = (f"Case 2.b with species dimensions ({a}, {b}) for {g1.label}: "
                             f"{what} not implemented")
            return trace
        A = red.target
    trace.status, trace.final = "step-cap", A
    trace.message = f"no quasi-minimal layer within {max_steps} steps"
    return trace


def _unsupported(trace: ReductionTrace, A: Layer, case: str):
    trace.status, trace.final = "unimplemented", A
    trace.message = f"{case}: the attached family is sincere, so the deletion would lose it"
    return None
