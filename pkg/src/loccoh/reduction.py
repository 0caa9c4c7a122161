"""Shrinking the ambient ring without changing the top local cohomology.

While the annihilator of ``H^c_I(A)`` contains a variable ``x_v`` that avoids
every minimal prime of ``I``, pass to ``A / x_v A`` and the image of ``I``.
The module is unchanged, so ``c`` stays put and the ring loses a variable.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cech import AmbientQuotient, annihilator, cohomological_dimension, windowed_module
from .linalg import ScalarField
from .monomial import IdealError, MonomialIdeal, dimension, minimal_primes, q_ideal, set_variable_to_zero, sigma_set
from .resolutions import is_cm_ring
from .simplicial import popcount

__all__ = [
    "ReductionStep",
    "ReductionTrace",
    "reduce",
    "principal_annihilator_hypotheses",
    "ann_principal_check",
    "q_containment_check",
    "q_containment_details",
    "check_step_invariance",
]

STOP_EMPTY = "S empty"
STOP_NON_VARIABLE = "S has no variable element"


def _degree_str(beta) -> str:
    return ",".join(str(b) for b in beta)


def _pieces_json(pieces: dict) -> dict[str, int]:
    return {_degree_str(b): d for b, d in sorted(pieces.items())}


@dataclass
class ReductionStep:
    r: str
    variable: int
    ambient_before: AmbientQuotient
    ambient_after: AmbientQuotient
    ideal_before: MonomialIdeal
    ideal_after: MonomialIdeal
    c: int
    annihilator: MonomialIdeal
    pieces_before: dict
    pieces_after: dict

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "ambient_before": str(self.ambient_before),
            "ambient_after": str(self.ambient_after),
            "ideal_before": self.ideal_before.to_strings(),
            "ideal_after": self.ideal_after.to_strings(),
            "c": self.c,
            "annihilator": self.annihilator.to_strings(),
            "pieces_before": _pieces_json(self.pieces_before),
            "pieces_after": _pieces_json(self.pieces_after),
        }


@dataclass
class ReductionTrace:
    steps: list[ReductionStep]
    ambient: AmbientQuotient
    ideal: MonomialIdeal
    c: int
    annihilator: MonomialIdeal
    reason: str
    leftover: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "final_ambient": str(self.ambient),
            "final_variables": list(self.ambient.ctx.names),
            "final_ideal": self.ideal.to_strings(),
            "c": self.c,
            "final_annihilator": self.annihilator.to_strings(),
            "reason": self.reason,
            "non_variable_candidates": self.leftover,
        }


def _check_pair(amb: AmbientQuotient, ideal: MonomialIdeal) -> None:
    if ideal.ctx.names != amb.ctx.names:
        raise IdealError("ideal and ambient live in different rings")
    total = ideal + amb.relations
    if total.is_unit:
        raise IdealError("I must be proper in A")
    if ideal <= amb.relations:
        raise IdealError("I must be nonzero in A")


def _ann_in_sigma(ann: MonomialIdeal, amb: AmbientQuotient, ideal: MonomialIdeal) -> list[tuple[int, ...]]:
    sig = sigma_set(ideal, amb.relations)
    return [g for g in ann.sorted_gens() if g in sig]


def check_step_invariance(step: ReductionStep) -> None:
    """Pieces with ``beta_v = 0`` survive unchanged; the rest were zero."""
    v = step.variable
    for beta, d in step.pieces_before.items():
        if beta[v] != 0 and d:
            raise AssertionError(f"piece at {beta} should vanish: x{v} annihilates the module")
    old = {b[:v] + b[v + 1:]: d for b, d in step.pieces_before.items() if b[v] == 0}
    if old != step.pieces_after:
        raise AssertionError("piece dimensions changed across a reduction step")


def reduce(amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField | None = None,
           method: str = "auto") -> ReductionTrace:
    """Quotient by annihilating variables from ``Sigma(I)`` until none is left."""
    _check_pair(amb, ideal)
    fld = fld or amb.fld
    steps: list[ReductionStep] = []
    c0 = None
    while True:
        c = cohomological_dimension(amb, ideal, fld, method)
        if c0 is None:
            c0 = c
        elif c != c0:
            raise AssertionError(f"cohomological dimension moved from {c0} to {c}")
        mod = windowed_module(amb, ideal, c, fld, method=method)
        ann = annihilator(mod)
        if steps:
            steps[-1].pieces_after = mod.nonzero_pieces()
            check_step_invariance(steps[-1])
        hits = _ann_in_sigma(ann, amb, ideal)
        cands = [g.index(1) for g in hits if sum(g) == 1]
        if not cands:
            reason = STOP_NON_VARIABLE if hits else STOP_EMPTY
            leftover = [amb.ctx.format_monomial(g) for g in hits]
            return ReductionTrace(steps, amb, ideal, c, ann, reason, leftover)
        v = min(cands)
        nxt_amb = amb.quotient_by_variable(v)
        nxt_ideal = set_variable_to_zero(ideal, v)
        steps.append(ReductionStep(amb.ctx.names[v], v, amb, nxt_amb, ideal, nxt_ideal, c, ann,
                                   mod.nonzero_pieces(), {}))
        amb, ideal = nxt_amb, nxt_ideal


def principal_annihilator_hypotheses(amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField | None = None) -> bool:
    """CM ambient, ``dim A/I >= 2``, ``c = dim A - dim A/I + 1`` and ``Ann`` meets ``Sigma(I)``."""
    _check_pair(amb, ideal)
    fld = fld or amb.fld
    if not is_cm_ring(amb.relations, fld):
        return False
    t = dimension(ideal + amb.relations)
    if t < 2:
        return False
    c = cohomological_dimension(amb, ideal, fld)
    if c != amb.dim - (t - 1):
        return False
    ann = annihilator(windowed_module(amb, ideal, c, fld))
    return bool(_ann_in_sigma(ann, amb, ideal))


def ann_principal_check(amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField | None = None) -> bool:
    """Under the hypotheses above the annihilator is generated by one element of ``Sigma(I)``."""
    if not principal_annihilator_hypotheses(amb, ideal, fld):
        return True
    fld = fld or amb.fld
    c = cohomological_dimension(amb, ideal, fld)
    ann = annihilator(windowed_module(amb, ideal, c, fld))
    # generators lying in J vanish in A and do not count
    live = [g for g in ann.gens if not amb.relations.contains(g)]
    return len(live) == 1 and live[0] in sigma_set(ideal, amb.relations)


def q_containment_details(amb: AmbientQuotient, ideal: MonomialIdeal,
                          fld: ScalarField | None = None) -> dict:
    """Image of the annihilator in ``A/yA`` versus ``Q`` of the image of ``I``."""
    _check_pair(amb, ideal)
    fld = fld or amb.fld
    used = 0
    for p in minimal_primes(ideal + amb.relations):
        used |= p
    free = [v for v in range(amb.n) if not (used >> v) & 1]
    if not free:
        return {"applicable": False, "holds": True, "reason": "every variable lies in a minimal prime of I"}
    y = free[0]
    c = cohomological_dimension(amb, ideal, fld)
    ann = annihilator(windowed_module(amb, ideal, c, fld))
    sub = amb.quotient_by_variable(y)
    img_i = set_variable_to_zero(ideal, y)
    img_ann = set_variable_to_zero(ann, y)
    q = q_ideal(img_i, sub.relations)
    return {
        "applicable": True,
        "y": amb.ctx.names[y],
        "annihilator": ann.to_strings(),
        "image": img_ann.to_strings(),
        "q": q.to_strings(),
        "holds": img_ann <= q,
    }


def q_containment_check(amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField | None = None) -> bool:
    return q_containment_details(amb, ideal, fld)["holds"]
