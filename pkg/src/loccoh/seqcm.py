"""Dimension filtrations and (partially) sequentially Cohen-Macaulay tests.

``M_k = U_k / J`` is the largest submodule of ``R/J`` of dimension at most
``k``; ``U_k`` is the intersection of the primary components of ``J`` whose
dimension exceeds ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .linalg import ScalarField
from .monomial import IdealError, MonomialIdeal, PrimaryComponent, dimension, primary_decomposition, to_complex
from .resolutions import depth_pair

__all__ = [
    "DimensionFiltration",
    "dimension_filtration",
    "is_partially_scm",
    "is_sequentially_cm",
    "duval_cross_check",
    "level_report",
]


@dataclass(frozen=True)
class DimensionFiltration:
    """``levels[k + 1] = U_k`` for ``k = -1, ..., d``."""

    base: MonomialIdeal
    d: int
    levels: tuple[MonomialIdeal, ...]

    def __post_init__(self):
        if len(self.levels) != self.d + 2:
            raise ValueError("need one ideal per level -1..d")
        if self.levels[0] != self.base or not self.levels[-1].is_unit:
            raise ValueError("filtration must run from the base ideal to the unit ideal")
        for a, b in zip(self.levels, self.levels[1:]):
            if not a <= b:
                raise ValueError("filtration ideals are not ascending")

    def ideal(self, k: int) -> MonomialIdeal:
        """``U_k``; ``U_k = J`` below ``-1`` and ``R`` above ``d``."""
        if k < -1:
            return self.base
        if k > self.d:
            return self.levels[-1]
        return self.levels[k + 1]

    def is_jump(self, k: int) -> bool:
        return self.ideal(k) != self.ideal(k - 1)

    def quotient_dim(self, k: int) -> int | None:
        """Dimension of ``M_k / M_{k-1}``; ``None`` for the zero module."""
        if not self.is_jump(k):
            return None
        return dimension(self.ideal(k - 1).colon(self.ideal(k)))

    def jumps(self) -> list[int]:
        return [k for k in range(0, self.d + 1) if self.is_jump(k)]

    def to_json(self) -> dict:
        return {
            "base": self.base.to_strings(),
            "d": self.d,
            "levels": {str(k): self.ideal(k).to_strings() for k in range(-1, self.d + 1)},
            "jumps": self.jumps(),
        }


def _components(j: MonomialIdeal) -> list[PrimaryComponent]:
    if j.is_zero:
        return [PrimaryComponent(0, j)]
    return primary_decomposition(j)


def dimension_filtration(j: MonomialIdeal) -> DimensionFiltration:
    if j.is_unit:
        raise IdealError("need a proper ideal")
    comps = _components(j)
    d = dimension(j)
    unit = MonomialIdeal.unit(j.ctx)
    levels = []
    for k in range(-1, d + 1):
        above = [c.ideal for c in comps if c.dim > k]
        levels.append(reduce(lambda a, b: a & b, above) if above else unit)
    return DimensionFiltration(j, d, tuple(levels))


def level_report(filt: DimensionFiltration, k: int, fld: ScalarField | None = None) -> dict:
    """Dimension and depth of ``M_k / M_{k-1}``, and whether it is CM of dim ``k``."""
    qd = filt.quotient_dim(k)
    if qd is None:
        return {"k": k, "zero": True, "dim": None, "depth": None, "ok": True}
    dp = depth_pair(filt.ideal(k), filt.ideal(k - 1), fld)
    return {"k": k, "zero": False, "dim": qd, "depth": dp, "ok": qd == k and dp == k}


def is_partially_scm(j: MonomialIdeal, i: int, fld: ScalarField | None = None,
                     filt: DimensionFiltration | None = None) -> bool:
    """Every quotient ``M_k / M_{k-1}`` with ``i <= k <= d`` is zero or CM of dimension ``k``."""
    filt = filt or dimension_filtration(j)
    if not 0 <= i <= filt.d:
        raise ValueError(f"level {i} outside 0..{filt.d}")
    return all(level_report(filt, k, fld)["ok"] for k in range(i, filt.d + 1))


def is_sequentially_cm(j: MonomialIdeal, fld: ScalarField | None = None) -> bool:
    return is_partially_scm(j, 0, fld)


def duval_cross_check(i: MonomialIdeal, fld: ScalarField | None = None) -> bool:
    """Every pure skeleton of the Stanley-Reisner complex is Cohen-Macaulay."""
    delta = to_complex(i)
    fld = fld or i.ctx.fld
    top = delta.dim
    if top is None:
        raise IdealError("need a proper ideal")
    return all(delta.pure_skeleton(k).is_cm(fld) for k in range(-1, top + 1))
