"""Monomial ideals in a polynomial ring ``k[x_1, ..., x_n]``.

Monomials are exponent tuples.  Ideals keep an inclusion-minimal generating
set, so two ideals are equal exactly when their generator sets are equal.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .linalg import QQ, ScalarField
from .simplicial import SimplicialComplex, mask_of, members, popcount

__all__ = [
    "PolyRingContext",
    "MonomialIdeal",
    "SigmaSet",
    "IdealError",
    "minimal_primes",
    "irreducible_decomposition",
    "primary_decomposition",
    "dimension",
    "height",
    "stanley_reisner",
    "to_complex",
    "sigma_set",
    "q_ideal",
    "set_variable_to_zero",
    "ideal_of_mask",
    "PrimaryComponent",
    "all_monomials_in_box",
]

Monomial = tuple[int, ...]

_TOKEN = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\^\s*(\d+))?\s*$")


class IdealError(ValueError):
    """An ideal violates the precondition of an operation."""


@dataclass(frozen=True)
class PolyRingContext:
    """Variable names and coefficient field of a polynomial ring."""

    names: tuple[str, ...]
    fld: ScalarField = field(default=QQ)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise ValueError("need at least one variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")

    @classmethod
    def standard(cls, n: int, fld: ScalarField = QQ, prefix: str = "x") -> "PolyRingContext":
        return cls(tuple(f"{prefix}{i + 1}" for i in range(n)), fld)

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.names)}

    def var_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise IdealError(f"unknown variable {name!r}") from None

    def parse_monomial(self, text: str) -> Monomial:
        """Parse ``"x1^2*x4*x5"``; ``"1"`` is the unit monomial."""
        exps = [0] * self.n
        t = text.strip()
        if t == "1":
            return tuple(exps)
        if not t:
            raise IdealError("empty monomial")
        for part in t.split("*"):
            m = _TOKEN.match(part)
            if not m:
                raise IdealError(f"cannot parse monomial factor {part!r}")
            exps[self.var_index(m.group(1))] += int(m.group(2) or 1)
        return tuple(exps)

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def with_field(self, fld: ScalarField) -> "PolyRingContext":
        return PolyRingContext(self.names, fld)

    def variable(self, i: int) -> Monomial:
        return tuple(1 if j == i else 0 for j in range(self.n))

    def without(self, v: int) -> "PolyRingContext":
        if self.n == 1:
            raise ValueError("cannot drop the only variable")
        return PolyRingContext(self.names[:v] + self.names[v + 1 :], self.fld)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm_mono(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def support(m: Monomial) -> int:
    return mask_of(i for i, e in enumerate(m) if e)


def minimalize(gens: Iterable[Monomial]) -> frozenset[Monomial]:
    ordered = sorted(set(gens), key=sum)
    kept: list[Monomial] = []
    for g in ordered:
        if not any(divides(k, g) for k in kept):
            kept.append(g)
    return frozenset(kept)


@dataclass(frozen=True)
class MonomialIdeal:
    """An ideal generated by monomials, stored by its minimal generators."""

    ctx: PolyRingContext
    gens: frozenset[Monomial]

    def __post_init__(self):
        n = self.ctx.n
        for g in self.gens:
            if len(g) != n or any(e < 0 for e in g):
                raise IdealError(f"bad exponent vector {g}")
        object.__setattr__(self, "gens", minimalize(tuple(int(e) for e in g) for g in self.gens))

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_strings(cls, ctx: PolyRingContext, gens: Iterable[str]) -> "MonomialIdeal":
        return cls(ctx, frozenset(ctx.parse_monomial(g) for g in gens))

    @classmethod
    def from_exponents(cls, ctx: PolyRingContext, gens: Iterable[Sequence[int]]) -> "MonomialIdeal":
        return cls(ctx, frozenset(tuple(g) for g in gens))

    @classmethod
    def zero(cls, ctx: PolyRingContext) -> "MonomialIdeal":
        return cls(ctx, frozenset())

    @classmethod
    def unit(cls, ctx: PolyRingContext) -> "MonomialIdeal":
        return cls(ctx, frozenset({(0,) * ctx.n}))

    @classmethod
    def variables(cls, ctx: PolyRingContext, idx: Iterable[int]) -> "MonomialIdeal":
        return cls(ctx, frozenset(ctx.variable(i) for i in idx))

    @classmethod
    def maximal(cls, ctx: PolyRingContext) -> "MonomialIdeal":
        return cls.variables(ctx, range(ctx.n))

    # -- predicates -------------------------------------------------------

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return (0,) * self.n in self.gens

    @property
    def is_proper(self) -> bool:
        return not self.is_unit

    @property
    def is_squarefree(self) -> bool:
        return all(e <= 1 for g in self.gens for e in g)

    def sorted_gens(self) -> list[Monomial]:
        return sorted(self.gens, key=lambda g: (sum(g), tuple(-e for e in g)))

    def contains(self, m: Monomial) -> bool:
        return any(divides(g, m) for g in self.gens)

    def __contains__(self, m) -> bool:
        if isinstance(m, str):
            m = self.ctx.parse_monomial(m)
        return self.contains(tuple(m))

    def issubset(self, other: "MonomialIdeal") -> bool:
        self._check(other)
        return all(other.contains(g) for g in self.gens)

    def __le__(self, other: "MonomialIdeal") -> bool:
        return self.issubset(other)

    def _check(self, other: "MonomialIdeal") -> None:
        if self.ctx.names != other.ctx.names:
            raise IdealError("ideals live in different rings")

    @cached_property
    def support_masks(self) -> list[int]:
        return [support(g) for g in self.gens]

    @cached_property
    def variable_mask(self) -> int:
        return reduce(lambda a, b: a | b, self.support_masks, 0)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        self._check(other)
        return MonomialIdeal(self.ctx, self.gens | other.gens)

    def sum(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return self + other

    def __and__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        self._check(other)
        return MonomialIdeal(self.ctx, frozenset(lcm_mono(a, b) for a in self.gens for b in other.gens))

    def intersect(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return self & other

    def colon_monomial(self, m: Monomial) -> "MonomialIdeal":
        return MonomialIdeal(
            self.ctx, frozenset(tuple(max(a - b, 0) for a, b in zip(g, m)) for g in self.gens)
        )

    def colon(self, other: "MonomialIdeal") -> "MonomialIdeal":
        """``(self : other)``; the colon by the zero ideal is the unit ideal."""
        self._check(other)
        parts = [self.colon_monomial(g) for g in other.gens]
        if not parts:
            return MonomialIdeal.unit(self.ctx)
        return reduce(lambda a, b: a & b, parts)

    def radical(self) -> "MonomialIdeal":
        return MonomialIdeal(
            self.ctx, frozenset(tuple(1 if e else 0 for e in g) for g in self.gens)
        )

    def __str__(self) -> str:
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(self.ctx.format_monomial(g) for g in self.sorted_gens()) + ")"

    def to_strings(self) -> list[str]:
        return [self.ctx.format_monomial(g) for g in self.sorted_gens()]

    def __repr__(self) -> str:
        return f"MonomialIdeal{self}"


def set_variable_to_zero(i: MonomialIdeal, v: int) -> MonomialIdeal:
    """Image of ``I`` in ``R/(x_v)``, written in the ring without ``x_v``."""
    ctx = i.ctx.without(v)
    gens = (g[:v] + g[v + 1 :] for g in i.gens if g[v] == 0)
    return MonomialIdeal(ctx, frozenset(gens))


def ideal_of_mask(ctx: PolyRingContext, mask: int) -> MonomialIdeal:
    """The monomial prime generated by the variables in ``mask``."""
    return MonomialIdeal.variables(ctx, members(mask))


# ---------------------------------------------------------------------------
# primes, decompositions, dimension


def _require_proper_nonzero(i: MonomialIdeal) -> None:
    if i.is_zero:
        raise IdealError("operation needs a nonzero ideal")
    if i.is_unit:
        raise IdealError("operation needs a proper ideal")


def minimal_primes(i: MonomialIdeal) -> list[int]:
    """Minimal primes as variable bitmasks (minimal covers of the supports)."""
    _require_proper_nonzero(i)
    sup = np.array(sorted(set(i.support_masks)), dtype=np.int64)
    covers = _kernels.minimal_covers(sup, i.n)
    return sorted((int(c) for c in covers), key=lambda m: (popcount(m), members(m)))


def dimension(i: MonomialIdeal) -> int:
    """Krull dimension of ``R/I``."""
    if i.is_unit:
        raise IdealError("the unit ideal has no dimension")
    if i.is_zero:
        return i.n
    return i.n - min(popcount(p) for p in minimal_primes(i))


def height(i: MonomialIdeal) -> int:
    return i.n - dimension(i)


def _irreducible_components(gens: frozenset[Monomial], n: int, memo: dict) -> frozenset[frozenset[Monomial]]:
    hit = memo.get(gens)
    if hit is not None:
        return hit
    split = next((g for g in sorted(gens) if popcount(support(g)) > 1), None)
    if split is None:
        out = frozenset({gens})
    else:
        v = members(support(split))[0]
        power = tuple(split[v] if j == v else 0 for j in range(n))
        rest = tuple(0 if j == v else e for j, e in enumerate(split))
        out = _irreducible_components(minimalize(gens | {power}), n, memo) | _irreducible_components(
            minimalize(gens | {rest}), n, memo
        )
    memo[gens] = out
    return out


def irreducible_decomposition(i: MonomialIdeal) -> list[MonomialIdeal]:
    """Irredundant decomposition into ideals generated by variable powers."""
    _require_proper_nonzero(i)
    comps = [MonomialIdeal(i.ctx, c) for c in _irreducible_components(i.gens, i.n, {})]
    minimal = [c for c in comps if not any(o != c and o <= c for o in comps)]
    return sorted(minimal, key=lambda c: (dimension(c), c.to_strings()), reverse=False)


@dataclass(frozen=True)
class PrimaryComponent:
    prime: int  # variable mask of the associated prime
    ideal: MonomialIdeal

    @property
    def dim(self) -> int:
        return self.ideal.n - popcount(self.prime)


def primary_decomposition(i: MonomialIdeal) -> list[PrimaryComponent]:
    """Irreducible components grouped by radical and intersected."""
    groups: dict[int, MonomialIdeal] = {}
    for c in irreducible_decomposition(i):
        p = c.variable_mask
        groups[p] = groups[p] & c if p in groups else c
    return sorted(
        (PrimaryComponent(p, q) for p, q in groups.items()),
        key=lambda c: (-c.dim, members(c.prime)),
    )


# ---------------------------------------------------------------------------
# Stanley-Reisner correspondence


def stanley_reisner(delta: SimplicialComplex, ctx: PolyRingContext | None = None) -> MonomialIdeal:
    ctx = ctx or PolyRingContext.standard(delta.n)
    if ctx.n != delta.n:
        raise IdealError("ring and complex have different vertex counts")
    gens = [tuple(1 if (m >> j) & 1 else 0 for j in range(delta.n)) for m in delta.minimal_nonfaces()]
    return MonomialIdeal(ctx, frozenset(gens))


def to_complex(i: MonomialIdeal) -> SimplicialComplex:
    if not i.is_squarefree:
        raise IdealError("Stanley-Reisner complex needs a squarefree ideal")
    n = i.n
    sup = i.support_masks
    faces = [s for s in range(1 << n) if not any(g & s == g for g in sup)]
    return SimplicialComplex(n, frozenset(faces))


# ---------------------------------------------------------------------------
# Sigma set and Q_I(M)


@dataclass(frozen=True)
class SigmaSet:
    """Monomials avoiding every minimal prime: those with support in ``allowed``."""

    allowed: int
    n: int

    def __contains__(self, m) -> bool:
        s = m if isinstance(m, int) else support(tuple(m))
        return s != 0 and s & ~self.allowed == 0

    @property
    def variables(self) -> list[int]:
        return members(self.allowed)


def sigma_set(i: MonomialIdeal, ambient: MonomialIdeal | None = None) -> SigmaSet:
    """Monomials that are non-zerodivisors modulo ``I + J``."""
    j = ambient if ambient is not None else MonomialIdeal.zero(i.ctx)
    total = i + j
    if i.is_unit or total.is_unit:
        raise IdealError("I must be proper in R/J")
    if total.is_zero:
        raise IdealError("I must be nonzero")
    used = reduce(lambda a, b: a | b, minimal_primes(total), 0)
    return SigmaSet(((1 << i.n) - 1) & ~used, i.n)


def q_ideal(i: MonomialIdeal, j: MonomialIdeal) -> MonomialIdeal:
    """The ideal ``Q`` with ``Q/J = Q_I(R/J)``; the unit ideal encodes ``Q_I(M) = M``."""
    if j.is_unit:
        raise IdealError("module ideal must be proper")
    ctx = j.ctx
    if j.is_zero:
        comps = [PrimaryComponent(0, j)]
    else:
        comps = primary_decomposition(j)
    top = dimension(j)
    chosen = []
    for c in comps:
        if c.dim != top:
            continue
        if dimension(i + ideal_of_mask(ctx, c.prime)) == 0:
            chosen.append(c.ideal)
    if not chosen:
        return MonomialIdeal.unit(ctx)
    return reduce(lambda a, b: a & b, chosen)


def all_monomials_in_box(n: int, top: int) -> Iterable[Monomial]:
    return product(range(top + 1), repeat=n)
