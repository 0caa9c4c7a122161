"""Seeded random instances for the theorem suites."""
from __future__ import annotations

import random
from itertools import combinations

from .monomial import MonomialIdeal, PolyRingContext, dimension, stanley_reisner
from .simplicial import SimplicialComplex

__all__ = ["KINDS", "MAX_VARIABLES", "random_ideal", "random_quotient_pair", "CorpusError"]

KINDS = ("squarefree", "pure-graph", "dim1", "general-monomial")
MAX_VARIABLES = 8


class CorpusError(ValueError):
    pass


def _squarefree_sample(rng: random.Random, n: int, k: int) -> tuple[int, ...]:
    chosen = set(rng.sample(range(n), k))
    return tuple(1 if j in chosen else 0 for j in range(n))


def _squarefree(rng: random.Random, ctx: PolyRingContext) -> MonomialIdeal:
    n = ctx.n
    r = rng.randint(1, min(6, n + 2))
    gens = [_squarefree_sample(rng, n, min(n, rng.choice((1, 2, 2, 2, 3, 3)))) for _ in range(r)]
    return MonomialIdeal(ctx, frozenset(gens))


def _dim1(rng: random.Random, ctx: PolyRingContext) -> MonomialIdeal:
    n = ctx.n
    k = rng.randint(1, n)
    points = sorted(rng.sample(range(n), k))
    delta = SimplicialComplex.from_facets(n, [[v] for v in points])
    return stanley_reisner(delta, ctx)


def _pure_graph(rng: random.Random, ctx: PolyRingContext) -> MonomialIdeal:
    n = ctx.n
    pairs = list(combinations(range(n), 2))
    p = rng.uniform(0.2, 0.7)
    while True:
        edges = [e for e in pairs if rng.random() < p]
        if edges:
            return stanley_reisner(SimplicialComplex.from_facets(n, edges), ctx)


def _general(rng: random.Random, ctx: PolyRingContext) -> MonomialIdeal:
    n = ctx.n
    r = rng.randint(1, 4)
    gens = []
    for _ in range(r):
        g = [0] * n
        for j in rng.sample(range(n), rng.randint(1, min(3, n))):
            g[j] = rng.randint(1, 2)
        gens.append(tuple(g))
    return MonomialIdeal(ctx, frozenset(gens))


_BUILDERS = {
    "squarefree": _squarefree,
    "pure-graph": _pure_graph,
    "dim1": _dim1,
    "general-monomial": _general,
}


def random_ideal(kind: str, n: int, seed: int, max_vars: int = MAX_VARIABLES) -> MonomialIdeal:
    """A reproducible ideal of the requested family in ``x1..xn``."""
    if kind not in _BUILDERS:
        raise CorpusError(f"unknown instance kind {kind!r}; choose from {', '.join(KINDS)}")
    if n > max_vars:
        raise CorpusError(f"n = {n} exceeds the maximum of {max_vars} variables")
    if n < 3 and kind == "pure-graph":
        raise CorpusError("a graph instance needs at least three vertices (one edge gives the zero ideal)")
    if n < 1:
        raise CorpusError("need at least one variable")
    rng = random.Random(f"{kind}:{n}:{seed}")
    ideal = _BUILDERS[kind](rng, PolyRingContext.standard(n))
    if kind == "dim1" and dimension(ideal) != 1:
        raise AssertionError("dim1 generator produced the wrong dimension")
    if kind == "pure-graph" and dimension(ideal) != 2:
        raise AssertionError("graph generator produced the wrong dimension")
    return ideal


def random_quotient_pair(n: int, seed: int) -> tuple[MonomialIdeal, MonomialIdeal]:
    """A squarefree ambient ideal ``J`` and an ideal ``I`` proper and nonzero modulo ``J``.

    ``J`` is principal half of the time, so the ambient is often Cohen-Macaulay.
    """
    if not 3 <= n <= MAX_VARIABLES:
        raise CorpusError(f"quotient pairs need 3 <= n <= {MAX_VARIABLES}")
    rng = random.Random(f"quotient:{n}:{seed}")
    ctx = PolyRingContext.standard(n)
    while True:
        k = 1 if rng.random() < 0.5 else 2
        j = MonomialIdeal(ctx, frozenset(_squarefree_sample(rng, n, rng.randint(2, min(3, n)))
                                         for _ in range(k)))
        i = MonomialIdeal(ctx, frozenset(_squarefree_sample(rng, n, rng.choice((1, 1, 2)))
                                         for _ in range(rng.randint(1, 3))))
        if not i <= j and not (i + j).is_unit:
            return j, i
