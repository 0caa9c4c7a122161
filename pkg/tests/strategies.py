"""Hypothesis strategies for small monomial ideals and complexes."""
from hypothesis import strategies as st

from loccoh.monomial import MonomialIdeal, PolyRingContext
from loccoh.simplicial import SimplicialComplex


@st.composite
def squarefree_gens(draw, min_n=1, max_n=5, max_gens=5):
    n = draw(st.integers(min_n, max_n))
    masks = draw(st.lists(st.integers(1, (1 << n) - 1), min_size=1, max_size=max_gens))
    gens = {tuple((m >> j) & 1 for j in range(n)) for m in masks}
    return n, sorted(gens)


@st.composite
def squarefree_ideals(draw, min_n=1, max_n=5, max_gens=5):
    n, gens = draw(squarefree_gens(min_n, max_n, max_gens))
    return MonomialIdeal(PolyRingContext.standard(n), frozenset(gens))


@st.composite
def monomial_ideals(draw, min_n=1, max_n=4, max_exp=3, max_gens=4):
    n = draw(st.integers(min_n, max_n))
    gens = draw(st.lists(st.tuples(*[st.integers(0, max_exp)] * n).filter(any),
                         min_size=1, max_size=max_gens))
    return MonomialIdeal(PolyRingContext.standard(n), frozenset(gens))


@st.composite
def complexes(draw, max_n=5, max_facets=5):
    n = draw(st.integers(1, max_n))
    masks = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=0, max_size=max_facets))
    return SimplicialComplex(n, frozenset(masks))
