import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from loccoh.cech import AmbientQuotient, cohomological_dimension
from loccoh.corpus import random_quotient_pair
from loccoh.monomial import IdealError, MonomialIdeal, PolyRingContext, sigma_set
from loccoh.reduction import (
    STOP_EMPTY,
    ann_principal_check,
    check_step_invariance,
    principal_annihilator_hypotheses,
    q_containment_check,
    q_containment_details,
    reduce,
)
from strategies import squarefree_ideals

XY = PolyRingContext(("x", "y"))
XYZW = PolyRingContext(("x", "y", "z", "w"))


def ideal(ctx, *gens):
    return MonomialIdeal.from_strings(ctx, gens)


PLANES_AMB = AmbientQuotient(ideal(XYZW, "x*y*z", "x*y*w"))
PLANES_I = ideal(XYZW, "x", "y")


def test_two_planes_meeting_in_a_line_reduce_to_the_plane():
    t = reduce(PLANES_AMB, PLANES_I)
    assert [s.r for s in t.steps] == ["z", "w"]
    assert t.ambient.is_polynomial and t.ambient.ctx.names == ("x", "y")
    assert t.ideal.to_strings() == ["x", "y"]
    assert t.c == 2 and all(s.c == 2 for s in t.steps)
    assert t.steps[0].annihilator.to_strings() == ["w", "z"] or \
        sorted(t.steps[0].annihilator.to_strings()) == ["w", "z"]
    assert t.reason == STOP_EMPTY
    assert t.steps[-1].pieces_after == {(-1, -1): 1}


def test_trace_json():
    js = reduce(PLANES_AMB, PLANES_I).to_json()
    assert [s["r"] for s in js["steps"]] == ["z", "w"]
    assert js["final_ambient"] == "k[x,y]" and js["final_annihilator"] == []


def test_polynomial_ambient_takes_no_step():
    t = reduce(AmbientQuotient.polynomial(XY), ideal(XY, "x"))
    assert t.steps == [] and t.reason == STOP_EMPTY and t.annihilator.is_zero


def test_point_quotient_stops_at_once():
    ctx = PolyRingContext(("x", "y", "z"))
    t = reduce(AmbientQuotient.polynomial(ctx), ideal(ctx, "x", "y"))
    assert t.steps == []


def test_bad_pairs_rejected():
    with pytest.raises(IdealError):
        reduce(PLANES_AMB, ideal(XYZW, "x*y*z"))
    with pytest.raises(IdealError):
        reduce(PLANES_AMB, MonomialIdeal.unit(XYZW))
    with pytest.raises(IdealError):
        reduce(PLANES_AMB, ideal(XY, "x"))


def test_non_cm_ambient_fails_hypotheses():
    assert not principal_annihilator_hypotheses(PLANES_AMB, PLANES_I)
    assert ann_principal_check(PLANES_AMB, PLANES_I)


def test_q_containment_after_killing_z():
    d = q_containment_details(PLANES_AMB, PLANES_I)
    assert d["applicable"] and d["y"] == "z" and d["holds"]
    assert d["image"] == ["w"] and d["q"] == ["w"]


def test_q_containment_vacuous_without_free_variable():
    d = q_containment_details(AmbientQuotient.polynomial(XY), ideal(XY, "x", "y"))
    assert not d["applicable"] and d["holds"]


def test_zero_annihilator_gives_containment():
    assert q_containment_check(AmbientQuotient.polynomial(XY), ideal(XY, "x"))


def test_zero_divisor_step_keeps_the_dimension():
    ctx = PolyRingContext.standard(3)
    amb = AmbientQuotient(ideal(ctx, "x2*x3"))
    t = reduce(amb, ideal(ctx, "x3"))
    assert [s.r for s in t.steps] == ["x2"] and t.c == 1
    assert t.ambient.is_polynomial and t.ambient.dim == amb.dim == 2
    check_step_invariance(t.steps[0])


def test_reduction_is_deterministic():
    a, b = reduce(PLANES_AMB, PLANES_I), reduce(PLANES_AMB, PLANES_I)
    assert a.to_json() == b.to_json()


def _check_trace(amb, i):
    t = reduce(amb, i)
    c = cohomological_dimension(amb, i)
    assert len(t.steps) <= amb.n and t.c == c
    for s in t.steps:
        assert s.c == c
        # one variable fewer; the Krull dimension need not drop when x_v is a zero divisor of A
        assert s.ambient_after.n == s.ambient_before.n - 1
        assert s.ambient_after.dim <= s.ambient_before.dim
        assert s.ambient_after.dim == s.ambient_before.dim - 1 or s.ambient_before.relations.colon(
            MonomialIdeal.variables(s.ambient_before.ctx, [s.variable])) != s.ambient_before.relations
        single = tuple(int(j == s.variable) for j in range(s.ambient_before.n))
        assert single in s.annihilator.gens
        assert single in sigma_set(s.ideal_before, s.ambient_before.relations)
        check_step_invariance(s)
    return t


@settings(max_examples=40)
@given(st.integers(3, 6), st.integers(0, 10 ** 6))
def test_quotient_pairs_reduce_cleanly(n, seed):
    j, i = random_quotient_pair(n, seed)
    amb = AmbientQuotient(j)
    _check_trace(amb, i)
    assert ann_principal_check(amb, i)
    assert q_containment_check(amb, i)


@settings(max_examples=30)
@given(squarefree_ideals(min_n=2, max_n=5))
def test_polynomial_ambients_never_reduce(i):
    # monomial annihilators of local cohomology over a polynomial ring are zero
    assume(not i.is_unit and not i.is_zero)
    t = _check_trace(AmbientQuotient.polynomial(i.ctx), i)
    assert t.steps == [] and t.annihilator.is_zero
