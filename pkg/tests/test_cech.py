import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from loccoh.cech import (
    AmbientQuotient,
    WindowError,
    all_cohomology_dims,
    annihilates,
    annihilator,
    cech_complex_at_degree,
    clamp,
    cohomological_dimension,
    h0_h1_principal,
    localize_at_variable,
    raw_complex_at_degree,
    supported_only_at_max,
    windowed_module,
)
from loccoh.linalg import ScalarField, cohomology_dims
from loccoh.monomial import IdealError, MonomialIdeal, PolyRingContext, dimension
from loccoh.resolutions import pd
from strategies import squarefree_gens, squarefree_ideals

XY = PolyRingContext(("x", "y"))
X = PolyRingContext(("x",))
XYZ = PolyRingContext(("x", "y", "z"))
XYZW = PolyRingContext(("x", "y", "z", "w"))
XYW = PolyRingContext(("x", "y", "w"))
X4 = PolyRingContext.standard(4)


def ideal(ctx, *gens):
    return MonomialIdeal.from_strings(ctx, gens)


def poly(ctx):
    return AmbientQuotient.polynomial(ctx)


SKEW = ideal(X4, "x1", "x3") & ideal(X4, "x2", "x4")
SW_AMB = AmbientQuotient(ideal(XYZW, "x*y*z", "x*y*w"))
SW_I = ideal(XYZW, "x", "y")


# -- single degrees ---------------------------------------------------------------


def test_cech_degree_principal_ideal():
    cx = cech_complex_at_degree(poly(XY), ideal(XY, "x*y"), (-1, -1))
    assert cx.term_dims == (0, 1)
    assert cohomology_dims(cx) == [0, 1]
    assert oracles.local_cohomology_dims([(1, 1)], (-1, -1)) == [0, 1]


def test_cech_degree_exact_in_nonnegative_degree():
    cx = cech_complex_at_degree(poly(XY), ideal(XY, "x"), (0, 0))
    assert cx.term_dims == (1, 1)
    assert cohomology_dims(cx) == [0, 0]


def test_cech_degree_in_quotient_ambient():
    amb = AmbientQuotient(ideal(XY, "x*y"))
    cx = cech_complex_at_degree(amb, ideal(XY, "x"), (-1, 0))
    assert cohomology_dims(cx)[1] == 1
    assert oracles.local_cohomology_dims([(1, 0)], (-1, 0), relations=[(1, 1)])[1] == 1


def test_cech_rejects_improper_ideal():
    with pytest.raises(IdealError):
        cech_complex_at_degree(poly(XY), MonomialIdeal.unit(XY), (0, 0))
    with pytest.raises(IdealError):
        cech_complex_at_degree(poly(XY), MonomialIdeal.zero(XY), (0, 0))


def test_quotient_ambient_rejects_non_squarefree_relations():
    with pytest.raises(IdealError):
        AmbientQuotient(ideal(XY, "x^2"))


# -- windowed modules ---------------------------------------------------------------


def test_window_of_h1_principal_variable():
    mod = windowed_module(poly(XY), ideal(XY, "x"), 1)
    assert mod.nonzero_pieces() == {(-1, 0): 1, (-1, 1): 1}
    step = mod.step((-1, 0), 1)
    assert step.shape == (1, 1) and step[0, 0] != 0


def test_skew_lines_top_module_is_one_socle_piece():
    mod = windowed_module(poly(X4), SKEW, 3)
    assert mod.nonzero_pieces() == {(-1, -1, -1, -1): 1}
    gens = sorted(SKEW.gens)
    for beta in itertools.product((-2, -1, 0, 1), repeat=4):
        assert oracles.local_cohomology_dims(gens, beta)[3] == mod.dim(beta)


def test_index_beyond_cech_length_is_zero():
    mod = windowed_module(poly(XY), ideal(XY, "x"), 3)
    assert mod.is_zero()


def test_cohomological_dimension_examples():
    assert cohomological_dimension(poly(XYZW), ideal(XYZW, "x", "y")) == 2
    assert cohomological_dimension(poly(X4), SKEW) == 3
    assert cohomological_dimension(SW_AMB, SW_I) == 2


def test_annihilator_examples():
    assert annihilator(windowed_module(poly(X), ideal(X, "x"), 1)).is_zero
    assert annihilator(windowed_module(SW_AMB, SW_I, 2)) == ideal(XYZW, "z", "w")
    amb = AmbientQuotient(ideal(XYW, "x*y*w"))
    assert annihilator(windowed_module(amb, ideal(XYW, "x", "y"), 2)) == ideal(XYW, "w")


def test_annihilator_examples_match_brute_force():
    want = oracles.annihilator_oracle([(1, 0, 0, 0), (0, 1, 0, 0)], 4, 2, relations=[(1, 1, 1, 0), (1, 1, 0, 1)])
    assert sorted(annihilator(windowed_module(SW_AMB, SW_I, 2)).gens) == want
    want = oracles.annihilator_oracle([(1, 0, 0), (0, 1, 0)], 3, 2, relations=[(1, 1, 1)])
    amb = AmbientQuotient(ideal(XYW, "x*y*w"))
    assert sorted(annihilator(windowed_module(amb, ideal(XYW, "x", "y"), 2)).gens) == want


def test_annihilator_of_zero_module_is_an_error():
    with pytest.raises(ValueError):
        annihilator(windowed_module(poly(XY), ideal(XY, "x"), 0))


def test_localization_of_h1_at_the_other_variable():
    # y is injective on H^1_(x) but not onto: the cokernel is H^2_(x,y)
    mod = windowed_module(poly(XY), ideal(XY, "x"), 1)
    loc = localize_at_variable(mod, 1)
    assert loc.dims[(-1, -1)] == 1 and mod.dims[(-1, -1)] == 0
    h0, h1 = h0_h1_principal(mod, 1)
    assert not any(h0.values())
    assert {b: d for b, d in h1.items() if d} == {(-1, -1): 1}
    assert oracles.local_cohomology_dims([(1, 0), (0, 1)], (-1, -1))[2] == 1


def test_localization_at_the_support_variable_is_zero():
    mod = windowed_module(poly(XY), ideal(XY, "x"), 1)
    assert localize_at_variable(mod, 0).is_zero()
    h0, h1 = h0_h1_principal(mod, 0)
    assert h0 == mod.dims and not any(h1.values())


def test_localization_cokernel_is_next_local_cohomology():
    mod = windowed_module(poly(XYZ), ideal(XYZ, "x", "y"), 2)
    _, h1 = h0_h1_principal(mod, 2)
    top = windowed_module(poly(XYZ), ideal(XYZ, "x", "y", "z"), 3)
    assert h1 == top.dims
    assert top.nonzero_pieces() == {(-1, -1, -1): 1}


def test_support_examples():
    assert supported_only_at_max(windowed_module(poly(X4), SKEW, 3))
    assert not supported_only_at_max(windowed_module(poly(XY), ideal(XY, "x"), 1))
    assert supported_only_at_max(windowed_module(poly(XY), ideal(XY, "x"), 0))


def test_window_error_on_disagreement(monkeypatch):
    mod = windowed_module(poly(XY), ideal(XY, "x"), 1)
    monkeypatch.setattr(mod, "_direct_dim", lambda g: mod.dim(g) + 1)
    with pytest.raises(WindowError):
        mod.check_window(3)


def test_raw_complex_agrees_with_brute_force_in_quotients():
    amb = AmbientQuotient(ideal(XYZW, "x*y*z", "x*y*w"))
    i = ideal(XYZW, "x", "y*z")
    rels = sorted(amb.relations.gens)
    for beta in itertools.product((-2, 0, 2), repeat=4):
        cx = raw_complex_at_degree(amb, i, beta)
        assert cohomology_dims(cx) == oracles.local_cohomology_dims(sorted(i.gens), beta, rels)


# -- properties ----------------------------------------------------------------------


@given(squarefree_ideals(max_n=4))
def test_pieces_match_brute_force_and_are_bounded(i):
    if i.is_unit:
        return
    amb = poly(i.ctx)
    gens = sorted(i.gens)
    r = len(gens)
    dims = {beta: oracles.local_cohomology_dims(gens, beta) for beta in itertools.product((-1, 0, 1), repeat=i.n)}
    for k in range(r + 1):
        mod = windowed_module(amb, i, k)
        for beta, d in mod.dims.items():
            assert d == dims[beta][k]
            assert d <= 2 ** r


@given(squarefree_ideals(max_n=4), st.sampled_from([0, 2, 3]))
def test_nerve_and_cech_models_agree(i, p):
    if i.is_unit:
        return
    ctx = i.ctx.with_field(ScalarField(p))
    i = MonomialIdeal(ctx, i.gens)
    amb = poly(ctx)
    for k in range(i.n + 1):
        a = windowed_module(amb, i, k, method="cech")
        b = windowed_module(amb, i, k, method="nerve")
        assert a.dims == b.dims


@given(squarefree_ideals(max_n=4))
def test_step_maps_commute(i):
    if i.is_unit:
        return
    amb = poly(i.ctx)
    for k in range(1, i.n + 1):
        windowed_module(amb, i, k).check_commuting()


@settings(max_examples=15)
@given(squarefree_ideals(max_n=5))
def test_straightness_sampling_at_fifty_degrees(i):
    if i.is_unit:
        return
    amb = poly(i.ctx)
    for k in all_cohomology_dims(amb, i):
        windowed_module(amb, i, k, window_samples=0).check_window(50, seed=k)


@settings(max_examples=15)
@given(squarefree_ideals(min_n=3, max_n=4), squarefree_ideals(min_n=3, max_n=4))
def test_straightness_in_quotient_ambients(j, i):
    if i.n != j.n:
        return
    i = MonomialIdeal(j.ctx, i.gens)
    if j.is_unit or i.is_unit or i <= j or (i + j).is_unit:
        return
    amb = AmbientQuotient(j)
    for k in all_cohomology_dims(amb, i):
        windowed_module(amb, i, k, window_samples=0).check_window(50, seed=k)


@given(squarefree_ideals(max_n=5))
def test_cd_equals_projective_dimension(i):
    if i.is_unit:
        return
    assert cohomological_dimension(poly(i.ctx), i) == pd(i)


@settings(max_examples=20)
@given(squarefree_ideals(max_n=3))
def test_annihilator_box_two_matches_brute_force(i):
    if i.is_unit:
        return
    amb = poly(i.ctx)
    c = cohomological_dimension(amb, i)
    got = sorted(annihilator(windowed_module(amb, i, c)).gens)
    assert got == oracles.annihilator_oracle(sorted(i.gens), i.n, c)


@settings(max_examples=20)
@given(squarefree_ideals(min_n=2, max_n=4), st.data())
def test_exponent_two_and_three_give_the_same_verdict(i, data):
    if i.is_unit:
        return
    amb = poly(i.ctx)
    c = cohomological_dimension(amb, i)
    mod = windowed_module(amb, i, c)
    b = list(data.draw(st.lists(st.integers(0, 2), min_size=i.n, max_size=i.n)))
    j = data.draw(st.integers(0, i.n - 1))
    b2, b3 = list(b), list(b)
    b2[j], b3[j] = 2, 3
    assert annihilates(mod, b2) == annihilates(mod, b3)


@settings(max_examples=20)
@given(squarefree_ideals(min_n=3, max_n=4), squarefree_ideals(min_n=3, max_n=4))
def test_parameter_never_annihilates_the_top_module(j, i):
    if i.n != j.n:
        return
    i = MonomialIdeal(j.ctx, i.gens)
    if j.is_unit or i.is_unit or i <= j or (i + j).is_unit:
        return
    amb = AmbientQuotient(j)
    top = windowed_module(amb, i, amb.dim)
    if top.is_zero():
        return
    ann = annihilator(top)
    for v in range(i.n):
        cut = j + MonomialIdeal.variables(j.ctx, [v])
        if not cut.is_unit and dimension(cut) == amb.dim - 1:
            assert not ann.contains(j.ctx.variable(v))


def test_clamp():
    assert clamp((-5, 0, 7)) == (-1, 0, 1)
