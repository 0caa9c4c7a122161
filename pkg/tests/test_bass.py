import pytest
from hypothesis import given, settings

import oracles
from loccoh.bass import DEFAULT_SCAN_BOX, ScanBoxError, bass_numbers, koszul_complex_at
from loccoh.cech import AmbientQuotient, all_cohomology_dims, supported_only_at_max, windowed_module
from loccoh.linalg import cohomology_dims
from loccoh.monomial import MonomialIdeal, PolyRingContext
from strategies import squarefree_ideals

X = PolyRingContext(("x",))
XY = PolyRingContext(("x", "y"))
X4 = PolyRingContext.standard(4)


def ideal(ctx, *gens):
    return MonomialIdeal.from_strings(ctx, gens)


def module(i, k):
    return windowed_module(AmbientQuotient.polynomial(i.ctx), i, k)


SKEW = ideal(X4, "x1", "x3") & ideal(X4, "x2", "x4")


def test_default_scan_box():
    assert DEFAULT_SCAN_BOX == (-2, 1)


def test_h1_of_one_variable():
    prof = bass_numbers(module(ideal(X, "x"), 1))
    assert prof.mu == [1, 0]
    assert prof.contributing_degrees == [((-1,), 0, 1)]


def test_h1_principal_in_two_variables():
    prof = bass_numbers(module(ideal(XY, "x"), 1))
    assert prof.mu == [0, 1, 0]
    assert prof.contributing_degrees == [((-1, -1), 1, 1)]


def test_skew_lines_top_module_has_one_socle_element():
    prof = bass_numbers(module(SKEW, 3))
    assert prof.mu[0] == 1


def test_certified_and_uncertified_scans_agree_on_skew_lines():
    for k in (2, 3):
        mod = module(SKEW, k)
        a, b = bass_numbers(mod, certify=True), bass_numbers(mod, certify=False)
        assert a.mu == b.mu
        assert sorted(a.contributing_degrees) == sorted(b.contributing_degrees)
        assert b.certified_exact == 0


def test_quotient_ambient_is_unsupported():
    amb = AmbientQuotient(ideal(XY, "x*y"))
    with pytest.raises(NotImplementedError):
        bass_numbers(windowed_module(amb, ideal(XY, "x"), 1))


def test_scan_box_must_hold_the_window_corner():
    with pytest.raises(ValueError):
        bass_numbers(module(ideal(XY, "x"), 1), scan_box=(0, 1))


def test_too_small_scan_box_is_reported():
    # the only contribution sits at (-1, -1): a box whose lower edge is -1 sees it on the boundary
    with pytest.raises(ScanBoxError, match="scan box too small"):
        bass_numbers(module(ideal(XY, "x"), 1), scan_box=(-1, 1))


def test_zero_module_has_no_bass_numbers():
    prof = bass_numbers(module(ideal(XY, "x"), 0))
    assert prof.mu == [0, 0, 0] and prof.contributing_degrees == []


def test_koszul_complex_is_a_complex():
    mod = module(SKEW, 2)
    for alpha in [(-1, -1, 0, 0), (-1, 0, -1, 0), (0, 0, 0, 0)]:
        cohomology_dims(koszul_complex_at(mod, alpha))


@settings(max_examples=25)
@given(squarefree_ideals(max_n=4))
def test_contributions_sit_in_the_corner_and_certification_is_sound(i):
    if i.is_unit:
        return
    for k in all_cohomology_dims(AmbientQuotient.polynomial(i.ctx), i):
        mod = module(i, k)
        wide = bass_numbers(mod, scan_box=(-3, 2), certify=False)
        fast = bass_numbers(mod)
        assert wide.mu == fast.mu
        assert len(wide.mu) == i.n + 1
        for alpha, _, _ in wide.contributing_degrees:
            assert set(alpha) <= {-1, 0}


@settings(max_examples=25)
@given(squarefree_ideals(max_n=4))
def test_socle_exists_for_modules_supported_at_the_maximal_ideal(i):
    if i.is_unit:
        return
    for k in all_cohomology_dims(AmbientQuotient.polynomial(i.ctx), i):
        mod = module(i, k)
        if supported_only_at_max(mod):
            assert bass_numbers(mod).mu[0] >= 1


@settings(max_examples=8)
@given(squarefree_ideals(max_n=3, max_gens=3))
def test_bass_numbers_match_wide_box_oracle(i):
    if i.is_unit:
        return
    from loccoh.lyubeznik import lyubeznik_table
    want = oracles.lyubeznik_oracle(sorted(i.gens), i.n)
    assert [list(r) for r in lyubeznik_table(i).entries] == want
