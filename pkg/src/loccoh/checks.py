"""Named consistency checks shared by ``verify-all`` and the acceptance suite.

Each check returns ``True``/``False``, or ``None`` when it does not apply to
the instance at hand.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .bass import ScanBoxError
from .cech import (
    AmbientQuotient,
    WindowError,
    all_cohomology_dims,
    cohomological_dimension,
    h0_h1_principal,
    supported_only_at_max,
    windowed_module,
)
from .linalg import ScalarField
from .lyubeznik import (
    LyubeznikTable,
    TableError,
    euler_characteristic,
    is_trivial,
    lyubeznik_table,
    pure_dim2_shape,
    shape_matches_iscm,
)
from .monomial import MonomialIdeal, dimension, height, minimal_primes, to_complex
from .reduction import ann_principal_check, q_containment_check, reduce
from .resolutions import TAYLOR_MAX_GENERATORS, TAYLOR_PREFERRED_GENERATORS, TaylorComplex, hochster_totals, pd
from .seqcm import dimension_filtration, duval_cross_check, is_partially_scm

__all__ = [
    "CheckResult",
    "is_pure_graph",
    "first_free_variable",
    "grade_check",
    "support_check",
    "pure_graph_check",
    "iscm_shape_check",
    "cd_equals_pd",
    "betti_agreement",
    "straightness_check",
    "filtration_dims_check",
    "scm_feasible",
    "verify_all",
]

PASS, FAIL, SKIP, ERROR = "pass", "fail", "skip", "error"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


def is_pure_graph(ideal: MonomialIdeal) -> bool:
    """Squarefree with a pure one-dimensional Stanley-Reisner complex."""
    if not ideal.is_squarefree or ideal.is_zero or ideal.is_unit:
        return False
    delta = to_complex(ideal)
    return delta.dim == 1 and delta.is_pure()


def first_free_variable(ideal: MonomialIdeal) -> int | None:
    """Lowest variable outside every minimal prime."""
    used = 0
    for p in minimal_primes(ideal):
        used |= p
    return next((v for v in range(ideal.n) if not (used >> v) & 1), None)


def _poly(ideal: MonomialIdeal) -> AmbientQuotient:
    return AmbientQuotient.polynomial(ideal.ctx)


def grade_check(ideal: MonomialIdeal, fld: ScalarField | None = None) -> bool | None:
    """Cokernel of ``H^g_I -> (H^g_I)_y`` against ``H^{g+1}_{I+y}`` on the window.

    Applies to CM quotients (``pd = height = g``) with a free variable ``y``.
    The map must also be injective.
    """
    fld = fld or ideal.ctx.fld
    g = height(ideal)
    if g >= ideal.n or pd(ideal, fld) != g:
        return None
    y = first_free_variable(ideal)
    if y is None:
        return None
    amb = _poly(ideal)
    mod = windowed_module(amb, ideal, g, fld)
    h0, h1 = h0_h1_principal(mod, y)
    nxt = windowed_module(amb, ideal + MonomialIdeal.variables(ideal.ctx, [y]), g + 1, fld)
    return not any(h0.values()) and all(h1[b] == nxt.dims[b] for b in mod.degrees)


def support_check(ideal: MonomialIdeal, fld: ScalarField | None = None) -> bool | None:
    if not is_pure_graph(ideal):
        return None
    mod = windowed_module(_poly(ideal), ideal, ideal.n - 1, fld or ideal.ctx.fld)
    return supported_only_at_max(mod)


def pure_graph_check(ideal: MonomialIdeal, table: LyubeznikTable) -> bool | None:
    if not is_pure_graph(ideal):
        return None
    comps = to_complex(ideal).components()
    return pure_dim2_shape(table) and table[0, 1] == comps - 1


def iscm_shape_check(ideal: MonomialIdeal, table: LyubeznikTable,
                     fld: ScalarField | None = None) -> tuple[bool, str]:
    """Shape predicate at every level where the quotient is partially sCM."""
    filt = dimension_filtration(ideal)
    levels = [i for i in range(filt.d + 1) if is_partially_scm(ideal, i, fld, filt)]
    return all(shape_matches_iscm(table, i) for i in levels), f"partially sCM levels {levels}"


def cd_equals_pd(ideal: MonomialIdeal, fld: ScalarField | None = None) -> bool:
    return cohomological_dimension(_poly(ideal), ideal, fld) == pd(ideal, fld)


def betti_agreement(ideal: MonomialIdeal, fld: ScalarField | None = None) -> bool | None:
    """Taylor homology against Hochster's formula; skipped where Taylor is not the route."""
    if len(ideal.gens) > TAYLOR_PREFERRED_GENERATORS:
        return None
    return TaylorComplex(ideal, fld or ideal.ctx.fld).betti == hochster_totals(ideal, fld)


def straightness_check(amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField | None = None,
                       samples: int = 50, seed: int = 0) -> bool:
    """Random far-out degrees agree with their clamped window pieces, for every ``H^i``."""
    fld = fld or amb.fld
    for i in all_cohomology_dims(amb, ideal, fld):
        mod = windowed_module(amb, ideal, i, fld, window_samples=0)
        try:
            mod.check_window(samples, seed + i)
        except WindowError:
            return False
    return True


def filtration_dims_check(ideal: MonomialIdeal) -> bool:
    filt = dimension_filtration(ideal)
    return all(filt.quotient_dim(k) == k for k in filt.jumps())


def _taylor_ok(ideal: MonomialIdeal) -> bool:
    return len(ideal.gens) <= TAYLOR_MAX_GENERATORS


def scm_feasible(ideal: MonomialIdeal) -> bool:
    """Every filtration quotient is either ``R/J`` or a pair small enough to lift Taylor maps."""
    filt = dimension_filtration(ideal)
    for k in filt.jumps():
        hi, lo = filt.ideal(k), filt.ideal(k - 1)
        if not hi.is_unit and max(len(hi.gens), len(lo.gens)) > TAYLOR_PREFERRED_GENERATORS:
            return False
    return True


def verify_all(amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField | None = None, *,
               seed: int = 0, samples: int = 50, scan_box=None, workers: int = 1) -> list[CheckResult]:
    """Run every check that applies to ``I`` in ``A``."""
    fld = fld or amb.fld
    out: list[CheckResult] = []

    def run(name: str, fn: Callable[[], object], expected_errors=()) -> object:
        try:
            val = fn()
        except expected_errors as exc:
            out.append(CheckResult(name, FAIL, str(exc)))
            return None
        except Exception as exc:  # engine failure, reported not raised
            out.append(CheckResult(name, ERROR, f"{type(exc).__name__}: {exc}"))
            return None
        if val is None:
            out.append(CheckResult(name, SKIP, "not applicable"))
        elif isinstance(val, tuple):
            ok, detail = val
            out.append(CheckResult(name, PASS if ok else FAIL, str(detail)))
        else:
            out.append(CheckResult(name, PASS if val else FAIL))
        return val

    polynomial_sf = amb.is_polynomial and ideal.is_squarefree
    table = None
    if polynomial_sf:
        def tab():
            nonlocal table
            table = lyubeznik_table(ideal, fld, scan_box=scan_box, workers=workers)
            return euler_characteristic(table) == 1, f"table {list(map(list, table.entries))}"

        run("euler formula", tab, (TableError, ScanBoxError))
        if table is not None:
            run("bass scan-box boundary", lambda: True)
            run("trivial table in dimension 1",
                lambda: is_trivial(table) if dimension(ideal) == 1 else None)
            run("i-sCM shape", lambda: iscm_shape_check(ideal, table, fld))
            run("pure dimension 2 shape", lambda: pure_graph_check(ideal, table))
        run("support at the maximal ideal", lambda: support_check(ideal, fld))
        run("cd = pd", lambda: cd_equals_pd(ideal, fld))
        run("Hochster/Taylor Betti agreement", lambda: betti_agreement(ideal, fld))
        run("Duval agreement", lambda: duval_cross_check(ideal, fld) == is_partially_scm(ideal, 0, fld)
            if scm_feasible(ideal) else None)
        run("grade", lambda: grade_check(ideal, fld))
    if amb.is_polynomial:
        run("filtration dimensions", lambda: filtration_dims_check(ideal))
    if ideal.is_squarefree:
        run("straightness", lambda: straightness_check(amb, ideal, fld, samples, seed))
        run("reduction invariance", lambda: (True, f"{len(reduce(amb, ideal, fld).steps)} steps"),
            (AssertionError,))
        if _taylor_ok(amb.relations):
            run("annihilator principal", lambda: ann_principal_check(amb, ideal, fld))
        run("Q containment", lambda: q_containment_check(amb, ideal, fld))
    return out
