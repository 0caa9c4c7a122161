"""Multigraded local cohomology ``H^i_I(R/J)`` for squarefree ``J``.

Degree ``beta`` of the Cech complex on the minimal generators ``m_1..m_r`` of
``I`` has one spot per subset ``S`` of generators; the spot
``((R/J)_{m_S})_beta`` is one-dimensional or zero, and multiplication by a
variable is the identity on spots that stay nonzero.  Whether a spot is
nonzero depends only on the sign classes ``beta_j < 0``, ``beta_j = 0`` and
``beta_j > 0`` (``J`` squarefree), so every piece and every multiplication
map is determined by its value on the window ``{-1, 0, 1}^n``.

Two complex models produce the pieces:

``"cech"``
    the Cech complex itself (``2^r`` spots per degree);
``"nerve"``
    for the polynomial ambient only.  In degree ``beta`` with negative set
    ``N`` the Cech complex is the relative cochain complex of the full
    simplex on the generators modulo the subcomplex of subsets whose support
    misses a variable of ``N``.  By the nerve lemma that subcomplex has the
    cohomology of ``{T subset of N : some generator avoids T}``, a complex on
    at most ``n`` vertices; multiplication maps become restrictions.

Both models label basis vectors so that every chain map between degrees
``u <= v`` is the identity on labels present at both ends.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .linalg import QQ, Cohomology, ScalarField, VectorSpaceComplex, cohomology_dims, rank
from .monomial import IdealError, MonomialIdeal, PolyRingContext, dimension, set_variable_to_zero
from .simplicial import coboundary_matrix, mask_of, members, popcount

__all__ = [
    "AmbientQuotient",
    "WindowError",
    "WindowedModule",
    "cech_complex_at_degree",
    "windowed_module",
    "cohomological_dimension",
    "annihilator",
    "localize_at_variable",
    "h0_h1_principal",
    "supported_only_at_max",
    "window_degrees",
    "clamp",
    "CECH_MAX_GENERATORS",
]

Degree = tuple[int, ...]

#: Above this many generators the polynomial ambient uses the nerve model.
CECH_MAX_GENERATORS = 10


class WindowError(RuntimeError):
    """A piece outside the window disagrees with its clamped window piece."""


def clamp(beta: Sequence[int]) -> Degree:
    return tuple(-1 if b < -1 else (1 if b > 1 else b) for b in beta)


def window_degrees(n: int) -> list[Degree]:
    return list(itertools.product((-1, 0, 1), repeat=n))


@dataclass(frozen=True)
class AmbientQuotient:
    """``A = k[x_1..x_n]/J`` with ``J`` squarefree (possibly zero)."""

    relations: MonomialIdeal

    def __post_init__(self):
        j = self.relations
        if j.is_unit:
            raise IdealError("ambient relations must be a proper ideal")
        if not j.is_squarefree:
            raise IdealError("only squarefree ambient relations are supported")

    @classmethod
    def polynomial(cls, ctx: PolyRingContext) -> "AmbientQuotient":
        return cls(MonomialIdeal.zero(ctx))

    @property
    def ctx(self) -> PolyRingContext:
        return self.relations.ctx

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def fld(self) -> ScalarField:
        return self.ctx.fld

    @property
    def is_polynomial(self) -> bool:
        return self.relations.is_zero

    @cached_property
    def dim(self) -> int:
        return dimension(self.relations)

    def quotient_by_variable(self, v: int) -> "AmbientQuotient":
        """``A/x_v A``, written over the ring without ``x_v``."""
        return AmbientQuotient(set_variable_to_zero(self.relations, v))

    def __str__(self) -> str:
        base = f"k[{','.join(self.ctx.names)}]"
        return base if self.is_polynomial else f"{base}/{self.relations}"


def _sign_masks(beta: Sequence[int]) -> tuple[int, int]:
    neg = pos = 0
    for j, b in enumerate(beta):
        if b < 0:
            neg |= 1 << j
        elif b > 0:
            pos |= 1 << j
    return neg, pos


# ---------------------------------------------------------------------------
# complex models


class _Model:
    """Cochain complexes of one degree, keyed by what the degree determines."""

    name = ""

    def key(self, beta: Sequence[int]):
        raise NotImplementedError

    def labels(self, key, t: int) -> list[int]:
        raise NotImplementedError

    def differential(self, key, t: int) -> np.ndarray:
        raise NotImplementedError

    top = 0


class _CechModel(_Model):
    name = "cech"

    def __init__(self, amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField):
        self.fld = fld
        self.gens = ideal.sorted_gens()
        self.r = len(self.gens)
        self.top = self.r
        g = np.array(self.gens, dtype=np.int64).reshape(self.r, amb.n)
        lcms = _kernels.subset_lcms(g)
        weights = (1 << np.arange(amb.n, dtype=np.int64))
        self.supp = ((lcms > 0).astype(np.int64) * weights).sum(axis=1)
        self.sizes = np.array([popcount(s) for s in range(1 << self.r)], dtype=np.int64)
        self.rel = [int(m) for m in amb.relations.support_masks]
        self._spots: dict = {}
        self._cx: dict = {}

    def spots(self, neg: int, pos: int) -> np.ndarray:
        """Boolean mask over generator subsets: which Cech spots are nonzero."""
        ok = (self.supp & neg) == neg
        for g in self.rel:
            ok &= (g & ~(self.supp | pos)) != 0
        return ok

    def key(self, beta):
        neg, pos = _sign_masks(beta)
        if not self.rel:
            pos = 0
        k = self._spots.get((neg, pos))
        if k is None:
            k = self.spots(neg, pos).tobytes()
            self._spots[(neg, pos)] = k
        return k

    def _terms(self, key) -> list[list[int]]:
        hit = self._cx.get(key)
        if hit is None:
            ok = np.frombuffer(key, dtype=np.bool_)
            idx = np.nonzero(ok)[0]
            hit = [[] for _ in range(self.r + 1)]
            for s in idx:
                hit[self.sizes[s]].append(int(s))
            self._cx[key] = hit
        return hit

    def labels(self, key, t):
        if t < 0 or t > self.r:
            return []
        return self._terms(key)[t]

    def differential(self, key, t):
        src = self.labels(key, t)
        tgt = self.labels(key, t + 1)
        return cech_differential(src, tgt, self.r, self.fld)


def cech_differential(src: list[int], tgt: list[int], r: int, fld: ScalarField) -> np.ndarray:
    """``e_S -> sum_k (-1)^{#(s in S, s < k)} e_{S + k}`` on the given spots."""
    index = {s: i for i, s in enumerate(src)}
    d = fld.zeros(len(tgt), len(src))
    minus = fld.characteristic - 1 if fld.characteristic else -1
    for row, t in enumerate(tgt):
        for k in members(t):
            col = index.get(t & ~(1 << k))
            if col is None:
                continue
            below = popcount(t & ((1 << k) - 1))
            d[row, col] = 1 if below % 2 == 0 else minus
    return d


class _NerveModel(_Model):
    name = "nerve"

    def __init__(self, amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField):
        if not amb.is_polynomial:
            raise ValueError("the nerve model needs the polynomial ambient")
        self.fld = fld
        self.n = amb.n
        self.top = amb.n + 1
        self.gen_supports = sorted(set(ideal.support_masks))
        self._faces: dict[int, list[list[int]]] = {}

    def key(self, beta):
        return _sign_masks(beta)[0]

    def _by_size(self, neg: int) -> list[list[int]]:
        hit = self._faces.get(neg)
        if hit is None:
            hit = [[] for _ in range(self.n + 2)]
            if neg:
                sub = neg
                while True:
                    if any(g & sub == 0 for g in self.gen_supports):
                        hit[popcount(sub)].append(sub)
                    if sub == 0:
                        break
                    sub = (sub - 1) & neg
                for lst in hit:
                    lst.sort()
            self._faces[neg] = hit
        return hit

    def labels(self, key, t):
        # Cech term t <-> faces with t - 1 vertices
        if t < 1 or t > self.n + 1:
            return []
        return self._by_size(key)[t - 1]

    def differential(self, key, t):
        return coboundary_matrix(self.labels(key, t), self.labels(key, t + 1), self.fld)


def _label_map(src: list[int], tgt: list[int], fld: ScalarField) -> np.ndarray:
    """Chain-map component that is the identity on shared labels."""
    m = fld.zeros(len(tgt), len(src))
    if not src or not tgt:
        return m
    index = {s: i for i, s in enumerate(src)}
    for row, t in enumerate(tgt):
        col = index.get(t)
        if col is not None:
            m[row, col] = 1
    return m


def _make_model(amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField, method: str) -> _Model:
    if method == "auto":
        method = "cech" if (len(ideal.gens) <= CECH_MAX_GENERATORS or not amb.is_polynomial) else "nerve"
    if method == "cech":
        if len(ideal.gens) > 20:
            raise ValueError("too many generators for the Cech model")
        return _CechModel(amb, ideal, fld)
    if method == "nerve":
        return _NerveModel(amb, ideal, fld)
    raise ValueError(f"unknown method {method!r}")


def _check_inputs(amb: AmbientQuotient, ideal: MonomialIdeal) -> None:
    if ideal.ctx.names != amb.ctx.names:
        raise IdealError("ideal and ambient live in different rings")
    if ideal.is_zero:
        raise IdealError("I must be nonzero")
    if (ideal + amb.relations).is_unit:
        raise IdealError("I must be proper in the ambient")


def cech_complex_at_degree(amb: AmbientQuotient, ideal: MonomialIdeal, beta: Sequence[int],
                           fld: ScalarField | None = None) -> VectorSpaceComplex:
    """The Cech complex on the minimal generators of ``I``, in degree ``beta``."""
    _check_inputs(amb, ideal)
    fld = fld or amb.fld
    if len(beta) != amb.n:
        raise ValueError("degree has the wrong length")
    model = _CechModel(amb, ideal, fld)
    key = model.key(tuple(beta))
    dims = tuple(len(model.labels(key, t)) for t in range(model.r + 1))
    diffs = tuple(model.differential(key, t) for t in range(model.r))
    return VectorSpaceComplex(dims, diffs, fld)


#: Largest generator count for which the sampled check rebuilds the full
#: Cech complex; above it the nerve is rebuilt instead.
RAW_CECH_MAX_GENERATORS = CECH_MAX_GENERATORS


def raw_complex_at_degree(amb: AmbientQuotient, ideal: MonomialIdeal, beta: Sequence[int],
                          fld: ScalarField | None = None) -> VectorSpaceComplex:
    """Degree-``beta`` Cech complex from first principles, no sign classes or caches.

    ``x^beta`` lives in ``A_f`` iff its negative exponents sit on variables of
    ``f``; it is zero there iff a relation divides ``x^beta * f^k`` for large
    ``k``.  Above :data:`RAW_CECH_MAX_GENERATORS` the (polynomial) nerve is
    rebuilt directly from the generator supports.
    """
    fld = fld or amb.fld
    beta = tuple(int(b) for b in beta)
    gens = ideal.sorted_gens()
    r = len(gens)
    if r > RAW_CECH_MAX_GENERATORS and amb.is_polynomial:
        neg = sum(1 << j for j, b in enumerate(beta) if b < 0)
        supports = [sum(1 << j for j, e in enumerate(g) if e) for g in gens]
        faces = [[] for _ in range(amb.n + 2)]
        for t in range(1 << amb.n):
            if t & ~neg == 0 and neg and any(s & t == 0 for s in supports):
                faces[popcount(t) + 1].append(t)
        dims = tuple(len(f) for f in faces)
        diffs = tuple(coboundary_matrix(faces[k], faces[k + 1], fld) for k in range(len(faces) - 1))
        return VectorSpaceComplex(dims, diffs, fld)
    gsupp = [sum(1 << j for j, e in enumerate(g) if e) for g in gens]
    rels = sorted(amb.relations.gens)
    terms: list[list[int]] = [[] for _ in range(r + 1)]
    for s in range(1 << r):
        sup = 0
        for k in members(s):
            sup |= gsupp[k]
        if any(b < 0 and not (sup >> j) & 1 for j, b in enumerate(beta)):
            continue
        killed = any(all(e == 0 or (sup >> j) & 1 or beta[j] >= e for j, e in enumerate(h)) for h in rels)
        if not killed:
            terms[popcount(s)].append(s)
    dims = tuple(len(t) for t in terms)
    diffs = tuple(cech_differential(terms[t], terms[t + 1], r, fld) for t in range(r))
    return VectorSpaceComplex(dims, diffs, fld)


# ---------------------------------------------------------------------------
# windowed modules


class WindowedModule:
    """The pieces of ``H^i_I(A)`` on ``{-1,0,1}^n`` with multiplication maps.

    ``dim(beta)`` accepts any integer degree (it is clamped first).
    ``window_map(u, v)`` is multiplication by ``x^(v-u)`` from window degree
    ``u`` to window degree ``v``; coordinates with ``u_j == v_j`` act as the
    identity, which is how a coordinate beyond the window edge behaves.
    """

    def __init__(self, amb: AmbientQuotient, ideal: MonomialIdeal, index: int,
                 fld: ScalarField | None = None, method: str = "auto", workers: int = 1,
                 window_samples: int = 2, seed: int = 0, _model: _Model | None = None):
        _check_inputs(amb, ideal)
        self.ambient = amb
        self.ideal = ideal
        self.index = index
        self.fld = fld or amb.fld
        self.n = amb.n
        self.model = _model or _make_model(amb, ideal, self.fld, method)
        self._coh: dict = {}
        self._maps: dict = {}
        self.degrees = window_degrees(self.n)
        self.keys = {b: self.model.key(b) for b in self.degrees}
        distinct = list(dict.fromkeys(self.keys.values()))
        if workers > 1 and len(distinct) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(self._dim_of, distinct))
        else:
            results = [self._dim_of(k) for k in distinct]
        key_dims = dict(zip(distinct, results))
        self.dims = {b: key_dims[self.keys[b]] for b in self.degrees}
        if window_samples:
            self.check_window(window_samples, seed)

    # -- construction helpers -------------------------------------------

    def _cohomology_of(self, key) -> Cohomology:
        t = self.index
        m = self.model
        here = len(m.labels(key, t))
        d_in = m.differential(key, t - 1) if t > 0 else None
        d_out = m.differential(key, t)
        return Cohomology(d_in, d_out, here, self.fld)

    def _dim_of(self, key) -> int:
        """Piece dimension from two ranks; bases are built only when maps need them."""
        t = self.index
        m = self.model
        here = len(m.labels(key, t))
        if not here:
            return 0
        r_out = rank(m.differential(key, t), self.fld)
        r_in = rank(m.differential(key, t - 1), self.fld) if t > 0 else 0
        return here - r_out - r_in

    def piece(self, beta: Sequence[int]) -> Cohomology:
        """Explicit cohomology (representatives and projector) at ``beta``."""
        key = self.keys[clamp(beta)]
        hit = self._coh.get(key)
        if hit is None:
            hit = self._cohomology_of(key)
            if hit.dim != self.dims[clamp(beta)]:
                raise AssertionError("rank count and explicit basis disagree")
            self._coh[key] = hit
        return hit

    @property
    def pieces(self) -> dict[Degree, Cohomology]:
        return {b: self.piece(b) for b in self.degrees}

    def _direct_dim(self, beta: Sequence[int]) -> int:
        """Piece dimension at an actual degree, rebuilt from divisibility alone."""
        cx = raw_complex_at_degree(self.ambient, self.ideal, beta, self.fld)
        t = self.index
        if t >= len(cx.term_dims) or cx.term_dims[t] == 0:
            return 0
        r_out = rank(cx.differentials[t], self.fld) if t < len(cx.differentials) else 0
        r_in = rank(cx.differentials[t - 1], self.fld) if t > 0 else 0
        return cx.term_dims[t] - r_out - r_in

    def check_window(self, samples: int = 50, seed: int = 0, spread: int = 4) -> None:
        """Sampled check that off-window pieces equal clamped window pieces."""
        rng = random.Random(seed)
        for _ in range(samples):
            g = tuple(rng.randint(-spread, spread) for _ in range(self.n))
            direct = self._direct_dim(g)
            if direct != self.dim(g):
                raise WindowError(
                    f"window assumption violated at degree {g}: {direct} != {self.dim(g)}"
                )

    # -- queries ----------------------------------------------------------

    @property
    def fld_name(self) -> str:
        return str(self.fld)

    @property
    def method(self) -> str:
        return self.model.name

    def dim(self, beta: Sequence[int]) -> int:
        return self.dims[clamp(beta)]

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def nonzero_pieces(self) -> dict[Degree, int]:
        return {b: d for b, d in self.dims.items() if d}

    def window_map(self, u: Sequence[int], v: Sequence[int]) -> np.ndarray:
        u = clamp(u)
        v = clamp(v)
        if any(a > b for a, b in zip(u, v)):
            raise ValueError(f"no multiplication map from {u} to {v}")
        if self.dims[u] == 0 or self.dims[v] == 0:
            return self.fld.zeros(self.dims[v], self.dims[u])
        src, tgt = self.piece(u), self.piece(v)
        ku, kv = self.keys[u], self.keys[v]
        hit = self._maps.get((ku, kv))
        if hit is None:
            t = self.index
            chain = _label_map(self.model.labels(ku, t), self.model.labels(kv, t), self.fld)
            hit = src.induced(chain, tgt)
            self._maps[(ku, kv)] = hit
        return hit

    def step(self, beta: Sequence[int], j: int) -> np.ndarray:
        """Multiplication by ``x_j`` from ``beta`` (``beta_j`` in {-1, 0})."""
        beta = tuple(beta)
        if beta[j] not in (-1, 0):
            raise ValueError("step maps start at beta_j in {-1, 0}")
        up = beta[:j] + (beta[j] + 1,) + beta[j + 1 :]
        return self.window_map(beta, up)

    def step_maps(self) -> dict[tuple[Degree, int], np.ndarray]:
        return {
            (b, j): self.step(b, j)
            for b in self.degrees
            for j in range(self.n)
            if b[j] in (-1, 0)
        }

    def check_commuting(self) -> None:
        f = self.fld
        for b in self.degrees:
            for j, l in itertools.combinations(range(self.n), 2):
                if b[j] == 1 or b[l] == 1:
                    continue
                bj = b[:j] + (b[j] + 1,) + b[j + 1 :]
                bl = b[:l] + (b[l] + 1,) + b[l + 1 :]
                top = bj[:l] + (bj[l] + 1,) + bj[l + 1 :]
                a1 = f.matmul(self.window_map(bj, top), self.window_map(b, bj))
                a2 = f.matmul(self.window_map(bl, top), self.window_map(b, bl))
                if not np.array_equal(a1, a2):
                    raise AssertionError(f"square at {b} in directions {j},{l} does not commute")

    def piece_table(self) -> dict[str, int]:
        return {",".join(map(str, b)): d for b, d in sorted(self.dims.items()) if d}

    def __repr__(self) -> str:
        return (f"WindowedModule(H^{self.index}_{self.ideal} over {self.ambient}, "
                f"total={self.total_dim()}, method={self.method})")


def windowed_module(amb: AmbientQuotient, ideal: MonomialIdeal, i: int,
                    fld: ScalarField | None = None, **kw) -> WindowedModule:
    if i < 0:
        raise ValueError("cohomological index must be non-negative")
    return WindowedModule(amb, ideal, i, fld, **kw)


def all_cohomology_dims(amb: AmbientQuotient, ideal: MonomialIdeal, fld: ScalarField | None = None,
                        method: str = "auto") -> dict[int, int]:
    """``i -> total window dimension of H^i_I(A)``, for every ``i``."""
    _check_inputs(amb, ideal)
    fld = fld or amb.fld
    model = _make_model(amb, ideal, fld, method)
    totals: dict[int, int] = {}
    cache: dict = {}
    for b in window_degrees(amb.n):
        key = model.key(b)
        hs = cache.get(key)
        if hs is None:
            dims = tuple(len(model.labels(key, t)) for t in range(model.top + 1))
            diffs = tuple(model.differential(key, t) for t in range(model.top))
            hs = cohomology_dims(VectorSpaceComplex(dims, diffs, fld), check=False)
            cache[key] = hs
        for i, h in enumerate(hs):
            if h:
                totals[i] = totals.get(i, 0) + h
    return totals


def cohomological_dimension(amb: AmbientQuotient, ideal: MonomialIdeal,
                            fld: ScalarField | None = None, method: str = "auto") -> int:
    totals = all_cohomology_dims(amb, ideal, fld, method)
    if not totals:
        raise RuntimeError("all local cohomology vanished; this cannot happen for a proper nonzero ideal")
    return max(totals)


# ---------------------------------------------------------------------------
# annihilators


def _clamp_pairs(bj: int) -> list[tuple[int, int]]:
    """Realisable ``(clamp(t), clamp(t + bj))`` over all integers ``t``."""
    return sorted({(clamp((t,))[0], clamp((t + bj,))[0]) for t in range(-bj - 2, 2)})


def annihilates(mod: WindowedModule, b: Sequence[int]) -> bool:
    """Whether multiplication by ``x^b`` kills every piece."""
    per = [_clamp_pairs(e) for e in b]
    # identity pairs are the cheapest witnesses of a nonzero action
    same = [[p for p in pairs if p[0] == p[1]] for pairs in per]
    for combo in itertools.product(*same):
        u = tuple(p[0] for p in combo)
        if mod.dims[u]:
            return False
    for combo in itertools.product(*per):
        u = tuple(p[0] for p in combo)
        v = tuple(p[1] for p in combo)
        if mod.dims[u] == 0 or mod.dims[v] == 0:
            continue
        if not mod.fld.is_zero(mod.window_map(u, v)):
            return False
    return True


def annihilator(mod: WindowedModule, box: int = 2) -> MonomialIdeal:
    """Monomial annihilator, searching exponents in ``{0..box}^n``."""
    if mod.is_zero():
        raise ValueError("the zero module is annihilated by the unit ideal")
    n = mod.n
    found: list[tuple[int, ...]] = []
    cands = sorted(itertools.product(range(box + 1), repeat=n), key=lambda b: (sum(b), b))
    for b in cands:
        if any(all(x <= y for x, y in zip(f, b)) for f in found):
            continue
        if annihilates(mod, b):
            found.append(b)
    return MonomialIdeal(mod.ambient.ctx, frozenset(found))


# ---------------------------------------------------------------------------
# localization at a variable


class LocalizedModule:
    """``N_{x_j}``: the window pieces of ``N`` with coordinate ``j`` pinned to 1."""

    def __init__(self, base: WindowedModule, j: int):
        self.base = base
        self.j = j
        self.n = base.n
        self.fld = base.fld
        self.ambient = base.ambient
        self.degrees = base.degrees
        self.dims = {b: base.dims[self._pin(b)] for b in self.degrees}

    def _pin(self, beta: Sequence[int]) -> Degree:
        b = clamp(beta)
        return b[: self.j] + (1,) + b[self.j + 1 :]

    def dim(self, beta):
        return self.dims[clamp(beta)]

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def window_map(self, u, v):
        return self.base.window_map(self._pin(u), self._pin(v))


def localize_at_variable(mod: WindowedModule, j: int) -> LocalizedModule:
    if not 0 <= j < mod.n:
        raise ValueError("variable index out of range")
    return LocalizedModule(mod, j)


def h0_h1_principal(mod: WindowedModule, j: int) -> tuple[dict[Degree, int], dict[Degree, int]]:
    """Degreewise kernel and cokernel dimensions of ``N -> N_{x_j}``."""
    loc = localize_at_variable(mod, j)
    h0: dict[Degree, int] = {}
    h1: dict[Degree, int] = {}
    for b in mod.degrees:
        src = mod.dims[b]
        tgt = loc.dims[b]
        if src == 0 or tgt == 0:
            rk = 0
        else:
            rk = rank(mod.window_map(b, loc._pin(b)), mod.fld)
        h0[b] = src - rk
        h1[b] = tgt - rk
    return h0, h1


def supported_only_at_max(mod: WindowedModule) -> bool:
    return all(localize_at_variable(mod, j).is_zero() for j in range(mod.n))
