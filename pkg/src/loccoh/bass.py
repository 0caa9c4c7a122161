"""Bass numbers ``mu_p(m, N) = dim_k Ext^p_R(k, N)`` of a windowed module.

``k`` is resolved by the Koszul complex on the variables, so in degree
``alpha`` the Ext groups are the cohomology of

    term p = sum over |sigma| = p of N_{alpha + sigma},
    (d phi)(e_tau) = sum_{i in tau} (-1)^{pos(i, tau)} x_i phi(e_{tau - i}).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .cech import WindowedModule, clamp
from .linalg import VectorSpaceComplex, cohomology_dims, rank, stack_blocks
from .simplicial import members, popcount

__all__ = ["BassProfile", "ScanBoxError", "bass_numbers", "koszul_complex_at", "DEFAULT_SCAN_BOX"]

DEFAULT_SCAN_BOX = (-2, 1)


class ScanBoxError(RuntimeError):
    """Nonzero Koszul cohomology on the boundary of the scanned degree box."""


@dataclass
class BassProfile:
    module: WindowedModule
    mu: list[int]
    contributing_degrees: list[tuple[tuple[int, ...], int, int]] = field(default_factory=list)
    scanned: int = 0
    certified_exact: int = 0

    def __post_init__(self):
        totals = [0] * len(self.mu)
        for _, p, d in self.contributing_degrees:
            totals[p] += d
        assert totals == self.mu


def _subsets_by_size(n: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(n + 1)]
    for s in range(1 << n):
        out[popcount(s)].append(s)
    return out


def _shift(alpha: Sequence[int], s: int) -> tuple[int, ...]:
    return clamp(tuple(a + ((s >> j) & 1) for j, a in enumerate(alpha)))


def _touching_degrees(mod: WindowedModule, lo: int, hi: int) -> list[tuple[int, ...]]:
    """Every ``alpha`` in the box whose Koszul cube meets a nonzero piece."""
    per_value = {
        b: [a for a in range(lo, hi + 1) if b in (clamp((a,))[0], clamp((a + 1,))[0])]
        for b in (-1, 0, 1)
    }
    hits: set[tuple[int, ...]] = set()
    for beta in mod.nonzero_pieces():
        hits.update(itertools.product(*(per_value[b] for b in beta)))
    return sorted(hits)


def koszul_complex_at(mod: WindowedModule, alpha: Sequence[int], by_size=None) -> VectorSpaceComplex:
    n = mod.n
    fld = mod.fld
    by_size = by_size or _subsets_by_size(n)
    dims = {s: mod.dims[_shift(alpha, s)] for s in range(1 << n)}
    term_dims = [sum(dims[s] for s in by_size[p]) for p in range(n + 1)]
    diffs = []
    for p in range(n):
        src, tgt = by_size[p], by_size[p + 1]
        pos = {s: i for i, s in enumerate(src)}
        blocks = [[None] * len(src) for _ in tgt]
        for r, tau in enumerate(tgt):
            if not dims[tau]:
                continue
            for k, i in enumerate(members(tau)):
                sigma = tau & ~(1 << i)
                if not dims[sigma]:
                    continue
                m = mod.window_map(_shift(alpha, sigma), _shift(alpha, tau))
                blocks[r][pos[sigma]] = m if k % 2 == 0 else fld.neg(m)
        diffs.append(stack_blocks(fld, blocks, [dims[t] for t in tgt], [dims[s] for s in src]))
    return VectorSpaceComplex(tuple(term_dims), tuple(diffs), fld)


def _iso_direction(mod: WindowedModule, alpha, n, iso_cache) -> int | None:
    """A variable acting bijectively along every edge of the Koszul cube."""
    for j in range(n):
        ok = True
        bit = 1 << j
        for s in range(1 << n):
            if s & bit:
                continue
            u, v = _shift(alpha, s), _shift(alpha, s | bit)
            if u == v:
                continue
            key = (u, v)
            hit = iso_cache.get(key)
            if hit is None:
                du, dv = mod.dims[u], mod.dims[v]
                hit = du == dv and (du == 0 or rank(mod.window_map(u, v), mod.fld) == du)
                iso_cache[key] = hit
            if not hit:
                ok = False
                break
        if ok:
            return j
    return None


def bass_numbers(mod: WindowedModule, scan_box: tuple[int, int] | None = None,
                 certify: bool = True) -> BassProfile:
    """Bass numbers of ``mod`` at the homogeneous maximal ideal.

    Every ``alpha`` in ``[lo, hi]^n`` is scanned (those whose cube holds only
    zero pieces contribute nothing and are skipped).  With ``certify`` a degree
    is declared exact, without building its Koszul complex, when some
    variable maps every piece of the Koszul cube isomorphically onto the
    next (the complex is then the cone of an isomorphism).
    """
    if not mod.ambient.is_polynomial:
        raise NotImplementedError("Bass numbers are only computed over the polynomial ambient")
    lo, hi = scan_box or DEFAULT_SCAN_BOX
    if lo > -1 or hi < 0:
        raise ValueError("scan box must contain {-1, 0}")
    n = mod.n
    mu = [0] * (n + 1)
    contrib: list[tuple[tuple[int, ...], int, int]] = []
    by_size = _subsets_by_size(n)
    iso_cache: dict = {}
    scanned = certified = 0
    if mod.is_zero():
        return BassProfile(mod, mu, contrib, 0, 0)
    for alpha in _touching_degrees(mod, lo, hi):
        scanned += 1
        if certify and _iso_direction(mod, alpha, n, iso_cache) is not None:
            certified += 1
            continue
        hs = cohomology_dims(koszul_complex_at(mod, alpha, by_size))
        if not any(hs):
            continue
        if any(a in (lo, hi) for a in alpha):
            raise ScanBoxError(f"scan box too small: Koszul cohomology {hs} at boundary degree {alpha}")
        for p, h in enumerate(hs):
            if h:
                mu[p] += h
                contrib.append((tuple(alpha), p, h))
    return BassProfile(mod, mu, contrib, scanned, certified)
