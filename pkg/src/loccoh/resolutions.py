"""Taylor complexes, Betti numbers, depth of quotients and of pairs ``J1/J2``.

All computations happen after tensoring with ``k``: in multidegree ``m`` the
Taylor complex of ``R/J`` becomes the complex spanned by generator subsets
whose lcm equals ``m``, with the entries of unit lcm ratio kept as ``+-1``.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import _kernels
from .linalg import QQ, Cohomology, ScalarField, rank, solve
from .monomial import IdealError, MonomialIdeal, dimension, to_complex
from .simplicial import mask_of, members, popcount

__all__ = [
    "TaylorComplex",
    "TAYLOR_MAX_GENERATORS",
    "TAYLOR_PREFERRED_GENERATORS",
    "betti_numbers",
    "pd",
    "depth_ring",
    "is_cm_ring",
    "hochster_betti",
    "hochster_totals",
    "pair_tor_dims",
    "lifted_pair_tor_dims",
    "depth_pair",
]

TAYLOR_MAX_GENERATORS = 16
# above this, squarefree Betti numbers come from Hochster's formula (Taylor strands blow up)
TAYLOR_PREFERRED_GENERATORS = 12


def _sign(s: int, i: int) -> int:
    """``(-1)^(number of elements of s below i)``."""
    return -1 if popcount(s & ((1 << i) - 1)) % 2 else 1


class TaylorComplex:
    """Taylor resolution of ``R/J`` indexed by subsets of minimal generators."""

    def __init__(self, ideal: MonomialIdeal, fld: ScalarField = QQ):
        self.ideal = ideal
        self.fld = fld
        self.n = ideal.n
        self.gens = ideal.sorted_gens()
        self.r = len(self.gens)
        if self.r > TAYLOR_MAX_GENERATORS:
            raise IdealError(f"Taylor complex on {self.r} generators exceeds the limit {TAYLOR_MAX_GENERATORS}")
        g = np.array(self.gens, dtype=np.int64).reshape(self.r, self.n)
        self.lcms = _kernels.subset_lcms(g)
        self.keys = [row.tobytes() for row in self.lcms]

    @cached_property
    def groups(self) -> dict[bytes, list[list[int]]]:
        """lcm -> subsets with that lcm, split by size."""
        out: dict[bytes, list[list[int]]] = {}
        for s, key in enumerate(self.keys):
            out.setdefault(key, [[] for _ in range(self.r + 1)])[popcount(s)].append(s)
        return out

    def degree(self, key: bytes) -> tuple[int, ...]:
        return tuple(int(x) for x in np.frombuffer(key, dtype=np.int64))

    def strand(self, key: bytes, t: int) -> list[int]:
        g = self.groups.get(key)
        if g is None or not 0 <= t <= self.r:
            return []
        return g[t]

    def differential(self, key: bytes, t: int) -> np.ndarray:
        """Tensored differential from size-``t`` to size-``(t-1)`` subsets at ``key``."""
        src, tgt = self.strand(key, t), self.strand(key, t - 1)
        pos = {s: i for i, s in enumerate(tgt)}
        d = self.fld.zeros(len(tgt), len(src))
        for c, s in enumerate(src):
            for i in members(s):
                row = pos.get(s & ~(1 << i))
                if row is not None:
                    d[row, c] = _sign(s, i) % self.fld.characteristic if self.fld.characteristic else _sign(s, i)
        return d

    def homology(self, key: bytes, t: int) -> Cohomology:
        dim = len(self.strand(key, t))
        return Cohomology(self.differential(key, t + 1), self.differential(key, t), dim, self.fld)

    def _rank(self, key: bytes, t: int) -> int:
        memo = self.__dict__.setdefault("_ranks", {})
        if (key, t) not in memo:
            memo[key, t] = rank(self.differential(key, t), self.fld)
        return memo[key, t]

    def homology_dim(self, key: bytes, t: int) -> int:
        dim = len(self.strand(key, t))
        if not dim:
            return 0
        return dim - self._rank(key, t) - self._rank(key, t + 1)

    def check(self) -> None:
        for key in self.groups:
            for t in range(2, self.r + 1):
                a, b = self.differential(key, t - 1), self.differential(key, t)
                if a.size and b.size and not self.fld.is_zero(self.fld.matmul(a, b)):
                    raise AssertionError("Taylor differential does not square to zero")

    @cached_property
    def betti(self) -> list[int]:
        out = [0] * (self.r + 1)
        for key in self.groups:
            for t in range(self.r + 1):
                out[t] += self.homology_dim(key, t)
        if any(out[self.n + 1:]):
            raise AssertionError(f"Tor beyond the number of variables: {out}")
        return (out + [0] * (self.n + 1))[: self.n + 1]

    def divisor_subsets(self, m: np.ndarray, t: int) -> list[int]:
        hit = np.all(self.lcms <= m, axis=1)
        return [s for s in np.nonzero(hit)[0].tolist() if popcount(s) == t]


def betti_numbers(ideal: MonomialIdeal, fld: ScalarField | None = None) -> list[int]:
    """``beta_p = dim Tor_p(k, R/J)`` for ``p = 0..n``.

    Taylor homology, except for squarefree ideals with more than
    ``TAYLOR_PREFERRED_GENERATORS`` generators, which go through Hochster's formula.
    """
    if ideal.is_unit:
        raise IdealError("need a proper ideal")
    if ideal.is_squarefree and len(ideal.gens) > TAYLOR_PREFERRED_GENERATORS:
        return hochster_totals(ideal, fld)
    return list(TaylorComplex(ideal, fld or ideal.ctx.fld).betti)


def pd(ideal: MonomialIdeal, fld: ScalarField | None = None) -> int:
    b = betti_numbers(ideal, fld)
    return max(p for p, x in enumerate(b) if x)


def depth_ring(ideal: MonomialIdeal, fld: ScalarField | None = None) -> int:
    return ideal.n - pd(ideal, fld)


def is_cm_ring(ideal: MonomialIdeal, fld: ScalarField | None = None) -> bool:
    return depth_ring(ideal, fld) == dimension(ideal)


def hochster_betti(ideal: MonomialIdeal, p: int, sigma, fld: ScalarField | None = None) -> int:
    """``dim H~^{|sigma|-p-2}`` of the induced subcomplex on ``sigma``."""
    if not ideal.is_squarefree:
        raise IdealError("Hochster's formula needs a squarefree ideal")
    s = sigma if isinstance(sigma, int) else mask_of(sigma)
    delta = to_complex(ideal).induced(s)
    return delta.reduced_cohomology_dim(popcount(s) - p - 2, fld or ideal.ctx.fld)


def hochster_totals(ideal: MonomialIdeal, fld: ScalarField | None = None) -> list[int]:
    """Betti numbers of ``R/I`` assembled from induced subcomplexes."""
    if not ideal.is_squarefree:
        raise IdealError("Hochster's formula needs a squarefree ideal")
    fld = fld or ideal.ctx.fld
    n = ideal.n
    delta = to_complex(ideal)
    out = [0] * (n + 1)
    for s in range(1 << n):
        k = popcount(s)
        for j, h in delta.induced(s).reduced_cohomology(fld).items():
            p = k - j - 2
            out[p + 1] += h
    return out


# ---------------------------------------------------------------------------
# pairs


def _lift(t2: TaylorComplex, t1: TaylorComplex) -> list[dict[int, dict[int, object]]]:
    """Chain map ``T(J2) -> T(J1)`` over the identity of ``R``.

    ``phi[t][S][T] = c`` means ``e_S -> sum_T c * (lcm S / lcm T) e_T``.
    Each column is an exact degreewise solve of ``d phi_t = phi_{t-1} d``.
    """
    fld = t1.fld
    p = fld.characteristic
    phi: list[dict[int, dict[int, object]]] = [{0: {0: 1}}]
    cache: dict = {}
    for t in range(1, t2.r + 1):
        layer: dict[int, dict[int, object]] = {}
        for s in range(1 << t2.r):
            if popcount(s) != t:
                continue
            rhs: dict[int, object] = {}
            for i in members(s):
                sg = _sign(s, i)
                for tt, c in phi[t - 1][s & ~(1 << i)].items():
                    rhs[tt] = rhs.get(tt, 0) + sg * c
            rhs = {k: (v % p if p else v) for k, v in rhs.items()}
            rhs = {k: v for k, v in rhs.items() if v}
            if not rhs:
                layer[s] = {}
                continue
            key = (t2.keys[s], t)
            if key not in cache:
                m = t2.lcms[s]
                cols, rows = t1.divisor_subsets(m, t), t1.divisor_subsets(m, t - 1)
                pos = {x: i for i, x in enumerate(rows)}
                d = fld.zeros(len(rows), len(cols))
                for c, u in enumerate(cols):
                    for i in members(u):
                        sg = _sign(u, i)
                        d[pos[u & ~(1 << i)], c] = sg % p if p else sg
                cache[key] = (cols, pos, d)
            cols, pos, d = cache[key]
            b = fld.zeros(len(pos), 1)[:, 0]
            for tt, v in rhs.items():
                if tt not in pos:
                    raise AssertionError("lift left the divisor lattice")
                b[pos[tt]] = v
            x = solve(d, b, fld)
            if not fld.is_zero(fld.matmul(d, x.reshape(-1, 1)) - b.reshape(-1, 1)):
                raise AssertionError("chain map lift does not commute")
            layer[s] = {cols[i]: x[i] for i in range(len(cols)) if x[i]}
        phi.append(layer)
    return phi


def _strand_map(phi_t, t2: TaylorComplex, t1: TaylorComplex, key: bytes, t: int) -> np.ndarray:
    src, tgt = t2.strand(key, t), t1.strand(key, t)
    pos = {x: i for i, x in enumerate(tgt)}
    f = t1.fld.zeros(len(tgt), len(src))
    for c, s in enumerate(src):
        for u, v in phi_t.get(s, {}).items():
            row = pos.get(u)
            if row is not None:
                f[row, c] = v
    return f


def pair_tor_dims(j1: MonomialIdeal, j2: MonomialIdeal, fld: ScalarField | None = None) -> list[int]:
    """``dim Tor_p(k, J1/J2)`` for ``p = 0..n`` through the long exact sequence."""
    if j1.ctx.names != j2.ctx.names:
        raise IdealError("ideals live in different rings")
    if not j2 <= j1:
        raise IdealError("J2 is not contained in J1")
    if j1 == j2:
        raise IdealError("J1 = J2: the quotient is the zero module")
    if j1.is_unit:
        return betti_numbers(j2, fld)
    return lifted_pair_tor_dims(j1, j2, fld)


def lifted_pair_tor_dims(j1: MonomialIdeal, j2: MonomialIdeal, fld: ScalarField | None = None) -> list[int]:
    """The long exact sequence route for any ``J2 < J1``, with no shortcut for ``J1 = R``."""
    fld = fld or j1.ctx.fld
    n = j1.n
    t1, t2 = TaylorComplex(j1, fld), TaylorComplex(j2, fld)
    phi = _lift(t2, t1)
    top = max(t1.r, t2.r) + 1
    keys = set(t1.groups) | set(t2.groups)
    out = [0] * (top + 1)
    for key in keys:
        ker, coker = [0] * (top + 1), [0] * (top + 1)
        for t in range(top):
            h2 = t2.homology(key, t) if t <= t2.r else None
            h1 = t1.homology(key, t) if t <= t1.r else None
            d2 = h2.dim if h2 else 0
            d1 = h1.dim if h1 else 0
            if d1 and d2:
                rk = rank(h2.induced(_strand_map(phi[t], t2, t1, key, t), h1), fld)
            else:
                rk = 0
            ker[t], coker[t] = d2 - rk, d1 - rk
        for t in range(top):
            out[t] += coker[t + 1] + ker[t]
    if any(out[n + 1:]):
        raise AssertionError(f"pair Tor beyond the number of variables: {out}")
    return (out + [0] * (n + 1))[: n + 1]


def depth_pair(j1: MonomialIdeal, j2: MonomialIdeal, fld: ScalarField | None = None) -> int:
    """Depth of ``J1/J2`` (``J2`` inside ``J1``)."""
    tor = pair_tor_dims(j1, j2, fld)
    return j1.n - max(p for p, x in enumerate(tor) if x)
