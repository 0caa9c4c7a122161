"""Hot numeric kernels.

Each kernel has a numba-compiled version and a plain numpy version with the
same signature.  The numpy path is used when numba is unavailable or when the
environment variable ``LOCCOH_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``.  Both paths are exercised by the test suite and compared in
``benchmarks/bench_kernels.py``.
"""
from __future__ import annotations

import os

import numpy as np

# Bareiss pivots are checked against this bound before every multiply so
# that products of two entries cannot leave int64.
_SAFE_ABS = np.int64(3_037_000_499)


def _numba_requested() -> bool:
    flag = os.environ.get("LOCCOH_DISABLE_NUMBA", "")
    return flag in ("", "0")


try:
    import numba as _nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None

USE_NUMBA = _nb is not None and _numba_requested()

_njit_kwargs = {"nogil": True, "cache": True}


# ---------------------------------------------------------------------------
# reduced row echelon form over F_p


def _rref_modp_py(a, p):
    a = a.copy()
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r]) % p) % p
        pivots[r] = c
        r += 1
    return a, pivots[:r]


def _rref_modp_nb(a, p):
    a = a.copy()
    rows, cols = a.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = t
        # modular inverse by square-and-multiply
        base = a[r, c] % p
        e = p - 2
        inv = 1
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        for j in range(cols):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return a, pivots[:r]


# ---------------------------------------------------------------------------
# exact rank of an integer matrix (fraction-free elimination)


def _bareiss_rank_py(a):
    a = [[int(x) for x in row] for row in a]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if a[i][c] != 0), -1)
        if k < 0:
            continue
        a[r], a[k] = a[k], a[r]
        piv = a[r][c]
        for i in range(r + 1, rows):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c, cols):
                row_i[j] = (piv * row_i[j] - f * row_r[j]) // prev
        prev = piv
        r += 1
    return r, False


def _bareiss_rank_nb(a):
    a = a.copy()
    rows, cols = a.shape
    prev = np.int64(1)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = t
        piv = a[r, c]
        if abs(piv) > _SAFE_ABS:
            return r, True
        for i in range(r + 1, rows):
            f = a[i, c]
            if abs(f) > _SAFE_ABS:
                return r, True
            for j in range(c, cols):
                x = a[i, j]
                y = a[r, j]
                if abs(x) > _SAFE_ABS or abs(y) > _SAFE_ABS:
                    return r, True
                a[i, j] = (piv * x - f * y) // prev
        prev = piv
        r += 1
    return r, False


# ---------------------------------------------------------------------------
# exponent vectors of lcm(m_S) for every subset S of a generator list


def _subset_lcms_py(gens):
    r, n = gens.shape
    out = np.zeros((1 << r, n), dtype=np.int64)
    for b in range(r):
        lo = 1 << b
        out[lo : 2 * lo] = np.maximum(out[:lo], gens[b])
    return out


def _subset_lcms_nb(gens):
    r, n = gens.shape
    out = np.zeros((1 << r, n), dtype=np.int64)
    for s in range(1, 1 << r):
        low = s & (-s)
        b = 0
        while (1 << b) != low:
            b += 1
        prev = s ^ low
        for j in range(n):
            x = out[prev, j]
            y = gens[b, j]
            out[s, j] = x if x > y else y
    return out


# ---------------------------------------------------------------------------
# minimal vertex covers (= minimal primes of a monomial ideal)


def _minimal_covers_py(supports, n):
    masks = np.arange(1 << n, dtype=np.int64)
    covers = np.ones(1 << n, dtype=np.bool_)
    for s in supports:
        covers &= (masks & s) != 0
    minimal = covers.copy()
    for b in range(n):
        bit = 1 << b
        has = (masks & bit) != 0
        idx = np.nonzero(has & covers)[0]
        minimal[idx] &= ~covers[idx ^ bit]
    return np.nonzero(minimal)[0].astype(np.int64)


def _minimal_covers_nb(supports, n):
    total = 1 << n
    covers = np.zeros(total, dtype=np.bool_)
    for m in range(total):
        ok = True
        for s in supports:
            if (m & s) == 0:
                ok = False
                break
        covers[m] = ok
    out = np.empty(total, dtype=np.int64)
    k = 0
    for m in range(total):
        if not covers[m]:
            continue
        minimal = True
        for b in range(n):
            bit = 1 << b
            if (m & bit) and covers[m ^ bit]:
                minimal = False
                break
        if minimal:
            out[k] = m
            k += 1
    return out[:k]


if USE_NUMBA:
    rref_modp = _nb.njit(**_njit_kwargs)(_rref_modp_nb)
    bareiss_rank = _nb.njit(**_njit_kwargs)(_bareiss_rank_nb)
    subset_lcms = _nb.njit(**_njit_kwargs)(_subset_lcms_nb)
    minimal_covers = _nb.njit(**_njit_kwargs)(_minimal_covers_nb)
else:
    rref_modp = _rref_modp_py
    bareiss_rank = _bareiss_rank_py
    subset_lcms = _subset_lcms_py
    minimal_covers = _minimal_covers_py

#: Pure-numpy implementations, always importable (tests and the benchmark
#: compare them against whichever path is active).
FALLBACK = {
    "rref_modp": _rref_modp_py,
    "bareiss_rank": _bareiss_rank_py,
    "subset_lcms": _subset_lcms_py,
    "minimal_covers": _minimal_covers_py,
}

_NB_SOURCES = {
    "rref_modp": _rref_modp_nb,
    "bareiss_rank": _bareiss_rank_nb,
    "subset_lcms": _subset_lcms_nb,
    "minimal_covers": _minimal_covers_nb,
}
_compiled: dict | None = None


def compiled_kernels() -> dict | None:
    """The numba versions regardless of the environment flag (``None`` without numba)."""
    global _compiled
    if _nb is None:
        return None
    if _compiled is None:
        if USE_NUMBA:
            _compiled = {"rref_modp": rref_modp, "bareiss_rank": bareiss_rank,
                         "subset_lcms": subset_lcms, "minimal_covers": minimal_covers}
        else:
            _compiled = {k: _nb.njit(**_njit_kwargs)(f) for k, f in _NB_SOURCES.items()}
    return _compiled
