"""Exact linear algebra over Q and F_p, and finite cochain complexes.

Matrices are plain numpy arrays.  Over a prime field they are ``int64``
arrays with entries reduced into ``[0, p)``; over the rationals they are
``object`` arrays holding Python ``int`` or ``fractions.Fraction`` values.
Use :meth:`ScalarField.array` to build one from nested lists.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Sequence

import numpy as np
import sympy

from . import _kernels

__all__ = [
    "ScalarField",
    "QQ",
    "VectorSpaceComplex",
    "ComplexError",
    "rank",
    "rref",
    "nullspace",
    "column_basis",
    "left_inverse",
    "cohomology_dims",
    "Cohomology",
    "solve",
    "stack_blocks",
]

# int64 arithmetic in the F_p kernels needs p * p < 2**63.
MAX_CHARACTERISTIC = 2**31 - 1


class ComplexError(ValueError):
    """A sequence of matrices that is not a cochain complex."""


@dataclass(frozen=True)
class ScalarField:
    """The rationals (``characteristic == 0``) or the prime field F_p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p < 0:
            raise ValueError("characteristic must be non-negative")
        if p and (p > MAX_CHARACTERISTIC or not sympy.isprime(p)):
            raise ValueError(f"characteristic {p} is not a supported prime")

    @property
    def kind(self) -> str:
        return "exact-rationals" if self.characteristic == 0 else "prime-field"

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @classmethod
    def parse(cls, text: str) -> "ScalarField":
        """Parse ``"Q"`` or ``"F<p>"`` (also accepts ``"GF(p)"``)."""
        t = text.strip()
        if t in ("Q", "QQ"):
            return cls(0)
        digits = None
        if t.startswith("F") and t[1:].isdigit():
            digits = t[1:]
        elif t.startswith("GF(") and t.endswith(")") and t[3:-1].isdigit():
            digits = t[3:-1]
        if digits is None:
            raise ValueError(f"unrecognised field {text!r}")
        p = int(digits)
        if p < 2 or not sympy.isprime(p):
            raise ValueError(f"field {text!r}: {p} is not prime")
        return cls(p)

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    # -- construction -----------------------------------------------------

    @property
    def dtype(self):
        return object if self.characteristic == 0 else np.int64

    def array(self, rows, shape: tuple[int, int] | None = None) -> np.ndarray:
        """Coerce nested lists (or an integer array) into this field."""
        if self.characteristic:
            a = np.asarray(rows)
            if a.dtype == object:
                a = np.array(
                    [[self._reduce(x) for x in row] for row in a], dtype=np.int64
                ).reshape(a.shape)
            else:
                a = np.mod(a.astype(np.int64), self.characteristic)
        else:
            a = np.array(rows, dtype=object)
        if shape is not None:
            a = a.reshape(shape)
        return a

    def _reduce(self, x) -> int:
        p = self.characteristic
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, p - 2, p)) % p
        return int(x) % p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.characteristic:
            return np.zeros((rows, cols), dtype=np.int64)
        a = np.empty((rows, cols), dtype=object)
        a.fill(0)
        return a

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = 1
        return a

    # -- arithmetic -------------------------------------------------------

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if self.characteristic:
            p = self.characteristic
            if a.shape[1] == 0:
                return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
            if p < 2**26 and a.shape[1] < 2**10:
                return (a @ b) % p
            c = a.astype(object) @ b.astype(object)
            return np.mod(c, p).astype(np.int64)
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return a.dot(b)

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a != 0)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return np.mod(-a, self.characteristic) if self.characteristic else -a


QQ = ScalarField(0)


# ---------------------------------------------------------------------------
# elimination


def _rref_q(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    rows, cols = a.shape
    m = [[Fraction(x) if not isinstance(x, int) else x for x in row] for row in a]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if m[i][c] != 0), -1)
        if k < 0:
            continue
        m[r], m[k] = m[k], m[r]
        row = m[r]
        piv = row[c]
        if piv != 1:
            inv = Fraction(1, piv) if isinstance(piv, int) else 1 / piv
            row = [x * inv if x else 0 for x in row]
            m[r] = row
        for i in range(rows):
            if i == r:
                continue
            f = m[i][c]
            if f:
                mi = m[i]
                m[i] = [x - f * y if y else x for x, y in zip(mi, row)]
        pivots.append(c)
        r += 1
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            x = m[i][j]
            if isinstance(x, Fraction) and x.denominator == 1:
                x = x.numerator
            out[i, j] = x
    return out, pivots


def rref(a: np.ndarray, fld: ScalarField = QQ) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    if a.size == 0:
        return a.copy(), []
    if fld.characteristic:
        r, piv = _kernels.rref_modp(np.ascontiguousarray(a, dtype=np.int64), fld.characteristic)
        return r, [int(c) for c in piv]
    return _rref_q(a)


def _as_int_rows(a: np.ndarray) -> np.ndarray | None:
    """Scale each row of a rational matrix to integers; ``None`` if too big."""
    if a.dtype != object:
        return a.astype(np.int64)
    flat = a.ravel().tolist()
    if not any(type(x) is Fraction for x in flat):
        if max(map(abs, flat), default=0) >= 2**62:
            return None
        return np.array(flat, dtype=np.int64).reshape(a.shape)
    out = np.zeros(a.shape, dtype=np.int64)
    bound = 2**62
    for i, row in enumerate(a):
        dens = [x.denominator for x in row if isinstance(x, Fraction)]
        scale = reduce(lcm, dens, 1)
        for j, x in enumerate(row):
            v = int(x * scale)
            if abs(v) >= bound:
                return None
            out[i, j] = v
    return out


def rank(a: np.ndarray, fld: ScalarField = QQ) -> int:
    """Row rank over ``fld``, computed exactly."""
    if a.size == 0:
        return 0
    if fld.characteristic:
        _, piv = _kernels.rref_modp(np.ascontiguousarray(a, dtype=np.int64), fld.characteristic)
        return len(piv)
    ints = _as_int_rows(a)
    if ints is not None:
        r, overflow = _kernels.bareiss_rank(ints)
        if not overflow:
            return int(r)
    return len(_rref_q(a)[1])


def nullspace(a: np.ndarray, fld: ScalarField = QQ) -> np.ndarray:
    """Basis of ``{v : a v = 0}`` as the columns of the returned matrix."""
    cols = a.shape[1]
    if a.shape[0] == 0:
        return fld.eye(cols)
    r, piv = rref(a, fld)
    free = [c for c in range(cols) if c not in set(piv)]
    out = fld.zeros(cols, len(free))
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, pc in enumerate(piv):
            x = r[i, f]
            out[pc, k] = (-x) % fld.characteristic if fld.characteristic else -x
    return out


def column_basis(a: np.ndarray, fld: ScalarField = QQ) -> np.ndarray:
    """A subset of the columns of ``a`` forming a basis of its column space."""
    if a.size == 0:
        return fld.zeros(a.shape[0], 0)
    _, piv = rref(a, fld)
    return a[:, piv]


def left_inverse(m: np.ndarray, fld: ScalarField = QQ) -> np.ndarray:
    """``L`` with ``L @ m == I`` for ``m`` of full column rank."""
    rows, cols = m.shape
    if cols == 0:
        return fld.zeros(0, rows)
    aug = np.concatenate([m, fld.eye(rows)], axis=1)
    r, piv = rref(aug, fld)
    if len([c for c in piv if c < cols]) != cols:
        raise ValueError("matrix does not have full column rank")
    return r[:cols, cols:]


def solve(a: np.ndarray, b: np.ndarray, fld: ScalarField = QQ) -> np.ndarray:
    """One solution ``x`` of ``a x = b`` (free variables set to zero).

    ``b`` may be a vector or a matrix of right-hand sides; raises
    ``ValueError`` when the system is inconsistent.
    """
    vec = b.ndim == 1
    rhs = b.reshape(-1, 1) if vec else b
    rows, cols = a.shape
    out = fld.zeros(cols, rhs.shape[1])
    if rows == 0:
        return out[:, 0] if vec else out
    r, piv = rref(np.concatenate([a, rhs.astype(a.dtype if fld.characteristic else object)], axis=1), fld)
    if any(c >= cols for c in piv):
        raise ValueError("inconsistent linear system")
    for i, c in enumerate(piv):
        out[c, :] = r[i, cols:]
    return out[:, 0] if vec else out


# ---------------------------------------------------------------------------
# complexes


@dataclass(frozen=True)
class VectorSpaceComplex:
    """A finite cochain complex ``C^0 -> C^1 -> ... -> C^{m-1}``.

    ``differentials[i]`` maps term ``i`` to term ``i + 1`` and therefore has
    shape ``(term_dims[i + 1], term_dims[i])``.
    """

    term_dims: tuple[int, ...]
    differentials: tuple[np.ndarray, ...]
    fld: ScalarField = field(default=QQ)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.term_dims)
        object.__setattr__(self, "term_dims", dims)
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if len(self.differentials) != max(len(dims) - 1, 0):
            raise ComplexError("need one differential between each pair of terms")
        for i, d in enumerate(self.differentials):
            if d.shape != (dims[i + 1], dims[i]):
                raise ComplexError(
                    f"d_{i} has shape {d.shape}, expected {(dims[i + 1], dims[i])}"
                )

    def check(self) -> None:
        for i in range(len(self.differentials) - 1):
            prod = self.fld.matmul(self.differentials[i + 1], self.differentials[i])
            if not self.fld.is_zero(prod):
                raise ComplexError(f"d_{i + 1} o d_{i} != 0")

    def ranks(self) -> list[int]:
        return [rank(d, self.fld) for d in self.differentials]

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * d for i, d in enumerate(self.term_dims))


def cohomology_dims(c: VectorSpaceComplex, check: bool = True) -> list[int]:
    """``h^i = dim ker d_i - rank d_{i-1}`` for every term."""
    if check:
        c.check()
    rk = c.ranks()
    out = []
    for i, dim in enumerate(c.term_dims):
        out_rank = rk[i] if i < len(rk) else 0
        in_rank = rk[i - 1] if i > 0 else 0
        h = dim - out_rank - in_rank
        assert h >= 0
        out.append(h)
    return out


class Cohomology:
    """Explicit cohomology of one spot ``ker(d_out) / im(d_in)``.

    ``reps`` holds cocycle representatives of a basis (as columns) and
    :meth:`coords` expresses any cocycle in that basis.
    """

    __slots__ = ("fld", "dim", "reps", "_proj", "ambient_dim")

    def __init__(self, d_in: np.ndarray | None, d_out: np.ndarray | None,
                 ambient_dim: int, fld: ScalarField = QQ):
        self.fld = fld
        self.ambient_dim = ambient_dim
        if ambient_dim == 0:
            self.dim = 0
            self.reps = fld.zeros(0, 0)
            self._proj = fld.zeros(0, 0)
            return
        if d_out is None or d_out.shape[0] == 0:
            z = fld.eye(ambient_dim)
        else:
            z = nullspace(d_out, fld)
        if d_in is None or d_in.shape[1] == 0:
            b = fld.zeros(ambient_dim, 0)
        else:
            b = column_basis(d_in, fld)
        nb = b.shape[1]
        stacked = np.concatenate([b, z], axis=1)
        _, piv = rref(stacked, fld)
        chosen = [c - nb for c in piv if c >= nb]
        if len(piv) - len(chosen) != nb:
            raise ComplexError("image of incoming differential is not a subspace of the kernel")
        self.reps = z[:, chosen]
        self.dim = len(chosen)
        full = np.concatenate([b, self.reps], axis=1)
        self._proj = left_inverse(full, fld)[nb:, :]

    def coords(self, cocycles: np.ndarray) -> np.ndarray:
        """Coordinates (columns) of cocycles in the basis ``reps``."""
        if self.dim == 0:
            return self.fld.zeros(0, cocycles.shape[1])
        return self.fld.matmul(self._proj, cocycles)

    def induced(self, chain_map: np.ndarray, target: "Cohomology") -> np.ndarray:
        """Matrix of the map induced on cohomology by a chain-map component."""
        if self.dim == 0 or target.dim == 0:
            return self.fld.zeros(target.dim, self.dim)
        return target.coords(self.fld.matmul(chain_map, self.reps))


def stack_blocks(fld: ScalarField, blocks: Sequence[Sequence[np.ndarray | None]],
                 row_dims: Sequence[int], col_dims: Sequence[int]) -> np.ndarray:
    """Assemble a block matrix; ``None`` blocks are zero."""
    out = fld.zeros(sum(row_dims), sum(col_dims))
    r0 = 0
    for i, rd in enumerate(row_dims):
        c0 = 0
        for j, cd in enumerate(col_dims):
            blk = blocks[i][j]
            if blk is not None and rd and cd:
                out[r0 : r0 + rd, c0 : c0 + cd] = blk
            c0 += cd
        r0 += rd
    return out
