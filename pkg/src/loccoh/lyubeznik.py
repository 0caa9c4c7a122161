"""Lyubeznik tables of Stanley-Reisner rings and predicates on their shape."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .bass import bass_numbers
from .cech import AmbientQuotient, windowed_module
from .linalg import ScalarField
from .monomial import IdealError, MonomialIdeal, dimension

__all__ = [
    "LyubeznikTable",
    "TableError",
    "lyubeznik_table",
    "euler_characteristic",
    "is_trivial",
    "shape_matches_iscm",
    "pure_dim2_shape",
]


class TableError(RuntimeError):
    """A computed table violates a structural identity."""


@dataclass(frozen=True)
class LyubeznikTable:
    """``entries[p][j] = lambda_{p,j}`` for ``0 <= p, j <= d``."""

    d: int
    entries: tuple[tuple[int, ...], ...]
    field: str = "Q"

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        size = self.d + 1
        if len(rows) != size or any(len(r) != size for r in rows):
            raise TableError(f"table must be {size}x{size}")
        if any(x < 0 for r in rows for x in r):
            raise TableError("negative Lyubeznik number")
        if any(rows[p][j] for p in range(size) for j in range(size) if p > j):
            raise TableError("nonzero entry below the diagonal")

    def __getitem__(self, pj: tuple[int, int]) -> int:
        p, j = pj
        return self.entries[p][j]

    def to_json(self) -> dict:
        return {"d": self.d, "field": self.field, "rows": [list(r) for r in self.entries]}

    @classmethod
    def from_json(cls, data: dict) -> "LyubeznikTable":
        return cls(int(data["d"]), tuple(tuple(r) for r in data["rows"]), data.get("field", "Q"))

    def render(self) -> str:
        """Aligned upper triangle; blanks below the diagonal."""
        width = max(len(str(x)) for r in self.entries for x in r)
        lines = []
        for p, row in enumerate(self.entries):
            cells = [" " * width if j < p else str(x).rjust(width) for j, x in enumerate(row)]
            lines.append(" ".join(cells))
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.render()


def euler_characteristic(t: LyubeznikTable) -> int:
    return sum((1 if (j - p) % 2 == 0 else -1) * t[p, j] for j in range(t.d + 1) for p in range(j + 1))


def is_trivial(t: LyubeznikTable) -> bool:
    d = t.d
    return all(t[p, j] == (1 if p == j == d else 0) for p in range(d + 1) for j in range(d + 1))


def shape_matches_iscm(t: LyubeznikTable, i: int) -> bool:
    """``lambda_{p,j} = 0`` whenever ``p != j`` and ``j >= i``."""
    if i < 0:
        raise ValueError("level must be non-negative")
    return all(t[p, j] == 0 for j in range(max(i, 0), t.d + 1) for p in range(t.d + 1) if p != j)


def pure_dim2_shape(t: LyubeznikTable) -> bool:
    if t.d != 2:
        raise ValueError("pure_dim2_shape needs a table with d = 2")
    lam = t[0, 1]
    want = ((0, lam, 0), (0, 0, 0), (0, 0, lam + 1))
    return t.entries == want


def lyubeznik_table(ideal: MonomialIdeal, fld: ScalarField | None = None, *,
                    scan_box: tuple[int, int] | None = None, workers: int = 1,
                    method: str = "auto", window_samples: int = 2) -> LyubeznikTable:
    """``lambda_{p,j} = mu_p(m, H^{n-j}_I(R))`` for a squarefree ideal ``I``."""
    if not ideal.is_squarefree:
        raise IdealError("Lyubeznik tables are computed for squarefree ideals")
    if ideal.is_zero or ideal.is_unit:
        raise IdealError("need a proper nonzero ideal")
    fld = fld or ideal.ctx.fld
    amb = AmbientQuotient.polynomial(ideal.ctx)
    n = ideal.n
    d = dimension(ideal)

    def column(j: int) -> list[int]:
        mod = windowed_module(amb, ideal, n - j, fld, method=method, window_samples=window_samples)
        mu = bass_numbers(mod, scan_box).mu
        if any(mu[p] for p in range(j + 1, n + 1)):
            raise TableError(f"Bass number beyond p = {j} in column {j}: {mu}")
        return mu[: d + 1]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cols = list(pool.map(column, range(d + 1)))
    else:
        cols = [column(j) for j in range(d + 1)]
    rows = tuple(tuple(cols[j][p] for j in range(d + 1)) for p in range(d + 1))
    table = LyubeznikTable(d, rows, str(fld))
    if table[d, d] < 1:
        raise TableError(f"highest Lyubeznik number vanished: {rows}")
    chi = euler_characteristic(table)
    if chi != 1:
        raise TableError(f"Euler characteristic of the table is {chi}, not 1: {rows}")
    return table
