"""Finite simplicial complexes on the vertex set ``{0, ..., n-1}``.

Faces are stored as integer bitmasks.  The *void* complex has no faces at
all; the *irrelevant* complex has only the empty face.  The two are distinct
values: the irrelevant complex has ``H^{-1} = k``, the void complex has no
cohomology.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .linalg import QQ, ScalarField, VectorSpaceComplex, cohomology_dims

__all__ = [
    "SimplicialComplex",
    "mask_of",
    "members",
    "popcount",
    "coboundary_matrix",
]


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _submasks(mask: int) -> Iterator[int]:
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def _maximal(masks: Iterable[int]) -> frozenset[int]:
    ordered = sorted(set(masks), key=popcount, reverse=True)
    kept: list[int] = []
    for m in ordered:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return frozenset(kept)


def coboundary_matrix(lower: list[int], upper: list[int], fld: ScalarField = QQ) -> np.ndarray:
    """Simplicial coboundary from cochains on ``lower`` to cochains on ``upper``.

    ``(d f)(t) = sum_i (-1)^i f(t - t_i)`` where ``t_0 < t_1 < ...`` are the
    vertices of ``t``.
    """
    index = {f: i for i, f in enumerate(lower)}
    d = fld.zeros(len(upper), len(lower))
    for r, t in enumerate(upper):
        for pos, v in enumerate(members(t)):
            c = index.get(t & ~(1 << v))
            if c is not None:
                d[r, c] = 1 if pos % 2 == 0 else (fld.characteristic - 1 if fld.characteristic else -1)
    return d


@dataclass(frozen=True)
class SimplicialComplex:
    """A simplicial complex given by its facets."""

    n: int
    facets: frozenset[int]

    def __post_init__(self):
        full = (1 << self.n) - 1
        if any(f & ~full for f in self.facets):
            raise ValueError("facet uses a vertex outside the vertex set")
        object.__setattr__(self, "facets", _maximal(self.facets))

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        return cls(n, frozenset(mask_of(f) for f in facets))

    @classmethod
    def void(cls, n: int) -> "SimplicialComplex":
        return cls(n, frozenset())

    @classmethod
    def irrelevant(cls, n: int) -> "SimplicialComplex":
        return cls(n, frozenset({0}))

    @classmethod
    def simplex(cls, n: int) -> "SimplicialComplex":
        return cls(n, frozenset({(1 << n) - 1}))

    # -- basic queries ----------------------------------------------------

    @property
    def is_void(self) -> bool:
        return not self.facets

    @property
    def dim(self) -> int | None:
        """Dimension; ``None`` for the void complex."""
        if not self.facets:
            return None
        return max(popcount(f) for f in self.facets) - 1

    @cached_property
    def faces(self) -> frozenset[int]:
        out: set[int] = set()
        for f in self.facets:
            if f in out:
                continue
            out.update(_submasks(f))
        return frozenset(out)

    def faces_of_dim(self, k: int) -> list[int]:
        return sorted(f for f in self.faces if popcount(f) == k + 1)

    def __contains__(self, face) -> bool:
        m = face if isinstance(face, int) else mask_of(face)
        return any(m & f == m for f in self.facets)

    def is_pure(self) -> bool:
        return len({popcount(f) for f in self.facets}) <= 1

    @property
    def vertices(self) -> int:
        m = 0
        for f in self.facets:
            m |= f
        return m

    def facet_lists(self) -> list[list[int]]:
        return sorted((members(f) for f in self.facets), key=lambda x: (len(x), x))

    # -- constructions ----------------------------------------------------

    def link(self, sigma) -> "SimplicialComplex":
        s = sigma if isinstance(sigma, int) else mask_of(sigma)
        if s not in self:
            raise ValueError(f"{members(s)} is not a face")
        return SimplicialComplex(self.n, frozenset(f & ~s for f in self.facets if f & s == s))

    def induced(self, w) -> "SimplicialComplex":
        m = w if isinstance(w, int) else mask_of(w)
        if self.is_void:
            return self
        return SimplicialComplex(self.n, frozenset(f & m for f in self.facets))

    def pure_skeleton(self, i: int) -> "SimplicialComplex":
        """Subcomplex generated by the ``i``-dimensional faces."""
        d = self.dim
        if d is None or not -1 <= i <= d:
            raise ValueError(f"skeleton index {i} out of range for dimension {d}")
        gens: set[int] = set()
        for f in self.facets:
            verts = members(f)
            if len(verts) >= i + 1:
                gens.update(mask_of(c) for c in combinations(verts, i + 1))
        return SimplicialComplex(self.n, frozenset(gens))

    def alexander_dual(self) -> "SimplicialComplex":
        full = (1 << self.n) - 1
        faces = self.faces
        dual = [s for s in range(full + 1) if (full & ~s) not in faces]
        return SimplicialComplex(self.n, frozenset(dual))

    def minimal_nonfaces(self) -> list[int]:
        faces = self.faces
        out = []
        for s in range(1 << self.n):
            if s in faces:
                continue
            if all((s & ~(1 << v)) in faces for v in members(s)):
                out.append(s)
        return out

    def components(self) -> int:
        """Connected components; 0 for the void and irrelevant complexes."""
        parent = {v: v for v in members(self.vertices)}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for f in self.facets:
            vs = members(f)
            for a in vs[1:]:
                ra, rb = find(vs[0]), find(a)
                if ra != rb:
                    parent[ra] = rb
        return len({find(v) for v in parent})

    # -- cohomology -------------------------------------------------------

    def cochain_complex(self, fld: ScalarField = QQ) -> tuple[VectorSpaceComplex, list[list[int]]]:
        """Augmented cochain complex; term ``k`` holds ``(k-1)``-faces."""
        d = self.dim
        if d is None:
            return VectorSpaceComplex((), (), fld), []
        faces = [self.faces_of_dim(k) for k in range(-1, d + 1)]
        diffs = [coboundary_matrix(faces[k], faces[k + 1], fld) for k in range(len(faces) - 1)]
        return VectorSpaceComplex(tuple(len(f) for f in faces), tuple(diffs), fld), faces

    def reduced_cohomology(self, fld: ScalarField = QQ) -> dict[int, int]:
        """Map ``j -> dim H~^j`` over all ``j`` with a nonzero group."""
        c, _ = self.cochain_complex(fld)
        hs = cohomology_dims(c, check=False)
        return {k - 1: h for k, h in enumerate(hs) if h}

    def reduced_cohomology_dim(self, j: int, fld: ScalarField = QQ) -> int:
        return self.reduced_cohomology(fld).get(j, 0)

    def is_cm(self, fld: ScalarField = QQ) -> bool:
        """Reisner's criterion over ``fld``."""
        for s in self.faces:
            lk = self.link(s)
            ld = lk.dim
            if any(j < ld for j in lk.reduced_cohomology(fld)):
                return False
        return True

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, facets={self.facet_lists()})"
