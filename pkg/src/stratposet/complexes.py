"""Simplicial complexes, order complexes, joins and integral homology.

Complexes are augmented: the empty face is always present in dimension -1,
so reduced homology is the homology of the chain complex as stored.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from itertools import zip_longest

from .poset import FinitePoset, StratPoset, _bits
from .snf import IntMatrix, rank_mod_p, smith_normal_form


def _sign(d: int) -> int:
    return -1 if d % 2 else 1


class SimplicialComplex:
    """Faces are sorted tuples of vertex positions, grouped by dimension."""

    def __init__(self, vertices: Sequence[Hashable], faces: dict[int, Iterable[tuple[int, ...]]], check: bool = True):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        self.faces = {d: sorted(set(fs)) for d, fs in faces.items() if fs}
        self.faces[-1] = [()]
        if check:
            self._check()

    def _check(self):
        nv = len(self.vertices)
        for d, fs in self.faces.items():
            present = set(self.faces.get(d - 1, ()))
            for f in fs:
                if len(f) != d + 1 or list(f) != sorted(set(f)) or any(not 0 <= v < nv for v in f):
                    raise ValueError(f"malformed face {f} in dimension {d}")
                if d >= 0 and any(f[:i] + f[i + 1:] not in present for i in range(len(f))):
                    raise ValueError(f"face {f} is missing a facet")

    @classmethod
    def from_facets(cls, vertices: Sequence[Hashable], facets: Iterable[Iterable]) -> "SimplicialComplex":
        pos = {v: i for i, v in enumerate(vertices)}
        faces: dict[int, set] = {}
        for facet in facets:
            f = sorted(pos[v] for v in facet)
            for k in range(len(f) + 1):
                for sub in combinations(f, k):
                    faces.setdefault(k - 1, set()).add(sub)
        return cls(vertices, faces, check=False)

    @property
    def dim(self) -> int:
        return max(self.faces)

    def f_vector(self) -> list[int]:
        """Face counts for dimensions -1, 0, ..., dim."""
        return [len(self.faces.get(d, ())) for d in range(-1, self.dim + 1)]

    def reduced_euler_characteristic(self) -> int:
        return sum(_sign(d) * len(fs) for d, fs in self.faces.items())

    def __len__(self):
        return sum(len(fs) for fs in self.faces.values())

    def __repr__(self):
        return f"SimplicialComplex({len(self.vertices)} vertices, f={self.f_vector()})"


def empty_complex() -> SimplicialComplex:
    return SimplicialComplex((), {})


def sphere0(ids=("s-", "s+")) -> SimplicialComplex:
    return SimplicialComplex(ids, {0: [(0,), (1,)]})


def order_complex(P: FinitePoset) -> SimplicialComplex:
    """All chains of P; positions of P are a linear extension, so chains come out sorted."""
    faces: dict[int, list] = {}
    stack = [((i,), P.above[i]) for i in range(len(P) - 1, -1, -1)]
    while stack:
        chain, up = stack.pop()
        faces.setdefault(len(chain) - 1, []).append(chain)
        for j in reversed(_bits(up)):
            stack.append((chain + (j,), up & P.above[j]))
    return SimplicialComplex(P.ids, faces, check=False)


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    if set(K.vertices) & set(L.vertices):
        raise ValueError("join needs disjoint vertex ids")
    shift = len(K.vertices)
    faces: dict[int, list] = {}
    for dk, fk in K.faces.items():
        for dl, fl in L.faces.items():
            bucket = faces.setdefault(dk + dl + 1, [])
            for s in fk:
                for t in fl:
                    bucket.append(s + tuple(v + shift for v in t))
    return SimplicialComplex(K.vertices + L.vertices, faces, check=False)


def interval_f_vectors(P: StratPoset, lo: int = 0) -> dict[int, list[int]]:
    """f-vectors (dimensions -1, 0, 1, ...) of the order complexes of (lo, z), for every z > lo.

    Counts chains lo = x_0 < x_1 < ... < x_k = z by length k; a chain with
    k steps contributes a (k-2)-dimensional face of the open interval.
    """
    up = P.above[lo]
    region = up | (1 << lo)
    counts: dict[int, list[int]] = {lo: [1]}
    for z in _bits(up):
        preds = [counts[y] for y in _bits(P.below[z] & region)]
        counts[z] = [0] + [sum(col) for col in zip_longest(*preds, fillvalue=0)]
    del counts[lo]
    return {z: c[1:] for z, c in counts.items()}


def euler_from_f_vector(f: Sequence[int]) -> int:
    """Reduced Euler characteristic from face counts starting in dimension -1."""
    return sum(_sign(d - 1) * x for d, x in enumerate(f))


@dataclass
class ChainComplex:
    """Augmented simplicial chains; ``boundaries[k]`` maps C_k to C_(k-1), k = 0..dim."""

    sizes: dict[int, int]
    boundaries: dict[int, IntMatrix]

    @classmethod
    def of(cls, K: SimplicialComplex, reduced: bool = True) -> "ChainComplex":
        index = {d: {f: i for i, f in enumerate(fs)} for d, fs in K.faces.items()}
        sizes = {d: len(fs) for d, fs in K.faces.items()}
        if not reduced:
            sizes[-1] = 0
        bounds = {}
        for d in range(0, K.dim + 1):
            entries = {}
            rows = index[d - 1]
            if d > 0 or reduced:
                for c, f in enumerate(K.faces[d]):
                    for i in range(len(f)):
                        entries[rows[f[:i] + f[i + 1:]], c] = -1 if i % 2 else 1
            bounds[d] = IntMatrix(sizes[d - 1], sizes[d], entries)
        return cls(sizes, bounds)

    def boundary(self, d: int) -> IntMatrix:
        if d in self.boundaries:
            return self.boundaries[d]
        return IntMatrix(self.sizes.get(d - 1, 0), self.sizes.get(d, 0))

    def is_complex(self) -> bool:
        """True iff every composite boundary vanishes."""
        return all((self.boundary(d - 1) @ self.boundary(d)).is_zero()
                   for d in self.boundaries if d - 1 in self.boundaries)


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self):
        parts = ([("Z" if self.betti == 1 else f"Z^{self.betti}")] if self.betti else []) + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def homology(K: SimplicialComplex, reduced: bool = True) -> list[HomologyGroup]:
    """Integral homology in degrees -1..dim (reduced) or 0..dim."""
    C = ChainComplex.of(K, reduced)
    snf = {d: smith_normal_form(C.boundary(d)) for d in C.boundaries}
    lo = -1 if reduced else 0
    out = []
    for d in range(lo, K.dim + 1):
        rk_d = snf[d].rank if d in snf else 0
        nxt = snf.get(d + 1)
        rk_next = nxt.rank if nxt else 0
        out.append(HomologyGroup(d, C.sizes.get(d, 0) - rk_d - rk_next, nxt.torsion if nxt else ()))
    return out


def betti_mod_p(K: SimplicialComplex, p: int, reduced: bool = True) -> list[int]:
    C = ChainComplex.of(K, reduced)
    ranks = {d: rank_mod_p(C.boundary(d), p) for d in C.boundaries}
    lo = -1 if reduced else 0
    return [C.sizes.get(d, 0) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in range(lo, K.dim + 1)]


def euler_from_homology(groups: Iterable[HomologyGroup]) -> int:
    return sum(_sign(g.degree) * g.betti for g in groups)


def nonzero(groups: Iterable[HomologyGroup]) -> list[HomologyGroup]:
    """Drop the zero groups, so homologies of complexes of different dimension compare directly."""
    return [g for g in groups if not g.is_zero()]
