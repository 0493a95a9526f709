"""Stratification posets P_A(T): intersections of pulled-back pieces.

Order convention: ``b <= c`` iff subset(b) contains subset(c), so the whole
space X^T is the minimum 0 and smaller strata sit higher up.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .arrangement import Arrangement
from .ground import CoordInjection, GroundSet, IndexSet, SubsetOfPower, all_injections, pullback


@dataclass(frozen=True)
class Generator:
    """A distinct pullback subset together with every (piece, injection) producing it."""

    subset: SubsetOfPower
    sources: tuple[tuple[int, CoordInjection], ...]

    @property
    def piece(self) -> int:
        return self.sources[0][0]

    @property
    def injection(self) -> CoordInjection:
        return self.sources[0][1]


def generators(arrangement: Arrangement, coords: IndexSet) -> list[Generator]:
    arrangement.ground.cells(len(coords))
    order: list[int] = []
    subsets: dict[int, SubsetOfPower] = {}
    sources: dict[int, list] = {}
    for i, piece in enumerate(arrangement.pieces):
        if len(piece.arity) > len(coords):
            continue
        for j in all_injections(piece.arity, coords):
            sub = pullback(piece.subset, j)
            if sub.mask not in sources:
                order.append(sub.mask)
                subsets[sub.mask] = sub
                sources[sub.mask] = []
            sources[sub.mask].append((i, j))
    return [Generator(subsets[m], tuple(sources[m])) for m in order]


class FinitePoset:
    """A small poset on positions 0..n-1 given by strict up-sets as bitmasks.

    ``ids`` carries whatever the positions stand for (element indices of a
    parent poset, for intervals).  Positions must form a linear extension.
    """

    def __init__(self, ids: Sequence, above: Sequence[int]):
        self.ids = tuple(ids)
        self.above = tuple(above)  # above[i]: bitmask of positions j with i < j

    def __len__(self):
        return len(self.ids)

    def less(self, i: int, j: int) -> bool:
        return bool(self.above[i] >> j & 1)

    def relation_key(self) -> tuple[int, ...]:
        return self.above

    def is_antichain(self) -> bool:
        return not any(self.above)


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def _words(masks: Sequence[int], ncells: int) -> np.ndarray:
    nw = max(1, (ncells + 63) // 64)
    raw = b"".join(m.to_bytes(nw * 8, "little") for m in masks)
    return np.frombuffer(raw, dtype="<u8").reshape(len(masks), nw)


def superset_rows(masks: Sequence[int], ncells: int, block: int = 256, subsets: bool = False):
    """Yield (start, bool block) where block[r, j] says masks[start + r] contains masks[j].

    With ``subsets`` the test is reversed: masks[start + r] is contained in masks[j].
    """
    W = _words(masks, ncells)
    for start in range(0, len(masks), block):
        chunk = W[start:start + block]
        ok = np.ones((len(chunk), len(masks)), dtype=bool)
        for w in range(W.shape[1]):
            col, rows = W[:, w][None, :], chunk[:, w, None]
            ok &= (rows & col) == (rows if subsets else col)
        yield start, ok


class StratPoset:
    """P_A(T), elements numbered by decreasing cardinality, ties by increasing bitset value.

    The numbering is a linear extension of the order.
    """

    def __init__(self, arrangement: Arrangement, coords: IndexSet, masks: Sequence[int],
                 gens: Sequence[Generator], include_empty: bool):
        self.arrangement = arrangement
        self.ground: GroundSet = arrangement.ground
        self.coords = coords
        self.masks = tuple(masks)
        self.generators = tuple(gens)
        self.include_empty = include_empty
        self._index = {m: i for i, m in enumerate(self.masks)}

    def __len__(self):
        return len(self.masks)

    def __repr__(self):
        return f"StratPoset(T={list(self.coords.labels)}, {len(self)} elements)"

    def provenance(self, i: int) -> frozenset[int]:
        """Indices of all generators containing element i; their intersection is element i."""
        m = self.masks[i]
        return frozenset(k for k, g in enumerate(self.generators) if g.subset.mask & m == m)

    @property
    def bottom(self) -> int:
        return 0

    def element(self, i: int) -> SubsetOfPower:
        return SubsetOfPower(self.ground, self.coords, self.masks[i])

    @property
    def elements(self) -> list[SubsetOfPower]:
        return [self.element(i) for i in range(len(self))]

    def index_of(self, subset: SubsetOfPower | int) -> int | None:
        if isinstance(subset, SubsetOfPower):
            if subset.coords != self.coords or subset.ground != self.ground:
                return None
            subset = subset.mask
        return self._index.get(subset)

    def le(self, i: int, j: int) -> bool:
        mi, mj = self.masks[i], self.masks[j]
        return mi & mj == mj

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.le(i, j)

    def _relation_rows(self, subsets: bool) -> list[int]:
        out = []
        for start, ok in superset_rows(self.masks, self.ground.size ** len(self.coords), subsets=subsets):
            packed = np.packbits(ok, axis=1, bitorder="little")
            out += [int.from_bytes(r.tobytes(), "little") & ~(1 << (start + k)) for k, r in enumerate(packed)]
        return out

    @cached_property
    def above(self) -> tuple[int, ...]:
        """above[i] = bitmask of j with i < j (strict)."""
        return tuple(self._relation_rows(False))

    @cached_property
    def below(self) -> tuple[int, ...]:
        """below[j] = bitmask of i with i < j (strict)."""
        return tuple(self._relation_rows(True))

    @cached_property
    def covers(self) -> tuple[tuple[int, ...], ...]:
        """covers[i] = elements covering i (transitive reduction of the order)."""
        out = []
        for i, row in enumerate(self.above):
            cov = row
            for j in _bits(row):
                cov &= ~self.above[j]
            out.append(tuple(_bits(cov)))
        return tuple(out)

    def hasse_edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, cs in enumerate(self.covers) for j in cs]

    def open_interval(self, lo: int, hi: int) -> FinitePoset:
        if not self.lt(lo, hi):
            raise ValueError(f"element {lo} is not strictly below {hi}")
        between = self.above[lo] & self.below[hi]
        ids = _bits(between)
        pos = {e: p for p, e in enumerate(ids)}
        rows = []
        for e in ids:
            r = 0
            for f in _bits(self.above[e] & between):
                r |= 1 << pos[f]
            rows.append(r)
        return FinitePoset(ids, rows)

    def closed_interval(self, lo: int, hi: int) -> list[int]:
        if not self.le(lo, hi):
            raise ValueError(f"element {lo} is not below {hi}")
        if lo == hi:
            return [lo]
        return [lo] + _bits(self.above[lo] & self.below[hi]) + [hi]

    def mobius_from(self, lo: int) -> dict[int, int]:
        """mu(lo, z) for every z >= lo."""
        mu = {lo: 1}
        for z in _bits(self.above[lo]):
            mu[z] = -sum(mu[y] for y in _bits(self.below[z]) if y in mu)
        return mu

    def mobius(self, lo: int, hi: int) -> int:
        if not self.le(lo, hi):
            raise ValueError(f"element {lo} is not below {hi}")
        if lo == hi:
            return 1
        mu = {lo: 1}
        for z in _bits(self.above[lo] & self.below[hi]) + [hi]:
            mu[z] = -sum(mu[y] for y in _bits(self.below[z]) if y in mu)
        return mu[hi]

    def to_dot(self, name: str = "P") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, m in enumerate(self.masks):
            lines.append(f'  n{i} [label="{i} |{m.bit_count()}|"];')
        for i, j in self.hasse_edges():
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def close_under_intersection(full: int, gen_masks: Sequence[int], include_empty: bool = False) -> set[int]:
    """All intersections of subfamilies of ``gen_masks``, the empty family giving ``full``."""
    elems = {full}
    for g in gen_masks:
        elems |= {m & g for m in elems}
    if not include_empty:
        elems.discard(0)
    return elems


def build_poset(arrangement: Arrangement, coords: IndexSet | Iterable[str], include_empty: bool = False) -> StratPoset:
    coords = coords if isinstance(coords, IndexSet) else IndexSet(coords)
    gens = generators(arrangement, coords)
    full = (1 << arrangement.ground.cells(len(coords))) - 1
    masks = sorted(close_under_intersection(full, [g.subset.mask for g in gens], include_empty))
    masks.sort(key=int.bit_count, reverse=True)  # stable, so ties stay in increasing mask order
    return StratPoset(arrangement, coords, masks, gens, include_empty)


def avoiding_count(arrangement: Arrangement, coords: IndexSet | Iterable[str]) -> int:
    """Number of points of X^T lying in no generator."""
    coords = coords if isinstance(coords, IndexSet) else IndexSet(coords)
    n = arrangement.ground.cells(len(coords))
    bad = 0
    for g in generators(arrangement, coords):
        bad |= g.subset.mask
    return n - bad.bit_count()
