"""Enumeration of small arrangements in canonical order.

Canonical order: ground size, then piece count, then the arity vector, then
the piece bitsets.  Pieces inside an arrangement are distinct and sorted by
(arity, mask), so every unordered family of pieces appears exactly once.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator

from .arrangement import Arrangement, ArrangementPiece, find_axis
from .ground import GroundSet, IndexSet, SubsetOfPower


@dataclass(frozen=True)
class CorpusBounds:
    max_ground: int = 2
    max_arity: int = 2
    max_pieces: int = 2
    max_tuples: int = 4
    min_ground: int = 1


@lru_cache(maxsize=None)
def piece_masks(n: int, arity: int, max_tuples: int, axis_free_only: bool = False) -> tuple[int, ...]:
    """Masks of all subsets of X^arity (|X| = n) with at most ``max_tuples`` members, ascending."""
    ground, coords = GroundSet(n), IndexSet.default(arity)
    ncells = ground.cells(arity)
    out = []
    for k in range(min(max_tuples, ncells) + 1):
        for cells in combinations(range(ncells), k):
            m = sum(1 << c for c in cells)
            if axis_free_only and find_axis(SubsetOfPower(ground, coords, m)) is not None:
                continue
            out.append(m)
    return tuple(sorted(out))


def make_arrangement(n: int, pieces: tuple[tuple[int, int], ...]) -> Arrangement:
    """Arrangement from (arity, mask) pairs, each piece over the default labels a, b, ..."""
    ground = GroundSet(n)
    out = []
    for arity, mask in pieces:
        coords = IndexSet.default(arity)
        out.append(ArrangementPiece(coords, SubsetOfPower(ground, coords, mask)))
    return Arrangement(ground, tuple(out))


def arrangement_key(arr: Arrangement) -> tuple:
    return (arr.ground.size, len(arr.pieces),
            tuple(len(p.arity) for p in arr.pieces),
            tuple(p.subset.mask for p in arr.pieces))


def enumerate_arrangements(bounds: CorpusBounds, axis_free_only: bool = False,
                           symmetry_reduce: bool = False) -> Iterator[Arrangement]:
    for n in range(bounds.min_ground, bounds.max_ground + 1):
        universe = [(k, m) for k in range(1, bounds.max_arity + 1)
                    for m in piece_masks(n, k, bounds.max_tuples, axis_free_only)]
        for count in range(bounds.max_pieces + 1):
            for combo in sorted(combinations(universe, count),
                                key=lambda c: (tuple(a for a, _ in c), tuple(m for _, m in c))):
                if symmetry_reduce and canonical_form(n, combo) != combo:
                    continue
                yield make_arrangement(n, combo)


def _permute_mask(mask: int, n: int, arity: int, point_perm, coord_perm) -> int:
    out = 0
    for cell in range(n**arity):
        if mask >> cell & 1:
            digits = []
            c = cell
            for _ in range(arity):
                c, d = divmod(c, n)
                digits.append(d)
            digits.reverse()
            new = [point_perm[digits[coord_perm[p]]] for p in range(arity)]
            idx = 0
            for d in new:
                idx = idx * n + d
            out |= 1 << idx
    return out


@lru_cache(maxsize=1 << 16)
def _piece_orbit(n: int, arity: int, mask: int, point_perm: tuple) -> int:
    """Smallest mask over coordinate permutations, for a fixed point permutation."""
    return min(_permute_mask(mask, n, arity, point_perm, cp) for cp in permutations(range(arity)))


def canonical_form(n: int, pieces: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    """Minimal representative under relabelling points of X and coordinates of each piece.

    Both symmetries leave the stratification posets unchanged up to
    isomorphism, so the image of the product map is an order ideal for an
    arrangement iff it is for its canonical form.
    """
    best = None
    for pp in permutations(range(n)):
        # pieces that become equal generate the same pullbacks, so merge them
        cand = tuple(sorted({(k, _piece_orbit(n, k, m, pp)) for k, m in pieces}))
        if best is None or cand < best:
            best = cand
    return best


def random_arrangements(bounds: CorpusBounds, samples: int, seed: int,
                        axis_free_only: bool = False) -> Iterator[Arrangement]:
    rng = random.Random(seed)
    for _ in range(samples):
        n = rng.randint(bounds.min_ground, bounds.max_ground)
        count = rng.randint(0, bounds.max_pieces)
        pieces = set()
        for _ in range(count):
            k = rng.randint(1, bounds.max_arity)
            masks = piece_masks(n, k, bounds.max_tuples, axis_free_only)
            pieces.add((k, rng.choice(masks)))
        yield make_arrangement(n, tuple(sorted(pieces)))


def all_pieces(n: int, arity: int) -> Iterator[ArrangementPiece]:
    """Every subset of X^arity as a piece (2^(n^arity) of them)."""
    ground, coords = GroundSet(n), IndexSet.default(arity)
    for m in range(1 << ground.cells(arity)):
        yield ArrangementPiece(coords, SubsetOfPower(ground, coords, m))
