"""Arrangements of subsets A_i of X^{S_i} and the two freeness hypotheses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ground import GroundSet, IndexSet, SubsetOfPower, is_free_in


@dataclass(frozen=True)
class ArrangementPiece:
    arity: IndexSet
    subset: SubsetOfPower

    def __post_init__(self):
        if len(self.arity) < 1:
            raise ValueError("a piece needs at least one coordinate")
        if self.subset.coords != self.arity:
            raise ValueError("piece subset must live over its own arity labels")

    @classmethod
    def from_tuples(cls, ground: GroundSet, labels: Sequence[str], tuples) -> "ArrangementPiece":
        """``tuples`` are read in the column order of ``labels`` (which need not be sorted)."""
        coords = IndexSet(labels)
        perm = [list(labels).index(lab) for lab in coords.labels]
        tuples = [tuple(t[p] for p in perm) if len(t) == len(labels) else tuple(t) for t in tuples]
        return cls(coords, SubsetOfPower.from_tuples(ground, coords, tuples))

    @property
    def ground(self) -> GroundSet:
        return self.subset.ground


@dataclass(frozen=True)
class Arrangement:
    ground: GroundSet
    pieces: tuple[ArrangementPiece, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        for p in self.pieces:
            if p.ground != self.ground:
                raise ValueError("all pieces must share the arrangement's ground set")

    def __len__(self):
        return len(self.pieces)


@dataclass(frozen=True)
class AxisWitness:
    piece: int
    coord: str
    base: tuple[int, ...]  # point of X^(S_i - {coord}), in sorted label order

    def __str__(self):
        return f"piece {self.piece}: axis in coordinate {self.coord!r} over base point {self.base}"


def find_axis(subset: SubsetOfPower) -> tuple[str, tuple[int, ...]] | None:
    """First (coordinate, base point) whose whole fiber lies in ``subset``.

    Coordinates are scanned in label order and base points in radix order.
    """
    arr = subset.to_array()
    for axis, lab in enumerate(subset.coords.labels):
        full_fibers = arr.all(axis=axis)
        hits = np.flatnonzero(full_fibers)
        if hits.size:
            base = np.unravel_index(int(hits[0]), full_fibers.shape) if full_fibers.ndim else ()
            return lab, tuple(int(x) for x in base)
    return None


def check_axis_free(piece: ArrangementPiece, index: int = 0) -> AxisWitness | None:
    """Return None if no coordinate axis {x} x X lies inside the piece, else the first one."""
    hit = find_axis(piece.subset)
    if hit is None:
        return None
    return AxisWitness(index, *hit)


def check_pullback_free(piece: ArrangementPiece) -> str | None:
    """Return None if the piece is not a pullback along any coordinate projection,
    else the first coordinate in which it is free."""
    for lab in piece.arity.labels:
        if is_free_in(piece.subset, lab):
            return lab
    return None


def is_axis_free(arrangement: Arrangement) -> bool:
    return all(check_axis_free(p) is None for p in arrangement.pieces)


class HypothesisConsistencyError(AssertionError):
    """Axis-freeness held but pullback-freeness failed on a nonempty piece."""


@dataclass
class PieceReport:
    index: int
    axis_free: bool
    pullback_free: bool
    empty: bool
    axis_witness: AxisWitness | None = None
    free_coord: str | None = None


@dataclass
class HypothesisReport:
    pieces: list[PieceReport] = field(default_factory=list)

    @property
    def axis_free(self) -> bool:
        return all(p.axis_free for p in self.pieces)

    @property
    def pullback_free(self) -> bool:
        return all(p.pullback_free for p in self.pieces)


def check_hypotheses(arrangement: Arrangement) -> HypothesisReport:
    report = HypothesisReport()
    for i, piece in enumerate(arrangement.pieces):
        wit = check_axis_free(piece, i)
        free = check_pullback_free(piece)
        empty = not piece.subset
        if wit is None and free is not None and not empty:
            # a nonempty set free in s contains the fiber over any of its points
            raise HypothesisConsistencyError(f"piece {i} is axis-free but free in {free!r}")
        report.pieces.append(PieceReport(i, wit is None, free is None, empty, wit, free))
    return report
