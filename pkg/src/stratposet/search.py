"""Search small arrangements for product maps whose image is not an order ideal."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool

from .arrangement import Arrangement, is_axis_free
from .corpus import CorpusBounds, arrangement_key, enumerate_arrangements, random_arrangements
from .ground import GroundSet, IndexSet, default_labels
from .poset import build_poset
from .products import IdealViolation, find_ideal_violation, product_embedding

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBounds:
    max_ground: int = 2
    max_arity: int = 2
    max_pieces: int = 2
    max_tuples: int = 4
    max_s: int = 3
    t_size: int = 1
    min_ground: int = 1

    def corpus(self) -> CorpusBounds:
        return CorpusBounds(self.max_ground, self.max_arity, self.max_pieces, self.max_tuples, self.min_ground)


@dataclass
class Counterexample:
    arrangement: Arrangement
    S: IndexSet
    T: IndexSet
    violation: IdealViolation
    axis_free: bool


@dataclass
class SearchResult:
    bounds: SearchBounds
    mode: str
    zero_slice: bool
    arrangements: int = 0
    checks: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.counterexamples)

    def axis_free_violations(self) -> list[Counterexample]:
        return [c for c in self.counterexamples if c.axis_free]

    def summary(self) -> str:
        if not self.found:
            return f"no violation found at these bounds ({self.arrangements} arrangements, {self.checks} embeddings)"
        return (f"{len(self.counterexamples)} violations in {self.checks} embeddings over "
                f"{self.arrangements} arrangements; {len(self.axis_free_violations())} from axis-free arrangements")


def check_arrangement(arr: Arrangement, bounds: SearchBounds, zero_slice: bool = True) -> list[Counterexample]:
    """Every (S, T) split with |S| <= max_s and |T| = t_size, S and T on default labels."""
    out = []
    t = bounds.t_size
    posets = {}

    def poset(coords: IndexSet):
        if coords not in posets:
            posets[coords] = build_poset(arr, coords)
        return posets[coords]

    axis_free = is_axis_free(arr)
    for s in range(bounds.max_s + 1):
        labels = default_labels(s + t)
        S, T = IndexSet(labels[:s]), IndexSet(labels[s:])
        E = product_embedding(arr, S, T, zero_slice=zero_slice, left=poset(S),
                              right=poset(T), target=poset(S.union(T)))
        v = find_ideal_violation(E)
        if v is not None:
            out.append(Counterexample(arr, S, T, v, axis_free))
    return out


def _work(args):
    arr, bounds, zero_slice = args
    return arrangement_key(arr), check_arrangement(arr, bounds, zero_slice)


def counterexample_search(bounds: SearchBounds, mode: str = "exhaustive", *, seed: int = 0,
                          samples: int = 1000, axis_free_only: bool = False, symmetry_reduce: bool = False,
                          zero_slice: bool = True, stop_after: int | None = None, jobs: int = 1) -> SearchResult:
    """Run the search; output order is canonical whatever ``jobs`` is.

    ``zero_slice`` restricts the T side to its bottom element, which is the
    form of the product map covered by the axis-free order ideal statement.
    """
    if mode == "exhaustive":
        arrs = enumerate_arrangements(bounds.corpus(), axis_free_only, symmetry_reduce)
    elif mode == "random":
        arrs = random_arrangements(bounds.corpus(), samples, seed, axis_free_only)
    else:
        raise ValueError(f"unknown search mode {mode!r}")
    GroundSet(bounds.max_ground).cells(bounds.max_s + bounds.t_size)
    result = SearchResult(bounds, mode, zero_slice)
    tasks = ((a, bounds, zero_slice) for a in arrs)
    found = []
    if jobs > 1:
        with Pool(jobs) as pool:
            for key, hits in pool.imap(_work, tasks, chunksize=64):
                result.arrangements += 1
                found.extend((key, i, h) for i, h in enumerate(hits))
    else:
        for task in tasks:
            key, hits = _work(task)
            result.arrangements += 1
            found.extend((key, i, h) for i, h in enumerate(hits))
            if stop_after is not None and len(found) >= stop_after:
                break
    result.checks = result.arrangements * (bounds.max_s + 1)
    found.sort(key=lambda x: (x[0], len(x[2].S), x[1]))
    result.counterexamples = [h for _, _, h in found]
    log.info(result.summary())
    return result
