"""Finite ground set X, its powers X^T, and exact subset algebra on them.

A subset of X^T is stored as a Python int used as a bitset: bit ``i`` is set
iff the tuple with mixed-radix index ``i`` is a member.  The radix order is
the sorted order of the coordinate labels, first label most significant,
which is also the C order of a numpy array of shape ``(n,) * |T|``.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

MAX_CELLS = 1 << 24


class CellCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class GroundSet:
    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"ground set size must be a positive integer, got {self.size!r}")

    def cells(self, arity: int) -> int:
        """Number of tuples in X^arity, enforcing the cell cap."""
        count = self.size**arity
        if count > MAX_CELLS:
            raise CellCapExceeded(f"|X|^{arity} = {count} exceeds the cap of {MAX_CELLS} cells")
        return count


class IndexSet:
    """A finite set of coordinate labels, kept in lexicographic order."""

    __slots__ = ("labels", "_pos")

    def __init__(self, labels: Iterable[str] = ()):
        labels = tuple(labels)
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise ValueError(f"coordinate labels must be nonempty strings, got {lab!r}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate coordinate labels in {labels}")
        self.labels = tuple(sorted(labels))
        self._pos = {lab: i for i, lab in enumerate(self.labels)}

    @classmethod
    def default(cls, size: int, skip: Iterable[str] = ()) -> "IndexSet":
        return cls(default_labels(size, skip))

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self._pos

    def __eq__(self, other):
        return isinstance(other, IndexSet) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"IndexSet({list(self.labels)})"

    def index(self, label: str) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise KeyError(f"label {label!r} not in {self.labels}") from None

    def issubset(self, other: "IndexSet") -> bool:
        return all(lab in other for lab in self.labels)

    def isdisjoint(self, other: "IndexSet") -> bool:
        return not any(lab in other for lab in self.labels)

    def union(self, other: "IndexSet") -> "IndexSet":
        if not self.isdisjoint(other):
            raise ValueError(f"label sets {self.labels} and {other.labels} overlap")
        return IndexSet(self.labels + other.labels)

    def minus(self, other: Iterable[str]) -> "IndexSet":
        drop = set(other)
        return IndexSet(lab for lab in self.labels if lab not in drop)


def default_labels(size: int, skip: Iterable[str] = ()) -> tuple[str, ...]:
    """The first ``size`` labels of a, b, c, ... that are not in ``skip``."""
    skip = set(skip)
    out = [c for c in string.ascii_lowercase if c not in skip][:size]
    if len(out) < size:
        raise ValueError(f"cannot produce {size} default labels")
    return tuple(out)


def fresh_label(coords: IndexSet) -> str:
    return default_labels(1, coords.labels)[0]


def encode(tup: Sequence[int], coords: IndexSet, ground: GroundSet) -> int:
    if len(tup) != len(coords):
        raise ValueError(f"tuple {tuple(tup)} has length {len(tup)}, expected {len(coords)}")
    idx = 0
    for x in tup:
        if not 0 <= x < ground.size:
            raise ValueError(f"point {x} out of range for |X| = {ground.size}")
        idx = idx * ground.size + x
    return idx


def decode(index: int, coords: IndexSet, ground: GroundSet) -> tuple[int, ...]:
    n, k = ground.size, len(coords)
    if not 0 <= index < n**k:
        raise ValueError(f"cell index {index} out of range")
    out = [0] * k
    for pos in range(k - 1, -1, -1):
        index, out[pos] = divmod(index, n)
    return tuple(out)


def _mask_to_array(mask: int, ncells: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((ncells + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:ncells].astype(bool)


def _array_to_mask(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr.ravel(), bitorder="little").tobytes(), "little")


@dataclass(frozen=True)
class SubsetOfPower:
    """A subset of X^coords."""

    ground: GroundSet
    coords: IndexSet
    mask: int

    def __post_init__(self):
        ncells = self.ground.cells(len(self.coords))
        if self.mask < 0 or self.mask >> ncells:
            raise ValueError("mask has bits outside X^coords")

    # constructors

    @classmethod
    def full(cls, ground: GroundSet, coords: IndexSet) -> "SubsetOfPower":
        return cls(ground, coords, (1 << ground.cells(len(coords))) - 1)

    @classmethod
    def empty(cls, ground: GroundSet, coords: IndexSet) -> "SubsetOfPower":
        return cls(ground, coords, 0)

    @classmethod
    def from_tuples(cls, ground: GroundSet, coords: IndexSet, tuples: Iterable[Sequence[int]]) -> "SubsetOfPower":
        mask = 0
        for t in tuples:
            mask |= 1 << encode(t, coords, ground)
        return cls(ground, coords, mask)

    @classmethod
    def from_array(cls, ground: GroundSet, coords: IndexSet, arr: np.ndarray) -> "SubsetOfPower":
        arr = np.asarray(arr, dtype=bool)
        if arr.shape != (ground.size,) * len(coords):
            raise ValueError(f"array shape {arr.shape} does not match X^{len(coords)}")
        return cls(ground, coords, _array_to_mask(arr))

    # views

    @property
    def ncells(self) -> int:
        return self.ground.size ** len(self.coords)

    @cached_property
    def cardinality(self) -> int:
        return self.mask.bit_count()

    def __len__(self):
        return self.cardinality

    def __bool__(self):
        return self.mask != 0

    def to_array(self) -> np.ndarray:
        shape = (self.ground.size,) * len(self.coords)
        return _mask_to_array(self.mask, self.ncells).reshape(shape)

    def cells(self) -> list[int]:
        m, out = self.mask, []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def tuples(self) -> list[tuple[int, ...]]:
        return [decode(i, self.coords, self.ground) for i in self.cells()]

    def __contains__(self, tup) -> bool:
        return bool(self.mask >> encode(tup, self.coords, self.ground) & 1)

    def is_full(self) -> bool:
        return self.mask == (1 << self.ncells) - 1

    # boolean algebra on a common X^T

    def _check_same(self, other: "SubsetOfPower"):
        if self.ground != other.ground or self.coords != other.coords:
            raise ValueError("subsets live in different spaces")

    def __and__(self, other: "SubsetOfPower") -> "SubsetOfPower":
        self._check_same(other)
        return SubsetOfPower(self.ground, self.coords, self.mask & other.mask)

    def __or__(self, other: "SubsetOfPower") -> "SubsetOfPower":
        self._check_same(other)
        return SubsetOfPower(self.ground, self.coords, self.mask | other.mask)

    def __le__(self, other: "SubsetOfPower") -> bool:
        self._check_same(other)
        return self.mask & other.mask == self.mask

    def __ge__(self, other: "SubsetOfPower") -> bool:
        return other <= self

    def complement(self) -> "SubsetOfPower":
        return SubsetOfPower(self.ground, self.coords, ((1 << self.ncells) - 1) ^ self.mask)

    def __repr__(self):
        return f"SubsetOfPower(|X|={self.ground.size}, coords={list(self.coords.labels)}, {self.tuples()})"


@dataclass(frozen=True)
class CoordInjection:
    """An injection of label sets; ``images[i]`` is the image of ``source.labels[i]``."""

    source: IndexSet
    target: IndexSet
    images: tuple[str, ...]

    def __post_init__(self):
        if len(self.images) != len(self.source):
            raise ValueError("injection must assign an image to every source label")
        if len(set(self.images)) != len(self.images):
            raise ValueError(f"map {self.images} is not injective")
        for lab in self.images:
            if lab not in self.target:
                raise ValueError(f"image label {lab!r} not in target {self.target.labels}")

    @classmethod
    def from_dict(cls, source: IndexSet, target: IndexSet, mapping: dict[str, str]) -> "CoordInjection":
        return cls(source, target, tuple(mapping[lab] for lab in source.labels))

    def __call__(self, label: str) -> str:
        return self.images[self.source.index(label)]

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.source.labels, self.images))

    def image(self) -> IndexSet:
        return IndexSet(self.images)

    def __str__(self):
        return "{" + ", ".join(f"{s}->{t}" for s, t in zip(self.source.labels, self.images)) + "}"


def all_injections(source: IndexSet, target: IndexSet) -> list[CoordInjection]:
    from itertools import permutations

    return [CoordInjection(source, target, imgs) for imgs in permutations(target.labels, len(source))]


def product(B: SubsetOfPower, C: SubsetOfPower) -> SubsetOfPower:
    """B x C inside X^(S u T)."""
    if B.ground != C.ground:
        raise ValueError("ground mismatch")
    coords = B.coords.union(C.coords)
    outer = np.multiply.outer(B.to_array(), C.to_array()).astype(bool)
    order = [coords.index(lab) for lab in B.coords.labels + C.coords.labels]
    # axis p of `outer` must land at position order[p]
    arr = np.moveaxis(outer, list(range(len(order))), order) if order else outer
    return SubsetOfPower.from_array(B.ground, coords, arr)


@lru_cache(maxsize=1 << 16)
def _pullback_mask(n: int, k_src: int, mask: int, positions: tuple[int, ...], k_tgt: int) -> int:
    arr = _mask_to_array(mask, n**k_src).reshape((n,) * k_src)
    perm = sorted(range(k_src), key=lambda p: positions[p])
    arr = arr.transpose(perm) if k_src else arr
    shape = [1] * k_tgt
    for p in positions:
        shape[p] = n
    full = np.broadcast_to(arr.reshape(shape), (n,) * k_tgt)
    return _array_to_mask(np.ascontiguousarray(full))


def pullback(A: SubsetOfPower, j: CoordInjection) -> SubsetOfPower:
    """Preimage of A under the projection X^target -> X^source determined by j."""
    if j.source != A.coords:
        raise ValueError(f"injection source {j.source.labels} differs from subset coords {A.coords.labels}")
    k_tgt = len(j.target)
    A.ground.cells(k_tgt)
    positions = tuple(j.target.index(lab) for lab in j.images)
    mask = _pullback_mask(A.ground.size, len(A.coords), A.mask, positions, k_tgt)
    return SubsetOfPower(A.ground, j.target, mask)


def project(B: SubsetOfPower, keep: IndexSet | Iterable[str]) -> SubsetOfPower:
    """Image of B under forgetting every coordinate outside ``keep``."""
    keep = keep if isinstance(keep, IndexSet) else IndexSet(keep)
    if not keep.issubset(B.coords):
        raise ValueError(f"{keep.labels} is not a subset of {B.coords.labels}")
    drop = tuple(B.coords.index(lab) for lab in B.coords.labels if lab not in keep)
    arr = B.to_array()
    if drop:
        arr = arr.any(axis=drop)
    return SubsetOfPower.from_array(B.ground, keep, arr)


def cylinder(B: SubsetOfPower, coords: IndexSet) -> SubsetOfPower:
    """B x X^(coords - B.coords)."""
    j = CoordInjection(B.coords, coords, B.coords.labels)
    return pullback(B, j)


def _unpack_rows(masks: Sequence[int], ncells: int) -> np.ndarray:
    nbytes = (ncells + 7) // 8
    raw = np.frombuffer(b"".join(m.to_bytes(nbytes, "little") for m in masks), dtype=np.uint8)
    return np.unpackbits(raw.reshape(len(masks), nbytes), axis=1, bitorder="little")[:, :ncells]


def _pack_rows(bits: np.ndarray) -> list[int]:
    packed = np.packbits(bits.reshape(len(bits), -1), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def cylinder_masks(masks: Sequence[int], ground: GroundSet, source: IndexSet, target: IndexSet) -> list[int]:
    """Vectorized ``cylinder`` for many subsets of X^source at once, as masks over X^target."""
    if not source.issubset(target):
        raise ValueError(f"{source.labels} is not a subset of {target.labels}")
    n, K = ground.size, len(target)
    ground.cells(K)
    if not masks:
        return []
    bits = _unpack_rows(masks, n ** len(source))
    # both label lists are sorted, so source axes keep their relative order in the target
    shape = [len(masks)] + [1] * K
    for lab in source.labels:
        shape[1 + target.index(lab)] = n
    return _pack_rows(np.broadcast_to(bits.reshape(shape), (len(masks),) + (n,) * K))


def project_masks(masks: Sequence[int], ground: GroundSet, source: IndexSet, keep: IndexSet) -> list[int]:
    """Vectorized ``project`` of many subsets of X^source onto X^keep."""
    if not keep.issubset(source):
        raise ValueError(f"{keep.labels} is not a subset of {source.labels}")
    if not masks:
        return []
    n, k = ground.size, len(source)
    bits = _unpack_rows(masks, n**k).reshape((len(masks),) + (n,) * k)
    drop = tuple(1 + i for i, lab in enumerate(source.labels) if lab not in keep)
    return _pack_rows(bits.any(axis=drop) if drop else bits)


def is_free_in(B: SubsetOfPower, s: str) -> bool:
    """True iff coordinate ``s`` is unconstrained, i.e. B = project(B, T - s) x X."""
    if s not in B.coords:
        raise ValueError(f"label {s!r} not in {B.coords.labels}")
    arr = B.to_array()
    axis = B.coords.index(s)
    return bool(np.array_equal(arr.all(axis=axis), arr.any(axis=axis)))


def all_tuples(ground: GroundSet, arity: int):
    return iproduct(range(ground.size), repeat=arity)
