"""Product maps P_A(S) x P_A(T) -> P_A(S u T), order ideals, factorization and decomposability."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .arrangement import Arrangement, AxisWitness, check_axis_free, is_axis_free
from .ground import (IndexSet, SubsetOfPower, cylinder, cylinder_masks, decode, fresh_label, is_free_in, project,
                     project_masks)
from .poset import Generator, StratPoset, _words, build_poset


class ClosureError(AssertionError):
    """A product of strata is missing from the target poset."""


class HypothesisNotSatisfied(ValueError):
    def __init__(self, witness: AxisWitness):
        super().__init__(f"arrangement contains a coordinate axis ({witness})")
        self.witness = witness


class Claim1Contradiction(AssertionError):
    """An axis-free arrangement whose 0-slice image is not an order ideal."""

    def __init__(self, report: "Claim1Report"):
        super().__init__(f"order ideal property fails: {report.violation}")
        self.report = report


@dataclass
class ProductEmbedding:
    left: StratPoset  # P_A(S)
    right: StratPoset  # P_A(T)
    target: StratPoset  # P_A(S u T)
    right_elements: tuple[int, ...]  # which elements of P_A(T) take part; (0,) for the 0-slice
    map: dict[tuple[int, int], int]

    @property
    def S(self) -> IndexSet:
        return self.left.coords

    @property
    def T(self) -> IndexSet:
        return self.right.coords

    @property
    def zero_slice(self) -> bool:
        return self.right_elements == (0,)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self.map.values())


@dataclass(frozen=True)
class IdealViolation:
    below: int  # target element outside the image
    above: int  # image element with below <= above
    preimage: tuple[int, int]  # (b, c) with b x c = above
    generator: Generator | None = None  # a generator containing `below` that mixes S and T coordinates

    def __str__(self):
        s = f"element {self.below} lies below image element {self.above} = {self.preimage[0]} x {self.preimage[1]} but is not in the image"
        if self.generator is not None:
            piece, j = self.generator.sources[0]
            s += f"; it sits inside the pullback of piece {piece} along {j}"
        return s


def _minimal_elements(P: StratPoset) -> list[int]:
    """Elements with no smaller nonempty stratum beneath them as subsets (maximal in the order)."""
    gmasks = [g.subset.mask for g in P.generators]
    out = []
    for i, m in enumerate(P.masks):
        if not m:
            continue
        if all((m & g) in (m, 0) for g in gmasks):
            out.append(i)
    return out


def product_embedding(arrangement: Arrangement, S, T, *, zero_slice: bool = False,
                      left: StratPoset | None = None, right: StratPoset | None = None,
                      target: StratPoset | None = None) -> ProductEmbedding:
    """The map (b, c) -> b x c.  Prebuilt posets may be passed in to avoid rebuilding."""
    S = S if isinstance(S, IndexSet) else IndexSet(S)
    T = T if isinstance(T, IndexSet) else IndexSet(T)
    U = S.union(T)
    left = left if left is not None else build_poset(arrangement, S)
    right = right if right is not None else build_poset(arrangement, T)
    target = target if target is not None else build_poset(arrangement, U)
    if left.coords != S or right.coords != T or target.coords != U:
        raise ValueError("prebuilt posets do not match the requested coordinates")
    cyl_l = cylinder_masks(left.masks, left.ground, S, U)
    right_elements = (0,) if zero_slice else tuple(range(len(right)))
    cyl_r = dict(zip(right_elements, cylinder_masks([right.masks[j] for j in right_elements], right.ground, T, U)))
    mapping: dict[tuple[int, int], int] = {}
    seen: dict[int, tuple[int, int]] = {}
    for i, ml in enumerate(cyl_l):
        for j in right_elements:
            prod = ml & cyl_r[j]
            k = target.index_of(prod)
            if k is None:
                raise ClosureError(f"product of {i} and {j} is not a stratum of P_A({list(U.labels)})")
            if k in seen:
                raise ClosureError(f"products {seen[k]} and {(i, j)} coincide")
            seen[k] = (i, j)
            mapping[i, j] = k
    return ProductEmbedding(left, right, target, right_elements, mapping)


def _blocking_generator(E: ProductEmbedding, k: int) -> Generator | None:
    """First generator containing element k all of whose sources mix S and T coordinates."""
    m = E.target.masks[k]
    S, T = E.S, E.T
    for g in E.target.generators:
        if g.subset.mask & m != m:
            continue
        if not any(j.image().issubset(S) or (not E.zero_slice and j.image().issubset(T))
                   for _, j in g.sources):
            return g
    return None


def find_ideal_violation(E: ProductEmbedding) -> IdealViolation | None:
    """First target element (in numbering order) below the image but outside it."""
    tgt = E.target
    image = E.image
    # b <= some image element iff b contains one of the image elements that are minimal as subsets
    right_min = [0] if E.zero_slice else _minimal_elements(E.right)
    mins = [tgt.masks[E.map[i, j]] for i in _minimal_elements(E.left) for j in right_min]
    W = _words(tgt.masks, tgt.ground.size ** len(tgt.coords))
    below = np.zeros(len(W), dtype=bool)
    for mw in _words(mins, W.shape[1] * 64):
        below |= ((W & mw) == mw).all(axis=1)
    below[sorted(image)] = False
    hits = np.flatnonzero(below)
    if not len(hits):
        return None
    k = int(hits[0])
    m = tgt.masks[k]
    above = min(c for c in image if tgt.masks[c] & m == tgt.masks[c])
    inverse = {k: ij for ij, k in E.map.items()}
    return IdealViolation(k, above, inverse[above], _blocking_generator(E, k))


def is_order_ideal(E: ProductEmbedding) -> bool:
    return find_ideal_violation(E) is None


@dataclass
class FactorizationResult:
    ok: bool
    element: int
    factor: SubsetOfPower | None = None  # B' with B = B' x X^T
    generator: Generator | None = None
    source: tuple | None = None  # (piece, injection) reaching into the new coordinates
    axis: AxisWitness | None = None

    def __bool__(self):
        return self.ok


def _reaching_sources(target: StratPoset, new: IndexSet) -> list[tuple[Generator, int, object, list[str]]]:
    """(generator, piece, injection, source labels sent into ``new``) for injections leaving S."""
    out = []
    for g in target.generators:
        for piece_i, j in g.sources:
            hit = [s for s, t in zip(j.source.labels, j.images) if t in new]
            if hit:
                out.append((g, piece_i, j, hit))
    return out


def verify_factorizations(target: StratPoset, S, pairs: Sequence[tuple[int, int]],
                          left: StratPoset | None = None) -> list[FactorizationResult]:
    """Check that every generator containing B comes from an injection into S.

    Each pair (b, c) needs c of the form C x X^T with B <= c (B contains it).
    For a generator pulled back along an injection that reaches the new
    coordinates, the containment C x X^T in the generator forces a coordinate
    axis inside the piece; that axis is exhibited and returned.  Otherwise B
    is checked to equal project(B, S) x X^T.
    """
    S = S if isinstance(S, IndexSet) else IndexSet(S)
    U = target.coords
    new = U.minus(S.labels)
    ground = target.ground
    for b, c in pairs:
        if not target.le(b, c):
            raise ValueError(f"element {b} is not below {c}")
    cmasks = [target.masks[c] for _, c in pairs]
    if cylinder_masks(project_masks(cmasks, ground, U, S), ground, S, U) != cmasks or 0 in cmasks:
        raise ValueError("some c is not a nonempty product with the full factor")
    reaching = _reaching_sources(target, new)
    bmasks = [target.masks[b] for b, _ in pairs]
    factors = project_masks(bmasks, ground, U, S)
    rebuilt = cylinder_masks(factors, ground, S, U)
    arr = target.arrangement
    out = []
    for (b, c), bm, fm, rm in zip(pairs, bmasks, factors, rebuilt):
        blocked = next((r for r in reaching if r[0].subset.mask & bm == bm), None)
        if blocked is not None:
            g, piece_i, j, hit = blocked
            # C x X^T inside the pullback: fixing the other coordinates at a point
            # of C x X^T leaves the hit coordinate completely free inside the piece
            cm = target.masks[c]
            point = decode((cm & -cm).bit_length() - 1, U, ground)
            s = hit[0]
            vals = {lab: point[U.index(t)] for lab, t in zip(j.source.labels, j.images)}
            base = tuple(vals[lab] for lab in j.source.labels if lab != s)
            axis = [tuple(x if lab == s else vals[lab] for lab in j.source.labels) for x in range(ground.size)]
            if not all(t in arr.pieces[piece_i].subset for t in axis):
                raise AssertionError(f"generator {(piece_i, str(j))} contains B but the forced axis is missing")
            out.append(FactorizationResult(False, b, None, g, (piece_i, j), AxisWitness(piece_i, s, base)))
            continue
        if rm != bm:
            raise AssertionError(f"element {b} is cut out by S-generators but is not a product")
        if left is not None and left.index_of(fm) is None:
            raise AssertionError(f"projection of element {b} is not a stratum of P_A(S)")
        out.append(FactorizationResult(True, b, SubsetOfPower(ground, S, fm)))
    return out


def verify_factorization(target: StratPoset, S, b: int, c: int,
                         left: StratPoset | None = None) -> FactorizationResult:
    return verify_factorizations(target, S, [(b, c)], left)[0]


@dataclass
class Claim1Report:
    S: IndexSet
    T: IndexSet
    embedding: ProductEmbedding
    violation: IdealViolation | None
    factorizations: list[FactorizationResult] = field(default_factory=list)
    full_product_violation: IdealViolation | None = None  # informational only

    @property
    def certified(self) -> bool:
        return self.violation is None and all(self.factorizations)


def verify_claim1(arrangement: Arrangement, S, *, left: StratPoset | None = None,
                  target: StratPoset | None = None, check_full_product: bool = False) -> Claim1Report:
    """Certify that P_A(S) x {0} is an order ideal of P_A(S u {new}) for an axis-free arrangement."""
    S = S if isinstance(S, IndexSet) else IndexSet(S)
    for i, piece in enumerate(arrangement.pieces):
        wit = check_axis_free(piece, i)
        if wit is not None:
            raise HypothesisNotSatisfied(wit)
    T = IndexSet([fresh_label(S)])
    E = product_embedding(arrangement, S, T, zero_slice=True, left=left, target=target)
    report = Claim1Report(S, T, E, find_ideal_violation(E))
    if report.violation is not None:
        raise Claim1Contradiction(report)
    report.factorizations = verify_factorizations(E.target, S, [(k, k) for k in sorted(E.image)], left=E.left)
    if not report.certified:
        raise Claim1Contradiction(report)
    if check_full_product:
        full = product_embedding(arrangement, S, T, left=E.left, target=E.target)
        report.full_product_violation = find_ideal_violation(full)
    return report


def support(P: StratPoset, beta: int) -> IndexSet:
    """Coordinates on which stratum beta actually depends."""
    B = P.element(beta)
    supp = IndexSet(lab for lab in P.coords.labels if not is_free_in(B, lab))
    if cylinder(project(B, supp), P.coords) != B:
        raise AssertionError(f"element {beta} is not the product of its support projection with X")
    return supp


def decomposition(P: StratPoset, beta: int, posets: dict | None = None) -> tuple[IndexSet, int] | None:
    """A proper S' and the index of beta' in P_A(S') with beta = beta' x 0, or None.

    ``posets`` caches P_A(S') by coordinate set.
    """
    posets = {} if posets is None else posets
    S = P.coords
    supp = support(P, beta)
    if len(supp) == len(S):
        return None
    B = P.element(beta)
    rest = [lab for lab in S.labels if lab not in supp]
    for extra in range(len(rest)):
        for more in combinations(rest, extra):
            Sp = IndexSet(supp.labels + more)
            if Sp not in posets:
                posets[Sp] = build_poset(P.arrangement, Sp, P.include_empty)
            k = posets[Sp].index_of(project(B, Sp))
            if k is not None:
                return Sp, k
    if is_axis_free(P.arrangement):
        raise AssertionError(f"support projection of element {beta} is not a stratum")
    return None


def is_decomposable(P: StratPoset, beta: int, posets: dict | None = None) -> bool:
    return decomposition(P, beta, posets) is not None


def indecomposables(P: StratPoset, posets: dict | None = None) -> list[int]:
    posets = {} if posets is None else posets
    return [b for b in range(len(P)) if not is_decomposable(P, b, posets)]


def zero_slice_images(P: StratPoset, posets: dict | None = None) -> set[int]:
    """Elements of P_A(S) in the image of P_A(S') x {0} for some proper S' of S."""
    posets = {} if posets is None else posets
    S = P.coords
    out: set[int] = set()
    for size in range(len(S)):
        for Sp in combinations(S.labels, size):
            Sp = IndexSet(Sp)
            if Sp not in posets:
                posets[Sp] = build_poset(P.arrangement, Sp, P.include_empty)
            E = product_embedding(P.arrangement, Sp, S.minus(Sp.labels), zero_slice=True,
                                  left=posets[Sp], target=P)
            out |= E.image
    return out


def default_split(s_size: int, t_size: int) -> tuple[IndexSet, IndexSet]:
    from .ground import default_labels

    labels = default_labels(s_size + t_size)
    return IndexSet(labels[:s_size]), IndexSet(labels[s_size:])


def labels_from(spec: str | Iterable[str]) -> IndexSet:
    """'a,b' or 'a b' splits on separators; a bare 'ab' means one label per character."""
    if isinstance(spec, str):
        spec = spec.replace(",", " ").split() if ("," in spec or " " in spec) else list(spec)
    return IndexSet(spec)
