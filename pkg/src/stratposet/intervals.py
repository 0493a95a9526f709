"""Product intervals: comparing [0, b] x [0, c] with [0, b x c] and their homology."""
from __future__ import annotations

from dataclasses import dataclass

from .complexes import HomologyGroup, SimplicialComplex, homology, join, nonzero, order_complex, sphere0
from .poset import FinitePoset, StratPoset
from .products import ClosureError, ProductEmbedding


class KunnethMismatch(AssertionError):
    pass


@dataclass
class IsoCheck:
    isomorphic: bool
    top: int  # index of b x c in the target poset
    witness: int | None = None  # element of [0, b x c] missing from the image

    def __bool__(self):
        return self.isomorphic


def interval_iso_check(E: ProductEmbedding, b: int, c: int) -> IsoCheck:
    """Is the product map from [0, b] x [0, c] onto [0, b x c] a poset isomorphism?

    The map is always an order embedding (checked here); it is an isomorphism
    exactly when it is onto.
    """
    if (b, c) not in E.map:
        raise ClosureError(f"pair {(b, c)} is not in the embedding")
    L, R, tgt = E.left, E.right, E.target
    top = E.map[b, c]
    left_iv = L.closed_interval(0, b)
    right_iv = R.closed_interval(0, c)
    if any(y not in E.right_elements for y in right_iv):
        raise ValueError("embedding does not cover the right-hand interval")
    pairs = [(x, y) for x in left_iv for y in right_iv]
    image = {E.map[p] for p in pairs}
    target_iv = tgt.closed_interval(0, top)
    if not image <= set(target_iv):
        raise ClosureError("image of the product interval leaves the target interval")
    if len(pairs) <= 4096:
        for p in pairs:
            for q in pairs:
                pointwise = L.le(p[0], q[0]) and R.le(p[1], q[1])
                if pointwise != tgt.le(E.map[p], E.map[q]):
                    raise ClosureError(f"product map is not an order embedding at {p}, {q}")
    missing = [k for k in target_iv if k not in image]
    return IsoCheck(not missing, top, missing[0] if missing else None)


def _tagged(P: FinitePoset, tag: str) -> FinitePoset:
    return FinitePoset([(tag, i) for i in P.ids], P.above)


def product_interval_model(E: ProductEmbedding, b: int, c: int) -> SimplicialComplex:
    """Delta(0, b) * Delta(0, c) * S^0."""
    K = order_complex(_tagged(E.left.open_interval(0, b), "L"))
    M = order_complex(_tagged(E.right.open_interval(0, c), "R"))
    return join(join(K, M), sphere0((("s", 0), ("s", 1))))


@dataclass
class KunnethReport:
    b: int
    c: int
    top: int
    isomorphic: bool
    direct: list[HomologyGroup]  # reduced homology of Delta(0, b x c)
    model: list[HomologyGroup]  # reduced homology of Delta(0, b) * Delta(0, c) * S^0

    @property
    def agree(self) -> bool:
        return nonzero(self.direct) == nonzero(self.model)


def kunneth_compare(E: ProductEmbedding, b: int, c: int, cache: dict | None = None) -> KunnethReport:
    """Compare homology of the target interval with the join model of the product interval.

    ``cache`` maps interval relation keys to homology, shared across calls.
    """
    if b == 0 or c == 0:
        raise ValueError("both intervals must be proper: b and c must differ from the bottom")
    cache = {} if cache is None else cache
    iso = interval_iso_check(E, b, c)
    direct_iv = E.target.open_interval(0, iso.top)
    key_d = ("P", direct_iv.relation_key())
    if key_d not in cache:
        cache[key_d] = homology(order_complex(direct_iv))
    li, ri = E.left.open_interval(0, b), E.right.open_interval(0, c)
    key_m = ("J", li.relation_key(), ri.relation_key())
    if key_m not in cache:
        cache[key_m] = homology(product_interval_model(E, b, c))
    report = KunnethReport(b, c, iso.top, iso.isomorphic, cache[key_d], cache[key_m])
    if iso.isomorphic and not report.agree:
        raise KunnethMismatch(f"homology differs on an isomorphic product interval ({b}, {c})")
    return report
