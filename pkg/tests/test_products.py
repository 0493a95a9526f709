import pytest

from stratposet.arrangement import Arrangement, ArrangementPiece
from stratposet.corpus import CorpusBounds, enumerate_arrangements
from stratposet.ground import GroundSet, IndexSet, SubsetOfPower
from stratposet.poset import build_poset
from stratposet.products import (HypothesisNotSatisfied, decomposition, find_ideal_violation, indecomposables,
                                 is_decomposable, is_order_ideal, labels_from, product_embedding, support,
                                 verify_claim1, verify_factorization, zero_slice_images)

import oracles


def arrangement(n, *pieces):
    g = GroundSet(n)
    return Arrangement(g, tuple(ArrangementPiece.from_tuples(g, labels, tuples) for labels, tuples in pieces))


def diagonal(n):
    return arrangement(n, ("ab", [(i, i) for i in range(n)]))


# the first hit of the exhaustive search at |X| = 2
COUNTER = arrangement(2, ("a", [(0,)]), ("ab", [(0, 0), (0, 1), (1, 0)]))


def tuples_of(P, k):
    return set(P.element(k).tuples())


def test_bottom_maps_to_bottom():
    E = product_embedding(diagonal(3), "a", "bc")
    assert E.map[0, 0] == 0


def test_embedding_examples():
    E = product_embedding(diagonal(3), "a", "bc")
    assert {frozenset(tuples_of(E.target, k)) for k in E.image} == {
        frozenset(oracles.power(3, 3)),
        frozenset(x for x in oracles.power(3, 3) if x[1] == x[2])}
    E = product_embedding(diagonal(3), "ab", "c")
    assert {frozenset(tuples_of(E.target, k)) for k in E.image} == {
        frozenset(oracles.power(3, 3)),
        frozenset(x for x in oracles.power(3, 3) if x[0] == x[1])}
    assert is_order_ideal(E)


def test_embedding_is_order_embedding():
    arrs = list(enumerate_arrangements(CorpusBounds(max_ground=2, max_tuples=3)))[::11]
    for arr in arrs:
        E = product_embedding(arr, "ab", "c")
        L, R, T = E.left, E.right, E.target
        for (b, c), k in E.map.items():
            for (b2, c2), k2 in E.map.items():
                assert (L.le(b, b2) and R.le(c, c2)) == T.le(k, k2)


def test_ideal_check_against_brute_force():
    arrs = list(enumerate_arrangements(CorpusBounds(max_ground=2, max_tuples=4)))[::5]
    for arr in arrs:
        for S, T in [("a", "b"), ("ab", "c")]:
            for zero in (True, False):
                E = product_embedding(arr, S, T, zero_slice=zero)
                target = [frozenset(tuples_of(E.target, k)) for k in range(len(E.target))]
                image = {target[k] for k in E.image}
                assert is_order_ideal(E) == oracles.is_ideal(target, image)


def test_counterexample_violation():
    E = product_embedding(COUNTER, "a", "b", zero_slice=True)
    v = find_ideal_violation(E)
    assert v is not None
    assert v.below not in E.image and v.above in E.image and E.target.le(v.below, v.above)
    assert v.generator is not None and v.generator.sources[0][0] == 1
    with pytest.raises(HypothesisNotSatisfied):
        verify_claim1(COUNTER, IndexSet("a"))


def test_full_product_can_fail_for_axis_free():
    # the statement only covers the bottom slice; the whole product may not be an ideal
    arr = arrangement(2, ("a", [(0,)]), ("ab", [(0, 0), (1, 1)]))
    assert is_order_ideal(product_embedding(arr, "a", "b", zero_slice=True))
    assert not is_order_ideal(product_embedding(arr, "a", "b"))
    rep = verify_claim1(arr, IndexSet("a"), check_full_product=True)
    assert rep.certified and rep.full_product_violation is not None


@pytest.mark.parametrize("arr,S", [
    (diagonal(3), "ab"),
    (arrangement(3, ("ab", [])), "ab"),
    (arrangement(2, ("ab", [(0, 1)])), "ab"),
])
def test_claim1_examples(arr, S):
    rep = verify_claim1(arr, IndexSet(S))
    assert rep.certified and len(rep.factorizations) == len(rep.embedding.image)


def test_empty_piece_gives_trivial_posets():
    arr = arrangement(3, ("ab", []))
    for k in range(4):
        assert len(build_poset(arr, IndexSet.default(k))) == 1


def test_factorization_examples():
    P = build_poset(diagonal(3), IndexSet("abc"))
    r = verify_factorization(P, IndexSet("ab"), 0, 0)
    assert r.ok and r.factor.is_full()
    k = next(i for i in range(len(P)) if tuples_of(P, i) == {x for x in oracles.power(3, 3) if x[0] == x[1]})
    r = verify_factorization(P, IndexSet("ab"), k, k, left=build_poset(diagonal(3), IndexSet("ab")))
    assert r.ok and r.factor.tuples() == [(0, 0), (1, 1), (2, 2)]


def test_factorization_exhibits_axis():
    # {0} x X sits in a piece; a generator through the new coordinate contains the product
    arr = arrangement(2, ("ab", [(0, 0), (0, 1)]))
    P = build_poset(arr, IndexSet("ab"))
    k = next(i for i in range(len(P)) if tuples_of(P, i) == {(0, 0), (0, 1)})
    r = verify_factorization(P, IndexSet("a"), k, k)
    assert not r.ok and r.axis is not None and r.axis.coord == "b"


def test_support_examples():
    P = build_poset(diagonal(3), IndexSet("abc"))
    assert support(P, 0).labels == ()
    ab = next(i for i in range(len(P)) if tuples_of(P, i) == {x for x in oracles.power(3, 3) if x[0] == x[1]})
    assert support(P, ab).labels == ("a", "b")
    assert support(P, len(P) - 1).labels == ("a", "b", "c")


def test_decomposability_partition_lattice():
    P = build_poset(diagonal(3), IndexSet("abc"))
    assert is_decomposable(P, 0)
    assert indecomposables(P) == [len(P) - 1]
    Sp, k = decomposition(P, 1)
    assert len(Sp) == 2 and k == 1


def test_decomposable_iff_in_zero_slice_image():
    arrs = list(enumerate_arrangements(CorpusBounds(max_ground=2, max_tuples=4), axis_free_only=True))[::3]
    for arr in arrs:
        for k in range(4):
            P = build_poset(arr, IndexSet.default(k))
            cache = {}
            dec = {b for b in range(len(P)) if is_decomposable(P, b, cache)}
            assert dec == zero_slice_images(P, cache)
            # axis-free: decomposable exactly when the support is proper
            assert dec == {b for b in range(len(P)) if len(support(P, b)) < k}


def test_labels_from():
    assert labels_from("ab").labels == ("a", "b")
    assert labels_from("x1,x2").labels == ("x1", "x2")
    assert labels_from("u v").labels == ("u", "v")


def test_prebuilt_posets_must_match():
    P = build_poset(diagonal(3), IndexSet("ab"))
    with pytest.raises(ValueError):
        product_embedding(diagonal(3), "a", "b", left=P)
