import itertools

import pytest

from stratposet.arrangement import Arrangement, ArrangementPiece
from stratposet.corpus import CorpusBounds, enumerate_arrangements
from stratposet.ground import GroundSet, IndexSet
from stratposet.poset import avoiding_count, build_poset, close_under_intersection, generators

import oracles


def diagonal(n):
    g = GroundSet(n)
    return Arrangement(g, (ArrangementPiece.from_tuples(g, "ab", [(i, i) for i in range(n)]),))


def as_oracle_pieces(arr):
    return [(list(p.arity.labels), set(p.subset.tuples())) for p in arr.pieces]


def test_generators_examples():
    assert generators(diagonal(3), IndexSet("a")) == []
    gens = generators(diagonal(3), IndexSet("abc"))
    assert len(gens) == 3 and all(len(g.sources) == 2 for g in gens)
    g = GroundSet(2)
    single = Arrangement(g, (ArrangementPiece.from_tuples(g, "ab", [(0, 1)]),))
    gens = generators(single, IndexSet("ab"))
    assert sorted(t for x in gens for t in x.subset.tuples()) == [(0, 1), (1, 0)]


def test_no_pieces_and_empty_coords():
    arr = Arrangement(GroundSet(3))
    assert len(build_poset(arr, IndexSet("abc"))) == 1
    P = build_poset(diagonal(3), IndexSet())
    assert len(P) == 1 and P.element(0).is_full()


@pytest.mark.parametrize("n", [3, 4])
def test_partition_lattice_counts(n):
    P = build_poset(diagonal(n), IndexSet.default(n))
    labels = list(IndexSet.default(n).labels)
    assert len(P) == oracles.bell(n) == len(oracles.strata(n, labels, as_oracle_pieces(diagonal(n))))
    top = len(P) - 1
    assert P.element(top).cardinality == n  # the small diagonal
    # cover count of Pi_n: sum over partitions of sum_blocks C(|block|, 2) merges... checked against brute force
    covers = sum(len(c) for c in P.covers)
    brute = oracles.strata(n, labels, as_oracle_pieces(diagonal(n)))
    brute_covers = sum(1 for a in brute for b in brute
                       if b < a and not any(b < z < a for z in brute))
    assert covers == brute_covers
    assert {3: 6, 4: 31}[n] == covers


def test_mobius_partition_lattices():
    for n, want in [(3, 2), (4, -6)]:
        P = build_poset(diagonal(n), IndexSet.default(n))
        labels = list(IndexSet.default(n).labels)
        brute = oracles.strata(n, labels, as_oracle_pieces(diagonal(n)))
        full = max(brute, key=len)
        bottom = min(brute, key=len)
        assert oracles.mobius(brute, full, bottom) == want == P.mobius(0, len(P) - 1)
        assert P.mobius(2, 2) == 1


def test_open_interval_examples():
    P3 = build_poset(diagonal(3), IndexSet("abc"))
    assert len(P3.open_interval(0, 1)) == 0
    iv = P3.open_interval(0, 4)
    assert len(iv) == 3 and iv.is_antichain()
    P4 = build_poset(diagonal(4), IndexSet("abcd"))
    ab_cd = next(i for i in range(len(P4))
                 if set(P4.element(i).tuples()) == {(x, x, y, y) for x in range(4) for y in range(4)})
    iv = P4.open_interval(0, ab_cd)
    assert len(iv) == 2 and iv.is_antichain()
    with pytest.raises(ValueError):
        P3.open_interval(4, 0)


@pytest.mark.parametrize("n,k,want", [(3, 3, 6), (2, 3, 0), (4, 2, 12)])
def test_avoiding_counts_diagonal(n, k, want):
    assert avoiding_count(diagonal(n), IndexSet.default(k)) == want == oracles.falling(n, k)


def test_avoiding_no_pieces():
    assert avoiding_count(Arrangement(GroundSet(3)), IndexSet("ab")) == 9


def _small_corpus():
    arrs = list(enumerate_arrangements(CorpusBounds(max_ground=2, max_pieces=2, max_tuples=3)))
    return arrs[::7]


def test_poset_matches_brute_force():
    for arr in _small_corpus():
        for k in range(4):
            labels = list(IndexSet.default(k).labels)
            P = build_poset(arr, IndexSet(labels))
            brute = oracles.strata(arr.ground.size, labels, as_oracle_pieces(arr))
            assert {frozenset(e.tuples()) for e in P.elements} == brute
            assert len(P) == len(brute)


def test_order_structure():
    for arr in _small_corpus()[:40]:
        P = build_poset(arr, IndexSet("abc"))
        n = len(P)
        for i, j in itertools.product(range(n), repeat=2):
            assert P.lt(i, j) == bool(P.above[i] >> j & 1)
            if P.lt(i, j):
                assert i < j  # numbering is a linear extension
        # transitive closure of covers is the order
        closure = [set(c) for c in P.covers]
        for i in reversed(range(n)):
            for j in list(closure[i]):
                closure[i] |= closure[j]
        assert [sum(1 << j for j in c) for c in closure] == list(P.above)
        assert all(P.lt(0, i) for i in range(1, n))


def test_numbering_rule():
    P = build_poset(diagonal(3), IndexSet("abc"))
    keys = [(-m.bit_count(), m) for m in P.masks]
    assert keys == sorted(keys)


def test_closure_helpers():
    masks = [0b1100, 0b0110, 0b0011]
    assert close_under_intersection(0b1111, masks) == {0b1111, 0b1100, 0b0110, 0b0011, 0b0100, 0b0010}
    assert 0 in close_under_intersection(0b1111, masks, include_empty=True)


def test_provenance_realizes_element():
    P = build_poset(diagonal(4), IndexSet("abcd"))
    for i in range(len(P)):
        m = (1 << 256) - 1
        for k in P.provenance(i):
            m &= P.generators[k].subset.mask
        assert m == P.masks[i]


def test_dot_export():
    dot = build_poset(diagonal(3), IndexSet("abc")).to_dot()
    assert dot.startswith("digraph P {") and dot.count("->") == 6
    assert 'n0 [label="0 |27|"]' in dot
