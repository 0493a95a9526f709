import pytest

from stratposet.corpus import (CorpusBounds, canonical_form, enumerate_arrangements, make_arrangement,
                               piece_masks, random_arrangements)
from stratposet.ground import CellCapExceeded
from stratposet.search import SearchBounds, counterexample_search

from oracles import has_axis, power


def test_piece_masks_counts():
    # subsets of X^2, |X| = 2, with at most 4 members: all 16
    assert len(piece_masks(2, 2, 4)) == 16
    assert len(piece_masks(3, 2, 4)) == 1 + 9 + 36 + 84 + 126
    af = piece_masks(2, 2, 4, True)
    brute = [m for m in range(16)
             if not has_axis(2, 2, {t for i, t in enumerate(power(2, 2)) if m >> i & 1})]
    assert list(af) == brute


def test_corpus_order_is_canonical():
    arrs = list(enumerate_arrangements(CorpusBounds(max_ground=2, max_pieces=2)))
    keys = [(a.ground.size, len(a.pieces), tuple(len(p.arity) for p in a.pieces),
             tuple(p.subset.mask for p in a.pieces)) for a in arrs]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_canonical_form_is_invariant():
    # swapping the points 0 <-> 1 of X, and transposing the piece
    a = ((2, 0b0010),)  # {(0, 1)}
    b = ((2, 0b0100),)  # {(1, 0)}
    assert canonical_form(2, a) == canonical_form(2, b)
    assert canonical_form(2, ((1, 0b01), (1, 0b10))) == canonical_form(2, ((1, 0b10), (1, 0b01)))


def test_axis_free_search_is_empty():
    r = counterexample_search(SearchBounds(max_ground=2, max_s=2), axis_free_only=True)
    assert not r.found
    assert r.summary().startswith("no violation found at these bounds")


def test_single_binary_piece_at_two_points():
    b = SearchBounds(max_ground=2, max_arity=2, max_pieces=1, max_tuples=4, max_s=2, min_ground=2)
    r = counterexample_search(b, mode="exhaustive")
    assert r.arrangements == 1 + 4 + 16  # no pieces, one unary piece, one binary piece
    assert not r.found


def test_first_counterexample_two_pieces():
    r = counterexample_search(SearchBounds(max_ground=2), mode="exhaustive", stop_after=1)
    c = r.counterexamples[0]
    assert [(len(p.arity), p.subset.tuples()) for p in c.arrangement.pieces] == \
        [(1, [(0,)]), (2, [(0, 0), (0, 1), (1, 0)])]
    assert c.S.labels == ("a",) and c.T.labels == ("b",) and not c.axis_free


def test_reduced_search_agrees_with_full():
    b = SearchBounds(max_ground=2, max_s=2)
    full = counterexample_search(b)
    red = counterexample_search(b, symmetry_reduce=True)
    assert full.found == red.found
    assert not full.axis_free_violations() and not red.axis_free_violations()
    canon = lambda c: canonical_form(c.arrangement.ground.size, tuple(
        (len(p.arity), p.subset.mask) for p in c.arrangement.pieces))
    assert {canon(c) for c in full.counterexamples} == {canon(c) for c in red.counterexamples}


def test_random_mode_is_seeded():
    b = SearchBounds(max_ground=2)
    r1 = counterexample_search(b, mode="random", seed=3, samples=60)
    r2 = counterexample_search(b, mode="random", seed=3, samples=60)
    assert [str(c.violation) for c in r1.counterexamples] == [str(c.violation) for c in r2.counterexamples]
    arrs = list(random_arrangements(CorpusBounds(max_ground=2), 5, 1))
    assert arrs == list(random_arrangements(CorpusBounds(max_ground=2), 5, 1))


def test_parallel_output_matches_serial():
    b = SearchBounds(max_ground=2, max_s=2)
    s = counterexample_search(b)
    p = counterexample_search(b, jobs=2)
    assert [(c.arrangement, c.S, str(c.violation)) for c in s.counterexamples] == \
        [(c.arrangement, c.S, str(c.violation)) for c in p.counterexamples]


def test_bounds_checked():
    with pytest.raises(ValueError):
        counterexample_search(SearchBounds(), mode="sideways")
    with pytest.raises(CellCapExceeded):
        counterexample_search(SearchBounds(max_ground=5, max_s=10), samples=1, mode="random")


def test_make_arrangement_labels():
    arr = make_arrangement(3, ((2, 0b1),))
    assert arr.pieces[0].arity.labels == ("a", "b")


def test_canonical_form_preserves_posets():
    # sizes, mobius values and interval f-vectors are isomorphism invariants
    from stratposet.complexes import interval_f_vectors
    from stratposet.ground import IndexSet
    from stratposet.poset import build_poset

    def invariants(arr):
        out = []
        for k in range(4):
            P = build_poset(arr, IndexSet.default(k))
            mu = P.mobius_from(0)
            out.append((len(P), sorted(mu.values()),
                        sorted(map(tuple, interval_f_vectors(P).values())) if len(P) > 1 else []))
        return out

    arrs = list(enumerate_arrangements(CorpusBounds(max_ground=3, max_pieces=2), axis_free_only=True))
    for arr in arrs[::97]:
        combo = tuple((len(p.arity), p.subset.mask) for p in arr.pieces)
        canon = make_arrangement(arr.ground.size, canonical_form(arr.ground.size, combo))
        assert invariants(arr) == invariants(canon)
