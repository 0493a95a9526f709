import numpy as np
import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from stratposet.snf import IntMatrix, dense_invariant_factors, divisibility_ok, rank_mod_p, smith_normal_form


def sympy_factors(rows):
    if not rows or not rows[0]:
        return []
    D = sympy_snf(Matrix(rows), domain=ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0)


def test_examples():
    assert smith_normal_form(IntMatrix(3, 4)).factors == ()
    assert smith_normal_form([[2, 0], [0, 3]]).factors == (1, 6)
    # boundary of the triangle's edges: vertices x edges
    d1 = [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]
    f = smith_normal_form(d1)
    assert f.factors == (1, 1) and f.rank == 2 and f.torsion == ()


def test_torsion_example():
    assert smith_normal_form([[2, 4], [6, 8]]).factors == (2, 4)
    assert smith_normal_form([[4, 0], [0, 6]]).factors == (2, 12)


@pytest.mark.parametrize("seed", range(40))
def test_against_sympy(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(1, 7, size=2)
    density = rng.uniform(0.2, 1.0)
    A = rng.integers(-5, 6, size=(m, n)) * (rng.random((m, n)) < density)
    rows = A.tolist()
    got = smith_normal_form(rows)
    assert list(got.factors) == sympy_factors(rows)
    assert divisibility_ok(got.factors)
    assert dense_invariant_factors(rows) == sympy_factors(rows)


def test_big_entries_stay_exact():
    big = 10**30
    f = smith_normal_form([[big, 0], [0, big * 3]])
    assert f.factors == (big, 3 * big)


def test_rank_mod_p():
    M = [[2, 4], [6, 8]]
    assert rank_mod_p(M, 2) == 0
    assert rank_mod_p(M, 3) == 2
    assert rank_mod_p([[3, 0], [0, 1]], 3) == 1


def test_matrix_text_roundtrip():
    M = IntMatrix.from_dense([[1, 0, -2], [0, 0, 0]])
    text = M.to_text()
    assert text == "2 3\n1 0 -2\n0 0 0\n"
    assert IntMatrix.from_text(text) == M


def test_matmul():
    A = IntMatrix.from_dense([[1, 2], [0, 1]])
    B = IntMatrix.from_dense([[1, -2], [0, 1]])
    assert (A @ B).to_dense() == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        A @ IntMatrix(3, 1)


def test_divisibility_helper():
    assert divisibility_ok([1, 2, 6])
    assert not divisibility_ok([2, 3])
