import random

import pytest
from hypothesis import given, settings, strategies as st

from towerlab.linalg import (DimensionError, IntMatrix, Unsolvable, cokernel_structure,
                             hermite_rows, is_smith_form, left_kernel, minors_gcd,
                             smith_normal_form, solve_linear, xgcd)


def matrices(max_dim=5, bound=20):
    return st.integers(1, max_dim).flatmap(lambda r: st.integers(1, max_dim).flatmap(
        lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def test_frozen_smith_forms():
    assert smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]])).diagonal == (2, 4)
    assert smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]])).diagonal == (1, 6)
    assert smith_normal_form(IntMatrix.from_rows([[0, 0], [0, 0]])).diagonal == ()
    assert smith_normal_form(IntMatrix.from_rows([[4, 6]])).diagonal == (2,)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_smith_decomposition(rows):
    A = IntMatrix.from_rows(rows)
    D = smith_normal_form(A)
    assert D.U @ A @ D.V == D.S
    assert abs(D.U.det()) == 1 and abs(D.V.det()) == 1
    assert D.V @ D.V_inv == IntMatrix.identity(A.cols)
    assert is_smith_form(D.S)


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=4, bound=9))
def test_diagonal_matches_minor_gcds(rows):
    # d_1 ... d_k equals the gcd of the k x k minors
    A = IntMatrix.from_rows(rows)
    D = smith_normal_form(A)
    d = D.diagonal + (0,) * (min(A.rows, A.cols) - D.rank)
    acc = 1
    for k in range(1, min(A.rows, A.cols) + 1):
        acc *= d[k - 1]
        assert abs(acc) == minors_gcd(A, k)


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=4, bound=9), st.data())
def test_solve_linear_consistent_rhs(rows, data):
    A = IntMatrix.from_rows(rows)
    x0 = data.draw(st.lists(st.integers(-5, 5), min_size=A.cols, max_size=A.cols))
    b = [sum(A[i, j] * x0[j] for j in range(A.cols)) for i in range(A.rows)]
    x, kernel = solve_linear(A, b)
    assert [sum(A[i, j] * x[j] for j in range(A.cols)) for i in range(A.rows)] == b
    for v in kernel:
        assert all(sum(A[i, j] * v[j] for j in range(A.cols)) == 0 for i in range(A.rows))
    assert len(kernel) == A.cols - smith_normal_form(A).rank


def test_solve_linear_examples():
    x, kernel = solve_linear(IntMatrix.from_rows([[1, 2], [3, 4]]), [1, 1])
    assert x == (-1, 1) and kernel == []
    with pytest.raises(Unsolvable):
        solve_linear(IntMatrix.from_rows([[2, 0], [0, 2]]), [1, 0])
    with pytest.raises(DimensionError):
        solve_linear(IntMatrix.from_rows([[1, 2]]), [1, 2])


def test_cokernel_structure():
    assert cokernel_structure(IntMatrix.from_rows([[2, 0], [0, 3]])) == ((6,), 0)
    assert cokernel_structure(IntMatrix.from_rows([[2, 4]])) == ((2,), 1)


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=4, bound=9), st.integers(0, 10 ** 6))
def test_hermite_is_a_lattice_invariant(rows, seed):
    # row operations by a random unimodular matrix do not change the HNF
    A = IntMatrix.from_rows(rows)
    rng = random.Random(seed)
    M = [list(r) for r in rows]
    for _ in range(6):
        i, j = rng.randrange(A.rows), rng.randrange(A.rows)
        if i != j:
            q = rng.randint(-3, 3)
            M[i] = [a + q * b for a, b in zip(M[i], M[j])]
        else:
            M[i] = [-a for a in M[i]]
    assert hermite_rows(rows, A.cols) == hermite_rows(M, A.cols)


@settings(max_examples=100, deadline=None)
@given(matrices(max_dim=4, bound=9))
def test_left_kernel(rows):
    A = IntMatrix.from_rows(rows)
    for v in left_kernel(A):
        assert all(sum(v[i] * A[i, j] for i in range(A.rows)) == 0 for j in range(A.cols))


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6))
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert s * a + t * b == g and g >= 0


def test_json_roundtrip_big_entries():
    A = IntMatrix.from_rows([[10 ** 30, -1], [0, 7]])
    assert IntMatrix.from_json(A.to_json()) == A
    assert A.det() == 7 * 10 ** 30
