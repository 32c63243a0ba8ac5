from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from towerlab import catalog
from towerlab.abgroup import Z, Atom, FgAbGroup, SymbolicAbGroup
from towerlab.commutators import commutator_subgroup
from towerlab.eqsolve import (CommutatorLiftOracle, EquationSystem, NoSolutionBelow,
                              NotUnitriangular, OracleViolation, Solved, UnsupportedGroup,
                              WindowTooSmall, divisibility_system_global, lift_vanishing_below,
                              solve_truncated, recursion_grid)
from towerlab.tower import Thread, Tower, commutator_tower, is_thread


def test_frozen_factorial_certificate():
    r = divisibility_system_global(Z, "ones", bound=10 ** 6)
    assert isinstance(r, NoSolutionBelow)
    assert (r.N, r.residue, r.modulus) == (11, 4037914, 39916800)
    assert r.residue == sum(factorial(k) for k in range(11))
    assert r.verify()


@given(st.integers(0, 10 ** 7))
def test_certificates_for_any_bound(B):
    r = divisibility_system_global(Z, "ones", bound=B, depth=25)
    assert isinstance(r, NoSolutionBelow) and r.verify()
    # minimality: the previous modulus does not yet separate
    if r.N > 1:
        M = factorial(r.N - 1)
        res = sum(factorial(k) for k in range(r.N - 1)) % M
        assert not NoSolutionBelow(B, r.N - 1, res, M).verify()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30), st.integers(0, 10 ** 6))
def test_finite_cyclic_always_solved(n, seed):
    A = FgAbGroup.cyclic(n)
    r = divisibility_system_global(A, {"random": seed}, window=10)
    assert isinstance(r, Solved)
    S = EquationSystem.divisibility(A, {"random": seed})
    w = list(r.window)
    for k in range(len(w) - 1):
        assert (w[k] - (k + 1) * w[k + 1]).coords == S.rhs(k).coords


def test_free_group_with_finite_support_rhs():
    r = divisibility_system_global(Z, [1])
    assert isinstance(r, Solved) and r.x0 == Z.element([1])
    r = divisibility_system_global(FgAbGroup.from_cyclic_orders([6, 0]), [[1, 1], [2, 3]])
    assert isinstance(r, Solved)


def test_symbolic_systems_unsupported():
    with pytest.raises(UnsupportedGroup):
        divisibility_system_global(SymbolicAbGroup.of(Atom("rat")))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.data())
def test_truncated_unitriangular_solutions(N, data):
    A = FgAbGroup.from_cyclic_orders([4, 0])
    coeff = st.integers(-3, 3)
    rows = []
    for n in range(N + 1):
        row = {n: 1}
        for m in range(n + 1, n + 3):
            row[m] = data.draw(coeff)
        rows.append(row)
    rhs = [data.draw(st.lists(st.integers(-5, 5), min_size=2, max_size=2)) for _ in range(N + 1)]
    S = EquationSystem.explicit(A, rows, rhs)
    x = solve_truncated(S, N)
    pad = x + [A.identity] * 4
    for n in range(N + 1):
        assert S.residual(pad, n).is_zero()


def test_non_unitriangular_rejected():
    S = EquationSystem.explicit(Z, [{0: 2}], [1])
    with pytest.raises(NotUnitriangular):
        solve_truncated(S, 0)


def _s3_setup(L):
    G = Tower.product_accumulation([catalog.get("S3")])
    H = commutator_tower(G, L)
    return G, H, CommutatorLiftOracle(G, H, L)


def test_lift_vanishes_below():
    L = 4
    G, H, F = _s3_setup(L)
    S3 = catalog.get("S3")
    c = next(x for x in S3.elements() if S3.element_order(x) == 3)
    f = Thread(tuple(tuple([c] * (l + 1)) for l in range(L + 1)))
    r = lift_vanishing_below(H, F, f, 2, L)
    assert r.fbar.values[L][:2] == (S3.identity, S3.identity)
    assert is_thread(H, r.fbar)


@settings(max_examples=12, deadline=None)
@given(st.lists(st.sampled_from(["S3", "Q8", "D4", "A4", "D5"]), min_size=1, max_size=3),
       st.integers(2, 5), st.data())
def test_recursion_grid_on_random_product_towers(names, L, data):
    comps = [catalog.get(n) for n in names]
    G = Tower.product_accumulation(comps)
    H = commutator_tower(G, L)
    F = CommutatorLiftOracle(G, H, L)
    ks = [G.tail.component(i) for i in range(L + 1)]
    seqs = []
    for _ in range(L + 1):
        cs = [data.draw(st.sampled_from(sorted(commutator_subgroup(K).members))) for K in ks]
        seqs.append(Thread(tuple(tuple(cs[:l + 1]) for l in range(L + 1))))
    grid = recursion_grid(H, F, seqs, L)
    assert grid.passed, grid.checks()


def test_recursion_window_too_small():
    G, H, F = _s3_setup(2)
    with pytest.raises(WindowTooSmall):
        recursion_grid(H, F, [], 1)


class _BadOracle:
    def __init__(self, T):
        self.T = T

    def lift(self, n, target):
        return Thread(tuple(self.T.group(l).identity for l in range(3)))

    def certify(self, th):
        return None


def test_oracle_violation_detected():
    G, H, F = _s3_setup(2)
    S3 = catalog.get("S3")
    c = next(x for x in S3.elements() if S3.element_order(x) == 3)
    f = [Thread(tuple(tuple([c] * (l + 1)) for l in range(3)))] * 3
    with pytest.raises(OracleViolation):
        recursion_grid(H, _BadOracle(H), f, 2)
