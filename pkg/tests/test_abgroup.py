from math import gcd, prod

import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint, partition

from towerlab.abgroup import (OMEGA, Z, Atom, FgAbGroup, NotInPkH, Ordinal, SymbolicAbGroup,
                              ThreadBroken, abelian_groups_of_order, describe_subgroup,
                              direct_sum, divisibility_witness_tree, ext_group, hom_cokernel,
                              hom_group, hom_kernel, invariants_from_orders, is_cotorsion,
                              multiples_subgroup, p_chain, p_divisible_thread_check, p_length,
                              padic, pruefer, ulm_chain)

small_orders = st.lists(st.integers(1, 12), min_size=0, max_size=3)


def test_canonical_form_and_printing():
    A = FgAbGroup.from_cyclic_orders([4, 6, 0])
    assert A.factors == (2, 12) and A.rank == 1
    assert str(A) == "Z/2 ⊕ Z/12 ⊕ Z"
    assert str(FgAbGroup(())) == "0"
    with pytest.raises(ValueError):
        FgAbGroup((4, 2))


@given(small_orders)
def test_order_and_permutation_invariance(ns):
    A = FgAbGroup.from_cyclic_orders(ns)
    assert A.order == prod(ns)
    assert A == FgAbGroup.from_cyclic_orders(list(reversed(ns)))


def test_frozen_hom_ext():
    assert hom_group(FgAbGroup.cyclic(4), FgAbGroup.cyclic(6)) == FgAbGroup.cyclic(2)
    assert ext_group(FgAbGroup.cyclic(2), Z) == FgAbGroup.cyclic(2)
    assert hom_group(Z, FgAbGroup.from_cyclic_orders([6, 0])) == FgAbGroup.from_cyclic_orders([6, 0])
    assert ext_group(Z, FgAbGroup.cyclic(5)).is_trivial


def _count_homs(A: FgAbGroup, B: FgAbGroup) -> int:
    # a hom is a choice of images b_i with d_i b_i = 0
    total = 1
    for d in A.factors:
        total *= sum(1 for b in B.elements() if (d * b).is_zero())
    return total


@settings(max_examples=60, deadline=None)
@given(small_orders, small_orders)
def test_hom_order_matches_enumeration(ms, ns):
    A, B = FgAbGroup.from_cyclic_orders(ms), FgAbGroup.from_cyclic_orders(ns)
    assert hom_group(A, B).order == _count_homs(A, B)


@given(st.integers(1, 30), st.integers(1, 30))
def test_ext_of_cyclics(m, n):
    assert ext_group(FgAbGroup.cyclic(m), FgAbGroup.cyclic(n)) == FgAbGroup.cyclic(gcd(m, n))
    assert ext_group(FgAbGroup.cyclic(m), Z) == FgAbGroup.cyclic(m)


@settings(max_examples=60, deadline=None)
@given(small_orders, small_orders, st.data())
def test_kernel_cokernel_orders(ms, ns, data):
    A, B = FgAbGroup.from_cyclic_orders(ms), FgAbGroup.from_cyclic_orders(ns)
    images = []
    for d in A.factors:
        cands = [b for b in B.elements() if (d * b).is_zero()]
        images.append(data.draw(st.sampled_from(cands)))
    K, gens = hom_kernel(A, B, images)
    C = hom_cokernel(A, B, images)
    img = {sum((c * y for c, y in zip(x.coords, images)), B.identity) for x in A.elements()}
    assert K.order * len(img) == A.order
    assert C.order * len(img) == B.order


def test_direct_sum_injections():
    G, inject = direct_sum([FgAbGroup.cyclic(2), FgAbGroup.cyclic(3)])
    assert G == FgAbGroup.cyclic(6)
    x = inject([FgAbGroup.cyclic(2).basis()[0], FgAbGroup.cyclic(3).identity])
    assert x.order() == 2


@settings(max_examples=60, deadline=None)
@given(small_orders, st.data())
def test_subgroup_description(ns, data):
    A = FgAbGroup.from_cyclic_orders(ns)
    elems = list(A.elements())
    gens = data.draw(st.lists(st.sampled_from(elems), max_size=3))
    S = describe_subgroup(A, gens)
    span = {A.identity}
    while True:
        nxt = span | {x + g for x in span for g in gens}
        if nxt == span:
            break
        span = nxt
    assert S.order == len(span)
    assert set(S.elements()) == span
    assert S == describe_subgroup(A, list(span))


def _brute_group_order_counts(n: int) -> int:
    return prod(int(partition(e)) for e in factorint(n).values())


@pytest.mark.parametrize("n", [1, 8, 12, 16, 32, 36, 64])
def test_abelian_groups_of_order(n):
    gs = abelian_groups_of_order(n)
    assert len(gs) == len(set(gs)) == _brute_group_order_counts(n)
    assert all(G.order == n for G in gs)


@pytest.mark.parametrize("n", range(1, 49))
def test_isomorphism_type_from_element_orders(n):
    for A in abelian_groups_of_order(n):
        assert invariants_from_orders([x.order() for x in A.elements()]) == A


def test_frozen_p_chains():
    assert p_chain(FgAbGroup.cyclic(8), 2, 3).orders[:4] == (8, 4, 2, 1)
    ch = p_chain(FgAbGroup.cyclic(6), 2, 2)
    assert ch.orders == (6, 3, 3, 3)[:len(ch.orders)] and ch.stabilized_at == 1
    assert p_length(FgAbGroup.cyclic(8), 2) == Ordinal(0, 3)
    assert p_length(FgAbGroup.from_cyclic_orders([4, 0]), 2) == OMEGA


@settings(max_examples=40, deadline=None)
@given(small_orders, st.sampled_from([2, 3, 5]))
def test_p_chain_matches_enumeration(ns, p):
    A = FgAbGroup.from_cyclic_orders(ns)
    ch = p_chain(A, p, 4)
    cur = set(A.elements())
    for o in ch.orders:
        assert len(cur) == o
        cur = {p * x for x in cur}
    m = p_length(A, p).finite
    assert ch.orders[m] == ch.orders[-1]
    assert m == 0 or ch.orders[m - 1] > ch.orders[m]


def test_multiples_subgroup_symbolic():
    S = SymbolicAbGroup.of(Atom("int"), pruefer(3), Atom("cyclic", 2, 3))
    nA, quo = multiples_subgroup(S, 2)
    assert pruefer(3) in nA.atoms
    assert str(quo)


def test_cotorsion_fact_table():
    assert is_cotorsion(FgAbGroup.cyclic(6))[0]
    ok, cert = is_cotorsion(Z)
    assert not ok and "Int" in cert
    assert is_cotorsion(SymbolicAbGroup.of(Atom("rat"), padic(5), pruefer(2)))[0]
    assert not is_cotorsion(SymbolicAbGroup.of(Atom("rat"), Atom("int")))[0]


def test_ulm_chain_divisible_part():
    S = SymbolicAbGroup.of(Atom("rat"), pruefer(2), padic(2), Atom("cyclic", 2, 2))
    U = ulm_chain(S, 3)
    assert U.ulm_length == Ordinal(0, 1)
    assert set(U.divisible_part.atoms) == {Atom("rat"), pruefer(2)}
    assert ulm_chain(SymbolicAbGroup.of(Atom("rat")), 3).ulm_length == Ordinal(0, 0)


def test_ordinals():
    assert Ordinal(0, 5) < OMEGA < Ordinal(1, 1)
    assert str(OMEGA) == "ω"


def test_witness_tree_z8():
    A = FgAbGroup.cyclic(8)
    T = divisibility_witness_tree(A, A.element([4]), 2)
    assert T.verify() == []
    assert len(T.nodes) == 4
    for mu, x in T.nodes.items():
        if mu:
            assert 2 * x == T.nodes[mu[:-1]]
    with pytest.raises(NotInPkH):
        divisibility_witness_tree(A, A.element([2]), 2)


@pytest.mark.parametrize("n", [2, 4, 8, 16, 32, 27, 9])
def test_witness_trees_all_admissible_elements(n):
    p = min(factorint(n))
    for A in abelian_groups_of_order(n):
        for k in range(3):
            top = p_chain(A, p, k).terms[k]
            for x in top.elements():
                assert divisibility_witness_tree(A, x, k, p).verify() == []


def test_thread_check():
    A = FgAbGroup.cyclic(8)
    ys = [A.element([v]) for v in (0, 4, 2, 1)]
    v = p_divisible_thread_check(A, ys, 2)
    assert v.membership_checked and v.member
    with pytest.raises(ThreadBroken):
        p_divisible_thread_check(A, [A.element([1]), A.element([1])], 2)
