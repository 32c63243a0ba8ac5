from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from towerlab import catalog
from towerlab.abgroup import Z, FgAbGroup
from towerlab.commutators import abelianization, commutator_subgroup
from towerlab.groups import GroupHom
from towerlab.tower import (LevelOutOfRange, NotAbelian, Tower, abelianization_tower, boundary,
                            commutator_tower, derived_subtower, image_stabilization, lim1_classify,
                            lim1_equivalent, lim1_window_surjectivity, ml_certified,
                            six_term_window_check, windowed_lim)

Z2, Z4, Z6 = FgAbGroup((2,)), FgAbGroup((4,)), FgAbGroup((6,))


@st.composite
def finite_abelian_towers(draw, levels=4):
    groups = [FgAbGroup.from_cyclic_orders(draw(st.lists(st.integers(1, 6), max_size=2)))
              for _ in range(levels)]
    maps = []
    for n in range(levels - 1):
        src, dst = groups[n + 1], groups[n]
        els = list(dst.elements())
        imgs = []
        for d in src.factors:
            imgs.append(draw(st.sampled_from([b for b in els if (d * b).is_zero()])))
        maps.append(GroupHom.matrix(src, dst, imgs))
    return Tower.finite(groups, maps)


def _brute_threads(T, N):
    levels = [list(T.group(n).elements()) for n in range(N + 1)]
    return {v for v in product(*levels) if all(T.map(n)(v[n + 1]) == v[n] for n in range(N))}


def test_constant_tower_stabilizes_everywhere():
    T = Tower.constant(Z2)
    for t in range(4):
        r = image_stabilization(T, t, 4)
        assert r.verdict == "stabilized" and r.stabilized_at == t
    assert ml_certified(T)[0]


def test_multiplication_by_two_on_z_is_undetermined():
    T = Tower.multiplication(Z, 2)
    r = image_stabilization(T, 0, 4)
    assert r.verdict == "undetermined" and not r.ml_certified
    assert [str(S.quotient) for S in r.images] == ["0", "Z/2", "Z/4", "Z/8", "Z/16"]
    W = windowed_lim(T, 4)
    assert [th.values for th in W.generators] == [tuple(Z.element([2 ** (4 - n)]) for n in range(5))]


def test_tail_rules():
    P = Tower.product_accumulation([catalog.get("Q8")])
    assert P.group(2).order == 8 ** 3
    assert image_stabilization(P, 1, 3).verdict == "stabilized"
    M = Tower.multiplication(Z6, "n+1")
    assert M.map(3)(Z6.element([1])) == Z6.element([4])
    F = Tower.finite([Z2, Z4], [GroupHom.matrix(Z4, Z2, [Z2.element([1])])])
    with pytest.raises(LevelOutOfRange):
        F.group(2)


@settings(max_examples=40, deadline=None)
@given(finite_abelian_towers())
def test_images_descend_and_stabilize(T):
    for t in range(T.top + 1):
        r = image_stabilization(T, t, T.top)
        orders = r.image_orders
        assert all(a >= b for a, b in zip(orders, orders[1:]))
        for s, S in zip(range(t, T.top + 1), r.images):
            assert S.order == len({T.compose(s, t)(x) for x in T.group(s).elements()})


@settings(max_examples=40, deadline=None)
@given(finite_abelian_towers())
def test_window_lim_matches_brute_force(T):
    N = T.top
    W = windowed_lim(T, N)
    assert W.thread_set() == _brute_threads(T, N)
    assert W.order == len(W.thread_set())


@settings(max_examples=25, deadline=None)
@given(finite_abelian_towers())
def test_derived_tower_maps_are_surjective(T):
    D = derived_subtower(T, T.top)
    for t in range(T.top):
        assert D.surjective[t] in (True, None)
        if D.exact[t] and D.exact[t + 1]:
            assert D.tower.map(t).is_surjective()


@settings(max_examples=30, deadline=None)
@given(finite_abelian_towers(levels=4))
def test_boundary_surjective_on_finite_windows(T):
    # brute-force image of ∂ over all a_0..a_{N+1}
    N = T.top - 1
    r = lim1_window_surjectivity(T, N, budget=10 ** 6)
    levels = [list(T.group(n).elements()) for n in range(N + 2)]
    img = {boundary(T, a) for a in product(*levels)}
    count = 1
    for n in range(N + 1):
        count *= T.group(n).order
    assert r.passed and r.mode == "exhaustive" and r.targets_checked == count == len(img)


def test_boundary_generator_mode_and_cokernel():
    r = lim1_window_surjectivity(Tower.multiplication(Z), 3)
    assert r.mode == "generators" and r.passed and r.cokernel == ((), 0)


def test_lim1_classify():
    c = lim1_classify(Tower.multiplication(Z))
    assert c.kind == "symbolic_ext_q" and c.zero is False
    assert lim1_classify(Tower.multiplication(Z6)).zero is True
    assert lim1_classify(Tower.constant(Z2)).kind == "zero"
    assert lim1_classify(Tower.multiplication(Z, 2)).kind == "unknown"


def test_lim1_equivalence_witness():
    T = Tower.multiplication(Z4, "n+1")
    y = [Z4.element([n]) for n in range(4)]
    y2 = [Z4.element([1])] * 4
    a = lim1_equivalent(T, y, y2)
    assert a is not None
    for n in range(4):
        assert a[n] + y[n] - T.map(n)(a[n + 1]) == y2[n]


def test_six_term_q8():
    Q = catalog.get("Q8")
    C = commutator_subgroup(Q)
    A, pi = abelianization(Q)
    r = six_term_window_check(Tower.constant(C), Tower.constant(Q), Tower.constant(A), 3,
                              GroupHom.inclusion(C), pi)
    assert r.exact and r.orders == (2, 8, 4)


@pytest.mark.parametrize("name", ["S3", "D4", "A4", "Q8"])
def test_six_term_product_towers(name):
    T = Tower.product_accumulation([catalog.get(name)])
    N = 2
    sub, quot = commutator_tower(T, N), abelianization_tower(T, N)
    r = six_term_window_check(sub, T, quot, N,
                              lambda n: GroupHom.inclusion(sub.group(n), T.group(n)),
                              lambda n: abelianization(T.group(n))[1])
    assert r.exact
    assert r.orders[0] * r.orders[2] == r.orders[1]


def test_non_abelian_boundary_rejected():
    with pytest.raises(NotAbelian):
        lim1_window_surjectivity(Tower.constant(catalog.get("S3")), 2)


def test_commutator_tower_of_constant_s3():
    C = commutator_tower(Tower.constant(catalog.get("S3")), 3)
    assert all(C.group(n).order == 3 for n in range(4))
