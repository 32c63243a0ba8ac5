import json

import pytest
from hypothesis import given, settings, strategies as st

from towerlab import catalog
from towerlab.abgroup import FgAbGroup
from towerlab.commutators import (NotInCommutatorSubgroup, abelianization,
                                  abelianization_by_presentation, commutator, commutator_length_finite,
                                  commutator_length_free, commutator_subgroup, commutator_width_finite,
                                  commutator_word, evaluate_expression, is_single_commutator_free,
                                  normal_closure, quotient_lower_bound, wicks_decomposition)
from towerlab.groups import (FiniteGroup, FreeGroup, FreeWord, GroupError, GroupHom, ProductGroup,
                             Subgroup)
from towerlab.kernel import naive_is_commutator

letters = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=10)


def words():
    return letters.map(lambda ls: FreeWord(tuple(ls), 2))


def _brute_commutator_subgroup(G) -> set:
    comms = {commutator(G, x, y) for x in G.elements() for y in G.elements()}
    span = {G.identity}
    while True:
        nxt = span | {G.mul(a, c) for a in span for c in comms}
        if nxt == span:
            return span
        span = nxt


FROZEN = {  # |C(G)| and Ab(G) for the non-abelian catalog groups
    "S3": (3, (2,)), "D4": (2, (2, 2)), "D5": (5, (2,)), "D6": (3, (2, 2)), "Q8": (2, (2, 2)),
    "A4": (4, (3,)), "S4": (12, (2,)), "S3xZ2": (3, (2, 2)), "Q8xZ2": (2, (2, 2, 2)),
}


@pytest.mark.parametrize("name", catalog.catalog_names())
def test_catalog_commutator_subgroups(name):
    G = catalog.get(name)
    C = commutator_subgroup(G)
    assert C.members == _brute_commutator_subgroup(G)
    A, pi = abelianization(G)
    assert A == abelianization_by_presentation(G)
    assert A.order * len(C.members) == G.order
    if name in FROZEN:
        assert (len(C.members), A.factors) == FROZEN[name]
    else:
        assert G.is_abelian and len(C.members) == 1
    # the projection is a surjective homomorphism killing C(G)
    assert pi.is_homomorphism()
    assert {pi(x) for x in G.elements()} == set(A.elements())


def test_catalog_validates_tables():
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [0, 1]])
    G = catalog.get("S3")
    assert FiniteGroup.from_json(json.loads(json.dumps(G.to_json()))) == G


def test_catalog_override(tmp_path, monkeypatch):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"V4": {"permutations": [[1, 0, 3, 2], [2, 3, 0, 1]]}}))
    monkeypatch.setenv("TOWERLAB_CATALOG", str(path))
    assert catalog.get("V4").order == 4
    assert "V4" in catalog.catalog_names()


@given(words(), words())
def test_free_word_group_laws(x, y):
    assert (x * y).inverse() == y.inverse() * x.inverse()
    assert (x * x.inverse()).is_identity()
    assert all(a != -b for a, b in zip((x * y).letters, (x * y).letters[1:]))


@given(words())
def test_cyclic_reduction(w):
    c, u = w.cyclic_reduction()
    assert u.inverse() * c * u == w
    assert c.is_cyclically_reduced()


@settings(max_examples=200, deadline=None)
@given(words(), words())
def test_wicks_accepts_every_commutator(x, y):
    w = commutator_word(x, y)
    xy = wicks_decomposition(w)
    assert xy is not None
    assert commutator_word(*xy) == w
    assert naive_is_commutator(w)


@settings(max_examples=200, deadline=None)
@given(words())
def test_wicks_agrees_with_naive_scan(w):
    if any(w.exponent_sums()):
        return
    assert is_single_commutator_free(w) == naive_is_commutator(w)


def test_wicks_frozen():
    ab = commutator_word(FreeWord.parse("a"), FreeWord.parse("b"))
    assert str(ab) == "ABab"
    assert is_single_commutator_free(ab)
    assert not is_single_commutator_free(ab ** 2)
    assert is_single_commutator_free(FreeWord.parse("aabAAB"))


def test_free_commutator_lengths():
    ab = commutator_word(FreeWord.parse("a"), FreeWord.parse("b"))
    r = commutator_length_free(ab ** 2, factor_len_bound=8)
    assert r.status == "exact" and r.value == 2
    assert evaluate_free(r.expression) == ab ** 2
    r3 = commutator_length_free(ab ** 3, factor_len_bound=2)
    assert r3.lower == 2 and r3.upper is None
    with pytest.raises(NotInCommutatorSubgroup):
        commutator_length_free(FreeWord.parse("a"))


def evaluate_free(expr):
    out = FreeWord((), 2)
    for x, y in expr:
        out = out * commutator_word(x, y)
    return out


@settings(max_examples=30, deadline=None)
@given(words(), words(), words(), words())
def test_free_cl_sound(x, y, z, t):
    w = commutator_word(x, y) * commutator_word(z, t)
    r = commutator_length_free(w, factor_len_bound=4, budget=20_000)
    assert r.lower <= 2
    if r.expression:
        assert evaluate_free(r.expression) == w and len(r.expression) == r.upper


def test_quotient_bounds_monotone():
    ab = commutator_word(FreeWord.parse("a"), FreeWord.parse("b"))
    qs = [catalog.get(n) for n in ("S3", "Q8", "A4")]
    for w in (ab, ab ** 2, ab ** 3):
        base = commutator_length_free(w, factor_len_bound=2)
        more = commutator_length_free(w, factor_len_bound=2, quotients=qs)
        assert more.lower >= base.lower
        b, _ = quotient_lower_bound(w, qs)
        assert b <= max(1, more.lower)


def test_commutator_facts_s3_q8():
    S3, Q8 = catalog.get("S3"), catalog.get("Q8")
    C = commutator_subgroup(S3)
    assert len(C.members) == 3 and all(S3.element_order(x) in (1, 3) for x in C.members)
    assert commutator_width_finite(S3) == 1
    CQ = commutator_subgroup(Q8)
    assert len(CQ.members) == 2 and CQ.is_normal()
    assert abelianization(Q8)[0] == FgAbGroup((2, 2))
    t = next(x for x in S3.elements() if S3.element_order(x) == 2)
    assert commutator_length_finite(S3, t).status == "not_in_commutator_subgroup"


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["S3", "Q8", "A4", "D4", "S4"]), st.data())
def test_finite_cl_expressions(name, data):
    G = catalog.get(name)
    g = data.draw(st.sampled_from(sorted(commutator_subgroup(G).members)))
    r = commutator_length_finite(G, g)
    assert r.status == "exact"
    assert evaluate_expression(G, r.expression) == g


def test_normal_closure_and_subgroups():
    S4 = catalog.get("S4")
    t = next(x for x in S4.elements() if S4.element_order(x) == 2)
    N = normal_closure(S4, [t])
    assert N.is_normal()
    assert len(Subgroup(S4, gens=[t]).members) == 2


def test_product_groups_and_homs():
    P = ProductGroup([catalog.get("S3"), FgAbGroup.cyclic(4)])
    assert P.order == 24
    A, _ = abelianization(P)
    assert A == FgAbGroup((2, 4))
    F = FreeGroup(2)
    S3 = catalog.get("S3")
    gens = S3.generators()
    f = GroupHom.from_generator_images(F, S3, gens[:2] if len(gens) >= 2 else gens * 2)
    w = F.word("abAB")
    assert f(w) == commutator(S3, S3.inv(f(F.word("a"))), S3.inv(f(F.word("b"))))
    assert abelianization(F)[0] == FgAbGroup.free(2)
