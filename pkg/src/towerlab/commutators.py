"""Commutators, commutator subgroups, abelianization and commutator length."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .abgroup import FgAbGroup, direct_sum, quotient_by_relations
from .groups import (FiniteGroup, FreeGroup, FreeWord, GroupHom, ProductGroup,
                     Subgroup, _sort_key, generate)


class NotInCommutatorSubgroup(ValueError):
    pass


def commutator(G, x, y):
    """``[x, y] = x^-1 y^-1 x y``."""
    return G.mul(G.mul(G.inv(x), G.inv(y)), G.mul(x, y))


def commutator_word(x: FreeWord, y: FreeWord) -> FreeWord:
    return x.inverse() * y.inverse() * x * y


def normal_closure(G, seeds: Iterable) -> Subgroup:
    gens = [s for s in seeds if s != G.identity]
    members = generate(G, gens)
    conj = G.generators()
    changed = True
    while changed:
        changed = False
        for g in conj:
            gi = G.inv(g)
            for n in list(gens):
                c = G.mul(G.mul(gi, n), g)
                if c not in members:
                    gens.append(c)
                    members = generate(G, gens)
                    changed = True
    return Subgroup(G, members)


def commutator_subgroup(G) -> Subgroup:
    """``C(G)``: normal closure of the commutators of a generating set."""
    gens = G.generators()
    seeds = [commutator(G, x, y) for i, x in enumerate(gens) for y in gens[i + 1:]]
    C = normal_closure(G, seeds)
    if not C.is_normal():
        raise AssertionError("commutator subgroup failed the normality check")
    return C


# ---------------------------------------------------------------------------
# abelianization


def abelianization(G) -> tuple[FgAbGroup, GroupHom]:
    """Canonical form of ``G / C(G)`` and the projection onto it."""
    if isinstance(G, FgAbGroup):
        return G, GroupHom.identity(G)
    if isinstance(G, FreeGroup):
        A = FgAbGroup((), G.rank)
        return A, GroupHom(G, A, lambda w: A.element(w.exponent_sums()), "exponent_sums")
    if isinstance(G, ProductGroup):
        parts = [abelianization(c) for c in G.components]
        A, inject = direct_sum([a for a, _ in parts])
        return A, GroupHom(G, A, lambda x: inject([p(a) for (_, p), a in zip(parts, x)]),
                           "componentwise", parts)
    return abelianization_by_cosets(G)


def abelianization_by_cosets(G) -> tuple[FgAbGroup, GroupHom]:
    """Abelianization of a finite group through the cosets of ``C(G)``.

    Coordinates of the cosets are assigned along a BFS tree in the coset
    graph; every graph edge then gives one relation, and these relations
    present the quotient exactly.
    """
    C = commutator_subgroup(G)
    gens = G.generators()
    m = len(gens)
    coset_of = {}
    reps = []
    for x in sorted(G.elements(), key=_sort_key):
        if x in coset_of:
            continue
        idx = len(reps)
        reps.append(x)
        for c in C.members:
            coset_of[G.mul(x, c)] = idx
    # BFS over cosets starting from the identity coset
    start = coset_of[G.identity]
    coord = {start: [0] * m}
    queue = [start]
    rels = []
    edges = []
    while queue:
        nxt = []
        for c in queue:
            for s, g in enumerate(gens):
                d = coset_of[G.mul(reps[c], g)]
                edges.append((c, s, d))
                if d not in coord:
                    v = list(coord[c])
                    v[s] += 1
                    coord[d] = v
                    nxt.append(d)
        queue = nxt
    for c, s, d in edges:
        v = list(coord[c])
        v[s] += 1
        rels.append([a - b for a, b in zip(v, coord[d])])
    q = quotient_by_relations([r for r in rels if any(r)], m)
    A = q.group
    table = {c: q(coord[c]) for c in coord}
    return A, GroupHom(G, A, lambda x: table[coset_of[x]], "cosets", q)


def abelianization_by_presentation(G) -> FgAbGroup:
    """Independent route: generators are all elements, relations ``x + y = xy``."""
    elems = sorted(G.elements(), key=_sort_key)
    idx = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    rels = []
    for x in elems:
        for y in elems:
            row = [0] * n
            row[idx[x]] += 1
            row[idx[y]] += 1
            row[idx[G.mul(x, y)]] -= 1
            rels.append(row)
    return quotient_by_relations(rels, n).group


# ---------------------------------------------------------------------------
# commutator length in finite groups


@dataclass(frozen=True)
class CLResult:
    status: str                 # exact | bounds | unknown | not_in_commutator_subgroup
    lower: int = 0
    upper: int | None = None
    expression: tuple = ()      # pairs (x, y) with g = [x1,y1]...[xn,yn]
    certificates: tuple = ()

    @property
    def value(self) -> int | None:
        return self.upper if self.status == "exact" else None

    def to_json(self) -> dict:
        return {"status": self.status, "lower": self.lower, "upper": self.upper}


def _commutator_set(G) -> dict:
    elems = list(G.elements())
    out = {}
    for x in elems:
        for y in elems:
            out.setdefault(commutator(G, x, y), (x, y))
    return out


def commutator_length_table(G) -> dict:
    """BFS over ``S_n = K^n`` with ``K`` the commutator set: g -> (n, expression)."""
    K = _commutator_set(G)
    best = {G.identity: ()}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for c, pair in K.items():
                h = G.mul(g, c)
                if h not in best:
                    best[h] = best[g] + (pair,)
                    nxt.append(h)
        frontier = nxt
    return best


def commutator_length_finite(G, g, max_n: int | None = None) -> CLResult:
    table = commutator_length_table(G)
    if g not in table:
        return CLResult("not_in_commutator_subgroup")
    expr = table[g]
    n = len(expr)
    if max_n is not None and n > max_n:
        return CLResult("bounds", max_n + 1, None)
    return CLResult("exact", n, n, expr)


def evaluate_expression(G, expr: Sequence) -> object:
    out = G.identity
    for x, y in expr:
        out = G.mul(out, commutator(G, x, y))
    return out


def commutator_width_finite(G) -> int:
    return max(len(e) for e in commutator_length_table(G).values())


# ---------------------------------------------------------------------------
# free groups: Wicks criterion and commutator length search


def wicks_decomposition(w: FreeWord) -> tuple[FreeWord, FreeWord] | None:
    """``(x, y)`` with ``[x, y] == w`` if ``w`` is a single commutator, else None.

    A cyclically reduced word is a commutator exactly when some cyclic
    rotation reads letter for letter as ``A B C A^-1 B^-1 C^-1``.
    """
    if any(w.exponent_sums()):
        return None
    core, u = w.cyclic_reduction()
    c = core.letters
    n = len(c)
    r = w.rank
    if n == 0:
        e = FreeWord((), r)
        return e, e
    half = n // 2
    for k in range(n):
        rot = c[k:] + c[:k]
        for a in range(half + 1):
            A = rot[:a]
            if rot[half:half + a] != tuple(-x for x in reversed(A)):
                continue
            for b in range(half - a + 1):
                B = rot[a:a + b]
                C = rot[a + b:half]
                if (rot[half + a:half + a + b] == tuple(-x for x in reversed(B))
                        and rot[half + a + b:] == tuple(-x for x in reversed(C))):
                    Aw, Bw, Cw = FreeWord(A, r), FreeWord(B, r), FreeWord(C, r)
                    x = (Aw * Bw).inverse()
                    y = Aw * Cw.inverse()
                    t = u.inverse() * FreeWord(c[:k], r)
                    x, y = t * x * t.inverse(), t * y * t.inverse()
                    if commutator_word(x, y) != w:
                        raise AssertionError("Wicks witness failed to reduce to w")
                    return x, y
    return None


def is_single_commutator_free(w: FreeWord) -> bool:
    return wicks_decomposition(w) is not None


def reduced_words(rank: int, max_len: int):
    """All reduced words of length ``<= max_len`` in order of length."""
    letters = [i for k in range(1, rank + 1) for i in (k, -k)]
    level = [()]
    yield FreeWord((), rank)
    for _ in range(max_len):
        nxt = []
        for w in level:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        for w in nxt:
            yield FreeWord(w, rank)
        level = nxt


@lru_cache(maxsize=16)
def single_commutators(rank: int, max_len: int) -> tuple:
    """Nontrivial commutator words of reduced length ``<= max_len``, shortest first."""
    return tuple(w for w in reduced_words(rank, max_len)
            if w.letters and not any(w.exponent_sums()) and is_single_commutator_free(w))


_QUOTIENT_TABLES: dict = {}


def _quotient_cl_table(Q: FiniteGroup) -> dict:
    key = id(Q)
    if key not in _QUOTIENT_TABLES:
        _QUOTIENT_TABLES[key] = (Q, {g: len(e) for g, e in commutator_length_table(Q).items()})
    return _QUOTIENT_TABLES[key][1]


def quotient_lower_bound(w: FreeWord, quotients: Sequence[FiniteGroup]) -> tuple[int, str | None]:
    """Best ``cl`` lower bound from maps of the free group onto library groups."""
    best, cert = 0, None
    for Q in quotients:
        cl = _quotient_cl_table(Q)
        width = max(cl.values())
        if width <= best:
            continue
        for imgs in product(list(Q.elements()), repeat=w.rank):
            phi = GroupHom.from_generator_images(FreeGroup(w.rank), Q, imgs)
            v = cl[phi(w)]
            if v > best:
                best, cert = v, f"{Q}: generators -> {list(imgs)}, cl of image = {v}"
                if best == width:
                    break
    return best, cert


def commutator_length_free(w: FreeWord, max_n: int = 3, factor_len_bound: int = 8,
                           quotients: Sequence[FiniteGroup] | None = None,
                           budget: int = 200_000) -> CLResult:
    """Bounds on the commutator length of ``w`` in a free group.

    Upper bounds peel single commutator factors of reduced length at most
    ``factor_len_bound`` off the front (shortest first) and finish with the
    Wicks test; ``budget`` caps the number of Wicks tests.  Lower bounds come
    from the Wicks test (cl >= 2 when it fails) and from finite quotients,
    since a homomorphism never increases commutator length.
    """
    if any(w.exponent_sums()):
        raise NotInCommutatorSubgroup(f"{w} has exponent sums {w.exponent_sums()}")
    if w.is_identity():
        return CLResult("exact", 0, 0, ())
    certs = []
    xy = wicks_decomposition(w)
    if xy is not None:
        return CLResult("exact", 1, 1, (xy,), ("Wicks form found",))
    lower = 2
    certs.append("no cyclic rotation has Wicks form A B C A^-1 B^-1 C^-1")
    if quotients:
        qb, qc = quotient_lower_bound(w, quotients)
        if qb > lower:
            lower = qb
            certs.append(qc)

    cands = single_commutators(w.rank, factor_len_bound)
    calls = [0]

    def search(rest: FreeWord, n: int):
        # rest must be a product of n commutators
        if n == 1:
            calls[0] += 1
            xy = wicks_decomposition(rest)
            return [xy] if xy else None
        for c in cands:
            if calls[0] >= budget:
                return None
            sub = search(c.inverse() * rest, n - 1)
            if sub is not None:
                return [wicks_decomposition(c)] + sub
        return None

    for n in range(2, max_n + 1):
        if n < lower:
            continue
        found = search(w, n)
        if found is not None:
            expr = tuple(found)
            check = FreeWord((), w.rank)
            for x, y in expr:
                check = check * commutator_word(x, y)
            if check != w:
                raise AssertionError("commutator expression failed to reduce to w")
            status = "exact" if n == lower else "bounds"
            return CLResult(status, lower, n, expr, tuple(certs))
        if calls[0] >= budget:
            break
    return CLResult("bounds", lower, None, (), tuple(certs))
