"""Group objects and homomorphisms.

Four kinds of group share one small protocol (``identity``, ``mul``, ``inv``,
``contains``, ``generators`` and, when finite, ``elements``):

* :class:`FiniteGroup` -- a Cayley table over element ids ``0..n-1``;
* :class:`FreeGroup` -- reduced words (:class:`FreeWord`);
* :class:`~towerlab.abgroup.FgAbGroup` -- written additively, ``mul`` is ``+``;
* :class:`ProductGroup` -- flat finite direct products, elements are tuples.

:class:`Subgroup` wraps an element set inside a finite parent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Sequence

from .abgroup import AbElement, FgAbGroup, apply_images, describe_subgroup, hom_kernel


class GroupError(ValueError):
    pass


EXHAUSTIVE_ORDER = 64


class FiniteGroup:
    """Group given by a multiplication table ``table[x][y] = x*y``."""

    is_finite = True

    def __init__(self, table: Sequence[Sequence[int]], name: str | None = None,
                 labels: Sequence | None = None, check: bool = True):
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        self.name = name
        self.labels = tuple(labels) if labels is not None else None
        n = len(self.table)
        if n == 0:
            raise GroupError("empty table")
        if any(len(r) != n for r in self.table):
            raise GroupError("table is not square")
        e = next((x for x in range(n) if self.table[x] == tuple(range(n))), None)
        if e is None or any(self.table[y][e] != y for y in range(n)):
            raise GroupError("no identity element")
        self.identity = e
        inv = [None] * n
        for x in range(n):
            row = self.table[x]
            for y in range(n):
                if row[y] == e:
                    inv[x] = y
                    break
            else:
                raise GroupError(f"element {x} has no inverse")
        self.inverse = tuple(inv)
        if check:
            self._check()

    def _check(self):
        n, t = len(self.table), self.table
        for row in t:
            if sorted(row) != list(range(n)):
                raise GroupError("table rows are not permutations")
        if n <= EXHAUSTIVE_ORDER:
            triples = product(range(n), repeat=3)
        else:
            rng = random.Random(n)
            triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(20000)]
        for x, y, z in triples:
            if t[t[x][y]][z] != t[x][t[y][z]]:
                raise GroupError(f"associativity fails at ({x},{y},{z})")

    @classmethod
    def from_permutations(cls, gens: Sequence[Sequence[int]], name: str | None = None) -> FiniteGroup:
        """Permutation group generated by ``gens`` (images of 0..d-1)."""
        gens = [tuple(g) for g in gens]
        d = len(gens[0]) if gens else 1
        ident = tuple(range(d))
        elems = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[i]] for i in range(d))   # apply p then g
                    if q not in elems:
                        elems.add(q)
                        nxt.append(q)
            frontier = nxt
        return cls.from_elements(sorted(elems), lambda p, q: tuple(q[p[i]] for i in range(d)), name)

    @classmethod
    def from_elements(cls, elems: Sequence, mul: Callable, name: str | None = None) -> FiniteGroup:
        index = {x: i for i, x in enumerate(elems)}
        table = [[index[mul(x, y)] for y in elems] for x in elems]
        return cls(table, name=name, labels=elems)

    @classmethod
    def from_json(cls, data: dict, name: str | None = None) -> FiniteGroup:
        table = data["table"]
        if "order" in data and int(data["order"]) != len(table):
            raise GroupError(f"order {data['order']} does not match a table of size {len(table)}")
        return cls(table, name=name or data.get("name"))

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(r) for r in self.table]}

    @property
    def order(self) -> int:
        return len(self.table)

    def elements(self):
        return range(len(self.table))

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self.inverse[x]

    def pow(self, x: int, n: int) -> int:
        return power(self, x, n)

    def contains(self, x) -> bool:
        return isinstance(x, int) and 0 <= x < len(self.table)

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        n = len(t)
        return all(t[x][y] == t[y][x] for x in range(n) for y in range(x + 1, n))

    @cached_property
    def _gens(self) -> tuple:
        return tuple(greedy_generators(self))

    def generators(self) -> list:
        return list(self._gens)

    def __eq__(self, other):
        return (isinstance(other, FiniteGroup) and self.table == other.table
                and self.identity == other.identity)

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"

    def __str__(self):
        return self.name or f"G{self.order}"


def power(G, x, n: int):
    if n < 0:
        x, n = G.inv(x), -n
    out = G.identity
    while n:
        if n & 1:
            out = G.mul(out, x)
        x = G.mul(x, x)
        n >>= 1
    return out


def generate(G, gens: Iterable) -> set:
    """Closure of ``gens`` under multiplication inside a finite group."""
    gens = list(gens)
    out = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


def greedy_generators(G) -> list:
    """A small generating set.

    Small groups add the element that enlarges the span most at each step;
    larger ones take the first element outside the current span.
    """
    elems = list(G.elements())
    span = {G.identity}
    gens = []
    if len(elems) > EXHAUSTIVE_ORDER:
        for x in elems:
            if x not in span:
                gens.append(x)
                span = generate(G, gens)
                if len(span) == len(elems):
                    break
        return gens
    while len(span) < len(elems):
        best, best_span = None, span
        for x in elems:
            if x in span:
                continue
            s = generate(G, gens + [x])
            if len(s) > len(best_span):
                best, best_span = x, s
                if len(s) == len(elems):
                    break
        gens.append(best)
        span = best_span
    return gens


# ---------------------------------------------------------------------------
# free groups


def _letter_name(x: int) -> str:
    i = abs(x) - 1
    base = "abcdefghijklmnopqrstuvwxyz"[i] if i < 26 else f"x{i}"
    return base if x > 0 else base.upper()


@dataclass(frozen=True)
class FreeWord:
    """Freely reduced word; letter ``i+1`` is generator i and ``-(i+1)`` its inverse."""

    letters: tuple = ()
    rank: int = 2

    def __post_init__(self):
        out = []
        for x in self.letters:
            x = int(x)
            if x == 0 or abs(x) > self.rank:
                raise GroupError(f"letter {x} out of range for rank {self.rank}")
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        object.__setattr__(self, "letters", tuple(out))

    @classmethod
    def parse(cls, s: str, rank: int = 2) -> FreeWord:
        """``"aBAb"`` style: lowercase is a generator, uppercase its inverse."""
        letters = []
        for ch in s.replace(" ", ""):
            if ch in "1e":
                continue
            i = ord(ch.lower()) - ord("a")
            if not 0 <= i < 26:
                raise GroupError(f"bad letter {ch!r}")
            letters.append(i + 1 if ch.islower() else -(i + 1))
        rank = max([rank] + [abs(x) for x in letters])
        return cls(tuple(letters), rank)

    @classmethod
    def generator(cls, i: int, rank: int = 2) -> FreeWord:
        return cls((i + 1,), rank)

    def __mul__(self, other: FreeWord) -> FreeWord:
        return FreeWord(self.letters + other.letters, max(self.rank, other.rank))

    def inverse(self) -> FreeWord:
        return FreeWord(tuple(-x for x in reversed(self.letters)), self.rank)

    def __pow__(self, n: int) -> FreeWord:
        base = self if n >= 0 else self.inverse()
        return FreeWord(base.letters * abs(n), self.rank)

    def __len__(self):
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def exponent_sums(self) -> tuple:
        s = [0] * self.rank
        for x in self.letters:
            s[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(s)

    def cyclic_reduction(self) -> tuple[FreeWord, FreeWord]:
        """``(c, u)`` with ``self == u^-1 c u`` and ``c`` cyclically reduced."""
        w = self.letters
        k = 0
        while 2 * k + 1 < len(w) and w[k] == -w[len(w) - 1 - k]:
            k += 1
        core = FreeWord(w[k:len(w) - k], self.rank)
        u = FreeWord(w[:k], self.rank).inverse()
        return core, u

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def __str__(self):
        return "".join(_letter_name(x) for x in self.letters) or "e"

    def __repr__(self):
        return f"FreeWord({str(self)!r})"


class FreeGroup:
    is_finite = False
    is_abelian = False

    def __init__(self, rank: int):
        if rank < 0:
            raise GroupError("negative rank")
        self.rank = rank
        self.identity = FreeWord((), rank)

    def mul(self, x: FreeWord, y: FreeWord) -> FreeWord:
        return FreeWord(x.letters + y.letters, self.rank)

    def inv(self, x: FreeWord) -> FreeWord:
        return x.inverse()

    def pow(self, x, n):
        return x ** n

    def contains(self, x) -> bool:
        return isinstance(x, FreeWord) and all(abs(a) <= self.rank for a in x.letters)

    def generators(self) -> list:
        return [FreeWord.generator(i, self.rank) for i in range(self.rank)]

    def word(self, s: str) -> FreeWord:
        return FreeWord(FreeWord.parse(s, self.rank).letters, self.rank)

    @property
    def order(self):
        return None if self.rank else 1

    def elements(self):
        raise GroupError("free group is infinite")

    def __eq__(self, other):
        return isinstance(other, FreeGroup) and other.rank == self.rank

    def __hash__(self):
        return hash(("free", self.rank))

    def __str__(self):
        return f"F{self.rank}"


# ---------------------------------------------------------------------------
# products and subgroups


class ProductGroup:
    """Direct product of groups; nested products are flattened."""

    def __init__(self, components: Sequence):
        flat = []
        for c in components:
            if isinstance(c, ProductGroup):
                flat.extend(c.components)
            else:
                flat.append(c)
        self.components = tuple(flat)
        self.identity = tuple(c.identity for c in self.components)

    @property
    def is_finite(self) -> bool:
        return all(c.is_finite for c in self.components)

    @property
    def is_abelian(self) -> bool:
        return all(c.is_abelian for c in self.components)

    @property
    def order(self):
        out = 1
        for c in self.components:
            if c.order is None:
                return None
            out *= c.order
        return out

    def mul(self, x, y):
        return tuple(c.mul(a, b) for c, a, b in zip(self.components, x, y))

    def inv(self, x):
        return tuple(c.inv(a) for c, a in zip(self.components, x))

    def pow(self, x, n):
        return tuple(c.pow(a, n) for c, a in zip(self.components, x))

    def contains(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == len(self.components)
                and all(c.contains(a) for c, a in zip(self.components, x)))

    def elements(self):
        return product(*(list(c.elements()) for c in self.components))

    def generators(self) -> list:
        out = []
        for i, c in enumerate(self.components):
            for g in c.generators():
                x = list(self.identity)
                x[i] = g
                out.append(tuple(x))
        return out

    def __eq__(self, other):
        return isinstance(other, ProductGroup) and other.components == self.components

    def __hash__(self):
        return hash(("prod", self.components))

    def __str__(self):
        return " × ".join(str(c) for c in self.components) or "1"


class Subgroup:
    """Subgroup of a finite group, stored as an element set."""

    is_finite = True

    def __init__(self, parent, elements: Iterable | None = None, gens: Iterable | None = None):
        self.parent = parent
        if elements is None:
            elements = generate(parent, gens or [])
        self.members = frozenset(elements)
        self.identity = parent.identity
        if self.identity not in self.members:
            raise GroupError("subgroup must contain the identity")

    @property
    def order(self) -> int:
        return len(self.members)

    def mul(self, x, y):
        return self.parent.mul(x, y)

    def inv(self, x):
        return self.parent.inv(x)

    def pow(self, x, n):
        return power(self.parent, x, n)

    def contains(self, x) -> bool:
        return x in self.members

    def elements(self):
        return sorted(self.members, key=_sort_key)

    @cached_property
    def is_abelian(self) -> bool:
        m = self.elements()
        return all(self.mul(x, y) == self.mul(y, x) for x in m for y in m)

    @cached_property
    def _gens(self):
        return tuple(greedy_generators(self))

    def generators(self) -> list:
        return list(self._gens)

    def is_normal(self) -> bool:
        P = self.parent
        return all(P.mul(P.mul(P.inv(g), h), g) in self.members
                   for g in P.generators() for h in self.generators())

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent == self.parent and other.members == self.members

    def __hash__(self):
        return hash(self.members)

    def __str__(self):
        return f"<{self.order} elements of {self.parent}>"


def _sort_key(x):
    if isinstance(x, AbElement):
        return (0, x.coords)
    if isinstance(x, FreeWord):
        return (1, x.letters)
    if isinstance(x, tuple):
        return (2, tuple(_sort_key(a) for a in x))
    return (3, x)


def elements_of(G) -> list:
    return list(G.elements())


def is_finite_group(G) -> bool:
    if isinstance(G, FgAbGroup):
        return G.is_finite
    return bool(G.is_finite)


def group_order(G):
    return G.order


def to_finite_group(G) -> tuple[FiniteGroup, list]:
    """Cayley table of any finite group object plus the element list (id -> element)."""
    if isinstance(G, FiniteGroup):
        return G, list(G.elements())
    elems = sorted(G.elements(), key=_sort_key)
    return FiniteGroup.from_elements(elems, G.mul, name=str(G)), elems


# ---------------------------------------------------------------------------
# homomorphisms


class GroupHom:
    """A homomorphism given by a callable together with its describing data.

    ``kind`` records how the map was specified (``table``, ``images``,
    ``matrix``, ``projection``, ``inclusion``, ``compose``, ``callable``).
    """

    def __init__(self, domain, codomain, fn: Callable, kind: str = "callable", data=None):
        self.domain = domain
        self.codomain = codomain
        self.fn = fn
        self.kind = kind
        self.data = data

    def __call__(self, x):
        return self.fn(x)

    def __repr__(self):
        return f"GroupHom({self.kind}: {self.domain} -> {self.codomain})"

    # constructors ----------------------------------------------------------

    @classmethod
    def identity(cls, G) -> GroupHom:
        if isinstance(G, FgAbGroup):
            return cls.matrix(G, G, G.basis())
        return cls(G, G, lambda x: x, "identity")

    @classmethod
    def inclusion(cls, sub, G=None) -> GroupHom:
        G = G if G is not None else sub.parent
        return cls(sub, G, lambda x: x, "inclusion")

    @classmethod
    def trivial(cls, G, H) -> GroupHom:
        if isinstance(G, FgAbGroup):
            return cls.matrix(G, H, [H.identity] * G.ngens)
        e = H.identity
        return cls(G, H, lambda x: e, "trivial")

    @classmethod
    def from_table(cls, G: FiniteGroup, H, images: Sequence) -> GroupHom:
        images = tuple(images)
        if len(images) != G.order:
            raise GroupError("table length does not match the domain order")
        return cls(G, H, lambda x: images[x], "table", images)

    @classmethod
    def matrix(cls, A: FgAbGroup, B, images: Sequence) -> GroupHom:
        """Hom out of an f.g. abelian group from basis images."""
        images = tuple(images)
        if len(images) != A.ngens:
            raise GroupError(f"{len(images)} images for {A.ngens} generators")
        for d, im in zip(A.moduli, images):
            if d and not power_is_identity(B, im, d):
                raise GroupError(f"image of an order-{d} generator has the wrong order")
        if isinstance(B, FgAbGroup):
            return cls(A, B, lambda x: apply_images(images, B, x), "matrix", images)

        def fn(x):
            out = B.identity
            for c, im in zip(x.coords, images):
                if c:
                    out = B.mul(out, B.pow(im, c))
            return out

        return cls(A, B, fn, "images", images)

    @classmethod
    def multiplication(cls, A: FgAbGroup, k: int) -> GroupHom:
        return cls.matrix(A, A, [k * g for g in A.basis()])

    @classmethod
    def from_generator_images(cls, F: FreeGroup, H, images: Sequence) -> GroupHom:
        images = tuple(images)
        if len(images) != F.rank:
            raise GroupError("one image per free generator required")
        invs = tuple(H.inv(x) for x in images)

        def fn(w: FreeWord):
            out = H.identity
            for a in w.letters:
                out = H.mul(out, images[a - 1] if a > 0 else invs[-a - 1])
            return out

        return cls(F, H, fn, "images", images)

    @classmethod
    def projection(cls, P: ProductGroup, i: int) -> GroupHom:
        return cls(P, P.components[i], lambda x: x[i], "projection", i)

    @classmethod
    def prefix_projection(cls, P: ProductGroup, Q: ProductGroup) -> GroupHom:
        """Drop trailing components: ``P = Q x (more)``."""
        k = len(Q.components)
        if P.components[:k] != Q.components:
            raise GroupError("codomain is not a prefix of the domain")
        return cls(P, Q, lambda x: x[:k], "prefix_projection", k)

    @classmethod
    def componentwise(cls, P: ProductGroup, Q: ProductGroup, maps: Sequence[GroupHom]) -> GroupHom:
        maps = tuple(maps)
        return cls(P, Q, lambda x: tuple(f(a) for f, a in zip(maps, x)), "componentwise", maps)

    # combinators -----------------------------------------------------------

    def compose(self, other: GroupHom) -> GroupHom:
        """``self ∘ other``."""
        f, g = self, other
        if (isinstance(f.domain, FgAbGroup) and isinstance(g.domain, FgAbGroup)
                and g.kind in ("matrix", "identity") and f.kind in ("matrix", "identity")):
            return GroupHom.matrix(g.domain, f.codomain, [f(im) for im in g.data])
        return GroupHom(g.domain, f.codomain, lambda x: f(g(x)), "compose", (f, g))

    def restrict(self, sub, codomain=None) -> GroupHom:
        return GroupHom(sub, codomain if codomain is not None else self.codomain, self.fn,
                        "restrict", self)

    def image(self):
        D = self.domain
        if isinstance(self.codomain, FgAbGroup):
            gens = [self(g) for g in D.generators()]
            return describe_subgroup(self.codomain, gens)
        if isinstance(D, FgAbGroup) or not D.is_finite:
            return Subgroup(self.codomain, gens=[self(g) for g in D.generators()])
        return Subgroup(self.codomain, {self(x) for x in D.elements()})

    def kernel(self):
        D = self.domain
        if isinstance(D, FgAbGroup) and isinstance(self.codomain, FgAbGroup):
            return hom_kernel(D, self.codomain, [self(g) for g in D.basis()])
        e = self.codomain.identity
        return Subgroup(D, {x for x in D.elements() if self(x) == e})

    def is_surjective(self) -> bool:
        im = self.image()
        if isinstance(self.codomain, FgAbGroup):
            return im.quotient.is_trivial
        return im.order == self.codomain.order

    def is_homomorphism(self, samples: int = 2000, seed: int = 0) -> bool:
        D, C = self.domain, self.codomain
        if isinstance(D, FgAbGroup) and self.kind in ("matrix", "images"):
            return True   # checked at construction on relations
        if D.is_finite and (D.order or 0) <= EXHAUSTIVE_ORDER ** 2 // 16:
            els = list(D.elements())
            pairs = product(els, els)
        else:
            rng = random.Random(seed)
            gens = D.generators()
            pairs = []
            for _ in range(samples):
                x = _random_word(D, gens, rng)
                y = _random_word(D, gens, rng)
                pairs.append((x, y))
        return all(self(D.mul(x, y)) == C.mul(self(x), self(y)) for x, y in pairs)


def power_is_identity(G, x, d: int) -> bool:
    return G.pow(x, d) == G.identity


def _random_word(G, gens, rng, length: int = 8):
    x = G.identity
    for _ in range(length):
        g = rng.choice(gens)
        x = G.mul(x, g if rng.random() < 0.5 else G.inv(g))
    return x
