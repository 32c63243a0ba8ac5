"""Finitely generated abelian groups, classified atoms and divisibility chains.

An f.g. abelian group is stored in canonical form ``Z/d_1 + ... + Z/d_k + Z^r``
with ``d_i | d_{i+1}``, so dataclass equality is isomorphism.  Elements carry
coordinates against that basis.

``SymbolicAbGroup`` is a finite direct sum of classified atoms (Z, Q, Z/p^k,
the Pruefer group Z(p^oo) and the p-adic integers) used wherever the groups of
interest are not finitely generated.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from math import gcd, prod
from typing import Iterable, Sequence

from sympy import factorint, isprime

from .linalg import IntMatrix, cokernel_structure, hermite_rows, left_kernel, smith_normal_form
from .linalg import Unsolvable, solve_linear


class NotInPkH(ValueError):
    pass


class ThreadBroken(ValueError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"y_{index} != p * y_{index + 1}")


class OrdinalRangeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# f.g. abelian groups and their elements


@dataclass(frozen=True)
class FgAbGroup:
    factors: tuple = ()
    rank: int = 0

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", fs)
        if self.rank < 0:
            raise ValueError("negative free rank")
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2, got {fs}")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise ValueError(f"invariant factors {fs} do not form a divisibility chain")

    @classmethod
    def cyclic(cls, n: int) -> FgAbGroup:
        if n == 0:
            return cls((), 1)
        return cls((abs(n),) if abs(n) > 1 else ())

    @classmethod
    def free(cls, r: int) -> FgAbGroup:
        return cls((), r)

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> FgAbGroup:
        """Canonical form of a direct sum of cyclic groups (0 means Z)."""
        orders = list(orders)
        return quotient_by_relations(
            [[d if i == j else 0 for j in range(len(orders))] for i, d in enumerate(orders)],
            len(orders)).group

    @property
    def ngens(self) -> int:
        return len(self.factors) + self.rank

    @property
    def moduli(self) -> tuple:
        return self.factors + (0,) * self.rank

    @property
    def order(self) -> int | None:
        return prod(self.factors) if self.rank == 0 else None

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def is_trivial(self) -> bool:
        return not self.factors and not self.rank

    @property
    def exponent(self) -> int | None:
        if self.rank:
            return None
        return self.factors[-1] if self.factors else 1

    is_abelian = True

    def element(self, coords: Sequence[int]) -> AbElement:
        return AbElement(self, tuple(coords))

    @property
    def identity(self) -> AbElement:
        return AbElement(self, (0,) * self.ngens)

    zero = identity

    def basis(self) -> list[AbElement]:
        n = self.ngens
        return [AbElement(self, tuple(int(i == j) for j in range(n))) for i in range(n)]

    def generators(self) -> list[AbElement]:
        return self.basis()

    def mul(self, x: AbElement, y: AbElement) -> AbElement:
        return x + y

    def inv(self, x: AbElement) -> AbElement:
        return -x

    def pow(self, x: AbElement, n: int) -> AbElement:
        return n * x

    def contains(self, x) -> bool:
        return isinstance(x, AbElement) and x.owner == self

    def elements(self):
        if self.rank:
            raise ValueError(f"{self} is infinite")
        for c in product(*(range(d) for d in self.factors)):
            yield AbElement(self, c)

    def relation_rows(self) -> list[list[int]]:
        n = self.ngens
        return [[d if i == j else 0 for j in range(n)] for i, d in enumerate(self.factors)]

    def __str__(self):
        parts = [f"Z/{d}" for d in self.factors]
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        return " ⊕ ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"factors": list(self.factors), "rank": self.rank}


TRIVIAL = FgAbGroup()
Z = FgAbGroup((), 1)


@dataclass(frozen=True)
class AbElement:
    owner: FgAbGroup
    coords: tuple

    def __post_init__(self):
        g = self.owner
        if len(self.coords) != g.ngens:
            raise ValueError(f"{len(self.coords)} coordinates for {g}")
        c = tuple(int(x) % d for x, d in zip(self.coords, g.factors))
        object.__setattr__(self, "coords", c + tuple(int(x) for x in self.coords[len(c):]))

    def __add__(self, other: AbElement) -> AbElement:
        if other.owner != self.owner:
            raise ValueError("elements of different groups")
        return AbElement(self.owner, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> AbElement:
        return AbElement(self.owner, tuple(-a for a in self.coords))

    def __sub__(self, other: AbElement) -> AbElement:
        return self + (-other)

    def __rmul__(self, n: int) -> AbElement:
        return AbElement(self.owner, tuple(n * a for a in self.coords))

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int | None:
        """Additive order, ``None`` for elements of infinite order."""
        g = self.owner
        if any(self.coords[len(g.factors):]):
            return None
        o = 1
        for x, d in zip(self.coords, g.factors):
            k = d // gcd(x, d)
            o = o * k // gcd(o, k)
        return o

    def __repr__(self):
        return f"{list(self.coords)}@{self.owner}"


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class QuotientMap:
    """Canonical form of ``Z^n / relations`` with its projection and lifts."""

    group: FgAbGroup
    ngens: int
    V: IntMatrix
    V_inv: IntMatrix
    keep: tuple      # columns of xV that survive, in canonical order

    def __call__(self, vec: Sequence[int]) -> AbElement:
        y = [sum(vec[i] * self.V[i, j] for i in range(self.ngens) if vec[i]) for j in self.keep]
        return AbElement(self.group, tuple(y))

    def lift(self, i: int) -> tuple:
        """A vector of ``Z^n`` mapping to canonical generator ``i``."""
        return self.V_inv.row(self.keep[i])


def quotient_by_relations(relations: Sequence[Sequence[int]], ngens: int) -> QuotientMap:
    A = IntMatrix.from_rows(relations, ngens)
    snf = smith_normal_form(A)
    diag = snf.diagonal
    tors = [j for j in range(snf.rank) if diag[j] > 1]
    free = list(range(snf.rank, ngens))
    group = FgAbGroup(tuple(diag[j] for j in tors), len(free))
    return QuotientMap(group, ngens, snf.V, snf.V_inv, tuple(tors + free))


def direct_sum(groups: Sequence[FgAbGroup]) -> tuple[FgAbGroup, callable]:
    """Canonical form of a direct sum and the map from tuples of elements."""
    rels, off = [], 0
    total = sum(g.ngens for g in groups)
    for g in groups:
        for i, d in enumerate(g.factors):
            row = [0] * total
            row[off + i] = d
            rels.append(row)
        off += g.ngens
    q = quotient_by_relations(rels, total)

    def inject(elems: Sequence[AbElement]) -> AbElement:
        return q([c for e in elems for c in e.coords])

    return q.group, inject


def images_matrix(images: Sequence[AbElement], codomain: FgAbGroup) -> list[list[int]]:
    return [list(e.coords) for e in images]


def apply_images(images: Sequence[AbElement], codomain: FgAbGroup, x: AbElement) -> AbElement:
    out = codomain.identity
    for c, im in zip(x.coords, images):
        if c:
            out = out + c * im
    return out


def hom_cokernel(domain: FgAbGroup, codomain: FgAbGroup, images: Sequence[AbElement]) -> FgAbGroup:
    rows = images_matrix(images, codomain) + codomain.relation_rows()
    f, r = cokernel_structure(IntMatrix.from_rows(rows, codomain.ngens))
    return FgAbGroup(f, r)


def hom_kernel(domain: FgAbGroup, codomain: FgAbGroup, images: Sequence[AbElement]):
    """Kernel of the hom sending basis vector i to ``images[i]``.

    Returns the canonical kernel group and generators of it inside ``domain``.
    """
    n = domain.ngens
    rows = images_matrix(images, codomain) + codomain.relation_rows()
    lk = left_kernel(IntMatrix.from_rows(rows, codomain.ngens))
    gens = [domain.element(v[:n]) for v in lk]
    gens = [g for g in gens if not g.is_zero()]
    K, _, _ = subgroup_structure(domain, gens)
    return K, gens


def subgroup_key(A: FgAbGroup, gens: Iterable[AbElement]) -> tuple:
    """Canonical lattice (HNF) of the preimage of a subgroup in ``Z^n``."""
    rows = [list(g.coords) for g in gens] + A.relation_rows()
    return hermite_rows(rows, A.ngens)


def subgroup_order(A: FgAbGroup, gens: Iterable[AbElement]) -> int | None:
    K, _, _ = subgroup_structure(A, list(gens))
    return K.order


def subgroup_structure(A: FgAbGroup, gens: Sequence[AbElement]):
    """Isomorphism type of ``<gens>`` with inclusion images and a coordinate map.

    Returns ``(K, incl, coords)``: ``K`` canonical, ``incl[i]`` the image in
    ``A`` of canonical generator ``i`` of ``K``, and ``coords(a)`` the element of
    ``K`` corresponding to ``a`` in the subgroup (raises ``Unsolvable`` if
    ``a`` is not in it).
    """
    gens = list(gens)
    k = len(gens)
    stacked = [list(g.coords) for g in gens] + A.relation_rows()
    rel = [v[:k] for v in left_kernel(IntMatrix.from_rows(stacked, A.ngens))] if stacked else []
    q = quotient_by_relations(rel, k)
    incl = []
    for i in range(q.group.ngens):
        c = q.lift(i)
        incl.append(apply_images(gens, A, AbElement(FgAbGroup((), k), c)) if k else A.identity)
    M = IntMatrix.from_rows(stacked, A.ngens).T if stacked else IntMatrix.zeros(A.ngens, 0)

    def coords(a: AbElement) -> AbElement:
        if k == 0:
            if not a.is_zero():
                raise Unsolvable(0, 1, 0)
            return q.group.identity
        x, _ = solve_linear(M, a.coords)
        return q(list(x[:k]))

    return q.group, incl, coords


def hom_group(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    """``Hom(A, B)`` from Hom(Z, B) = B and Hom(Z/m, B) = B[m]."""
    orders = []
    for m in A.factors:
        orders += [gcd(m, d) for d in B.factors]
    for _ in range(A.rank):
        orders += list(B.factors) + [0] * B.rank
    return FgAbGroup.from_cyclic_orders([o for o in orders if o != 1])


def ext_group(A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    """``Ext(A, B)`` from Ext(Z, B) = 0 and Ext(Z/m, B) = B/mB."""
    orders = []
    for m in A.factors:
        orders += [gcd(m, d) for d in B.factors] + [m] * B.rank
    return FgAbGroup.from_cyclic_orders([o for o in orders if o != 1])


@dataclass(frozen=True)
class SubgroupDesc:
    """A subgroup given by generators inside an ambient f.g. abelian group."""

    ambient: FgAbGroup
    generators: tuple
    structure: FgAbGroup
    quotient: FgAbGroup

    @property
    def order(self) -> int | None:
        return self.structure.order

    @cached_property
    def key(self) -> tuple:
        return subgroup_key(self.ambient, self.generators)

    def __eq__(self, other):
        return (isinstance(other, SubgroupDesc) and self.ambient == other.ambient
                and self.key == other.key)

    def __hash__(self):
        return hash((self.ambient, self.key))

    def contains(self, a: AbElement) -> bool:
        return subgroup_key(self.ambient, self.generators + (a,)) == self.key

    def elements(self) -> set:
        if not self.ambient.is_finite:
            raise ValueError("infinite subgroup")
        out = {self.ambient.identity}
        frontier = list(out)
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = x + g
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return out


def describe_subgroup(A: FgAbGroup, gens: Iterable[AbElement]) -> SubgroupDesc:
    gens = tuple(g for g in gens if not g.is_zero())
    K, _, _ = subgroup_structure(A, gens)
    rows = [list(g.coords) for g in gens] + A.relation_rows()
    f, r = cokernel_structure(IntMatrix.from_rows(rows, A.ngens))
    return SubgroupDesc(A, gens, K, FgAbGroup(f, r))


# ---------------------------------------------------------------------------
# symbolic atoms

ATOM_KINDS = ("int", "rat", "cyclic", "pruefer", "padic")


@dataclass(frozen=True, order=True)
class Atom:
    kind: str
    p: int = 0
    k: int = 0

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.kind in ("cyclic", "pruefer", "padic") and not isprime(self.p):
            raise ValueError(f"atom {self.kind} needs a prime, got {self.p}")
        if self.kind == "cyclic" and self.k < 1:
            raise ValueError("cyclic atom needs k >= 1")

    @property
    def divisible(self) -> bool:
        return self.kind in ("rat", "pruefer")

    @property
    def cotorsion(self) -> bool:
        return self.kind != "int"

    def __str__(self):
        return {"int": "Z", "rat": "Q", "cyclic": f"Z/{self.p}^{self.k}",
                "pruefer": f"Z({self.p}^∞)", "padic": f"Z_{self.p}"}[self.kind]

    def to_json(self) -> dict:
        d = {"kind": self.kind}
        if self.p:
            d["p"] = self.p
        if self.kind == "cyclic":
            d["k"] = self.k
        return d


INT, RAT = Atom("int"), Atom("rat")


def pruefer(p: int) -> Atom:
    return Atom("pruefer", p)


def padic(p: int) -> Atom:
    return Atom("padic", p)


def cyclic_atom(p: int, k: int) -> Atom:
    return Atom("cyclic", p, k)


@dataclass(frozen=True)
class SymbolicAbGroup:
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(sorted(self.atoms)))

    @classmethod
    def of(cls, *atoms: Atom) -> SymbolicAbGroup:
        return cls(tuple(atoms))

    @classmethod
    def from_fg(cls, A: FgAbGroup) -> SymbolicAbGroup:
        atoms = [INT] * A.rank
        for d in A.factors:
            atoms += [cyclic_atom(p, e) for p, e in factorint(d).items()]
        return cls(tuple(atoms))

    def __add__(self, other: SymbolicAbGroup) -> SymbolicAbGroup:
        return SymbolicAbGroup(self.atoms + other.atoms)

    @property
    def is_trivial(self) -> bool:
        return not self.atoms

    def __str__(self):
        return " ⊕ ".join(str(a) for a in self.atoms) if self.atoms else "0"

    def to_json(self) -> dict:
        return {"atoms": [a.to_json() for a in self.atoms]}


def as_symbolic(A) -> SymbolicAbGroup:
    return A if isinstance(A, SymbolicAbGroup) else SymbolicAbGroup.from_fg(A)


def _vp(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def _atom_multiple(a: Atom, n: int) -> tuple[list[Atom], list[Atom]]:
    """Isomorphism types of ``n a`` and ``a / n a`` for one atom, n >= 0."""
    if a.divisible:
        return ([a] if n else []), ([] if n else [a])
    if a.kind == "int":
        if n == 0:
            return [], [a]
        return [a], SymbolicAbGroup.from_fg(FgAbGroup.cyclic(n)).atoms
    v = _vp(n, a.p) if n else None
    if a.kind == "padic":
        if n == 0:
            return [], [a]
        return [a], ([cyclic_atom(a.p, v)] if v else [])
    # cyclic p^k
    if n == 0:
        return [], [a]
    v = min(v, a.k)
    sub = [cyclic_atom(a.p, a.k - v)] if a.k > v else []
    quo = [cyclic_atom(a.p, v)] if v else []
    return sub, quo


# ---------------------------------------------------------------------------
# ordinals of the form omega*a + b


@dataclass(frozen=True, order=True)
class Ordinal:
    omega: int = 0
    finite: int = 0

    def __post_init__(self):
        if self.omega < 0 or self.finite < 0:
            raise OrdinalRangeError("ordinals here are omega*a + b with a, b >= 0")

    @property
    def is_finite(self) -> bool:
        return self.omega == 0

    def __str__(self):
        if not self.omega:
            return str(self.finite)
        w = "ω" if self.omega == 1 else f"ω·{self.omega}"
        return w + (f"+{self.finite}" if self.finite else "")

    def to_json(self) -> dict:
        return {"omega": self.omega, "finite": self.finite}


OMEGA = Ordinal(1, 0)


# ---------------------------------------------------------------------------
# nA, p-chains, Ulm chains


def multiples_subgroup(A, n: int):
    """``nA`` inside ``A`` together with ``A / nA``.

    For an f.g. group the result is a :class:`SubgroupDesc`; for a symbolic
    group a pair ``(nA, A/nA)`` of isomorphism types.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if isinstance(A, SymbolicAbGroup):
        sub, quo = [], []
        for a in A.atoms:
            s, q = _atom_multiple(a, n)
            sub += s
            quo += q
        return SymbolicAbGroup(tuple(sub)), SymbolicAbGroup(tuple(quo))
    return describe_subgroup(A, [n * g for g in A.basis()])


@dataclass(frozen=True)
class PChain:
    p: int
    terms: tuple            # p^0 A, ..., p^depth A
    stabilized_at: int | None

    @property
    def stabilized(self) -> bool:
        return self.stabilized_at is not None

    @property
    def orders(self) -> tuple:
        return tuple(getattr(t, "order", None) for t in self.terms)


def p_chain(A, p: int, depth: int) -> PChain:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if isinstance(A, SymbolicAbGroup):
        terms = [multiples_subgroup(A, p ** j)[0] for j in range(depth + 2)]
        # the atom types alone do not see 2^j Z != Z; only p-divisible atoms are fixed
        moving = any(a.kind == "int" or (a.kind == "padic" and a.p == p) for a in A.atoms)
        stab = None
        if not moving:
            stab = next(j for j in range(depth + 2) if j + 1 >= len(terms) or terms[j] == terms[j + 1])
            stab = stab if stab <= depth else None
        return PChain(p, tuple(terms[:depth + 1]), stab)
    terms = []
    cur = list(A.basis())
    for _ in range(depth + 2):
        terms.append(describe_subgroup(A, cur))
        cur = [p * g for g in cur]
    stab = next((j for j in range(depth + 1) if terms[j] == terms[j + 1]), None)
    return PChain(p, tuple(terms[:depth + 1]), stab)


def p_length(A, p: int) -> Ordinal:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    S = as_symbolic(A)
    if any(a.kind == "int" or (a.kind == "padic" and a.p == p) for a in S.atoms):
        return OMEGA
    return Ordinal(0, max((a.k for a in S.atoms if a.kind == "cyclic" and a.p == p), default=0))


@dataclass(frozen=True)
class UlmChain:
    terms: tuple
    ulm_length: Ordinal
    divisible_part: SymbolicAbGroup


def ulm_chain(A, depth: int) -> UlmChain:
    """Ulm subgroups ``A^0 ⊇ A^1 ⊇ ...``; reduced atoms vanish at step one."""
    S = as_symbolic(A)
    D = SymbolicAbGroup(tuple(a for a in S.atoms if a.divisible))
    terms = [S] + [D] * depth
    return UlmChain(tuple(terms), Ordinal(0, 0 if D == S else 1), D)


def divisible_reduced_split(A) -> tuple[SymbolicAbGroup, SymbolicAbGroup]:
    S = as_symbolic(A)
    D = tuple(a for a in S.atoms if a.divisible)
    R = tuple(a for a in S.atoms if not a.divisible)
    return SymbolicAbGroup(D), SymbolicAbGroup(R)


def is_cotorsion(A) -> tuple[bool, str]:
    S = as_symbolic(A)
    bad = [a for a in S.atoms if not a.cotorsion]
    if bad:
        return False, f"Int atom: Ext(Q, {bad[0]}) != 0"
    if not S.atoms:
        return True, "trivial group"
    kinds = sorted({a.kind for a in S.atoms})
    return True, "every atom is cotorsion (" + ", ".join(kinds) + "); closed under finite sums"


# ---------------------------------------------------------------------------
# descending tuples and divisibility witness trees


def des_tuples(lam: int, max_len: int) -> list[tuple]:
    """Strictly descending tuples below ``lam`` of length at most ``max_len``."""
    out = []
    for n in range(min(max_len, lam) + 1):
        out += [tuple(sorted(c, reverse=True)) for c in combinations(range(lam), n)]
    return out


def des_min(mu: tuple, lam: int) -> int:
    return mu[-1] if mu else lam


def des_restrict(mu: tuple, m: int) -> tuple:
    if not 0 <= m <= len(mu):
        raise ValueError("restriction length out of range")
    return mu[:m]


@dataclass
class WitnessTree:
    lam: int
    p: int
    group: FgAbGroup
    nodes: dict = field(default_factory=dict)

    def verify(self) -> list[str]:
        """Return the list of violated conditions (empty when the tree is valid)."""
        problems = []
        chain = p_chain(self.group, self.p, self.lam).terms
        for mu, x in self.nodes.items():
            if any(not (a > b) for a, b in zip((self.lam,) + mu, mu)):
                problems.append(f"{mu} is not descending below {self.lam}")
            if not chain[des_min(mu, self.lam)].contains(x):
                problems.append(f"x_{mu} not in p^{des_min(mu, self.lam)}H")
            if mu and self.p * x != self.nodes[mu[:-1]]:
                problems.append(f"p x_{mu} != x_{mu[:-1]}")
        if set(self.nodes) != set(des_tuples(self.lam, self.lam)):
            problems.append("node set is not des(lambda)")
        return problems


def _p_part(n: int) -> int | None:
    f = factorint(n)
    return next(iter(f)) if len(f) == 1 else None


def divisibility_witness_tree(H: FgAbGroup, x: AbElement, k: int, p: int | None = None) -> WitnessTree:
    """Elements ``x_mu`` over des(k) with ``x_() = x`` and ``p x_mu = x_(mu minus last)``."""
    if not H.is_finite:
        raise ValueError("H must be finite")
    if p is None:
        p = _p_part(H.order) if H.order > 1 else 2
        if p is None:
            raise ValueError("H is not a p-group; pass p explicitly")
    chain = p_chain(H, p, k).terms
    if not chain[k].contains(x):
        raise NotInPkH(f"{x} is not in {p}^{k}H")
    members = [sorted(t.elements(), key=lambda e: e.coords) for t in chain]
    tree = WitnessTree(k, p, H, {(): x})
    for mu in sorted(des_tuples(k, k), key=len)[1:]:
        parent = tree.nodes[mu[:-1]]
        tree.nodes[mu] = next(y for y in members[mu[-1]] if p * y == parent)
    return tree


@dataclass(frozen=True)
class ThreadVerdict:
    p: int
    steps: int
    p_length: Ordinal
    membership_checked: bool
    member: bool | None


def p_divisible_thread_check(A: FgAbGroup, ys: Sequence[AbElement], p: int) -> ThreadVerdict:
    """Check ``y_m = p y_{m+1}``; a long enough thread must start in p^{l_p}A."""
    for m in range(len(ys) - 1):
        if ys[m] != p * ys[m + 1]:
            raise ThreadBroken(m)
    lp = p_length(A, p)
    steps = len(ys) - 1
    if not A.is_finite or not lp.is_finite or steps < lp.finite:
        return ThreadVerdict(p, steps, lp, False, None)
    top = p_chain(A, p, lp.finite).terms[lp.finite]
    return ThreadVerdict(p, steps, lp, True, top.contains(ys[0]))


# ---------------------------------------------------------------------------
# finite abelian groups from element orders


def from_elementary_divisors(exps: dict, rank: int = 0) -> FgAbGroup:
    """Invariant factors from prime -> list of exponents."""
    cols = {p: sorted(es, reverse=True) for p, es in exps.items() if es}
    k = max((len(es) for es in cols.values()), default=0)
    factors = []
    for i in range(k):
        factors.append(prod(p ** es[i] for p, es in cols.items() if i < len(es)))
    return FgAbGroup(tuple(reversed(factors)), rank)


def invariants_from_orders(orders: Iterable[int]) -> FgAbGroup:
    """Isomorphism type of a finite abelian group from its element orders.

    Uses ``|A[p^j]| = p^(number of parts, counted with min(part, j))``.
    """
    counts = Counter(orders)
    n = sum(counts.values())
    exps = {}
    for p, e in factorint(n).items():
        prev = 0
        parts_ge = []
        for j in range(1, e + 1):
            size = sum(c for o, c in counts.items() if (p ** j) % o == 0)
            logsz = _vp(size, p)
            parts_ge.append(logsz - prev)
            prev = logsz
        parts = []
        for j in range(len(parts_ge)):
            nxt = parts_ge[j + 1] if j + 1 < len(parts_ge) else 0
            parts += [j + 1] * (parts_ge[j] - nxt)
        exps[p] = parts
    return from_elementary_divisors(exps)


def abelian_groups_of_order(n: int) -> list[FgAbGroup]:
    """All isomorphism types of abelian groups of order ``n``."""
    def partitions(e, maxpart=None):
        if e == 0:
            yield []
            return
        maxpart = e if maxpart is None else maxpart
        for first in range(min(e, maxpart), 0, -1):
            for rest in partitions(e - first, first):
                yield [first] + rest

    items = list(factorint(n).items()) if n > 1 else []
    out = []
    for combo in product(*(list(partitions(e)) for _, e in items)):
        out.append(from_elementary_divisors({p: parts for (p, _), parts in zip(items, combo)}))
    return out
