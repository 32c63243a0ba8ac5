"""Comparison maps between abelianizations of products and products of
abelianizations, commutator subgroups of products, and lower-bound evidence
for commutator lengths of the words ``[a, b]^(2n+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .abgroup import FgAbGroup, direct_sum, hom_cokernel, hom_kernel
from .commutators import (abelianization, abelianization_by_cosets, commutator_length_free,
                          commutator_subgroup, commutator_width_finite, commutator_word,
                          quotient_lower_bound)
from .groups import FiniteGroup, FreeGroup, FreeWord, ProductGroup


@dataclass(frozen=True)
class KernelReport:
    N: int
    source: FgAbGroup         # Ab(H_0 x ... x H_N)
    target: FgAbGroup         # Ab(H_0) + ... + Ab(H_N)
    matrix: tuple             # images of the canonical generators of source
    kernel: FgAbGroup
    cokernel: FgAbGroup

    @property
    def is_iso(self) -> bool:
        return self.kernel.is_trivial and self.cokernel.is_trivial

    def to_json(self) -> dict:
        return {"N": self.N, "source": str(self.source), "target": str(self.target),
                "matrix": [list(r) for r in self.matrix], "kernel": str(self.kernel),
                "cokernel": str(self.cokernel), "iso": self.is_iso}


def rho_window(components: Sequence) -> KernelReport:
    """The map ``Ab(∏ H_i) -> ⊕ Ab(H_i)`` induced by the projections.

    The source is computed from the product group directly (cosets of its
    own commutator subgroup), not componentwise, so the comparison is not
    circular.
    """
    comps = list(components)
    P = ProductGroup(comps)
    src, pi = abelianization_by_cosets(P)
    parts = [abelianization(H) for H in comps]
    tgt, inject = direct_sum([a for a, _ in parts])
    need = {g: None for g in src.basis()}
    missing = len(need)
    for x in P.elements():
        v = pi(x)
        if v in need and need[v] is None:
            need[v] = x
            missing -= 1
            if not missing:
                break
    images = []
    for g in src.basis():
        x = need[g]
        images.append(inject([p(a) for (_, p), a in zip(parts, x)]))
    ker, _ = hom_kernel(src, tgt, images)
    cok = hom_cokernel(src, tgt, images)
    return KernelReport(len(comps) - 1, src, tgt, tuple(tuple(e.coords) for e in images), ker, cok)


@dataclass(frozen=True)
class PresentationComparison:
    N: int
    product_of_commutators: int      # |∏ C(H_i)|
    commutator_of_product: int       # |C(∏ H_i)|
    equal: bool
    widths: tuple
    explanation: str

    def to_json(self) -> dict:
        return {"N": self.N, "order_prod_C": self.product_of_commutators,
                "order_C_prod": self.commutator_of_product, "equal": self.equal,
                "widths": list(self.widths), "explanation": self.explanation}


def kernel_presentation_window(components: Sequence, N: int | None = None) -> PresentationComparison:
    """Compare ``∏ C(H_i)`` with ``C(∏ H_i)`` for ``i <= N`` by element sets."""
    comps = list(components)
    if N is not None:
        comps = [comps[min(i, len(comps) - 1)] for i in range(N + 1)]
    P = ProductGroup(comps)
    Cs = [commutator_subgroup(H) for H in comps]
    left = set(product(*(C.members for C in Cs)))
    right = commutator_subgroup(P).members
    widths = tuple(commutator_width_finite(H) for H in comps)
    w = max(widths) if widths else 0
    expl = (f"every coordinate is a product of at most {w} commutators; padding shorter "
            f"expressions with identities writes each element of the product of commutator "
            f"subgroups as {w} commutators of the product, so the two subgroups agree")
    return PresentationComparison(len(comps) - 1, len(left), len(right), left == right, widths, expl)


# ---------------------------------------------------------------------------
# width witnesses


def naive_is_commutator(w: FreeWord) -> bool:
    """Independent Wicks scan: rebuild ``A B C A^-1 B^-1 C^-1`` for every split and rotation."""
    if any(w.exponent_sums()):
        return False
    core, _ = w.cyclic_reduction()
    c = list(core.letters)
    n = len(c)
    if n == 0:
        return True
    if n % 2:
        return False
    h = n // 2

    def inv(seq):
        return [-x for x in reversed(seq)]

    for k in range(n):
        r = c[k:] + c[:k]
        for a in range(h + 1):
            for b in range(h - a + 1):
                A, B, C = r[:a], r[a:a + b], r[a + b:h]
                if A + B + C + inv(A) + inv(B) + inv(C) == r:
                    return True
    return False


@dataclass
class WidthWitness:
    group: FreeGroup
    rule: str
    levels: list                  # dicts: n, word, lower, upper, method
    verified: bool
    conclusion: str

    def to_json(self) -> dict:
        return {"group": str(self.group), "rule": self.rule, "levels": self.levels,
                "verified": self.verified, "conclusion": self.conclusion}


def witness_word(n: int) -> FreeWord:
    return commutator_word(FreeWord.parse("a"), FreeWord.parse("b")) ** (2 * n + 1)


def unbounded_cl_witness(K: int, factor_len_bound: int = 4,
                         quotients: Sequence[FiniteGroup] | None = None,
                         words: Sequence[FreeWord] | None = None) -> WidthWitness:
    """Sound commutator-length bounds for ``h_n = [a,b]^(2n+1)``, ``n <= K``.

    ``words`` replaces the default family; such words are certified only as
    far as the same methods reach.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    family = list(words) if words is not None else [witness_word(n) for n in range(K + 1)]
    levels = []
    ok = True
    for n, h in enumerate(family):
        res = commutator_length_free(h, max_n=2, factor_len_bound=factor_len_bound, quotients=quotients)
        naive = naive_is_commutator(h)
        if (res.lower >= 2) == naive and not h.is_identity():
            ok = False
        method = "Wicks form found" if res.lower <= 1 else "no Wicks form"
        if res.lower > 2:
            method = "finite quotient"
            qb, _ = quotient_lower_bound(h, quotients or [])
            if qb < res.lower:
                ok = False
        levels.append({"n": n, "word": str(h), "length": len(h), "lower": res.lower,
                       "upper": res.upper, "status": res.status, "method": method,
                       "recheck": "commutator" if naive else "not a commutator"})
    best = max(l["lower"] for l in levels)
    conclusion = (f"certified lower bounds reach {best}; a bounded commutator width k would need "
                  f"every certificate to stay <= k, and unboundedness is not certified beyond this")
    return WidthWitness(FreeGroup(2), "[a,b]^(2n+1)" if words is None else "custom",
                        levels, ok, conclusion)
