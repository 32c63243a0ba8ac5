"""Abelianizations of small groups, computed two ways.

The coset route quotients the Cayley table by the commutator subgroup; the
presentation route feeds the multiplication table, read as relations, to
Smith normal form.  They should always agree.
"""

from towerlab import catalog
from towerlab.commutators import (abelianization_by_cosets, abelianization_by_presentation,
                                  commutator_subgroup, commutator_width_finite)

print(f"{'group':<10}{'order':>6}{'|C(G)|':>8}{'width':>7}  Ab(G)")
for name in catalog.catalog_names():
    G = catalog.get(name)
    A, _ = abelianization_by_cosets(G)
    assert A == abelianization_by_presentation(G)
    C = commutator_subgroup(G)
    print(f"{name:<10}{G.order:>6}{len(C.members):>8}{commutator_width_finite(G):>7}  {A}")
