"""p-chains, p-length and divisibility witness trees in finite abelian groups.

p^k A shrinks until it reaches the part of A prime to p; the step where it
stops is the p-length.  A witness tree for x in p^k A records, along every
strictly descending tuple below k, a chain of p-th roots that ends at x.
"""

from towerlab.abgroup import (FgAbGroup, SymbolicAbGroup, Atom, abelian_groups_of_order,
                              divisibility_witness_tree, p_chain, p_length, padic)

for A in abelian_groups_of_order(16):
    ch = p_chain(A, 2, 4)
    print(f"{str(A):<24} orders {ch.orders}  l_2 = {p_length(A, 2)}")

H = FgAbGroup.cyclic(8)
T = divisibility_witness_tree(H, H.element([4]), 2)
for mu, x in sorted(T.nodes.items(), key=lambda kv: (len(kv[0]), kv[0])):
    print(f"x_{mu} = {x.coords[0]}")
print("problems:", T.verify())

S = SymbolicAbGroup.of(Atom("rat"), padic(2), Atom("cyclic", 2, 3))
print(f"{S}: l_2 = {p_length(S, 2)}")
