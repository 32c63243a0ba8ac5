"""Solving g_n = f_n + (n+1) g_{n+1} modulo C(lim G) on a window.

G is the product tower S3 x S3 x ...; its levelwise commutator subgroups
are A3^(n+1).  Each f_n is lifted to vanish below level n, the grid of
partial solutions is filled from the top, and every quotient
g_n^-1 f_n g_{n+1}^(n+1) is certified to be a bounded product of
commutators in the limit.
"""

import time

from towerlab import catalog
from towerlab.commutators import commutator_subgroup
from towerlab.eqsolve import CommutatorLiftOracle, recursion_grid
from towerlab.tower import Thread, Tower, commutator_tower

L = 6
S3 = catalog.get("S3")
G = Tower.product_accumulation([S3])
H = commutator_tower(G, L)
F = CommutatorLiftOracle(G, H, L)
c = min(x for x in commutator_subgroup(S3).members if S3.element_order(x) == 3)
f = [Thread(tuple(tuple([c] * (l + 1)) for l in range(L + 1))) for _ in range(L + 1)]
t0 = time.perf_counter()
grid = recursion_grid(H, F, f, L)
print(f"levels |H_l| = {[H.group(l).order for l in range(L + 1)]}")
print(f"checks {grid.checks()} in {time.perf_counter() - t0:.2f}s")
for n in range(3):
    print(f"g_{n} top entry {grid.thread(n).values[-1]}, certificate {grid.quotient_certificates[n]}")
