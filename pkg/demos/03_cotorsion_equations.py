"""The system x_n - (n+1) x_{n+1} = a_n over Z/6 and over Z.

Over a finite group any e consecutive multipliers contain a multiple of the
exponent e, so a closed formula solves every right-hand side.  Over Z with
a_n = 1, back-substitution forces x_0 = sum_{k<N} k! (mod N!); once that
class avoids [-B, B] no solution with |x_0| <= B exists.
"""

from towerlab.abgroup import Z, FgAbGroup
from towerlab.eqsolve import divisibility_system_global

Z6 = FgAbGroup((6,))
for seed in range(3):
    r = divisibility_system_global(Z6, {"random": seed}, window=6)
    print(f"Z/6, rhs seed {seed}: {r.kind}, x_0..x_6 = {[v.coords[0] for v in r.window]}")

for bound in (10, 10 ** 3, 10 ** 6, 10 ** 9):
    r = divisibility_system_global(Z, "ones", bound=bound, depth=30)
    print(f"Z, bound {bound:>10}: no solution, N = {r.N}, x_0 = {r.residue} mod {r.modulus}")
