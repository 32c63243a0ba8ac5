"""Image chains, limits and lim^1 on three towers.

A constant tower has surjective maps, so its images never move.  Doubling
on Z gives the strictly shrinking chain 2^k Z with no stabilization, and
the window limit only sees multiples of the top power of two.  The n+1
tower on Z has lim^1 equal to Ext(Q, Z), which is nonzero, while on Z/6 the
images die after finitely many steps.
"""

from towerlab.abgroup import Z, FgAbGroup
from towerlab.tower import (Tower, image_stabilization, lim1_classify, lim1_window_surjectivity,
                            windowed_lim)

towers = {
    "constant Z/2": Tower.constant(FgAbGroup((2,))),
    "Z, times 2": Tower.multiplication(Z, 2),
    "Z, times n+1": Tower.multiplication(Z),
    "Z/6, times n+1": Tower.multiplication(FgAbGroup((6,))),
}
for name, T in towers.items():
    r = image_stabilization(T, 0, 5)
    print(f"{name}: images in G_0 {[str(S.quotient) for S in r.images]} -> {r.verdict}")
    if r.certificate:
        print(f"   certificate: {r.certificate}")
    W = windowed_lim(T, 4)
    print(f"   window lim (N=4) generated by {[tuple(map(str, th.values)) for th in W.generators]}")
    s = lim1_window_surjectivity(T, 3)
    print(f"   boundary onto the window: {s.passed} ({s.mode}, {s.targets_checked} targets)")
    c = lim1_classify(T)
    print(f"   lim^1: {c.kind}, zero={c.zero}; {c.certificate}")
