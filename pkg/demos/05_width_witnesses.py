"""Finite windows of Ab(prod H_n) against prod Ab(H_n), and growing commutator lengths.

On every finite window the comparison map is an isomorphism, so sizes
alone never reveal a kernel.  The evidence for a kernel in the limit is a
family of commutator-subgroup elements whose commutator lengths are not
bounded: here the odd powers [a,b]^(2n+1), of which only the first is a
single commutator.
"""

from towerlab import catalog
from towerlab.kernel import kernel_presentation_window, rho_window, unbounded_cl_witness

for names in (["S3", "S3"], ["Q8", "S3"], ["A4", "Z2"], ["Z4", "Z9"]):
    comps = [catalog.get(n) for n in names]
    r = rho_window(comps)
    p = kernel_presentation_window(comps)
    print(f"{' x '.join(names):<8} Ab = {str(r.source):<20} iso {r.is_iso}; "
          f"|prod C| = {p.product_of_commutators}, |C(prod)| = {p.commutator_of_product}")

W = unbounded_cl_witness(3, factor_len_bound=4)
for lv in W.levels:
    print(f"h_{lv['n']} (length {lv['length']:>2}): cl in [{lv['lower']}, {lv['upper']}]  {lv['method']}")
print(W.conclusion)
