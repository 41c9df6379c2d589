"""Exhaustive search for extremal configurations on a finite index tree.

All searches enumerate every admissible choice of indices (and signs) up
to a fixed depth, so the results are rigorous lower bounds for the
corresponding constants over the whole system.
"""
from haargc import closed_form as cf
from haargc.estimators import (
    IndexUniverse,
    bm_search,
    democracy_search,
    fundamental_search,
)

U = IndexUniverse(3)
p = 4.0
print(f"universe of depth {U.depth}: {len(U)} indices, p = {p:g}")
for m in range(1, 5):
    phi = fundamental_search(U, m, p, signed=True)
    print(f"m={m}: phi_eps = {phi.value:.6f}  (upper {cf.super_fundamental_upper(m, p):.4f})"
          f"  enumerated {phi.enumerated_count}")

for m in (2, 3):
    bm = bm_search(U, m, p)
    print(f"\nm={m}: bi-democracy B_m >= {bm.value:.6f}  (D_p = {cf.D_const(p):.4f})")
    for signed in (False, True):
        for disjoint in (False, True):
            r = democracy_search(U, m, p, signed, disjoint)
            print(f"  {r.estimate.name:9s} >= {r.value:.6f}  witness A={r.witness['A']}")
