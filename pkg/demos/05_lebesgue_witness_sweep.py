"""A competitor beating the greedy sum, and a sweep of the greedy bracket.

The witness mixes a nested chain with a disjoint family whose coefficients
are slightly larger, so the greedy algorithm picks the family while the
competitor keeps the chain.  The ratio approaches d_p as m grows.
"""
import numpy as np

from haargc import closed_form as cf
from haargc.cli import sweep_rows
from haargc.estimators import lebesgue_witness

for p in (1.5, 4.0, 8.0):
    bounds = [lebesgue_witness(m, p, 0.01, method="closed").bound for m in (4, 16, 256, 4096)]
    print(f"p={p:g}: witness bounds {np.round(bounds, 4)}  d_p/1.01 = {cf.d_const(p) / 1.01:.4f}")

print("\n   p      p*   lower/p*  upper/p*  witness(m=256)")
for r in sweep_rows([1.05, 1.25, 2, 4, 16, 64], m=256):
    print(f"{r['p']:5g} {r['p_star']:7.3f} {r['cg_lower_over_pstar']:9.4f}"
          f" {r['cg_upper_over_pstar']:9.4f} {r['witness_bound']:14.4f}")
