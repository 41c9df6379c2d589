"""Closed-form constants for the Haar system in L^p.

K_u is the unconditional constant, d_p and D_p bound the democracy-type
constants, and the greedy constant is bracketed between a lower and an
upper bound.  The two model configurations are a disjoint family (norm
exactly m^{1/p}) and a nested chain of intervals sharing a left endpoint.
"""
import numpy as np

from haargc import closed_form as cf

print(f"{'p':>6} {'K_u':>8} {'d_p':>9} {'D_p':>10} {'cg_lower':>9} {'cg_upper':>10}")
for p in (1.1, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0):
    k = cf.constants(p)
    b = cf.cg_bounds(p)
    print(f"{p:6g} {k.K_u:8.4f} {k.d_p:9.5f} {k.D_p:10.4f} {b.lower.value:9.5f} {b.upper.value:10.4f}")

# Disjoint family versus nested chain at p=4: the chain grows faster by a factor d_p.
p = 4.0
m = np.array([1, 4, 16, 256, 4096, 10 ** 6])
chain = cf.chain_norms(10 ** 6, p)[m - 1]
flat = m ** (1 / p)
lo, hi = cf.chain_sandwich(m, p)
print("\nm, chain/flat, sandwich:")
for row in zip(m, chain / flat, lo / flat, hi / flat):
    print("  {:>8d}  {:.6f}  [{:.6f}, {:.6f}]".format(*row))
print("limit d_p =", cf.d_const(p))
