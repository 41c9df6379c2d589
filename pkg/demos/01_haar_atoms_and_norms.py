"""Haar atoms in L^p and exact norms of finite expansions.

Each atom is -2^{n/p} on the left half of its dyadic interval and +2^{n/p}
on the right half, so every atom has unit L^p norm.  A finite expansion is
a step function on a uniform dyadic grid, and its norm is computed exactly.
"""
import numpy as np

from haargc import CONSTANT, HaarExpansion, Interval, norm, synthesize
from haargc.dyadic import analyze, atom_values

p = 3.0

# A single atom on [1/4, 1/2) sampled on 8 cells.
print("atom (2,1) at depth 3:", atom_values(Interval(2, 1), p, 3))
for idx in (CONSTANT, Interval(0, 0), Interval(4, 11)):
    print(f"||h_{idx}||_{p:g} =", norm(HaarExpansion(p, {idx: 1.0})))

# A small expansion, its step function and the round trip back to coefficients.
f = HaarExpansion(p, {CONSTANT: 0.5, Interval(0, 0): -2.0, Interval(1, 0): 0.5})
s = synthesize(f)
print("\nf =", f)
print("step values on depth", s.depth, ":", np.round(s.values, 4))
print("||f||_3 =", norm(f))
print("round trip equal:", analyze(s, p).allclose(f))

# At p=2 the atoms are orthonormal, so the norm is the l^2 norm of coefficients.
g = HaarExpansion(2.0, f.coeffs)
print("\np=2: ||f|| =", norm(g), " sqrt(sum c^2) =", np.sqrt(sum(c * c for c in f.coeffs.values())))
