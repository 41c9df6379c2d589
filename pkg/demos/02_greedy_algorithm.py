"""The greedy algorithm: keep the m largest coefficients.

Ties in magnitude are broken by the natural order of the index tree
(constant first, then level by level, left to right).  For p=2 the greedy
sum is the best m-term approximation; for other p it can lose against a
well chosen competitor, which is what the Lebesgue ratio measures.
"""
import itertools

from haargc import CONSTANT, HaarExpansion, Interval, norm
from haargc.greedy import greedy_ordering, greedy_sum, lebesgue_ratio, project, sign_flip

f = HaarExpansion(3.0, {CONSTANT: 0.5, Interval(0, 0): -2.0, Interval(1, 0): 0.5,
                        Interval(2, 3): 1.2})
order = greedy_ordering(f)
print("ordering:", order.indices)
print("rearranged magnitudes:", order.magnitudes)
for m in range(len(f) + 1):
    g = greedy_sum(f, m)
    best = min(norm(f - project(f, A)) for A in itertools.combinations(sorted(f.support), m))
    print(f"m={m}: ||f - G_m f|| = {norm(f - g):.6f}   best projection error = {best:.6f}")

# Sign changes of the coefficients: an isometry at p=2, bounded by p*-1 otherwise.
eps = {i: (-1) ** k for k, i in enumerate(sorted(f.support))}
print("\n||M_eps f|| / ||f|| =", norm(sign_flip(f, eps)) / norm(f), "(bound p*-1 = 2)")

# Greedy against an arbitrary 2-term competitor.
A, a = [Interval(0, 0), Interval(2, 3)], [-2.0, 1.0]
print("Lebesgue ratio vs competitor:", lebesgue_ratio(f, 2, A, a))
