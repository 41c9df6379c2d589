"""Thresholding greedy algorithm for Haar expansions.

Coefficients are ordered by decreasing magnitude; equal magnitudes are ordered
by the natural (Schauder) rank of their index, which makes the greedy ordering
a well-defined function of the expansion.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .dyadic import DyadicIndex, HaarExpansion, natural_rank, norm


@dataclass(frozen=True)
class GreedyOrdering:
    indices: tuple
    magnitudes: np.ndarray  # a_1^* >= a_2^* >= ...

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def rearrangement(self, m: int) -> float:
        """a_m^*(f) with 1-based ``m``; zero past the end of the support."""
        if m < 1:
            raise ValueError("m must be >= 1")
        return float(self.magnitudes[m - 1]) if m <= len(self.indices) else 0.0


def greedy_ordering(f: HaarExpansion) -> GreedyOrdering:
    order = sorted(f.coeffs, key=lambda idx: (-abs(f.coeffs[idx]), natural_rank(idx)))
    mags = np.array([abs(f.coeffs[idx]) for idx in order], dtype=float)
    return GreedyOrdering(tuple(order), mags)


def greedy_set(f: HaarExpansion, m: int) -> tuple:
    if m < 0:
        raise ValueError("m must be nonnegative")
    return greedy_ordering(f).indices[:m]


def greedy_sum(f: HaarExpansion, m: int) -> HaarExpansion:
    """G_m(f): keep the ``m`` coefficients that come first in the greedy ordering."""
    return project(f, greedy_set(f, m))


def project(f: HaarExpansion, A: Iterable[DyadicIndex]) -> HaarExpansion:
    """Coordinate projection S_A f."""
    A = set(A)
    return HaarExpansion(f.p, {idx: c for idx, c in f.coeffs.items() if idx in A})


def sign_flip(f: HaarExpansion, signs: Mapping[DyadicIndex, int]) -> HaarExpansion:
    """Multiply each coefficient by its sign in ``signs`` (must cover supp f)."""
    out = {}
    for idx, c in f.coeffs.items():
        if idx not in signs:
            raise KeyError(f"sign pattern is missing supported index {idx!r}")
        e = signs[idx]
        if e not in (1, -1):
            raise ValueError(f"signs must be +1 or -1, got {e!r} at {idx!r}")
        out[idx] = e * c
    return HaarExpansion(f.p, out)


def lebesgue_ratio(
    f: HaarExpansion,
    m: int,
    A: Sequence[DyadicIndex],
    a: Sequence[float],
) -> float:
    """||f - G_m f|| / ||f - sum_{j in A} a_j h_j||, a lower bound for L_m."""
    A = list(A)
    if len(A) != m or len(set(A)) != m:
        raise ValueError(f"competitor set must contain exactly m={m} distinct indices")
    if len(a) != m:
        raise ValueError("one coefficient per competitor index is required")
    competitor = f - HaarExpansion(f.p, dict(zip(A, a)))
    denom = norm(competitor)
    if denom == 0.0:
        raise ZeroDivisionError("exact competitor: f is itself an m-term combination on A")
    return norm(f - greedy_sum(f, m)) / denom
