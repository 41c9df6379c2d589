"""Dyadic intervals, L_p-normalized Haar atoms and exact norms of step functions.

A finite Haar polynomial is piecewise constant on the uniform dyadic grid of
depth N as soon as N exceeds the finest level in its support by one, so every
norm and pairing here is an exact finite sum over grid cells.

Conventions:
  CONSTANT            the function identically 1 on [0, 1)
  Interval(n, k)      I = [k 2^-n, (k+1) 2^-n), 0 <= k < 2^n
  h_I^(p)             -|I|^(-1/p) on the left half of I, +|I|^(-1/p) on the right
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

MAX_DEPTH = 20


@dataclass(frozen=True, order=False)
class DyadicIndex:
    """Identifier of a Haar atom. ``level == -1`` encodes the constant atom."""

    level: int
    offset: int = 0

    def __post_init__(self):
        if self.level == -1:
            if self.offset != 0:
                raise ValueError("constant atom has no offset")
            return
        if self.level < 0:
            raise ValueError(f"level must be >= 0, got {self.level}")
        if not 0 <= self.offset < (1 << self.level):
            raise ValueError(f"offset {self.offset} out of range for level {self.level}")

    @property
    def is_constant(self) -> bool:
        return self.level == -1

    @property
    def measure(self) -> float:
        return 1.0 if self.is_constant else math.ldexp(1.0, -self.level)

    @property
    def rank(self) -> int:
        return natural_rank(self)

    def contains(self, other: "DyadicIndex") -> bool:
        """Support inclusion of the underlying intervals."""
        if self.is_constant:
            return True
        if other.is_constant or other.level < self.level:
            return False
        return other.offset >> (other.level - self.level) == self.offset

    def __lt__(self, other: "DyadicIndex") -> bool:
        return natural_rank(self) < natural_rank(other)

    def __repr__(self) -> str:
        if self.is_constant:
            return "CONSTANT"
        return f"Interval({self.level}, {self.offset})"


CONSTANT = DyadicIndex(-1, 0)


def Interval(level: int, offset: int) -> DyadicIndex:
    return DyadicIndex(level, offset)


def natural_rank(idx: DyadicIndex) -> int:
    """Position in the Schauder order: CONSTANT -> 0, Interval(n, k) -> 2^n + k."""
    if idx.is_constant:
        return 0
    return (1 << idx.level) + idx.offset


def from_rank(rank: int) -> DyadicIndex:
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    if rank == 0:
        return CONSTANT
    level = rank.bit_length() - 1
    return DyadicIndex(level, rank - (1 << level))


@dataclass(frozen=True)
class Exponent:
    """An exponent 1 < p < inf with its conjugate-derived companions."""

    p: float

    def __post_init__(self):
        check_exponent(self.p)

    @property
    def conjugate(self) -> float:
        return conjugate(self.p)

    @property
    def star(self) -> float:
        return max(self.p, self.conjugate)

    @property
    def sharp(self) -> float:
        return min(self.p, self.conjugate)

    def __float__(self) -> float:
        return float(self.p)


def check_exponent(p) -> float:
    """Return ``p`` as a float, rejecting anything outside (1, inf)."""
    p = float(p)
    if not math.isfinite(p) or p <= 1.0:
        raise ValueError(f"exponent must satisfy 1 < p < inf, got {p}")
    return p


def conjugate(p) -> float:
    p = check_exponent(p)
    return p / (p - 1.0)


def pow2(x):
    """2**x via exp(x ln 2), vectorized."""
    return np.exp(np.asarray(x, dtype=float) * math.log(2.0))


@dataclass(frozen=True)
class UniformStepFunction:
    """Values of a function on the 2^depth cells of the uniform dyadic grid."""

    depth: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.shape[0] != 1 << self.depth:
            raise ValueError(
                f"expected {1 << self.depth} values for depth {self.depth}, got {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    def refine(self, depth: int) -> "UniformStepFunction":
        if depth < self.depth:
            raise ValueError("cannot refine to a coarser grid")
        return UniformStepFunction(depth, np.repeat(self.values, 1 << (depth - self.depth)))


@dataclass(frozen=True, eq=False)
class HaarExpansion:
    """Finitely supported Haar coefficient family at exponent ``p``.

    Zero coefficients are never stored.
    """

    p: float
    coeffs: Mapping[DyadicIndex, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p))
        clean = {}
        for idx, c in dict(self.coeffs).items():
            if not isinstance(idx, DyadicIndex):
                raise TypeError(f"expected DyadicIndex, got {idx!r}")
            c = float(c)
            if c != 0.0:
                clean[idx] = c
        object.__setattr__(self, "coeffs", clean)

    @property
    def support(self) -> frozenset:
        return frozenset(self.coeffs)

    @property
    def max_level(self) -> int:
        """Finest level in the support; -1 when only the constant (or nothing) is present."""
        return max((idx.level for idx in self.coeffs), default=-1)

    @property
    def min_depth(self) -> int:
        return self.max_level + 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, idx):
        return self.coeffs.get(idx, 0.0)

    def __eq__(self, other):
        if not isinstance(other, HaarExpansion):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __add__(self, other: "HaarExpansion") -> "HaarExpansion":
        self._check_same_p(other)
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out.get(idx, 0.0) + c
        return HaarExpansion(self.p, out)

    def __sub__(self, other: "HaarExpansion") -> "HaarExpansion":
        return self + (-other)

    def __neg__(self) -> "HaarExpansion":
        return self.scale(-1.0)

    def scale(self, factor: float) -> "HaarExpansion":
        return HaarExpansion(self.p, {idx: factor * c for idx, c in self.coeffs.items()})

    def __rmul__(self, factor: float) -> "HaarExpansion":
        return self.scale(factor)

    def allclose(self, other: "HaarExpansion", tol: float = 1e-12) -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        return self.p == other.p and all(abs(self[k] - other[k]) <= tol for k in keys)

    def _check_same_p(self, other):
        if self.p != other.p:
            raise ValueError(f"exponent mismatch: {self.p} vs {other.p}")


def atom_values(idx: DyadicIndex, p: float, depth: int) -> np.ndarray:
    """Grid values of the single atom h_idx^(p) at the given depth."""
    out = np.zeros(1 << depth)
    _add_atom(out, idx, 1.0, check_exponent(p), depth)
    return out


def _add_atom(values, idx, c, p, depth):
    if idx.is_constant:
        values += c
        return
    if depth < idx.level + 1:
        raise ValueError(
            f"insufficient resolution: depth {depth} cannot resolve level {idx.level}"
        )
    block = 1 << (depth - idx.level)
    start = idx.offset * block
    mid = start + block // 2
    amp = c * math.exp(idx.level * math.log(2.0) / p)
    values[start:mid] -= amp
    values[mid:start + block] += amp


def synthesize(f: HaarExpansion, depth: int | None = None) -> UniformStepFunction:
    """Pointwise sum of the atoms of ``f`` on the grid of the given depth.

    ``depth`` defaults to the minimal exact resolution ``1 + f.max_level``.
    """
    if depth is None:
        depth = f.min_depth
    if depth < f.min_depth:
        raise ValueError(
            f"insufficient resolution: depth {depth} < required {f.min_depth}"
        )
    if depth > MAX_DEPTH:
        raise ValueError(f"depth {depth} exceeds the grid cap {MAX_DEPTH}")
    values = np.zeros(1 << depth)
    for idx, c in f.coeffs.items():
        _add_atom(values, idx, c, f.p, depth)
    return UniformStepFunction(depth, values)


def atom_matrix(indices: Iterable[DyadicIndex], p: float, depth: int) -> np.ndarray:
    """Rows are the grid values of h_idx^(p), one per index."""
    indices = list(indices)
    p = check_exponent(p)
    out = np.zeros((len(indices), 1 << depth))
    for row, idx in zip(out, indices):
        _add_atom(row, idx, 1.0, p, depth)
    return out


def lp_norm(s: UniformStepFunction, p) -> float:
    """Exact L_p norm of a step function; ``p = inf`` gives the sup norm."""
    v = np.abs(s.values)
    if p == math.inf:
        return float(v.max(initial=0.0))
    p = check_exponent(p)
    return float(np.mean(v ** p) ** (1.0 / p))


def cell_lp_norms(values: np.ndarray, p: float) -> np.ndarray:
    """Row-wise L_p norms of a stack of grid vectors (last axis = cells)."""
    return np.mean(np.abs(values) ** p, axis=-1) ** (1.0 / p)


def norm(f: HaarExpansion, depth: int | None = None) -> float:
    """L_p norm of a Haar expansion, evaluated at its own exponent."""
    if not f.coeffs:
        return 0.0
    return lp_norm(synthesize(f, depth), f.p)


def pairing(f: UniformStepFunction, g: UniformStepFunction) -> float:
    """The integral of f*g over [0, 1); the coarser grid is refined as needed."""
    depth = max(f.depth, g.depth)
    u = f.refine(depth).values
    v = g.refine(depth).values
    return float(np.dot(u, v) * math.ldexp(1.0, -depth))


def analyze(s: UniformStepFunction, p, tol: float = 1e-12) -> HaarExpansion:
    """Haar coefficients of a step function, c_I = <s, h_I^(p')>.

    Coefficients whose magnitude is below ``tol * max(1, max|s|)`` are
    treated as zero.
    """
    p = check_exponent(p)
    q = conjugate(p)
    vals = s.values
    n_cells = vals.shape[0]
    cell = 1.0 / n_cells
    cutoff = tol * max(1.0, float(np.abs(vals).max(initial=0.0)))
    coeffs = {}
    mean = float(vals.mean())
    if abs(mean) > cutoff:
        coeffs[CONSTANT] = mean
    for level in range(s.depth):
        halves = vals.reshape(1 << level, 2, -1).sum(axis=2)
        c = (halves[:, 1] - halves[:, 0]) * cell * math.exp(level * math.log(2.0) / q)
        for k in np.flatnonzero(np.abs(c) > cutoff):
            coeffs[DyadicIndex(level, int(k))] = float(c[k])
    return HaarExpansion(p, coeffs)


def indices_up_to(depth: int) -> list:
    """CONSTANT followed by every interval of level <= depth, in natural order."""
    return [from_rank(r) for r in range(1 << (depth + 1))]
