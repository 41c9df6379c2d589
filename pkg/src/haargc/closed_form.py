"""Closed-form constants and extremal constructions for the Haar system in L_p.

Everything here is a formula evaluation; nothing searches.  Two families of
±1 sums drive the lower estimates:

  disjoint family   m atoms with pairwise disjoint supports, norm m^(1/p)
  nested chain      atoms on [0,1), [0,1/2), [0,1/4), ... whose norm grows like
                    m^(1/p) (2^(1/p')-1)/(2^(1/p)-1)

and the ratio of the two tends to d_p, the democracy lower bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dyadic import DyadicIndex, check_exponent, conjugate

KAPPA = 2  # real scalars


@dataclass(frozen=True)
class ExponentProfile:
    p: float
    p_prime: float
    p_star: float
    p_sharp: float


@dataclass(frozen=True)
class ConstantBound:
    name: str
    value: float
    kind: str  # "exact" | "lower" | "upper"
    source: str

    def __post_init__(self):
        if self.kind not in ("exact", "lower", "upper"):
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if not (math.isfinite(self.value) and self.value >= 0):
            raise ValueError(f"bound value must be finite and >= 0, got {self.value}")


@dataclass(frozen=True)
class HaarConstants:
    profile: ExponentProfile
    K_u: float
    K_su_lower: float
    K_su_upper: float
    d_p: float
    D_p: float
    a_p: float
    a_p_prime: float


@dataclass(frozen=True)
class CgBounds:
    lower: ConstantBound
    upper: ConstantBound
    ca_lower: ConstantBound
    ca_upper: ConstantBound


@dataclass(frozen=True)
class DisjointFamily:
    indices: tuple
    norm: float


@dataclass(frozen=True)
class ChainRecord:
    indices: tuple
    norm_exact: float
    sandwich_lo: float
    sandwich_hi: float


def profile(p) -> ExponentProfile:
    p = check_exponent(p)
    q = conjugate(p)
    return ExponentProfile(p, q, max(p, q), min(p, q))


def _tp(x):
    return math.exp(x * math.log(2.0))


def a_const(p) -> float:
    """a_p = 1 / (1 - 2^(-1/p)); bounds the pointwise sum of nested atom heights."""
    p = check_exponent(p)
    return 1.0 / (1.0 - _tp(-1.0 / p))


def d_const(p) -> float:
    """(2^(1/p#) - 1) / (2^(1/p*) - 1), lower bound for the disjoint democracy constant."""
    pr = profile(p)
    return (_tp(1.0 / pr.p_sharp) - 1.0) / (_tp(1.0 / pr.p_star) - 1.0)


def D_const(p) -> float:
    """8 / ((2^(1/p) - 1)(2^(1/p') - 1)) = 4 a_p a_p', upper bound for super-bi-democracy."""
    pr = profile(p)
    return 8.0 / ((_tp(1.0 / pr.p) - 1.0) * (_tp(1.0 / pr.p_prime) - 1.0))


def constants(p) -> HaarConstants:
    pr = profile(p)
    K_u = pr.p_star - 1.0  # Burkholder
    return HaarConstants(
        profile=pr,
        K_u=K_u,
        K_su_lower=K_u / KAPPA,
        K_su_upper=K_u,
        d_p=d_const(pr.p),
        D_p=D_const(pr.p),
        a_p=a_const(pr.p),
        a_p_prime=a_const(pr.p_prime),
    )


def _ceil_log2(m: int) -> int:
    return max(0, (m - 1).bit_length())


def disjoint_indices(m: int, level: int | None = None) -> tuple:
    """The ``m`` rightmost intervals of ``level`` (default ceil(log2 m)), right to left."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if level is None:
        level = _ceil_log2(m)
    if m > 1 << level:
        raise ValueError(f"level {level} has fewer than {m} intervals")
    top = (1 << level) - 1
    return tuple(DyadicIndex(level, top - j) for j in range(m))


def disjoint_family(m: int, p) -> DisjointFamily:
    p = check_exponent(p)
    return DisjointFamily(disjoint_indices(m), m ** (1.0 / p))


def chain_indices(m: int) -> tuple:
    if m < 1:
        raise ValueError("m must be >= 1")
    return tuple(DyadicIndex(j, 0) for j in range(m))


def chain_norms(m_max: int, p) -> np.ndarray:
    """Exact norms of the nested chain sums for m = 1..m_max (entry m-1).

    The sum of the first m atoms takes the value
        2^(j/p) - sum_{k<j} 2^(k/p)     on the right half of [0, 2^-j), j < m,
        -sum_{k<m} 2^(k/p)              on [0, 2^-m),
    so its p-th power integral is
        2^-m |sum_{k<m} 2^(k/p)|^p + sum_{j<m} 2^(-j-1) |2^(j/p) - sum_{k<j} 2^(k/p)|^p.
    Dividing every term through by (2^(1/p) - 1)^(-p) keeps it bounded for large m:
        ((1 - 2^(-m/p))^p + sum_{j<m} |2^(-(j+1)/p) - (2^(1/p') - 1)|^p) / (2^(1/p) - 1)^p.
    """
    p = check_exponent(p)
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    c = _tp(1.0 - 1.0 / p) - 1.0
    j = np.arange(m_max, dtype=float)
    terms = np.abs(np.exp(-(j + 1.0) * math.log(2.0) / p) - c) ** p
    partial = np.cumsum(terms)
    m = np.arange(1, m_max + 1, dtype=float)
    head = (-np.expm1(-m * math.log(2.0) / p)) ** p
    return (head + partial) ** (1.0 / p) / (_tp(1.0 / p) - 1.0)


def chain_norm_direct(m: int, p) -> float:
    """The same chain norm summed term by term in unscaled form (small m only)."""
    p = check_exponent(p)
    h = [_tp(k / p) for k in range(m + 1)]
    total = math.ldexp(1.0, -m) * abs(sum(h[:m])) ** p
    for j in range(m):
        total += math.ldexp(1.0, -j - 1) * abs(h[j] - sum(h[:j])) ** p
    return total ** (1.0 / p)


def chain_sandwich(m, p):
    """Minkowski bounds ((1 + m (2^(1/p')-1)^p)^(1/p) -/+ 1) / (2^(1/p) - 1)."""
    p = check_exponent(p)
    c = _tp(1.0 - 1.0 / p) - 1.0
    base = (1.0 + np.asarray(m, dtype=float) * c ** p) ** (1.0 / p)
    denom = _tp(1.0 / p) - 1.0
    return (base - 1.0) / denom, (base + 1.0) / denom


def nested_chain(m: int, p) -> ChainRecord:
    p = check_exponent(p)
    lo, hi = chain_sandwich(m, p)
    return ChainRecord(chain_indices(m), float(chain_norms(m, p)[-1]), float(lo), float(hi))


def super_fundamental_upper(m: int, p) -> float:
    """max{a_p m^(1/p), 1 + a_p (m-1)^(1/p)}, bounding every m-term ±1 sum."""
    if m < 1:
        raise ValueError("m must be >= 1")
    p = check_exponent(p)
    a = a_const(p)
    return max(a * m ** (1.0 / p), 1.0 + a * (m - 1) ** (1.0 / p))


def cg_bounds(p) -> CgBounds:
    """Certified bracket for the greedy constant C_g and the Property A constant C_a."""
    k = constants(p)
    lower = max(k.K_su_lower, k.d_p)
    upper = k.K_u + k.D_p
    return CgBounds(
        lower=ConstantBound("C_g", lower, "lower",
                            "C_g >= K_su >= K_u/2 and C_g >= Delta >= Delta_d >= d_p"),
        upper=ConstantBound("C_g", upper, "upper",
                            "L_m <= k^c_2m + B_m with k^c <= K_su <= p*-1, B_m <= D_p"),
        ca_lower=ConstantBound("C_a", k.d_p, "lower", "C_a >= Delta_sd >= Delta_d >= d_p"),
        ca_upper=ConstantBound("C_a", upper, "upper", "C_a <= C_g"),
    )
