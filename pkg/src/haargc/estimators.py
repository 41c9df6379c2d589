"""Brute-force estimates of democracy-type constants on a finite index universe.

Every search here runs over ``IndexUniverse(N)``: the constant atom plus all
dyadic intervals of level <= N.  Suprema restricted to a finite universe are
lower bounds for the true constants, so every estimate is labelled ``lower``.

Signed enumerations fix the sign of the first atom to +1; the norm is even in
the global sign so nothing is lost.  All searches reduce with ``argmax`` over
lexicographically ordered candidates, so the reported witness is the smallest
maximizer in that order.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import closed_form
from .dyadic import (
    HaarExpansion,
    MAX_DEPTH,
    atom_matrix,
    cell_lp_norms,
    check_exponent,
    conjugate,
    indices_up_to,
    norm,
)
from .greedy import greedy_ordering, lebesgue_ratio

BUDGET = 10 ** 7
DEFAULT_SEED = 42
_CHUNK_ENTRIES = 1 << 22


def default_seed() -> int:
    """The audit seed: ``HAARGC_SEED`` if set, else 42."""
    env = os.environ.get("HAARGC_SEED")
    return int(env) if env not in (None, "") else DEFAULT_SEED


class BudgetExceeded(RuntimeError):
    def __init__(self, count, budget=BUDGET):
        super().__init__(f"search needs {count} norm evaluations, budget is {budget}")
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class ConstantEstimate:
    name: str
    value: float
    kind: str
    method: str


@dataclass(frozen=True)
class SearchReport:
    estimate: ConstantEstimate
    witness: dict
    enumerated_count: int
    p: float
    depth: int

    @property
    def value(self) -> float:
        return self.estimate.value


@dataclass(frozen=True)
class IndexUniverse:
    """All Haar indices up to ``depth``; 2^(depth+1) atoms in natural order."""

    depth: int
    indices: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.depth < MAX_DEPTH:
            raise ValueError(f"universe depth must lie in [0, {MAX_DEPTH - 1}]")
        object.__setattr__(self, "indices", tuple(indices_up_to(self.depth)))

    def __len__(self):
        return len(self.indices)

    @property
    def grid_depth(self) -> int:
        return self.depth + 1

    def atoms(self, p) -> np.ndarray:
        return _atoms(self.depth, check_exponent(p))


@lru_cache(maxsize=64)
def _atoms(depth, p):
    U = indices_up_to(depth)
    H = atom_matrix(U, p, depth + 1)
    H.setflags(write=False)
    return H


@lru_cache(maxsize=64)
def _sign_patterns(m):
    """All ±1 vectors of length m with first entry +1, in lexicographic order (+1 first)."""
    if m == 0:
        return np.ones((1, 0))
    rest = np.array(list(itertools.product((1.0, -1.0), repeat=m - 1)), dtype=float)
    return np.hstack([np.ones((len(rest), 1)), rest.reshape(len(rest), m - 1)])


def _combinations(n, m):
    return np.array(list(itertools.combinations(range(n), m)), dtype=np.int64).reshape(-1, m)


def _check_budget(count):
    if count > BUDGET:
        raise BudgetExceeded(count)


def _signed_extremes(H, m, p):
    """Per index set of size m: max and min over sign patterns of the norm.

    Returns (combos, max_norm, argmax_sign, min_norm, argmin_sign).
    """
    n = H.shape[0]
    combos = _combinations(n, m)
    signs = _sign_patterns(m)
    S, cells = signs.shape[0], H.shape[1]
    hi = np.empty(len(combos))
    lo = np.empty(len(combos))
    hi_arg = np.empty(len(combos), dtype=np.int64)
    lo_arg = np.empty(len(combos), dtype=np.int64)
    step = max(1, _CHUNK_ENTRIES // (S * cells))
    for start in range(0, len(combos), step):
        block = H[combos[start:start + step]]  # (c, m, cells)
        sums = np.einsum("sm,cmk->csk", signs, block)
        norms = cell_lp_norms(sums, p)  # (c, S)
        sl = slice(start, start + len(block))
        hi_arg[sl] = norms.argmax(axis=1)
        lo_arg[sl] = norms.argmin(axis=1)
        rows = np.arange(len(block))
        hi[sl] = norms[rows, hi_arg[sl]]
        lo[sl] = norms[rows, lo_arg[sl]]
    return combos, hi, hi_arg, lo, lo_arg


def _unsigned_norms(H, m, p):
    combos = _combinations(H.shape[0], m)
    out = np.empty(len(combos))
    step = max(1, _CHUNK_ENTRIES // (max(m, 1) * H.shape[1]))
    for start in range(0, len(combos), step):
        out[start:start + step] = cell_lp_norms(H[combos[start:start + step]].sum(axis=1), p)
    return combos, out


def _signed_count(n, m):
    return math.comb(n, m) * 2 ** max(0, m - 1)


def _validate_m(U, m):
    if not 1 <= m <= len(U):
        raise ValueError(f"m must lie in [1, {len(U)}] for a depth-{U.depth} universe")


def fundamental_search(U: IndexUniverse, m: int, p, signed: bool = False) -> SearchReport:
    """phi_m (sup over |A| <= m of ||sum_A h||) or phi^eps_m (|A| = m, any signs) on U."""
    p = check_exponent(p)
    _validate_m(U, m)
    value, witness, count = _fundamental(U.depth, m, p, signed)
    name = "phi_eps" if signed else "phi"
    est = ConstantEstimate(name, value, "lower", f"exhaustive search on depth-{U.depth} universe")
    return SearchReport(est, dict(witness), count, p, U.depth)


@lru_cache(maxsize=1024)
def _fundamental(depth, m, p, signed):
    U = indices_up_to(depth)
    H = _atoms(depth, p)
    n = len(U)
    if signed:
        count = _signed_count(n, m)
        _check_budget(count)
        combos, hi, hi_arg, _, _ = _signed_extremes(H, m, p)
        best = int(hi.argmax())
        signs = _sign_patterns(m)[hi_arg[best]]
        witness = (("A", tuple(U[i] for i in combos[best])),
                   ("signs", tuple(int(s) for s in signs)))
        return float(hi[best]), witness, count
    count = sum(math.comb(n, r) for r in range(1, m + 1))
    _check_budget(count)
    best_val, best_set = -1.0, None
    for r in range(1, m + 1):
        combos, norms = _unsigned_norms(H, r, p)
        i = int(norms.argmax())
        if norms[i] > best_val:
            best_val, best_set = float(norms[i]), combos[i]
    witness = (("A", tuple(U[i] for i in best_set)), ("signs", (1,) * len(best_set)))
    return best_val, witness, count


def fundamental_profile(U: IndexUniverse, m_max: int, p, signed: bool = True) -> np.ndarray:
    """Values of fundamental_search for m = 1..m_max (entry m-1)."""
    return np.array([fundamental_search(U, m, p, signed).value for m in range(1, m_max + 1)])


def bm_search(U: IndexUniverse, m: int, p) -> SearchReport:
    """B_m on U: max over r <= m of phi^eps_r(p) phi^eps_r(p') / r.

    The dual basis of the L_p-normalized Haar system is the L_p'-normalized
    one, so the dual super-fundamental function is the same search at p'.
    """
    p = check_exponent(p)
    q = conjugate(p)
    _validate_m(U, m)
    best, best_r, count = -1.0, None, 0
    for r in range(1, m + 1):
        a = fundamental_search(U, r, p, signed=True)
        b = fundamental_search(U, r, q, signed=True)
        count += a.enumerated_count + b.enumerated_count
        val = a.value * b.value / r
        if val > best:
            best, best_r, wa, wb = val, r, a.witness, b.witness
    witness = {"r": best_r, "A": wa["A"], "signs": wa["signs"],
               "A_dual": wb["A"], "signs_dual": wb["signs"]}
    est = ConstantEstimate("B_m", best, "lower", f"exhaustive search on depth-{U.depth} universe")
    return SearchReport(est, witness, count, p, U.depth)


DEMOCRACY_NAMES = {
    (False, False): "Delta",
    (False, True): "Delta_d",
    (True, False): "Delta_s",
    (True, True): "Delta_sd",
}


def democracy_search(U: IndexUniverse, m: int, p, signed: bool = False,
                     disjoint: bool = False) -> SearchReport:
    """Largest ratio ||sum_A eps h|| / ||sum_B delta h|| over |A| = |B| = m on U.

    Each index set is first reduced to its largest and smallest (signed) norm;
    the pair search then only needs those two numbers per set.  With
    ``disjoint`` the pairs are scanned in decreasing numerator order and the
    scan stops once no remaining numerator can beat the best ratio found.
    """
    p = check_exponent(p)
    _validate_m(U, m)
    H = U.atoms(p)
    n = len(U)
    if signed:
        count = _signed_count(n, m)
        _check_budget(count)
        combos, hi, hi_arg, lo, lo_arg = _signed_extremes(H, m, p)
        patterns = _sign_patterns(m)
    else:
        count = math.comb(n, m)
        _check_budget(count)
        combos, hi = _unsigned_norms(H, m, p)
        lo = hi
        hi_arg = lo_arg = np.zeros(len(combos), dtype=np.int64)
        patterns = np.ones((1, m))

    if disjoint:
        ia, ib = _best_disjoint_pair(combos, hi, lo, n)
        if ia is None:
            raise ValueError(f"no disjoint pair of {m}-sets in a universe of {n} atoms")
    else:
        ia, ib = int(hi.argmax()), int(lo.argmin())
    value = float(hi[ia] / lo[ib])
    witness = {
        "A": tuple(U.indices[i] for i in combos[ia]),
        "signs_A": tuple(int(s) for s in patterns[hi_arg[ia]]),
        "B": tuple(U.indices[i] for i in combos[ib]),
        "signs_B": tuple(int(s) for s in patterns[lo_arg[ib]]),
    }
    name = DEMOCRACY_NAMES[(bool(signed), bool(disjoint))]
    est = ConstantEstimate(name, value, "lower", f"exhaustive search on depth-{U.depth} universe")
    return SearchReport(est, witness, count, p, U.depth)


def _best_disjoint_pair(combos, hi, lo, n):
    if n > 63:
        raise ValueError("disjoint search supports at most 63 atoms")
    masks = np.zeros(len(combos), dtype=np.uint64)
    for col in combos.T:
        masks |= np.left_shift(np.uint64(1), col.astype(np.uint64))
    order = np.argsort(-hi, kind="stable")
    floor = lo.min()
    best, best_pair = -1.0, (None, None)
    for ia in order:
        if hi[ia] / floor <= best:
            break
        ok = (masks & masks[ia]) == 0
        if not ok.any():
            continue
        cand = np.where(ok, lo, np.inf)
        ib = int(cand.argmin())
        ratio = hi[ia] / cand[ib]
        if ratio > best:
            best, best_pair = ratio, (int(ia), ib)
    return best_pair


def reevaluate(report: SearchReport) -> float:
    """Recompute a report's value from its witness alone, via step functions."""
    p, w = report.p, report.witness

    def signed_norm(A, signs, exponent):
        return norm(HaarExpansion(exponent, dict(zip(A, signs))))

    name = report.estimate.name
    if name in ("phi", "phi_eps"):
        return signed_norm(w["A"], w["signs"], p)
    if name == "B_m":
        return (signed_norm(w["A"], w["signs"], p)
                * signed_norm(w["A_dual"], w["signs_dual"], conjugate(p)) / w["r"])
    return signed_norm(w["A"], w["signs_A"], p) / signed_norm(w["B"], w["signs_B"], p)


@dataclass(frozen=True)
class LebesgueWitness:
    bound: float
    predicted: float
    f: HaarExpansion
    A: tuple
    a: tuple
    method: str


def witness_expansion(m: int, p, delta: float):
    """The chain/disjoint test vector and its competitor.

    For p >= 2 the chain carries coefficient 1 and the disjoint family 1+delta,
    so the greedy step removes the disjoint family and leaves the (larger)
    chain, while the competitor removes the chain.  For p < 2 the roles swap.
    The disjoint family sits at level ceil(log2 m)+1 inside [1/2, 1) so it
    never shares an index with the chain.
    """
    p = check_exponent(p)
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    chain = closed_form.chain_indices(m)
    level = max(0, (m - 1).bit_length()) + 1
    disjoint = closed_form.disjoint_indices(m, level)
    small, big = (chain, disjoint) if p >= 2 else (disjoint, chain)
    coeffs = {idx: 1.0 for idx in small}
    coeffs.update({idx: 1.0 + delta for idx in big})
    return HaarExpansion(p, coeffs), small, (1.0,) * m


def lebesgue_witness(m: int, p, delta: float, method: str = "auto") -> LebesgueWitness:
    """Certified lower bound for L_m (and C_g) from the chain/disjoint construction.

    ``method`` is "step" (exact step-function norms; needs m <= MAX_DEPTH - 1),
    "closed" (closed-form norms) or "auto" (step when the grid allows it).
    """
    f, A, a = witness_expansion(m, p, delta)
    p = f.p
    chain_norm = float(closed_form.chain_norms(m, p)[-1])
    flat = m ** (1.0 / p)
    if p >= 2:
        predicted = chain_norm / ((1.0 + delta) * flat)
    else:
        predicted = flat / ((1.0 + delta) * chain_norm)
    fits = f.min_depth <= MAX_DEPTH
    if method == "auto":
        method = "step" if fits else "closed"
    if method == "step":
        if not fits:
            raise ValueError(
                f"m={m} needs grid depth {f.min_depth}, above the cap {MAX_DEPTH}"
            )
        bound = lebesgue_ratio(f, m, A, a)
    elif method == "closed":
        bound = predicted
    else:
        raise ValueError(f"unknown method {method!r}")
    return LebesgueWitness(bound, predicted, f, A, a, method)


@dataclass
class AuditReport:
    p: float
    depth: int
    trials: int
    seed: int
    checks: dict
    violations: dict
    min_slack: dict
    skipped_competitors: int = 0

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())

    @property
    def ok(self) -> bool:
        return self.total_violations == 0


_SUBSET_CACHE = {}


def _subset_masks(t):
    """Boolean matrix of all subsets of range(t) and their sizes."""
    if t not in _SUBSET_CACHE:
        codes = np.arange(1 << t, dtype=np.int64)
        bits = ((codes[:, None] >> np.arange(t)) & 1).astype(bool)
        _SUBSET_CACHE[t] = (bits, bits.sum(axis=1))
    return _SUBSET_CACHE[t]


def _complement_profile(coef, support, H, p, n):
    """max over E subset of supp, |E| = s, of ||v - S_E v|| / ||v||, cumulated in s."""
    t = len(support)
    bits, sizes = _subset_masks(t)
    rows = H[support]
    vnorm = cell_lp_norms(coef @ rows, p)
    kept = np.where(bits, 0.0, coef)  # zero out E
    ratios = cell_lp_norms(kept @ rows, p) / vnorm
    by_size = np.zeros(n + 1)
    np.maximum.at(by_size, sizes, ratios)
    return np.maximum.accumulate(by_size)


def inequality_audit(U: IndexUniverse, trials: int, seed: int | None, p,
                     tol: float = 1e-9) -> AuditReport:
    """Check the finite-universe versions of three inequalities on random expansions.

    (a) a_m^*(f) phi^eps_m <= B_m ||f||                    for every m <= |supp f|
    (b) ||f - G_m f|| / ||f - sum_A a h|| <= k^c_2m + B_m   for a sampled competitor
    (c) phi_m <= phi^eps_m <= 2 phi_m                      for every m <= |U|

    phi, phi^eps and B_m are computed exactly on U.  k^c_2m is the exact max of
    ||v - S_E v|| / ||v|| over |E| <= 2m, v ranging over the sampled f and
    their competitor residuals.
    """
    p = check_exponent(p)
    if seed is None:
        seed = default_seed()
    rng = np.random.default_rng(seed)
    n = len(U)
    H = U.atoms(p)

    phi = np.maximum.accumulate(fundamental_profile(U, n, p, signed=False))
    phieps = fundamental_profile(U, n, p, signed=True)
    bm = np.array([bm_search(U, m, p).value for m in range(1, n + 1)])

    violations = {"a": 0, "b": 0, "c": 0}
    checks = {"a": 0, "b": 0, "c": 0}
    slack = {"a": math.inf, "b": math.inf, "c": math.inf}

    def record(clause, s):
        checks[clause] += 1
        slack[clause] = min(slack[clause], s)
        if s < -tol:
            violations[clause] += 1

    for m in range(1, n + 1):
        record("c", phieps[m - 1] - phi[m - 1])
        record("c", closed_form.KAPPA * phi[m - 1] - phieps[m - 1])

    kc = np.zeros(n + 1)
    pending = []
    skipped = 0
    for _ in range(trials):
        k = int(rng.integers(1, n + 1))
        support = np.sort(rng.choice(n, size=k, replace=False))
        coef = rng.uniform(-1.0, 1.0, size=k)
        f = HaarExpansion(p, {U.indices[i]: c for i, c in zip(support, coef)})
        fnorm = cell_lp_norms(coef @ H[support], p)
        mags = greedy_ordering(f).magnitudes
        for m in range(1, len(mags) + 1):
            record("a", bm[m - 1] * fnorm - mags[m - 1] * phieps[m - 1])
        kc = np.maximum(kc, _complement_profile(coef, support, H, p, n))

        m = int(rng.integers(1, len(f) + 1))
        A = np.sort(rng.choice(n, size=m, replace=False))
        if rng.random() < 0.5:
            a = rng.uniform(-1.0, 1.0, size=m)
        else:
            a = np.array([f[U.indices[i]] for i in A])
        g = np.zeros(n)
        g[support] = coef
        g[A] -= a
        g_support = np.flatnonzero(g)
        if g_support.size == 0:
            skipped += 1
            continue
        kc = np.maximum(kc, _complement_profile(g[g_support], g_support, H, p, n))
        ratio = lebesgue_ratio(f, m, [U.indices[i] for i in A], a)
        pending.append((m, ratio))

    for m, ratio in pending:
        record("b", kc[min(2 * m, n)] + bm[m - 1] - ratio)

    return AuditReport(p, U.depth, trials, seed, checks, violations,
                       {c: float(s) for c, s in slack.items()}, skipped)
