"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -s`` or
``python tests/test_acceptance.py``.
"""
import io
import itertools
import time
from pathlib import Path

import numpy as np
import pytest

from haargc import cli
from haargc import closed_form as cf
from haargc.dyadic import HaarExpansion, indices_up_to, norm
from haargc.estimators import (
    IndexUniverse,
    bm_search,
    democracy_search,
    fundamental_search,
    lebesgue_witness,
)
from haargc.greedy import greedy_sum, lebesgue_ratio, project, sign_flip

GRID = [1.1, 1.5, 2.0, 3.0, 4.0, 8.0]
SWEEP_GRID = [1.05, 1.1, 1.25, 1.5, 2, 3, 4, 8, 16, 32, 64]
GOLDEN = Path(__file__).parent / "golden"

# Frozen from the closed forms evaluated over SWEEP_GRID before the build:
# cg_lower/p* ranges over [0.5 (p=2), 1.404 (p=64)], cg_upper/p* over
# [12.716 (p=64), 23.814 (p=2)].
LOWER_RATIO_BRACKET = (0.5, 1.41)
UPPER_RATIO_BRACKET = (12.7, 23.82)
LOWER_RATIO_FLOOR_PSTAR_GE_4 = 0.9
# Witness bounds at m=256, delta=0.01 from the first verified run.
WITNESS_256 = {4.0: 3.53559927, 8.0: 8.98897645}


_capture = None


@pytest.fixture(autouse=True)
def _bind_capture(capsys):
    global _capture
    _capture = capsys
    yield
    _capture = None


def report(number, ok, detail):
    line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} {detail}"
    if _capture is None:
        print(line)
    else:
        with _capture.disabled():
            print(line)
    assert ok, line


def test_criterion_1_disjoint_family_norms():
    start = time.perf_counter()
    worst = 0.0
    for p in GRID:
        for m in range(1, 65):
            fam = cf.disjoint_family(m, p)
            f = HaarExpansion(p, {i: 1.0 for i in fam.indices})
            worst = max(worst, abs(norm(f) - m ** (1 / p)), abs(fam.norm - m ** (1 / p)))
    elapsed = time.perf_counter() - start
    report(1, worst <= 1e-12 and elapsed < 10,
           f"max |norm - m^(1/p)| = {worst:.2e} (tol 1e-12), {elapsed:.2f}s (< 10s)")


def test_criterion_2_chain_cross_validation():
    start = time.perf_counter()
    worst, outside = 0.0, 0
    for p in GRID:
        for m in range(1, 20):
            rec = cf.nested_chain(m, p)
            grid = norm(HaarExpansion(p, {i: 1.0 for i in rec.indices}), m + 1)
            worst = max(worst, abs(grid - rec.norm_exact))
            outside += not (rec.sandwich_lo <= rec.norm_exact <= rec.sandwich_hi)
        norms = cf.chain_norms(10 ** 6, p)
        lo, hi = cf.chain_sandwich(np.arange(1, 10 ** 6 + 1), p)
        outside += int(np.count_nonzero((norms < lo) | (norms > hi)))
    elapsed = time.perf_counter() - start
    report(2, worst <= 1e-10 and outside == 0 and elapsed < 60,
           f"grid oracle max err {worst:.2e} (tol 1e-10), sandwich violations {outside} "
           f"for m <= 10^6, {elapsed:.1f}s (< 60s)")


def test_criterion_3_orthonormal_oracle():
    rng = np.random.default_rng(20240603)
    pool = indices_up_to(4)
    worst_gap, worst_ratio = 0.0, 0.0
    for _ in range(200):
        k = int(rng.integers(1, 11))
        chosen = rng.choice(len(pool), size=k, replace=False)
        f = HaarExpansion(2.0, {pool[i]: rng.uniform(-1, 1) for i in chosen})
        for m in range(k + 1):
            greedy_err = norm(f - greedy_sum(f, m))
            best = min(norm(f - project(f, A)) for A in itertools.combinations(sorted(f.support), m))
            worst_gap = max(worst_gap, abs(greedy_err - best))
            if m == 0:
                continue
            A = [pool[i] for i in rng.choice(len(pool), size=m, replace=False)]
            a = rng.uniform(-1, 1, size=m)
            if norm(f - HaarExpansion(2.0, dict(zip(A, a)))) > 0:
                worst_ratio = max(worst_ratio, lebesgue_ratio(f, m, A, a))
    report(3, worst_gap <= 1e-12 and worst_ratio <= 1 + 1e-9,
           f"|greedy - best m-term| <= {worst_gap:.2e} (tol 1e-12), "
           f"max Lebesgue ratio {worst_ratio:.12f} (<= 1 + 1e-9)")


def test_criterion_4_sign_flip_sampling():
    rng = np.random.default_rng(4)
    violations, worst = 0, 0.0
    for p in GRID:
        bound = max(p, p / (p - 1)) - 1
        for _ in range(500):
            pool = indices_up_to(int(rng.integers(0, 7)))
            keep = rng.random(len(pool)) < rng.uniform(0.1, 1.0)
            keep[rng.integers(len(pool))] = True
            f = HaarExpansion(p, {i: rng.uniform(-1, 1) for i, k in zip(pool, keep) if k})
            eps = {i: int(rng.choice((-1, 1))) for i in f.support}
            ratio = norm(sign_flip(f, eps)) / norm(f)
            worst = max(worst, ratio / bound)
            violations += ratio > bound + 1e-9
    report(4, violations == 0,
           f"{violations} violations of ||M_eps f|| <= (p*-1)||f|| over 3000 pairs, "
           f"max ratio/(p*-1) = {worst:.4f}")


def test_criterion_5_bound_chain():
    U = IndexUniverse(3)
    violations = 0
    for p in GRID:
        q = p / (p - 1)
        D = cf.D_const(p)
        for m in range(1, 4):
            violations += fundamental_search(U, m, p, True).value > \
                cf.super_fundamental_upper(m, p) + 1e-9
            bm = bm_search(U, m, p).value
            violations += bm > D + 1e-9
            violations += abs(bm - bm_search(U, m, q).value) > 1e-9
            for signed in (False, True):
                for disjoint in (False, True):
                    violations += democracy_search(U, m, p, signed, disjoint).value > D + 1e-9
    report(5, violations == 0, f"{violations} violations across depth-3 searches, m <= 3")


def test_criterion_6_selftest_audit():
    out = io.StringIO()
    start = time.perf_counter()
    code = cli.main(["selftest", "--trials", "1000", "--depth", "3", "--seed", "42",
                     "--p", "1.5,3"], out=out)
    elapsed = time.perf_counter() - start
    lines = out.getvalue().splitlines()
    audit_lines = [ln for ln in lines if "audit(" in ln]
    bad = [ln for ln in lines if ln.startswith("FAIL")]
    report(6, code == 0 and not bad and len(audit_lines) == 6 and elapsed < 120,
           f"selftest exit {code}, {len(bad)} failing checks, {elapsed:.1f}s (< 120s)")


def test_criterion_7_asymptotic_bracket():
    rows = cli.sweep_rows(SWEEP_GRID)
    problems = []
    for r in rows:
        lo, up = r["cg_lower_over_pstar"], r["cg_upper_over_pstar"]
        if not r["cg_lower"] <= r["cg_upper"]:
            problems.append(f"p={r['p']}: lower > upper")
        if not LOWER_RATIO_BRACKET[0] <= lo <= LOWER_RATIO_BRACKET[1]:
            problems.append(f"p={r['p']}: lower/p* = {lo}")
        if not UPPER_RATIO_BRACKET[0] <= up <= UPPER_RATIO_BRACKET[1]:
            problems.append(f"p={r['p']}: upper/p* = {up}")
        if r["p_star"] >= 4 and lo < LOWER_RATIO_FLOOR_PSTAR_GE_4:
            problems.append(f"p={r['p']}: lower/p* = {lo} below floor")
    for p, frozen in WITNESS_256.items():
        w = lebesgue_witness(256, p, 0.01, method="closed")
        threshold = 0.9 * cf.d_const(p) / 1.01
        if w.bound < threshold:
            problems.append(f"witness p={p}: {w.bound} < {threshold}")
        if abs(w.bound - frozen) > 1e-8:
            problems.append(f"witness p={p}: {w.bound} drifted from {frozen}")
    ratios = [(r["cg_lower_over_pstar"], r["cg_upper_over_pstar"]) for r in rows]
    span = (min(a for a, _ in ratios), max(a for a, _ in ratios),
            min(b for _, b in ratios), max(b for _, b in ratios))
    report(7, not problems,
           "lower/p* in [{:.3f}, {:.3f}], upper/p* in [{:.3f}, {:.3f}]; ".format(*span)
           + ("; ".join(problems) if problems else "witness bounds above 0.9 d_p/1.01"))


def test_criterion_8_cli_golden(tmp_path):
    out = io.StringIO()
    cli.main(["constants", "--p", "2", "--format", "json"], out=out)
    json_ok = out.getvalue().rstrip("\n") == (GOLDEN / "constants_p2.json").read_text().rstrip("\n")
    csv_path = tmp_path / "sweep.csv"
    cli.main(["sweep", "--grid", "2,4", "--out", str(csv_path)])
    csv_ok = csv_path.read_text().rstrip("\n") == \
        (GOLDEN / "sweep_2_4.csv").read_text().rstrip("\n")
    report(8, json_ok and csv_ok, f"constants json match={json_ok}, sweep csv match={csv_ok}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
