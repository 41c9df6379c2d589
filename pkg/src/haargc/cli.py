"""Command-line front end.

Coefficient files hold one coefficient per line::

    # comment
    C 0.5          constant atom
    2 3 -1.25      Interval(level=2, offset=3)

Exit status: 0 on success, 1 when ``selftest`` finds a violation, 2 on bad
arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import closed_form, estimators
from .dyadic import (
    CONSTANT,
    DyadicIndex,
    HaarExpansion,
    check_exponent,
    conjugate,
    indices_up_to,
    lp_norm,
    norm,
    pairing,
    synthesize,
)
from .greedy import greedy_ordering, greedy_sum, sign_flip

SWEEP_COLUMNS = [
    "p", "p_star", "K_u", "d_p", "D_p", "cg_lower", "cg_upper",
    "cg_lower_over_pstar", "cg_upper_over_pstar",
]
DEFAULT_GRID = "1.1,1.25,1.5,2,3,4,8,16,32"


class UsageError(Exception):
    pass


def fmt(x) -> str:
    return f"{x:.9g}"


def rounded(x):
    if x is None:
        return None
    return float(fmt(x))


def index_label(idx: DyadicIndex) -> str:
    return "C" if idx.is_constant else f"{idx.level}:{idx.offset}"


def parse_coeffs(text: str, p) -> HaarExpansion:
    coeffs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0].upper() == "C" and len(parts) == 2:
                idx, value = CONSTANT, float(parts[1])
            elif len(parts) == 3:
                idx, value = DyadicIndex(int(parts[0]), int(parts[1])), float(parts[2])
            else:
                raise ValueError("expected 'LEVEL OFFSET VALUE' or 'C VALUE'")
        except ValueError as exc:
            raise UsageError(f"line {lineno}: {exc}") from None
        coeffs[idx] = coeffs.get(idx, 0.0) + value
    return HaarExpansion(p, coeffs)


def format_coeffs(f: HaarExpansion) -> str:
    lines = []
    for idx in sorted(f.coeffs):
        c = fmt(f.coeffs[idx])
        lines.append(f"C {c}" if idx.is_constant else f"{idx.level} {idx.offset} {c}")
    return "\n".join(lines) + "\n"


def _read_coeffs(path, p):
    try:
        with open(path) as fh:
            return parse_coeffs(fh.read(), p)
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _dump(obj, out):
    out.write(json.dumps(obj, indent=2) + "\n")


def constants_record(p) -> dict:
    k = closed_form.constants(p)
    b = closed_form.cg_bounds(p)
    pr = k.profile
    rec = {
        "p": pr.p, "p_prime": pr.p_prime, "p_star": pr.p_star, "p_sharp": pr.p_sharp,
        "K_u": k.K_u, "K_su_lower": k.K_su_lower, "K_su_upper": k.K_su_upper,
        "d_p": k.d_p, "D_p": k.D_p, "a_p": k.a_p, "a_p_prime": k.a_p_prime,
        "cg_lower": b.lower.value, "cg_upper": b.upper.value,
        "ca_lower": b.ca_lower.value, "ca_upper": b.ca_upper.value,
    }
    return {key: rounded(v) for key, v in rec.items()}


def sweep_rows(grid, m=None, delta=0.01) -> list:
    rows = []
    for p in sorted(grid):
        k = closed_form.constants(p)
        b = closed_form.cg_bounds(p)
        ps = k.profile.p_star
        row = {
            "p": k.profile.p, "p_star": ps, "K_u": k.K_u, "d_p": k.d_p, "D_p": k.D_p,
            "cg_lower": b.lower.value, "cg_upper": b.upper.value,
            "cg_lower_over_pstar": b.lower.value / ps,
            "cg_upper_over_pstar": b.upper.value / ps,
        }
        if m is not None:
            row["witness_bound"] = estimators.lebesgue_witness(m, p, delta).bound
        rows.append(row)
    return rows


def write_sweep_csv(rows, out):
    columns = list(SWEEP_COLUMNS)
    if rows and "witness_bound" in rows[0]:
        columns.append("witness_bound")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])


def read_sweep_csv(text: str) -> list:
    return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


def sweep_svg(rows, logy=False, width=800, height=600) -> str:
    """Polyline plot of cg_lower, cg_upper and p* against p (log10 x axis)."""
    series = [("cg_lower", "#1f77b4"), ("cg_upper", "#d62728"), ("p_star", "#2ca02c")]
    margin = 70
    xs = [math.log10(r["p"]) for r in rows]

    def ty(v):
        return math.log10(v) if logy else v

    ys = [ty(r[name]) for r in rows for name, _ in series]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def px(x):
        return margin + (x - x0) / (x1 - x0) * (width - 2 * margin)

    def py(y):
        return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 20}" text-anchor="middle">p (log10 scale)</text>',
        f'<text x="20" y="{height / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {height / 2:.1f})">{"log10 " if logy else ""}value</text>',
    ]
    for r, x in zip(rows, xs):
        out.append(f'<text x="{px(x):.1f}" y="{height - margin + 18}" font-size="11" '
                   f'text-anchor="middle">{fmt(r["p"])}</text>')
    for k, (name, color) in enumerate(series):
        pts = " ".join(f"{px(x):.2f},{py(ty(r[name])):.2f}" for r, x in zip(rows, xs))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        out.append(f'<text x="{width - margin - 90}" y="{margin + 18 * k}" fill="{color}">'
                   f'{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_norm(args, out):
    f = _read_coeffs(args.coeffs, args.p)
    depth = args.depth if args.depth is not None else f.min_depth
    _dump({"p": f.p, "depth": depth, "norm": rounded(norm(f, depth))}, out)


def cmd_greedy(args, out):
    f = _read_coeffs(args.coeffs, args.p)
    if args.m < 0:
        raise UsageError("--m must be nonnegative")
    order = greedy_ordering(f)
    g = greedy_sum(f, args.m)
    _dump({
        "p": f.p,
        "m": args.m,
        "ordering": [index_label(i) for i in order.indices],
        "rearrangement": [rounded(a) for a in order.magnitudes],
        "greedy_sum": {index_label(i): rounded(g.coeffs[i]) for i in sorted(g.coeffs)},
        "residual_norm": rounded(norm(f - g)),
    }, out)


def cmd_constants(args, out):
    rec = constants_record(args.p)
    if args.format == "json":
        _dump(rec, out)
    else:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(list(rec))
        writer.writerow([fmt(v) for v in rec.values()])


def chain_record(m, p) -> dict:
    rec = closed_form.nested_chain(m, p)
    oracle = None
    if m + 1 <= 20:
        f = HaarExpansion(p, {idx: 1.0 for idx in rec.indices})
        oracle = bool(abs(norm(f, m + 1) - rec.norm_exact) <= 1e-10)
    return {
        "m": m, "p": rounded(check_exponent(p)),
        "norm_exact": rounded(rec.norm_exact),
        "sandwich_lo": rounded(rec.sandwich_lo),
        "sandwich_hi": rounded(rec.sandwich_hi),
        "within_sandwich": bool(rec.sandwich_lo <= rec.norm_exact <= rec.sandwich_hi),
        "oracle_check": oracle,
    }


def cmd_chain(args, out):
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    _dump(chain_record(args.m, args.p), out)


ESTIMATES = {
    "phi": lambda U, m, p: estimators.fundamental_search(U, m, p, signed=False),
    "phieps": lambda U, m, p: estimators.fundamental_search(U, m, p, signed=True),
    "bm": estimators.bm_search,
    "delta": lambda U, m, p: estimators.democracy_search(U, m, p, False, False),
    "deltad": lambda U, m, p: estimators.democracy_search(U, m, p, False, True),
    "deltas": lambda U, m, p: estimators.democracy_search(U, m, p, True, False),
    "deltasd": lambda U, m, p: estimators.democracy_search(U, m, p, True, True),
}


def report_record(what, report) -> dict:
    witness = {}
    for key, val in report.witness.items():
        if isinstance(val, tuple) and val and isinstance(val[0], DyadicIndex):
            witness[key] = [index_label(i) for i in val]
        elif isinstance(val, tuple):
            witness[key] = list(val)
        else:
            witness[key] = val
    return {
        "what": what,
        "name": report.estimate.name,
        "p": rounded(report.p),
        "depth": report.depth,
        "value": rounded(report.value),
        "kind": report.estimate.kind,
        "method": report.estimate.method,
        "enumerated_count": report.enumerated_count,
        "witness": witness,
    }


def cmd_estimate(args, out):
    U = estimators.IndexUniverse(args.depth)
    report = ESTIMATES[args.what](U, args.m, args.p)
    rec = report_record(args.what, report)
    rec["m"] = args.m
    _dump(rec, out)


def cmd_witness(args, out):
    w = estimators.lebesgue_witness(args.m, args.p, args.delta)
    _dump({
        "m": args.m, "p": rounded(w.f.p), "delta": rounded(args.delta),
        "bound": rounded(w.bound), "predicted": rounded(w.predicted), "method": w.method,
        "cg_upper": rounded(closed_form.cg_bounds(args.p).upper.value),
        "competitor": "chain" if w.f.p >= 2 else "disjoint",
    }, out)


def _parse_grid(text):
    try:
        grid = [check_exponent(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --grid: {exc}") from None
    if not grid:
        raise UsageError("empty --grid")
    return grid


def cmd_sweep(args, out):
    rows = sweep_rows(_parse_grid(args.grid), args.m, args.delta)
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(sweep_svg(rows, logy=args.logy))


def run_selftest(seed, trials, depth, exponents, out) -> int:
    """Invariant and audit suite; prints one line per check, returns the violation count."""
    rng = np.random.default_rng(seed)
    failures = 0

    def report(name, bad, detail=""):
        nonlocal failures
        failures += bad
        out.write(f"{'PASS' if bad == 0 else 'FAIL'} {name} violations={bad} {detail}\n")

    start = time.perf_counter()
    U = estimators.IndexUniverse(depth)
    grid = depth + 1
    for p in exponents:
        q = conjugate(p)
        bad = 0
        for idx in U.indices:
            h = synthesize(HaarExpansion(p, {idx: 1.0}), grid)
            bad += abs(lp_norm(h, p) - 1.0) > 1e-12
            for jdx in U.indices:
                g = synthesize(HaarExpansion(q, {jdx: 1.0}), grid)
                bad += abs(pairing(h, g) - (idx == jdx)) > 1e-12
        report(f"atoms p={fmt(p)}", int(bad), "normalization and biorthogonality")

        bad = 0
        burk = max(p, q) - 1.0
        indices6 = indices_up_to(min(depth + 3, 6))
        for _ in range(min(trials, 500)):
            k = int(rng.integers(1, len(indices6) + 1))
            chosen = rng.choice(len(indices6), size=k, replace=False)
            f = HaarExpansion(p, {indices6[i]: rng.uniform(-1, 1) for i in chosen})
            eps = {idx: int(rng.choice((-1, 1))) for idx in f.coeffs}
            bad += norm(sign_flip(f, eps)) > burk * norm(f) + 1e-9
        report(f"sign-flip p={fmt(p)}", int(bad), f"bound p*-1={fmt(burk)}")

        bad = 0
        norms = closed_form.chain_norms(12, p)
        for m in range(1, 13):
            f = HaarExpansion(p, {idx: 1.0 for idx in closed_form.chain_indices(m)})
            lo, hi = closed_form.chain_sandwich(m, p)
            bad += abs(norm(f, m + 1) - norms[m - 1]) > 1e-10
            bad += not (lo <= norms[m - 1] <= hi)
            fam = closed_form.disjoint_family(m, p)
            bad += abs(norm(HaarExpansion(p, {i: 1.0 for i in fam.indices})) - fam.norm) > 1e-12
        report(f"constructions p={fmt(p)}", int(bad), "chain/disjoint norms m<=12")

        bad = 0
        D = closed_form.D_const(p)
        for m in range(1, min(3, len(U)) + 1):
            bad += estimators.fundamental_search(U, m, p, True).value > \
                closed_form.super_fundamental_upper(m, p) + 1e-9
            bm = estimators.bm_search(U, m, p).value
            bad += bm > D + 1e-9
            bad += abs(bm - estimators.bm_search(U, m, q).value) > 1e-9
            for signed in (False, True):
                for disjoint in (False, True):
                    if disjoint and 2 * m > len(U):
                        continue
                    bad += estimators.democracy_search(U, m, p, signed, disjoint).value > D + 1e-9
        report(f"bound-chain p={fmt(p)}", int(bad), f"D_p={fmt(D)}")

        audit = estimators.inequality_audit(U, trials, seed, p)
        for clause in ("a", "b", "c"):
            report(f"audit({clause}) p={fmt(p)}", audit.violations[clause],
                   f"checks={audit.checks[clause]} min_slack={fmt(audit.min_slack[clause])}")
    out.write(f"selftest finished in {time.perf_counter() - start:.1f}s, "
              f"{failures} violation(s)\n")
    return failures


def cmd_selftest(args, out):
    seed = args.seed if args.seed is not None else estimators.default_seed()
    exponents = _parse_grid(args.p)
    return 1 if run_selftest(seed, args.trials, args.depth, exponents, out) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haargc",
        description="Greedy algorithm and democracy constants for the L_p Haar system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norm", help="L_p norm of a Haar expansion")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--depth", type=int)
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("greedy", help="greedy ordering and m-term greedy approximation")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_greedy)

    s = sub.add_parser("constants", help="closed-form constants and C_g bracket")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("chain", help="nested chain norm with sandwich and grid check")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.set_defaults(func=cmd_chain)

    s = sub.add_parser("estimate", help="exhaustive search on a finite universe")
    s.add_argument("--what", choices=sorted(ESTIMATES), required=True)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("witness", help="certified lower bound for the Lebesgue constant")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--delta", type=float, default=0.01)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("sweep", help="constants table over a grid of exponents")
    s.add_argument("--grid", default=DEFAULT_GRID)
    s.add_argument("--m", type=int)
    s.add_argument("--delta", type=float, default=0.01)
    s.add_argument("--out")
    s.add_argument("--svg")
    s.add_argument("--logy", action="store_true")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("selftest", help="run invariant checks and inequality audits")
    s.add_argument("--seed", type=int)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--p", default="1.5,3")
    s.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out) or 0
    except (UsageError, ValueError, KeyError, ZeroDivisionError,
            estimators.BudgetExceeded) as exc:
        sys.stderr.write(f"haargc {args.command}: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
