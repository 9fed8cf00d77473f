"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import math
import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from expcong.arith import is_prime
from expcong.census import (
    EquationInstance,
    SearchRegion,
    census,
    count_all_b,
    count_brute,
    count_via_charsum,
    charsum_products,
    full_region,
    min_r,
    region_with_r,
    sqrt_log_delta,
    weil_scan,
)
from expcong.dlog import DlogStats, build_table, dlog, dlog_batch
from expcong.ff import field_from_spec, prime_field
from expcong.qmodel import (
    bbht_queries,
    cost_report,
    empirical_success,
    grover_closed_form,
    log_spaced_primes,
    optimal_iterations,
    ratio_scan,
)
from expcong.solver import Status, solve_classical, verify

SUITE_FIELDS = ["7", "3^2", "5^2", "7^2", "101"]
SUITE_PER_FIELD = 40  # 5 fields x 40 = 200 instances


_capsys = None


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def report(n: int, ok: bool, title: str, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}: {title} | {detail}"
    if _capsys is None:
        print(line)
        return
    with _capsys.disabled():
        print("\n" + line, flush=True)


def _suite():
    """The fixed random instance suite shared by criteria 1 and 5."""
    out = []
    for spec in SUITE_FIELDS:
        F = field_from_spec(spec)
        rng = np.random.default_rng([F.q, 2024])
        for _ in range(SUITE_PER_FIELD):
            pairs = [(int(rng.integers(1, F.q)), int(rng.integers(1, F.q))) for _ in range(3)]
            inst = EquationInstance.build(F, pairs, 0)
            reg = full_region(inst)
            r = int(rng.integers(1, reg.full_sizes[reg.truncated] + 1))
            out.append((inst, SearchRegion(r, reg.full_sizes, reg.truncated)))
    return out


def test_criterion_01_exact_counting():
    t0 = time.perf_counter()
    suite = _suite()
    mismatches = 0
    worst_charsum = 0.0
    n_b = 0
    for inst, region in suite:
        for reg in (full_region(inst), region):
            fast = count_all_b(inst, reg)
            brute = count_brute(inst, reg)
            mismatches += int(np.sum(fast != brute))
            P = charsum_products(inst, reg)
            for b in range(inst.field.q):
                worst_charsum = max(worst_charsum, abs(count_via_charsum(inst, b, reg, P) - int(fast[b])))
            n_b += inst.field.q
    elapsed = time.perf_counter() - t0
    ok = len(suite) >= 200 and mismatches == 0 and worst_charsum < 1e-6 and elapsed < 60
    report(
        1,
        ok,
        "exact counting cross-check",
        f"{len(suite)} instances, {n_b} (region, b) cases, exact mismatches={mismatches}, "
        f"max charsum error={worst_charsum:.2e}, {elapsed:.1f}s (<60s)",
    )
    assert ok


def test_criterion_02_worked_f7():
    F = prime_field(7)
    inst = EquationInstance.build(F, [(1, 3)] * 3, 0)
    region = region_with_r(inst, 6)
    # independent oracle: plain triple loop over 216 exponent triples
    oracle = [0] * 7
    for x in itertools.product(range(6), repeat=3):
        oracle[sum(pow(3, xi, 7) for xi in x) % 7] += 1
    counts = count_all_b(inst, region).tolist()
    rep = census(inst, region=region)
    ok = (
        oracle == [30] + [31] * 6
        and counts == oracle
        and rep.E_r == Fraction(6, 7)
        and rep.E_bound == 294
        and rep.E_r < rep.E_bound
    )
    report(2, ok, "worked F_7 instance", f"N={counts}, E(r)={rep.E_r}, bound q^2 r={rep.E_bound}")
    assert ok


def test_criterion_03_exceptional_bounds():
    t0 = time.perf_counter()
    details = []
    ok = True
    for q in (101, 251, 509, 1021):
        F = prime_field(q)
        delta = sqrt_log_delta(q)
        g0 = F.generator
        prims = [F.pow(g0, k) for k in range(1, q - 1) if math.gcd(k, q - 1) == 1]
        rng = np.random.default_rng(q)
        worst_exc = 0
        worst_dev = 0.0
        for trial in range(5):
            if trial == 0:
                pairs = [(1, g0)] * 3
            else:
                pairs = [(int(rng.integers(1, q)), int(prims[rng.integers(len(prims))])) for _ in range(3)]
            inst = EquationInstance.build(F, pairs, 0)
            region = min_r(inst, delta)
            rep = census(inst, delta, region)
            thr = delta * math.sqrt(region.r * q)
            nonexc = [abs(float(d.delta)) for d in rep.per_b.values() if not d.exceptional]
            dev_ok = all(v <= thr for v in nonexc)
            ok &= rep.exceptional_count <= q / delta**2 and dev_ok
            worst_exc = max(worst_exc, rep.exceptional_count)
            worst_dev = max(worst_dev, max(nonexc, default=0.0) / thr)
        details.append(f"q={q}: r={region.r} exc<={worst_exc}/{q / delta**2:.1f} max|D|/thr={worst_dev:.3f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    report(3, ok, "exceptional-b and deviation bounds", "; ".join(details) + f"; {elapsed:.1f}s (<120s)")
    assert ok


def _prime_powers_upto(n: int) -> list[str]:
    out = []
    for p in range(2, n + 1):
        if not is_prime(p):
            continue
        nu = 1
        while p**nu <= n:
            out.append(str(p) if nu == 1 else f"{p}^{nu}")
            nu += 1
    return out


def test_criterion_04_weil_bound():
    fields = _prime_powers_upto(101)
    checks = violations = 0
    worst = 0.0
    for spec in fields:
        F = field_from_spec(spec)
        bound = math.sqrt(F.q)
        one = F(1)
        for g in range(1, F.q):
            s = F.order_of(g)
            mags = weil_scan(one, F(g), s)[1:]  # a mu runs over all of F_q^x
            checks += len(mags)
            violations += int(np.sum(mags > bound + 1e-9))
            worst = max(worst, float(np.max(mags / bound)))
    ok = violations == 0
    report(
        4,
        ok,
        "Weil bound, exhaustive q<=101",
        f"{len(fields)} fields, {checks} (g, a*mu) sums, violations={violations}, max |S|/sqrt(q)={worst:.4f}",
    )
    assert ok


def test_criterion_05_solver_soundness():
    suite = _suite()
    mismatched = unverified = over_query = over_work = over_plan = 0
    solves = 0
    for inst, _ in suite:
        truth = count_brute(inst)
        for b in range(inst.field.q):
            ib = inst.with_b(b)
            out = solve_classical(ib, full_scan=True)
            solves += 1
            found = out.status is Status.FOUND
            mismatched += found != (truth[b] > 0)
            if not found and out.status is not Status.NO_SOLUTION:
                mismatched += 1
            if found and not verify(ib, out.solution):
                unverified += 1
            gb = out.plan.giant_bound
            over_query += out.max_giant_steps > gb
            s2, s3 = out.plan.orders[1], out.plan.orders[2]
            # the full scan covers r_eff = s_3 values of x_3
            over_work += out.giant_steps > s2 * min(out.scanned_r, s3) * gb
            trunc = solve_classical(ib)
            over_plan += trunc.giant_steps > trunc.plan.work_bound
    ok = mismatched == unverified == over_query == over_work == over_plan == 0
    report(
        5,
        ok,
        "solver soundness/completeness",
        f"{solves} full-scan solves, status mismatches={mismatched}, unverified={unverified}, "
        f"giant-step overruns={over_query}, work-bound overruns={over_work} (truncated plan: {over_plan})",
    )
    assert ok


def test_criterion_06_bsgs_oracle():
    details = []
    bad = 0
    for p in (10007, 65537):
        F = prime_field(p)
        hs = np.arange(1, p, dtype=np.int64)
        subgroups = [s for s in F.factor_q_minus_1.divisors() if s <= 10**4]
        rng = np.random.default_rng(p)
        for s in subgroups:
            g = F(F.pow(F.generator, (p - 1) // s))
            # naive oracle: enumerate g^0 .. g^(s-1)
            naive = np.full(p, -1, dtype=np.int64)
            x = 1
            for e in range(s):
                naive[x] = e
                x = F.mul(x, g.enc)
            table = build_table(g, s)
            stats = DlogStats()
            got = dlog_batch(table, hs, stats)
            bad += int(np.sum(got != naive[hs]))
            bad += stats.max_steps > math.isqrt(s - 1) + 1
            for h in rng.integers(1, p, 200).tolist():
                r = dlog(table, h)
                bad += (-1 if r is None else r) != naive[h]
        details.append(f"p={p}: {len(subgroups)} subgroups x {p - 1} targets")
    ok = bad == 0
    report(6, ok, "BSGS oracle equivalence", "; ".join(details) + f"; disagreements={bad}")
    assert ok


def test_criterion_07_grover_fidelity():
    cf = grover_closed_form(4, 1, 1)
    ok = abs(cf - 1.0) <= 1e-12
    parts = [f"P(4,1,1)={cf:.15f}"]
    for t, m in ((16, 1), (64, 4), (1024, 1)):
        n = 10_000
        p = grover_closed_form(t, m, optimal_iterations(t, m))
        hits = empirical_success(t, m, n, seed=t * 31 + m)
        sigma = math.sqrt(p * (1 - p) / n)
        z = abs(hits / n - p) / sigma if sigma else abs(hits / n - p)
        ok &= abs(hits / n - p) <= 3 * sigma
        parts.append(f"({t},{m}) emp={hits / n:.4f} cf={p:.4f} z={z:.2f}")
    for t, m in ((16, 1), (64, 4), (1024, 1)):
        mean = float(np.mean(bbht_queries(t, m, 1000, seed=t + m)))
        lim = 8 * math.sqrt(t / m)
        ok &= mean <= lim
        parts.append(f"BBHT({t},{m}) mean={mean:.1f}<= {lim:.0f}")
    report(7, ok, "Grover fidelity", "; ".join(parts))
    assert ok


def test_criterion_08_complexity_scaling():
    primes = log_spaced_primes(1000, 100_000, 9)
    res3 = ratio_scan(primes, "max-order", m=3)
    res2 = ratio_scan(primes, "max-order", m=2)
    checks = {
        "n_primes>=8 in range": len(primes) >= 8 and primes[0] >= 1000 and primes[-1] <= 100_000,
        "classical in [1.35,1.65]": 1.35 <= res3.classical_exp <= 1.65,
        "quantum <= 0.65": res3.quantum_exp <= 0.65,
        "ratio in [2,3]": 2.0 <= res3.ratio <= 3.0,
        "m=2 classical in [0.85,1.15]": 0.85 <= res2.classical_exp <= 1.15,
    }
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    report(
        8,
        ok,
        "complexity scaling, primitive-root policy",
        f"{len(primes)} primes {primes[0]}..{primes[-1]}: classical={res3.classical_exp:.4f} "
        f"quantum={res3.quantum_exp:.4f} ratio={res3.ratio:.4f}; m=2 classical={res2.classical_exp:.4f}"
        + (f"; failed: {', '.join(failed)}" if failed else ""),
    )
    assert ok, f"failed sub-checks: {failed}"


def _criterion9_fields():
    specs = [str(p) for p in range(5, 400) if is_prime(p)]
    specs += ["3^2", "5^2", "7^2", "3^3", "3^4", "11^2", "5^3", "13^2", "3^5", "2^8"]
    return [field_from_spec(s) for s in specs]


def test_criterion_09_large_order_regime():
    C = 2.0
    n = r_bad = t_bad = 0
    worst = 0.0
    for F in _criterion9_fields():
        q = F.q
        lg = math.log(q)
        divs = sorted(F.factor_q_minus_1.divisors(), reverse=True)
        g = F.generator
        for s1, s2, s3 in itertools.combinations_with_replacement(divs, 3):
            if (s1 * s2) ** 2 * s3 <= q**3 * lg:
                continue
            pairs = [(1, F.pow(g, (q - 1) // s)) for s in (s1, s2, s3)]
            c = cost_report(EquationInstance.build(F, pairs, 0), M_source="main")
            n += 1
            r_bad += not c.r3_le_s3
            t_bad += c.t3_queries > C * c.t3_bound
            worst = max(worst, c.t3_queries / c.t3_bound)
    ok = n > 0 and r_bad == 0 and t_bad == 0
    report(
        9,
        ok,
        "large-order regime consistency",
        f"{n} instances with (s1 s2)^2 s3 > q^3 log q; r>s3 cases={r_bad}; "
        f"t3 > {C:g}*bound cases={t_bad}; max t3/bound={worst:.4f}",
    )
    assert ok


CLI_RUNS = [
    ["solve", "--field", "101", "--terms", "61:95,2:47,84:76", "--b", "61", "--full-scan"],
    ["solve", "--b", "3", "--quantum", "--seed", "5"],
    ["census", "--field", "5^2", "--terms", "1:2,3:7,1:12"],
    ["count", "--field", "3^2", "--terms", "1:3,2:4,1:5", "--all-b", "--method", "charsum"],
    ["weil", "--field", "101", "--terms", "1:2"],
    ["grover", "--t", "1024", "--m", "3", "--trials", "300", "--seed", "99"],
    ["grover", "--t", "64", "--m", "4", "--mode", "known", "--trials", "300", "--seed", "99"],
    ["costs", "--field", "101", "--terms", "1:2,1:3,1:5", "--b", "7"],
    ["scan", "--range", "1000:20000", "--count", "6", "--policy", "worst-case"],
]


def _cli(argv, out, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    res = subprocess.run(
        [sys.executable, "-m", "expcong", *argv, "--out", str(out)], capture_output=True, env=env, check=False
    )
    return res.returncode, res.stdout, out.read_bytes() if out.exists() else b""


def test_criterion_10_determinism(tmp_path):
    differing = []
    for i, argv in enumerate(CLI_RUNS):
        a = _cli(argv, tmp_path / f"{i}a.csv", 1)
        b = _cli(argv, tmp_path / f"{i}b.csv", 2)
        if a != b:
            differing.append(argv[0])
    ok = not differing
    report(
        10,
        ok,
        "CLI determinism",
        f"{len(CLI_RUNS)} invocations run twice in fresh processes: differing={differing or 'none'}",
    )
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
