"""Exit criteria.  Each test records one PASS/FAIL line, printed in the
terminal summary (and to stdout when run as a script)."""
import math
import os
import time

import numpy as np
import pytest

from sendov import bounds, geometry, threshold
from sendov.polycore import Polynomial, bombieri_inner, derivative, evaluate, kernel
from sendov.propverify import GEOMETRY_SUITES, LEMMA_SUITES, SuiteSpec, run_suite

from conftest import ACCEPTANCE_LINES

JOBS = min(4, os.cpu_count() or 1)
_reports: dict = {}


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _unit(printed: float) -> float:
    text = f"{printed}"
    decimals = len(text.split(".")[1]) if "." in text else 0
    return 10.0 ** -decimals


def test_1_pinned_table():
    t0 = time.perf_counter()
    rows = threshold.make_table([r[0] for r in threshold.PAPER_TABLE], pinned=True)
    elapsed = time.perf_counter() - t0
    bad = []
    for row, printed in zip(rows, threshold.PAPER_TABLE):
        got = {"r": row.r, "alpha": row.alpha, "p": row.p, "q": row.q, "K": row.K}
        for name, idx in (("r", 3), ("alpha", 4), ("p", 5), ("q", 6), ("K", 7)):
            ref = printed[idx]
            if abs(got[name] - ref) > _unit(ref) + 1e-12:
                bad.append(f"a={row.a} {name}={got[name]:.5g} vs {ref}")
    record(1, "pinned table p, q, r, alpha, K within one printed unit",
           not bad and elapsed < 1.0, f"{elapsed:.3f}s" + (f"; {bad}" if bad else ""))


def test_2_threshold_reproduction():
    rows = threshold.make_table([r[0] for r in threshold.PAPER_TABLE], pinned=True)
    cmp = {r.a: threshold.compare_with_paper(r) for r in rows}
    ok08 = abs(cmp[0.8]["N3_rel_gap"]) <= 0.02
    within = all(abs(cmp[a]["N3_rel_gap"]) <= 0.03 for a in (0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9))
    flags_right = all(c["exceeds_printed"] == (max(c["N1"], c["N2"], c["N3"]) > c["printed_N"])
                      for c in cmp.values())
    flagged = sorted(a for a, c in cmp.items() if c["exceeds_printed"])
    worst = max(abs(cmp[a]["N3_rel_gap"]) for a in (0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9))
    record(2, "N3 vs printed N (a=0.8 within 2%, a>=0.3 within 3%), N1/N2 reported and flagged",
           ok08 and within and flags_right,
           f"a=0.8 gap {cmp[0.8]['N3_rel_gap']:+.4f}; worst gap {worst:.4f}; flagged a={flagged}")


@pytest.mark.parametrize("a, c, lo, hi", [(0.8, 0.700, 0.095, 0.105), (0.1, 0.096, 0.027, 0.031)])
def test_3_fixed_point(a, c, lo, hi):
    t0 = time.perf_counter()
    m, n = threshold.fixed_point_m(a, c)
    elapsed = time.perf_counter() - t0
    residual = abs(m - bounds.m_upper_bound(a, n))
    record(3, f"fixed point m for a={a}, c={c} in [{lo}, {hi}] with residual <= 1e-4",
           lo <= m <= hi and residual <= 1e-4 and elapsed < 10,
           f"m={m:.5f}, N={n}, residual={residual:.1e}, {elapsed:.2f}s")


def _run_group(names, trials, seed, max_degree, jobs):
    return [run_suite(SuiteSpec(s, trials, seed, max_degree), jobs=jobs) for s in names]


def test_4_lemma_suites():
    t0 = time.perf_counter()
    reps = _run_group(LEMMA_SUITES, 10_000, 42, 12, JOBS)
    elapsed = time.perf_counter() - t0
    _reports["lemma"] = reps
    summary = ", ".join(f"{r.suite}:{r.violations}/{r.errors}" for r in reps)
    record(4, "lemma suites: 0 violations over 10^4 trials each, degree <= 12",
           all(r.passed for r in reps) and elapsed < 60, f"{summary}; {elapsed:.1f}s")


def test_5_geometry_suites():
    t0 = time.perf_counter()
    reps = _run_group(GEOMETRY_SUITES, 1_000, 42, 10, JOBS)
    elapsed = time.perf_counter() - t0
    _reports["geometry"] = reps
    summary = ", ".join(f"{r.suite}:{r.violations}/{r.errors}" for r in reps)
    record(5, "geometric suites: 0 violations over 10^3 trials each, degree <= 10",
           all(r.passed for r in reps) and elapsed < 60, f"{summary}; {elapsed:.1f}s")


def test_6_exclusion_grid():
    t0 = time.perf_counter()
    points = worst = 0
    worst = math.inf
    sub_ok = True
    for i in range(1, 50):
        h = i / 100
        for j in range(i + 1, 100 - i):
            c = j / 100
            for k in range(j + 1, 100 - i):
                a = k / 100
                d = geometry.exclusion_disk_refined(a, c, h, check=False)
                w, R = d.center.real, d.radius
                slack = float(geometry.one_minus_sqrt(w * w - w * a)) - R
                worst = min(worst, slack)
                sub_ok &= (w * w - R * R <= w * a - 2 * R + 1e-15) and R <= 1
                points += 1
    elapsed = time.perf_counter() - t0
    record(6, "refined exclusion disk contained in basic disk on the 0.01 grid",
           worst >= -1e-12 and sub_ok and elapsed < 10,
           f"{points} grid points, min slack {worst:.2e}, {elapsed:.2f}s")


def test_7_reproducing_identities():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 13))
        deg = int(rng.integers(0, n + 1))
        p = Polynomial(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
        al = np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        v, dv = evaluate(p, al), evaluate(derivative(p), al)
        e1 = abs(bombieri_inner(p, kernel(al, n), n) - v) / (1 + abs(v))
        e2 = abs(bombieri_inner(p, kernel(al, n, derivative_kernel=True), n) - dv) / (1 + abs(dv))
        worst = max(worst, e1, e2)
    record(7, "value and derivative reproducing identities to 1e-9 relative",
           worst <= 1e-9, f"worst relative error {worst:.1e}")


def test_8_determinism():
    if "lemma" not in _reports or "geometry" not in _reports:
        _reports["lemma"] = _run_group(LEMMA_SUITES, 10_000, 42, 12, JOBS)
        _reports["geometry"] = _run_group(GEOMETRY_SUITES, 1_000, 42, 10, JOBS)
    other_jobs = 1 if JOBS > 1 else 2
    again = (_run_group(LEMMA_SUITES, 10_000, 42, 12, other_jobs)
             + _run_group(GEOMETRY_SUITES, 1_000, 42, 10, other_jobs))
    first = [r.to_json() for r in _reports["lemma"] + _reports["geometry"]]
    second = [r.to_json() for r in again]
    record(8, "repeated suites give byte-identical JSON reports",
           first == second, f"jobs {JOBS} vs {other_jobs}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
