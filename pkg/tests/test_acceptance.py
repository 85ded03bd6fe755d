"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line
that the terminal summary prints, and then asserts at the stated tolerance."""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from majoperc.binbounds import (BinomialSpec, BoundKind, run_sweep, two_binom_compare_exact)
from majoperc.closedset import enumerate_closed_masks, is_closed
from majoperc.config import parse_config
from majoperc.engine import percolates, run_bootstrap, run_bootstrap_async, run_bootstrap_reference
from majoperc.graph import VertexSet, sample_gnp
from majoperc.harness import curve_csv, run_experiment
from majoperc.thresholds import count_crossings, estimate_percolation_prob, isotonic_fit, locate_transition
from majoperc.rng import make_rng

from conftest import ACCEPTANCE


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)


def test_criterion_1_engine_matches_reference():
    rng = make_rng(101)
    start = time.perf_counter()
    mismatches = 0
    p_values = (0.0, 0.05, 0.3, 1.0)
    for i in range(1000):
        n = int(rng.integers(1, 201))
        g = sample_gnp(n, p_values[i % 4], int(rng.integers(2**63)))
        init = VertexSet.from_mask(rng.random(n) < rng.random())
        mismatches += run_bootstrap(g, init) != run_bootstrap_reference(g, init)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 30
    report(1, ok, f"{mismatches} mismatches in 1000 instances, {elapsed:.1f}s (limit 30s)")
    assert ok


def test_criterion_2_fixpoints_closed_and_percolation_criterion():
    rng = make_rng(202)
    start = time.perf_counter()
    non_perc = not_closed = 0
    while non_perc < 1000:
        n = int(rng.integers(2, 501))
        g = sample_gnp(n, float(rng.uniform(0.005, 0.3)), int(rng.integers(2**63)))
        init = VertexSet.from_mask(rng.random(n) < rng.uniform(0.0, 0.5))
        res = run_bootstrap(g, init)
        if not res.percolated:
            non_perc += 1
            not_closed += not is_closed(g, res.final_infected)

    wrong = 0
    for j in range(50):
        n = int(rng.integers(4, 13))
        g = sample_gnp(n, float(rng.uniform(0.15, 0.7)), int(rng.integers(2**63)))
        closed = enumerate_closed_masks(g)
        sets = np.arange(1 << n, dtype=np.int64)
        contained = ((sets[:, None] & closed[None, :]) == sets[:, None]).any(axis=1)
        for bits in range(1 << n):
            wrong += percolates(g, VertexSet.from_bits(n, bits)) == bool(contained[bits])
    elapsed = time.perf_counter() - start
    ok = not_closed == 0 and wrong == 0 and elapsed < 120
    report(2, ok, f"{not_closed}/1000 fixpoints not closed; {wrong} criterion mismatches "
                  f"over 50 exhaustive graphs; {elapsed:.1f}s (limit 120s)")
    assert ok


def test_criterion_3_monotone_and_order_invariants():
    rng = make_rng(303)
    start = time.perf_counter()
    mono_bad = async_bad = 0
    for _ in range(500):
        n = int(rng.integers(1, 201))
        g = sample_gnp(n, float(rng.uniform(0.0, 0.3)), int(rng.integers(2**63)))
        a = rng.random(n) < rng.random()
        b = a | (rng.random(n) < rng.random())
        fa = run_bootstrap(g, VertexSet.from_mask(a)).final_infected
        fb = run_bootstrap(g, VertexSet.from_mask(b)).final_infected
        mono_bad += not fa.issubset(fb)
    for _ in range(500):
        n = int(rng.integers(1, 101))
        g = sample_gnp(n, float(rng.uniform(0.0, 0.3)), int(rng.integers(2**63)))
        init = VertexSet.from_mask(rng.random(n) < rng.random())
        async_bad += run_bootstrap_async(g, init, rng) != run_bootstrap(g, init).final_infected
    elapsed = time.perf_counter() - start
    ok = mono_bad == 0 and async_bad == 0 and elapsed < 60
    report(3, ok, f"{mono_bad} monotonicity and {async_bad} async-order failures in 500+500, "
                  f"{elapsed:.1f}s (limit 60s)")
    assert ok


def test_criterion_4_hard_inequality_suite():
    start = time.perf_counter()
    kinds = [BoundKind.BOLLOBAS_PMF_LOWER, BoundKind.BOLLOBAS_PMF_UPPER, BoundKind.BERNSTEIN_TAIL]
    reports = run_sweep(kinds)
    elapsed = time.perf_counter() - start
    per_kind = {k.value: 0 for k in kinds}
    violations = {k.value: 0 for k in kinds}
    for r in reports:
        assert r.valid and not r.asymptotic
        per_kind[r.bound_id] += 1
        violations[r.bound_id] += r.violated
    max_n = max(r.params["n"] for r in reports)
    ok = sum(violations.values()) == 0 and len(reports) >= 10_000 and max_n <= 10_000 and elapsed < 120
    report(4, ok, f"{len(reports)} points (n <= {max_n}), violations {violations}, "
                  f"points {per_kind}, {elapsed:.1f}s (limit 120s)")
    assert ok


def test_criterion_5_desk_scale_phase_transition(tmp_path):
    start = time.perf_counter()
    out = tmp_path / "phase.csv"
    cfg = parse_config("n = 50000\np = 0.01\nm_fraction = 0.40:0.48:12\ntrials = 200\n"
                       f"master_seed = 1\nshared_graph = true\noutput_path = {out}\n")
    curve = run_experiment(cfg)
    rows = [line for line in out.read_text().splitlines() if not line.startswith("#")]
    upper_cfg = parse_config("n = 50000\np = 0.01\nm_fraction = 0.47\ntrials = 200\n"
                             "master_seed = 1\nshared_graph = true\n")
    p_low = curve.grid[0].p_hat
    assert curve.grid[0].m == 20000
    p_high = estimate_percolation_prob(upper_cfg)[0]
    smooth = isotonic_fit(curve.p_hat, curve.trials)
    crossings = count_crossings(smooth, 0.5)
    where = locate_transition(curve) / cfg.n
    elapsed = time.perf_counter() - start
    ok = (len(rows) == 13 and p_low <= 0.05 and p_high >= 0.95 and crossings == 1
          and 0.41 <= where <= 0.47 and elapsed < 900)
    report(5, ok, f"p_hat(0.40n)={p_low:.3f} p_hat(0.47n)={p_high:.3f}, {crossings} crossing at "
                  f"{where:.4f}n (band [0.41, 0.47]), {elapsed:.0f}s (target 900s)")
    assert ok


def test_criterion_6_isolated_edge_obstruction():
    n = 10_000
    p = 0.3 * math.log(n) / n
    start = time.perf_counter()
    cfg = parse_config(f"n = {n}\np = {p!r}\nm = {int(0.9 * n)}\ntrials = 100\nmaster_seed = 6\n")
    p_hat, lo, hi = estimate_percolation_prob(cfg)
    elapsed = time.perf_counter() - start
    ok = p_hat <= 0.05 and elapsed < 60
    report(6, ok, f"p_hat={p_hat:.3f} (limit 0.05; 95% CI [{lo:.3f}, {hi:.3f}]), {elapsed:.1f}s (limit 60s)")
    assert ok


TWO_BINOM_POINTS = [
    # (n1, p1, n2, p2, k, mode); the first is the first-step growth configuration
    # r = P(B(m, p) >= B(n-m-1, p)) with m = 60, n - m - 1 = 139, p = 0.1
    (60, 0.1, 139, 0.1, 0, ">="),
    (60, 0.1, 139, 0.1, 0, "="),
    (1, 0.5, 1, 0.5, 0, ">="),
    (10, 0.3, 10, 0.3, 1, ">="),
    (50, 0.5, 50, 0.5, 0, "="),
    (100, 0.2, 80, 0.25, 0, ">="),
    (100, 0.2, 80, 0.25, 5, ">="),
    (200, 0.05, 300, 0.03, 0, ">="),
    (200, 0.05, 300, 0.03, 2, "="),
    (500, 0.5, 520, 0.5, -10, ">="),
    (500, 0.5, 520, 0.5, 0, "="),
    (1000, 0.01, 1000, 0.01, 3, ">="),
    (30, 0.9, 25, 0.95, 4, ">="),
    (30, 0.9, 25, 0.95, 3, "="),
    (400, 0.3, 450, 0.7, -190, ">="),
    (400, 0.3, 450, 0.7, -195, "="),
    (2000, 0.1, 2100, 0.1, -5, ">="),
    (5, 0.2, 40, 0.02, 1, ">="),
    (250, 0.45, 240, 0.5, 0, ">="),
    (4364, 0.1, 5636, 0.1, 0, "="),
]


def test_criterion_7_two_binomial_oracle_vs_monte_carlo():
    rng = make_rng(707)
    samples = 1_000_000
    start = time.perf_counter()
    worst = 0.0
    failures = []
    for n1, p1, n2, p2, k, mode in TWO_BINOM_POINTS:
        exact = two_binom_compare_exact(BinomialSpec(n1, p1), BinomialSpec(n2, p2), k, mode)
        x1 = rng.binomial(n1, p1, samples)
        x2 = rng.binomial(n2, p2, samples)
        hits = np.count_nonzero(x1 >= x2 + k) if mode == ">=" else np.count_nonzero(x1 == x2 + k)
        sigma = math.sqrt(max(exact * (1 - exact), 1e-12) / samples)
        z = abs(hits / samples - exact) / sigma
        worst = max(worst, z)
        if z > 4:
            failures.append((n1, p1, n2, p2, k, mode, z))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    report(7, ok, f"20 points, worst |z|={worst:.2f} (limit 4), {elapsed:.1f}s (limit 120s)")
    assert ok, failures


@pytest.mark.parametrize("variant", ["independent", "shared", "bernoulli"])
def test_criterion_8_determinism(tmp_path, variant):
    extra = {"independent": "m_fraction = 0.3:0.5:5\n",
             "shared": "m_fraction = 0.3:0.5:5\nshared_graph = true\n",
             "bernoulli": "theta = -2, 0, 2\n"}[variant]
    outputs = []
    for i, threads in enumerate((1, 8, 1, 3)):
        path = tmp_path / f"{i}.csv"
        cfg = parse_config(f"n = 2000\np = 0.01\ntrials = 30\nmaster_seed = 88\n{extra}output_path = {path}\n")
        run_experiment(cfg, threads=threads)
        outputs.append(path.read_bytes())
    ok = len(set(outputs)) == 1
    previous = ACCEPTANCE.get(8, "")
    all_ok = ok and "FAIL" not in previous
    done = previous.split("  ", 1)[1].split(" byte")[0] + f", {variant}" if previous else variant
    report(8, all_ok, f"{done} byte-identical across runs and thread counts 1/8/1/3" if all_ok
           else f"{variant}: outputs differ")
    assert ok
