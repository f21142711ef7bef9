"""Acceptance suite: one test per shipped guarantee, at full scale.

Each criterion runs at its exact tolerance and prints a PASS line on
success (pytest reports the failure otherwise). The expensive sweeps are
session fixtures shared across criteria; see conftest.py.
"""

import json
import time

import numpy as np
import pytest

import oracles
from conftest import ACCEPTANCE_SEED, random_two_qubit_mixed
from monogamy import cli
from monogamy.catalog import NAMED_STATE_NAMES, named_state
from monogamy.correlations import classical_correlation
from monogamy.measures import (
    MAX_PAIR_EF_SUM_3Q,
    concurrence_two_qubit_mixed,
    ef_from_concurrence,
    monogamy_report,
)
from monogamy.montecarlo import EF_SUM_CEILING
from monogamy.statekit import DensityMatrix

PRINTED_CEILING = 1.20175
OBSERVED_MAX_REFERENCE = 1.18819


def _report(name: str, capsys) -> dict:
    code = cli.main(["check-state", "--named", name, "--json"])
    out, _ = capsys.readouterr()
    assert code == 0
    return json.loads(out)


def test_criterion_01_w_paper_state_value(capsys):
    """The maximal W-type state reports EF sum 1.20175 (5e-5) and S1 = 1."""
    start = time.perf_counter()
    report = _report("w-paper", capsys)
    elapsed = time.perf_counter() - start
    assert abs(report["e_sum"] - PRINTED_CEILING) <= 5e-5
    assert abs(report["s1"] - 1.0) <= 1e-9
    assert elapsed < 1.0
    print(f"[criterion 01] PASS: w-paper e_sum={report['e_sum']:.7f} "
          f"s1={report['s1']:.12f} ({elapsed:.2f}s)")


def test_criterion_02_ghz_values(capsys):
    """GHZ: tau_EF = 1, both pair EFs = 0, bipartition concurrence = 1."""
    start = time.perf_counter()
    report = _report("ghz", capsys)
    elapsed = time.perf_counter() - start
    assert abs(report["tau_ef"] - 1.0) <= 1e-9
    for pair in report["pairs"]:
        assert abs(pair["eof"]) <= 1e-9
    assert abs(report["c_bipart"] - 1.0) <= 1e-9
    assert elapsed < 1.0
    print(f"[criterion 02] PASS: ghz tau_ef={report['tau_ef']:.12f} "
          f"c_bipart={report['c_bipart']:.12f} ({elapsed:.2f}s)")


def test_criterion_03_ckw_positivity(sweep3_1m, sweep4_100k):
    """No squared-concurrence residual below -1e-9 in 10^6 3q + 10^5 4q samples."""
    summary3, _ = sweep3_1m
    assert summary3.violation_counts["ckw_residual"] == 0
    assert sweep4_100k.violation_counts["ckw_residual"] == 0
    print("[criterion 03] PASS: ckw_residual >= -1e-9 for 10^6 3-qubit "
          "and 10^5 4-qubit samples")


def test_criterion_04_squared_ef_positivity(sweep3_1m, sweep4_100k):
    """No squared-EF residual below -1e-9 in the same sweeps."""
    summary3, _ = sweep3_1m
    assert summary3.violation_counts["tau_ef"] == 0
    assert sweep4_100k.violation_counts["tau_ef"] == 0
    print("[criterion 04] PASS: tau_ef >= -1e-9 for 10^6 3-qubit "
          "and 10^5 4-qubit samples")


def test_criterion_05_extremal_bound(sweep3_1m):
    """Max EF sum over 10^6 samples lands in [1.15, 1.20175], near 1.18819."""
    summary3, _ = sweep3_1m
    best = summary3.maxima["e_sum"].value
    assert 1.15 <= best <= PRINTED_CEILING
    assert abs(best - OBSERVED_MAX_REFERENCE) <= 0.02
    print(f"[criterion 05] PASS: max e_sum = {best:.6f} "
          f"(reference {OBSERVED_MAX_REFERENCE}, tolerance 0.02)")


def test_criterion_06_ceiling(sweep3_1m):
    """Nothing beats the W-type ceiling.

    Sampled sums are held to the printed constant 1.20175 + 1e-6. The named
    states are held to the exact ceiling value: the printed constant is the
    true ceiling rounded at the 5th decimal (exact value 1.2017520734), so
    the ceiling state itself sits 1.07e-6 above the printed bound; see the
    companion xfail test.
    """
    summary3, _ = sweep3_1m
    assert summary3.violation_counts["e_sum_ceiling"] == 0
    assert summary3.maxima["e_sum"].value <= EF_SUM_CEILING
    # the exact constant is the printed one at 5-decimal precision
    assert round(MAX_PAIR_EF_SUM_3Q, 5) == PRINTED_CEILING
    assert abs(MAX_PAIR_EF_SUM_3Q - 2.0 * ef_from_concurrence(2.0**-0.5)) < 1e-14
    worst_named = 0.0
    for name in NAMED_STATE_NAMES:
        report = monogamy_report(named_state(name), 0)
        e_sum = sum(pm.eof for pm in report.pair_measures)
        assert e_sum <= MAX_PAIR_EF_SUM_3Q + 1e-6
        worst_named = max(worst_named, e_sum)
    print(f"[criterion 06] PASS: sampled max {summary3.maxima['e_sum'].value:.6f} "
          f"<= {EF_SUM_CEILING}; named max {worst_named:.10f} "
          f"<= exact ceiling {MAX_PAIR_EF_SUM_3Q:.10f} + 1e-6")


@pytest.mark.xfail(
    strict=True,
    reason="the exact W-type ceiling (1.2017520734) exceeds its own "
    "5-decimal print plus 1e-6 slack by 1.07e-6, so the ceiling state "
    "itself cannot satisfy the printed bound",
)
def test_criterion_06_named_state_vs_printed_ceiling():
    report = monogamy_report(named_state("w-paper"), 0)
    e_sum = sum(pm.eof for pm in report.pair_measures)
    assert e_sum <= PRINTED_CEILING + 1e-6


def test_criterion_07_kw_identity(identities_1k):
    """|S1 - E12 - J13| stays within the 1e-3 optimizer tolerance on 10^3 samples."""
    worst = identities_1k.maxima["kw_residual_max"].value
    assert worst <= 1e-3
    print(f"[criterion 07] PASS: max |kw residual| = {worst:.3e} <= 1e-3 "
          "over 10^3 samples")


def test_criterion_08_conservation_and_two_s1(identities_1k):
    """Conservation law and the doubled-entropy identity hold to 2e-3."""
    cons = identities_1k.maxima["conservation_residual_max"].value
    two_s1 = identities_1k.maxima["two_s1_residual_max"].value
    assert cons <= 2e-3
    assert two_s1 <= 2e-3
    print(f"[criterion 08] PASS: max |conservation residual| = {cons:.3e}, "
          f"max |2*S1 residual| = {two_s1:.3e} (both <= 2e-3)")


def test_criterion_09_convexity_slope_suite():
    """EF^2 is convex and slope-monotone in C^2; EF itself is concave."""
    start = time.perf_counter()
    x = np.linspace(1.0, 10_000.0, 10_000) / 10_000.0
    g = np.array([ef_from_concurrence(np.sqrt(v)) ** 2 / v for v in x])
    assert np.all(np.diff(g) >= -1e-12)

    gen = np.random.default_rng(ACCEPTANCE_SEED)
    pairs = gen.uniform(0.0, 1.0, size=(10_000, 2))
    sq = {v: ef_from_concurrence(np.sqrt(v)) for v in np.unique(pairs)}
    for a, b in pairs:
        mid = ef_from_concurrence(np.sqrt((a + b) / 2.0))
        assert mid**2 <= (sq[a] ** 2 + sq[b] ** 2) / 2.0 + 1e-12
        assert mid >= (sq[a] + sq[b]) / 2.0 - 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    print(f"[criterion 09] PASS: slope monotone, EF^2 midpoint-convex, "
          f"EF midpoint-concave on 10^4-point grids ({elapsed:.2f}s)")


def test_criterion_10_squared_saturation_is_single_pair(sweep3_100k_records):
    """Near the max of E12^2 + E13^2 the entanglement sits in one pair only.

    Thresholds (5% window, 0.2 ratio) were calibrated on the reproduced
    scatter itself: the squared near-max ratios top out near 0.03 while the
    unsquared ones reach ~0.95, so 0.2 cleanly separates the two regimes.
    """
    _, records = sweep3_100k_records
    e12 = np.array([r.pair_eof[0] for r in records])
    e13 = np.array([r.pair_eof[1] for r in records])
    e2_sum = e12**2 + e13**2
    near = e2_sum >= 0.95 * e2_sum.max()
    assert near.sum() > 0
    ratios = np.minimum(e12[near] ** 2, e13[near] ** 2) / np.maximum(
        e12[near] ** 2, e13[near] ** 2
    )
    assert np.all(ratios < 0.2)

    e_sum = e12 + e13
    near_linear = e_sum >= 0.95 * e_sum.max()
    linear_ratios = np.minimum(e12[near_linear], e13[near_linear]) / np.maximum(
        e12[near_linear], e13[near_linear]
    )
    assert np.any(linear_ratios >= 0.2)
    print(f"[criterion 10] PASS: squared near-max ratios < 0.2 "
          f"(max {ratios.max():.3f}, {near.sum()} samples); unsquared shows "
          f"no exclusion (max ratio {linear_ratios.max():.3f})")


def test_criterion_11_oracle_equivalence():
    """Wootters matches the closed Werner form; the optimizer matches a dense grid."""
    psi_minus = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
    proj = np.outer(psi_minus, psi_minus.conj())
    worst_werner = 0.0
    for p in np.linspace(0.0, 1.0, 21):
        rho = DensityMatrix(4, p * proj + (1 - p) * np.eye(4) / 4)
        diff = abs(concurrence_two_qubit_mixed(rho) - oracles.werner_concurrence(float(p)))
        worst_werner = max(worst_werner, diff)
    assert worst_werner < 1e-9

    worst_grid = 0.0
    for i in range(100):
        rho = random_two_qubit_mixed(ACCEPTANCE_SEED + 4, i)
        ours = classical_correlation(rho, "second").value
        ref = oracles.grid_classical_correlation(rho.entries, "second")
        assert ours >= ref - 1e-9  # refinement cannot fall below a coarser scan
        worst_grid = max(worst_grid, abs(ours - ref))
    assert worst_grid < 1e-4
    print(f"[criterion 11] PASS: Werner grid diff {worst_werner:.2e} < 1e-9; "
          f"dense-grid J diff {worst_grid:.2e} < 1e-4 on 100 states")


def test_invariant_near_max_states_have_high_entropy(sweep3_1m):
    """At least 95 of the top-100 EF sums come from states with S1 > 0.9."""
    _, top = sweep3_1m
    assert len(top) == 100
    high = sum(1 for _, _, s1 in top if s1 > 0.9)
    assert high >= 95
    print(f"[invariant] PASS: {high}/100 top EF-sum samples have s1 > 0.9")
