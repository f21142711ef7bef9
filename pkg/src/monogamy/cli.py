"""The ``monogamy`` command-line tool.

Subcommands:

- ``sweep``: seeded Haar sweep; writes ``summary.json`` (always),
  ``records.csv`` (with ``--records``) and figures (with ``--figures``);
- ``check-state``: full measure/identity report for one named or file state;
- ``verify``: tiered self-check suites with a pass/fail table;
- ``plot``: regenerate figures from saved sweep outputs.

Exit codes: 0 success; 1 verify failures; 2 monogamy-inequality violations
in a sweep; 64 usage errors; 65 malformed or unreadable state/data files.
File outputs are byte-identical across runs with identical flags and seeds
(timing is reported on stderr, never stored).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .catalog import NAMED_STATE_NAMES, named_state
from .correlations import correlation_breakdown
from .measures import monogamy_report
from .montecarlo import (
    CsvRecordWriter,
    RunConfig,
    run_sweep,
    write_summary_json,
)
from .statekit import (
    PureState,
    density_from_pure,
    partial_trace,
    state_from_json_dict,
    von_neumann_entropy,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_VIOLATION = 2
EXIT_USAGE = 64
EXIT_DATA = 65

EF_SUM_PRINTED = 1.20175
EF_SUM_OBSERVED = 1.18819


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class _DataError(Exception):
    """Input-file problem that should map to exit code 65."""


def _default_seed(parser: _Parser) -> int:
    raw = os.environ.get("MONOGAMY_DEFAULT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        parser.error(f"MONOGAMY_DEFAULT_SEED must be an integer, got {raw!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="monogamy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a seeded Haar sweep")
    sweep.add_argument("--qubits", type=int, default=3, metavar="N")
    sweep.add_argument("--samples", type=int, required=True, metavar="M")
    sweep.add_argument("--seed", type=int, default=None, metavar="S")
    sweep.add_argument("--focus", type=int, default=0, metavar="K")
    sweep.add_argument("--with-correlations", action="store_true")
    sweep.add_argument("--records", action="store_true", help="also write records.csv")
    sweep.add_argument("--bins", type=int, default=100, metavar="B")
    sweep.add_argument("--out", default=".", metavar="DIR")
    sweep.add_argument("--workers", type=int, default=1, metavar="W")
    sweep.add_argument("--figures", action="store_true", help="render figures to DIR")

    check = sub.add_parser("check-state", help="analyze one state")
    source = check.add_mutually_exclusive_group(required=True)
    source.add_argument("--named", choices=NAMED_STATE_NAMES, metavar="NAME")
    source.add_argument("--state", metavar="FILE")
    check.add_argument("--focus", type=int, default=0, metavar="K")
    check.add_argument("--json", action="store_true", help="print the JSON report")
    check.add_argument("--out", default=None, metavar="DIR", help="also write report.json")

    verify = sub.add_parser("verify", help="run the self-check suites")
    verify.add_argument("--tier", choices=("quick", "full"), default="quick")
    verify.add_argument("--seed", type=int, default=None, metavar="S")
    verify.add_argument("--workers", type=int, default=1, metavar="W")

    plot = sub.add_parser("plot", help="render figures from saved sweep outputs")
    plot.add_argument("--summary", required=True, metavar="FILE")
    plot.add_argument("--records", default=None, metavar="FILE")
    plot.add_argument("--out", required=True, metavar="DIR")

    return parser


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _cmd_sweep(args, parser: _Parser) -> int:
    seed = args.seed if args.seed is not None else _default_seed(parser)
    try:
        config = RunConfig(
            n_qubits=args.qubits,
            n_samples=args.samples,
            seed=seed,
            focus_qubit=args.focus,
            compute_correlations=args.with_correlations,
            histogram_bins=args.bins,
            worker_hint=args.workers,
        )
    except ValueError as exc:
        parser.error(str(exc))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    records_path = outdir / "records.csv"
    if args.records:
        with open(records_path, "w", encoding="utf-8", newline="") as fh:
            sink = CsvRecordWriter(fh, config.n_qubits, config.compute_correlations)
            summary = run_sweep(config, record_sink=sink)
    else:
        summary = run_sweep(config)

    summary_path = outdir / "summary.json"
    write_summary_json(summary, summary_path)

    print(f"samples: {summary.n_samples} (qubits={summary.n_qubits}, seed={summary.seed})")
    for name in ("e_sum", "c_sum", "c2_sum", "e2_sum"):
        entry = summary.maxima[name]
        print(f"max {name}: {entry.value:.9g} at sample {entry.sample_index}")
    print(f"violations: {summary.violation_counts}")
    print(f"summary: {summary_path}")
    if args.records:
        print(f"records: {records_path}")
    print(
        f"elapsed: {summary.elapsed_seconds:.2f}s"
        f" ({summary.samples_per_second:.0f} samples/s)",
        file=sys.stderr,
    )

    if args.figures:
        from . import figures

        paths = figures.render_summary_figures(summary.to_json_dict(), outdir)
        if args.records:
            paths += figures.render_records_figures(records_path, outdir)
        for path in paths:
            print(f"figure: {path}")

    violations = summary.violation_counts["ckw_residual"] + summary.violation_counts["tau_ef"]
    return EXIT_VIOLATION if violations else EXIT_OK


# ---------------------------------------------------------------------------
# check-state
# ---------------------------------------------------------------------------


def _load_cli_state(args) -> tuple[PureState, str]:
    if args.named:
        return named_state(args.named), f"named:{args.named}"
    path = args.state
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise _DataError(f"cannot read state file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _DataError(
            f"malformed state file {path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    try:
        return state_from_json_dict(payload), f"file:{path}"
    except ValueError as exc:
        raise _DataError(f"invalid state in {path}: {exc}") from exc


def build_state_report(psi: PureState, source: str, focus_qubit: int = 0) -> dict:
    """All measures, residuals, and identities of one state as a JSON dict."""
    report = monogamy_report(psi, focus_qubit)
    s1 = von_neumann_entropy(partial_trace(density_from_pure(psi), psi.n_qubits, [focus_qubit]))
    partners = [q for q in range(psi.n_qubits) if q != focus_qubit]
    pairs = [
        {
            "partner": partner,
            "concurrence": pm.concurrence,
            "concurrence_sq": pm.concurrence_sq,
            "eof": pm.eof,
            "eof_sq": pm.eof_sq,
        }
        for partner, pm in zip(partners, report.pair_measures)
    ]
    identities = None
    if psi.n_qubits == 3 and focus_qubit == 0:
        breakdown = correlation_breakdown(psi)
        for pair, j, d in zip(pairs, (breakdown.j12, breakdown.j13), (breakdown.d12, breakdown.d13)):
            pair["classical_correlation"] = j
            pair["discord"] = d
        identities = {
            "kw_residual": breakdown.identities.kw_residual,
            "conservation_residual": breakdown.identities.conservation_residual,
            "two_s1_residual": breakdown.identities.two_s1_residual,
            "j_sum": breakdown.j12 + breakdown.j13,
            "d_sum": breakdown.d12 + breakdown.d13,
        }
    return {
        "schema": "monogamy/state-report/v1",
        "source": source,
        "n_qubits": psi.n_qubits,
        "focus_qubit": focus_qubit,
        "s1": s1,
        "c_bipart": report.bipartition_concurrence,
        "e_bipart": report.bipartition_eof,
        "pairs": pairs,
        "c_sum": sum(p["concurrence"] for p in pairs),
        "c2_sum": sum(p["concurrence_sq"] for p in pairs),
        "e_sum": sum(p["eof"] for p in pairs),
        "e2_sum": sum(p["eof_sq"] for p in pairs),
        "ckw_residual": report.ckw_residual,
        "tau_ef": report.tau_ef,
        "tau_f": report.tau_f,
        "identities": identities,
    }


def _print_text_report(report: dict) -> None:
    print(f"state: {report['source']} ({report['n_qubits']} qubits,"
          f" focus qubit {report['focus_qubit']})")
    for key in ("s1", "c_bipart", "e_bipart"):
        print(f"  {key:<22} {report[key]:.9f}")
    for pair in report["pairs"]:
        line = (
            f"  pair (0,{pair['partner']}):"
            f" C={pair['concurrence']:.9f}"
            f" C^2={pair['concurrence_sq']:.9f}"
            f" EF={pair['eof']:.9f}"
            f" EF^2={pair['eof_sq']:.9f}"
        )
        if "classical_correlation" in pair:
            line += f" J={pair['classical_correlation']:.9f} D={pair['discord']:.9f}"
        print(line)
    for key in ("c_sum", "c2_sum", "e_sum", "e2_sum", "ckw_residual", "tau_ef"):
        print(f"  {key:<22} {report[key]:.9f}")
    if report["tau_f"] is not None:
        print(f"  {'tau_f':<22} {report['tau_f']:.9f}")
    if report["identities"] is not None:
        ids = report["identities"]
        print(f"  {'j_sum':<22} {ids['j_sum']:.9f}")
        print(f"  {'d_sum':<22} {ids['d_sum']:.9f}")
        print("  identities (ideal 0):")
        for key in ("kw_residual", "conservation_residual", "two_s1_residual"):
            print(f"    {key:<20} {ids[key]: .3e}")


def _cmd_check_state(args, parser: _Parser) -> int:
    try:
        psi, source = _load_cli_state(args)
    except _DataError as exc:
        print(f"monogamy check-state: {exc}", file=sys.stderr)
        return EXIT_DATA
    if psi.n_qubits < 3:
        parser.error(f"check-state needs at least 3 qubits, got {psi.n_qubits}")
    if not 0 <= args.focus < psi.n_qubits:
        parser.error(f"--focus must lie in [0, {psi.n_qubits})")

    report = build_state_report(psi, source, args.focus)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        _print_text_report(report)
    if args.out is not None:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / "report.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"report: {path}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_checks(tier: str, seed: int, workers: int) -> list[tuple[str, bool, str]]:
    checks: list[tuple[str, bool, str]] = []

    ghz = build_state_report(named_state("ghz"), "named:ghz")
    checks.append(
        ("ghz tau_ef = 1 (1e-9)", abs(ghz["tau_ef"] - 1.0) <= 1e-9, f"tau_ef={ghz['tau_ef']:.12f}")
    )
    ghz_pair_max = max(p["eof"] for p in ghz["pairs"])
    checks.append(("ghz pair EF = 0 (1e-9)", ghz_pair_max <= 1e-9, f"max={ghz_pair_max:.3e}"))
    checks.append(
        (
            "ghz c_bipart = 1 (1e-9)",
            abs(ghz["c_bipart"] - 1.0) <= 1e-9,
            f"c_bipart={ghz['c_bipart']:.12f}",
        )
    )

    wp = build_state_report(named_state("w-paper"), "named:w-paper")
    checks.append(
        (
            f"w-paper e_sum = {EF_SUM_PRINTED} (5e-5)",
            abs(wp["e_sum"] - EF_SUM_PRINTED) <= 5e-5,
            f"e_sum={wp['e_sum']:.9f}",
        )
    )
    checks.append(("w-paper s1 = 1 (1e-9)", abs(wp["s1"] - 1.0) <= 1e-9, f"s1={wp['s1']:.12f}"))

    corr = run_sweep(
        RunConfig(
            n_qubits=3,
            n_samples=1000,
            seed=seed,
            compute_correlations=True,
            worker_hint=workers,
        )
    )
    for name in ("ckw_residual", "tau_ef"):
        count = corr.violation_counts[name]
        checks.append((f"quick sweep: no {name} violations", count == 0, f"count={count}"))
    for name, tol in (
        ("kw_residual_max", 1e-3),
        ("conservation_residual_max", 2e-3),
        ("two_s1_residual_max", 2e-3),
    ):
        value = corr.maxima[name].value
        checks.append((f"quick sweep: {name} <= {tol}", value <= tol, f"max={value:.3e}"))
    excess = corr.maxima["j_bound_excess_max"].value
    checks.append(("quick sweep: J within entropy bound (1e-6)", excess <= 1e-6, f"excess={excess:.3e}"))
    neg = corr.maxima["discord_negativity_max"].value
    checks.append(("quick sweep: discord >= -1e-6", neg <= 1e-6, f"min discord={-neg:.3e}"))
    ceiling = corr.violation_counts["e_sum_ceiling"]
    checks.append(("quick sweep: e_sum ceiling respected", ceiling == 0, f"count={ceiling}"))

    if tier == "full":
        big = run_sweep(RunConfig(n_qubits=3, n_samples=10**6, seed=seed, worker_hint=workers))
        for name in ("ckw_residual", "tau_ef"):
            count = big.violation_counts[name]
            checks.append((f"full 3q sweep: no {name} violations", count == 0, f"count={count}"))
        ceiling = big.violation_counts["e_sum_ceiling"]
        checks.append(("full 3q sweep: e_sum ceiling respected", ceiling == 0, f"count={ceiling}"))
        best = big.maxima["e_sum"].value
        checks.append(
            (
                f"full 3q sweep: max e_sum in [1.15, {EF_SUM_PRINTED}]",
                1.15 <= best <= EF_SUM_PRINTED,
                f"max={best:.6f}",
            )
        )
        checks.append(
            (
                f"full 3q sweep: max e_sum within 0.02 of {EF_SUM_OBSERVED}",
                abs(best - EF_SUM_OBSERVED) <= 0.02,
                f"max={best:.6f}",
            )
        )
        four = run_sweep(RunConfig(n_qubits=4, n_samples=10**5, seed=seed, worker_hint=workers))
        for name in ("ckw_residual", "tau_ef"):
            count = four.violation_counts[name]
            checks.append((f"full 4q sweep: no {name} violations", count == 0, f"count={count}"))
    return checks


def _cmd_verify(args, parser: _Parser) -> int:
    seed = args.seed if args.seed is not None else _default_seed(parser)
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    checks = _verify_checks(args.tier, seed, args.workers)
    width = max(len(name) for name, _, _ in checks)
    failures = 0
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        print(f"{status}  {name:<{width}}  {detail}")
    print(f"{len(checks) - failures}/{len(checks)} checks passed (tier={args.tier}, seed={seed})")
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# plot
# ---------------------------------------------------------------------------


def _cmd_plot(args, parser: _Parser) -> int:
    from . import figures

    try:
        with open(args.summary, "r", encoding="utf-8") as fh:
            summary = json.load(fh)
    except OSError as exc:
        print(f"monogamy plot: cannot read {args.summary}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except json.JSONDecodeError as exc:
        print(
            f"monogamy plot: malformed summary {args.summary}:"
            f" line {exc.lineno}, column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return EXIT_DATA
    paths = figures.render_summary_figures(summary, args.out)
    if args.records is not None:
        if not Path(args.records).exists():
            print(f"monogamy plot: cannot read {args.records}", file=sys.stderr)
            return EXIT_DATA
        paths += figures.render_records_figures(args.records, args.out)
    for path in paths:
        print(f"figure: {path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep":
        return _cmd_sweep(args, parser)
    if args.command == "check-state":
        return _cmd_check_state(args, parser)
    if args.command == "verify":
        return _cmd_verify(args, parser)
    if args.command == "plot":
        return _cmd_plot(args, parser)
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
