"""Seeded, reproducible Monte Carlo sweeps over Haar-random pure states.

Each sample index owns a private counter-derived random stream, so a sweep's
output depends only on (seed, n_samples) and never on chunking or worker
count. Aggregation (extrema, histograms, violation counts) is streaming;
full per-sample records are produced only when a ``record_sink`` is
attached, since a million records is a few hundred MB of objects.

The per-chunk entanglement kernel is a vectorized twin of the scalar
routines in :mod:`monogamy.measures` (batched Hermitian eigensolves over
stacked 4x4 matrices); the two paths are cross-checked in the test suite.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import re
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .correlations import correlation_breakdown
from .measures import _SPIN_FLIP, binary_entropy_array
from .statekit import PureState, SeededRng, haar_random_pure, state_to_json_dict

RESIDUAL_FLOOR = -1e-9
# Largest pairwise EF sum over pure 3-qubit states as printed at five
# decimals, plus float slack; sampled sums are counted against it.
EF_SUM_CEILING = 1.20175 + 1e-6

_PLAIN_CHUNK = 4096
_CORRELATION_CHUNK = 64
_SUM_RANGE = (0.0, 2.0)
_SINGLE_RANGE = (0.0, 1.0)
_PAIR_NAME = re.compile(r"^([cejd])1([2-9])$")
_PAIR_SQ_NAME = re.compile(r"^([ce])2_1([2-9])$")

RecordSink = Callable[[Sequence["SampleRecord"]], None]


@dataclass(frozen=True)
class RunConfig:
    """Parameters of one sweep; identical configs give identical outputs."""

    n_qubits: int
    n_samples: int
    seed: int
    focus_qubit: int = 0
    compute_correlations: bool = False
    histogram_bins: int = 100
    worker_hint: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.n_qubits, int) or not 3 <= self.n_qubits <= 8:
            raise ValueError(f"n_qubits must be an integer in [3, 8], got {self.n_qubits!r}")
        if not isinstance(self.n_samples, int) or self.n_samples < 1:
            raise ValueError(f"n_samples must be a positive integer, got {self.n_samples!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an integer in [0, 2^64), got {self.seed!r}")
        if not isinstance(self.focus_qubit, int) or not 0 <= self.focus_qubit < self.n_qubits:
            raise ValueError(
                f"focus_qubit must lie in [0, {self.n_qubits}), got {self.focus_qubit!r}"
            )
        if not isinstance(self.histogram_bins, int) or self.histogram_bins < 1:
            raise ValueError(f"histogram_bins must be >= 1, got {self.histogram_bins!r}")
        if self.worker_hint is not None and (
            not isinstance(self.worker_hint, int) or self.worker_hint < 1
        ):
            raise ValueError(f"worker_hint must be None or >= 1, got {self.worker_hint!r}")
        if self.compute_correlations and (self.n_qubits != 3 or self.focus_qubit != 0):
            raise ValueError(
                "correlation identities are defined for 3 qubits with focus qubit 0"
            )


@dataclass(frozen=True)
class SampleRecord:
    """All measures computed for one sampled state.

    Pair tuples are ordered by ascending partner qubit; correlation fields
    are None unless the sweep ran with ``compute_correlations``.
    """

    sample_index: int
    pair_concurrence: tuple[float, ...]
    pair_eof: tuple[float, ...]
    c_sum: float
    c2_sum: float
    e_sum: float
    e2_sum: float
    c_bipart: float
    e_bipart: float
    s1: float
    ckw_residual: float
    tau_ef: float
    pair_j: tuple[float, ...] | None = None
    pair_discord: tuple[float, ...] | None = None
    j_sum: float | None = None
    d_sum: float | None = None
    kw_residual: float | None = None
    conservation_residual: float | None = None
    two_s1_residual: float | None = None


@dataclass(frozen=True)
class Histogram:
    """Bin counts over fixed edges; half-open bins, last bin closed."""

    edges: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class MaxEntry:
    value: float
    sample_index: int


@dataclass(frozen=True)
class RunSummary:
    """Aggregated sweep results; everything except timing is deterministic."""

    n_qubits: int
    n_samples: int
    seed: int
    focus_qubit: int
    compute_correlations: bool
    histogram_bins: int
    maxima: dict[str, MaxEntry]
    argmax_states: dict[str, PureState]
    violation_counts: dict[str, int]
    histograms: dict[str, Histogram]
    elapsed_seconds: float
    samples_per_second: float

    def to_json_dict(self, include_timing: bool = True) -> dict:
        out = {
            "schema": "monogamy/run-summary/v1",
            "seed": self.seed,
            "n_samples": self.n_samples,
            "n_qubits": self.n_qubits,
            "focus_qubit": self.focus_qubit,
            "compute_correlations": self.compute_correlations,
            "histogram_bins": self.histogram_bins,
            "maxima": {
                name: {"value": entry.value, "sample_index": entry.sample_index}
                for name, entry in self.maxima.items()
            },
            "argmax_states": {
                name: state_to_json_dict(state) for name, state in self.argmax_states.items()
            },
            "violation_counts": dict(self.violation_counts),
            "histograms": {
                name: {"edges": list(h.edges), "counts": list(h.counts)}
                for name, h in self.histograms.items()
            },
        }
        if include_timing:
            out["timing"] = {
                "elapsed_seconds": self.elapsed_seconds,
                "samples_per_second": self.samples_per_second,
            }
        return out

    def canonical_json(self) -> str:
        """Deterministic serialization (timing excluded)."""
        return json.dumps(self.to_json_dict(include_timing=False), sort_keys=True)

    def canonical_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


def histogram(values, bins: int, value_range: tuple[float, float]) -> Histogram:
    """Bin counts over ``value_range``; counts always sum to the input length.

    Values are clipped into the range first so boundary noise cannot drop
    samples; an empty input yields all-zero counts.
    """
    if not isinstance(bins, int) or bins < 1:
        raise ValueError(f"bins must be a positive integer, got {bins!r}")
    lo, hi = float(value_range[0]), float(value_range[1])
    if not lo < hi:
        raise ValueError(f"value_range must be increasing, got {value_range!r}")
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError("histogram values must be finite")
    edges = np.linspace(lo, hi, bins + 1)
    if arr.size == 0:
        counts = np.zeros(bins, dtype=int)
    else:
        counts, edges = np.histogram(np.clip(arr, lo, hi), bins=bins, range=(lo, hi))
    return Histogram(tuple(float(e) for e in edges), tuple(int(c) for c in counts))


# ---------------------------------------------------------------------------
# Vectorized per-chunk kernel
# ---------------------------------------------------------------------------


def _draw_block(seed: int, start: int, count: int, n_qubits: int) -> np.ndarray:
    """Amplitudes of samples [start, start+count), one row per sample."""
    out = np.empty((count, 2**n_qubits), dtype=complex)
    for i in range(count):
        out[i] = haar_random_pure(n_qubits, SeededRng(seed, start + i)).amplitudes
    return out


def _wootters_block(rho: np.ndarray) -> np.ndarray:
    """Wootters concurrence for a stack of 4x4 density matrices."""
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    # zero noise-level eigenvalues before sqrt (see measures module)
    w[w < 16 * np.finfo(float).eps * w[:, -1:]] = 0.0
    sqrt_rho = np.einsum("mij,mj,mkj->mik", v, np.sqrt(w), v.conj())
    rho_tilde = _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP
    mw = np.clip(np.linalg.eigvalsh(sqrt_rho @ rho_tilde @ sqrt_rho), 0.0, None)
    mw[mw < 16 * np.finfo(float).eps * mw[:, -1:]] = 0.0
    lam = np.sqrt(mw)
    return np.clip(lam[:, 3] - lam[:, 2] - lam[:, 1] - lam[:, 0], 0.0, 1.0)


def _ef_block(c: np.ndarray) -> np.ndarray:
    x = 0.5 * (1.0 + np.sqrt(np.clip(1.0 - c * c, 0.0, 1.0)))
    return binary_entropy_array(x)


def _entanglement_columns(amps: np.ndarray, n_qubits: int, focus: int) -> dict:
    m = amps.shape[0]
    t = amps.reshape(m, *([2] * n_qubits))

    tf = np.moveaxis(t, 1 + focus, 1).reshape(m, 2, -1)
    rho_f = np.einsum("mar,mbr->mab", tf, tf.conj())
    det_f = np.clip(
        (rho_f[:, 0, 0] * rho_f[:, 1, 1] - rho_f[:, 0, 1] * rho_f[:, 1, 0]).real, 0.0, 0.25
    )
    c_bipart = np.clip(2.0 * np.sqrt(det_f), 0.0, 1.0)
    s1 = binary_entropy_array(0.5 * (1.0 + np.sqrt(np.clip(1.0 - 4.0 * det_f, 0.0, 1.0))))

    pair_c = []
    for partner in (q for q in range(n_qubits) if q != focus):
        tp = np.moveaxis(t, (1 + focus, 1 + partner), (1, 2)).reshape(m, 2, 2, -1)
        rho_pair = np.einsum("mabr,mcdr->mabcd", tp, tp.conj()).reshape(m, 4, 4)
        pair_c.append(_wootters_block(rho_pair))
    pair_c = np.stack(pair_c, axis=1)
    pair_e = _ef_block(pair_c)
    e_bipart = _ef_block(c_bipart)

    c2_sum = np.sum(pair_c**2, axis=1)
    e2_sum = np.sum(pair_e**2, axis=1)
    return {
        "pair_c": pair_c,
        "pair_e": pair_e,
        "c_sum": np.sum(pair_c, axis=1),
        "c2_sum": c2_sum,
        "e_sum": np.sum(pair_e, axis=1),
        "e2_sum": e2_sum,
        "c_bipart": c_bipart,
        "e_bipart": e_bipart,
        "s1": s1,
        "ckw_residual": c_bipart**2 - c2_sum,
        "tau_ef": e_bipart**2 - e2_sum,
    }


def _correlation_columns(amps: np.ndarray, n_qubits: int) -> dict:
    m = amps.shape[0]
    names = (
        "j12",
        "j13",
        "d12",
        "d13",
        "kw_residual",
        "conservation_residual",
        "two_s1_residual",
        "j_bound_excess",
        "discord_negativity",
    )
    cols = {name: np.empty(m) for name in names}
    for i in range(m):
        b = correlation_breakdown(PureState(n_qubits, amps[i]))
        cols["j12"][i] = b.j12
        cols["j13"][i] = b.j13
        cols["d12"][i] = b.d12
        cols["d13"][i] = b.d13
        cols["kw_residual"][i] = b.identities.kw_residual
        cols["conservation_residual"][i] = b.identities.conservation_residual
        cols["two_s1_residual"][i] = b.identities.two_s1_residual
        cols["j_bound_excess"][i] = max(
            b.j12 - min(b.s1, b.s2), b.j13 - min(b.s1, b.s3)
        )
        cols["discord_negativity"][i] = max(-b.d12, -b.d13)
    cols["j_sum"] = cols["j12"] + cols["j13"]
    cols["d_sum"] = cols["d12"] + cols["d13"]
    return cols


def _compute_chunk(task: tuple[RunConfig, int, int]) -> dict:
    config, start, count = task
    amps = _draw_block(config.seed, start, count, config.n_qubits)
    cols = _entanglement_columns(amps, config.n_qubits, config.focus_qubit)
    if config.compute_correlations:
        cols.update(_correlation_columns(amps, config.n_qubits))
    return {"start": start, "count": count, "amps": amps, "cols": cols}


# ---------------------------------------------------------------------------
# Streaming aggregation
# ---------------------------------------------------------------------------


class _MaxTracker:
    __slots__ = ("value", "sample_index", "amplitudes")

    def __init__(self) -> None:
        self.value = -np.inf
        self.sample_index = -1
        self.amplitudes = None

    def update(self, values: np.ndarray, start: int, amps: np.ndarray | None) -> None:
        i = int(np.argmax(values))
        if values[i] > self.value:
            self.value = float(values[i])
            self.sample_index = start + i
            if amps is not None:
                self.amplitudes = amps[i].copy()


class _Aggregator:
    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.state_tracked = ["c_sum", "c2_sum", "e_sum", "e2_sum"]
        self.diag_tracked: list[str] = []
        hist_specs = {
            "c_sum": _SUM_RANGE,
            "c2_sum": _SUM_RANGE,
            "e_sum": _SUM_RANGE,
            "e2_sum": _SUM_RANGE,
            "s1": _SINGLE_RANGE,
        }
        if config.compute_correlations:
            self.state_tracked += ["j_sum", "d_sum"]
            self.diag_tracked = [
                "kw_residual",
                "conservation_residual",
                "two_s1_residual",
                "j_bound_excess",
                "discord_negativity",
            ]
            hist_specs["j_sum"] = _SUM_RANGE
            hist_specs["d_sum"] = _SUM_RANGE
        self.trackers = {name: _MaxTracker() for name in self.state_tracked}
        self.diag_trackers = {name: _MaxTracker() for name in self.diag_tracked}
        self.hist_specs = hist_specs
        self.hist_counts = {
            name: np.zeros(config.histogram_bins, dtype=np.int64) for name in hist_specs
        }
        self.violations = {"ckw_residual": 0, "tau_ef": 0}
        # The pairwise EF-sum ceiling is a statement about three qubits only.
        if config.n_qubits == 3:
            self.violations["e_sum_ceiling"] = 0

    def consume(self, payload: dict, record_sink: RecordSink | None) -> None:
        cols = payload["cols"]
        start = payload["start"]
        amps = payload["amps"]
        for name in self.state_tracked:
            self.trackers[name].update(cols[name], start, amps)
        for name, tracker in self.diag_trackers.items():
            values = np.abs(cols[name]) if name.endswith("_residual") else cols[name]
            tracker.update(values, start, None)
        for name, rng in self.hist_specs.items():
            counts, _ = np.histogram(
                np.clip(cols[name], rng[0], rng[1]),
                bins=self.config.histogram_bins,
                range=rng,
            )
            self.hist_counts[name] += counts
        self.violations["ckw_residual"] += int(np.sum(cols["ckw_residual"] < RESIDUAL_FLOOR))
        self.violations["tau_ef"] += int(np.sum(cols["tau_ef"] < RESIDUAL_FLOOR))
        if "e_sum_ceiling" in self.violations:
            self.violations["e_sum_ceiling"] += int(np.sum(cols["e_sum"] > EF_SUM_CEILING))
        if record_sink is not None:
            record_sink(_records_from_payload(payload))

    def summary(self, elapsed: float) -> RunSummary:
        config = self.config
        maxima = {
            name: MaxEntry(t.value, t.sample_index) for name, t in self.trackers.items()
        }
        maxima.update(
            {
                f"{name}_max": MaxEntry(t.value, t.sample_index)
                for name, t in self.diag_trackers.items()
            }
        )
        argmax_states = {
            name: PureState(config.n_qubits, t.amplitudes)
            for name, t in self.trackers.items()
        }
        histograms = {
            name: Histogram(
                tuple(
                    float(e)
                    for e in np.linspace(rng[0], rng[1], config.histogram_bins + 1)
                ),
                tuple(int(c) for c in self.hist_counts[name]),
            )
            for name, rng in self.hist_specs.items()
        }
        return RunSummary(
            n_qubits=config.n_qubits,
            n_samples=config.n_samples,
            seed=config.seed,
            focus_qubit=config.focus_qubit,
            compute_correlations=config.compute_correlations,
            histogram_bins=config.histogram_bins,
            maxima=maxima,
            argmax_states=argmax_states,
            violation_counts=dict(self.violations),
            histograms=histograms,
            elapsed_seconds=elapsed,
            samples_per_second=config.n_samples / elapsed if elapsed > 0 else float("inf"),
        )


def _records_from_payload(payload: dict) -> list[SampleRecord]:
    cols = payload["cols"]
    start = payload["start"]
    count = payload["count"]
    with_corr = "j12" in cols
    records = []
    for i in range(count):
        kwargs = {}
        if with_corr:
            kwargs = {
                "pair_j": (float(cols["j12"][i]), float(cols["j13"][i])),
                "pair_discord": (float(cols["d12"][i]), float(cols["d13"][i])),
                "j_sum": float(cols["j_sum"][i]),
                "d_sum": float(cols["d_sum"][i]),
                "kw_residual": float(cols["kw_residual"][i]),
                "conservation_residual": float(cols["conservation_residual"][i]),
                "two_s1_residual": float(cols["two_s1_residual"][i]),
            }
        records.append(
            SampleRecord(
                sample_index=start + i,
                pair_concurrence=tuple(float(v) for v in cols["pair_c"][i]),
                pair_eof=tuple(float(v) for v in cols["pair_e"][i]),
                c_sum=float(cols["c_sum"][i]),
                c2_sum=float(cols["c2_sum"][i]),
                e_sum=float(cols["e_sum"][i]),
                e2_sum=float(cols["e2_sum"][i]),
                c_bipart=float(cols["c_bipart"][i]),
                e_bipart=float(cols["e_bipart"][i]),
                s1=float(cols["s1"][i]),
                ckw_residual=float(cols["ckw_residual"][i]),
                tau_ef=float(cols["tau_ef"][i]),
                **kwargs,
            )
        )
    return records


def run_sweep(config: RunConfig, record_sink: RecordSink | None = None) -> RunSummary:
    """Run the sweep described by ``config``.

    ``record_sink``, when given, receives lists of SampleRecords in strict
    sample-index order. The summary is identical for any ``worker_hint``.
    """
    start_time = time.perf_counter()
    chunk = _CORRELATION_CHUNK if config.compute_correlations else _PLAIN_CHUNK
    ranges = [
        (s, min(chunk, config.n_samples - s)) for s in range(0, config.n_samples, chunk)
    ]
    tasks = [(config, s, c) for s, c in ranges]
    agg = _Aggregator(config)
    workers = config.worker_hint or 1
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(min(workers, len(tasks))) as pool:
            for payload in pool.imap(_compute_chunk, tasks):
                agg.consume(payload, record_sink)
    else:
        for task in tasks:
            agg.consume(_compute_chunk(task), record_sink)
    return agg.summary(time.perf_counter() - start_time)


def extremal_search(config: RunConfig, objective: str) -> tuple[float, PureState]:
    """Best sampled value of ``objective`` ("ef_sum" or "c_sum") and its state."""
    key = {"ef_sum": "e_sum", "c_sum": "c_sum"}.get(objective)
    if key is None:
        raise ValueError(f"objective must be 'ef_sum' or 'c_sum', got {objective!r}")
    summary = run_sweep(config)
    entry = summary.maxima[key]
    return entry.value, summary.argmax_states[key]


# ---------------------------------------------------------------------------
# Record field access and file formats
# ---------------------------------------------------------------------------


def record_field(record: SampleRecord, name: str) -> float:
    """Resolve a column name (CSV naming) to a numeric value of a record.

    Pair columns use 1-based positional labels: ``c12`` is the pair of the
    focus qubit with its first partner. Squared pair values are available
    as ``c2_1k`` / ``e2_1k``.
    """
    scalars = {
        "sample_index": record.sample_index,
        "c_sum": record.c_sum,
        "c2_sum": record.c2_sum,
        "e_sum": record.e_sum,
        "e2_sum": record.e2_sum,
        "c_bipart": record.c_bipart,
        "e_bipart": record.e_bipart,
        "s1": record.s1,
        "ckw_residual": record.ckw_residual,
        "tau_ef": record.tau_ef,
        "j_sum": record.j_sum,
        "d_sum": record.d_sum,
        "kw_res": record.kw_residual,
        "cons_res": record.conservation_residual,
        "two_s1_res": record.two_s1_residual,
    }
    if name in scalars:
        value = scalars[name]
        if value is None:
            raise ValueError(f"field {name!r} requires a sweep with correlations")
        return float(value)
    match = _PAIR_NAME.match(name)
    if match:
        kind, label = match.group(1), int(match.group(2))
        tuples = {
            "c": record.pair_concurrence,
            "e": record.pair_eof,
            "j": record.pair_j,
            "d": record.pair_discord,
        }
        values = tuples[kind]
        if values is None:
            raise ValueError(f"field {name!r} requires a sweep with correlations")
        if not 0 <= label - 2 < len(values):
            raise ValueError(f"field {name!r} is out of range for this record")
        return float(values[label - 2])
    match = _PAIR_SQ_NAME.match(name)
    if match:
        kind, label = match.group(1), int(match.group(2))
        return record_field(record, f"{kind}1{label}") ** 2
    raise ValueError(f"unknown record field {name!r}")


def scatter_export(
    records: Sequence[SampleRecord], x_field: str, y_field: str
) -> np.ndarray:
    """Two-column table of (x_field, y_field) in sample order, shape (n, 2)."""
    out = np.empty((len(records), 2))
    for i, record in enumerate(records):
        out[i, 0] = record_field(record, x_field)
        out[i, 1] = record_field(record, y_field)
    return out


def csv_columns(n_qubits: int, with_correlations: bool) -> list[str]:
    """Column names of the records CSV for a sweep shape."""
    pair_labels = [str(k) for k in range(2, n_qubits + 1)]
    cols = ["sample_index"]
    cols += [f"c1{k}" for k in pair_labels]
    cols += ["c_sum", "c2_sum"]
    cols += [f"e1{k}" for k in pair_labels]
    cols += ["e_sum", "e2_sum", "c_bipart", "e_bipart", "s1", "ckw_residual", "tau_ef"]
    if with_correlations:
        cols += [f"j1{k}" for k in pair_labels]
        cols += ["j_sum"]
        cols += [f"d1{k}" for k in pair_labels]
        cols += ["d_sum", "kw_res", "cons_res", "two_s1_res"]
    return cols


class CsvRecordWriter:
    """Record sink that streams the CSV format (floats at 9 significant digits)."""

    def __init__(self, stream, n_qubits: int, with_correlations: bool) -> None:
        self._stream = stream
        self._columns = csv_columns(n_qubits, with_correlations)
        self._stream.write(",".join(self._columns) + "\n")

    def __call__(self, records: Sequence[SampleRecord]) -> None:
        for record in records:
            cells = []
            for name in self._columns:
                value = record_field(record, name)
                cells.append(str(record.sample_index) if name == "sample_index" else f"{value:.9g}")
            self._stream.write(",".join(cells) + "\n")


def write_summary_json(summary: RunSummary, path, include_timing: bool = False) -> None:
    """Write the summary JSON file; timing is excluded by default so that
    identical seeds produce byte-identical files."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary.to_json_dict(include_timing=include_timing), fh, indent=2, sort_keys=True)
        fh.write("\n")
