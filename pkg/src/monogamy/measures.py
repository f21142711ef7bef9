"""Entanglement measures and monogamy residuals for few-qubit pure states.

Concurrence of a qubit-vs-rest pure bipartition is 2*sqrt(det) of the qubit
marginal; for two-qubit mixed states it is the spectral (Wootters) value.
Entanglement of formation follows from concurrence via the binary entropy,
and the residuals compare a squared bipartition measure against the sum of
squared pairwise measures. Everything is in bits, so all measures and
residual magnitudes live in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statekit import (
    DensityMatrix,
    PureState,
    clamp_spectrum,
    density_from_pure,
    partial_trace,
)

# sigma_y (x) sigma_y, the spin-flip conjugation matrix (real in this basis)
_SPIN_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)

# Largest pairwise EF sum any pure 3-qubit state can reach: twice the EF of
# concurrence 1/sqrt(2), attained by the "w-paper" catalog state (whose
# focus-qubit marginal is maximally mixed). 1.20175 is this number printed
# at five decimals.
MAX_PAIR_EF_SUM_3Q = 1.2017520733857122


@dataclass(frozen=True)
class PairMeasures:
    """Concurrence and entanglement of formation for one qubit pair."""

    concurrence: float
    concurrence_sq: float
    eof: float
    eof_sq: float

    def __post_init__(self) -> None:
        for name in ("concurrence", "concurrence_sq", "eof", "eof_sq"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if abs(self.concurrence_sq - self.concurrence**2) > 1e-12:
            raise ValueError("concurrence_sq is not the square of concurrence")
        if abs(self.eof - ef_from_concurrence(self.concurrence)) > 1e-12:
            raise ValueError("eof does not match ef_from_concurrence(concurrence)")
        if abs(self.eof_sq - self.eof**2) > 1e-12:
            raise ValueError("eof_sq is not the square of eof")


@dataclass(frozen=True)
class MonogamyReport:
    """All monogamy-related measures of one state with a fixed focus qubit.

    ``pair_measures`` is ordered by ascending partner qubit index (the focus
    qubit excluded). ``tau_f`` is populated for three-qubit states only.
    """

    focus_qubit: int
    bipartition_concurrence: float
    bipartition_eof: float
    ckw_residual: float
    tau_ef: float
    tau_f: float | None
    pair_measures: tuple[PairMeasures, ...]

    def __post_init__(self) -> None:
        c2_sum = sum(p.concurrence_sq for p in self.pair_measures)
        e2_sum = sum(p.eof_sq for p in self.pair_measures)
        if abs(self.ckw_residual - (self.bipartition_concurrence**2 - c2_sum)) > 1e-12:
            raise ValueError("ckw_residual is inconsistent with its parts")
        if abs(self.tau_ef - (self.bipartition_eof**2 - e2_sum)) > 1e-12:
            raise ValueError("tau_ef is inconsistent with its parts")


def binary_entropy(x: float) -> float:
    """-x*log2(x) - (1-x)*log2(1-x) with the endpoints defined as 0."""
    x = float(x)
    if not -1e-12 <= x <= 1.0 + 1e-12:
        raise ValueError(f"binary_entropy argument must lie in [0, 1], got {x}")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-(x * np.log2(x) + (1.0 - x) * np.log2(1.0 - x)))


def binary_entropy_array(p: np.ndarray) -> np.ndarray:
    """Vectorized binary entropy for bulk paths; clips instead of raising."""
    p = np.clip(p, 0.0, 1.0)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = -(p * np.log2(p) + q * np.log2(q))
    return np.where((p > 0.0) & (q > 0.0), terms, 0.0)


def ef_from_concurrence(c: float) -> float:
    """Entanglement of formation h((1 + sqrt(1 - c^2)) / 2), in bits."""
    c = float(c)
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise ValueError(f"concurrence must lie in [0, 1], got {c}")
    c = min(max(c, 0.0), 1.0)
    return binary_entropy(0.5 * (1.0 + np.sqrt(max(1.0 - c * c, 0.0))))


def concurrence_pure_bipartition(psi: PureState, qubit_k: int) -> float:
    """Concurrence between one qubit and the rest of a pure state.

    Equal to 2*sqrt(det rho_k) for the qubit marginal rho_k, which is the
    same as sqrt(2 * (1 - purity)).
    """
    rho_k = partial_trace(density_from_pure(psi), psi.n_qubits, [qubit_k])
    m = rho_k.entries
    det = float((m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real)
    return min(2.0 * np.sqrt(max(det, 0.0)), 1.0)


def concurrence_two_qubit_mixed(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    Uses the Hermitian form: the eigenvalues of rho (sy x sy) rho* (sy x sy)
    equal those of sqrt(rho) rho~ sqrt(rho), so a Hermitian solver suffices.
    """
    if rho.dim != 4:
        raise ValueError(f"expected a two-qubit (4x4) density matrix, got dim {rho.dim}")
    w, v = np.linalg.eigh(rho.entries)
    w = clamp_spectrum(w)
    # sqrt amplifies eigenvalue noise (1e-16 -> 1e-8); zero what is pure
    # noise relative to the spectrum before taking roots.
    w[w < 16 * np.finfo(float).eps * w.max()] = 0.0
    sqrt_rho = (v * np.sqrt(w)) @ v.conj().T
    rho_tilde = _SPIN_FLIP @ rho.entries.conj() @ _SPIN_FLIP
    mw = clamp_spectrum(np.linalg.eigvalsh(sqrt_rho @ rho_tilde @ sqrt_rho))
    if mw.max() > 0.0:
        mw[mw < 16 * np.finfo(float).eps * mw.max()] = 0.0
    lam = np.sqrt(mw)
    c = lam[3] - lam[2] - lam[1] - lam[0]
    return min(max(c, 0.0), 1.0)


def _pair_concurrences(psi: PureState, focus_qubit: int) -> list[float]:
    rho = density_from_pure(psi)
    values = []
    for partner in range(psi.n_qubits):
        if partner == focus_qubit:
            continue
        keep = sorted((focus_qubit, partner))
        values.append(concurrence_two_qubit_mixed(partial_trace(rho, psi.n_qubits, keep)))
    return values


def _require_multipartite(psi: PureState, focus_qubit: int) -> None:
    if psi.n_qubits < 3:
        raise ValueError(f"need at least 3 qubits, got {psi.n_qubits}")
    if not isinstance(focus_qubit, int) or not 0 <= focus_qubit < psi.n_qubits:
        raise ValueError(f"focus_qubit must lie in [0, {psi.n_qubits}), got {focus_qubit!r}")


def ckw_residual(psi: PureState, focus_qubit: int = 0) -> float:
    """Squared bipartition concurrence minus the sum of squared pair concurrences.

    Nonnegative for every pure state (up to ~1e-15 floating-point noise,
    reported raw).
    """
    _require_multipartite(psi, focus_qubit)
    c_bip = concurrence_pure_bipartition(psi, focus_qubit)
    return c_bip**2 - sum(c**2 for c in _pair_concurrences(psi, focus_qubit))


def squared_ef_residual(psi: PureState, focus_qubit: int = 0) -> float:
    """Squared-EF residual: EF^2 of the bipartition minus the pairwise EF^2 sum.

    Nonnegative because EF^2 is a convex, monotone function of the squared
    concurrence; reported raw.
    """
    _require_multipartite(psi, focus_qubit)
    e_bip = ef_from_concurrence(concurrence_pure_bipartition(psi, focus_qubit))
    pair_e = [ef_from_concurrence(c) for c in _pair_concurrences(psi, focus_qubit)]
    return e_bip**2 - sum(e**2 for e in pair_e)


def tau_f(psi: PureState) -> float:
    """Three-qubit tripartite residual EF^2(0|12) - EF^2(01) - EF^2(02)."""
    if psi.n_qubits != 3:
        raise ValueError(f"tau_f is defined for exactly 3 qubits, got {psi.n_qubits}")
    return squared_ef_residual(psi, 0)


def monogamy_report(psi: PureState, focus_qubit: int = 0) -> MonogamyReport:
    """Compute every monogamy measure of ``psi`` in one pass."""
    _require_multipartite(psi, focus_qubit)
    c_bip = concurrence_pure_bipartition(psi, focus_qubit)
    e_bip = ef_from_concurrence(c_bip)
    pairs = []
    for c in _pair_concurrences(psi, focus_qubit):
        e = ef_from_concurrence(c)
        pairs.append(PairMeasures(c, c**2, e, e**2))
    ckw = c_bip**2 - sum(p.concurrence_sq for p in pairs)
    tau = e_bip**2 - sum(p.eof_sq for p in pairs)
    return MonogamyReport(
        focus_qubit=focus_qubit,
        bipartition_concurrence=c_bip,
        bipartition_eof=e_bip,
        ckw_residual=ckw,
        tau_ef=tau,
        tau_f=tau if psi.n_qubits == 3 and focus_qubit == 0 else None,
        pair_measures=tuple(pairs),
    )
