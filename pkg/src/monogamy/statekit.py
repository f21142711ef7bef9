"""State representation and measurement mechanics for n-qubit systems.

Conventions used throughout the package:

- qubit 0 is the most significant bit of the computational-basis index,
  so for three qubits |100> is basis index 4 and reshaping an amplitude
  vector to shape (2, 2, 2) puts qubit k on axis k;
- entropies are in bits (base-2 logarithms);
- eigenvalues in [-1e-10, 0) are treated as floating-point noise and
  clamped to 0, anything more negative raises NumericalValidityError.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

NEGATIVE_EIGENVALUE_FLOOR = -1e-10
NEGLIGIBLE_PROBABILITY = 1e-12

_AXIS_LETTERS = string.ascii_lowercase + string.ascii_uppercase


class NumericalValidityError(ValueError):
    """Numerical noise exceeded the floor that separates it from bad input."""


def _readonly(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector over ``n_qubits`` qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not isinstance(self.n_qubits, int) or self.n_qubits < 1:
            raise ValueError(f"n_qubits must be a positive integer, got {self.n_qubits!r}")
        amps = _readonly(np.asarray(self.amplitudes).reshape(-1))
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(
                f"amplitude vector has length {amps.size}, expected {2**self.n_qubits}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm {norm} deviates from 1 by more than 1e-12")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qubit (qubit k on axis k)."""
        return self.amplitudes.reshape([2] * self.n_qubits)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator on qubits."""

    dim: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        if not isinstance(self.dim, int) or self.dim < 1 or self.dim & (self.dim - 1):
            raise ValueError(f"dim must be a positive power of 2, got {self.dim!r}")
        entries = _readonly(np.asarray(self.entries))
        if entries.shape != (self.dim, self.dim):
            raise ValueError(f"entries shape {entries.shape} does not match dim {self.dim}")
        if np.max(np.abs(entries - entries.conj().T)) > 1e-12:
            raise ValueError("entries are not Hermitian within 1e-12")
        trace = complex(np.trace(entries))
        if abs(trace - 1.0) > 1e-12:
            raise ValueError(f"trace {trace} deviates from 1 by more than 1e-12")
        smallest = float(np.linalg.eigvalsh(entries)[0])
        if smallest < NEGATIVE_EIGENVALUE_FLOOR:
            raise NumericalValidityError(
                f"eigenvalue {smallest} below the {NEGATIVE_EIGENVALUE_FLOOR} noise floor"
            )
        object.__setattr__(self, "entries", entries)

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective qubit measurement along the Bloch direction (theta, phi).

    The outcome-0 projector is onto cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>,
    outcome 1 onto its orthogonal complement.
    """

    theta: float
    phi: float

    def __post_init__(self) -> None:
        theta = float(self.theta)
        phi = float(self.phi)
        if not -1e-12 <= theta <= np.pi + 1e-12:
            raise ValueError(f"theta must lie in [0, pi], got {theta}")
        if not -1e-12 <= phi < 2 * np.pi + 1e-12:
            raise ValueError(f"phi must lie in [0, 2*pi), got {phi}")
        object.__setattr__(self, "theta", min(max(theta, 0.0), float(np.pi)))
        object.__setattr__(self, "phi", phi % (2 * np.pi))

    def outcome_vectors(self) -> np.ndarray:
        """The two orthonormal single-qubit kets, shape (2, 2)."""
        half = 0.5 * self.theta
        phase = np.exp(1j * self.phi)
        return np.array(
            [
                [np.cos(half), phase * np.sin(half)],
                [np.sin(half), -phase * np.cos(half)],
            ],
            dtype=complex,
        )

    def projectors(self) -> np.ndarray:
        """Rank-1 projectors for outcomes 0 and 1, shape (2, 2, 2)."""
        vecs = self.outcome_vectors()
        return np.einsum("xi,xj->xij", vecs, vecs.conj())


@dataclass(frozen=True)
class SeededRng:
    """Counter-based random stream: (seed, stream_index) fixes every draw.

    Distinct stream indices address disjoint regions of the Philox counter
    space, so per-sample streams are independent of worker count or the
    order in which they are consumed.
    """

    seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        for name in ("seed", "stream_index"):
            value = getattr(self, name)
            if not isinstance(value, int) or not 0 <= value < 2**64:
                raise ValueError(f"{name} must be an integer in [0, 2^64), got {value!r}")

    def stream(self, stream_index: int) -> "SeededRng":
        return SeededRng(self.seed, stream_index)

    def generator(self) -> np.random.Generator:
        bit_gen = np.random.Philox(key=self.seed, counter=[0, 0, self.stream_index, 0])
        return np.random.Generator(bit_gen)


@dataclass(frozen=True)
class ConditionalOutcome:
    """One branch of a projective measurement.

    Branches with probability below NEGLIGIBLE_PROBABILITY carry no state
    (``state is None`` and ``negligible`` is set); conditional-entropy
    averages skip them since p*S -> 0 as p -> 0.
    """

    probability: float
    state: DensityMatrix | None
    negligible: bool = field(default=False)


def haar_random_pure(n_qubits: int, rng: SeededRng) -> PureState:
    """Draw a pure state uniformly (unitarily invariant measure).

    Samples 2^n independent standard complex Gaussians and normalizes,
    which is exactly the uniform distribution on the unit sphere of
    Hilbert space.
    """
    if not isinstance(n_qubits, int) or not 1 <= n_qubits <= 8:
        raise ValueError(f"n_qubits must be an integer in [1, 8], got {n_qubits!r}")
    gen = rng.generator()
    parts = gen.standard_normal((2**n_qubits, 2))
    amps = parts[:, 0] + 1j * parts[:, 1]
    amps /= np.linalg.norm(amps)
    return PureState(n_qubits, amps)


def density_from_pure(psi: PureState) -> DensityMatrix:
    """Rank-1 projector |psi><psi|."""
    return DensityMatrix(psi.dim, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def partial_trace(rho: DensityMatrix, n_qubits: int, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on the (strictly increasing) qubit indices in ``keep``."""
    if 2**n_qubits != rho.dim:
        raise ValueError(f"density matrix dim {rho.dim} does not match n_qubits={n_qubits}")
    keep = list(keep)
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if any(not isinstance(q, int) or not 0 <= q < n_qubits for q in keep):
        raise ValueError(f"keep indices must lie in [0, {n_qubits}), got {keep}")
    if any(b <= a for a, b in zip(keep, keep[1:])):
        raise ValueError(f"keep indices must be strictly increasing, got {keep}")

    tensor = rho.entries.reshape([2] * (2 * n_qubits))
    row = list(_AXIS_LETTERS[:n_qubits])
    col = list(_AXIS_LETTERS[n_qubits : 2 * n_qubits])
    for q in range(n_qubits):
        if q not in keep:
            col[q] = row[q]  # repeated index = trace over qubit q
    out = "".join(row[q] for q in keep) + "".join(col[q] for q in keep)
    reduced = np.einsum("".join(row + col) + "->" + out, tensor)
    d = 2 ** len(keep)
    return DensityMatrix(d, reduced.reshape(d, d))


def clamp_spectrum(eigenvalues: np.ndarray) -> np.ndarray:
    """Clamp an eigenvalue array to [0, 1], raising beyond the noise floor."""
    eigs = np.asarray(eigenvalues, dtype=float)
    smallest = float(eigs.min()) if eigs.size else 0.0
    if smallest < NEGATIVE_EIGENVALUE_FLOOR:
        raise NumericalValidityError(
            f"eigenvalue {smallest} below the {NEGATIVE_EIGENVALUE_FLOOR} noise floor"
        )
    return np.clip(eigs, 0.0, 1.0)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy -sum(p log2 p) in bits, with 0*log(0) taken as 0."""
    probs = clamp_spectrum(np.linalg.eigvalsh(rho.entries))
    positive = probs[probs > 0.0]
    return max(0.0, float(-np.sum(positive * np.log2(positive))))


def conditional_states(
    rho: DensityMatrix,
    n_qubits: int,
    measured_qubit: int,
    basis: MeasurementBasis,
) -> list[ConditionalOutcome]:
    """Measure one qubit projectively; return (p_x, reduced post-measurement state).

    The returned states live on the unmeasured qubits in their original
    order. Probabilities sum to 1; branches below NEGLIGIBLE_PROBABILITY
    are flagged rather than divided by ~0.
    """
    if 2**n_qubits != rho.dim:
        raise ValueError(f"density matrix dim {rho.dim} does not match n_qubits={n_qubits}")
    if not isinstance(measured_qubit, int) or not 0 <= measured_qubit < n_qubits:
        raise ValueError(f"measured_qubit must lie in [0, {n_qubits}), got {measured_qubit!r}")
    if n_qubits < 2:
        raise ValueError("conditional_states needs at least one unmeasured qubit")

    tensor = rho.entries.reshape([2] * (2 * n_qubits))
    vectors = basis.outcome_vectors()
    d_rest = 2 ** (n_qubits - 1)

    outcomes = []
    for x in range(2):
        v = vectors[x]
        # <v|_m rho |v>_m: contract the measured qubit's row and column axes.
        block = np.tensordot(v.conj(), tensor, axes=([0], [measured_qubit]))
        block = np.tensordot(block, v, axes=([n_qubits + measured_qubit - 1], [0]))
        block = block.reshape(d_rest, d_rest)
        p = float(np.trace(block).real)
        if p < NEGLIGIBLE_PROBABILITY:
            outcomes.append(ConditionalOutcome(max(p, 0.0), None, negligible=True))
        else:
            outcomes.append(ConditionalOutcome(p, DensityMatrix(d_rest, block / p)))
    return outcomes


def hermitian_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > 1e-10:
        raise ValueError("matrix is not Hermitian within 1e-10")
    return np.linalg.eigvalsh(m)[::-1]


def state_to_json_dict(psi: PureState) -> dict:
    """JSON representation: {"n_qubits": n, "amplitudes": [[re, im], ...]}."""
    pairs = [[float(a.real), float(a.imag)] for a in psi.amplitudes]
    return {"n_qubits": psi.n_qubits, "amplitudes": pairs}


def state_from_json_dict(obj: object) -> PureState:
    """Parse the state-file dictionary, validating shape and normalization."""
    if not isinstance(obj, dict):
        raise ValueError(f"state object must be a JSON object, got {type(obj).__name__}")
    missing = {"n_qubits", "amplitudes"} - set(obj)
    if missing:
        raise ValueError(f"state object is missing keys: {sorted(missing)}")
    n = obj["n_qubits"]
    raw = obj["amplitudes"]
    if not isinstance(n, int):
        raise ValueError(f"n_qubits must be an integer, got {n!r}")
    if not isinstance(raw, list) or not all(
        isinstance(pair, (list, tuple)) and len(pair) == 2 for pair in raw
    ):
        raise ValueError("amplitudes must be a list of [re, im] pairs")
    amps = np.array([complex(float(re), float(im)) for re, im in raw])
    return PureState(n, amps)


def save_state(psi: PureState, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json_dict(psi), fh, indent=2)
        fh.write("\n")


def load_state(path) -> PureState:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json_dict(json.load(fh))
