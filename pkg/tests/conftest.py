import heapq

import numpy as np
import pytest

from monogamy.montecarlo import RunConfig, run_sweep
from monogamy.statekit import DensityMatrix, PureState, SeededRng, haar_random_pure

ACCEPTANCE_SEED = 20240809


def random_pure(n_qubits: int, seed: int, index: int = 0) -> PureState:
    return haar_random_pure(n_qubits, SeededRng(seed, index))


def random_two_qubit_mixed(seed: int, index: int = 0) -> DensityMatrix:
    """Generic rank-2 two-qubit mixed state: a reduced Haar 3-qubit state."""
    from monogamy.statekit import density_from_pure, partial_trace

    psi = random_pure(3, seed, index)
    return partial_trace(density_from_pure(psi), 3, [0, 2])


def bell_state() -> PureState:
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1.0 / np.sqrt(2.0)
    return PureState(2, amps)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class TopByEfSum:
    """Record sink keeping the top-k samples by pairwise EF sum."""

    def __init__(self, k: int) -> None:
        self.k = k
        self._heap: list[tuple[float, int, float]] = []

    def __call__(self, records) -> None:
        for r in records:
            item = (r.e_sum, r.sample_index, r.s1)
            if len(self._heap) < self.k:
                heapq.heappush(self._heap, item)
            elif item > self._heap[0]:
                heapq.heapreplace(self._heap, item)

    def entries(self) -> list[tuple[float, int, float]]:
        return sorted(self._heap, reverse=True)


@pytest.fixture(scope="session")
def sweep3_1m():
    """One million 3-qubit samples: summary plus the top-100 by EF sum."""
    top = TopByEfSum(100)
    summary = run_sweep(
        RunConfig(n_qubits=3, n_samples=10**6, seed=ACCEPTANCE_SEED, worker_hint=2),
        record_sink=top,
    )
    return summary, top.entries()


@pytest.fixture(scope="session")
def sweep4_100k():
    return run_sweep(
        RunConfig(n_qubits=4, n_samples=10**5, seed=ACCEPTANCE_SEED + 1, worker_hint=2)
    )


@pytest.fixture(scope="session")
def sweep3_100k_records():
    """10^5 3-qubit samples with full records kept in memory."""
    records = []
    summary = run_sweep(
        RunConfig(n_qubits=3, n_samples=10**5, seed=ACCEPTANCE_SEED + 2, worker_hint=2),
        record_sink=records.extend,
    )
    return summary, records


@pytest.fixture(scope="session")
def identities_1k_full():
    """10^3 3-qubit samples with the correlation identities: (summary, records)."""
    records = []
    summary = run_sweep(
        RunConfig(
            n_qubits=3,
            n_samples=10**3,
            seed=ACCEPTANCE_SEED + 3,
            compute_correlations=True,
            worker_hint=2,
        ),
        record_sink=records.extend,
    )
    return summary, records


@pytest.fixture(scope="session")
def identities_1k(identities_1k_full):
    return identities_1k_full[0]
