"""Independent reference implementations used to cross-check the package.

Everything here deliberately avoids the code paths under test: reduced
states come from explicit reshape/trace loops, measurement sandwiches use
full-size projector matrices built with Kronecker products, and entropies
go through a dense Hermitian eigensolver rather than closed forms.
"""

from __future__ import annotations

import numpy as np


def kron_chain(*mats: np.ndarray) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def reduce_keep(rho: np.ndarray, n_qubits: int, keep: list[int]) -> np.ndarray:
    """Partial trace by explicit axis tracing, independent of the package."""
    tensor = rho.reshape([2] * (2 * n_qubits))
    dims = list(range(n_qubits))
    for q in sorted(set(dims) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=q, axis2=q + tensor.ndim // 2)
    d = 2 ** len(keep)
    return tensor.reshape(d, d)


def entropy_bits(rho: np.ndarray) -> float:
    eigs = np.linalg.eigvalsh(rho)
    eigs = eigs[eigs > 1e-14]
    return float(-np.sum(eigs * np.log2(eigs)))


def bloch_kets(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [
            [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)],
            [np.sin(theta / 2), -np.exp(1j * phi) * np.cos(theta / 2)],
        ]
    )


def measure_qubit(rho: np.ndarray, n_qubits: int, qubit: int, theta: float, phi: float):
    """Projective measurement via full-size sandwich matrices.

    Returns [(p, normalized post-measurement state on the unmeasured
    qubits)] with the state set to None for negligible branches.
    """
    kets = bloch_kets(theta, phi)
    keep = [q for q in range(n_qubits) if q != qubit]
    outcomes = []
    for x in range(2):
        proj = np.outer(kets[x], kets[x].conj())
        ops = [proj if q == qubit else np.eye(2) for q in range(n_qubits)]
        full = kron_chain(*ops)
        sandwich = full @ rho @ full
        p = float(np.trace(sandwich).real)
        if p < 1e-12:
            outcomes.append((max(p, 0.0), None))
        else:
            outcomes.append((p, reduce_keep(sandwich, n_qubits, keep) / p))
    return outcomes


def grid_classical_correlation(
    rho_ab: np.ndarray,
    measured_side: str,
    n_theta: int = 256,
    n_phi: int = 512,
    chunk: int = 8192,
) -> float:
    """Dense-grid evaluation of the one-way classical correlation.

    Projectors are materialized as 4x4 matrices and post-measurement states
    recovered by explicit partial trace; entropies use a dense eigensolver.
    No refinement, so the result lower-bounds the true maximum by at most
    the grid resolution.
    """
    measured = 0 if measured_side == "first" else 1
    unmeasured = 1 - measured
    s_unm = entropy_bits(reduce_keep(rho_ab, 2, [unmeasured]))

    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()

    eye = np.eye(2)
    best = -np.inf
    for start in range(0, tt.size, chunk):
        th = tt[start : start + chunk]
        ph = pp[start : start + chunk]
        kets = np.stack(
            [
                np.stack([np.cos(th / 2), np.exp(1j * ph) * np.sin(th / 2)], axis=-1),
                np.stack([np.sin(th / 2), -np.exp(1j * ph) * np.cos(th / 2)], axis=-1),
            ]
        )  # (2, g, 2)
        cond_sum = np.zeros(th.size)
        for x in range(2):
            proj = np.einsum("gi,gj->gij", kets[x], kets[x].conj())
            if measured == 0:
                full = np.einsum("gij,kl->gikjl", proj, eye).reshape(-1, 4, 4)
            else:
                full = np.einsum("ij,gkl->gikjl", eye, proj).reshape(-1, 4, 4)
            sandwich = full @ rho_ab @ full
            t4 = sandwich.reshape(-1, 2, 2, 2, 2)
            if measured == 0:
                reduced = np.trace(t4, axis1=1, axis2=3)
            else:
                reduced = np.trace(t4, axis1=2, axis2=4)
            p = np.trace(reduced, axis1=1, axis2=2).real
            safe = np.where(p > 1e-12, p, 1.0)
            eigs = np.linalg.eigvalsh(reduced / safe[:, None, None])
            eigs = np.clip(eigs, 1e-300, 1.0)
            ent = -np.sum(eigs * np.log2(eigs), axis=-1)
            cond_sum += np.where(p > 1e-12, p * ent, 0.0)
        best = max(best, float(np.max(s_unm - cond_sum)))
    return best


def werner_concurrence(p: float) -> float:
    """Closed-form Wootters concurrence of p|psi-><psi-| + (1-p) I/4."""
    return max(0.0, (3.0 * p - 1.0) / 2.0)


def concurrence_direct_eigvals(rho: np.ndarray) -> float:
    """Wootters value via the non-Hermitian product rho * rho~ directly."""
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    yy = np.kron(sy, sy)
    rho_tilde = yy @ rho.conj() @ yy
    lam = np.sort(np.sqrt(np.abs(np.linalg.eigvals(rho @ rho_tilde).real)))[::-1]
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))
