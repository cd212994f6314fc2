"""Jamiolkowski state of a channel, purity, and pure-state decompositions.

Sending one half of a maximally entangled pair through a phase-damping channel
produces a state supported on the span of |mm>; its only nonzero entries are
the channel overlaps divided by N.  Purity of that state measures how strongly
the channel decoheres, and decompositions of it carry the assistance
entanglement optimized in the `assistance` module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from phasedamp.channels import (
    PhaseDampingChannel,
    RANK_CUTOFF,
    _readonly,
)

ENTROPY_EIGENVALUE_CLIP = 1e-12


@dataclass(frozen=True)
class ChoiState:
    """State of the channel under the channel-state duality.

    dim_n is the channel dimension N; `matrix` is the N^2 x N^2 density matrix
    whose only nonzero entries sit at positions (m N + m, n N + n).
    """

    dim_n: int
    matrix: np.ndarray

    def __post_init__(self):
        n = self.dim_n
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (n * n, n * n):
            raise ValueError(f"matrix must be {n * n} x {n * n}")
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise ValueError("state must have unit trace")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("state must be Hermitian")
        support = np.zeros(n * n, dtype=bool)
        support[np.arange(n) * (n + 1)] = True
        off = m[np.ix_(~support, ~support)]
        cross = m[np.ix_(support, ~support)]
        if (off.size and np.max(np.abs(off)) > 1e-12) or (
            cross.size and np.max(np.abs(cross)) > 1e-12
        ):
            raise ValueError("state must be supported on the |mm> subspace")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] < -1e-10:
            raise ValueError("state must be positive semidefinite")
        object.__setattr__(self, "matrix", _readonly(m))

    def correlation_block(self) -> np.ndarray:
        """The N x N block at the |mm> positions (equals overlaps / N)."""
        idx = np.arange(self.dim_n) * (self.dim_n + 1)
        return self.matrix[np.ix_(idx, idx)]

    def rank(self) -> int:
        eigs = np.linalg.eigvalsh(self.correlation_block())
        return int(np.sum(eigs > RANK_CUTOFF * eigs[-1]))


@dataclass(frozen=True)
class Decomposition:
    """Weighted pure states mixing back to a target density matrix."""

    weights: np.ndarray
    states: np.ndarray  # shape (len, dim), rows unit norm

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        s = np.array(self.states, dtype=complex)
        if s.ndim != 2 or w.ndim != 1 or s.shape[0] != w.size:
            raise ValueError("need one weight per state")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-10:
            raise ValueError("weights must be nonnegative and sum to 1")
        if np.max(np.abs(np.linalg.norm(s, axis=1) - 1.0)) > 1e-10:
            raise ValueError("states must be unit norm")
        object.__setattr__(self, "weights", _readonly(w))
        object.__setattr__(self, "states", _readonly(s))

    def mixture(self) -> np.ndarray:
        """Reassemble sum_i w_i |psi_i><psi_i|."""
        return (self.states.T * self.weights) @ self.states.conj()


def choi_state(d: PhaseDampingChannel) -> ChoiState:
    """Jamiolkowski state of the channel."""
    n = d.dim_n
    m = np.zeros((n * n, n * n), dtype=complex)
    idx = np.arange(n) * (n + 1)
    m[np.ix_(idx, idx)] = d.matrix_d / n
    return ChoiState(n, m)


def choi_purity(d: PhaseDampingChannel) -> float:
    """Purity of the channel's Jamiolkowski state: mean of |D_mn|^2.

    Equals 1 exactly for unitary channels and 1/N for the completely
    decohering channel.
    """
    n = d.dim_n
    return float(np.sum(np.abs(d.matrix_d) ** 2) / n**2)


def entanglement_entropy(psi) -> float:
    """Entanglement entropy (bits) of a pure state on C^N x C^N.

    Base-2 von Neumann entropy of either reduced state; Schmidt weights below
    1e-12 contribute zero.
    """
    v = np.asarray(psi, dtype=complex).ravel()
    n = math.isqrt(v.size)
    if n * n != v.size:
        raise ValueError("state dimension must be a perfect square")
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError("state must be unit norm")
    schmidt = np.linalg.svd(v.reshape(n, n), compute_uv=False) ** 2
    schmidt = schmidt[schmidt > ENTROPY_EIGENVALUE_CLIP]
    return float(-(schmidt @ np.log2(schmidt)))


def decomposition_from_isometry(eigvals, eigvecs, u) -> Decomposition:
    """Pure-state decomposition of rho selected by an isometry.

    Every length-k decomposition of a rank-q state arises from a k x q matrix
    `u` with orthonormal columns acting on the eigenvectors: the i-th
    unnormalized member is sum_j conj(u_ij) sqrt(lambda_j) |e_j>, and its
    squared norm is the weight.  `eigvals`/`eigvecs` are used in descending
    eigenvalue order and the top q = u.shape[1] pairs are taken.
    """
    lam = np.asarray(eigvals, dtype=float)
    vecs = np.asarray(eigvecs, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2:
        raise ValueError("u must be a k x q matrix")
    k, q = u.shape
    if np.max(np.abs(u.conj().T @ u - np.eye(q))) > 1e-10:
        raise ValueError("u must have orthonormal columns")
    order = np.argsort(lam)[::-1]
    lam, vecs = lam[order], vecs[:, order]
    if q > lam.size or lam[q - 1] < -1e-10:
        raise ValueError(f"need {q} nonnegative eigenvalues")
    amp = vecs[:, :q] * np.sqrt(np.clip(lam[:q], 0.0, None))
    members = amp @ u.conj().T  # columns are the unnormalized states
    weights = np.linalg.norm(members, axis=0) ** 2
    keep = weights > 1e-14
    states = (members[:, keep] / np.sqrt(weights[keep])).T
    weights = weights[keep]
    return Decomposition(weights / weights.sum(), states)
