"""Phase-damping channels on small Hilbert spaces.

A phase-damping channel leaves populations in a preferred basis untouched and
attenuates coherences entrywise.  It is fully described by a Hermitian,
positive-semidefinite matrix with unit diagonal whose entries are the pairwise
overlaps of a set of normalized dynamical vectors; applying the channel is an
entrywise (Hadamard) product with that matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
DIAGONAL_TOL = 1e-12
PSD_TOL = -1e-10
PSD_TOL_STRICT = -1e-12
UNIT_NORM_TOL = 1e-12
RANK_CUTOFF = 1e-10  # relative to the largest eigenvalue
MAX_DIM = 8  # channels are stored dense; larger spaces are out of scope


class ChannelValidationError(ValueError):
    """Raised when a matrix fails the phase-damping validity checks."""

    def __init__(self, report: "ValidationReport"):
        super().__init__(
            "invalid phase-damping channel: " + "; ".join(report.problems)
        )
        self.report = report


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the Gram-matrix validity checks for a candidate channel."""

    dim: int
    hermiticity_defect: float
    min_eigenvalue: float
    max_diag_deviation: float
    max_overlap: float
    accepted: bool
    problems: tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "hermiticity_defect": self.hermiticity_defect,
            "min_eigenvalue": self.min_eigenvalue,
            "max_diag_deviation": self.max_diag_deviation,
            "max_overlap": self.max_overlap,
            "accepted": self.accepted,
            "problems": list(self.problems),
        }


def validate_channel(matrix, strict: bool = False) -> ValidationReport:
    """Check that a square matrix is a valid phase-damping channel.

    The matrix must be Hermitian, positive semidefinite and have unit
    diagonal.  `strict` tightens the eigenvalue floor from -1e-10 to -1e-12.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"channel matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    herm_defect = float(np.max(np.abs(m - m.conj().T)))
    eigs = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    min_eig = float(eigs[0])
    max_diag_dev = float(np.max(np.abs(np.diag(m) - 1.0)))
    max_overlap = float(np.max(np.abs(m)))

    psd_floor = PSD_TOL_STRICT if strict else PSD_TOL
    problems = []
    if herm_defect > HERMITICITY_TOL:
        problems.append(f"not Hermitian (defect {herm_defect:.3e})")
    if min_eig < psd_floor:
        problems.append(f"not positive semidefinite (min eigenvalue {min_eig:.3e})")
    if max_diag_dev > DIAGONAL_TOL:
        problems.append(f"diagonal deviates from 1 (by {max_diag_dev:.3e})")
    if max_overlap > 1.0 + DIAGONAL_TOL:
        problems.append(f"overlap magnitude exceeds 1 ({max_overlap:.6f})")
    return ValidationReport(
        dim=n,
        hermiticity_defect=herm_defect,
        min_eigenvalue=min_eig,
        max_diag_deviation=max_diag_dev,
        max_overlap=max_overlap,
        accepted=not problems,
        problems=tuple(problems),
    )


@dataclass(frozen=True)
class DynamicalVectors:
    """N normalized vectors in C^r whose Gram matrix defines a channel."""

    dim_n: int
    rank_r: int
    vectors: np.ndarray  # shape (dim_n, rank_r), rows unit norm

    def __post_init__(self):
        if self.dim_n < 1 or self.rank_r < 1:
            raise ValueError("need dim_n >= 1 and rank_r >= 1")
        v = np.array(self.vectors, dtype=complex)
        if v.shape != (self.dim_n, self.rank_r):
            raise ValueError(f"vectors must have shape ({self.dim_n}, {self.rank_r})")
        norms = np.linalg.norm(v, axis=1)
        if np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOL:
            raise ValueError("dynamical vectors must be unit norm")
        object.__setattr__(self, "vectors", _readonly(v))


@dataclass(frozen=True)
class PhaseDampingChannel:
    """Phase-damping channel, stored as its overlap (Gram) matrix."""

    dim_n: int
    matrix_d: np.ndarray
    cached_rank: int | None = None

    def __post_init__(self):
        if not 1 <= self.dim_n <= MAX_DIM:
            raise ValueError(f"dimension must be in [1, {MAX_DIM}], got {self.dim_n}")
        m = np.array(self.matrix_d, dtype=complex)
        if m.shape != (self.dim_n, self.dim_n):
            raise ValueError(f"matrix shape {m.shape} does not match dim {self.dim_n}")
        report = validate_channel(m)
        if not report.accepted:
            raise ChannelValidationError(report)
        object.__setattr__(self, "matrix_d", _readonly(m))
        if self.cached_rank is not None and self.cached_rank != _numerical_rank(m):
            raise ValueError("cached_rank does not match the numerical rank")


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise ValueError(f"entries shape {m.shape} does not match dim {self.dim}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-12 or abs(np.trace(m).imag) > 1e-12:
            raise ValueError("density matrix must have unit trace")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] < PSD_TOL:
            raise ValueError("density matrix must be positive semidefinite")
        object.__setattr__(self, "entries", _readonly(m))


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators of a phase-damping channel (all diagonal)."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(_readonly(np.array(k, dtype=complex)) for k in self.operators)
        if not ops:
            raise ValueError("need at least one Kraus operator")
        n = ops[0].shape[0]
        ident = np.eye(n)
        tp = sum(k.conj().T @ k for k in ops)
        un = sum(k @ k.conj().T for k in ops)
        if np.max(np.abs(tp - ident)) > 1e-10:
            raise ValueError("Kraus set is not trace preserving")
        if np.max(np.abs(un - ident)) > 1e-10:
            raise ValueError("Kraus set is not unital")
        object.__setattr__(self, "operators", ops)


@dataclass(frozen=True)
class RuDecomposition:
    """Probabilistic mixture of unitary conjugations."""

    probs: np.ndarray
    unitaries: tuple[np.ndarray, ...]

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        us = tuple(_readonly(np.array(u, dtype=complex)) for u in self.unitaries)
        if p.ndim != 1 or len(us) != p.size:
            raise ValueError("need one weight per unitary")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        for u in us:
            if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > 1e-10:
                raise ValueError("all operators must be unitary")
        object.__setattr__(self, "probs", _readonly(p))
        object.__setattr__(self, "unitaries", us)


def _numerical_rank(matrix: np.ndarray) -> int:
    eigs = np.linalg.eigvalsh(matrix)
    top = eigs[-1]
    if top <= 0.0:
        return 0
    return int(np.sum(eigs > RANK_CUTOFF * top))


def channel_from_vectors(v: DynamicalVectors) -> PhaseDampingChannel:
    """Gram channel of the dynamical vectors: entry (m, n) = <a_n|a_m>."""
    d = v.vectors @ v.vectors.conj().T
    np.fill_diagonal(d, 1.0)  # rows are unit norm; pin exactly
    return PhaseDampingChannel(v.dim_n, d)


def vectors_from_channel(d: PhaseDampingChannel) -> DynamicalVectors:
    """Factor the overlap matrix back into dynamical vectors in C^rank.

    Deterministic convention: eigenvalues sorted descending, each eigenvector
    phased so its first non-negligible component is real positive.  The result
    is unique up to a global unitary on C^rank.
    """
    eigs, vecs = np.linalg.eigh(d.matrix_d)
    order = np.argsort(eigs)[::-1]
    eigs, vecs = eigs[order], vecs[:, order]
    r = _numerical_rank(d.matrix_d)
    eigs, vecs = eigs[:r], vecs[:, :r]
    for j in range(r):
        col = vecs[:, j]
        lead = col[np.argmax(np.abs(col) > 1e-12)]
        vecs[:, j] = col * (abs(lead) / lead)
    out = vecs * np.sqrt(np.clip(eigs, 0.0, None))
    out /= np.linalg.norm(out, axis=1)[:, None]
    return DynamicalVectors(d.dim_n, r, out)


def apply_channel(d: PhaseDampingChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply the channel as an entrywise product with the overlap matrix."""
    if rho.dim != d.dim_n:
        raise ValueError("channel and state dimensions do not match")
    return DensityMatrix(rho.dim, d.matrix_d * rho.entries)


def kraus_from_vectors(v: DynamicalVectors) -> KrausSet:
    """Diagonal Kraus operators K_i = diag of the i-th vector components."""
    return KrausSet(tuple(np.diag(v.vectors[:, i]) for i in range(v.rank_r)))


def apply_kraus(k: KrausSet, rho: DensityMatrix) -> DensityMatrix:
    """Apply the channel in operator-sum form."""
    if k.operators[0].shape[0] != rho.dim:
        raise ValueError("Kraus operators and state dimensions do not match")
    out = sum(op @ rho.entries @ op.conj().T for op in k.operators)
    return DensityMatrix(rho.dim, out)


def channel_rank(d: PhaseDampingChannel) -> int:
    """Kraus rank: eigenvalues of the overlap matrix above the relative cutoff."""
    if d.cached_rank is not None:
        return d.cached_rank
    return _numerical_rank(d.matrix_d)


def tetra_channel() -> PhaseDampingChannel:
    """Rank-2 channel on N=4 whose Bloch vectors form a regular tetrahedron.

    This is the maximal-volume two-qubit phase-damping channel; the four
    dynamical vectors are SIC-POVM states on one qubit.
    """
    x = 1.0 / np.sqrt(3.0)
    d = np.array(
        [
            [1, x, x, x],
            [x, 1, 1j * x, -1j * x],
            [x, -1j * x, 1, 1j * x],
            [x, 1j * x, -1j * x, 1],
        ],
        dtype=complex,
    )
    return PhaseDampingChannel(4, d, cached_rank=2)


def completely_decohering(n: int) -> PhaseDampingChannel:
    """Channel that maps every state to its diagonal (identity overlap matrix)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return PhaseDampingChannel(n, np.eye(n, dtype=complex), cached_rank=n)


def completely_decohering_ru() -> RuDecomposition:
    """Random-unitary realization of the completely decohering channel on N=4.

    Equal-weight mixture of the four sign-flip unitaries built from tensor
    products of the identity and the Pauli z matrix.
    """
    ident = np.eye(2)
    sz = np.diag([1.0, -1.0])
    us = tuple(np.kron(a, b) for a in (ident, sz) for b in (ident, sz))
    return RuDecomposition(np.full(4, 0.25), us)


TETRAHEDRAL_ANGLE = float(np.arccos(-1.0 / 3.0))


def mcmq_channel(alpha: float) -> PhaseDampingChannel:
    """One-parameter family closing the Bloch tetrahedron like an umbrella.

    One dynamical vector stays at the pole; the other three sit at polar angle
    `alpha` with azimuths 0 and +-2pi/3.  At alpha = 0 the channel is unitary
    (all-ones matrix); at the tetrahedral angle arccos(-1/3) it reaches the
    maximal-volume channel up to a diagonal-unitary gauge.
    """
    if not -1e-12 <= alpha <= TETRAHEDRAL_ANGLE + 1e-12:
        raise ValueError(
            f"alpha must lie in [0, arccos(-1/3)] = [0, {TETRAHEDRAL_ANGLE:.6f}]"
        )
    alpha = min(max(alpha, 0.0), TETRAHEDRAL_ANGLE)
    polar = np.array([0.0, alpha, alpha, alpha])
    azimuth = np.array([0.0, 0.0, 2 * np.pi / 3, -2 * np.pi / 3])
    vecs = np.stack(
        [
            np.array([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)])
            for t, p in zip(polar, azimuth)
        ]
    )
    return channel_from_vectors(DynamicalVectors(4, 2, vecs))


def mix_channels(channels, weights) -> PhaseDampingChannel:
    """Entrywise convex combination of channels of equal dimension."""
    w = np.asarray(weights, dtype=float)
    if len(channels) != w.size or w.size == 0:
        raise ValueError("need one weight per channel")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be nonnegative and sum to 1")
    n = channels[0].dim_n
    if any(c.dim_n != n for c in channels):
        raise ValueError("all channels must have the same dimension")
    mixed = sum(wi * c.matrix_d for wi, c in zip(w, channels))
    return PhaseDampingChannel(n, mixed)


def verify_ru_decomposition(ru: RuDecomposition, d: PhaseDampingChannel) -> float:
    """Worst-case deviation of the unitary mixture from the channel.

    Feeds every matrix unit |m><n| through the mixture and compares with the
    channel's action; returns the largest entrywise deviation.
    """
    n = d.dim_n
    if ru.unitaries[0].shape[0] != n:
        raise ValueError("decomposition and channel dimensions do not match")
    worst = 0.0
    for m in range(n):
        for nn in range(n):
            image = sum(
                p * np.outer(u[:, m], u[:, nn].conj())
                for p, u in zip(ru.probs, ru.unitaries)
            )
            target = np.zeros((n, n), dtype=complex)
            target[m, nn] = d.matrix_d[m, nn]
            worst = max(worst, float(np.max(np.abs(image - target))))
    return worst


def channel_to_json(d: PhaseDampingChannel) -> str:
    """Serialize to the interchange format {"n": N, "d": [[[re, im], ...], ...]}."""
    rows = [[[z.real, z.imag] for z in row] for row in d.matrix_d.tolist()]
    return json.dumps({"n": d.dim_n, "d": rows})


def matrix_from_json(text: str) -> tuple[int, np.ndarray]:
    """Parse the interchange format without validating channel properties."""
    data = json.loads(text)
    try:
        n = int(data["n"])
        rows = data["d"]
        m = np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in rows],
            dtype=complex,
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed channel JSON: {exc}") from exc
    if m.shape != (n, n):
        raise ValueError(f"channel JSON declares n={n} but matrix is {m.shape}")
    return n, m


def channel_from_json(text: str) -> PhaseDampingChannel:
    """Parse and validate a channel from the interchange format."""
    n, m = matrix_from_json(text)
    return PhaseDampingChannel(n, m)
