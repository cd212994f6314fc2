"""Bloch-vector geometry of the dynamical vectors.

The pure-state projectors of a rank-r channel live on the generalized Bloch
sphere in R^(r^2-1).  The simplex volume they span is a witness for channels
outside the random-unitary set, and it can be read off the overlap matrix
alone through a Cayley-Menger determinant of the pairwise squared distances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from phasedamp.channels import (
    PhaseDampingChannel,
    _readonly,
    channel_rank,
    vectors_from_channel,
)

DEFAULT_VOLUME_TOL = 1e-7


@dataclass(frozen=True)
class GeneratorBasis:
    """Orthogonal traceless Hermitian generators, tr(g_i g_j) = 2 delta_ij."""

    rank_r: int
    generators: np.ndarray  # shape (r^2 - 1, r, r)

    def __post_init__(self):
        g = np.array(self.generators, dtype=complex)
        if g.shape != (self.rank_r**2 - 1, self.rank_r, self.rank_r):
            raise ValueError("generator array has wrong shape")
        object.__setattr__(self, "generators", _readonly(g))


@dataclass(frozen=True)
class BlochVector:
    """Real coordinates of a pure-state projector in a generator basis."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        object.__setattr__(self, "coords", _readonly(c))


@dataclass(frozen=True)
class SquaredDistanceMatrix:
    """Pairwise squared distances between the Bloch vectors of a channel."""

    entries: np.ndarray

    def __post_init__(self):
        s = np.array(self.entries, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError("squared-distance matrix must be square")
        if np.max(np.abs(s - s.T)) > 1e-12 or np.any(np.diag(s) != 0.0):
            raise ValueError("squared distances must be symmetric with zero diagonal")
        # unit-sphere scaling: orthogonal states sit at the diameter, s^2 = 4
        if s.size and (s.min() < 0.0 or s.max() > 4.0 + 1e-12):
            raise ValueError("squared Bloch distances must lie in [0, 4]")
        object.__setattr__(self, "entries", _readonly(s))


@dataclass(frozen=True)
class ExtremalityCertificate:
    """Result of the volume-based non-random-unitary test."""

    rank_r: int
    r_squared_le_n: bool
    best_volume: float
    certified_non_ru: bool
    witness_indices: tuple[int, ...]


def su_generators(r: int) -> GeneratorBasis:
    """Generalized Gell-Mann basis of su(r).

    Fixed ordering for reproducible coordinates: symmetric pair matrices for
    i < j (lexicographic), then antisymmetric pairs, then diagonal matrices.
    For r = 2 this is exactly (pauli_x, pauli_y, pauli_z).
    """
    if r < 2:
        raise ValueError("generator basis needs dimension >= 2")
    gens = []
    for i, j in itertools.combinations(range(r), 2):
        g = np.zeros((r, r), dtype=complex)
        g[i, j] = g[j, i] = 1.0
        gens.append(g)
    for i, j in itertools.combinations(range(r), 2):
        g = np.zeros((r, r), dtype=complex)
        g[i, j] = -1j
        g[j, i] = 1j
        gens.append(g)
    for l in range(1, r):
        diag = np.zeros(r)
        diag[:l] = 1.0
        diag[l] = -l
        gens.append(np.diag(diag).astype(complex) * np.sqrt(2.0 / (l * (l + 1))))
    return GeneratorBasis(r, np.stack(gens))


def bloch_from_state(a, basis: GeneratorBasis | None = None) -> BlochVector:
    """Bloch vector of a unit vector: coordinates <a|g_i|a>."""
    v = np.asarray(a, dtype=complex).ravel()
    if v.size < 2:
        raise ValueError("state must live in dimension >= 2")
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError("state must be unit norm")
    if basis is None:
        basis = su_generators(v.size)
    elif basis.rank_r != v.size:
        raise ValueError("basis dimension does not match the state")
    coords = np.real(np.einsum("m,imn,n->i", v.conj(), basis.generators, v))
    return BlochVector(coords)


def channel_bloch_vectors(d: PhaseDampingChannel) -> list[BlochVector]:
    """Bloch vectors of the channel's dynamical vectors (empty coords for rank 1)."""
    dv = vectors_from_channel(d)
    if dv.rank_r == 1:
        return [BlochVector(np.zeros(0)) for _ in range(dv.dim_n)]
    basis = su_generators(dv.rank_r)
    return [bloch_from_state(dv.vectors[m], basis) for m in range(dv.dim_n)]


def squared_distances(d: PhaseDampingChannel) -> SquaredDistanceMatrix:
    """Squared Bloch distances straight from the overlaps: 4 (1 - |D_mn|^2)."""
    s = 4.0 * (1.0 - np.abs(d.matrix_d) ** 2)
    np.fill_diagonal(s, 0.0)
    return SquaredDistanceMatrix(np.clip(s, 0.0, None))


def cayley_menger_volume(s) -> float:
    """Simplex volume of k points from their squared-distance matrix.

    Evaluates the bordered determinant of the squared distances with the
    standard (k-1)-simplex prefactor; round-off negatives are clipped to 0.
    """
    s2 = s.entries if isinstance(s, SquaredDistanceMatrix) else np.asarray(s, float)
    k = s2.shape[0]
    if k < 1 or s2.shape != (k, k):
        raise ValueError("need a square matrix of squared distances")
    bordered = np.ones((k + 1, k + 1))
    bordered[0, 0] = 0.0
    bordered[1:, 1:] = s2
    pref = (-1.0) ** k / (2.0 ** (k - 1) * math.factorial(k - 1) ** 2)
    vol_sq = pref * np.linalg.det(bordered)
    return math.sqrt(max(vol_sq, 0.0))


def bloch_volume(d: PhaseDampingChannel) -> float:
    """Volume of the simplex spanned by all N Bloch vectors of the channel."""
    return cayley_menger_volume(squared_distances(d))


def max_subvolume(d: PhaseDampingChannel) -> tuple[float, tuple[int, ...]]:
    """Best simplex volume over all principal rank^2-point subsets.

    Only meaningful when rank^2 < N, where the full N-point simplex is always
    degenerate; returns the achieving index set.
    """
    r = channel_rank(d)
    m = r * r
    n = d.dim_n
    if m >= n:
        raise ValueError("rank^2 >= N: use bloch_volume on the full point set")
    s2 = squared_distances(d).entries
    best = -1.0
    best_idx: tuple[int, ...] = ()
    for idx in itertools.combinations(range(n), m):
        vol = cayley_menger_volume(s2[np.ix_(idx, idx)])
        if vol > best:
            best, best_idx = vol, idx
    return best, best_idx


def extremality_certificate(
    d: PhaseDampingChannel, tol: float = DEFAULT_VOLUME_TOL
) -> ExtremalityCertificate:
    """Volume witness for channels outside the random-unitary set.

    Certifies only when 2 <= rank, rank^2 <= N and the relevant simplex volume
    exceeds `tol`; the criterion is one-directional, so an uncertified channel
    may or may not admit a random-unitary realization.  For rank^2 > N the
    full-simplex volume is still reported, as information only.
    """
    r = channel_rank(d)
    n = d.dim_n
    r2_le_n = r * r <= n
    if r >= 2 and r * r < n:
        best, idx = max_subvolume(d)
    else:
        best, idx = bloch_volume(d), tuple(range(n))
    certified = r >= 2 and r2_le_n and best > tol
    return ExtremalityCertificate(
        rank_r=r,
        r_squared_le_n=r2_le_n,
        best_volume=best,
        certified_non_ru=certified,
        witness_indices=idx,
    )


def _coords(b) -> np.ndarray:
    return b.coords if isinstance(b, BlochVector) else np.asarray(b, dtype=float)


def barycenter_purity(blochs) -> float:
    """Purity of a rank-2, N=4 channel from its Bloch vectors' barycenter."""
    pts = [_coords(b) for b in blochs]
    if len(pts) != 4 or any(p.shape != (3,) for p in pts):
        raise ValueError("need exactly 4 Bloch vectors in R^3")
    center = np.mean(pts, axis=0)
    return float(0.5 * (1.0 + center @ center))


def gram_volume_oracle(blochs) -> float:
    """Coordinate-based simplex volume, sqrt(det G)/(k-1)! on edge Gram matrix.

    Independent of the Cayley-Menger path; used to cross-check it in tests.
    """
    pts = [_coords(b) for b in blochs]
    k = len(pts)
    if k < 2:
        raise ValueError("need at least 2 points")
    edges = np.stack([p - pts[-1] for p in pts[:-1]])
    gram = edges @ edges.T
    return math.sqrt(max(np.linalg.det(gram), 0.0)) / math.factorial(k - 1)
