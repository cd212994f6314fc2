"""Pure numpy implementation of the decomposition-search kernels.

Mirrors `phasedamp._native` exactly; selected at import time by
`phasedamp.kernel` when the compiled extension is unavailable.

Objective: a rank-q state supported on the |mm> subspace is A A^H with A the
N x q root factor (eigenvectors times root eigenvalues).  A decomposition of
length k is picked by the first q columns u of exp(X) for an anti-Hermitian
k x k matrix X; member i has coefficient vector C[:, i] with C = A u^H, weight
w_i = |C[:, i]|^2, and entanglement equal to the Shannon entropy of its
normalized coefficient profile (the reduced states are diagonal there).  The
average entanglement in bits is

    f = (1/ln 2) * sum_i [ -sum_m P_mi ln P_mi + w_i ln w_i ],   P = |C|^2.

Parameter layout for X (k^2 reals): k diagonal entries t with X_ii = i*t,
then pairs (a, b) for i < j lexicographic with X_ij = a + i*b and
X_ji = -a + i*b.
"""

from __future__ import annotations

import numpy as np

LN2 = float(np.log(2.0))
_TINY = 1e-300


def theta_to_herm(theta: np.ndarray, k: int) -> np.ndarray:
    """Hermitian H with exp(i H) = exp(X(theta))."""
    h = np.zeros((k, k), dtype=complex)
    h[np.diag_indices(k)] = theta[:k]
    iu, ju = np.triu_indices(k, 1)
    a = theta[k::2]
    b = theta[k + 1 :: 2]
    h[iu, ju] = b - 1j * a
    h[ju, iu] = b + 1j * a
    return h


def herm_to_theta(h: np.ndarray) -> np.ndarray:
    """Inverse of `theta_to_herm`."""
    k = h.shape[0]
    theta = np.empty(k * k)
    theta[:k] = np.real(np.diag(h))
    iu, ju = np.triu_indices(k, 1)
    theta[k::2] = -np.imag(h[iu, ju])
    theta[k + 1 :: 2] = np.real(h[iu, ju])
    return theta


def _profile(amp: np.ndarray, u: np.ndarray):
    c = amp @ u.conj().T
    p = np.abs(c) ** 2
    return c, p, p.sum(axis=0)


def _entropy_bits(p: np.ndarray, w: np.ndarray) -> float:
    plogp = np.where(p > _TINY, p * np.log(np.where(p > _TINY, p, 1.0)), 0.0)
    wlogw = np.where(w > _TINY, w * np.log(np.where(w > _TINY, w, 1.0)), 0.0)
    return float((-plogp.sum() + wlogw.sum()) / LN2)


def avg_ent_isometry(amp: np.ndarray, u: np.ndarray) -> float:
    """Average entanglement (bits) of the decomposition picked by isometry u."""
    _, p, w = _profile(amp, u)
    return _entropy_bits(p, w)


def avg_ent(amp: np.ndarray, theta: np.ndarray, k: int, q: int) -> float:
    """Objective only, at exp-map parameters theta."""
    mu, s = np.linalg.eigh(theta_to_herm(theta, k))
    unitary = (s * np.exp(1j * mu)) @ s.conj().T
    return avg_ent_isometry(amp, unitary[:, :q])


def avg_ent_grad(
    amp: np.ndarray, theta: np.ndarray, k: int, q: int
) -> tuple[float, np.ndarray]:
    """Objective and its exact gradient in the theta parameters.

    The derivative of the exponential map is evaluated in the eigenbasis of X
    (divided-difference factor of the eigenvalue phases), so the gradient is
    exact up to round-off.
    """
    mu, s = np.linalg.eigh(theta_to_herm(theta, k))
    unitary = (s * np.exp(1j * mu)) @ s.conj().T
    c, p, w = _profile(amp, unitary[:, :q])
    f = _entropy_bits(p, w)

    # d f / d P_mi = log2(w_i / P_mi); zero contribution where the weight is
    mask = p > _TINY
    logw = np.log(np.where(w > _TINY, w, 1.0))
    logp = np.log(np.where(mask, p, 1.0))
    wmat = np.where(mask, (logw[None, :] - logp) / LN2, 0.0) * c

    gu = wmat.conj().T @ amp  # k x q
    gu_full = np.zeros((k, k), dtype=complex)
    gu_full[:, :q] = gu
    kmat = s.conj().T @ gu_full @ s

    # divided differences of e^{i mu}: phi_ab = e^{i(mu_a+mu_b)/2} sinc(d/2)
    half = 0.5 * (mu[:, None] - mu[None, :])
    ratio = np.where(half == 0.0, 1.0, np.sin(half) / np.where(half == 0.0, 1.0, half))
    phi = np.exp(0.5j * (mu[:, None] + mu[None, :])) * ratio
    z = s @ (kmat * np.conj(phi)) @ s.conj().T

    grad = np.empty(k * k)
    grad[:k] = 2.0 * np.imag(np.diag(z))
    iu, ju = np.triu_indices(k, 1)
    zij = z[iu, ju]
    zji = z[ju, iu]
    grad[k::2] = 2.0 * (zij.real - zji.real)
    grad[k + 1 :: 2] = 2.0 * (zij.imag + zji.imag)
    return f, grad
