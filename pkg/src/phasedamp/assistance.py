"""Entanglement of assistance and the derived quantumness of a channel.

The assistance entanglement of a state is the best average entanglement
entropy over its pure-state decompositions.  For the Jamiolkowski state of a
phase-damping channel it equals log2(N) exactly when the channel is random
unitary, so the normalized deficit ("quantumness") vanishes exactly on the
random-unitary set.

The search runs over decompositions of length k parameterized by isometries,
via the exponential map on anti-Hermitian k x k matrices, with multistart
quasi-Newton ascent.  The reported value is the best decomposition found and
therefore a LOWER bound on the assistance entanglement; the quantumness
derived from it is an OVERESTIMATE of the true quantumness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur
from scipy.optimize import minimize

from phasedamp import kernel
from phasedamp._fallback import herm_to_theta, theta_to_herm
from phasedamp.channels import RANK_CUTOFF, PhaseDampingChannel
from phasedamp.choi import ChoiState, Decomposition, choi_state, decomposition_from_isometry

MAX_DECOMPOSITION_LEN = 16

BOUND_NOTE = (
    "e_a_lower is the best decomposition found (a lower bound on the "
    "assistance entanglement); q_a derived from it overestimates quantumness"
)


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for the multistart decomposition search.

    decomposition_len defaults to rank^2 (capped at 16) when None.  The seed
    feeds per-restart random streams; runs are reproducible and independent of
    restart execution order.
    """

    restarts: int = 20
    decomposition_len: int | None = None
    max_iters: int = 500
    objective_tol: float = 1e-7
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.max_iters < 1:
            raise ValueError("need at least one iteration")
        if self.objective_tol <= 0:
            raise ValueError("objective_tol must be positive")
        if self.decomposition_len is not None and self.decomposition_len < 1:
            raise ValueError("decomposition_len must be positive")


@dataclass(frozen=True)
class AssistanceResult:
    """Best decomposition found and the derived quantumness.

    q_a is clipped to [0, 1]; the unclipped value is kept in q_a_raw.
    `converged` means the two best restarts agreed within 10x objective_tol.
    """

    e_a_lower: float
    q_a: float
    q_a_raw: float
    decomposition: Decomposition
    converged: bool
    restart_values: tuple[float, ...]
    note: str = BOUND_NOTE


def _restart_rng(seed: int, index: int) -> np.random.Generator:
    # private stream per (seed, restart): restarts may run in any order
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _haar_start(k: int, rng: np.random.Generator) -> np.ndarray:
    """Exp-map parameters of a Haar-random unitary (uniform starting isometry)."""
    z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    qmat, rmat = np.linalg.qr(z)
    qmat = qmat * (np.diagonal(rmat) / np.abs(np.diagonal(rmat)))
    # unitary matrices are normal, so the Schur form is diagonal: read off the
    # eigenphases and rebuild the Hermitian logarithm
    tri, vecs = schur(qmat, output="complex")
    phases = np.angle(np.diagonal(tri))
    return herm_to_theta((vecs * phases) @ vecs.conj().T)


def _embed_eigvecs(vecs: np.ndarray, n: int) -> np.ndarray:
    """Lift eigenvectors of the correlation block to the full N^2 space."""
    full = np.zeros((n * n, vecs.shape[1]), dtype=complex)
    full[np.arange(n) * (n + 1), :] = vecs
    return full


def entanglement_of_assistance(
    rho: ChoiState, cfg: OptimizerConfig | None = None
) -> AssistanceResult:
    """Lower-bound the assistance entanglement of a channel's Jamiolkowski state.

    Maximizes the average entanglement over decompositions of length k by
    multistart quasi-Newton ascent in the isometry parameterization.  The
    plain eigendecomposition is always included as a candidate, so the result
    never falls below its average entanglement.
    """
    cfg = cfg or OptimizerConfig()
    n = rho.dim_n
    block = rho.correlation_block()
    lam, vecs = np.linalg.eigh(block)
    order = np.argsort(lam)[::-1]
    lam, vecs = lam[order], vecs[:, order]
    q = int(np.sum(lam > RANK_CUTOFF * lam[0]))
    k = cfg.decomposition_len if cfg.decomposition_len is not None else min(
        q * q, MAX_DECOMPOSITION_LEN
    )
    if k < q:
        raise ValueError(f"decomposition_len {k} is below the state rank {q}")
    amp = np.asfortranarray(vecs[:, :q] * np.sqrt(np.clip(lam[:q], 0.0, None)))

    def negated(theta):
        val, grad = kernel.avg_ent_grad(amp, theta, k, q)
        return -val, -grad

    # the gradient threshold matches the objective tolerance: near a smooth
    # maximum the value error is quadratic in the residual gradient
    options = {
        "maxiter": cfg.max_iters,
        "ftol": cfg.objective_tol * 1e-5,
        "gtol": cfg.objective_tol * 10.0,
    }
    baseline = kernel.avg_ent(amp, np.zeros(k * k), k, q)
    best_val, best_theta = baseline, np.zeros(k * k)
    values = []
    for j in range(cfg.restarts):
        theta0 = _haar_start(k, _restart_rng(cfg.seed, j))
        res = minimize(negated, theta0, jac=True, method="L-BFGS-B", options=options)
        val = float(-res.fun)
        values.append(val)
        if val > best_val:
            best_val, best_theta = val, res.x

    ranked = sorted(values, reverse=True)
    converged = len(ranked) >= 2 and ranked[0] - ranked[1] <= 10 * cfg.objective_tol

    mu, s = np.linalg.eigh(theta_to_herm(best_theta, k))
    u = ((s * np.exp(1j * mu)) @ s.conj().T)[:, :q]
    decomposition = decomposition_from_isometry(lam[:q], _embed_eigvecs(vecs[:, :q], n), u)

    # N = 1 channels are trivially unitary; the normalization is degenerate
    q_raw = 0.0 if n == 1 else 1.0 - best_val / float(np.log2(n))
    return AssistanceResult(
        e_a_lower=best_val,
        q_a=float(np.clip(q_raw, 0.0, 1.0)),
        q_a_raw=q_raw,
        decomposition=decomposition,
        converged=converged,
        restart_values=tuple(values),
    )


def quantumness_of_assistance(
    d: PhaseDampingChannel, cfg: OptimizerConfig | None = None
) -> AssistanceResult:
    """Quantumness 1 - E_A/log2(N) of a channel, from the decomposition search.

    Zero exactly for random-unitary channels; the returned value overestimates
    the true quantumness because e_a_lower underestimates E_A (see BOUND_NOTE).
    """
    return entanglement_of_assistance(choi_state(d), cfg)
