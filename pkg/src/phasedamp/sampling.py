"""Seedable random-channel generation and batch metric evaluation.

Channels are Gram matrices of vectors drawn uniformly from the unit sphere in
C^r (normalized complex Gaussians, exactly unitarily invariant).  Every batch
record owns a private random stream derived from (base_seed, index), so
results are byte-identical across repeat runs and across serial/parallel
execution.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from phasedamp.assistance import OptimizerConfig, quantumness_of_assistance
from phasedamp.bloch import bloch_volume
from phasedamp.channels import (
    DynamicalVectors,
    PhaseDampingChannel,
    channel_from_vectors,
    channel_rank,
)
from phasedamp.choi import choi_purity


@dataclass(frozen=True)
class SampleRecord:
    """One random channel with its metric triple (volume, purity, quantumness)."""

    channel: PhaseDampingChannel
    rank: int
    v_b: float
    purity: float
    q_a: float
    e_a_lower: float
    converged: bool
    sample_index: int
    seed: int


def random_unit_vector(r: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform unit vector in C^r via normalized standard complex Gaussians."""
    if r < 1:
        raise ValueError("dimension must be >= 1")
    while True:
        z = rng.standard_normal(r) + 1j * rng.standard_normal(r)
        norm = np.linalg.norm(z)
        if norm > 0.0:
            return z / norm


def random_channel(n: int, r: int, rng: np.random.Generator) -> PhaseDampingChannel:
    """Gram channel of n independent uniform unit vectors in C^r."""
    vecs = np.stack([random_unit_vector(r, rng) for _ in range(n)])
    return channel_from_vectors(DynamicalVectors(n, r, vecs))


def _channel_rng(base_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=base_seed, spawn_key=(index, 0))
    )


def _optimizer_seed(base_seed: int, index: int) -> int:
    seq = np.random.SeedSequence(entropy=base_seed, spawn_key=(index, 1))
    return int(seq.generate_state(1, np.uint64)[0])


def sample_record(
    n: int, r: int, base_seed: int, index: int, opt: OptimizerConfig
) -> SampleRecord:
    """Draw and measure the channel at a given stream index."""
    channel = random_channel(n, r, _channel_rng(base_seed, index))
    cfg = replace(opt, seed=_optimizer_seed(base_seed, index))
    result = quantumness_of_assistance(channel, cfg)
    return SampleRecord(
        channel=channel,
        rank=channel_rank(channel),
        v_b=bloch_volume(channel),
        purity=choi_purity(channel),
        q_a=result.q_a,
        e_a_lower=result.e_a_lower,
        converged=result.converged,
        sample_index=index,
        seed=base_seed,
    )


def _worker(args) -> SampleRecord:
    n, r, base_seed, index, opt = args
    return sample_record(n, r, base_seed, index, opt)


def sample_batch(
    count: int,
    n: int,
    r: int,
    base_seed: int,
    opt: OptimizerConfig | None = None,
    threads: int = 1,
) -> list[SampleRecord]:
    """Measure `count` random channels; deterministic in (base_seed, index).

    With threads > 1 the records are computed in a process pool; the per-index
    streams make the output independent of scheduling.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    opt = opt or OptimizerConfig()
    jobs = [(n, r, base_seed, i, opt) for i in range(count)]
    if threads > 1:
        chunk = max(1, count // (threads * 8))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_worker, jobs, chunksize=chunk))
    else:
        records = [sample_record(*job[:4], job[4]) for job in jobs]
    return records
