"""Brute-force sampler of the null MANOVA largest-root statistic.

Draws X (p x m_dim) and Y (p x n_dim) with independent standard Gaussian
entries (real, or circularly symmetric complex), forms the Wishart pair
A = X X^H and B = Y Y^H, and records the largest eigenvalue of
(A + B)^{-1} B -- computed through the Cholesky-whitened Hermitian
eigenproblem L^{-1} B L^{-H} with A + B = L L^H.

Every replicate owns an isolated counter-based substream (Philox keyed by
the seed, counter block per replicate index), so runs are reproducible for a
fixed (seed, replicates, dims), independent of evaluation order, and safe to
parallelize.  Sorting the samples makes the output order-invariant.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import FieldKind, ManovaDims

__all__ = ["McConfig", "EmpiricalCdf", "sample_theta1", "empirical_cdf"]

_SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class McConfig:
    """Sampling request: model dimensions, field, replicate count, seed."""

    dims: ManovaDims
    field_kind: FieldKind = FieldKind.REAL
    replicates: int = 10000
    seed: int = 0

    def __post_init__(self):
        if self.replicates < 1:
            raise DomainError(f"replicates must be >= 1, got {self.replicates!r}")
        if not (0 <= self.seed < 2 ** 64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


@dataclass(frozen=True)
class EmpiricalCdf:
    """Sorted sample record; evaluation at a point is rank / replicates."""

    sorted_samples: np.ndarray
    replicates: int
    seed: int
    resamples: int = 0

    def evaluate(self, theta):
        """Empirical CDF value(s) at ``theta``."""
        ranks = np.searchsorted(self.sorted_samples, theta, side="right")
        return ranks / self.replicates


def _replicate_rng(seed: int, index: int, attempt: int = 0) -> np.random.Generator:
    # one 2^64 counter block per replicate; retries get disjoint sub-blocks
    counter = (index << 64) + (attempt << 48)
    return np.random.Generator(np.random.Philox(key=seed, counter=counter))


def _draw_theta1(rng, dims: ManovaDims, field_kind: FieldKind) -> float:
    p, m_dim, n_dim = dims.p, dims.m_dim, dims.n_dim
    if field_kind is FieldKind.REAL:
        x = rng.standard_normal((p, m_dim))
        y = rng.standard_normal((p, n_dim))
    else:
        x = (rng.standard_normal((p, m_dim)) + 1j * rng.standard_normal((p, m_dim))) * _SQRT_HALF
        y = (rng.standard_normal((p, n_dim)) + 1j * rng.standard_normal((p, n_dim))) * _SQRT_HALF
    a = x @ x.conj().T
    b = y @ y.conj().T
    chol = np.linalg.cholesky(a + b)
    t = np.linalg.solve(chol, b)
    w = np.linalg.solve(chol, t.conj().T)
    return float(np.linalg.eigvalsh(w)[-1].real)


def sample_theta1(cfg: McConfig, index: int = 0) -> float:
    """One replicate of the largest root, from substream ``index``.

    A failed Cholesky factorization (a probability-zero event) is retried on
    the replicate's next sub-block rather than aborting the run.
    """
    if not 0 <= index < cfg.replicates:
        raise DomainError(f"replicate index {index} outside [0, {cfg.replicates})")
    for attempt in range(64):
        rng = _replicate_rng(cfg.seed, index, attempt)
        try:
            return _draw_theta1(rng, cfg.dims, cfg.field_kind)
        except np.linalg.LinAlgError:
            continue
    raise np.linalg.LinAlgError("factorization failed 64 times in one replicate")


def empirical_cdf(cfg: McConfig) -> EmpiricalCdf:
    """All replicates of ``cfg``, sorted ascending; deterministic per seed."""
    samples = np.empty(cfg.replicates)
    resamples = 0
    for idx in range(cfg.replicates):
        for attempt in range(64):
            rng = _replicate_rng(cfg.seed, idx, attempt)
            try:
                samples[idx] = _draw_theta1(rng, cfg.dims, cfg.field_kind)
                break
            except np.linalg.LinAlgError:
                resamples += 1
        else:
            raise np.linalg.LinAlgError("factorization failed 64 times in one replicate")
    samples.sort()
    return EmpiricalCdf(
        sorted_samples=samples,
        replicates=cfg.replicates,
        seed=cfg.seed,
        resamples=resamples,
    )
