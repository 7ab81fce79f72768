"""Monte Carlo oracle for the exact outage probability and average BER.

Random numbers come from numpy's PCG64.  ``num_samples`` is cut into
consecutive blocks of ``BLOCK_SIZE`` draws; block ``b`` uses the generator
seeded with ``SeedSequence(seed).spawn(n_blocks)[b]``.  Blocks are independent
of how they are scheduled, so an estimate depends only on (seed, num_samples)
and not on the number of worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import PointingParams, TurbulenceParams
from .errors import DomainError
from .numerics import q_function
from .outage import HopPair, LinkConfig

BLOCK_SIZE = 1 << 20


@dataclass(frozen=True)
class McConfig:
    num_samples: int
    seed: int = 0

    def __post_init__(self):
        if int(self.num_samples) != self.num_samples or self.num_samples < 1:
            raise DomainError(f"num_samples must be a positive integer, got {self.num_samples}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int


def sample_turbulence(turb: TurbulenceParams, rng: np.random.Generator, size=None):
    """Unit-mean Gamma-Gamma draws ``X * Y``, X ~ Gamma(alpha, 1/alpha), Y ~ Gamma(beta, 1/beta)."""
    x = rng.gamma(turb.alpha, 1.0 / turb.alpha, size)
    y = rng.gamma(turb.beta, 1.0 / turb.beta, size)
    return x * y


def sample_pointing(point: PointingParams, rng: np.random.Generator, size=None):
    """Misalignment factor ``A0 * U**(1/gamma_sq)``, the inverse of its CDF ``(i/A0)**gamma_sq``."""
    # 1 - U lies in (0, 1], avoiding a zero irradiance from U == 0
    u = 1.0 - rng.random(size)
    return point.a0 * u ** (1.0 / point.gamma_sq)


def sample_irradiance(
    turb: TurbulenceParams, point: PointingParams, rng: np.random.Generator, size=None
):
    """Draw ``I = X * Y * A0 * U**(1/gamma_sq)`` (turbulence draws first, then U)."""
    return sample_turbulence(turb, rng, size) * sample_pointing(point, rng, size)


def instantaneous_snrs(i1, i2, link: LinkConfig):
    """``(Gamma_BRA, Gamma_ARB)`` for irradiances ``i1`` (A-R) and ``i2`` (B-R)."""
    i1 = np.asarray(i1, dtype=float)
    i2 = np.asarray(i2, dtype=float)
    p = (i1 * i2) ** 2 * link.effective_snr
    at_a = p / (2.0 * i1**2 + i2**2)
    at_b = p / (i1**2 + 2.0 * i2**2)
    if at_a.ndim == 0:
        return float(at_a), float(at_b)
    return at_a, at_b


def _block_sizes(n: int) -> list[int]:
    full, rest = divmod(n, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _block_moments(args) -> tuple[float, float]:
    """Sum and sum of squares of the per-draw statistic for one block."""
    kind, seq, size, link, threshold, hops = args
    rng = np.random.Generator(np.random.PCG64(seq))
    i1 = sample_irradiance(hops.hop1.turbulence, hops.hop1.pointing, rng, size)
    i2 = sample_irradiance(hops.hop2.turbulence, hops.hop2.pointing, rng, size)
    at_a, at_b = instantaneous_snrs(i1, i2, link)
    gmin = np.minimum(at_a, at_b)
    if kind == "outage":
        stat = (gmin < threshold).astype(float)
    else:
        stat = q_function(np.sqrt(link.delta * gmin))
    return math.fsum(stat.tolist()), math.fsum((stat * stat).tolist())


def _estimate(kind, link, threshold, hops, mc: McConfig, workers: int) -> McEstimate:
    sizes = _block_sizes(mc.num_samples)
    seqs = np.random.SeedSequence(mc.seed).spawn(len(sizes))
    jobs = [(kind, s, n, link, threshold, hops) for s, n in zip(seqs, sizes)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            moments = list(pool.map(_block_moments, jobs))
    else:
        moments = [_block_moments(job) for job in jobs]
    n = mc.num_samples
    total = math.fsum(m[0] for m in moments)
    total_sq = math.fsum(m[1] for m in moments)
    mean = total / n
    if n == 1:
        # one draw says nothing about spread
        return McEstimate(mean, math.inf, 1)
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return McEstimate(mean, math.sqrt(var / n), n)


def mc_outage(
    link: LinkConfig, threshold_snr: float, hops: HopPair, mc: McConfig, workers: int = 1
) -> McEstimate:
    """Fraction of fading states with ``min(Gamma_BRA, Gamma_ARB) < threshold_snr``.

    With no outage events the estimate is 0 with zero standard error, which is
    only a one-sided statement about the true probability.
    """
    if not threshold_snr > 0:
        raise DomainError("threshold_snr must be positive")
    return _estimate("outage", link, threshold_snr, hops, mc, workers)


def mc_ber(link: LinkConfig, hops: HopPair, mc: McConfig, workers: int = 1) -> McEstimate:
    """Semi-analytic BER: mean of ``Q(sqrt(delta * min SNR))`` over fading states."""
    return _estimate("ber", link, None, hops, mc, workers)

