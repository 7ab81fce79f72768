"""Upper and lower bounds on the overall outage probability.

With ``X_i = 1 / I_i**2`` the event "both end-to-end SNRs exceed the
threshold" is a polygon in the (X1, X2) plane.  Rectangles inscribed in and
circumscribing that polygon give the two bounds; each rectangle probability is
a product of hop CDFs (:func:`psi`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

from .channel import Hop, SeriesConfig, cdf_I
from .errors import BracketError, DomainError, SeriesReliabilityError

Which = Literal["upper", "lower"]
Metric = Literal["outage", "ber"]


@dataclass(frozen=True)
class LinkConfig:
    """System constants; ``snr0`` is the fading-free electrical SNR, linear scale."""

    snr0: float
    responsivity: float = 1.0
    modulation_index: float = 1.0
    delta: float = 2.0

    def __post_init__(self):
        if not self.snr0 > 0:
            raise DomainError(f"snr0 must be positive, got {self.snr0}")
        if not self.responsivity > 0:
            raise DomainError("responsivity must be positive")
        if not 0 < self.modulation_index <= 1:
            raise DomainError("modulation_index must lie in (0, 1]")
        if not self.delta > 0:
            raise DomainError("delta must be positive")

    @property
    def effective_snr(self) -> float:
        """``eta^2 xi^2 gamma_0``."""
        return (self.responsivity * self.modulation_index) ** 2 * self.snr0

    def with_snr0(self, snr0: float) -> "LinkConfig":
        return LinkConfig(snr0, self.responsivity, self.modulation_index, self.delta)


class HopPair(NamedTuple):
    """``hop1`` carries I1 (A to R), ``hop2`` carries I2 (B to R)."""

    hop1: Hop
    hop2: Hop

    @classmethod
    def identical(cls, hop: Hop) -> "HopPair":
        return cls(hop, hop)


@dataclass(frozen=True)
class Bounds:
    lower: float
    upper: float

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise ValueError(f"inconsistent bounds {self.lower} > {self.upper}")


def _hop_cdf(x: float, hop: Hop, cfg: SeriesConfig) -> float:
    """``Pr[1/I^2 >= x] = F_I(1/sqrt(x))``."""
    if math.isinf(x):
        return 0.0
    return cdf_I(1.0 / math.sqrt(x), hop.turbulence, hop.pointing, cfg)


def _psi_complement(a: float, c: float, hops: HopPair, cfg: SeriesConfig) -> float:
    """``1 - psi(a, c)`` formed without subtracting from one."""
    if not (a > 0 and c > 0):
        raise DomainError(f"psi needs positive corners, got a={a}, c={c}")
    f2 = _hop_cdf(a, hops.hop2, cfg)
    f1 = _hop_cdf(c, hops.hop1, cfg)
    return f2 + f1 - f2 * f1


def psi(a: float, c: float, hops: HopPair, cfg: SeriesConfig = SeriesConfig()) -> float:
    """Probability of the rectangle ``{X2 < a, X1 < c}`` with ``X_i = 1 / I_i^2``."""
    if not (a > 0 and c > 0):
        raise DomainError(f"psi needs positive corners, got a={a}, c={c}")
    return (1.0 - _hop_cdf(a, hops.hop2, cfg)) * (1.0 - _hop_cdf(c, hops.hop1, cfg))


def outage_upper(
    link: LinkConfig, threshold_snr: float, hops: HopPair, cfg: SeriesConfig = SeriesConfig()
) -> float:
    """``1 - psi(K/3, K/3)`` with ``K = eta^2 xi^2 gamma_0 / threshold``."""
    if not threshold_snr > 0:
        raise DomainError("threshold_snr must be positive (linear scale)")
    k3 = link.effective_snr / (3.0 * threshold_snr)
    return min(max(_psi_complement(k3, k3, hops, cfg), 0.0), 1.0)


def outage_lower(
    link: LinkConfig, threshold_snr: float, hops: HopPair, cfg: SeriesConfig = SeriesConfig()
) -> float:
    """``1 - [psi(K/2, K/3) + psi(K/3, K/2) - psi(K/3, K/3)]``."""
    if not threshold_snr > 0:
        raise DomainError("threshold_snr must be positive (linear scale)")
    q = link.effective_snr / threshold_snr
    val = (
        _psi_complement(q / 2, q / 3, hops, cfg)
        + _psi_complement(q / 3, q / 2, hops, cfg)
        - _psi_complement(q / 3, q / 3, hops, cfg)
    )
    return min(max(val, 0.0), 1.0)


def outage_bounds(
    link: LinkConfig, threshold_snr: float, hops: HopPair, cfg: SeriesConfig = SeriesConfig()
) -> Bounds:
    lo = outage_lower(link, threshold_snr, hops, cfg)
    hi = outage_upper(link, threshold_snr, hops, cfg)
    return Bounds(lower=min(lo, hi), upper=hi)


def cdf_min_snr(
    x: float, which: Which, link: LinkConfig, hops: HopPair, cfg: SeriesConfig = SeriesConfig()
) -> float:
    """Bounding CDF of ``min(Gamma_BRA, Gamma_ARB)`` evaluated at ``x``."""
    if which == "upper":
        return outage_upper(link, x, hops, cfg)
    if which == "lower":
        return outage_lower(link, x, hops, cfg)
    raise ValueError(f"which must be 'upper' or 'lower', got {which!r}")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


BRACKET_DB = (0.0, 140.0)
TOL_DB = 0.01


def required_snr(
    target: float,
    which: Which,
    threshold_snr: float,
    hops: HopPair,
    cfg: SeriesConfig = SeriesConfig(),
    metric: Metric = "outage",
    link: LinkConfig | None = None,
    bracket: tuple[float, float] = BRACKET_DB,
    tol_db: float = TOL_DB,
) -> float:
    """Fading-free SNR (dB) at which the chosen bound equals ``target``.

    Bisection in dB.  The bound is assumed nonincreasing in ``snr0``; a probe
    where the series is unreliable lies on the low-SNR side of the reliable
    region and is treated as "bound above target".  If no reliable probe ever
    lies above the target the crossing cannot be located and BracketError is
    raised.  ``threshold_snr`` is
    ignored for ``metric="ber"``.  ``link`` supplies eta, xi and delta; its
    ``snr0`` is overridden.
    """
    if not 0 < target < 1:
        raise DomainError(f"target must lie in (0, 1), got {target}")
    if which not in ("upper", "lower"):
        raise ValueError(f"which must be 'upper' or 'lower', got {which!r}")
    base = link or LinkConfig(snr0=1.0)

    if metric == "outage":
        bound = outage_upper if which == "upper" else outage_lower

        def value(db: float) -> float:
            return bound(base.with_snr0(db_to_linear(db)), threshold_snr, hops, cfg)

    elif metric == "ber":
        from . import ber

        bound = ber.ber_upper if which == "upper" else ber.ber_lower

        def value(db: float) -> float:
            return bound(base.with_snr0(db_to_linear(db)), hops, cfg)

    else:
        raise ValueError(f"metric must be 'outage' or 'ber', got {metric!r}")

    def above(db: float) -> bool | None:
        try:
            return value(db) > target
        except SeriesReliabilityError:
            return None

    lo, hi = bracket
    if above(hi) is not False:
        raise BracketError(
            f"{which} {metric} bound does not fall to {target:g} by {hi:g} dB"
        )
    if above(lo) is False:
        raise BracketError(
            f"{which} {metric} bound is already below {target:g} at {lo:g} dB"
        )
    lo_reliable = above(lo) is True
    seen_above = lo_reliable
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        state = above(mid)
        if state is False:
            hi = mid
        else:
            lo, lo_reliable = mid, state is True
            seen_above |= lo_reliable
    if not seen_above:
        raise BracketError(
            f"{which} {metric} bound never exceeds {target:g} where the series is reliable; "
            f"the crossing, if any, lies below {hi:.2f} dB"
        )
    if not lo_reliable:
        raise SeriesReliabilityError(
            f"the {target:g} crossing of the {which} {metric} bound lies where the "
            f"series is unreliable (near {lo:.2f} dB)"
        )
    return 0.5 * (lo + hi)
