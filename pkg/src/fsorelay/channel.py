"""Gamma-Gamma turbulence combined with misalignment (pointing-error) fading.

The irradiance of one hop is ``I = I_a * I_p`` where ``I_a`` is unit-mean
Gamma-Gamma and ``I_p`` follows the power law ``gamma_sq / A0**gamma_sq *
i**(gamma_sq - 1)`` on ``[0, A0]``.  Both the PDF and CDF of ``I`` are
evaluated through the generalized power series of the modified Bessel function,
truncated at ``SeriesConfig.truncation``.
"""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PoleError, SeriesReliabilityError
from .numerics import SignedLogValue, log_gamma_signed, sum_signed_log_arrays

logger = logging.getLogger(__name__)

POLE_TOL = 1e-6
# per-term relative rounding error after exp() of a log-domain product
TERM_RELERR = 32 * sys.float_info.epsilon


def _integer_distance(x: float) -> float:
    return abs(x - round(x))


@dataclass(frozen=True)
class TurbulenceParams:
    """Gamma-Gamma shape parameters: ``alpha`` (large scale), ``beta`` (small scale)."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError(f"alpha and beta must be positive, got {self.alpha}, {self.beta}")
        diff = self.alpha - self.beta
        if _integer_distance(diff) < POLE_TOL:
            raise PoleError(
                f"alpha - beta = {diff!r} is within {POLE_TOL:g} of an integer; "
                "1/sin(pi (alpha - beta)) is singular there. Perturb alpha or beta by ~1e-4."
            )


@dataclass(frozen=True)
class GeometryInputs:
    """Link geometry in SI units; ``refraction_structure`` is C_n^2 in m^(-2/3)."""

    refraction_structure: float
    wavelength: float
    aperture_diameter: float
    link_distance: float

    def __post_init__(self):
        for name in ("refraction_structure", "wavelength", "aperture_diameter", "link_distance"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class PointingParams:
    """Misalignment fading: ``gamma_sq`` = (w_zeq / 2 sigma_s)^2, ``a0`` = power at zero offset."""

    gamma_sq: float
    a0: float

    def __post_init__(self):
        if not self.gamma_sq > 0:
            raise DomainError(f"gamma_sq must be positive, got {self.gamma_sq}")
        if not 0 < self.a0 <= 1:
            raise DomainError(f"a0 must lie in (0, 1], got {self.a0}")


@dataclass(frozen=True)
class BeamInputs:
    aperture_radius: float
    beam_waist: float
    jitter_stddev: float

    def __post_init__(self):
        for name in ("aperture_radius", "beam_waist", "jitter_stddev"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation and reliability tolerances for the power series.

    ``truncation`` is the index J of the last retained term.  A series is
    rejected when its last term exceeds ``truncation_rtol`` times the sum, or
    when the estimated cancellation error exceeds ``cancellation_rtol``.
    """

    truncation: int = 100
    truncation_rtol: float = 1e-9
    cancellation_rtol: float = 1e-3

    def __post_init__(self):
        if int(self.truncation) != self.truncation or self.truncation < 0:
            raise DomainError(f"truncation must be a nonnegative integer, got {self.truncation}")


class Hop(NamedTuple):
    turbulence: TurbulenceParams
    pointing: PointingParams


# gamma_sq this large makes the misalignment factor numerically inert
NO_POINTING = PointingParams(gamma_sq=1e8, a0=1.0)

_PRESETS = {
    "strong": TurbulenceParams(4.2, 1.4),
    "moderate": TurbulenceParams(4.0, 1.9),
    "weak": TurbulenceParams(8.5, 6.7),
}


def regime_preset(name: str) -> TurbulenceParams:
    try:
        return _PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown turbulence regime {name!r}; expected one of {sorted(_PRESETS)}"
        ) from None


def turbulence_from_geometry(geom: GeometryInputs) -> TurbulenceParams:
    """Rytov-variance based (alpha, beta) for a plane wave with aperture averaging."""
    k = 2.0 * math.pi / geom.wavelength
    chi2 = 0.5 * geom.refraction_structure * k ** (7.0 / 6.0) * geom.link_distance ** (11.0 / 6.0)
    d2 = k * geom.aperture_diameter**2 / (4.0 * geom.link_distance)
    chi_125 = chi2 ** (6.0 / 5.0)  # chi^(12/5)
    arg_a = 0.49 * chi2 / (1.0 + 0.18 * d2 + 0.56 * chi_125) ** (7.0 / 6.0)
    arg_b = (
        0.51 * chi2 * (1.0 + 0.69 * chi_125) ** (-5.0 / 6.0)
        / (1.0 + 0.9 * d2 + 0.62 * d2 * chi_125) ** (5.0 / 6.0)
    )
    return TurbulenceParams(alpha=1.0 / math.expm1(arg_a), beta=1.0 / math.expm1(arg_b))


def pointing_from_beam(beam: BeamInputs) -> PointingParams:
    v = math.sqrt(math.pi) * beam.aperture_radius / (math.sqrt(2.0) * beam.beam_waist)
    erf_v = math.erf(v)
    wz_eq_sq = beam.beam_waist**2 * math.sqrt(math.pi) * erf_v / (2.0 * v * math.exp(-v * v))
    gamma_sq = wz_eq_sq / (4.0 * beam.jitter_stddev**2)
    return PointingParams(gamma_sq=gamma_sq, a0=erf_v**2)


def pointing_from_normalized(wz_over_r: float, sigma_over_r: float) -> PointingParams:
    """Pointing parameters from beamwidth and jitter normalized by the aperture radius."""
    return pointing_from_beam(BeamInputs(1.0, wz_over_r, sigma_over_r))


def series_coeff(j: int, a: float, b: float) -> SignedLogValue:
    """``a_j(a, b) = pi (ab)^(j+b) / (sin[pi(a-b)] Gamma(a) Gamma(b) Gamma(j-a+b+1) j!)``."""
    if j < 0 or int(j) != j:
        raise DomainError(f"j must be a nonnegative integer, got {j}")
    j = int(j)
    s = math.sin(math.pi * (a - b))
    if _integer_distance(a - b) < POLE_TOL or s == 0.0:
        raise PoleError(f"sin(pi ({a} - {b})) vanishes; a_j is singular")
    g_shift = log_gamma_signed(j - a + b + 1.0)  # raises at the poles of Gamma
    sign = (1 if s > 0 else -1) * g_shift.sign
    log_mag = (
        math.log(math.pi)
        + (j + b) * math.log(a * b)
        - math.log(abs(s))
        - math.lgamma(a)
        - math.lgamma(b)
        - g_shift.log_magnitude
        - math.lgamma(j + 1.0)
    )
    return SignedLogValue(sign, log_mag)


@lru_cache(maxsize=256)
def _coeff_table(a: float, b: float, truncation: int) -> tuple[np.ndarray, np.ndarray]:
    coeffs = [series_coeff(j, a, b) for j in range(truncation + 1)]
    signs = np.array([c.sign for c in coeffs], dtype=float)
    logs = np.array([c.log_magnitude for c in coeffs], dtype=float)
    signs.flags.writeable = False
    logs.flags.writeable = False
    return signs, logs


def _check_pointing_poles(gamma_sq: float, exps: np.ndarray) -> None:
    gap = np.abs(gamma_sq - exps)
    if np.any(gap < POLE_TOL):
        bad = float(exps[np.argmin(gap)])
        raise PoleError(
            f"gamma_sq = {gamma_sq!r} is within {POLE_TOL:g} of series exponent {bad:g}; "
            "perturb the pointing inputs by ~1e-4"
        )


class CdfSeries(NamedTuple):
    """CDF of one hop written as ``sum_k sign_k * exp(log_k) * i**exp_k``.

    The first half of each array is the ``a_j(alpha, beta)`` branch, the second
    half the ``a_j(beta, alpha)`` branch, each ordered by ``j = 0..J``.
    """

    signs: np.ndarray
    logs: np.ndarray
    exps: np.ndarray


@lru_cache(maxsize=256)
def cdf_series(hop: Hop, truncation: int) -> CdfSeries:
    """Coefficients of ``F_I(i) = (g2/A0) sum a_j i^e / (e (g2 - e) A0^(e-1))``.

    Here ``g2`` is ``gamma_sq`` and ``e = j + beta`` (or ``j + alpha`` for the
    swapped branch).
    """
    turb, point = hop
    g2, a0 = point.gamma_sq, point.a0
    j = np.arange(truncation + 1, dtype=float)
    signs, logs, exps = [], [], []
    for p, q in ((turb.alpha, turb.beta), (turb.beta, turb.alpha)):
        a_sign, a_log = _coeff_table(p, q, truncation)
        e = j + q
        _check_pointing_poles(g2, e)
        signs.append(a_sign * np.sign(g2 - e))
        logs.append(
            math.log(g2) + a_log - np.log(e) - np.log(np.abs(g2 - e)) - e * math.log(a0)
        )
        exps.append(e)
    out = CdfSeries(np.concatenate(signs), np.concatenate(logs), np.concatenate(exps))
    for arr in out:
        arr.flags.writeable = False
    return out


def series_sum_with_error(
    signs: np.ndarray,
    logs: np.ndarray,
    last_mask: np.ndarray,
    cfg: SeriesConfig,
    what: str,
) -> tuple[float, float]:
    """Sum a truncated series; return the sum and its estimated rounding error.

    ``last_mask`` marks the terms with index J (the last retained term of each
    branch); they drive the convergence test, which raises on failure.  The
    rounding estimate is ``TERM_RELERR * sum(|terms|)``: every term carries a
    few ulps from exponentiating its log, and cancellation does not shrink them.
    """
    total = sum_signed_log_arrays(signs, logs)
    live = signs != 0
    abs_sum = math.fsum(np.exp(logs[live]).tolist())
    last = float(np.max(np.exp(logs[last_mask]), initial=0.0))
    if last > cfg.truncation_rtol * abs(total):
        raise SeriesReliabilityError(
            f"{what}: series not converged at J={cfg.truncation} "
            f"(last term {last:.3g} vs sum {total:.3g}); increase J or move to smaller arguments"
        )
    return total, TERM_RELERR * abs_sum


def require_precision(value: float, err: float, cfg: SeriesConfig, what: str) -> None:
    if err > cfg.cancellation_rtol * abs(value):
        raise SeriesReliabilityError(
            f"{what}: cancellation between series terms leaves an estimated error of "
            f"{err:.3g} on a value of {value:.3g}; no reliable digits at this argument"
        )


def checked_series_sum(
    signs: np.ndarray,
    logs: np.ndarray,
    last_mask: np.ndarray,
    cfg: SeriesConfig,
    what: str,
) -> float:
    """Sum a truncated series, refusing unconverged or cancellation-dominated results."""
    total, err = series_sum_with_error(signs, logs, last_mask, cfg, what)
    require_precision(total, err, cfg, what)
    return total


def _last_mask(truncation: int) -> np.ndarray:
    mask = np.zeros(2 * (truncation + 1), dtype=bool)
    mask[truncation] = mask[-1] = True
    return mask


def _clamp(value: float, lo: float, hi: float, what: str) -> float:
    clamped = min(max(value, lo), hi)
    if abs(clamped - value) > 1e-12:
        logger.warning("%s = %.3e clamped to [%g, %g]", what, value, lo, hi)
    return clamped


def cdf_I(
    i: float,
    turb: TurbulenceParams,
    point: PointingParams,
    cfg: SeriesConfig = SeriesConfig(),
) -> float:
    """CDF of the combined turbulence and misalignment irradiance."""
    if not i >= 0:
        raise DomainError(f"irradiance must be nonnegative, got {i}")
    series = cdf_series(Hop(turb, point), cfg.truncation)
    if i == 0:
        return 0.0
    logs = series.logs + series.exps * math.log(i)
    total = checked_series_sum(series.signs, logs, _last_mask(cfg.truncation), cfg, f"cdf_I({i:g})")
    return _clamp(total, 0.0, 1.0, f"cdf_I({i:g})")


def pdf_I(
    i: float,
    turb: TurbulenceParams,
    point: PointingParams,
    cfg: SeriesConfig = SeriesConfig(),
) -> float:
    """PDF of the combined irradiance.

    ``(g2 / A0^g2) i^(g2-1) sum a_j (i/A0)^(e-g2) / (g2 - e)`` collapses to
    ``sum g2 a_j / (g2 - e) * i^(e-1) / A0^e``, which is evaluated directly so
    that ``i^(g2-1)`` never has to be formed for large ``g2``.
    """
    if not i >= 0:
        raise DomainError(f"irradiance must be nonnegative, got {i}")
    g2, a0 = point.gamma_sq, point.a0
    j = np.arange(cfg.truncation + 1, dtype=float)
    signs, logs, exps = [], [], []
    for p, q in ((turb.alpha, turb.beta), (turb.beta, turb.alpha)):
        a_sign, a_log = _coeff_table(p, q, cfg.truncation)
        e = j + q
        _check_pointing_poles(g2, e)
        signs.append(a_sign * np.sign(g2 - e))
        logs.append(math.log(g2) + a_log - np.log(np.abs(g2 - e)) - e * math.log(a0))
        exps.append(e - 1.0)
    signs, logs, exps = np.concatenate(signs), np.concatenate(logs), np.concatenate(exps)
    if i == 0:
        lowest = float(exps.min())
        if lowest > 0:
            return 0.0
        if lowest < 0:
            return math.inf
        return float(np.sum(signs[exps == 0] * np.exp(logs[exps == 0])))
    logs = logs + exps * math.log(i)
    total = checked_series_sum(signs, logs, _last_mask(cfg.truncation), cfg, f"pdf_I({i:g})")
    return _clamp(total, 0.0, math.inf, f"pdf_I({i:g})")
