"""Outage and bit-error bounds for a two-way AF relay over Gamma-Gamma FSO links with pointing errors."""

from .ber import a1_series, a2_series, a3_series, a_func, ber_lower, ber_upper, conv_coeff
from .channel import (
    NO_POINTING,
    BeamInputs,
    GeometryInputs,
    Hop,
    PointingParams,
    SeriesConfig,
    TurbulenceParams,
    cdf_I,
    pdf_I,
    pointing_from_beam,
    pointing_from_normalized,
    regime_preset,
    series_coeff,
    turbulence_from_geometry,
)
from .errors import BracketError, DomainError, PoleError, SeriesReliabilityError
from .montecarlo import McConfig, McEstimate, mc_ber, mc_outage, sample_irradiance
from .numerics import SignedLogValue, log_gamma_signed, q_function, sum_signed_log
from .outage import (
    Bounds,
    HopPair,
    LinkConfig,
    cdf_min_snr,
    db_to_linear,
    linear_to_db,
    outage_bounds,
    outage_lower,
    outage_upper,
    psi,
    required_snr,
)

import types as _types

__all__ = [n for n, v in dict(globals()).items() if not n.startswith("_") and not isinstance(v, _types.ModuleType)]
