"""Average bit-error probability bounds for BPSK subcarrier intensity modulation.

Averaging ``Q(sqrt(delta * Gamma))`` against the bounding CDFs of the minimum
end-to-end SNR reduces to

    P(e) = (sqrt(2 pi) - A(u, v) [...]) / (2 sqrt(2 pi)),
    A(u, v) = sqrt(2 pi) - A1(u) - A2(v) + A3(u, v),

where A1, A2 and A3 integrate hop CDFs (and their product) against
``exp(-x/2) / sqrt(x)``.  Integrating the CDF power series term by term gives
closed forms built from ``2^(n/2) Gamma(n/2)``; those factors are folded into
the log-domain terms before anything is exponentiated.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np
from scipy.special import gammaln

from .channel import (
    Hop,
    SeriesConfig,
    cdf_series,
    require_precision,
    series_sum_with_error,
)
from .errors import DomainError
from .numerics import SignedLogValue, log_sum_signed
from .outage import HopPair, LinkConfig

Kind = Literal["1p", "2p", "3p", "4p"]

SQRT_2PI = math.sqrt(2.0 * math.pi)
LN2 = math.log(2.0)

# (branch used on the u side / hop2, branch used on the v side / hop1);
# branch 0 is the a_j(alpha, beta) series, branch 1 the a_j(beta, alpha) series
_KIND_BRANCHES = {"1p": (0, 0), "2p": (0, 1), "3p": (1, 0), "4p": (1, 1)}


def _log_gamma_moment(e: np.ndarray) -> np.ndarray:
    """``ln(2^((e+1)/2) Gamma((e+1)/2))`` = ln of the integral of x^(e/2) e^(-x/2) / sqrt(x)."""
    h = 0.5 * (np.asarray(e, dtype=float) + 1.0)
    return h * LN2 + gammaln(h)


def _scaled_factors(w: float, hop: Hop, truncation: int):
    """CDF series coefficients times ``w^(-e/2)``; the CDF at sqrt(x/w) is sum(f_k x^(e_k/2))."""
    series = cdf_series(hop, truncation)
    logs = series.logs - 0.5 * series.exps * math.log(w)
    return series.signs, logs, series.exps


def _check_positive(**kw: float) -> None:
    for name, val in kw.items():
        if not val > 0:
            raise DomainError(f"{name} must be positive, got {val}")


def _last_mask(n_blocks: int, truncation: int) -> np.ndarray:
    mask = np.zeros(n_blocks * (truncation + 1), dtype=bool)
    mask[truncation :: truncation + 1] = True
    return mask


def _a_series_err(w: float, hop: Hop, cfg: SeriesConfig) -> tuple[float, float]:
    _check_positive(w=w)
    if math.isinf(w):
        return 0.0, 0.0
    signs, logs, exps = _scaled_factors(w, hop, cfg.truncation)
    logs = logs + _log_gamma_moment(exps)
    return series_sum_with_error(signs, logs, _last_mask(2, cfg.truncation), cfg, f"A(w={w:g})")


def a_series(w: float, hop: Hop, cfg: SeriesConfig = SeriesConfig()) -> float:
    """``int_0^inf F_I(sqrt(x/w)) exp(-x/2) / sqrt(x) dx`` from the term-wise closed form."""
    val, err = _a_series_err(w, hop, cfg)
    require_precision(val, err, cfg, f"A(w={w:g})")
    return val


def a1_series(u: float, hop: Hop, cfg: SeriesConfig = SeriesConfig()) -> float:
    """A1(u); pass the B-R hop (``hops.hop2``)."""
    return a_series(u, hop, cfg)


def a2_series(v: float, hop: Hop, cfg: SeriesConfig = SeriesConfig()) -> float:
    """A2(v); pass the A-R hop (``hops.hop1``)."""
    return a_series(v, hop, cfg)


def _split_factor(w: float, hop: Hop, branch: int, truncation: int):
    """``a_k u^(-(k+b)/2) / ((k+b)(k+b-g2) A0^(k+b-1))`` for k = 0..J of one branch.

    This is the CDF coefficient with the ``g2/A0`` prefactor removed and the
    ``(g2 - e)`` denominator flipped to ``(e - g2)``.
    """
    signs, logs, exps = _scaled_factors(w, hop, truncation)
    sl = slice(branch * (truncation + 1), (branch + 1) * (truncation + 1))
    prefactor = math.log(hop.pointing.gamma_sq) - math.log(hop.pointing.a0)
    return -signs[sl], logs[sl] - prefactor, exps[sl]


def conv_coeff(kind: Kind, j: int, u: float, v: float, hops: HopPair) -> SignedLogValue:
    """Cauchy-product coefficient ``c_j^(kind)(u, v)`` of the two hop CDF series.

    The u-side factors come from hop2 and the v-side factors from hop1; the
    (gamma_sq/A0)^2 prefactor is not included.
    """
    _check_positive(u=u, v=v)
    if j < 0 or int(j) != j:
        raise DomainError(f"j must be a nonnegative integer, got {j}")
    bu, bv = _KIND_BRANCHES[kind]
    su, lu, _ = _split_factor(u, hops.hop2, bu, j)
    sv, lv, _ = _split_factor(v, hops.hop1, bv, j)
    return log_sum_signed(su * sv[::-1], lu + lv[::-1])


def _conv_table(kind: Kind, u: float, v: float, hops: HopPair, truncation: int):
    """All of ``c_0 .. c_J`` for one kind plus the x-exponent offset of that kind."""
    bu, bv = _KIND_BRANCHES[kind]
    su, lu, eu = _split_factor(u, hops.hop2, bu, truncation)
    sv, lv, ev = _split_factor(v, hops.hop1, bv, truncation)
    signs = np.empty(truncation + 1)
    logs = np.empty(truncation + 1)
    for j in range(truncation + 1):
        c = log_sum_signed(su[: j + 1] * sv[j::-1], lu[: j + 1] + lv[j::-1])
        signs[j], logs[j] = c.sign, c.log_magnitude
    # sum of the two branch exponents at (k, j-k) is j + eu[0] + ev[0]
    return signs, logs, eu[0] + ev[0]


def _a3_err(u: float, v: float, hops: HopPair, cfg: SeriesConfig) -> tuple[float, float]:
    _check_positive(u=u, v=v)
    if math.isinf(u) or math.isinf(v):
        return 0.0, 0.0
    J = cfg.truncation
    p1, p2 = hops.hop1.pointing, hops.hop2.pointing
    log_pref = math.log(p1.gamma_sq / p1.a0) + math.log(p2.gamma_sq / p2.a0)
    j = np.arange(J + 1, dtype=float)
    signs, logs = [], []
    for kind in ("1p", "2p", "3p", "4p"):
        s, l, offset = _conv_table(kind, u, v, hops, J)
        signs.append(s)
        logs.append(l + log_pref + _log_gamma_moment(j + offset))
    return series_sum_with_error(
        np.concatenate(signs), np.concatenate(logs), _last_mask(4, J), cfg, f"A3(u={u:g}, v={v:g})"
    )


def a3_series(u: float, v: float, hops: HopPair, cfg: SeriesConfig = SeriesConfig()) -> float:
    """``int_0^inf F_I2(sqrt(x/u)) F_I1(sqrt(x/v)) exp(-x/2) / sqrt(x) dx`` via Cauchy products."""
    val, err = _a3_err(u, v, hops, cfg)
    require_precision(val, err, cfg, f"A3(u={u:g}, v={v:g})")
    return val


def _deficit(u: float, v: float, hops: HopPair, cfg: SeriesConfig) -> tuple[float, float]:
    """``sqrt(2 pi) - A(u, v) = A1(u) + A2(v) - A3(u, v)`` and its rounding estimate."""
    a1, e1 = _a_series_err(u, hops.hop2, cfg)
    a2, e2 = _a_series_err(v, hops.hop1, cfg)
    a3, e3 = _a3_err(u, v, hops, cfg)
    return a1 + a2 - a3, e1 + e2 + e3


def a_func(u: float, v: float, hops: HopPair, cfg: SeriesConfig = SeriesConfig()) -> float:
    """``A(u, v) = sqrt(2 pi) - A1(u) - A2(v) + A3(u, v)``, clamped to [0, sqrt(2 pi)]."""
    _check_positive(u=u, v=v)
    d, err = _deficit(u, v, hops, cfg)
    val = SQRT_2PI - d
    require_precision(val, err, cfg, f"A(u={u:g}, v={v:g})")
    return min(max(val, 0.0), SQRT_2PI)


def _finish(total: float, err: float, cfg: SeriesConfig, what: str) -> float:
    val, err = total / (2.0 * SQRT_2PI), err / (2.0 * SQRT_2PI)
    require_precision(val, err, cfg, what)
    return min(max(val, 0.0), 0.5)


def ber_upper(link: LinkConfig, hops: HopPair, cfg: SeriesConfig = SeriesConfig()) -> float:
    """``(sqrt(2 pi) - A(q/3, q/3)) / (2 sqrt(2 pi))`` with ``q = eta^2 xi^2 gamma_0 delta``."""
    q = link.effective_snr * link.delta
    d, err = _deficit(q / 3, q / 3, hops, cfg)
    return _finish(d, err, cfg, f"ber_upper(snr0={link.snr0:g})")


def ber_lower(link: LinkConfig, hops: HopPair, cfg: SeriesConfig = SeriesConfig()) -> float:
    q = link.effective_snr * link.delta
    d1, e1 = _deficit(q / 2, q / 3, hops, cfg)
    d2, e2 = _deficit(q / 3, q / 2, hops, cfg)
    d3, e3 = _deficit(q / 3, q / 3, hops, cfg)
    return _finish(d1 + d2 - d3, e1 + e2 + e3, cfg, f"ber_lower(snr0={link.snr0:g})")
