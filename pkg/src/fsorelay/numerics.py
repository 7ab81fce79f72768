"""Special-function and summation primitives.

Series in this package routinely carry factors such as ``Gamma(j + a)``,
``j!`` and ``u**(-j/2)`` with ``u`` up to ``1e11``; individual factors overflow
or underflow binary64 long before the product does.  Terms are therefore kept
as ``(sign, log|value|)`` pairs and only exponentiated when summed.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from .errors import DomainError

# exp() of anything larger than this is not a finite double
LOG_MAX = math.log(sys.float_info.max)


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as a sign and the natural log of its magnitude."""

    sign: int
    log_magnitude: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0:
            if self.log_magnitude != -math.inf:
                raise ValueError("zero must carry log_magnitude = -inf")
        elif math.isnan(self.log_magnitude) or self.log_magnitude == -math.inf:
            raise ValueError("nonzero value needs a finite or +inf log magnitude")

    @classmethod
    def from_float(cls, x: float) -> "SignedLogValue":
        if math.isnan(x):
            raise DomainError("cannot encode NaN")
        if x == 0.0:
            return ZERO
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def materialize(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_magnitude > LOG_MAX:
            raise OverflowError(
                f"|value| = exp({self.log_magnitude:.6g}) exceeds the double range"
            )
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if not isinstance(other, SignedLogValue):
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return SignedLogValue(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: "SignedLogValue") -> "SignedLogValue":
        if not isinstance(other, SignedLogValue):
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero SignedLogValue")
        if self.sign == 0:
            return ZERO
        return SignedLogValue(self.sign * other.sign, self.log_magnitude - other.log_magnitude)

    def __neg__(self) -> "SignedLogValue":
        return SignedLogValue(-self.sign, self.log_magnitude)


ZERO = SignedLogValue(0, -math.inf)


def log_gamma_signed(x: float) -> SignedLogValue:
    """Sign and ``ln|Gamma(x)|``, including negative non-integer ``x``.

    Negative arguments go through the reflection identity
    ``Gamma(x) = pi / (sin(pi x) Gamma(1 - x))``.
    """
    x = float(x)
    if math.isnan(x):
        raise DomainError("log_gamma_signed(nan)")
    if x <= 0.0 and x == math.floor(x):
        raise DomainError(f"Gamma has a pole at x = {x:g}")
    if x > 0.0:
        return SignedLogValue(1, math.lgamma(x))
    # sin(pi x) evaluated on the reduced argument keeps full relative accuracy
    s = math.sin(math.pi * (x - math.floor(x)))
    sign = 1 if math.floor(x) % 2 == 0 else -1
    return SignedLogValue(sign, math.log(math.pi) - math.log(s) - math.lgamma(1.0 - x))


def q_function(x):
    """Gaussian tail probability ``Q(x) = erfc(x / sqrt 2) / 2`` for ``x >= 0``.

    Accepts a scalar or an array; arrays are evaluated elementwise.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("q_function is only defined here for x >= 0")
    out = 0.5 * special.erfc(arr / math.sqrt(2.0))
    if out.ndim == 0:
        return float(out)
    return out


def sum_signed_log_arrays(signs: np.ndarray, logs: np.ndarray) -> float:
    """Array form of :func:`sum_signed_log`."""
    signs = np.asarray(signs, dtype=float).ravel()
    logs = np.asarray(logs, dtype=float).ravel()
    live = signs != 0
    signs, logs = signs[live], logs[live]
    if logs.size == 0:
        return 0.0
    big = float(np.max(logs))
    if big > LOG_MAX:
        raise OverflowError(
            f"series term exp({big:.6g}) exceeds the double range; rescale the inputs"
        )
    order = np.argsort(logs, kind="stable")
    values = signs[order] * np.exp(logs[order])
    try:
        total = math.fsum(values.tolist())
    except OverflowError as exc:
        raise OverflowError("series sum exceeds the double range") from exc
    if math.isinf(total):
        raise OverflowError("series sum exceeds the double range")
    return total


def sum_signed_log(terms: Iterable[SignedLogValue]) -> float:
    """Materialize and add signed-log terms, smallest magnitude first.

    The accumulation is Shewchuk's exactly-rounded summation (``math.fsum``),
    so the result does not depend on the input order.
    """
    terms = list(terms)
    if not terms:
        return 0.0
    signs = np.fromiter((t.sign for t in terms), dtype=float, count=len(terms))
    logs = np.fromiter((t.log_magnitude for t in terms), dtype=float, count=len(terms))
    return sum_signed_log_arrays(signs, logs)


def log_sum_signed(signs: Sequence[float], logs: Sequence[float]) -> SignedLogValue:
    """Sum signed-log terms without leaving the log domain.

    Terms are scaled by the largest magnitude before adding, so the result is
    available even when the sum itself is not a finite double.
    """
    signs = np.asarray(signs, dtype=float).ravel()
    logs = np.asarray(logs, dtype=float).ravel()
    live = signs != 0
    signs, logs = signs[live], logs[live]
    if logs.size == 0:
        return ZERO
    big = float(np.max(logs))
    order = np.argsort(logs, kind="stable")
    scaled = math.fsum((signs[order] * np.exp(logs[order] - big)).tolist())
    if scaled == 0.0:
        return ZERO
    return SignedLogValue(1 if scaled > 0 else -1, big + math.log(abs(scaled)))
