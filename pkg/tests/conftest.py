import json
import math
from pathlib import Path

import pytest

from fsorelay import NO_POINTING, Hop, HopPair, pointing_from_normalized, regime_preset

DATA = json.loads((Path(__file__).parent / "data" / "oracle_values.json").read_text())
REGIMES = ("strong", "moderate", "weak")


def rel_err(got: float, ref: float) -> float:
    return abs(got - ref) / abs(ref) if ref != 0 else abs(got)


def make_hops(regime: str, pointing: str = "none") -> HopPair:
    point = NO_POINTING if pointing == "none" else pointing_from_normalized(10.0, 0.1)
    return HopPair.identical(Hop(regime_preset(regime), point))


@pytest.fixture(scope="session")
def oracle():
    return DATA


def close(a: float, b: float, rtol: float) -> bool:
    return math.isclose(a, b, rel_tol=rtol, abs_tol=0.0)
