"""Required SNR for a 1e-6 outage / BER target, every regime and threshold.

    python scripts/reproduce_crossings.py [--target 1e-6]

Prints one table per metric with the upper- and lower-bound crossings and the
gap between them.  Cells where the series cannot resolve the crossing are
printed as "n/a" with the reason on stderr.
"""

import argparse
import sys

from fsorelay import (
    NO_POINTING,
    BracketError,
    Hop,
    HopPair,
    SeriesReliabilityError,
    db_to_linear,
    regime_preset,
    required_snr,
)

REGIMES = ("strong", "moderate", "weak")
THRESHOLDS_DB = (0.0, 5.0, 10.0)


def crossing(target, which, threshold_db, hops, metric):
    try:
        return required_snr(target, which, db_to_linear(threshold_db), hops, metric=metric)
    except (SeriesReliabilityError, BracketError) as exc:
        print(f"{metric} {which} @ {threshold_db} dB: {exc}", file=sys.stderr)
        return None


def cell(x):
    return "n/a" if x is None else f"{x:6.2f}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--target", type=float, default=1e-6)
    args = ap.parse_args()

    print(f"outage, target {args.target:g}")
    print(f"{'regime':>9} {'Gth[dB]':>7} {'upper':>7} {'lower':>7} {'gap':>6}")
    for regime in REGIMES:
        hops = HopPair.identical(Hop(regime_preset(regime), NO_POINTING))
        for th in THRESHOLDS_DB:
            hi = crossing(args.target, "upper", th, hops, "outage")
            lo = crossing(args.target, "lower", th, hops, "outage")
            gap = hi - lo if hi is not None and lo is not None else None
            print(f"{regime:>9} {th:7.1f} {cell(hi):>7} {cell(lo):>7} {cell(gap):>6}")

    print(f"\nBPSK BER, target {args.target:g}")
    print(f"{'regime':>9} {'upper':>7} {'lower':>7} {'gap':>6}")
    for regime in REGIMES:
        hops = HopPair.identical(Hop(regime_preset(regime), NO_POINTING))
        hi = crossing(args.target, "upper", 0.0, hops, "ber")
        lo = crossing(args.target, "lower", 0.0, hops, "ber")
        gap = hi - lo if hi is not None and lo is not None else None
        print(f"{regime:>9} {cell(hi):>7} {cell(lo):>7} {cell(gap):>6}")


if __name__ == "__main__":
    main()
