"""Bound values against the truncation index J at a fixed SNR.

    python scripts/convergence_study.py [--regime moderate] [--snr-db 50]

The last-term guard is disabled so that small J can be evaluated at all.
"""

import argparse
import math

from fsorelay import (
    NO_POINTING,
    Hop,
    HopPair,
    LinkConfig,
    SeriesConfig,
    ber_lower,
    ber_upper,
    db_to_linear,
    outage_lower,
    outage_upper,
    regime_preset,
)

J_VALUES = (0, 1, 2, 3, 5, 10, 20, 50, 100)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--regime", default="moderate", choices=["strong", "moderate", "weak"])
    ap.add_argument("--snr-db", type=float, default=50.0)
    ap.add_argument("--threshold-db", type=float, default=0.0)
    args = ap.parse_args()

    hops = HopPair.identical(Hop(regime_preset(args.regime), NO_POINTING))
    link = LinkConfig(db_to_linear(args.snr_db))
    th = db_to_linear(args.threshold_db)
    funcs = {
        "out_up": lambda cfg: outage_upper(link, th, hops, cfg),
        "out_lo": lambda cfg: outage_lower(link, th, hops, cfg),
        "ber_up": lambda cfg: ber_upper(link, hops, cfg),
        "ber_lo": lambda cfg: ber_lower(link, hops, cfg),
    }
    table = {
        j: {k: f(SeriesConfig(truncation=j, truncation_rtol=math.inf)) for k, f in funcs.items()}
        for j in J_VALUES
    }
    ref = table[J_VALUES[-1]]
    print(f"{args.regime} regime, gamma0 = {args.snr_db:g} dB, reference J = {J_VALUES[-1]}")
    print(f"{'J':>4} " + " ".join(f"{k:>14} {'rel':>8}" for k in funcs))
    for j, row in table.items():
        parts = [f"{row[k]:14.6e} {abs(row[k] - ref[k]) / ref[k]:8.1e}" for k in funcs]
        print(f"{j:>4} " + " ".join(parts))


if __name__ == "__main__":
    main()
