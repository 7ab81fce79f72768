"""Monte Carlo check of the analytic bounds over an SNR grid.

    python scripts/mc_validation.py --regime weak --snr-db 20 25 30 --samples 10000000

Reports lower <= MC <= upper (with 3 sigma slack) for outage and BER; a bound
the series cannot evaluate is shown as "refused".
"""

import argparse

from fsorelay import (
    Hop,
    HopPair,
    LinkConfig,
    McConfig,
    NO_POINTING,
    SeriesReliabilityError,
    ber_lower,
    ber_upper,
    db_to_linear,
    mc_ber,
    mc_outage,
    outage_lower,
    outage_upper,
    pointing_from_normalized,
    regime_preset,
)


def bound(fn, *args):
    try:
        return fn(*args)
    except SeriesReliabilityError:
        return None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--regime", default="weak", choices=["strong", "moderate", "weak"])
    ap.add_argument("--snr-db", type=float, nargs="+", default=[20.0, 25.0])
    ap.add_argument("--threshold-db", type=float, default=0.0)
    ap.add_argument("--wz-over-r", type=float)
    ap.add_argument("--sigma-over-r", type=float)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    point = NO_POINTING
    if args.wz_over_r is not None:
        point = pointing_from_normalized(args.wz_over_r, args.sigma_over_r)
    hops = HopPair.identical(Hop(regime_preset(args.regime), point))
    th = db_to_linear(args.threshold_db)
    mc = McConfig(args.samples, args.seed)

    print(f"{'dB':>5} {'metric':>6} {'lower':>11} {'mc':>11} {'stderr':>9} {'upper':>11}  ok")
    for db in args.snr_db:
        link = LinkConfig(db_to_linear(db))
        rows = [
            ("outage", bound(outage_lower, link, th, hops), mc_outage(link, th, hops, mc, args.workers),
             bound(outage_upper, link, th, hops)),
            ("ber", bound(ber_lower, link, hops), mc_ber(link, hops, mc, args.workers),
             bound(ber_upper, link, hops)),
        ]
        for name, lo, est, hi in rows:
            if lo is None or hi is None:
                ok = "refused"
            else:
                ok = "yes" if lo - 3 * est.std_error <= est.mean <= hi + 3 * est.std_error else "NO"
            fmt = lambda x: "-" if x is None else f"{x:.4e}"  # noqa: E731
            print(f"{db:5.1f} {name:>6} {fmt(lo):>11} {est.mean:11.4e} {est.std_error:9.2e} {fmt(hi):>11}  {ok}")


if __name__ == "__main__":
    main()
