"""Regenerate tests/data/oracle_values.json from the arbitrary-precision oracles.

Every reference value used by the test suite comes from tests/oracles.py
(mpmath, independent of the package).  Run from the repository root:

    python scripts/freeze_oracles.py

Takes under a minute; most of it is spent in the double quadratures.
"""

import itertools
import json
import math
import sys
import time
from pathlib import Path

import mpmath as mp

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
import oracles as orc  # noqa: E402

REGIMES = {"strong": (4.2, 1.4), "moderate": (4.0, 1.9), "weak": (8.5, 6.7)}
GRID_I = [0.05, 0.1, 0.2, 0.5, 1.0, 1.5, 2.0]
UV = [1e3, 1e4, 1e5]


def f(x) -> float:
    return float(x)


def pointing_mp(r, wz, sigma):
    r, wz, sigma = mp.mpf(r), mp.mpf(wz), mp.mpf(sigma)
    v = mp.sqrt(mp.pi) * r / (mp.sqrt(2) * wz)
    a0 = mp.erf(v) ** 2
    wz_eq_sq = wz**2 * mp.sqrt(mp.pi) * mp.erf(v) / (2 * v * mp.exp(-v * v))
    return wz_eq_sq / (4 * sigma**2), a0


def geometry_mp(cn2, lam, D, z):
    cn2, lam, D, z = map(mp.mpf, (cn2, lam, D, z))
    k = 2 * mp.pi / lam
    chi2 = mp.mpf("0.5") * cn2 * k ** (mp.mpf(7) / 6) * z ** (mp.mpf(11) / 6)
    d = mp.sqrt(k * D**2 / (4 * z))
    chi = mp.sqrt(chi2)
    alpha = 1 / (mp.exp(mp.mpf("0.49") * chi2 / (1 + mp.mpf("0.18") * d**2 + mp.mpf("0.56") * chi ** (mp.mpf(12) / 5)) ** (mp.mpf(7) / 6)) - 1)
    beta = 1 / (
        mp.exp(
            mp.mpf("0.51") * chi2 * (1 + mp.mpf("0.69") * chi ** (mp.mpf(12) / 5)) ** (-mp.mpf(5) / 6)
            / (1 + mp.mpf("0.9") * d**2 + mp.mpf("0.62") * d**2 * chi ** (mp.mpf(12) / 5)) ** (mp.mpf(5) / 6)
        )
        - 1
    )
    return alpha, beta


def conv_mp(kind, j, u, v, alpha, beta, g2, a0):
    alpha, beta, g2, a0, u, v = map(mp.mpf, (alpha, beta, g2, a0, u, v))
    first, second = {"1p": ((alpha, beta), (alpha, beta)), "2p": ((alpha, beta), (beta, alpha)),
                     "3p": ((beta, alpha), (alpha, beta)), "4p": ((beta, alpha), (beta, alpha))}[kind]

    def factor(k, pair, w):
        p, q = pair
        return orc.coeff_mp(k, p, q) * w ** (-(k + q) / 2) / ((k + q) * (k + q - g2) * a0 ** (k + q - 1))

    return mp.fsum(factor(k, first, u) * factor(j - k, second, v) for k in range(j + 1))


def main() -> None:
    t0 = time.time()
    out: dict = {}
    mp.mp.dps = 40

    out["log_gamma"] = {}
    for x in [0.5, 1.0, -0.5, 0.3, 1.7, -0.4, 5.5, -2.5, -7.3, 150.3, 1e-8]:
        g = mp.gamma(mp.mpf(x))
        out["log_gamma"][repr(x)] = [int(mp.sign(g)), f(mp.log(abs(g)))]

    out["q"] = [[x, f(orc.q_mp(x))] for x in [i * 0.5 for i in range(81)] + [math.sqrt(2.0)]]

    out["series_coeff"] = []
    for (a, b), j in itertools.product([(8.5, 6.7), (6.7, 8.5), (4.2, 1.4), (1.4, 4.2), (4.0, 1.9)], [0, 3, 10, 50]):
        c = orc.coeff_mp(j, a, b)
        out["series_coeff"].append([j, a, b, int(mp.sign(c)), f(mp.log(abs(c)))])

    out["geometry"] = []
    for cn2 in [1e-14, 1e-13, 5e-15]:
        a, b = geometry_mp(cn2, 1550e-9, 0.1, 1000.0)
        out["geometry"].append([cn2, 1550e-9, 0.1, 1000.0, f(a), f(b)])

    out["pointing"] = []
    for r, wz, s in [(1.0, math.sqrt(math.pi / 2), 0.1), (1.0, 10.0, 0.1), (1.0, 5.0, 0.05), (0.1, 1.5, 0.04)]:
        g2, a0 = pointing_mp(r, wz, s)
        out["pointing"].append([r, wz, s, f(g2), f(a0)])

    out["pure_series"] = {}
    for name, (a, b) in REGIMES.items():
        out["pure_series"][name] = [
            [i, f(orc.pure_series_cdf(i, a, b)), f(orc.pure_series_pdf(i, a, b))] for i in GRID_I
        ]

    g2, a0 = pointing_mp(1.0, 10.0, 0.1)
    a, b = REGIMES["weak"]
    out["combined_cdf_weak_wz10_s01"] = {
        "gamma_sq": f(g2),
        "a0": f(a0),
        "values": [
            [f(x * a0), f(orc.combined_cdf_meijer(x * a0, a, b, g2, a0))] for x in (0.1, 0.3, 0.6)
        ],
    }

    out["conv_coeff"] = []
    for kind in ("1p", "2p", "3p", "4p"):
        c = conv_mp(kind, 2, 1e4, 1e4, 8.5, 6.7, 4.5, 0.8)
        out["conv_coeff"].append([kind, 2, 1e4, 1e4, 8.5, 6.7, 4.5, 0.8, int(mp.sign(c)), f(mp.log(abs(c)))])
    print(f"closed-form oracles done ({time.time() - t0:.0f} s)", file=sys.stderr)

    mp.mp.dps = 20
    quad = []
    cases = [("weak", "none"), ("weak", "wz10_s01"), ("strong", "none"), ("moderate", "none")]
    for regime, pointing in cases:
        a, b = REGIMES[regime]
        if pointing == "none":
            cdf = mp.memoize(lambda i, a=a, b=b: orc.gg_cdf_meijer(i, a, b))
        else:
            cdf = mp.memoize(lambda i, a=a, b=b: orc.combined_cdf_meijer(i, a, b, g2, a0))
        ws = UV + [3e4] if regime == "weak" else [1e4, 3e4]
        for w in ws:
            quad.append([regime, pointing, "A1", w, None, f(orc.weighted_integral(cdf, w))])
        pairs = list(itertools.product(UV, UV)) if regime == "weak" else [(1e4, 1e4), (1e5, 3e4)]
        for u, v in pairs:
            quad.append([regime, pointing, "A3", u, v, f(orc.weighted_integral2(cdf, cdf, u, v))])
        if regime == "weak" and pointing == "none":
            surv = lambda i: 1 - cdf(i)  # noqa: E731
            quad.append(["weak", "none", "A", 1e4, 1e4, f(orc.weighted_integral2(surv, surv, 1e4, 1e4))])
        print(f"quadrature {regime}/{pointing} done ({time.time() - t0:.0f} s)", file=sys.stderr)
    out["quadrature"] = quad

    path = ROOT / "tests" / "data" / "oracle_values.json"
    path.write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote {path}", file=sys.stderr)


if __name__ == "__main__":
    main()
