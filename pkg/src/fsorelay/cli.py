"""Command-line front end: sweeps, convergence studies, required SNR and MC validation.

Every subcommand takes the same channel options.  Options may also come from
a plain ``key=value`` file (``--config``); keys are the long option names
without the leading dashes, and command-line flags win over the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .ber import ber_lower, ber_upper
from .channel import (
    NO_POINTING,
    Hop,
    PointingParams,
    SeriesConfig,
    TurbulenceParams,
    pointing_from_normalized,
    regime_preset,
)
from .errors import BracketError, DomainError, SeriesReliabilityError
from .montecarlo import McConfig, mc_ber, mc_outage
from .outage import HopPair, LinkConfig, db_to_linear, outage_lower, outage_upper, required_snr

HARD_ERRORS = (DomainError, SeriesReliabilityError, BracketError, OverflowError, ValueError)

DEFAULTS = {
    "threshold_db": 0.0,
    "snr_db_start": 0.0,
    "snr_db_stop": 0.0,
    "snr_db_step": 1.0,
    "snr_db": 50.0,
    "truncation_j": 100,
    "j_list": "0,1,2,5,10,100",
    "metric": "both",
    "bound": "both",
    "target": 1e-6,
    "samples": 10_000_000,
    "seed": 0,
    "workers": 1,
    "output": "-",
    "responsivity": 1.0,
    "modulation_index": 1.0,
    "delta": 2.0,
}

# options whose value type is not float
_INT_KEYS = {"truncation_j", "samples", "seed", "workers"}
_STR_KEYS = {"regime", "metric", "bound", "output", "j_list", "config"}
_BOOL_KEYS = {"pointing_none"}
_EXCLUSIVE_GROUPS = (
    {"regime", "alpha", "beta"},
    {"pointing_none", "wz_over_r", "sigma_over_r", "gamma_sq", "a0"},
)


@dataclass(frozen=True)
class SweepSpec:
    """Grid and channel description shared by all subcommands (SNRs in dB)."""

    snr_db_start: float
    snr_db_stop: float
    snr_db_step: float
    threshold_db: float
    turbulence: TurbulenceParams
    pointing: PointingParams
    truncation: int = 100
    metrics: tuple[str, ...] = ("outage", "ber")
    bounds: tuple[str, ...] = ("upper", "lower")
    link: LinkConfig = LinkConfig(snr0=1.0)

    def __post_init__(self):
        if not self.snr_db_start <= self.snr_db_stop:
            raise DomainError("snr-db-start must not exceed snr-db-stop")
        if not self.snr_db_step > 0:
            raise DomainError("snr-db-step must be positive")

    def grid(self) -> list[float]:
        n = int(math.floor((self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9))
        return [self.snr_db_start + k * self.snr_db_step for k in range(n + 1)]

    @property
    def hops(self) -> HopPair:
        return HopPair.identical(Hop(self.turbulence, self.pointing))

    @property
    def threshold_snr(self) -> float:
        return db_to_linear(self.threshold_db)

    @property
    def columns(self) -> list[str]:
        return [f"{m}_{b}" for m in self.metrics for b in self.bounds]


def read_config_file(path: str) -> dict[str, object]:
    out: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = _coerce(key.replace("-", "_"), value, f"{path}:{lineno}")
    return out


def _coerce(key: str, value: str, where: str) -> object:
    try:
        if key in _BOOL_KEYS:
            if value.lower() in ("1", "true", "yes", "on"):
                return True
            if value.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        if key in _INT_KEYS:
            return int(float(value))
        if key in _STR_KEYS:
            return value
        return float(value)
    except ValueError:
        raise DomainError(f"{where}: bad value {value!r} for {key}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    turb = common.add_argument_group("turbulence")
    turb.add_argument("--regime", choices=["strong", "moderate", "weak"])
    turb.add_argument("--alpha", type=float)
    turb.add_argument("--beta", type=float)
    point = common.add_argument_group("pointing (default: none)")
    point.add_argument("--pointing-none", action="store_true", default=None)
    point.add_argument("--wz-over-r", type=float, help="normalized beam waist")
    point.add_argument("--sigma-over-r", type=float, help="normalized jitter")
    point.add_argument("--gamma-sq", type=float)
    point.add_argument("--a0", type=float)
    link = common.add_argument_group("link")
    link.add_argument("--threshold-db", type=float)
    link.add_argument("--responsivity", type=float)
    link.add_argument("--modulation-index", type=float)
    link.add_argument("--delta", type=float)
    grid = common.add_argument_group("grid")
    grid.add_argument("--snr-db-start", type=float)
    grid.add_argument("--snr-db-stop", type=float)
    grid.add_argument("--snr-db-step", type=float)
    common.add_argument("--truncation-j", type=int)
    common.add_argument("--metric", choices=["outage", "ber", "both"])
    common.add_argument("--bound", choices=["upper", "lower", "both"])
    common.add_argument("--workers", type=int, help="processes for grid points / MC blocks")
    common.add_argument("--output", help="CSV path or - for stdout")

    parser = argparse.ArgumentParser(prog="fsorelay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sweep", parents=[common], help="bounds over an SNR grid")
    conv = sub.add_parser("convergence", parents=[common], help="bound value against J")
    conv.add_argument("--snr-db", type=float, help="fixed SNR for the study")
    conv.add_argument("--j-list", help="comma-separated truncation indices")
    req = sub.add_parser("required-snr", parents=[common], help="SNR where a bound hits --target")
    req.add_argument("--target", type=float)
    val = sub.add_parser("validate", parents=[common], help="Monte Carlo against the bounds")
    val.add_argument("--samples", type=int)
    val.add_argument("--seed", type=int)
    return parser


def resolve_options(args: argparse.Namespace) -> dict[str, object]:
    """Merge built-in defaults, the config file and explicit flags, in that order."""
    opts: dict[str, object] = dict(DEFAULTS)
    flags = {k: v for k, v in vars(args).items() if v is not None}
    if args.config:
        from_file = read_config_file(args.config)
        # a group chosen on the command line replaces the file's choice for that group
        for group in _EXCLUSIVE_GROUPS:
            if group & flags.keys():
                for key in group:
                    from_file.pop(key, None)
        opts.update(from_file)
    opts.update(flags)
    return opts


def _turbulence(opts: dict) -> TurbulenceParams:
    regime, alpha, beta = opts.get("regime"), opts.get("alpha"), opts.get("beta")
    if regime is not None and (alpha is not None or beta is not None):
        raise DomainError("give either --regime or --alpha/--beta, not both")
    if regime is not None:
        return regime_preset(regime)
    if alpha is None or beta is None:
        raise DomainError("turbulence needs --regime or both --alpha and --beta")
    return TurbulenceParams(float(alpha), float(beta))


def _pointing(opts: dict) -> PointingParams:
    normalized = [opts.get("wz_over_r"), opts.get("sigma_over_r")]
    explicit = [opts.get("gamma_sq"), opts.get("a0")]
    chosen = [
        bool(opts.get("pointing_none")),
        any(v is not None for v in normalized),
        any(v is not None for v in explicit),
    ]
    if sum(chosen) > 1:
        raise DomainError(
            "pointing options conflict: use one of --pointing-none, "
            "--wz-over-r/--sigma-over-r, --gamma-sq/--a0"
        )
    if chosen[1]:
        if None in normalized:
            raise DomainError("--wz-over-r and --sigma-over-r go together")
        return pointing_from_normalized(*map(float, normalized))
    if chosen[2]:
        if None in explicit:
            raise DomainError("--gamma-sq and --a0 go together")
        return PointingParams(*map(float, explicit))
    return NO_POINTING


def build_spec(opts: dict) -> SweepSpec:
    metric, bound = opts["metric"], opts["bound"]
    return SweepSpec(
        snr_db_start=float(opts["snr_db_start"]),
        snr_db_stop=float(opts["snr_db_stop"]),
        snr_db_step=float(opts["snr_db_step"]),
        threshold_db=float(opts["threshold_db"]),
        turbulence=_turbulence(opts),
        pointing=_pointing(opts),
        truncation=int(opts["truncation_j"]),
        metrics=("outage", "ber") if metric == "both" else (metric,),
        bounds=("upper", "lower") if bound == "both" else (bound,),
        link=LinkConfig(
            snr0=1.0,
            responsivity=float(opts["responsivity"]),
            modulation_index=float(opts["modulation_index"]),
            delta=float(opts["delta"]),
        ),
    )


def fmt(x: float) -> str:
    """Probability field: scientific notation, 9 significant digits."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.8e}"


def fmt_db(x: float) -> str:
    return f"{x:.10g}"


def evaluate_bound(metric: str, bound: str, spec: SweepSpec, snr_db: float, cfg: SeriesConfig) -> float:
    link = spec.link.with_snr0(db_to_linear(snr_db))
    if metric == "outage":
        fn = outage_upper if bound == "upper" else outage_lower
        return fn(link, spec.threshold_snr, spec.hops, cfg)
    fn = ber_upper if bound == "upper" else ber_lower
    return fn(link, spec.hops, cfg)


def _sweep_row(job: tuple[SweepSpec, float]) -> list[float]:
    spec, snr_db = job
    cfg = SeriesConfig(truncation=spec.truncation)
    values = []
    for metric in spec.metrics:
        for bound in spec.bounds:
            values.append(evaluate_bound(metric, bound, spec, snr_db, cfg))
    return values


class RowError(Exception):
    """A grid row failed; ``partial`` holds the rows finished before it."""

    def __init__(self, index: int, label: str, cause: BaseException, partial: list):
        super().__init__(f"row {index} ({label}): {type(cause).__name__}: {cause}")
        self.partial = partial


def _run_rows(fn, jobs: list, labels: list[str], workers: int) -> list:
    """Evaluate jobs in grid order; the first failure becomes a RowError."""
    results = []
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, job) for job in jobs]
            for k, fut in enumerate(futures):
                try:
                    results.append(fut.result())
                except HARD_ERRORS as exc:
                    for rest in futures[k + 1 :]:
                        rest.cancel()
                    raise RowError(k, labels[k], exc, results) from exc
        return results
    for k, job in enumerate(jobs):
        try:
            results.append(fn(job))
        except HARD_ERRORS as exc:
            raise RowError(k, labels[k], exc, results) from exc
    return results


def cmd_sweep(spec: SweepSpec, workers: int = 1) -> tuple[list[str], list[list[str]]]:
    grid = spec.grid()
    header = ["snr_db", *spec.columns]
    try:
        rows = _run_rows(
            _sweep_row, [(spec, db) for db in grid], [f"snr_db={fmt_db(db)}" for db in grid], workers
        )
    except RowError as exc:
        exc.partial = [header, [[fmt_db(db), *map(fmt, v)] for db, v in zip(grid, exc.partial)]]
        raise
    return header, [[fmt_db(db), *map(fmt, vals)] for db, vals in zip(grid, rows)]


def cmd_convergence(
    spec: SweepSpec, snr_db: float, j_list: list[int], workers: int = 1
) -> tuple[list[str], list[list[str]]]:
    """Bound values for each J at a fixed SNR, relative to the largest J.

    The last-term guard is switched off: small J is the point of the study.
    """
    if not j_list:
        raise DomainError("j-list must not be empty")
    js = sorted(set(j_list))
    jobs = [(replace(spec, truncation=j), snr_db) for j in js]
    values = _run_rows(_convergence_row, jobs, [f"J={j}" for j in js], workers)
    ref = values[-1]
    header = ["j"]
    for col in spec.columns:
        header += [col, f"{col}_rel_delta"]
    rows = []
    for j, vals in zip(js, values):
        row = [str(j)]
        for v, r in zip(vals, ref):
            row += [fmt(v), fmt(abs(v - r) / abs(r) if r != 0 else abs(v - r))]
        rows.append(row)
    return header, rows


def _convergence_row(job: tuple[SweepSpec, float]) -> list[float]:
    spec, snr_db = job
    cfg = SeriesConfig(truncation=spec.truncation, truncation_rtol=math.inf)
    return [
        evaluate_bound(m, b, spec, snr_db, cfg) for m in spec.metrics for b in spec.bounds
    ]


def cmd_required_snr(spec: SweepSpec, target: float) -> list[str]:
    cfg = SeriesConfig(truncation=spec.truncation)
    lines = []
    for metric in spec.metrics:
        for bound in spec.bounds:
            db = required_snr(
                target, bound, spec.threshold_snr, spec.hops, cfg, metric=metric, link=spec.link
            )
            lines.append(f"{metric} {bound} bound reaches {target:g} at {db:.1f} dB")
    return lines


def _validate_row(job) -> list[tuple[str, float, float, float, float]]:
    spec, snr_db, mc, workers = job
    cfg = SeriesConfig(truncation=spec.truncation)
    link = spec.link.with_snr0(db_to_linear(snr_db))
    out = []
    for metric in spec.metrics:
        lower = evaluate_bound(metric, "lower", spec, snr_db, cfg)
        upper = evaluate_bound(metric, "upper", spec, snr_db, cfg)
        if metric == "outage":
            est = mc_outage(link, spec.threshold_snr, spec.hops, mc, workers)
        else:
            est = mc_ber(link, spec.hops, mc, workers)
        out.append((metric, lower, est.mean, est.std_error, upper))
    return out


def is_bracketed(lower: float, mean: float, stderr: float, upper: float) -> bool:
    """``lower - 3 sigma <= mean <= upper + 3 sigma``."""
    return lower - 3.0 * stderr <= mean <= upper + 3.0 * stderr


def cmd_validate(
    spec: SweepSpec, mc: McConfig, workers: int = 1
) -> tuple[list[str], list[list[str]], bool]:
    grid = spec.grid()
    # MC blocks are parallelized inside each row; rows run in order
    results = _run_rows(
        _validate_row,
        [(spec, db, mc, workers) for db in grid],
        [f"snr_db={fmt_db(db)}" for db in grid],
        1,
    )
    header = ["snr_db", "metric", "lower", "mc_mean", "mc_stderr", "upper", "n", "bracketed"]
    rows, all_ok = [], True
    for db, per_metric in zip(grid, results):
        for metric, lower, mean, se, upper in per_metric:
            ok = is_bracketed(lower, mean, se, upper)
            all_ok &= ok
            rows.append(
                [fmt_db(db), metric, fmt(lower), fmt(mean), fmt(se), fmt(upper),
                 str(mc.num_samples), "yes" if ok else "no"]
            )
    return header, rows, all_ok


def render_csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, output: str) -> None:
    if output in ("-", "stdout"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_j_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError:
        raise DomainError(f"bad --j-list {text!r}") from None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        opts = resolve_options(args)
        spec = build_spec(opts)
        workers = int(opts["workers"])
        if args.command == "sweep":
            header, rows = cmd_sweep(spec, workers)
            _emit(render_csv(header, rows), opts["output"])
        elif args.command == "convergence":
            header, rows = cmd_convergence(
                spec, float(opts["snr_db"]), _parse_j_list(opts["j_list"]), workers
            )
            _emit(render_csv(header, rows), opts["output"])
        elif args.command == "required-snr":
            lines = cmd_required_snr(spec, float(opts["target"]))
            _emit("".join(line + "\n" for line in lines), opts["output"])
        else:
            mc = McConfig(num_samples=int(opts["samples"]), seed=int(opts["seed"]))
            header, rows, ok = cmd_validate(spec, mc, workers)
            _emit(render_csv(header, rows), opts["output"])
            if not ok:
                print("error: at least one Monte Carlo estimate is outside the bounds", file=sys.stderr)
                return 1
    except RowError as exc:
        if args.command == "sweep" and exc.partial:
            _emit(render_csv(*exc.partial), opts["output"])
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except HARD_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
