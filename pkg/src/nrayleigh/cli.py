"""Command-line front end: parameter tables, sweeps and the validation gate.

Subcommands
-----------
params        severity / diversity / coding-gain table per (scheme, n)
outage-sweep  analytic + asymptotic + Monte-Carlo outage curves (CSV/JSON)
af-sweep      amount-of-fading table per (scheme, n) (CSV/JSON)
validate      run the acceptance suite, emit a JSON report

Exit codes: 0 success (validate: all criteria passed), 1 usage error,
2 validation failure, 3 numerical non-convergence.

Options may also come from a JSON config file (``--config``); explicit
flags override file values.
"""

from __future__ import annotations

import json
import sys

import click

from . import montecarlo, moments, schemes, validation
from .fading import fading_params
from .montecarlo import SimSettings
from .schemes import ChannelConfig, OutageQuery, Scheme
from .specfun import ConvergenceError

__all__ = ["cli", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

# Probabilities estimated from fewer than this many events get a marker
# column instead of being suppressed.
_LOW_CONFIDENCE_EVENTS = 10

_OUTAGE_COLUMNS = [
    "scheme", "n", "n_t", "n_r", "snr_db", "gamma_o", "p_out_analytic",
    "p_out_asymptotic", "p_out_mc", "ci_low", "ci_high", "trials", "seed",
    "low_confidence",
]
_AF_COLUMNS = [
    "scheme", "n", "n_t", "n_r", "b1", "b2", "af_closed", "af_bound",
    "af_oracle", "af_mc", "ci_low", "ci_high",
]


class ValidationFailure(Exception):
    """Raised by the validate command when criteria fail."""


def _parse_n_list(value: str) -> list[int]:
    try:
        items = [int(part) for part in value.split(",") if part.strip() != ""]
    except ValueError:
        raise click.UsageError(f"cannot parse cascade-order list {value!r}") from None
    if not items:
        raise click.UsageError("cascade-order list is empty")
    return items


def _parse_snr_grid(value: str) -> list[float]:
    parts = value.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise click.UsageError(
            f"SNR grid must be 'start:stop:step' or a single value, got {value!r}"
        )
    start, stop, step = (float(p) for p in parts)
    if not (start < stop) or not (step > 0):
        raise click.UsageError("SNR grid requires start < stop and step > 0")
    grid = []
    k = 0
    while True:
        point = start + k * step
        if point > stop + 1e-9:
            break
        grid.append(point)
        k += 1
    return grid


def _schemes_for(value: str) -> list[Scheme]:
    mapping = {
        "tas-mrc": [Scheme.TAS_MRC],
        "tas-sc": [Scheme.TAS_SC],
        "both": [Scheme.TAS_MRC, Scheme.TAS_SC],
    }
    try:
        return mapping[value]
    except KeyError:
        raise click.UsageError(f"unknown scheme {value!r}") from None


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise click.UsageError(f"config file {path} must contain a JSON object")
    return data


def _resolve(flags: dict, file_values: dict, defaults: dict) -> dict:
    """File values override defaults; explicit flags override both."""
    unknown = set(file_values) - set(defaults)
    if unknown:
        raise click.UsageError(f"unknown config file keys: {sorted(unknown)}")
    merged = dict(defaults)
    merged.update(file_values)
    merged.update({k: v for k, v in flags.items() if v is not None})
    return merged


def _fmt(value) -> str:
    """Round-trip formatting: shortest representation that parses back."""
    if value is None or value == "":
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit_table(
    columns: list[str], rows: list[dict], header_config: dict, fmt: str, out: str | None
) -> None:
    if fmt == "json":
        text = json.dumps(
            {"config": header_config, "rows": rows}, indent=2, sort_keys=True
        ) + "\n"
    else:
        lines = [f"# {key}={_fmt(value)}" for key, value in sorted(header_config.items())]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(row.get(col)) for col in columns))
        text = "\n".join(lines) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        try:
            with open(out, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            raise click.ClickException(f"cannot write output to {out}: {exc}") from None


@click.group()
def cli() -> None:
    """Analytics and Monte-Carlo validation for transmit-antenna-selection
    diversity over cascaded Rayleigh fading."""


@cli.command("params")
@click.option("--n", "n_list", required=True, help="Cascade orders, e.g. 1,2,3.")
@click.option("--nt", type=int, default=2, show_default=True, help="Transmit antennas.")
@click.option("--nr", type=int, default=3, show_default=True, help="Receive antennas.")
def cmd_params(n_list: str, nt: int, nr: int) -> None:
    """Severity parameters, diversity order and coding gains per (scheme, n)."""
    orders = _parse_n_list(n_list)
    header = (
        f"{'scheme':8s} {'n':>2s} {'m':>9s} {'omega':>9s} {'a':>9s} "
        f"{'d':>9s} {'cg_printed':>12s} {'cg_extracted':>12s}"
    )
    click.echo(header)
    for n in orders:
        try:
            cfg = ChannelConfig(n=n, n_t=nt, n_r=nr, mean_snr=1.0)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from None
        fp = fading_params(n)
        for scheme in (Scheme.TAS_MRC, Scheme.TAS_SC):
            d = schemes.diversity_order(scheme, cfg)
            cg = schemes.coding_gain(scheme, cfg)
            click.echo(
                f"{scheme.value:8s} {n:2d} {fp.m:9.5g} {fp.omega:9.6g} "
                f"{fp.m * nr:9.5g} {d:9.6g} {cg.printed:12.6g} {cg.extracted:12.6g}"
            )


@cli.command("outage-sweep")
@click.option("--scheme", default=None, help="tas-mrc, tas-sc or both.")
@click.option("--n", "n_list", default=None, help="Cascade orders, e.g. 2,3,4,5.")
@click.option("--nt", type=int, default=None, help="Transmit antennas.")
@click.option("--nr", type=int, default=None, help="Receive antennas.")
@click.option("--snr-db", default=None, help="Mean-SNR grid start:stop:step in dB.")
@click.option("--rate", type=float, default=None, help="Target rate R; threshold 2^R-1.")
@click.option("--gamma-o", type=float, default=None, help="Outage threshold (linear).")
@click.option("--trials", type=int, default=None, help="Monte-Carlo trials (0 = analytics only).")
@click.option("--seed", type=int, default=None, help="Master seed.")
@click.option("--omega", type=float, default=None, help="Calibration override for both schemes.")
@click.option("--workers", type=int, default=None, help="Worker threads.")
@click.option("--partition-width", type=int, default=None, help="Trials per partition.")
@click.option("--out", default=None, help="Output path (default: stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)
@click.option("--config", "config_path", default=None, help="JSON config file; flags override.")
def cmd_outage_sweep(config_path: str | None, **flags) -> None:
    """Outage probability sweep: analytic, asymptotic and empirical columns."""
    opts = _resolve(
        flags,
        _load_config_file(config_path),
        {
            "scheme": "both", "n_list": "2,3,4,5", "nt": 2, "nr": 3,
            "snr_db": "0:30:2", "rate": None, "gamma_o": None, "trials": 1_000_000,
            "seed": 1, "omega": None, "workers": 1, "partition_width": 65536,
            "out": None, "fmt": "csv",
        },
    )
    if opts["rate"] is not None and opts["gamma_o"] is not None:
        raise click.UsageError("provide at most one of --rate / --gamma-o")
    if opts["rate"] is not None:
        query = OutageQuery(rate=opts["rate"])
    else:
        query = OutageQuery(threshold=opts["gamma_o"] if opts["gamma_o"] is not None else 1.0)
    gamma_o = query.gamma_o
    scheme_list = _schemes_for(opts["scheme"])
    orders = _parse_n_list(opts["n_list"]) if isinstance(opts["n_list"], str) else list(opts["n_list"])
    grid_db = _parse_snr_grid(opts["snr_db"]) if isinstance(opts["snr_db"], str) else list(opts["snr_db"])
    trials = int(opts["trials"])

    rows: list[dict] = []
    for n in orders:
        estimates = None
        points = sorted((gamma_o / 10.0 ** (db / 10.0), db) for db in grid_db)
        if trials > 0:
            settings = SimSettings(
                trials=trials,
                master_seed=int(opts["seed"]),
                partition_width=int(opts["partition_width"]),
                workers=int(opts["workers"]),
            )
            sim_cfg = ChannelConfig(n=n, n_t=opts["nt"], n_r=opts["nr"], mean_snr=1.0)
            estimates = montecarlo.empirical_cdf_pair(
                sim_cfg, settings, [t for t, _ in points]
            )
        for scheme in scheme_list:
            for idx, (threshold, db) in enumerate(points):
                mean_snr = gamma_o / threshold
                cfg = ChannelConfig(
                    n=n, n_t=opts["nt"], n_r=opts["nr"], mean_snr=mean_snr,
                    calibration_omega=opts["omega"],
                )
                analytic = schemes.outage(scheme, query, cfg)
                asymptotic, _ = schemes.outage_asymptotic(scheme, query, cfg)
                row = {
                    "scheme": scheme.value, "n": n, "n_t": opts["nt"], "n_r": opts["nr"],
                    "snr_db": db, "gamma_o": gamma_o, "p_out_analytic": analytic,
                    "p_out_asymptotic": asymptotic, "p_out_mc": None,
                    "ci_low": None, "ci_high": None, "trials": trials,
                    "seed": int(opts["seed"]), "low_confidence": None,
                }
                if estimates is not None:
                    est = estimates[scheme][idx]
                    row.update(
                        p_out_mc=est.value,
                        ci_low=est.ci95_low,
                        ci_high=est.ci95_high,
                        low_confidence=est.value * trials < _LOW_CONFIDENCE_EVENTS,
                    )
                rows.append(row)
    rows.sort(key=lambda r: (r["scheme"], r["n"], r["snr_db"]))
    header_config = {
        "command": "outage-sweep",
        "schemes": ",".join(s.value for s in scheme_list),
        "n_list": ",".join(str(n) for n in orders),
        "n_t": opts["nt"], "n_r": opts["nr"], "gamma_o": gamma_o,
        "omega_tas_mrc": opts["omega"] if opts["omega"] is not None
        else schemes.DEFAULT_CALIBRATION[Scheme.TAS_MRC],
        "omega_tas_sc": opts["omega"] if opts["omega"] is not None
        else schemes.DEFAULT_CALIBRATION[Scheme.TAS_SC],
        "trials": trials, "seed": int(opts["seed"]),
        "snr_grid_db": opts["snr_db"],
    }
    _emit_table(_OUTAGE_COLUMNS, rows, header_config, opts["fmt"], opts["out"])


@cli.command("af-sweep")
@click.option("--scheme", default=None, help="tas-mrc, tas-sc or both.")
@click.option("--n", "n_list", default=None, help="Cascade orders, e.g. 2,3,4,5,6.")
@click.option("--nt", type=int, default=None, help="Transmit antennas.")
@click.option("--nr", type=int, default=None, help="Receive antennas.")
@click.option("--snr-db", default=None, help="Mean SNR in dB (AF is invariant to it).")
@click.option("--b1", type=float, default=None, help="TAS/MRC weighting override.")
@click.option("--b2", type=float, default=None, help="TAS/SC weighting override.")
@click.option("--trials", type=int, default=None, help="Monte-Carlo trials (0 = analytics only).")
@click.option("--seed", type=int, default=None, help="Master seed.")
@click.option("--workers", type=int, default=None, help="Worker threads.")
@click.option("--partition-width", type=int, default=None, help="Trials per partition.")
@click.option("--out", default=None, help="Output path (default: stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)
@click.option("--config", "config_path", default=None, help="JSON config file; flags override.")
def cmd_af_sweep(config_path: str | None, **flags) -> None:
    """Amount-of-fading table: closed form, bound, quadrature oracle, Monte-Carlo."""
    opts = _resolve(
        flags,
        _load_config_file(config_path),
        {
            "scheme": "both", "n_list": "2,3,4,5,6", "nt": 2, "nr": 2,
            "snr_db": "10", "b1": None, "b2": None, "trials": 1_000_000,
            "seed": 1, "workers": 1, "partition_width": 65536,
            "out": None, "fmt": "csv",
        },
    )
    scheme_list = _schemes_for(opts["scheme"])
    orders = _parse_n_list(opts["n_list"]) if isinstance(opts["n_list"], str) else list(opts["n_list"])
    snr_grid = _parse_snr_grid(opts["snr_db"]) if isinstance(opts["snr_db"], str) else [float(opts["snr_db"])]
    # Every AF column is invariant to the mean SNR; computing at a unit
    # reference scale makes that invariance exact in the emitted bytes.
    mean_snr = 1.0
    trials = int(opts["trials"])

    weights: dict[int, moments.WeightingCoefficients] = {}
    for n in orders:
        if opts["b1"] is not None and opts["b2"] is not None:
            weights[n] = moments.WeightingCoefficients(b1=opts["b1"], b2=opts["b2"])
        else:
            try:
                defaults = moments.default_weights(n)
            except ValueError as exc:
                raise click.UsageError(str(exc)) from None
            weights[n] = moments.WeightingCoefficients(
                b1=opts["b1"] if opts["b1"] is not None else defaults.b1,
                b2=opts["b2"] if opts["b2"] is not None else defaults.b2,
            )

    rows: list[dict] = []
    for n in orders:
        w = weights[n]
        cfg = ChannelConfig(
            n=n, n_t=opts["nt"], n_r=opts["nr"], mean_snr=mean_snr, calibration_omega=1.0
        )
        for scheme in scheme_list:
            try:
                af_closed = moments.amount_of_fading(scheme, cfg, w)
            except moments.NonPhysicalMomentError:
                af_closed = None
            m1 = moments.moment_oracle(1, scheme, cfg)
            m2 = moments.moment_oracle(2, scheme, cfg)
            af_oracle = m2 / (m1 * m1) - 1.0
            af_bound = (
                moments.af_bound_tas_mrc(cfg) if scheme is Scheme.TAS_MRC else None
            )
            row = {
                "scheme": scheme.value, "n": n, "n_t": opts["nt"], "n_r": opts["nr"],
                "b1": w.b1, "b2": w.b2, "af_closed": af_closed, "af_bound": af_bound,
                "af_oracle": af_oracle, "af_mc": None, "ci_low": None, "ci_high": None,
            }
            if trials > 0:
                settings = SimSettings(
                    trials=trials,
                    master_seed=int(opts["seed"]),
                    partition_width=int(opts["partition_width"]),
                    workers=int(opts["workers"]),
                )
                est = montecarlo.estimate_moments_af(scheme, cfg, settings).af
                row.update(af_mc=est.value, ci_low=est.ci95_low, ci_high=est.ci95_high)
            rows.append(row)
    rows.sort(key=lambda r: (r["scheme"], r["n"]))
    header_config = {
        "command": "af-sweep",
        "schemes": ",".join(s.value for s in scheme_list),
        "n_list": ",".join(str(n) for n in orders),
        "n_t": opts["nt"], "n_r": opts["nr"],
        "mean_snr_db": snr_grid[0],
        "weighting_coefficients": ";".join(
            f"n={n}:b1={weights[n].b1},b2={weights[n].b2}" for n in orders
        ),
        "trials": trials, "seed": int(opts["seed"]),
    }
    _emit_table(_AF_COLUMNS, rows, header_config, opts["fmt"], opts["out"])


@cli.command("validate")
@click.option("--trials", type=int, default=None, help="Monte-Carlo trials per criterion.")
@click.option("--seed", type=int, default=None, help="Master seed.")
@click.option("--workers", type=int, default=None, help="Worker threads.")
@click.option("--partition-width", type=int, default=None, help="Trials per partition.")
@click.option("--gamma-o", type=float, default=None, help="Outage threshold (linear).")
@click.option("--omega", type=float, default=None, help="TAS/MRC calibration override.")
@click.option("--determinism-trials", type=int, default=None,
              help="Trials for the worker-count determinism probe.")
@click.option("--out", default=None, help="Report path (default: stdout).")
@click.option("--config", "config_path", default=None, help="JSON config file; flags override.")
def cmd_validate(config_path: str | None, **flags) -> None:
    """Run the acceptance suite and emit the JSON validation report."""
    opts = _resolve(
        flags,
        _load_config_file(config_path),
        {
            "trials": 1_000_000, "seed": 1, "workers": 1, "partition_width": 65536,
            "gamma_o": 1.0, "omega": 1.176, "determinism_trials": 120_000,
            "out": None,
        },
    )
    config = validation.ValidationConfig(
        trials=int(opts["trials"]),
        master_seed=int(opts["seed"]),
        partition_width=int(opts["partition_width"]),
        workers=int(opts["workers"]),
        gamma_o=float(opts["gamma_o"]),
        mrc_omega=float(opts["omega"]),
        determinism_trials=int(opts["determinism_trials"]),
    )
    report = validation.build_report(config)
    text = validation.report_to_json(report)
    if opts["out"] is None:
        click.echo(text, nl=False)
    else:
        with open(opts["out"], "w", encoding="utf-8") as handle:
            handle.write(text)
    for criterion in report["criteria"]:
        status = "PASS" if criterion["passed"] else "FAIL"
        click.echo(f"{status} {criterion['id']} {criterion['name']}", err=True)
    summary = report["summary"]
    click.echo(
        f"{summary['criteria_passed']}/{summary['criteria_total']} criteria passed",
        err=True,
    )
    if not summary["all_passed"]:
        failed = [c["id"] for c in report["criteria"] if not c["passed"]]
        raise ValidationFailure(f"failing criteria: {', '.join(failed)}")


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except ValidationFailure as exc:
        click.echo(f"validation failure: {exc}", err=True)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        click.echo(f"numerical non-convergence: {exc}", err=True)
        return EXIT_NUMERIC
    except ValueError as exc:
        # Domain errors from the library surface as usage problems.
        click.echo(f"usage error: {exc}", err=True)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
