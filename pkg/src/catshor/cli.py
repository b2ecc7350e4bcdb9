"""Command-line front end.

Subcommands: ``estimate`` (one parameter point), ``optimize`` (exhaustive
search), ``table`` (one optimized row per key size; the CSV doubles as
plot data with n, qubit and time columns), ``verify-circuits`` (oracle
equivalence suites) and ``qec-sample`` (repetition-code Monte Carlo).

Flag values override config-file values, which override defaults; the
effective configuration is echoed in the output metadata (stderr for CSV,
which stays machine-parseable).  All outputs are deterministic functions
of the flags and seed, byte-identical across repeats and worker counts.

Exit codes: 0 success, 1 usage error, 2 infeasible parameters, 3
verification failure.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from . import qecsim, verify
from .errormodel import DEFAULT_CYCLE_TIME, ErrorParams, factory_table
from .estimator import (
    TABLE_COLUMNS,
    AlgoParams,
    InfeasibleError,
    emit_results_table,
    estimate,
    optimize,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY_FAILED = 3

# config-file keys each command accepts (flag names with dashes swapped
# for underscores); anything else is rejected
_COMMON_KEYS = {"kappa_ratio", "cycle_ns", "format", "out"}
_CONFIG_KEYS = {
    "estimate": _COMMON_KEYS | {"n", "d", "alpha2", "we", "wm", "factory", "factory_table"},
    "optimize": _COMMON_KEYS
    | {"n", "d", "alpha2", "we", "wm", "factory", "factory_table", "workers"},
    "table": _COMMON_KEYS | {"n", "factory_table", "workers", "full_search"},
    "verify-circuits": {"format", "out", "prime", "suite"},
    "qec-sample": {"format", "out", "d", "alpha2", "kappa_ratio", "trials", "seed", "workers"},
}


def _load_config(path, command):
    if path is None:
        return {}
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise click.UsageError(f"config file {path} must hold a JSON object")
    unknown = sorted(set(cfg) - _CONFIG_KEYS[command])
    if unknown:
        raise click.UsageError(f"unknown config keys for {command}: {', '.join(unknown)}")
    return cfg


def _pick(flag_value, cfg, key, default=None):
    if flag_value is not None:
        return flag_value
    if key in cfg:
        return cfg[key]
    return default


def _error_params(kappa_ratio, cycle_ns):
    # alpha_sq is a per-point search variable; the container needs a
    # placeholder that individual estimates replace
    return ErrorParams(
        kappa_ratio=kappa_ratio, alpha_sq=1.0, cycle_time=cycle_ns * 1e-9
    )


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _json_text(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _csv_text(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([row[c] for c in columns])
    return buf.getvalue()


def _text_block(pairs, indent=""):
    width = max((len(k) for k, _ in pairs), default=0)
    return "".join(f"{indent}{k.ljust(width)}  {v}\n" for k, v in pairs)


def _render(record, fmt, config_echo, out, csv_spec=None):
    """Serialize one record; the config echo rides inside JSON/text and
    goes to stderr for CSV."""
    if fmt == "json":
        record = dict(record)
        record["config"] = config_echo
        _emit(_json_text(record), out)
    elif fmt == "csv":
        if csv_spec is None:
            raise click.UsageError("this command has no CSV form; use json or text")
        columns, rows = csv_spec
        sys.stderr.write("config: " + json.dumps(config_echo, sort_keys=True) + "\n")
        _emit(_csv_text(columns, rows), out)
    else:
        pairs = [("config", json.dumps(config_echo, sort_keys=True))]
        pairs += [(k, v) for k, v in _flatten(record)]
        _emit(_text_block(pairs), out)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}{k}." if prefix else f"{k}.")
    else:
        yield prefix[:-1], repr(obj) if isinstance(obj, str) else str(obj)


@click.group()
def cli():
    """Resource estimation and circuit verification toolchain."""


_common = [
    click.option("--kappa-ratio", type=float, default=None, help="kappa_1/kappa_2 [1e-5]"),
    click.option("--cycle-ns", type=float, default=None, help="QEC cycle time in ns [500]"),
    click.option("--out", type=click.Path(dir_okay=False), default=None, help="output file"),
    click.option(
        "--format", "fmt", type=click.Choice(["json", "csv", "text"]), default=None
    ),
    click.option("--config", "config_path", type=click.Path(exists=True), default=None),
]


def _with(options):
    def wrap(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return wrap


def _algo_flags(fn):
    for opt in reversed(
        [
            click.option("--d", type=int, default=None, help="code distance"),
            click.option("--alpha2", type=float, default=None, help="photons per cat qubit"),
            click.option("--we", type=int, default=None, help="scalar-mult window width"),
            click.option("--wm", type=int, default=None, help="multiplication window width"),
            click.option("--factory", type=int, default=None, help="factory row index"),
            click.option(
                "--factory-table",
                "factory_csv",
                type=click.Path(exists=True),
                default=None,
                help="CSV overriding the builtin factory rows",
            ),
        ]
    ):
        fn = opt(fn)
    return fn


def _resolve_common(cfg, kappa_ratio, cycle_ns, fmt, out):
    kappa_ratio = _pick(kappa_ratio, cfg, "kappa_ratio", 1e-5)
    cycle_ns = _pick(cycle_ns, cfg, "cycle_ns", DEFAULT_CYCLE_TIME * 1e9)
    fmt = _pick(fmt, cfg, "format", "json")
    out = _pick(out, cfg, "out")
    return float(kappa_ratio), float(cycle_ns), fmt, out


@cli.command()
@click.option("--n", type=int, default=None, help="field size in bits")
@_algo_flags
@_with(_common)
def estimate_cmd(n, d, alpha2, we, wm, factory, factory_csv, kappa_ratio, cycle_ns, fmt, out, config_path):
    """Resource estimate at one fully specified parameter point."""
    cfg = _load_config(config_path, "estimate")
    kappa_ratio, cycle_ns, fmt, out = _resolve_common(cfg, kappa_ratio, cycle_ns, fmt, out)
    n = _pick(n, cfg, "n")
    d = _pick(d, cfg, "d")
    alpha2 = _pick(alpha2, cfg, "alpha2")
    we = _pick(we, cfg, "we")
    wm = _pick(wm, cfg, "wm")
    factory = _pick(factory, cfg, "factory")
    factory_csv = _pick(factory_csv, cfg, "factory_table")
    missing = [
        name
        for name, val in (
            ("--n", n), ("--d", d), ("--alpha2", alpha2), ("--we", we),
            ("--wm", wm), ("--factory", factory),
        )
        if val is None
    ]
    if missing:
        raise click.UsageError(f"estimate needs {', '.join(missing)}")
    echo = {
        "command": "estimate", "n": n, "d": d, "alpha2": alpha2, "we": we,
        "wm": wm, "factory": factory, "kappa_ratio": kappa_ratio,
        "cycle_ns": cycle_ns, "factory_table": factory_csv,
    }
    err = _error_params(kappa_ratio, cycle_ns)
    rows = factory_table(factory_csv) if factory_csv else None
    try:
        est = estimate(
            AlgoParams(n=n, w_e=we, w_m=wm, alpha_sq=alpha2, d=d, factory_i=factory),
            err,
            factory_rows=rows,
        )
    except InfeasibleError as exc:
        click.echo(f"infeasible ({exc.binding}): {exc}", err=True)
        return EXIT_INFEASIBLE
    _render(est.to_dict(), fmt, echo, out)
    return EXIT_OK


@cli.command()
@click.option("--n", type=int, default=None, help="field size in bits")
@click.option("--workers", type=int, default=None, help="parallel workers [1]")
@_algo_flags
@_with(_common)
def optimize_cmd(n, workers, d, alpha2, we, wm, factory, factory_csv, kappa_ratio, cycle_ns, fmt, out, config_path):
    """Exhaustive parameter search; flags pin individual grid axes."""
    cfg = _load_config(config_path, "optimize")
    kappa_ratio, cycle_ns, fmt, out = _resolve_common(cfg, kappa_ratio, cycle_ns, fmt, out)
    n = _pick(n, cfg, "n")
    workers = int(_pick(workers, cfg, "workers", 1))
    if n is None:
        raise click.UsageError("optimize needs --n")
    pins = {
        "w_e": _pick(we, cfg, "we"),
        "w_m": _pick(wm, cfg, "wm"),
        "alpha_sq": _pick(alpha2, cfg, "alpha2"),
        "d": _pick(d, cfg, "d"),
        "factory_i": _pick(factory, cfg, "factory"),
    }
    grid = {axis: (val,) for axis, val in pins.items() if val is not None}
    factory_csv = _pick(factory_csv, cfg, "factory_table")
    # workers stay out of the echo: results are worker-count independent
    echo = {
        "command": "optimize", "n": n, "kappa_ratio": kappa_ratio,
        "cycle_ns": cycle_ns, "factory_table": factory_csv,
        "pinned": {k: v for k, v in pins.items() if v is not None},
    }
    err = _error_params(kappa_ratio, cycle_ns)
    rows = factory_table(factory_csv) if factory_csv else None
    try:
        result = optimize(
            n, err, grid=grid or None, workers=workers, factory_rows=rows
        )
    except InfeasibleError as exc:
        click.echo(f"infeasible ({exc.binding}): {exc}", err=True)
        return EXIT_INFEASIBLE
    _render(result.to_dict(), fmt, echo, out)
    return EXIT_OK


@cli.command()
@click.option("--n", "n_list", type=int, multiple=True, help="key size; repeatable")
@click.option("--workers", type=int, default=None, help="parallel workers [1]")
@click.option("--full-search", is_flag=True, default=False, help="search window widths too")
@click.option(
    "--factory-table", "factory_csv", type=click.Path(exists=True), default=None
)
@_with(_common)
def table_cmd(n_list, workers, full_search, factory_csv, kappa_ratio, cycle_ns, fmt, out, config_path):
    """Optimized resource row per key size (CSV doubles as plot data)."""
    cfg = _load_config(config_path, "table")
    kappa_ratio, cycle_ns, fmt, out = _resolve_common(cfg, kappa_ratio, cycle_ns, fmt, out)
    n_list = list(n_list) or list(cfg.get("n", ()))
    workers = int(_pick(workers, cfg, "workers", 1))
    full_search = full_search or bool(cfg.get("full_search", False))
    factory_csv = _pick(factory_csv, cfg, "factory_table")
    echo = {
        "command": "table", "n": n_list, "kappa_ratio": kappa_ratio,
        "cycle_ns": cycle_ns, "full_search": full_search,
        "factory_table": factory_csv,
    }
    err = _error_params(kappa_ratio, cycle_ns)
    frows = factory_table(factory_csv) if factory_csv else None
    try:
        rows = emit_results_table(
            n_list, err, full_search=full_search, workers=workers, factory_rows=frows
        )
    except InfeasibleError as exc:
        click.echo(f"infeasible ({exc.binding}): {exc}", err=True)
        return EXIT_INFEASIBLE
    if fmt == "csv":
        _render(None, "csv", echo, out, csv_spec=(TABLE_COLUMNS, rows))
    else:
        record = {
            "schema": "catshor/results_table/v1",
            "columns": list(TABLE_COLUMNS),
            "rows": rows,
        }
        _render(record, fmt, echo, out)
    return EXIT_OK


@cli.command("verify-circuits")
@click.option("--prime", type=click.Choice(["7", "13", "auto"]), default=None)
@click.option(
    "--suite",
    type=click.Choice(list(verify.SUITE_NAMES) + ["all"]),
    default=None,
)
@click.option("--inject-fault", is_flag=True, default=False, hidden=True)
@_with(_common)
def verify_cmd(prime, suite, inject_fault, kappa_ratio, cycle_ns, fmt, out, config_path):
    """Run the exhaustive oracle-equivalence suites."""
    cfg = _load_config(config_path, "verify-circuits")
    fmt = _pick(fmt, cfg, "format", "text")
    out = _pick(out, cfg, "out")
    if fmt == "csv":
        raise click.UsageError("verify-circuits emits json or text, not csv")
    prime = _pick(prime, cfg, "prime", "auto")
    suite = _pick(suite, cfg, "suite", "all")
    prime_arg = None if str(prime) == "auto" else int(prime)
    echo = {"command": "verify-circuits", "suite": suite, "prime": str(prime)}
    results = verify.run_suite(suite, prime=prime_arg, inject_fault=inject_fault)
    if fmt == "json":
        _render(verify.report(results), "json", echo, out)
    else:
        lines = []
        for r in results:
            lines.append(("PASS" if r.ok else "FAIL", f"{r.name} ({r.cases} cases)"))
        _emit(_text_block(lines), out)
    failures = [r for r in results if not r.ok]
    if failures:
        first = failures[0]
        click.echo(
            f"{first.name} failed: inputs={first.counterexample['inputs']} "
            f"expected={first.counterexample['expected']} "
            f"got={first.counterexample['got']}",
            err=True,
        )
        return EXIT_VERIFY_FAILED
    return EXIT_OK


@cli.command("qec-sample")
@click.option("--d", type=int, default=None, help="code distance")
@click.option("--alpha2", type=float, default=None, help="photons per cat qubit")
@click.option("--trials", type=int, default=None, help="Monte Carlo trials")
@click.option("--seed", type=int, default=None, help="master seed [0]")
@click.option("--workers", type=int, default=None, help="parallel workers [1]")
@_with(_common)
def qec_cmd(d, alpha2, trials, seed, workers, kappa_ratio, cycle_ns, fmt, out, config_path):
    """Monte Carlo estimate of the per-cycle logical phase-flip rate."""
    cfg = _load_config(config_path, "qec-sample")
    kappa_ratio, cycle_ns, fmt, out = _resolve_common(cfg, kappa_ratio, cycle_ns, fmt, out)
    d = _pick(d, cfg, "d")
    alpha2 = _pick(alpha2, cfg, "alpha2")
    trials = _pick(trials, cfg, "trials")
    seed = int(_pick(seed, cfg, "seed", 0))
    workers = int(_pick(workers, cfg, "workers", 1))
    if d is None or alpha2 is None or trials is None:
        raise click.UsageError("qec-sample needs --d, --alpha2 and --trials")
    if trials <= 0:
        raise click.UsageError(f"--trials must be positive, got {trials}")
    echo = {
        "command": "qec-sample", "d": d, "alpha2": alpha2,
        "kappa_ratio": kappa_ratio, "trials": trials, "seed": seed,
    }
    params = ErrorParams(kappa_ratio=kappa_ratio, alpha_sq=alpha2, cycle_time=cycle_ns * 1e-9)
    flips = _count_flips_parallel(d, params, trials, seed, workers)
    record = qecsim.logical_z_rate_record(d, params, trials, master_seed=seed, flips=flips)
    _render(record, fmt, echo, out)
    return EXIT_OK


def _count_flips_parallel(d, params, trials, seed, workers):
    noise = qecsim.NoiseModel.from_params(params)
    if workers <= 1 or trials < 2 * workers:
        return qecsim.count_flips(d, noise, seed, 0, trials)
    # contiguous ranges; per-trial seeding makes the split irrelevant
    bounds = [trials * k // workers for k in range(workers + 1)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(qecsim.count_flips, d, noise, seed, lo, hi)
            for lo, hi in zip(bounds, bounds[1:])
        ]
        return sum(f.result() for f in futures)


def main(argv=None):
    """Dispatch; returns the process exit code."""
    try:
        rc = cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    return int(rc or 0)
