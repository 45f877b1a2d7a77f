"""Command-line front end: simulate / analyze / sweep / report.

A run is declared by a JSON config file; individual flags override config
entries. Every output file records the tool version, a hash of the resolved
configuration, and the seed, so a rerun from the same config reproduces the
artifact tree byte for byte.

Exit codes: 0 success, 2 config error, 3 data error, 4 I/O error. Every
error path prints a single ``<CODE>: message`` line to stderr
(``CONFIG_ERROR`` / ``DATA_ERROR`` / ``IO_ERROR``).
"""

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .convergence import (
    DEFAULT_BURN_IN,
    DEFAULT_CHECKPOINT_BASE,
    DEFAULT_CHECKPOINT_RATIO,
    ConvergenceSeries,
    check_bound,
    convergence_series,
    efficiency_sweep,
    fit_rate,
)
from .errors import (
    BornrateError,
    DegenerateDataError,
    DomainError,
    EventLogFormatError,
    InsufficientDataError,
    InvalidParameterError,
    InvalidSpecError,
    OuterRegionViolationError,
)
from .sampler import DetectorModel, read_event_log, sample_events, write_event_log
from .wavefunction import spec_from_config, tabulated_from_csv, validate

TOOL = f"bornrate/{__version__}"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_IO = 4

_CONFIG_ERRORS = (InvalidSpecError, InvalidParameterError, DomainError)
_DATA_ERRORS = (
    DegenerateDataError,
    InsufficientDataError,
    OuterRegionViolationError,
    EventLogFormatError,
)


class _CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _config_error(message):
    return _CliError(EXIT_CONFIG, message)


# ----------------------------------------------------------------------------
# config resolution
# ----------------------------------------------------------------------------

def _load_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise _config_error(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise _config_error(f"config file {path} must hold a JSON object")
    cfg["_config_dir"] = os.path.dirname(os.path.abspath(path))
    return cfg


def _parse_int_list(text):
    try:
        return [int(part) for part in str(text).split(",") if part != ""]
    except ValueError:
        raise _config_error(f"expected integer or comma-separated integers, got {text!r}")


def _parse_float_list(text):
    try:
        return [float(part) for part in str(text).split(",") if part != ""]
    except ValueError:
        raise _config_error(f"expected number or comma-separated numbers, got {text!r}")


def _as_list(value, parse):
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        return list(value)
    return parse(value)


def _resolve(args, need_spec=True):
    """Merge defaults <- config file <- flags into one plain dict."""
    cfg = _load_config_file(args.config) if getattr(args, "config", None) else {}
    config_dir = cfg.pop("_config_dir", os.getcwd())

    resolved = {
        "seed": 0,
        "efficiency": [1.0],
        "emitted": 100_000,
        "bins": [64],
        "checkpoint_base": DEFAULT_CHECKPOINT_BASE,
        "checkpoint_ratio": DEFAULT_CHECKPOINT_RATIO,
        "burn_in": DEFAULT_BURN_IN,
        "replicas": 1,
        "workers": 1,
        "out": ".",
    }
    for key in resolved:
        if key in cfg:
            resolved[key] = cfg[key]
    unknown = set(cfg) - set(resolved) - {"spec"}
    if unknown:
        raise _config_error(f"unknown config keys: {sorted(unknown)}")

    for flag, key in [
        ("seed", "seed"), ("emitted", "emitted"),
        ("checkpoint_base", "checkpoint_base"),
        ("checkpoint_ratio", "checkpoint_ratio"),
        ("burn_in", "burn_in"), ("replicas", "replicas"),
        ("workers", "workers"), ("out", "out"),
    ]:
        value = getattr(args, flag, None)
        if value is not None:
            resolved[key] = value
    if getattr(args, "bins", None) is not None:
        resolved["bins"] = _parse_int_list(args.bins)
    if getattr(args, "efficiency", None) is not None:
        resolved["efficiency"] = _parse_float_list(args.efficiency)

    resolved["bins"] = _as_list(resolved["bins"], _parse_int_list)
    resolved["efficiency"] = _as_list(resolved["efficiency"], _parse_float_list)

    spec_cfg = cfg.get("spec")
    resolved["spec"] = None
    if spec_cfg is not None:
        if isinstance(spec_cfg, dict) and "table_csv" in spec_cfg:
            spec_cfg = dict(spec_cfg)
            csv_path = spec_cfg.pop("table_csv")
            if not os.path.isabs(csv_path):
                csv_path = os.path.join(config_dir, csv_path)
            spec = tabulated_from_csv(
                csv_path,
                spec_cfg.get("support_halfwidth"),
                spec_cfg.get("truncation_tol"),
            )
        else:
            spec = spec_from_config(spec_cfg)
        resolved["spec"] = spec
    elif need_spec:
        raise _config_error("config must provide a 'spec' entry")
    return resolved


def _config_hash(resolved):
    """Hash of the data-determining configuration (output dir and worker
    count excluded: they cannot change the numbers)."""
    from .wavefunction import spec_to_config

    payload = {k: v for k, v in resolved.items() if k not in ("out", "workers")}
    if payload.get("spec") is not None:
        payload["spec"] = spec_to_config(payload["spec"])
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _ensure_out(resolved):
    out = resolved["out"]
    os.makedirs(out, exist_ok=True)
    return out


def _file_header(config_hash, seed):
    return [f"# tool={TOOL}", f"# config_hash={config_hash}", f"# seed={seed}"]


def _write_lines(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


# ----------------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------------

def _cmd_simulate(args):
    resolved = _resolve(args)
    efficiency = resolved["efficiency"][0]
    dist = validate(resolved["spec"])
    log = sample_events(
        dist, DetectorModel(efficiency), int(resolved["emitted"]), int(resolved["seed"])
    )
    out = _ensure_out(resolved)
    path = os.path.join(out, "events.csv")
    write_event_log(
        log, path,
        extra_header={"tool": TOOL, "config_hash": _config_hash(resolved)},
    )
    print(f"recorded={len(log)} emitted={log.emitted_count} -> {path}")
    return EXIT_OK


def _series_csv_lines(series, config_hash, seed):
    lines = _file_header(config_hash, seed)
    lines.append("N,D")
    lines.extend(
        f"{n},{d:.17g}" for n, d in zip(series.sizes, series.deviations)
    )
    return lines


def _read_series_csv(path):
    sizes, devs = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#") or line == "N,D":
                continue
            n_str, sep, d_str = line.partition(",")
            if not sep:
                raise EventLogFormatError(
                    f"{path}:{line_no}: expected 'N,D' row", line_no
                )
            try:
                sizes.append(int(n_str))
                devs.append(float(d_str))
            except ValueError:
                raise EventLogFormatError(
                    f"{path}:{line_no}: non-numeric row {line!r}", line_no
                )
    if not sizes:
        raise InsufficientDataError(f"{path}: no data rows")
    return ConvergenceSeries(
        np.array(sizes, dtype=np.int64), np.array(devs), None, float("nan")
    )


def _fit_report(series, burn_in, nbins, efficiency, seed, config_hash):
    fit = fit_rate(series, burn_in=burn_in)
    bound1 = check_bound(series, 1.0)
    bound05 = check_bound(series, 0.5)
    return {
        "alpha_hat": fit.exponent,
        "alpha_se": fit.stderr,
        "C_hat": fit.constant,
        "r_squared": fit.r_squared,
        "points_used": fit.points_used,
        "C_min_alpha1": bound1.c_min,
        "C_trend_alpha1": bound1.trend,
        "C_min_alpha05": bound05.c_min,
        "C_trend_alpha05": bound05.trend,
        "M": nbins,
        "e": efficiency,
        "seed": seed,
        "burn_in": burn_in,
        "series_csv": "series.csv",
        "tool": TOOL,
        "config_hash": config_hash,
    }


def _cmd_analyze(args):
    resolved = _resolve(args, need_spec=False)
    burn_in = int(resolved["burn_in"])
    nbins = int(resolved["bins"][0])

    if args.inject_series:
        series = _read_series_csv(args.inject_series)
        config_hash = _config_hash({**resolved, "inject": args.inject_series})
        nbins_out, efficiency, seed = None, None, None
    else:
        if not args.log:
            raise _config_error("analyze needs an event-log path (or --inject-series)")
        log = read_event_log(args.log)
        dist = validate(log.spec)
        series = convergence_series(
            log, dist, nbins,
            base=int(resolved["checkpoint_base"]),
            ratio=float(resolved["checkpoint_ratio"]),
        )
        config_hash = _config_hash({**resolved, "log": os.path.basename(args.log)})
        nbins_out, efficiency, seed = nbins, log.detector.efficiency, log.seed

    report = _fit_report(series, burn_in, nbins_out, efficiency, seed, config_hash)
    out = _ensure_out(resolved)
    _write_lines(
        os.path.join(out, "series.csv"),
        _series_csv_lines(series, config_hash, report["seed"]),
    )
    with open(os.path.join(out, "fit.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        f"alpha_hat={report['alpha_hat']:.6g} "
        f"C_min_alpha1={report['C_min_alpha1']:.6g} "
        f"C_min_alpha05={report['C_min_alpha05']:.6g}"
    )
    return EXIT_OK


def _cmd_sweep(args):
    resolved = _resolve(args)
    dist = validate(resolved["spec"])
    cells, _ = efficiency_sweep(
        dist,
        [int(m) for m in resolved["bins"]],
        [float(e) for e in resolved["efficiency"]],
        int(resolved["emitted"]),
        int(resolved["replicas"]),
        int(resolved["seed"]),
        base=int(resolved["checkpoint_base"]),
        ratio=float(resolved["checkpoint_ratio"]),
        burn_in=int(resolved["burn_in"]),
        workers=int(resolved["workers"]),
    )
    config_hash = _config_hash(resolved)
    lines = _file_header(config_hash, resolved["seed"])
    lines.append("M,e,median_alpha_hat,median_C_min_alpha1,median_C_min_alpha05")
    lines.extend(
        f"{c.nbins},{c.efficiency!r},{c.median_exponent:.17g},"
        f"{c.median_c_min_inverse:.17g},{c.median_c_min_sqrt:.17g}"
        for c in cells
    )
    out = _ensure_out(resolved)
    path = os.path.join(out, "sweep.csv")
    _write_lines(path, lines)
    print(f"{len(cells)} cells -> {path}")
    return EXIT_OK


_REPORT_FIT_COLUMNS = [
    "alpha_hat", "C_hat", "r_squared", "C_min_alpha1", "C_trend_alpha1",
    "C_min_alpha05", "C_trend_alpha05", "M", "e", "seed",
]


def _cmd_report(args):
    resolved = _resolve(args, need_spec=False)
    rows = []
    hashes = []
    for fit_path in args.fits:
        with open(fit_path, "r", encoding="utf-8") as fh:
            try:
                fit = json.load(fh)
            except json.JSONDecodeError as exc:
                raise _config_error(f"{fit_path}: not valid JSON: {exc}")
        missing = [c for c in _REPORT_FIT_COLUMNS if c not in fit]
        if missing:
            raise _config_error(f"{fit_path}: missing fit fields {missing}")
        series_rel = fit.get("series_csv", "series.csv")
        series_path = os.path.join(os.path.dirname(os.path.abspath(fit_path)), series_rel)
        series = _read_series_csv(series_path)
        run_id = fit_path
        for n, d in zip(series.sizes, series.deviations):
            log_d = np.log10(d) if d > 0 else float("nan")
            row = [run_id, str(n), f"{d:.17g}",
                   f"{np.log10(n):.17g}", f"{log_d:.17g}"]
            row.extend(_json_field(fit[c]) for c in _REPORT_FIT_COLUMNS)
            rows.append(",".join(row))
        hashes.append(str(fit.get("config_hash", "")))

    digest = hashlib.sha256("\n".join(hashes).encode("utf-8")).hexdigest()
    lines = _file_header(digest, "null")
    lines.append("run,N,D,log10_N,log10_D," + ",".join(_REPORT_FIT_COLUMNS))
    lines.extend(rows)
    out = _ensure_out(resolved)
    path = os.path.join(out, "report.csv")
    _write_lines(path, lines)
    print(f"{len(rows)} rows -> {path}")
    return EXIT_OK


def _json_field(value):
    if value is None:
        return "null"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


# ----------------------------------------------------------------------------
# argument parsing and error mapping
# ----------------------------------------------------------------------------

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="bornrate",
        description="Detection-event simulator and empirical-cdf convergence-rate harness.",
    )
    parser.add_argument("--version", action="version", version=TOOL)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec_flags=True):
        p.add_argument("--config", help="JSON config file; flags override its entries")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output directory (default '.')")
        if spec_flags:
            p.add_argument("--efficiency", help="detector efficiency (or comma list for sweep)")
            p.add_argument("--emitted", type=int, help="number of emitted particles")
        p.add_argument("--bins", help="interior bin count (or comma list for sweep)")
        p.add_argument("--checkpoint-base", dest="checkpoint_base", type=int)
        p.add_argument("--checkpoint-ratio", dest="checkpoint_ratio", type=float)
        p.add_argument("--burn-in", dest="burn_in", type=int)
        p.add_argument("--workers", type=int)

    p_sim = sub.add_parser("simulate", help="write a detection event log")
    common(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_ana = sub.add_parser("analyze", help="deviation series + rate fit for one log")
    p_ana.add_argument("log", nargs="?", help="event-log file from 'simulate'")
    p_ana.add_argument(
        "--inject-series", dest="inject_series",
        help="fit a precomputed N,D series CSV instead of an event log",
    )
    common(p_ana)
    p_ana.set_defaults(func=_cmd_analyze)

    p_sweep = sub.add_parser("sweep", help="factorial (bins x efficiency) study")
    common(p_sweep)
    p_sweep.add_argument("--replicas", type=int)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_rep = sub.add_parser("report", help="merge fit JSONs into one plot-ready CSV")
    p_rep.add_argument("fits", nargs="+", help="fit.json files from 'analyze'")
    common(p_rep, spec_flags=False)
    p_rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        label = {EXIT_CONFIG: "CONFIG_ERROR", EXIT_DATA: "DATA_ERROR", EXIT_IO: "IO_ERROR"}
        print(f"{label[exc.code]}: {exc}", file=sys.stderr)
        return exc.code
    except _CONFIG_ERRORS as exc:
        print(f"CONFIG_ERROR: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _DATA_ERRORS as exc:
        print(f"DATA_ERROR: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"IO_ERROR: {exc}", file=sys.stderr)
        return EXIT_IO
    except BornrateError as exc:
        print(f"DATA_ERROR: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
