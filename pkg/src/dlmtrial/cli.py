"""Command-line interface: simulation grids, reproduction runs, service.

Subcommands:
  simulate         run the scenario grid described by a TOML config file
  sensitivity      run the preconfigured allocation-sensitivity grid
  reproduce-table  run a preconfigured table grid and write a
                   side-by-side comparison against the reference values
  serve            start the live trial-conduct HTTP service

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - version-dependent import
    import tomli as tomllib

from .engine import TrialConfig
from .errors import DlmTrialError
from .harness import Scenario, emit_report, run_grid
from .stopping import BFPriors
from .tables import TABLES

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad invocation or config contents; maps to exit code 2."""


_CONFIG_KEYS = {f.name for f in dataclasses.fields(TrialConfig)}
_BF_KEYS = {f.name for f in dataclasses.fields(BFPriors)}


def _build_config(entry: dict, defaults: TrialConfig,
                  where: str) -> TrialConfig:
    kw = {}
    for key, value in entry.items():
        if key == "bf":
            if not isinstance(value, dict):
                raise UsageError(f"{where}: bf must be a table")
            bad = set(value) - _BF_KEYS
            if bad:
                raise UsageError(
                    f"{where}: unknown bf key(s) {sorted(bad)}")
            kw["bf"] = BFPriors(**value)
        elif key in _CONFIG_KEYS:
            kw[key] = tuple(value) if key == "m0" else value
        else:
            raise UsageError(f"{where}: unknown config key {key!r}")
    try:
        return defaults.with_overrides(**kw)
    except (DlmTrialError, TypeError, ValueError) as err:
        raise UsageError(f"{where}: {err}") from err


def _parse_set(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"--set expects key=value, got {pair!r}")
        try:
            out[key] = tomllib.loads(f"v = {raw}")["v"]
        except tomllib.TOMLDecodeError:
            out[key] = raw  # bare string
    return out


def load_scenarios(config_path: str, overrides: dict) -> list[Scenario]:
    """Parse a TOML grid config into scenarios.

    Layout: optional ``replications`` (default 1000), optional
    ``[defaults]`` table of TrialConfig fields, and ``[[scenario]]``
    entries each with a ``label``, optional ``replications``, and any
    TrialConfig fields overriding the defaults.
    """
    try:
        with open(config_path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError as err:
        raise UsageError(f"config file not found: {config_path}") from err
    except tomllib.TOMLDecodeError as err:
        raise UsageError(f"{config_path}: {err}") from err
    replications = doc.get("replications", 1000)
    defaults = _build_config(doc.get("defaults", {}), TrialConfig(),
                             f"{config_path} [defaults]")
    defaults = _build_config(overrides, defaults, "--set")
    scenarios = []
    for i, entry in enumerate(doc.get("scenario", [])):
        where = f"{config_path} [[scenario]] #{i + 1}"
        if not isinstance(entry, dict) or "label" not in entry:
            raise UsageError(f"{where}: every scenario needs a label")
        entry = dict(entry)
        label = entry.pop("label")
        reps = entry.pop("replications", replications)
        scenarios.append(Scenario(
            label, _build_config(entry, defaults, where), reps))
    return scenarios


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default="out",
                        help="output directory for report files")
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed for replication seed derivation")
    parser.add_argument("--parallelism", type=int, default=None,
                        help="max worker processes (default: sequential)")
    parser.add_argument("--format", default="csv,json",
                        help="comma-separated output formats (csv,json)")


def _formats(arg: str) -> tuple[str, ...]:
    fmts = tuple(f for f in arg.split(",") if f)
    bad = set(fmts) - {"csv", "json"}
    if bad:
        raise UsageError(f"unknown format(s): {sorted(bad)}")
    return fmts


def cmd_simulate(args) -> int:
    scenarios = load_scenarios(args.config, _parse_set(args.set))
    results = run_grid(scenarios, args.seed, args.parallelism)
    for path in emit_report(results, args.out, _formats(args.format)):
        print(path)
    return EXIT_OK


def _comparison_rows(results, references):
    for scenario, agg in results:
        for metric, ref in references.get(scenario.label, {}).items():
            got = getattr(agg, metric)
            yield {
                "label": scenario.label,
                "metric": metric,
                "reference": ref,
                "reproduced": got,
                "abs_dev": abs(got - ref),
                "rel_dev": abs(got - ref) / abs(ref) if ref else "",
            }


def _write_comparison(results, references, out_dir, name) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    fields = ["label", "metric", "reference", "reproduced",
              "abs_dev", "rel_dev"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in _comparison_rows(results, references):
            writer.writerow(row)
    return path


def _run_table(table_id: str, args) -> int:
    grid_fn, ref_fn = TABLES[table_id]
    scenarios = grid_fn(args.replications)
    results = run_grid(scenarios, args.seed, args.parallelism)
    fmts = _formats(args.format)
    for path in emit_report(results, args.out, fmts):
        print(path)
    if "csv" in fmts:
        print(_write_comparison(results, ref_fn(), args.out,
                                f"comparison-{table_id}.csv"))
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    return _run_table("sensitivity", args)


def cmd_reproduce_table(args) -> int:
    if args.table not in TABLES or args.table == "sensitivity":
        raise UsageError(
            f"unknown table {args.table!r}; choose one of 2, 3, 4, 5")
    return _run_table(args.table, args)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise UsageError(f"--bind expects host:port, got {args.bind!r}")
    app = create_app(args.state_dir)
    try:
        uvicorn.run(app, host=host, port=int(port), log_level="warning")
    except (OSError, SystemExit) as err:
        print(f"serve failed: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlmtrial",
        description="Adaptive two-arm trial simulation and conduct.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a TOML-described scenario grid")
    p.add_argument("--config", required=True, help="TOML grid config file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a default config key (repeatable)")
    _add_common(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("sensitivity",
                       help="run the preconfigured sensitivity grid")
    p.add_argument("--replications", type=int, default=1000)
    _add_common(p)
    p.set_defaults(fn=cmd_sensitivity)

    p = sub.add_parser("reproduce-table",
                       help="reproduce a summary table and compare")
    p.add_argument("table", help="table id: 2, 3, 4 or 5")
    p.add_argument("--replications", type=int, default=1000)
    _add_common(p)
    p.set_defaults(fn=cmd_reproduce_table)

    p = sub.add_parser("serve", help="start the trial-conduct HTTP service")
    p.add_argument("--bind", default="127.0.0.1:8080", help="host:port")
    p.add_argument("--state-dir", default="trial-state",
                   help="directory for per-trial event logs")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DlmTrialError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
