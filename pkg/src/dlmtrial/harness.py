"""Monte Carlo replication harness: grids, aggregation, report files.

A Scenario is a TrialConfig template plus a replication count.  Each
replication runs with an independent seed derived from the master seed
and the replication index, so results are bit-identical for any worker
count.  Aggregation reduces the ordered replication list to the summary
statistics the reports and regression tables consume.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .engine import TrialConfig, TrialResult, count_switch_point, run_trial
from .errors import ConfigError, NumericError
from .rng import derive_key

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Scenario:
    """A labelled trial configuration to replicate many times."""

    label: str
    config: TrialConfig
    replications: int = 1000

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")


@dataclass
class AggregateResult:
    """Across-replication summary of one scenario."""

    replications: int
    budget: int
    mean_nA: float
    mean_nB: float
    mean_propA: float
    mean_propB: float
    mean_switch: float          # mean switch, no-switch reps censored at budget
    n_no_switch: int            # replications with no sustained switch
    stop_q025: float
    stop_median: float
    stop_q975: float
    p_exhaust: float            # fraction that never stopped decisively
    mean_wA_by_t: list[float | None] = field(repr=False, default_factory=list)
    se_wA_by_t: list[float | None] = field(repr=False, default_factory=list)
    wall_time_seconds: float = 0.0


def quantile(samples, q: float) -> float:
    """Linear-interpolation quantile at order-statistic position
    1 + q*(n-1) (1-based)."""
    if len(samples) == 0:
        raise ValueError("quantile of empty sample")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    xs = sorted(samples)
    pos = q * (len(xs) - 1)
    lo = math.floor(pos)
    hi = min(lo + 1, len(xs) - 1)
    frac = pos - lo
    # The one-product form keeps the result weakly monotone in q and
    # inside [xs[lo], xs[hi]] under round-to-nearest.
    return xs[lo] + frac * (xs[hi] - xs[lo])


def aggregate(results: list[TrialResult], budget: int,
              wall_time_seconds: float = 0.0) -> AggregateResult:
    """Reduce an ordered replication list to summary statistics."""
    if not results:
        raise ValueError("aggregate of empty result list")
    n = len(results)
    mean_nA = math.fsum(r.nA for r in results) / n
    mean_nB = math.fsum(r.nB for r in results) / n
    props = [r.nA / (r.nA + r.nB) for r in results if r.nA + r.nB > 0]
    mean_propA = math.fsum(props) / len(props) if props else 0.5
    switches = [count_switch_point([rec.arm for rec in r.records])
                for r in results]
    n_no_switch = sum(1 for s in switches if s is None)
    # Replications that never switch are censored at the budget so the
    # mean is defined over all replications.
    mean_switch = math.fsum(budget if s is None else s
                            for s in switches) / n
    stop_times = [r.stop_time for r in results]
    # Per-patient weight means over the replications still enrolled at t.
    sums = [0.0] * budget
    sqs = [0.0] * budget
    counts = [0] * budget
    for r in results:
        for i, w in enumerate(r.weight_trajectory):
            sums[i] += w
            sqs[i] += w * w
            counts[i] += 1
    mean_w: list[float | None] = []
    se_w: list[float | None] = []
    for s, s2, c in zip(sums, sqs, counts):
        if c == 0:
            mean_w.append(None)
            se_w.append(None)
            continue
        m = s / c
        mean_w.append(m)
        var = max(s2 / c - m * m, 0.0) * (c / (c - 1)) if c > 1 else 0.0
        se_w.append(math.sqrt(var / c))
    return AggregateResult(
        replications=n,
        budget=budget,
        mean_nA=mean_nA,
        mean_nB=mean_nB,
        mean_propA=mean_propA,
        mean_propB=1.0 - mean_propA,
        mean_switch=mean_switch,
        n_no_switch=n_no_switch,
        stop_q025=quantile(stop_times, 0.025),
        stop_median=quantile(stop_times, 0.5),
        stop_q975=quantile(stop_times, 0.975),
        p_exhaust=sum(1 for r in results if not r.stopped) / n,
        mean_wA_by_t=mean_w,
        se_wA_by_t=se_w,
        wall_time_seconds=wall_time_seconds,
    )


def _replicate(args) -> TrialResult:
    cfg, rep, seed = args
    try:
        return run_trial(cfg.with_overrides(seed=seed))
    except NumericError as err:
        raise NumericError(f"replication {rep}: {err}") from err


def run_scenario(scenario: Scenario, master_seed: int = 0,
                 max_parallelism: int | None = None) -> AggregateResult:
    """Run all replications of one scenario and aggregate.

    Replication seeds depend only on (master_seed, replication index),
    so the output is identical for every parallelism level.
    """
    t0 = time.perf_counter()
    jobs = [(scenario.config, rep, derive_key(master_seed, rep))
            for rep in range(scenario.replications)]
    try:
        if max_parallelism is None or max_parallelism <= 1:
            results = [_replicate(j) for j in jobs]
        else:
            with ProcessPoolExecutor(max_workers=max_parallelism) as pool:
                chunk = max(1, len(jobs) // (4 * max_parallelism))
                results = list(pool.map(_replicate, jobs, chunksize=chunk))
    except NumericError as err:
        raise NumericError(f"scenario {scenario.label!r}: {err}") from err
    return aggregate(results, scenario.config.budget,
                     wall_time_seconds=time.perf_counter() - t0)


def run_grid(scenarios, master_seed: int = 0,
             max_parallelism: int | None = None
             ) -> list[tuple[Scenario, AggregateResult]]:
    """Run a list of scenarios; deterministic for a fixed master seed."""
    return [(s, run_scenario(s, master_seed, max_parallelism))
            for s in scenarios]


_CSV_FIELDS = [
    "label", "replications", "budget", "mean_nA", "mean_nB", "mean_propA",
    "mean_propB", "mean_switch", "n_no_switch", "stop_q025", "stop_median",
    "stop_q975", "p_exhaust", "wall_time_seconds",
]


def _csv_row(label: str, agg: AggregateResult) -> dict:
    row = {f: getattr(agg, f) for f in _CSV_FIELDS if f != "label"}
    row["label"] = label
    if row["mean_switch"] is None:
        row["mean_switch"] = ""
    return row


def emit_report(results, out_dir, formats=("csv", "json")) -> list[str]:
    """Write the grid report; returns the paths written.

    ``report.csv``: one row per scenario with the _CSV_FIELDS columns.
    ``report.json``: schema_version plus, per scenario, the full config
    and aggregate including the per-patient weight series.
    """
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if "csv" in formats:
        path = os.path.join(out_dir, "report.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=_CSV_FIELDS)
            writer.writeheader()
            for scenario, agg in results:
                writer.writerow(_csv_row(scenario.label, agg))
        paths.append(path)
    if "json" in formats:
        path = os.path.join(out_dir, "report.json")
        payload = {
            "schema_version": SCHEMA_VERSION,
            "scenarios": [
                {
                    "label": scenario.label,
                    "replications": scenario.replications,
                    "config": _config_dict(scenario.config),
                    "aggregate": asdict(agg),
                }
                for scenario, agg in results
            ],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        paths.append(path)
    return paths


def _config_dict(cfg: TrialConfig) -> dict:
    d = asdict(cfg)
    d["rule"] = cfg.rule.value
    d["m0"] = list(cfg.m0)
    return d
