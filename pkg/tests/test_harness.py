"""Harness: quantiles, aggregation linearity, determinism, report files."""

import csv
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlmtrial.engine import TrialConfig, run_trial
from dlmtrial.harness import (AggregateResult, Scenario, aggregate,
                              emit_report, quantile, run_grid, run_scenario)
from dlmtrial.rng import derive_key


class TestQuantile:
    def test_interpolated_position(self):
        assert quantile(list(range(1, 1001)), 0.975) \
            == pytest.approx(975.025)

    def test_median_of_three(self):
        assert quantile([3, 1, 2], 0.5) == 2

    def test_extremes(self):
        xs = [5.0, -1.0, 2.0]
        assert quantile(xs, 0.0) == -1.0
        assert quantile(xs, 1.0) == 5.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            quantile([], 0.5)

    def test_q_out_of_range(self):
        with pytest.raises(ValueError):
            quantile([1.0], 1.5)

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50),
           st.floats(0, 1), st.floats(0, 1))
    @settings(deadline=None)
    def test_monotone_and_bounded(self, xs, q1, q2):
        lo, hi = min(q1, q2), max(q1, q2)
        assert quantile(xs, lo) <= quantile(xs, hi)
        assert min(xs) <= quantile(xs, lo) <= max(xs)


def _results(cfg, seeds):
    return [run_trial(cfg.with_overrides(seed=s)) for s in seeds]


class TestAggregate:
    def test_single_replication(self):
        cfg = TrialConfig(budget=1, stopping_enabled=False)
        agg = aggregate(_results(cfg, [0]), budget=1)
        assert agg.replications == 1
        assert agg.mean_nA + agg.mean_nB == 1.0
        assert agg.stop_q025 == agg.stop_median == agg.stop_q975 == 1

    def test_prop_complement(self):
        cfg = TrialConfig(budget=15, mu_B=2.0, stopping_enabled=False)
        agg = aggregate(_results(cfg, range(20)), budget=15)
        assert agg.mean_propA + agg.mean_propB == pytest.approx(1.0,
                                                                abs=1e-12)

    def test_no_stop_means_exhaust_one(self):
        cfg = TrialConfig(budget=10, stopping_enabled=False)
        agg = aggregate(_results(cfg, range(5)), budget=10)
        assert agg.p_exhaust == 1.0
        assert (agg.stop_q025, agg.stop_median, agg.stop_q975) == (10, 10, 10)

    def test_linearity_over_disjoint_sets(self):
        cfg = TrialConfig(budget=20, mu_B=3.0, seed=0)
        a = _results(cfg, range(10))
        b = _results(cfg, range(10, 25))
        pooled = aggregate(a + b, budget=20)
        agg_a, agg_b = aggregate(a, budget=20), aggregate(b, budget=20)
        na, nb = agg_a.replications, agg_b.replications
        assert pooled.mean_nA == pytest.approx(
            (agg_a.mean_nA * na + agg_b.mean_nA * nb) / (na + nb))
        assert pooled.p_exhaust == pytest.approx(
            (agg_a.p_exhaust * na + agg_b.p_exhaust * nb) / (na + nb))
        stop_times = [r.stop_time for r in a + b]
        assert pooled.stop_median == quantile(stop_times, 0.5)

    def test_weight_series_lengths_match_budget(self):
        cfg = TrialConfig(budget=12, stopping_enabled=False)
        agg = aggregate(_results(cfg, range(4)), budget=12)
        assert len(agg.mean_wA_by_t) == 12
        assert len(agg.se_wA_by_t) == 12
        assert all(m is not None for m in agg.mean_wA_by_t)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([], budget=5)


class TestRunScenario:
    def test_deterministic_across_parallelism(self):
        scenario = Scenario("det", TrialConfig(budget=10, mu_B=2.0),
                            replications=16)
        sequential = run_scenario(scenario, master_seed=5, max_parallelism=1)
        parallel = run_scenario(scenario, master_seed=5, max_parallelism=4)
        for field in ("mean_nA", "mean_nB", "mean_propA", "mean_switch",
                      "stop_q025", "stop_median", "stop_q975", "p_exhaust"):
            assert getattr(sequential, field) == getattr(parallel, field)
        assert sequential.mean_wA_by_t == parallel.mean_wA_by_t

    def test_seed_derivation_matches_manual_runs(self):
        cfg = TrialConfig(budget=8, stopping_enabled=False)
        scenario = Scenario("manual", cfg, replications=3)
        agg = run_scenario(scenario, master_seed=9)
        manual = [run_trial(cfg.with_overrides(seed=derive_key(9, rep)))
                  for rep in range(3)]
        assert agg.mean_nA == pytest.approx(
            sum(r.nA for r in manual) / 3.0)

    def test_master_seed_changes_results(self):
        scenario = Scenario("seeds", TrialConfig(budget=10), replications=8)
        a = run_scenario(scenario, master_seed=0)
        b = run_scenario(scenario, master_seed=1)
        assert a.mean_wA_by_t != b.mean_wA_by_t


class TestEmitReport:
    def _grid(self):
        scenario = Scenario("tiny", TrialConfig(budget=6, mu_B=1.0),
                            replications=4)
        return run_grid([scenario], master_seed=0)

    def test_csv_contents(self, tmp_path):
        results = self._grid()
        paths = emit_report(results, str(tmp_path), formats=("csv",))
        with open(paths[0], newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 1
        assert rows[0]["label"] == "tiny"
        assert float(rows[0]["mean_nA"]) == results[0][1].mean_nA

    def test_json_schema(self, tmp_path):
        results = self._grid()
        paths = emit_report(results, str(tmp_path), formats=("json",))
        with open(paths[0]) as fh:
            doc = json.load(fh)
        assert doc["schema_version"] == 1
        entry = doc["scenarios"][0]
        assert entry["label"] == "tiny"
        assert entry["config"]["budget"] == 6
        assert len(entry["aggregate"]["mean_wA_by_t"]) == 6

    def test_empty_results_header_only(self, tmp_path):
        paths = emit_report([], str(tmp_path))
        with open(paths[0], newline="") as fh:
            lines = fh.read().strip().splitlines()
        assert len(lines) == 1 and lines[0].startswith("label,")

    def test_round_trip_stability(self, tmp_path):
        results = self._grid()
        p1 = emit_report(results, str(tmp_path / "a"))
        p2 = emit_report(self._grid(), str(tmp_path / "b"))
        # wall time differs between runs; compare everything else
        with open(p1[1]) as fh:
            d1 = json.load(fh)
        with open(p2[1]) as fh:
            d2 = json.load(fh)
        d1["scenarios"][0]["aggregate"]["wall_time_seconds"] = 0
        d2["scenarios"][0]["aggregate"]["wall_time_seconds"] = 0
        assert d1 == d2


def test_scenario_validation():
    with pytest.raises(Exception):
        Scenario("bad", TrialConfig(), replications=0)
