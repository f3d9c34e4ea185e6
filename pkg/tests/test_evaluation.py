import csv
from pathlib import Path

import numpy as np
import pytest

from dmccrf.dataset import chronological_split
from dmccrf.elm import ElmConfig, scenario_grid
from dmccrf.errors import EmptyInput, ScenarioError, ZeroTarget
from dmccrf.evaluation import head_to_head, mape, run_scenarios
from dmccrf.synthetic import BENCHMARK_TRAIN_FRACTION, ar1_dataset
from published import PUBLISHED_MAPE, PUBLISHED_AVERAGE, PUBLISHED_WINS

GOLDEN = Path(__file__).parent / "golden"


class TestMape:
    def test_identity(self, rng):
        y = rng.uniform(1, 2, 10)
        assert mape(y, y) == 0.0

    def test_hand_value(self):
        assert mape([1, 2], [2, 1]) == 75.0

    def test_zero_target(self):
        with pytest.raises(ZeroTarget) as err:
            mape([1.0, 0.0, 2.0], [1.0, 1.0, 1.0])
        assert err.value.index == 1

    def test_negative_targets_use_absolute_value(self):
        assert mape([-2.0], [-1.0]) == 50.0


class TestHeadToHead:
    def test_published_table(self):
        r = head_to_head(PUBLISHED_MAPE)
        np.testing.assert_allclose(r.averages, PUBLISHED_AVERAGE, atol=1e-3)
        assert r.wins == PUBLISHED_WINS

    def test_tie_goes_to_dm(self):
        r = head_to_head([(10, 10, 10)])
        assert r.wins == (0, 0, 1) and r.averages == (10, 10, 10)

    def test_tie_between_elm_and_ccrf(self):
        assert head_to_head([(1, 1, 2)]).wins == (0, 1, 0)

    def test_mixed(self):
        r = head_to_head([(1, 2, 3), (3, 2, 1)])
        assert r.wins == (1, 0, 1) and r.averages == (2, 2, 2)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            head_to_head([])

    def test_improvement_columns_match_inputs(self):
        r = head_to_head(PUBLISHED_MAPE)
        for (elm, ccrf, dm), (d_ccrf, d_dm) in zip(PUBLISHED_MAPE, r.improvements):
            assert d_ccrf == elm - ccrf and d_dm == elm - dm
        d = np.array(r.improvements)
        assert (round(d[:, 0].min(), 3), round(d[:, 0].max(), 3)) == (0.127, 7.630)
        assert (round(d[:, 1].min(), 3), round(d[:, 1].max(), 3)) == (2.365, 17.047)

    def test_relative_improvements(self):
        rel = np.array(head_to_head(PUBLISHED_MAPE).relative_improvements)
        # the CCRF range quoted alongside the table is relative to the ELM error
        assert (round(rel[:, 0].min(), 3), round(rel[:, 0].max(), 3)) == (0.225, 4.582)

    def test_text_layout(self):
        text = head_to_head(PUBLISHED_MAPE).to_text()
        lines = text.splitlines()
        assert len(lines) == 3 + 15 + 3
        assert lines[3].split() == ["1", "87.949", "87.112", "80.312"]
        assert lines[-2].split() == ["Average", "77.775", "76.296", "71.500"]
        assert lines[-1].split() == ["H2H", "0", "0", "15"]

    def test_csv(self):
        rows = list(csv.DictReader(head_to_head([(1, 2, 3), (3, 2, 1)]).to_csv().splitlines()))
        assert [r["winner"] for r in rows] == ["ELM", "DM-CCRF"]
        assert float(rows[1]["dm_mape"]) == 1.0


def _fixture():
    return chronological_split(ar1_dataset(0), BENCHMARK_TRAIN_FRACTION)


def _assert_matches_golden(report, name):
    with open(GOLDEN / name) as fh:
        golden = list(csv.DictReader(fh))
    assert len(report.rows) == len(golden)
    for row, g in zip(report.rows, golden):
        assert row.scenario == int(g["scenario"])
        np.testing.assert_allclose(
            row.values, [float(g[k]) for k in ("elm_mape", "ccrf_mape", "dm_mape")], rtol=1e-9
        )
        assert row.winner == g["winner"]


class TestRunScenarios:
    def test_three_scenarios_golden(self):
        grid = scenario_grid()
        report = run_scenarios(*_fixture(), [grid[0], grid[6], grid[14]], indices=[1, 7, 15])
        assert len(report.rows) == 3 and sum(report.wins) == 3
        assert all(np.isfinite(r.values).all() for r in report.rows)
        _assert_matches_golden(report, "ar1_seed0_scenarios_1_7_15.csv")

    def test_full_grid_golden(self):
        report = run_scenarios(*_fixture(), scenario_grid())
        assert [r.scenario for r in report.rows] == list(range(1, 16))
        assert sum(report.wins) == 15
        _assert_matches_golden(report, "ar1_seed0_full_grid.csv")

    def test_parallel_matches_serial(self):
        grid = scenario_grid()[:4]
        serial = run_scenarios(*_fixture(), grid)
        parallel = run_scenarios(*_fixture(), grid, jobs=3)
        assert serial.to_csv() == parallel.to_csv()

    def test_empty_grid(self):
        with pytest.raises(EmptyInput):
            run_scenarios(*_fixture(), [])

    def test_errors_carry_scenario(self):
        train, test = _fixture()
        bad_test = type(test)(test.timestamps, test.features, np.zeros(len(test)))
        with pytest.raises(ScenarioError) as err:
            run_scenarios(train, bad_test, [ElmConfig(1, 10), ElmConfig(1, 100)], indices=[4, 9])
        assert err.value.scenario == 4
        assert isinstance(err.value.cause, ZeroTarget)
