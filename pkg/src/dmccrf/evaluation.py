"""MAPE, the scenario sweep, and head-to-head reporting."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dataset import TimeSeriesDataset, scale_apply, scale_fit
from .elm import ElmConfig, crossfit_predictions, train_kernel_elm
from .errors import DimensionMismatch, EmptyInput, ScenarioError, ZeroTarget
from .gcrf import Edge, GcrfParams
from .inference import predict
from .training import TrainConfig, fit

METHODS = ("ELM", "CCRF", "DM-CCRF")
# Ties go to the earliest entry.
_TIE_PRIORITY = (2, 1, 0)


def mape(y_true, y_pred):
    """Mean absolute percentage error, in percent.

    Raises :class:`ZeroTarget` at the first zero entry of ``y_true``.
    """
    y_true = np.asarray(y_true, dtype=float).ravel()
    y_pred = np.asarray(y_pred, dtype=float).ravel()
    if y_true.shape != y_pred.shape:
        raise DimensionMismatch(f"lengths differ: {y_true.size} vs {y_pred.size}")
    if y_true.size == 0:
        raise EmptyInput("MAPE of an empty sequence")
    zeros = np.flatnonzero(y_true == 0)
    if zeros.size:
        raise ZeroTarget(int(zeros[0]))
    return float(100.0 / y_true.size * np.sum(np.abs((y_true - y_pred) / y_true)))


@dataclass(frozen=True)
class ScenarioRow:
    scenario: int
    elm: float
    ccrf: float
    dm: float
    config: ElmConfig | None = None
    ccrf_params: GcrfParams | None = field(default=None, compare=False)
    dm_params: GcrfParams | None = field(default=None, compare=False)

    @property
    def values(self):
        return (self.elm, self.ccrf, self.dm)

    @property
    def winner(self):
        return METHODS[_winner_index(self.values)]


def _winner_index(values):
    best = min(values)
    return next(i for i in _TIE_PRIORITY if values[i] == best)


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[ScenarioRow, ...]
    averages: tuple[float, float, float]
    wins: tuple[int, int, int]

    @property
    def improvements(self):
        """Per-scenario ``(ELM - CCRF, ELM - DM-CCRF)`` MAPE differences."""
        return [(r.elm - r.ccrf, r.elm - r.dm) for r in self.rows]

    @property
    def relative_improvements(self):
        """The same differences as a percentage of the ELM MAPE."""
        return [(100.0 * (r.elm - r.ccrf) / r.elm, 100.0 * (r.elm - r.dm) / r.elm) for r in self.rows]

    def to_text(self):
        """Aligned table: one line per scenario, then Average and Head-to-head."""
        head = f"{'Scenario':>8}  {'ELM':>10}  {'CCRF':>10}  {'DM-CCRF':>10}"
        lines = ["MAPE (%) on unscaled targets", head, "-" * len(head)]
        for r in self.rows:
            lines.append(f"{r.scenario:>8}  {r.elm:>10.3f}  {r.ccrf:>10.3f}  {r.dm:>10.3f}")
        lines.append("-" * len(head))
        a = self.averages
        lines.append(f"{'Average':>8}  {a[0]:>10.3f}  {a[1]:>10.3f}  {a[2]:>10.3f}")
        w = self.wins
        lines.append(f"{'H2H':>8}  {w[0]:>10d}  {w[1]:>10d}  {w[2]:>10d}")
        return "\n".join(lines) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "elm_mape", "ccrf_mape", "dm_mape", "winner"])
        for r in self.rows:
            w.writerow([r.scenario, repr(r.elm), repr(r.ccrf), repr(r.dm), r.winner])
        return buf.getvalue()


def head_to_head(rows: Sequence) -> EvalReport:
    """Column averages and one win per row to the lowest MAPE.

    ``rows`` holds :class:`ScenarioRow` objects or plain ``(elm, ccrf, dm)``
    triples (numbered from 1).  Ties are broken DM-CCRF, then CCRF, then ELM.
    """
    if len(rows) == 0:
        raise EmptyInput("head-to-head needs at least one row")
    rows = tuple(
        r if isinstance(r, ScenarioRow) else ScenarioRow(i + 1, *map(float, r))
        for i, r in enumerate(rows)
    )
    table = np.array([r.values for r in rows])
    if not np.all(np.isfinite(table)):
        raise ValueError("MAPE values must be finite")
    wins = [0, 0, 0]
    for r in rows:
        wins[_winner_index(r.values)] += 1
    averages = tuple(float(v) for v in table.mean(axis=0))
    return EvalReport(rows, averages, tuple(wins))


def _run_one(index, config, strain, stest, raw_test, scaling, train_cfg, crossfit_folds):
    model = train_kernel_elm(strain, config)
    if crossfit_folds:
        f_train = crossfit_predictions(strain.features, strain.targets, config, crossfit_folds)
    else:
        f_train = model.predict(strain.features)
    f_test = model.predict(stest.features)
    y_true = raw_test.targets
    elm_mape = mape(y_true, scaling.unscale_target(f_test))
    out = {}
    for edge in (Edge.CHAIN, Edge.DM):
        result = fit(strain.targets, f_train, edge, train_cfg)
        y_hat = predict(f_test, result.params, edge)
        out[edge] = (mape(y_true, scaling.unscale_target(y_hat)), result.params)
    return ScenarioRow(
        index, elm_mape, out[Edge.CHAIN][0], out[Edge.DM][0], config,
        out[Edge.CHAIN][1], out[Edge.DM][1],
    )


def run_scenarios(
    train: TimeSeriesDataset,
    test: TimeSeriesDataset,
    grid: Sequence[ElmConfig],
    train_cfg: TrainConfig = TrainConfig(),
    jobs: int = 1,
    indices: Sequence[int] | None = None,
    crossfit_folds: int | None = 5,
) -> EvalReport:
    """Benchmark ELM, CCRF and DM-CCRF for every baseline configuration.

    ``train`` and ``test`` are in original units.  Scaling is fitted on
    ``train``; models run in scaled space and MAPE is taken after mapping
    predictions back to original units.

    The CRF weights are fitted against out-of-fold ELM predictions on
    ``train`` (``crossfit_folds`` contiguous blocks); pass ``None`` to use
    in-sample predictions instead.  ``indices`` numbers the rows (default
    1..len(grid)).  The ELM scored on ``test`` is always the
    one trained on the whole of ``train``.  Failures are re-raised as
    :class:`ScenarioError` carrying the scenario number.
    """
    grid = list(grid)
    if not grid:
        raise EmptyInput("scenario grid is empty")
    indices = list(range(1, len(grid) + 1)) if indices is None else list(indices)
    if len(indices) != len(grid):
        raise DimensionMismatch(f"{len(indices)} scenario numbers for {len(grid)} configs")
    scaling = scale_fit(train)
    strain = scale_apply(train, scaling)
    stest = scale_apply(test, scaling)

    def task(i):
        try:
            return _run_one(
                indices[i], grid[i], strain, stest, test, scaling, train_cfg, crossfit_folds
            )
        except Exception as exc:
            raise ScenarioError(indices[i], exc) from exc

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(task, range(len(grid))))
    else:
        rows = [task(i) for i in range(len(grid))]
    return head_to_head(rows)
