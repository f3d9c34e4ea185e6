"""Run configuration for the command-line tools, read from YAML.

Relative paths are resolved against the directory holding the config file.
See ``configs/synthetic.yaml`` for a complete, commented example.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .dataset import Schema
from .elm import ElmConfig, scenario_grid
from .gcrf import Edge
from .training import TrainConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    csv: Path
    schema: Schema
    train_fraction: float = 0.7
    train: TrainConfig = field(default_factory=TrainConfig)
    crossfit_folds: int | None = 5
    elm: ElmConfig = field(default_factory=lambda: ElmConfig(1.0, 1000.0))
    edges: tuple[Edge, ...] = (Edge.CHAIN, Edge.DM)
    output_dir: Path = Path("out")
    grid: tuple[ElmConfig, ...] = field(default_factory=lambda: tuple(scenario_grid()))
    grid_indices: tuple[int, ...] = tuple(range(1, 16))


def _section(doc, name):
    sec = doc.get(name) or {}
    if not isinstance(sec, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    return sec


def _grid(bench):
    full = scenario_grid()
    if "grid" in bench and "scenarios" in bench:
        raise ConfigError("benchmark: give either 'scenarios' or 'grid', not both")
    if "grid" in bench:
        pairs = bench["grid"]
        if not pairs:
            raise ConfigError("benchmark.grid is empty")
        try:
            grid = tuple(ElmConfig(float(g), float(c)) for g, c in pairs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"benchmark.grid: {exc}") from exc
        return grid, tuple(range(1, len(grid) + 1))
    indices = tuple(int(i) for i in bench.get("scenarios", range(1, len(full) + 1)))
    if not indices:
        raise ConfigError("benchmark.scenarios is empty")
    bad = [i for i in indices if not 1 <= i <= len(full)]
    if bad:
        raise ConfigError(f"benchmark.scenarios out of range 1..{len(full)}: {bad}")
    return tuple(full[i - 1] for i in indices), indices


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    base = path.parent
    try:
        data = _section(doc, "data")
        for key in ("csv", "timestamp", "features", "target"):
            if key not in data:
                raise ConfigError(f"data.{key} is required")
        schema = Schema(str(data["timestamp"]), tuple(map(str, data["features"])), str(data["target"]))
        train = dict(_section(doc, "train"))
        folds = train.pop("crossfit_folds", 5)
        elm = _section(doc, "elm")
        grid, indices = _grid(_section(doc, "benchmark"))
        edges = doc.get("edges", ["chain", "dm"])
        if isinstance(edges, str):
            edges = ["chain", "dm"] if edges == "both" else [edges]
        return RunConfig(
            csv=base / str(data["csv"]),
            schema=schema,
            train_fraction=float(_section(doc, "split").get("train_fraction", 0.7)),
            train=TrainConfig(**train),
            crossfit_folds=None if folds in (None, 0) else int(folds),
            elm=ElmConfig(elm.get("kernel_param", 1.0), elm.get("reg_coeff", 1000.0)),
            edges=tuple(Edge.parse(e) for e in edges),
            output_dir=base / str(_section(doc, "output").get("dir", "out")),
            grid=grid,
            grid_indices=indices,
        )
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
