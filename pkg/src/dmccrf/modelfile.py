"""Plain-text model files for fitted CRFs.

One ``key = value`` pair per line; ``#`` starts a comment.  Lists are
comma-separated.  Floats are written with ``repr`` so they read back
bit-for-bit.  The baseline ELM lives in a sidecar ``.npz`` file referenced
by the ``baseline`` key, relative to the model file.

Example::

    format = dmccrf-model/1
    edge = dm
    alpha = 45.79813270281226
    edge_weight = 2.44776683128714
    baseline = baseline.npz
    kernel_param = 1.0
    reg_coeff = 1000.0
    timestamp_column = t
    feature_columns = f1,f2,f3
    target_column = flow
    feature_min = -8.1,-9.3,-7.7
    feature_max = 9.0,8.8,10.2
    target_min = 61.2
    target_max = 141.9
    log_likelihood = 149.36500217420098
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .dataset import ScalingParams, Schema
from .elm import BaselineModel, ElmConfig
from .gcrf import Edge, GcrfParams

FORMAT = "dmccrf-model/1"


@dataclass(frozen=True)
class CrfModel:
    edge: Edge
    params: GcrfParams
    scaling: ScalingParams
    schema: Schema
    elm_config: ElmConfig
    baseline_path: str
    log_likelihood: float | None = None

    def load_baseline(self, model_path) -> BaselineModel:
        return BaselineModel.load(Path(model_path).parent / self.baseline_path)


def _floats(values):
    return ",".join(repr(float(v)) for v in values)


def _parse_floats(text):
    return [float(v) for v in text.split(",")]


def save_model(path, model: CrfModel):
    lines = [
        "# fitted CRF model",
        f"format = {FORMAT}",
        f"edge = {model.edge.value}",
        f"alpha = {_floats(model.params.alpha)}",
        f"edge_weight = {model.params.edge_weight!r}",
        f"baseline = {model.baseline_path}",
        f"kernel_param = {model.elm_config.kernel_param!r}",
        f"reg_coeff = {model.elm_config.reg_coeff!r}",
        f"timestamp_column = {model.schema.timestamp}",
        f"feature_columns = {','.join(model.schema.features)}",
        f"target_column = {model.schema.target}",
        f"feature_min = {_floats(model.scaling.feature_min)}",
        f"feature_max = {_floats(model.scaling.feature_max)}",
        f"target_min = {model.scaling.target_min!r}",
        f"target_max = {model.scaling.target_max!r}",
    ]
    if model.log_likelihood is not None:
        lines.append(f"log_likelihood = {float(model.log_likelihood)!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path) -> CrfModel:
    """Parse a model file; raises ``ValueError`` naming the offending key."""
    entries = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        entries[key.strip()] = value.strip()

    def get(key):
        try:
            return entries[key]
        except KeyError:
            raise ValueError(f"{path}: missing key {key!r}") from None

    if get("format") != FORMAT:
        raise ValueError(f"{path}: unsupported format {entries['format']!r}")
    try:
        ll = entries.get("log_likelihood")
        return CrfModel(
            edge=Edge.parse(get("edge")),
            params=GcrfParams(_parse_floats(get("alpha")), float(get("edge_weight"))),
            scaling=ScalingParams(
                _parse_floats(get("feature_min")),
                _parse_floats(get("feature_max")),
                float(get("target_min")),
                float(get("target_max")),
            ),
            schema=Schema(
                get("timestamp_column"),
                tuple(get("feature_columns").split(",")),
                get("target_column"),
            ),
            elm_config=ElmConfig(float(get("kernel_param")), float(get("reg_coeff"))),
            baseline_path=get("baseline"),
            log_likelihood=None if ll is None else float(ll),
        )
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
