"""JSON run configuration."""

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError
from .model import ModelParams
from .spectrum import DEFAULT_OMEGA_L, DEFAULT_OMEGA_S
from .sweep import default_workers

TASKS = ("eigen", "spectrum", "map", "raman", "classify", "verify")
TOP_LEVEL_KEYS = {"model", "omega_s_grid", "omega_L_grid", "n_states", "queries",
                  "classify_tol", "workers"}
MODEL_KEYS = set(ModelParams.__dataclass_fields__)
GRID_KEYS = {"start", "stop", "num", "values"}


@dataclass(frozen=True)
class GridSpec:
    start: float = 0.0
    stop: float = 0.0
    num: int = 0
    values: Optional[tuple] = None

    def array(self):
        if self.values is not None:
            return np.array(self.values, dtype=float)
        return np.linspace(self.start, self.stop, self.num)

    def zoomed(self, center, half_width):
        num = self.num if self.values is None else len(self.values)
        return GridSpec(center - half_width, center + half_width, num)

    def to_dict(self):
        if self.values is not None:
            return {"values": list(self.values)}
        return {"start": self.start, "stop": self.stop, "num": self.num}


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams = field(default_factory=ModelParams)
    task: str = "spectrum"
    omega_s_grid: GridSpec = GridSpec(*DEFAULT_OMEGA_S)
    omega_L_grid: GridSpec = GridSpec(*DEFAULT_OMEGA_L)
    n_states: int = 12
    queries: tuple = ()
    classify_tol: Optional[float] = None
    workers: int = 1
    output_path: Optional[str] = None

    def resolved(self):
        """Content that determines the results (no worker count, no paths)."""
        out = {"task": self.task, "model": self.model.to_dict()}
        if self.task in ("spectrum", "map"):
            out["omega_s_grid"] = self.omega_s_grid.to_dict()
        if self.task == "map":
            out["omega_L_grid"] = self.omega_L_grid.to_dict()
        if self.task == "raman":
            out["n_states"] = self.n_states
        if self.task == "classify":
            out["queries"] = [list(q) for q in self.queries]
            out["classify_tol"] = self.tol
            out["n_states"] = self.n_states
        return out

    @property
    def tol(self):
        return self.classify_tol if self.classify_tol is not None else 3 * self.model.Gamma


def _grid(raw, name, default):
    if raw is None:
        return GridSpec(*default)
    if not isinstance(raw, dict):
        raise ConfigError("expected an object with start/stop/num or values", name)
    unknown = set(raw) - GRID_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", name)
    if "values" in raw:
        if set(raw) != {"values"}:
            raise ConfigError("give either values or start/stop/num", name)
        vals = raw["values"]
        if not isinstance(vals, list) or not vals:
            raise ConfigError("values must be a non-empty list", name)
        try:
            vals = tuple(float(v) for v in vals)
        except (TypeError, ValueError):
            raise ConfigError("values must be numbers", name) from None
        if any(b <= a for a, b in zip(vals, vals[1:])) or not all(map(math.isfinite, vals)):
            raise ConfigError("values must be finite and strictly ascending", name)
        return GridSpec(values=vals)
    spec = {"start": default[0], "stop": default[1], "num": default[2], **raw}
    if isinstance(spec["num"], bool) or not isinstance(spec["num"], int) or spec["num"] < 1:
        raise ConfigError("num must be a positive integer", f"{name}.num")
    try:
        start, stop = float(spec["start"]), float(spec["stop"])
    except (TypeError, ValueError):
        raise ConfigError("start/stop must be numbers", name) from None
    if spec["num"] > 1 and not stop > start:
        raise ConfigError("stop must exceed start", name)
    return GridSpec(start, stop, spec["num"])


def parse_config(doc, task="spectrum", workers=None, output_path=None):
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    if task not in TASKS:
        raise ConfigError(f"unknown task {task!r}", "task")
    unknown = set(doc) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    raw_model = doc.get("model", {})
    if not isinstance(raw_model, dict):
        raise ConfigError("expected an object", "model")
    unknown = set(raw_model) - MODEL_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}", "model")
    model = ModelParams(**raw_model)

    if workers is None:
        workers = doc.get("workers", default_workers())
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigError("must be an integer >= 1", "workers")
    n_states = doc.get("n_states", 12)
    if isinstance(n_states, bool) or not isinstance(n_states, int) or n_states < 2:
        raise ConfigError("must be an integer >= 2", "n_states")
    queries = doc.get("queries", [])
    try:
        queries = tuple((float(a), float(b)) for a, b in queries)
    except (TypeError, ValueError):
        raise ConfigError("expected a list of [omega_L, omega_s] pairs", "queries") from None
    if task == "classify" and not queries:
        raise ConfigError("classify needs at least one query", "queries")
    tol = doc.get("classify_tol")
    if tol is not None and (not isinstance(tol, (int, float)) or not tol > 0):
        raise ConfigError("must be > 0", "classify_tol")

    return RunConfig(model=model, task=task,
                     omega_s_grid=_grid(doc.get("omega_s_grid"), "omega_s_grid", DEFAULT_OMEGA_S),
                     omega_L_grid=_grid(doc.get("omega_L_grid"), "omega_L_grid", DEFAULT_OMEGA_L),
                     n_states=n_states, queries=queries,
                     classify_tol=None if tol is None else float(tol),
                     workers=workers, output_path=output_path)


def load_config(path, task="spectrum", workers=None, output_path=None):
    """Read and validate a JSON configuration; missing entries take defaults."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return parse_config(doc, task, workers, output_path)
