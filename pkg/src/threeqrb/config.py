"""Run configuration for the command-line interface.

A run config is JSON::

    {
      "seed": 0,                      # master seed, recorded in every output
      "synth_samples": 1000,          # Cliffords sampled for gate-count averages
      "runs": [
        {
          "name": "A",
          "device": "paper-device:A",   # bundled device, a JSON path, or an inline object
          "noise": {"depol_1q": 1e-3, "depol_2q": 1e-2},
          "connectivity": "all",        # or "omit:i-j"
          "experiments": "suite"        # or a list of experiment objects
        }
      ]
    }

An experiment object holds ``partition`` (e.g. ``"{[0,1],[2]}"``) and the
optional fields ``lengths``, ``seeds``, ``ratio_1q_per_2q``, ``observable``,
``shots`` and ``alignment``. Relative device paths resolve against the
config file's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .rb.sequences import RBPartition, RBSpec, standard_suite
from .sim.device import ConfigError, DeviceModel, NoiseModel, load_json, paper_device
from .synth.connectivity import ConnectivityGraph

BUNDLED = "paper-device"
_RUN_KEYS = {"name", "device", "noise", "connectivity", "experiments"}
_EXP_KEYS = {"partition", "lengths", "seeds", "ratio_1q_per_2q", "observable", "shots", "alignment"}


@dataclass(frozen=True)
class RunSpec:
    name: str
    device: DeviceModel
    noise: NoiseModel
    connectivity: str
    experiments: tuple


@dataclass(frozen=True)
class RunConfig:
    seed: int
    synth_samples: int
    runs: tuple
    source: dict = field(default_factory=dict, compare=False)


def _field(path: str, exc: Exception) -> ConfigError:
    msg = str(exc)
    return ConfigError(f"{path}: {msg}" if not msg.startswith(path) else msg)


def _device(value, base: Path, path: str) -> DeviceModel:
    if isinstance(value, str):
        if value.startswith(BUNDLED):
            cal = value.partition(":")[2] or "A"
            return paper_device(cal)
        p = Path(value) if Path(value).is_absolute() else base / value
        if not p.exists():
            raise ConfigError(f"{path}: device file not found: {value}")
        value = load_json(p)
    try:
        return DeviceModel.from_dict(value)
    except (ConfigError, ValueError, TypeError) as exc:
        raise _field(path, exc) from None


def _experiment(d, path: str, observable: str | None) -> RBSpec:
    if isinstance(d, str):
        d = {"partition": d}
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object or a partition string")
    unknown = set(d) - _EXP_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {sorted(unknown)}")
    if "partition" not in d:
        raise ConfigError(f"{path}.partition: missing")
    try:
        part = RBPartition.parse(str(d["partition"]))
    except ValueError as exc:
        raise _field(f"{path}.partition", exc) from None
    kw = {}
    for key, name in (("lengths", "lengths"), ("seeds", "seeds"), ("ratio_1q_per_2q", "ratio_1q_per_2q"),
                      ("observable", "observable_mode"), ("shots", "shots"), ("alignment", "alignment")):
        if key in d:
            kw[name] = tuple(d[key]) if key == "lengths" else d[key]
    if observable:
        kw["observable_mode"] = observable
    try:
        return RBSpec(part, **kw)
    except (ValueError, TypeError) as exc:
        raise _field(path, exc) from None


def parse_config(data: dict, base: Path = Path("."), observable: str | None = None,
                 connectivity: str | None = None) -> RunConfig:
    """Validate a config object; errors name the offending field path."""
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object")
    unknown = set(data) - {"seed", "synth_samples", "runs"}
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed: must be a non-negative integer")
    samples = data.get("synth_samples", 1000)
    if not isinstance(samples, int) or samples < 1:
        raise ConfigError("synth_samples: must be a positive integer")
    runs_in = data.get("runs")
    if not isinstance(runs_in, list) or not runs_in:
        raise ConfigError("runs: expected a non-empty list")
    runs, names = [], set()
    for i, r in enumerate(runs_in):
        path = f"runs[{i}]"
        if not isinstance(r, dict):
            raise ConfigError(f"{path}: expected an object")
        unknown = set(r) - _RUN_KEYS
        if unknown:
            raise ConfigError(f"{path}: unknown field(s) {sorted(unknown)}")
        name = str(r.get("name", f"run{i}"))
        if name in names or not name or "/" in name:
            raise ConfigError(f"{path}.name: must be unique and path-safe")
        names.add(name)
        if "device" not in r:
            raise ConfigError(f"{path}.device: missing")
        dev = _device(r["device"], base, f"{path}.device")
        conn_text = connectivity or r.get("connectivity")
        if conn_text is not None:
            try:
                dev = dev.with_(connectivity=ConnectivityGraph.parse(str(conn_text), dev.n))
            except ValueError as exc:
                raise _field(f"{path}.connectivity", exc) from None
        try:
            noise = NoiseModel.from_dict(r.get("noise", {}))
        except (ConfigError, TypeError) as exc:
            raise _field(f"{path}.noise", exc) from None
        exps = r.get("experiments", "suite")
        if exps == "suite":
            exps = [p.label for p in standard_suite(dev.n)] if dev.n == 3 else None
            if exps is None:
                raise ConfigError(f"{path}.experiments: the suite needs a three-qubit device")
        if not isinstance(exps, list) or not exps:
            raise ConfigError(f"{path}.experiments: expected 'suite' or a non-empty list")
        specs = tuple(_experiment(e, f"{path}.experiments[{j}]", observable) for j, e in enumerate(exps))
        for j, s in enumerate(specs):
            if any(q >= dev.n for q in s.partition.qubits):
                raise ConfigError(f"{path}.experiments[{j}].partition: qubit index exceeds device size {dev.n}")
        runs.append(RunSpec(name, dev, noise, conn_text or "device", specs))
    return RunConfig(seed, samples, tuple(runs), data)


def bundled_config() -> dict:
    return json.loads(resources.files("threeqrb.data").joinpath("paper_run.json").read_text())


def load_config(ref: str, observable: str | None = None, connectivity: str | None = None) -> RunConfig:
    """Load ``ref``: ``"paper-device"`` for the bundled config, otherwise a JSON file path."""
    if ref == BUNDLED:
        return parse_config(bundled_config(), Path("."), observable, connectivity)
    p = Path(ref)
    if not p.exists():
        raise ConfigError(f"config file not found: {ref}")
    return parse_config(load_json(p), p.parent, observable, connectivity)
