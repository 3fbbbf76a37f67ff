"""Device and noise models, plus their JSON config form.

Device config schema (SI units: seconds, hertz)::

    {
      "n": 3,
      "t1": [29e-6, 50e-6, 39e-6],          # null means infinite
      "t2": [39e-6, 75e-6, 59e-6],
      "zz": [[0, 20e3, 352e3], [20e3, 0, 114e3], [352e3, 114e3, 0]],
      "durations": {"one_q": 44.8e-9, "cnot": 240e-9},
      "edges": [[0, 1], [0, 2], [1, 2]],     # directed (control, target)
      "calibration": "A",                    # "A" absorbs mean ZZ into frequencies
      "zz_sign": 1
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from ..synth.connectivity import ConnectivityGraph
from ..synth.schedule import Durations


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


def _times(values, name: str, n: int) -> tuple:
    if not isinstance(values, (list, tuple)) or len(values) != n:
        raise ConfigError(f"{name}: expected a list of {n} values")
    out = []
    for i, v in enumerate(values):
        if v is None:
            out.append(math.inf)
            continue
        try:
            v = float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"{name}[{i}]: not a number: {v!r}") from None
        if not v > 0:
            raise ConfigError(f"{name}[{i}]: must be positive")
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class DeviceModel:
    n: int
    t1: tuple
    t2: tuple
    zz: tuple                      # n x n, Hz; zz[i][j] = shift of i when j is |1>
    durations: Durations = field(default_factory=Durations)
    connectivity: ConnectivityGraph | None = None
    calibration: str = "A"
    zz_sign: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n: must be at least 1")
        object.__setattr__(self, "t1", _times(self.t1, "t1", self.n))
        object.__setattr__(self, "t2", _times(self.t2, "t2", self.n))
        for q in range(self.n):
            if self.t2[q] > 2 * self.t1[q]:
                raise ConfigError(f"t2[{q}]: T2 exceeds 2*T1")
        zz = np.asarray(self.zz, dtype=float)
        if zz.shape != (self.n, self.n):
            raise ConfigError(f"zz: expected a {self.n}x{self.n} matrix")
        if np.any(np.diag(zz) != 0):
            raise ConfigError("zz: diagonal must be zero")
        if not np.allclose(zz, zz.T):
            raise ConfigError("zz: matrix must be symmetric")
        object.__setattr__(self, "zz", tuple(tuple(r) for r in zz))
        if self.durations.one_q <= 0 or self.durations.cnot <= 0:
            raise ConfigError("durations: must be positive")
        if self.connectivity is None:
            object.__setattr__(self, "connectivity", ConnectivityGraph.all_to_all(self.n))
        if self.calibration not in ("A", "B"):
            raise ConfigError("calibration: must be 'A' or 'B'")

    @property
    def zz_matrix(self) -> np.ndarray:
        return self.zz_sign * np.array(self.zz)

    def frame_detuning(self) -> np.ndarray:
        """Frequency offsets absorbed by calibration: mean ZZ shift (A) or none (B)."""
        if self.calibration == "A":
            return self.zz_matrix.sum(axis=1) / 2
        return np.zeros(self.n)

    def with_(self, **kw) -> "DeviceModel":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t1": [None if math.isinf(v) else v for v in self.t1],
            "t2": [None if math.isinf(v) else v for v in self.t2],
            "zz": [list(r) for r in self.zz],
            "durations": {"one_q": self.durations.one_q, "cnot": self.durations.cnot},
            "edges": [list(e) for e in sorted(self.connectivity.edges)],
            "calibration": self.calibration,
            "zz_sign": self.zz_sign,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DeviceModel":
        if not isinstance(d, dict):
            raise ConfigError("device: expected an object")
        unknown = set(d) - {"n", "t1", "t2", "zz", "durations", "edges", "calibration", "zz_sign", "name"}
        if unknown:
            raise ConfigError(f"device: unknown field(s) {sorted(unknown)}")
        for key in ("n", "t1", "t2"):
            if key not in d:
                raise ConfigError(f"{key}: missing")
        n = d["n"]
        if not isinstance(n, int):
            raise ConfigError("n: must be an integer")
        dur = d.get("durations", {})
        try:
            durations = Durations(float(dur.get("one_q", 44.8e-9)), float(dur.get("cnot", 240e-9)))
        except (AttributeError, TypeError, ValueError):
            raise ConfigError("durations: expected {'one_q': s, 'cnot': s}") from None
        edges = d.get("edges")
        try:
            conn = ConnectivityGraph(n, frozenset(tuple(e) for e in edges)) if edges is not None else None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"edges: {exc}") from None
        return cls(
            n=n,
            t1=d["t1"],
            t2=d["t2"],
            zz=d.get("zz", [[0.0] * n for _ in range(n)]),
            durations=durations,
            connectivity=conn,
            calibration=d.get("calibration", "A"),
            zz_sign=float(d.get("zz_sign", 1.0)),
        )


@dataclass(frozen=True)
class NoiseModel:
    depol_1q: float = 0.0
    depol_2q: float = 0.0
    enable_damping: bool = True
    enable_zz: bool = True
    depol_per_clifford: float | None = None
    # idles depolarize like a 1Q gate per 1Q-gate duration
    idle_depol: bool = False

    def __post_init__(self):
        for name in ("depol_1q", "depol_2q"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name}: must be in [0, 1]")
        if self.depol_per_clifford is not None and not 0.0 <= self.depol_per_clifford <= 1.0:
            raise ConfigError("depol_per_clifford: must be in [0, 1]")

    @classmethod
    def noiseless(cls) -> "NoiseModel":
        return cls(enable_damping=False, enable_zz=False)

    def to_dict(self) -> dict:
        return {
            "depol_1q": self.depol_1q,
            "depol_2q": self.depol_2q,
            "enable_damping": self.enable_damping,
            "enable_zz": self.enable_zz,
            "depol_per_clifford": self.depol_per_clifford,
            "idle_depol": self.idle_depol,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseModel":
        unknown = set(d) - set(cls().to_dict())
        if unknown:
            raise ConfigError(f"noise: unknown field(s) {sorted(unknown)}")
        return cls(**d)


def load_json(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def paper_device(calibration: str = "A") -> DeviceModel:
    """The three-transmon device with the measured coherences of either calibration."""
    data = json.loads(resources.files("threeqrb.data").joinpath("paper_device.json").read_text())
    if calibration not in data["calibrations"]:
        raise ConfigError(f"calibration: unknown {calibration!r}")
    d = dict(data["common"])
    d.update(data["calibrations"][calibration])
    d["calibration"] = calibration
    return DeviceModel.from_dict(d)


def default_paper_noise() -> NoiseModel:
    data = json.loads(resources.files("threeqrb.data").joinpath("paper_device.json").read_text())
    return NoiseModel.from_dict(data["noise"])
