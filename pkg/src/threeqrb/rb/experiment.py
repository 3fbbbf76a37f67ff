"""End-to-end RB: sample, compile, schedule, simulate, measure and fit."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..sim.channels import n_qubits
from ..sim.device import DeviceModel, NoiseModel
from ..sim.simulator import Simulator
from ..sim.timeline import TimelineSimulator, stream_timeline
from ..synth import PrimitiveCircuit, compile_clifford, schedule
from .fitting import DecayFit, FitError, RBCurve, fit_curve
from .metrics import epc_from_alpha
from .sequences import RBSpec, Sequence, random_sequence, seed_sequence


@dataclass(frozen=True)
class SubsetResult:
    subset: tuple
    curve: RBCurve
    fit: DecayFit
    epc: float
    sigma_epc: float


@dataclass(frozen=True)
class RBResult:
    spec: RBSpec
    master_seed: int
    subsets: tuple

    @property
    def label(self) -> str:
        return self.spec.partition.label

    def by_subset(self, subset) -> SubsetResult:
        subset = tuple(subset)
        for r in self.subsets:
            if r.subset == subset:
                return r
        raise KeyError(subset)

    def rows(self):
        """Raw ``(partition, subset, m, seed, survival)`` records in a stable order."""
        for r in self.subsets:
            sub = "[" + ",".join(map(str, r.subset)) + "]"
            for j, m in enumerate(r.curve.lengths):
                for s in range(r.curve.survival.shape[0]):
                    yield self.label, sub, m, s, float(r.curve.survival[s, j])


def step_circuit(step, partition, device: DeviceModel) -> PrimitiveCircuit:
    """One scheduled block: every subset's Cliffords for this step, run in parallel."""
    gates = []
    for subset, cliffords in zip(partition.subsets, step):
        for c in cliffords:
            gates.extend(compile_clifford(c, subset, device.connectivity).gates)
    return schedule(PrimitiveCircuit(device.n, tuple(gates)), device.durations)


def survival(vec: np.ndarray, n: int, subset, mode: str) -> float:
    probs = np.clip(np.real(vec[:: 2**n + 1]), 0.0, None)
    idx = np.arange(2**n)
    bits = [(idx >> (n - 1 - q)) & 1 for q in subset]
    if mode == "joint":
        mask = np.all(np.array(bits) == 0, axis=0)
        return float(probs[mask].sum())
    return float(np.mean([probs[b == 0].sum() for b in bits]))


def subset_streams(seq: Sequence, device: DeviceModel) -> list:
    """Per subset, the scheduled circuit of every Clifford in order (inverse last)."""
    streams = []
    for i, subset in enumerate(seq.partition.subsets):
        streams.append([schedule(compile_clifford(c, subset, device.connectivity), device.durations)
                        for step in seq.steps for c in step[i]])
    return streams


def _streams_disjoint(streams, subsets) -> bool:
    return all(set(g.qubits) <= set(sub) for stream, sub in zip(streams, subsets)
               for circ in stream for g in circ.gates)


class _Engines:
    def __init__(self, device: DeviceModel, noise: NoiseModel):
        self.slices = Simulator(device, noise)
        self.timeline = TimelineSimulator(device, noise)


def _readout_states(seq: Sequence, spec: RBSpec, eng: _Engines, device: DeviceModel,
                    noise: NoiseModel) -> list:
    """Row-major vectorised state at which each subset is read out.

    With free alignment every subset is read out when its own stream ends, so
    no subset idles before measurement while a slower partner finishes. A
    subset routed through another subset's qubit cannot run on its own clock;
    such sequences fall back to one joint schedule per step.
    """
    d = 2**device.n
    p = noise.depol_per_clifford
    subs = spec.partition.subsets
    streams = subset_streams(seq, device) if spec.alignment == "free" and len(subs) > 1 else None
    if streams is not None and _streams_disjoint(streams, subs):
        tl = stream_timeline(device.n, streams, device.durations.one_q)
        rho = np.zeros((d, d), dtype=complex)
        rho[0, 0] = 1.0
        states = eng.timeline.simulate(rho, tl, snapshots=tl.stream_ends)
        out = []
        for i, (subset, r) in enumerate(zip(subs, states)):
            vec = r.reshape(-1)
            if p:
                # subset depolarizing commutes with every Clifford of the sequence
                count = sum(len(step[i]) for step in seq.steps)
                vec = eng.slices.depolarize(vec, subset, 1 - (1 - p) ** count)
            out.append(vec)
        return out
    vec = np.zeros(d * d, dtype=complex)
    vec[0] = 1.0
    for step in seq.steps:
        vec = eng.slices.run(vec, step_circuit(step, spec.partition, device))
        if p:
            for subset, cliffords in zip(subs, step):
                vec = eng.slices.depolarize(vec, subset, 1 - (1 - p) ** len(cliffords))
    return [vec] * len(subs)


def run_sequence(seq: Sequence, spec: RBSpec, eng: _Engines, device: DeviceModel,
                 noise: NoiseModel, master_seed: int) -> list:
    """Survival of every subset after one sequence."""
    states = _readout_states(seq, spec, eng, device, noise)
    out = [survival(v, device.n, s, spec.observable_mode) for v, s in zip(states, spec.partition.subsets)]
    if spec.shots:
        rng = np.random.default_rng(seed_sequence(master_seed, spec.partition, seq.seed_index, seq.m, 1))
        out = [rng.binomial(spec.shots, min(max(v, 0.0), 1.0)) / spec.shots for v in out]
    return out


def _check_spec(spec: RBSpec, device: DeviceModel) -> None:
    if any(q >= device.n for q in spec.partition.qubits):
        raise ValueError(f"partition {spec.partition.label} exceeds the {device.n}-qubit device")


def _run_seed(args) -> dict:
    spec, device, noise, master_seed, s = args
    eng = _Engines(device, noise)
    return {(s, m): run_sequence(random_sequence(spec, master_seed, s, m), spec, eng, device, noise, master_seed)
            for m in spec.lengths}


def simulate_survival(spec: RBSpec, device: DeviceModel, noise: NoiseModel, master_seed: int = 0,
                      threads: int = 1) -> dict:
    """Survival lists keyed by ``(seed, m)``; the ordering of workers never changes the result."""
    _check_spec(spec, device)
    work = [(spec, device, noise, master_seed, s) for s in range(spec.seeds)]
    data: dict = {}
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_run_seed, work):
                data.update(part)
    else:
        eng = _Engines(device, noise)
        for _, _, _, _, s in work:
            for m in spec.lengths:
                seq = random_sequence(spec, master_seed, s, m)
                data[(s, m)] = run_sequence(seq, spec, eng, device, noise, master_seed)
    return data


def fit_subset(spec: RBSpec, subset, curve: RBCurve, master_seed: int = 0, bootstrap: int = 0) -> SubsetResult:
    """Fit one subset's curve; ``curve.lengths`` count the subset's own Cliffords."""
    subset = tuple(subset)
    k = len(subset)
    try:
        fit = fit_curve(curve, k, spec.observable_mode, bootstrap, np.random.default_rng(master_seed))
    except FitError as exc:
        raise FitError(f"{spec.partition.label} subset {list(subset)}: {exc}", curve) from None
    return SubsetResult(subset, curve, fit, epc_from_alpha(k, fit.alpha), (2**k - 1) / 2**k * fit.sigma_alpha)


def fit_results(spec: RBSpec, data: dict, master_seed: int = 0, bootstrap: int = 0) -> RBResult:
    """Fit every subset's curve from raw survival data keyed by ``(seed, m)``."""
    results = []
    for i, subset in enumerate(spec.partition.subsets):
        surv = np.array([[data[(s, m)][i] for m in spec.lengths] for s in range(spec.seeds)])
        # 1Q subsets beside a larger subset run several Cliffords per step
        per_step = spec.cliffords_per_step(subset)
        curve = RBCurve(tuple(per_step * m for m in spec.lengths), surv)
        results.append(fit_subset(spec, subset, curve, master_seed, bootstrap))
    return RBResult(spec, master_seed, tuple(results))


def run_experiment(spec: RBSpec, device: DeviceModel, noise: NoiseModel, master_seed: int = 0,
                   threads: int = 1, bootstrap: int = 0) -> RBResult:
    data = simulate_survival(spec, device, noise, master_seed, threads)
    return fit_results(spec, data, master_seed, bootstrap)


def final_states(seq: Sequence, spec: RBSpec, device: DeviceModel, noise: NoiseModel) -> list:
    """Density matrix at each subset's readout (for inspection and tests)."""
    d = 2**device.n
    out = [v.reshape(d, d) for v in _readout_states(seq, spec, _Engines(device, noise), device, noise)]
    for rho in out:
        n_qubits(rho)
    return out
