"""Predictions from subsystem RB and measured-vs-predicted comparison tables."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .experiment import RBResult
from .metrics import (
    PredictionInputs,
    alpha_from_epc,
    epc_from_alpha,
    extract_2q_epg,
    predict_alpha_3q,
    predict_alpha_general,
    propagate,
)

GATES_PER_1Q_CLIFFORD = 53 / 24
CNOTS_PER_2Q_CLIFFORD = 1.5
AGREEMENT_SIGMAS = 2.0


@dataclass(frozen=True)
class Prediction:
    alpha_1q: dict          # per-gate 1Q decay per qubit
    alpha_2q: dict          # per-CNOT decay per pair
    epg_1q: dict
    epg_2q: dict
    inputs: PredictionInputs
    epc: float
    sigma_epc: float
    epc_general: float

    def to_dict(self) -> dict:
        return {
            "alpha_1q": {str(q): v for q, v in self.alpha_1q.items()},
            "alpha_2q": {f"{a}-{b}": v for (a, b), v in self.alpha_2q.items()},
            "epg_1q": {str(q): v for q, v in self.epg_1q.items()},
            "epg_2q": {f"{a}-{b}": v for (a, b), v in self.epg_2q.items()},
            "alpha1_mean": self.inputs.alpha_1q,
            "alpha2_mean": self.inputs.alpha_2q,
            "N1": self.inputs.n1,
            "N2": self.inputs.n2,
            "epc": self.epc,
            "sigma_epc": self.sigma_epc,
            "epc_general": self.epc_general,
        }


def _sources(results) -> tuple:
    """(alpha, sigma, subset) of 1Q subsets in 1Q-only runs, 1Q subsets in 2Q-1Q runs, and pairs."""
    sim1, mixed1, two = {}, {}, {}
    for r in results:
        sizes = sorted(len(s) for s in r.spec.partition.subsets)
        for s in r.subsets:
            entry = (s.fit.alpha, s.fit.sigma_alpha, s.subset)
            if sizes == [1, 2]:
                if len(s.subset) == 1:
                    mixed1[s.subset[0]] = entry
                else:
                    two[tuple(sorted(s.subset))] = entry
            elif set(sizes) == {1} and len(s.subset) == 1:
                sim1[s.subset[0]] = entry
    return sim1, mixed1, two


def predict_from_subsystems(results, n1_per_2q: tuple, n1_3q: float, n2_3q: float,
                            n1_3q_per_qubit: tuple | None = None, n2_3q_per_pair: dict | None = None,
                            gates_per_1q: float = GATES_PER_1Q_CLIFFORD,
                            cnots_per_2q: float = CNOTS_PER_2Q_CLIFFORD) -> Prediction:
    """3Q EPC predicted from the ``{[i],[j,k]}`` experiments.

    1Q Clifford decays become per-gate decays by compounding over
    ``gates_per_1q``. Each pair's CNOT decay is extracted from its 2Q-1Q EPC
    with the sector model, assuming the 1Q EPGs of the ``{[0],[1],[2]}`` run.
    The prediction uses the 1Q decays of the 2Q-1Q runs and the extracted
    CNOT decays. The homogeneous formula takes the mean of each kind.
    """
    sim1, mixed1, two = _sources(results)
    pairs = [(0, 1), (0, 2), (1, 2)]
    if sorted(sim1) != [0, 1, 2]:
        raise ValueError("need 1Q fits from the {[0],[1],[2]} experiment")
    if sorted(mixed1) != [0, 1, 2] or sorted(two) != pairs:
        raise ValueError("need 1Q and 2Q fits from all three {[i],[j,k]} experiments")
    x = np.array([sim1[q][0] for q in range(3)] + [mixed1[q][0] for q in range(3)] + [two[p][0] for p in pairs])
    sx = np.array([sim1[q][1] for q in range(3)] + [mixed1[q][1] for q in range(3)] + [two[p][1] for p in pairs])

    def per_gate(alpha):
        return float(np.clip(alpha, 0, 1)) ** (1 / gates_per_1q)

    def rates(v):
        ref = {q: epc_from_alpha(1, per_gate(v[q])) for q in range(3)}
        a1 = {q: per_gate(v[3 + q]) for q in range(3)}
        e1 = {q: epc_from_alpha(1, a1[q]) for q in range(3)}
        a2, e2 = {}, {}
        for i, p in enumerate(pairs):
            order = two[p][2]          # first qubit of the subset is the CNOT control
            epc2 = epc_from_alpha(2, float(np.clip(v[6 + i], 0, 1)))
            a2[p], e2[p] = extract_2q_epg(epc2, tuple(ref[q] for q in order), n1_per_2q, cnots_per_2q)
        return a1, e1, a2, e2

    def homogeneous(v):
        a1, _, a2, _ = rates(v)
        inp = PredictionInputs(float(np.mean(list(a1.values()))), float(np.mean(list(a2.values()))), n1_3q, n2_3q)
        return epc_from_alpha(3, predict_alpha_3q(inp))

    a1, e1, a2, e2 = rates(x)
    inp = PredictionInputs(float(np.mean(list(a1.values()))), float(np.mean(list(a2.values()))), n1_3q, n2_3q)
    n1q = dict(enumerate(n1_3q_per_qubit)) if n1_3q_per_qubit else {q: n1_3q / 3 for q in range(3)}
    n2p = n2_3q_per_pair or {p: n2_3q / 3 for p in pairs}
    general = epc_from_alpha(3, predict_alpha_general(a1, a2, n1q, n2p))
    return Prediction(a1, a2, e1, e2, inp, homogeneous(x), propagate(homogeneous, x, sx), general)


@dataclass(frozen=True)
class Comparison:
    label: str
    measured: float
    sigma_measured: float
    predicted: float
    sigma_predicted: float

    @property
    def ratio(self) -> float:
        return self.measured / self.predicted if self.predicted else math.inf

    @property
    def combined_sigma(self) -> float:
        return math.hypot(self.sigma_measured, self.sigma_predicted)

    @property
    def z(self) -> float:
        s = self.combined_sigma
        d = self.measured - self.predicted
        return d / s if s else (0.0 if d == 0 else math.copysign(math.inf, d))

    def agrees(self, sigmas: float = AGREEMENT_SIGMAS) -> bool:
        return abs(self.z) <= sigmas

    def to_dict(self) -> dict:
        return {"label": self.label, "measured": self.measured, "sigma_measured": self.sigma_measured,
                "predicted": self.predicted, "sigma_predicted": self.sigma_predicted,
                "ratio": self.ratio, "z": self.z, "agrees": self.agrees()}


def compare_prediction(measured: RBResult | float, predicted: float, sigma_predicted: float = 0.0,
                       sigma_measured: float = 0.0, label: str | None = None) -> Comparison:
    """Measured vs predicted EPC; ``measured`` may be a 3Q RB result or a number."""
    if isinstance(measured, RBResult):
        if len(measured.subsets) != 1:
            raise ValueError("comparison needs a single-subset RB result")
        s = measured.subsets[0]
        label = label or measured.label
        return Comparison(label, s.epc, s.sigma_epc, predicted, sigma_predicted)
    return Comparison(label or "", float(measured), sigma_measured, predicted, sigma_predicted)


def _fmt(v: float, s: float | None = None) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "-"
    return f"{v:.4g}" if s is None else f"{v:.4g}({s:.2g})"


def format_table(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def table_one(results, limits: dict, cnot_epg: dict | None = None) -> str:
    """Per-subset EPC, per-gate error and coherence limit for every experiment.

    1Q rows show the Clifford error shared over the 1Q gates. Pair rows of the
    2Q-1Q runs show the extracted CNOT error when ``cnot_epg`` is given.
    """
    cnot_epg = cnot_epg or {}
    rows = []
    for r in results:
        mixed = sorted(len(s) for s in r.spec.partition.subsets) == [1, 2]
        for s in r.subsets:
            k = len(s.subset)
            key = tuple(sorted(s.subset))
            if k == 1:
                epg = _fmt(s.epc / GATES_PER_1Q_CLIFFORD)
            elif k == 2 and mixed and key in cnot_epg:
                epg = _fmt(cnot_epg[key])
            else:
                epg = "-"
            rows.append([r.label, list(s.subset), _fmt(s.epc, s.sigma_epc), epg,
                         _fmt(limits.get(key, float("nan")))])
    return format_table(["experiment", "subset", "EPC", "EPG", "coherence limit"], rows)


def table_two(comparisons, coherence_limit: float | None = None) -> str:
    rows = [[c.label, _fmt(c.measured, c.sigma_measured), _fmt(c.predicted, c.sigma_predicted),
             f"{c.ratio:.3f}", f"{c.z:+.2f}"] for c in comparisons]
    text = format_table(["row", "measured 3Q EPC", "predicted", "ratio", "z"], rows)
    if coherence_limit is not None:
        text += f"\ncoherence limit: {coherence_limit:.4g}"
    return text


def alpha_of(results, label: str) -> float:
    for r in results:
        if r.label == label:
            return alpha_from_epc(len(r.subsets[0].subset), r.subsets[0].epc)
    raise KeyError(label)
