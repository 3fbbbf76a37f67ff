"""Reading and writing run outputs: raw survival CSV, curve data and JSON summaries.

Floats are written with ``repr`` so they round-trip exactly, which makes
reruns byte-identical and lets every report be recomputed from the raw CSV.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .rb.experiment import RBResult, SubsetResult, fit_subset
from .rb.fitting import DecayFit, RBCurve
from .rb.sequences import RBPartition, RBSpec

SCHEMA = 1
RAW_COLUMNS = ("partition", "subset", "m", "seed", "survival")


def subset_text(subset) -> str:
    return "[" + ",".join(map(str, subset)) + "]"


def parse_subset(text: str) -> tuple:
    return tuple(int(q) for q in text.strip("[]").split(","))


def slug(label: str) -> str:
    """File-name form of a partition or subset label: ``{[0,1],[2]}`` -> ``0-1_2``."""
    return "_".join(p.replace(",", "-") for p in label.strip("{}").replace("],[", "|").strip("[]").split("|"))


def spec_to_dict(spec: RBSpec) -> dict:
    return {"partition": spec.partition.label, "lengths": list(spec.lengths), "seeds": spec.seeds,
            "ratio_1q_per_2q": spec.ratio_1q_per_2q, "observable": spec.observable_mode,
            "shots": spec.shots, "alignment": spec.alignment}


def spec_from_dict(d: dict) -> RBSpec:
    return RBSpec(RBPartition.parse(d["partition"]), tuple(d["lengths"]), d["seeds"], d["ratio_1q_per_2q"],
                  d["observable"], d.get("shots"), d.get("alignment", "free"))


def raw_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RAW_COLUMNS)
    for r in results:
        for label, sub, m, seed, v in r.rows():
            w.writerow((label, sub, m, seed, repr(v)))
    return buf.getvalue()


def read_raw_csv(path) -> dict:
    """``{(partition, subset): {(seed, m): survival}}`` from a raw CSV."""
    out: dict = {}
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if tuple(header or ()) != RAW_COLUMNS:
            raise ValueError(f"{path}: line 1: expected columns {','.join(RAW_COLUMNS)}")
        for line, row in enumerate(rows, start=2):
            if len(row) != len(RAW_COLUMNS):
                raise ValueError(f"{path}: line {line}: expected {len(RAW_COLUMNS)} fields")
            try:
                key = (row[0], parse_subset(row[1]))
                out.setdefault(key, {})[(int(row[3]), int(row[2]))] = float(row[4])
            except ValueError:
                raise ValueError(f"{path}: line {line}: malformed record") from None
    return out


def curve_csv(s: SubsetResult) -> str:
    """Plot data: per length the mean, standard error, fitted model and every seed's point."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    k = s.curve.survival.shape[0]
    w.writerow(["m", "mean", "stderr", "fit"] + [f"seed_{i}" for i in range(k)])
    fit = s.fit.model(s.curve.lengths)
    for j, m in enumerate(s.curve.lengths):
        w.writerow([m, repr(float(s.curve.mean[j])), repr(float(s.curve.stderr[j])), repr(float(fit[j]))]
                   + [repr(float(v)) for v in s.curve.survival[:, j]])
    return buf.getvalue()


def result_to_dict(r: RBResult) -> dict:
    return {"label": r.label, "spec": spec_to_dict(r.spec),
            "subsets": [{"subset": list(s.subset), "lengths": list(s.curve.lengths), "fit": s.fit.to_dict(),
                         "epc": s.epc, "sigma_epc": s.sigma_epc} for s in r.subsets]}


def results_from_summary(summary: dict, seed: int) -> list:
    """Fitted results stored in a summary (no raw curves)."""
    out = []
    for e in summary.get("experiments", []):
        spec = spec_from_dict(e["spec"])
        subs = []
        for s in e["subsets"]:
            curve = RBCurve(tuple(s["lengths"]), np.full((1, len(s["lengths"])), np.nan))
            subs.append(SubsetResult(tuple(s["subset"]), curve, DecayFit(**s["fit"]), s["epc"], s["sigma_epc"]))
        out.append(RBResult(spec, seed, tuple(subs)))
    return out


def results_from_csv(summary: dict, raw_path, bootstrap: int = 0) -> list:
    """Refit every experiment listed in ``summary`` from the raw CSV."""
    raw = read_raw_csv(raw_path)
    seed = summary["seed"]
    out = []
    for e in summary["experiments"]:
        spec = spec_from_dict(e["spec"])
        subs = []
        for subset in spec.partition.subsets:
            data = raw.get((spec.partition.label, subset))
            if data is None:
                raise ValueError(f"{raw_path}: no data for {spec.partition.label} subset {subset_text(subset)}")
            lengths = tuple(spec.cliffords_per_step(subset) * m for m in spec.lengths)
            try:
                surv = np.array([[data[(s, m)] for m in lengths] for s in range(spec.seeds)])
            except KeyError as exc:
                raise ValueError(f"{raw_path}: missing (seed, m) = {exc.args[0]} for {spec.partition.label}") from None
            subs.append(fit_subset(spec, subset, RBCurve(lengths, surv), seed, bootstrap))
        out.append(RBResult(spec, seed, tuple(subs)))
    return out


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def load_summary(path) -> dict:
    p = Path(path)
    if p.is_dir():
        p = p / "summary.json"
    try:
        data = json.loads(p.read_text())
    except FileNotFoundError:
        raise ValueError(f"summary not found: {p}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if data.get("schema") != SCHEMA:
        raise ValueError(f"{p}: unsupported schema {data.get('schema')!r}")
    return data
