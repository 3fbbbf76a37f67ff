"""Command-line interface: ``threeqrb {run,predict,synth-stats,report}``.

``run`` writes one directory per configured run::

    <out>/<run>/raw.csv          partition,subset,m,seed,survival
    <out>/<run>/summary.json     fits, gate counts, predictions (schema 1)
    <out>/<run>/curves/*.csv     m,mean,stderr,fit,seed_0..  per subset
    <out>/<run>/table1.txt       per-subset EPC/EPG and coherence limits
    <out>/<run>/table2.txt       measured vs predicted 3Q EPC

Exit status is 0 on success, 2 on invalid input and 3 when a fit fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import load_config
from .persist import (
    SCHEMA,
    curve_csv,
    dump_json,
    load_summary,
    raw_csv,
    result_to_dict,
    results_from_csv,
    results_from_summary,
    slug,
    subset_text,
)
from .rb.experiment import RBResult, run_experiment
from .rb.fitting import FitError
from .rb.metrics import coherence_limit_3q_epc
from .rb.report import compare_prediction, predict_from_subsystems, table_one, table_two
from .rb.stats import synth_stats
from .sim.coherence import coherence_limit_table
from .sim.device import ConfigError, DeviceModel
from .synth.connectivity import ConnectivityGraph

FULL = (0, 1, 2)


def _pairs_key(text: str) -> tuple:
    return tuple(int(q) for q in text.split("-"))


def gate_counts(device: DeviceModel, samples: int, seed: int) -> dict:
    """Average compiled gate counts used by the predictions."""
    out = {"2": synth_stats(2, None, samples, np.random.default_rng([seed, 2]), device.durations).to_dict()}
    if device.n == 3:
        out["3"] = synth_stats(3, device.connectivity, samples, np.random.default_rng([seed, 3]),
                               device.durations).to_dict()
    return out


def coherence_limits(device: DeviceModel, synth: dict) -> dict:
    table = coherence_limit_table(device)
    out = {"-".join(map(str, k)): v for k, v in table.items()}
    if device.n == 3 and "3" in synth:
        out["0-1-2"] = coherence_limit_3q_epc(device, synth["3"]["duration"]["mean"])
    return out


def _has_prediction_inputs(results) -> bool:
    labels = {r.label for r in results}
    return {"{[0],[1],[2]}", "{[0,1],[2]}", "{[0,2],[1]}", "{[1,2],[0]}"} <= labels


def analyze(results, synth: dict, limits: dict, name: str) -> dict:
    """Prediction, comparison and both tables for one run's fitted results."""
    out = {"prediction": None, "comparison": None}
    cnot = None
    if _has_prediction_inputs(results) and "3" in synth:
        s2, s3 = synth["2"], synth["3"]
        pred = predict_from_subsystems(
            results, tuple(s2["n_1q_per_qubit"]), s3["n1_with_idles"]["mean"], s3["n_cnot"]["mean"],
            tuple(s3["n1_with_idles_per_qubit"]), {_pairs_key(k): v for k, v in s3["n_cnot_per_pair"].items()})
        out["prediction"] = pred.to_dict()
        cnot = pred.epg_2q
        full = [r for r in results if r.spec.partition.subsets == (FULL,)]
        if full:
            out["comparison"] = compare_prediction(full[0], pred.epc, pred.sigma_epc, label=name).to_dict()
    lims = {_pairs_key(k): v for k, v in limits.items()}
    out["table1"] = table_one(results, lims, cnot)
    rows = []
    if out["comparison"]:
        c = out["comparison"]
        rows.append(compare_prediction(c["measured"], c["predicted"], c["sigma_predicted"], c["sigma_measured"],
                                       c["label"]))
    out["table2"] = table_two(rows, limits.get("0-1-2"))
    return out


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_run(args) -> int:
    cfg = load_config(args.config, args.observable, args.connectivity)
    seed = cfg.seed if args.seed is None else args.seed
    out = Path(args.out)
    for run in cfg.runs:
        results: list[RBResult] = []
        for spec in run.experiments:
            results.append(run_experiment(spec, run.device, run.noise, seed, args.threads))
        synth = gate_counts(run.device, cfg.synth_samples, seed)
        limits = coherence_limits(run.device, synth)
        info = analyze(results, synth, limits, run.name)
        summary = {
            "schema": SCHEMA,
            "seed": seed,
            "run": run.name,
            "config": cfg.source,
            "device": run.device.to_dict(),
            "noise": run.noise.to_dict(),
            "connectivity": run.device.connectivity.label(),
            "synth": synth,
            "coherence_limits": limits,
            "experiments": [result_to_dict(r) for r in results],
            "prediction": info["prediction"],
            "comparison": info["comparison"],
        }
        d = out / run.name
        _write(d / "raw.csv", raw_csv(results))
        for r in results:
            for s in r.subsets:
                _write(d / "curves" / f"{slug(r.label)}__{slug(subset_text(s.subset))}.csv", curve_csv(s))
        _write(d / "summary.json", dump_json(summary))
        _write(d / "table1.txt", info["table1"] + "\n")
        _write(d / "table2.txt", info["table2"] + "\n")
        print(f"== run {run.name} (seed {seed}) -> {d}")
        print(info["table1"])
        print()
        print(info["table2"])
    return 0


def _synth_of(summary: dict) -> dict:
    synth = summary.get("synth")
    if not synth or "2" not in synth:
        raise ValueError("summary has no gate-count statistics")
    return synth


def cmd_predict(args) -> int:
    rows = []
    limit = None
    for path in args.summaries:
        summary = load_summary(path)
        results = results_from_summary(summary, summary["seed"])
        if not _has_prediction_inputs(results):
            raise ValueError(f"{path}: summary lacks the 1Q and 2Q fits of the {{[i],[j,k]}} experiments")
        info = analyze(results, _synth_of(summary), summary["coherence_limits"], summary["run"])
        p = info["prediction"]
        print(f"{summary['run']}: predicted 3Q EPC {p['epc']:.4g} +- {p['sigma_epc']:.2g} "
              f"(general form {p['epc_general']:.4g}; N1={p['N1']:.4g}, N2={p['N2']:.4g})")
        c = info["comparison"]
        if c:
            rows.append(compare_prediction(c["measured"], c["predicted"], c["sigma_predicted"],
                                           c["sigma_measured"], c["label"]))
        limit = summary["coherence_limits"].get("0-1-2", limit)
    print(table_two(rows, limit))
    return 0


def cmd_report(args) -> int:
    for path in args.runs:
        d = Path(path)
        summary = load_summary(d)
        results = results_from_csv(summary, d / "raw.csv")
        info = analyze(results, _synth_of(summary), summary["coherence_limits"], summary["run"])
        print(f"== run {summary['run']} (seed {summary['seed']}), refit from {d / 'raw.csv'}")
        print(info["table1"])
        print()
        print(info["table2"])
    return 0


def cmd_synth_stats(args) -> int:
    conn = ConnectivityGraph.parse(args.connectivity, args.n) if args.n > 1 else ConnectivityGraph.all_to_all(1)
    st = synth_stats(args.n, conn, args.samples, np.random.default_rng(args.seed))
    if args.json:
        print(dump_json(st.to_dict()), end="")
        return 0
    print(f"n={st.n} connectivity={st.connectivity or '-'} samples={st.samples}")
    for k in ("n_cnot", "n_1q", "n_idle_as_1q", "n1_with_idles", "duration"):
        e = getattr(st, k)
        scale, unit = (1e6, " us") if k == "duration" else (1, "")
        print(f"  {k:<14} {e.mean * scale:.4f} +- {e.stderr * scale:.4f}{unit}")
    print(f"  verified       {st.verified_fraction:.4%}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="threeqrb", description="Three-qubit randomized benchmarking simulator.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the configured RB experiments")
    run.add_argument("--config", required=True, help="run-config JSON path, or 'paper-device'")
    run.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    run.add_argument("--out", default="results", help="output directory")
    run.add_argument("--threads", type=int, default=1, help="worker processes over seeds")
    run.add_argument("--observable", choices=("joint", "marginal"), default=None)
    run.add_argument("--connectivity", default=None, help="'all' or 'omit:i-j'")
    run.set_defaults(func=cmd_run)

    pr = sub.add_parser("predict", help="3Q EPC prediction from run summaries")
    pr.add_argument("summaries", nargs="+", help="summary.json files or run directories")
    pr.set_defaults(func=cmd_predict)

    ss = sub.add_parser("synth-stats", help="average gate counts of compiled random Cliffords")
    ss.add_argument("--n", type=int, default=3, choices=(1, 2, 3))
    ss.add_argument("--connectivity", default="all", help="'all' or 'omit:i-j'")
    ss.add_argument("--samples", type=int, default=1000)
    ss.add_argument("--seed", type=int, default=0)
    ss.add_argument("--json", action="store_true", help="print the report as JSON")
    ss.set_defaults(func=cmd_synth_stats)

    rp = sub.add_parser("report", help="refit persisted raw data and print both tables")
    rp.add_argument("runs", nargs="+", help="run directories written by 'run'")
    rp.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) is not None and getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except FitError as exc:
        print(f"fit error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
