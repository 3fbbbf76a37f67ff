"""Acceptance criteria 1-10, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the verdicts are repeated in
the "acceptance criteria" section of the terminal summary. Every stochastic
check uses master seed 0.
"""

import itertools

import numpy as np
import pytest

from threeqrb.clifford import embed, enumerate_group, group_order, sample_uniform, single_qubit_cliffords
from threeqrb.clifford import standard_generators
from threeqrb.rb import (
    PredictionInputs,
    RBPartition,
    RBSpec,
    compare_prediction,
    predict_alpha_3q,
    predict_from_subsystems,
    run_experiment,
    synth_stats,
)
from threeqrb.rb.fitting import RBCurve, fit_curve
from threeqrb.rb.metrics import coherence_limit_3q_epc, sector_channel, twirl_oracle_alpha
from threeqrb.sim import NoiseModel, coherence_limit_table, paper_device
from threeqrb.synth import ConnectivityGraph, circuit_unitary, compile_clifford, decompose_1q, verify
from threeqrb.synth.twoq import CLASS_SIZES

SEED = 0
SAMPLES = 10_000
ALL = ConnectivityGraph.all_to_all(3)
OMIT = ConnectivityGraph.parse("omit:1-2")
PAIRS = ((0, 1), (0, 2), (1, 2))


@pytest.fixture(scope="module")
def stats3():
    """10^4 compiled, scheduled and verified 3Q Cliffords per connectivity on matched seeds."""
    return {name: synth_stats(3, conn, SAMPLES, np.random.default_rng(SEED))
            for name, conn in (("all", ALL), ("omit", OMIT))}


@pytest.fixture(scope="module")
def stats2():
    return synth_stats(2, None, SAMPLES, np.random.default_rng(SEED))


def test_c1_group_orders(verdict):
    orders = [group_order(n).order for n in (1, 2, 3)]
    closure = [len(enumerate_group(standard_generators(n))) for n in (1, 2)]
    ok = orders == [24, 11520, 92897280] and closure == [24, 11520]
    verdict("C1 group orders", ok, f"orders {orders}, closure sizes {closure}")
    assert ok


@pytest.mark.slow
def test_c2_compiler_soundness(verdict, stats3):
    rng = np.random.default_rng(SEED)
    failures = {}
    illegal = 0
    for conn_name, conn in (("all", ALL), ("omit", OMIT)):
        for n, subsets in ((1, [(0,), (1,), (2,)]), (2, list(PAIRS))):
            bad = 0
            for i in range(SAMPLES):
                sub = subsets[i % len(subsets)]
                c = sample_uniform(n, rng)
                circ = compile_clifford(c, sub, conn)
                bad += not verify(circ, embed(c, sub, 3))
                illegal += sum(1 for g in circ.gates if g.kind == "CNOT" and not conn.allows(*g.qubits))
            failures[(conn_name, n)] = bad
        failures[(conn_name, 3)] = round((1 - stats3[conn_name].verified_fraction) * SAMPLES)
    ok = not any(failures.values()) and illegal == 0
    verdict("C2 compiler soundness", ok,
            f"{SAMPLES} Cliffords per n and connectivity, failures {failures}, illegal CNOTs {illegal}")
    assert ok


def test_c3_decomposition_averages(verdict, stats2, stats3):
    avg_1q = sum(sum(g.kind != "VZ" for g in decompose_1q(c).gates) for c in single_qubit_cliffords()) / 24
    exact_cnot = sum(k * s for k, s in enumerate(CLASS_SIZES)) / sum(CLASS_SIZES)
    z = (stats2.n_cnot.mean - 1.5) / stats2.n_cnot.stderr
    ok = avg_1q == 53 / 24 and exact_cnot == 1.5 and abs(z) <= 3
    a, o = stats3["all"], stats3["omit"]
    info = (f"1Q {avg_1q:.4f} (53/24), 2Q CNOT exact {exact_cnot}, empirical {stats2.n_cnot} (z={z:+.2f}); "
            f"3Q all-to-all CNOT {a.n_cnot.mean:.2f} / 1Q {a.n_1q.mean:.2f} (reference 3.5/11.6), "
            f"omit-(1,2) {o.n_cnot.mean:.2f} / {o.n_1q.mean:.2f} (reference 7.7/18.4)")
    verdict("C3 decomposition averages", ok, info)
    assert ok


@pytest.mark.slow
def test_c4_noiseless_rb(verdict):
    dev = paper_device("A")
    worst = 0.0
    parts = [((0,), (1,), (2,)), ((0, 1),), ((0, 2),), ((1, 2),), ((0, 1), (2,)), ((0, 2), (1,)), ((1, 2), (0,)),
             ((0, 1, 2),)]
    for conn in (ALL, OMIT):
        d = dev.with_(connectivity=conn)
        for subs in parts:
            if conn is OMIT and subs in (((1, 2),), ((1, 2), (0,))):
                seeds = 1
            else:
                seeds = 2
            res = run_experiment(RBSpec(RBPartition(subs), seeds=seeds), d, NoiseModel.noiseless(), SEED)
            for s in res.subsets:
                worst = max(worst, float(np.max(np.abs(s.curve.survival - 1))))
    ok = worst <= 1e-9
    verdict("C4 noiseless RB", ok, f"8 partitions x 2 connectivities, max |survival - 1| = {worst:.2e}")
    assert ok


def test_c5_global_depolarizing_closed_loop(verdict):
    # identical seeds give identical survival under global depolarizing, so binomial
    # shot noise (1000 shots) supplies the seed-to-seed scatter the errors rest on
    dev = paper_device("A")
    worst = 0.0
    cells = []
    for n, subs in ((1, ((0,),)), (2, ((0, 1),)), (3, ((0, 1, 2),))):
        for p in (0.005, 0.02, 0.05):
            noise = NoiseModel(enable_damping=False, enable_zz=False, depol_per_clifford=p)
            res = run_experiment(RBSpec(RBPartition(subs), seeds=30, shots=1000), dev, noise, SEED)
            fit = res.subsets[0].fit
            z = (fit.alpha - (1 - p)) / fit.sigma_alpha
            worst = max(worst, abs(z))
            cells.append(f"n={n},p={p}:z={z:+.2f}")
    ok = worst <= 3
    verdict("C5 EPC-alpha closed loop", ok, f"max |z| = {worst:.2f}; " + " ".join(cells))
    assert ok


def test_c6a_prediction_vs_twirl_oracle(verdict, stats3):
    n1, n2 = stats3["all"].n1_with_idles.mean, stats3["all"].n_cnot.mean
    rng = np.random.default_rng(SEED)
    us = [circuit_unitary(compile_clifford(sample_uniform(3, rng), (0, 1, 2), ALL)) for _ in range(3)]
    grid = (0.90, 0.95, 0.99, 1.0)
    worst = 0.0
    for a1, a2 in itertools.product(grid, grid):
        ch = sector_channel(a1 ** (n1 / 3), a2 ** (n2 / 3))
        worst = max(worst, abs(twirl_oracle_alpha(ch, 3, us) - predict_alpha_3q(PredictionInputs(a1, a2, n1, n2))))
    ok = worst <= 1e-6
    verdict("C6a 3Q prediction formula, analytic", ok, f"4x4 grid, N1={n1:.2f}, N2={n2:.3f}, max |diff| = {worst:.1e}")
    assert ok


@pytest.mark.slow
def test_c6b_prediction_monte_carlo(verdict, stats3):
    n1, n2 = stats3["all"].n1_with_idles.mean, stats3["all"].n_cnot.mean
    dev = paper_device("A")
    cells = []
    ok = True
    for p1, p2 in ((1e-3, 1e-2), (2e-3, 2e-2)):
        noise = NoiseModel(p1, p2, enable_damping=False, enable_zz=False, idle_depol=True)
        fit = run_experiment(RBSpec(RBPartition(((0, 1, 2),)), seeds=30), dev, noise, SEED).subsets[0].fit
        pred = predict_alpha_3q(PredictionInputs(1 - p1, 1 - p2, n1, n2))
        rel = abs(fit.alpha - pred) / pred
        ok &= rel <= 0.02
        cells.append(f"p=({p1},{p2}): fit {fit.alpha:.5f}({fit.sigma_alpha:.1g}) vs formula {pred:.5f}, {rel:.2%}")
    verdict("C6b 3Q prediction formula, Monte-Carlo", ok, "; ".join(cells))
    assert ok


def test_c7_coherence_limits(verdict, stats3):
    dev = paper_device("A")
    lim = coherence_limit_table(dev)
    one = [lim[(q,)] for q in range(3)]
    two = [lim[p] for p in PAIRS]
    three = coherence_limit_3q_epc(dev, stats3["all"].duration.mean)
    ok1 = all(abs(v / r - 1) <= 0.10 for v, r in zip(one, (6.5e-4, 3.5e-4, 4.4e-4)))
    ok2 = all(abs(v / r - 1) <= 0.15 for v, r in zip(two, (6e-3, 7e-3, 5e-3)))
    ok3 = abs(three / 0.044 - 1) <= 0.25
    ok = ok1 and ok2 and ok3
    verdict("C7 coherence limits", ok,
            f"1Q {[f'{v:.2e}' for v in one]}, 2Q {[f'{v:.2e}' for v in two]}, "
            f"3Q {three:.4f} at {stats3['all'].duration.mean * 1e6:.3f} us (reference 0.044)")
    assert ok


@pytest.fixture(scope="module")
def crosstalk(stats2, stats3):
    """Simulated subsystem and 3Q RB for both calibrations with the device ZZ values."""
    noise = NoiseModel(1e-3, 1e-2, enable_damping=True, enable_zz=True)
    s3 = stats3["all"]
    out = {}
    for cal in ("A", "B"):
        dev = paper_device(cal)
        parts = [((0,), (1,), (2,)), ((0, 1), (2,)), ((0, 2), (1,)), ((1, 2), (0,))]
        if cal == "B":
            parts += [((0, 1),), ((0, 2),), ((1, 2),)]
        results = [run_experiment(RBSpec(RBPartition(p), seeds=30), dev, noise, SEED) for p in parts]
        full = run_experiment(RBSpec(RBPartition(((0, 1, 2),)), seeds=30), dev, noise, SEED)
        pred = predict_from_subsystems(results, tuple(e.mean for e in stats2.n_1q_per_qubit),
                                       s3.n1_with_idles.mean, s3.n_cnot.mean)
        out[cal] = {"results": results, "full": full, "pred": pred,
                    "cmp": compare_prediction(full, pred.epc, pred.sigma_epc, label=cal)}
    return out


def _row(c):
    return (f"measured {c.measured:.4f}({c.sigma_measured:.4f}) vs predicted {c.predicted:.4f}"
            f"({c.sigma_predicted:.4f}), z={c.z:+.2f}")


@pytest.mark.slow
def test_c8a_calibration_b_worse(verdict, crosstalk):
    a, b = crosstalk["A"]["cmp"], crosstalk["B"]["cmp"]
    ok = b.measured > a.measured
    verdict("C8a cal. B 3Q EPC > cal. A", ok, f"A {a.measured:.4f}, B {b.measured:.4f}")
    assert ok


@pytest.mark.slow
def test_c8b_prediction_underestimates_under_b(verdict, crosstalk):
    c = crosstalk["B"]["cmp"]
    ok = c.predicted < c.measured
    verdict("C8b cal. B prediction underestimates", ok, _row(c))
    assert ok


@pytest.mark.slow
def test_c8c_prediction_agrees_under_a(verdict, crosstalk):
    c = crosstalk["A"]["cmp"]
    ok = c.agrees()
    verdict("C8c cal. A prediction agrees (|z| <= 2)", ok, _row(c))
    assert ok


@pytest.mark.slow
def test_simultaneous_worse_than_isolated_under_b(verdict, crosstalk):
    by_label = {r.label: r for r in crosstalk["B"]["results"]}
    cells = []
    ok = True
    for pair, q in zip(PAIRS, (2, 1, 0)):
        iso = by_label[RBPartition((pair,)).label].by_subset(pair).epc
        sim = by_label[RBPartition((pair, (q,))).label].by_subset(pair).epc
        ok &= sim >= iso
        cells.append(f"{list(pair)}: {sim:.4f} vs isolated {iso:.4f}")
    verdict("invariant: 2Q-1Q pair EPC >= isolated (cal. B)", ok, "; ".join(cells))
    assert ok


@pytest.mark.slow
def test_c9_connectivity_cost(verdict):
    noise = NoiseModel(1e-3, 1e-2, enable_damping=True, enable_zz=False)
    epc = {}
    for name, conn in (("all", ALL), ("omit", OMIT)):
        dev = paper_device("A").with_(connectivity=conn)
        epc[name] = run_experiment(RBSpec(RBPartition(((0, 1, 2),)), seeds=30), dev, noise, SEED).subsets[0]
    ok = epc["omit"].epc > epc["all"].epc
    verdict("C9 connectivity cost", ok,
            f"omit-(1,2) {epc['omit'].epc:.4f}({epc['omit'].sigma_epc:.4f}) vs all-to-all "
            f"{epc['all'].epc:.4f}({epc['all'].sigma_epc:.4f})")
    assert ok


def test_c10_fitter_calibration(verdict):
    rng = np.random.default_rng(SEED)
    m = np.array([1, 2, 4, 8, 16, 32, 64, 128])
    rates = {}
    for alpha in (0.85, 0.95, 0.99):
        hits = 0
        for _ in range(200):
            y = 0.5 * alpha ** m.astype(float) + 0.5 + rng.normal(0, 0.01, (30, len(m)))
            fit = fit_curve(RBCurve(tuple(m), y), 1)
            hits += abs(fit.alpha - alpha) <= 3 * fit.sigma_alpha
        rates[alpha] = hits / 200
    ok = all(r >= 0.95 for r in rates.values())
    verdict("C10 fitter calibration", ok, ", ".join(f"alpha={a}: {r:.1%} within 3 sigma" for a, r in rates.items()))
    assert ok
