import numpy as np
import pytest

from threeqrb.clifford import identity
from threeqrb.rb import (
    RBPartition,
    RBSpec,
    compare_prediction,
    extract_2q_epg,
    generate_sequences,
    predict_from_subsystems,
    run_experiment,
    simulate_survival,
    standard_suite,
    synth_stats,
)
from threeqrb.rb.experiment import final_states, survival
from threeqrb.rb.metrics import PredictionInputs, epc_from_alpha, predict_epc_3q, propagate
from threeqrb.rb.report import format_table, table_one, table_two
from threeqrb.rb.sequences import net_clifford, random_sequence
from threeqrb.sim import NoiseModel, paper_device
from threeqrb.synth import ConnectivityGraph

DEV = paper_device("A")


def test_partition_parsing_and_validation():
    p = RBPartition.parse("{[0,1],[2]}")
    assert p.subsets == ((0, 1), (2,)) and p.label == "{[0,1],[2]}"
    assert RBPartition.parse("0,1|2") == p
    with pytest.raises(ValueError):
        RBPartition(((0, 1), (1,)))
    with pytest.raises(ValueError):
        RBPartition.parse("{[a]}")


def test_spec_defaults_and_validation():
    spec = RBSpec(RBPartition(((0, 1, 2),)))
    assert spec.lengths == (1, 2, 4, 6, 8, 12, 16) and spec.seeds == 30 and spec.ratio_1q_per_2q == 9
    assert RBSpec(RBPartition(((0,),))).lengths[-1] == 250
    for bad in ({"lengths": (3, 2)}, {"lengths": (0, 1)}, {"seeds": 0}, {"observable_mode": "x"},
                {"alignment": "x"}):
        with pytest.raises(ValueError):
            RBSpec(RBPartition(((0,),)), **bad)


def test_m1_sequence_is_clifford_and_inverse():
    spec = RBSpec(RBPartition(((0, 1),)), lengths=(1, 2, 3), seeds=1)
    seq = random_sequence(spec, 0, 0, 1)
    assert len(seq.steps) == 2
    assert net_clifford(seq, 0) == identity(2)


def test_ratio_of_nine_with_independent_inverses():
    spec = RBSpec(RBPartition(((0, 1), (2,))), lengths=(1, 2, 3), seeds=1)
    seq = random_sequence(spec, 0, 0, 1)
    first = seq.steps[0]
    assert len(first[0]) == 1 and len(first[1]) == 9
    assert len(seq.steps[-1][0]) == 1 and len(seq.steps[-1][1]) == 1
    assert net_clifford(seq, 0) == identity(2) and net_clifford(seq, 1) == identity(1)


def test_sequences_deterministic():
    spec = RBSpec(RBPartition(((0, 2), (1,))), lengths=(1, 3, 5), seeds=2)
    a, b = generate_sequences(spec, 7), generate_sequences(spec, 7)
    c = generate_sequences(spec, 8)
    assert a == b
    assert a != c


def test_standard_suite_has_eight_partitions():
    labels = [p.label for p in standard_suite()]
    assert len(set(labels)) == 8
    assert labels[0] == "{[0],[1],[2]}" and labels[-1] == "{[0,1,2]}"


def test_survival_modes():
    v = np.zeros(64, dtype=complex)
    v[0] = 0.5
    v[9 * 7] = 0.5  # |111>
    assert survival(v, 3, (0, 1), "joint") == pytest.approx(0.5)
    assert survival(v, 3, (0, 1), "marginal") == pytest.approx(0.5)


@pytest.mark.parametrize("conn", ["all", "omit:1-2"])
@pytest.mark.parametrize("alignment", ["free", "step"])
def test_noiseless_rb_survives(alignment, conn):
    # under omit:1-2 the pair is relayed through qubit 0, which the 1Q subset also drives
    spec = RBSpec(RBPartition(((1, 2), (0,))), lengths=(1, 2, 5), seeds=2, alignment=alignment)
    res = run_experiment(spec, DEV.with_(connectivity=ConnectivityGraph.parse(conn, 3)), NoiseModel.noiseless(), 0)
    for s in res.subsets:
        assert np.all(np.abs(s.curve.survival - 1) < 1e-9)
        assert s.fit.status == "degenerate" and s.epc == 0.0


def test_noiseless_long_3q_sequence_returns_to_zero():
    spec = RBSpec(RBPartition(((0, 1, 2),)), lengths=(100,), seeds=1)
    rho = final_states(random_sequence(spec, 0, 0, 100), spec, DEV, NoiseModel.noiseless())[0]
    assert np.real(rho[0, 0]) == pytest.approx(1.0, abs=1e-9)


def test_one_q_lengths_count_own_cliffords():
    spec = RBSpec(RBPartition(((0, 1), (2,))), lengths=(1, 2, 4), seeds=2)
    res = run_experiment(spec, DEV, NoiseModel(1e-3, 1e-2), 0)
    assert res.by_subset((0, 1)).curve.lengths == (1, 2, 4)
    assert res.by_subset((2,)).curve.lengths == (9, 18, 36)
    rows = list(res.rows())
    assert rows[0][:4] == ("{[0,1],[2]}", "[0,1]", 1, 0)
    assert len(rows) == 2 * 3 * 2


def test_worker_count_does_not_change_results():
    spec = RBSpec(RBPartition(((0,), (1,))), lengths=(1, 5, 10), seeds=3)
    noise = NoiseModel(2e-3, 0.0)
    assert simulate_survival(spec, DEV, noise, 4, threads=1) == simulate_survival(spec, DEV, noise, 4, threads=2)


def test_shot_noise_is_seeded():
    spec = RBSpec(RBPartition(((0,),)), lengths=(1, 5, 10), seeds=2, shots=100)
    noise = NoiseModel(1e-2, 0.0, False, False)
    a = simulate_survival(spec, DEV, noise, 1)
    assert a == simulate_survival(spec, DEV, noise, 1)
    assert all(abs(v * 100 - round(v * 100)) < 1e-9 for vals in a.values() for v in vals)


def test_partition_beyond_device_rejected():
    from threeqrb.sim import DeviceModel

    small = DeviceModel(2, [None, None], [None, None], np.zeros((2, 2)))
    with pytest.raises(ValueError):
        run_experiment(RBSpec(RBPartition(((0, 2),)), lengths=(1, 2, 3), seeds=1), small, NoiseModel(), 0)


def test_global_depolarizing_quick_closed_loop():
    p = 0.02
    noise = NoiseModel(enable_damping=False, enable_zz=False, depol_per_clifford=p)
    res = run_experiment(RBSpec(RBPartition(((0, 1),)), lengths=(1, 5, 10, 20, 40), seeds=4), DEV, noise, 2)
    fit = res.subsets[0].fit
    assert fit.alpha == pytest.approx(1 - p, abs=max(3 * fit.sigma_alpha, 1e-9))


def test_cnot_extraction_closed_loop():
    p1, p2 = 2e-3, 2e-2
    res = run_experiment(RBSpec(RBPartition(((0, 1),)), seeds=10), DEV, NoiseModel(p1, p2, False, False), 5)
    n1 = tuple(e.mean for e in synth_stats(2, None, 2000).n_1q_per_qubit)
    e1 = epc_from_alpha(1, 1 - p1)
    s = res.subsets[0]
    a, _ = extract_2q_epg(s.epc, (e1, e1), n1)

    def f(v):
        return extract_2q_epg(epc_from_alpha(2, v[0]), (e1, e1), n1)[0]

    sigma = propagate(f, [s.fit.alpha], [s.fit.sigma_alpha])
    assert abs(a - (1 - p2)) < 3 * sigma


def test_synth_stats_two_qubit():
    st = synth_stats(2, None, 3000, np.random.default_rng(0))
    assert st.verified_fraction == 1.0
    assert abs(st.n_cnot.mean - 1.5) < 3 * st.n_cnot.stderr
    assert sum(e.mean for e in st.n_1q_per_qubit) == pytest.approx(st.n_1q.mean)
    with pytest.raises(ValueError):
        synth_stats(2, None, 0)


def test_synth_stats_connectivity_cost():
    a = synth_stats(3, None, 200, np.random.default_rng(1))
    b = synth_stats(3, ConnectivityGraph.parse("omit:1-2"), 200, np.random.default_rng(1))
    assert b.n_cnot.mean > a.n_cnot.mean
    assert b.n_cnot_per_pair[(1, 2)].mean == 0


def test_compare_prediction_identical_is_ratio_one():
    c = compare_prediction(0.1, 0.1, 0.01, 0.01)
    assert c.ratio == 1.0 and c.z == 0.0 and c.agrees()
    far = compare_prediction(0.302, 0.187, 0.01, 0.02, "B")
    assert far.ratio > 1 and not far.agrees()
    assert "0.302" in table_two([far], 0.044)


def test_prediction_pipeline_recovers_homogeneous_rates():
    # fits built from known rates pass through the pipeline unchanged
    from threeqrb.rb.experiment import RBResult, SubsetResult
    from threeqrb.rb.fitting import DecayFit, RBCurve
    from threeqrb.rb.metrics import sector_alpha_2q

    a1g, acx = 0.999, 0.98
    n1 = (3.9, 3.9)
    a1c = a1g ** (53 / 24)
    a2c = sector_alpha_2q(acx, (a1g, a1g), n1)

    def result(subsets, alphas):
        curve = RBCurve((1, 2, 3), np.ones((1, 3)))
        subs = tuple(SubsetResult(s, curve, DecayFit(1, a, 0, 0, 1e-4, 0, 0), 0, 0) for s, a in zip(subsets, alphas))
        return RBResult(RBSpec(RBPartition(subsets), lengths=(1, 2, 3), seeds=1), 0, subs)

    results = [result(((0,), (1,), (2,)), (a1c,) * 3)]
    for pair, q in (((0, 1), 2), ((0, 2), 1), ((1, 2), 0)):
        results.append(result((pair, (q,)), (a2c, a1c)))
    pred = predict_from_subsystems(results, n1, 28.0, 3.5)
    assert all(v == pytest.approx(acx, abs=1e-12) for v in pred.alpha_2q.values())
    assert pred.epc == pytest.approx(predict_epc_3q(PredictionInputs(a1g, acx, 28.0, 3.5)), rel=1e-12)
    assert pred.sigma_epc > 0
    with pytest.raises(ValueError):
        predict_from_subsystems(results[:2], n1, 28.0, 3.5)
    text = table_one(results, {(0,): 6.4e-4}, pred.epg_2q)
    assert "{[0,1],[2]}" in text


def test_format_table_alignment():
    text = format_table(["a", "bb"], [["x", 1], ["yyy", 22]])
    lines = text.splitlines()
    assert lines[0].startswith("a  ") and set(lines[1]) <= {"-", " "}
    assert len(lines) == 4
