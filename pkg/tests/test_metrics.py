import itertools

import numpy as np
import pytest

from threeqrb.clifford import sample_uniform
from threeqrb.rb.metrics import (
    PredictionInputs,
    alpha_from_epc,
    coherence_limit_3q_epc,
    epc_from_alpha,
    epg_from_epc,
    epg_from_epc_compound,
    extract_2q_epg,
    predict_alpha_3q,
    predict_alpha_general,
    predict_epc_3q,
    propagate,
    sector_alpha_2q,
    sector_channel,
    twirl_oracle_alpha,
)
from threeqrb.sim import DeviceModel, paper_device
from threeqrb.synth import ConnectivityGraph, circuit_unitary, compile_clifford


def prediction_by_hand(a1, a2, n1, n2):
    a = a1 ** (n1 / 3)
    b = a2 ** (n2 / 3)
    return a * b * b / 7 * (1 + 3 * a * b + 3 * a * a * b)


def test_epc_alpha_conversions():
    for n in (1, 2, 3):
        assert epc_from_alpha(n, 1.0) == 0.0
    assert alpha_from_epc(3, 0.106) == pytest.approx(1 - 0.106 * 8 / 7)
    assert alpha_from_epc(3, 0.106) == pytest.approx(0.87886, abs=1e-5)
    for n in (1, 2, 3):
        for a in np.linspace(0, 1, 11):
            assert alpha_from_epc(n, epc_from_alpha(n, a)) == pytest.approx(a, abs=1e-15)
    eps = [epc_from_alpha(2, a) for a in np.linspace(0, 1, 21)]
    assert all(x > y for x, y in zip(eps, eps[1:]))


def test_conversion_errors():
    with pytest.raises(ValueError):
        epc_from_alpha(1, 1.2)
    with pytest.raises(ValueError):
        epc_from_alpha(0, 0.5)
    with pytest.raises(ValueError):
        alpha_from_epc(1, 0.6)


def test_epg_from_epc():
    assert epg_from_epc(0.0, 2.2083) == 0.0
    assert epg_from_epc(0.01, 53 / 24) == pytest.approx(0.01 * 24 / 53)
    for epc in (0.001, 0.01, 0.05):
        epg = epg_from_epc_compound(1, epc, 53 / 24)
        back = epc_from_alpha(1, alpha_from_epc(1, epg) ** (53 / 24))
        assert back == pytest.approx(epc, rel=1e-12)
    # the linear share agrees with compounding for small errors
    assert epg_from_epc(1e-3, 53 / 24) == pytest.approx(epg_from_epc_compound(1, 1e-3, 53 / 24), rel=0.01)
    with pytest.raises(ValueError):
        epg_from_epc(0.1, 0)


def test_extract_2q_noiseless_and_reduced():
    assert extract_2q_epg(0.0, (0.0, 0.0), (3.9, 3.9)) == (1.0, 0.0)
    # with perfect 1Q gates the equation reduces to alpha_2q = alpha_cnot ** 1.5
    a, epg = extract_2q_epg(epc_from_alpha(2, 0.9**1.5), (0.0, 0.0), (3.9, 3.9))
    assert a == pytest.approx(0.9, abs=1e-12)
    assert epg == pytest.approx(epc_from_alpha(2, 0.9))


def test_extract_2q_inverts_sector_model():
    a1 = (alpha_from_epc(1, 1.2e-3), alpha_from_epc(1, 2e-3))
    n1 = (3.87, 3.96)
    target = sector_alpha_2q(0.975, a1, n1)
    a, _ = extract_2q_epg(epc_from_alpha(2, target), (1.2e-3, 2e-3), n1)
    assert a == pytest.approx(0.975, abs=1e-12)


def test_extract_2q_without_solution():
    with pytest.raises(ValueError):
        extract_2q_epg(1e-4, (0.01, 0.01), (4.0, 4.0))


def test_prediction_noiseless_and_example():
    assert predict_alpha_3q(PredictionInputs(1.0, 1.0, 34.7, 3.5)) == 1.0
    inp = PredictionInputs(0.998, 0.97, 34.7, 3.5)
    assert predict_alpha_3q(inp) == pytest.approx(prediction_by_hand(0.998, 0.97, 34.7, 3.5), abs=1e-15)
    assert predict_alpha_3q(inp) == pytest.approx(0.8572, abs=1e-4)
    assert predict_epc_3q(inp) == pytest.approx(0.125, abs=1e-3)


def test_prediction_inputs_validation():
    with pytest.raises(ValueError):
        PredictionInputs(1.1, 0.9, 1, 1)
    with pytest.raises(ValueError):
        PredictionInputs(0.9, 0.9, -1, 1)


def test_general_form_reduces_to_homogeneous():
    pairs = list(itertools.combinations(range(3), 2))
    for a1, a2 in itertools.product((0.9, 0.99), (0.95, 1.0)):
        inp = PredictionInputs(a1, a2, 30.0, 4.5)
        gen = predict_alpha_general({q: a1 for q in range(3)}, {p: a2 for p in pairs},
                                    {q: 10.0 for q in range(3)}, {p: 1.5 for p in pairs})
        assert gen == pytest.approx(predict_alpha_3q(inp), abs=1e-14)


def _three_qubit_clifford_unitaries(k, seed):
    rng = np.random.default_rng(seed)
    conn = ConnectivityGraph.all_to_all(3)
    return [circuit_unitary(compile_clifford(sample_uniform(3, rng), (0, 1, 2), conn)) for _ in range(k)]


def test_prediction_matches_twirl_oracle_small_grid():
    us = _three_qubit_clifford_unitaries(4, 0)
    for a1, a2 in ((0.95, 0.9), (0.99, 1.0)):
        a, b = a1 ** (30 / 3), a2 ** (4 / 3)
        oracle = twirl_oracle_alpha(sector_channel(a, b), 3, us)
        assert oracle == pytest.approx(predict_alpha_3q(PredictionInputs(a1, a2, 30, 4)), abs=1e-6)


def test_coherence_limit_3q():
    inf = DeviceModel(3, [None] * 3, [None] * 3, np.zeros((3, 3)))
    assert coherence_limit_3q_epc(inf, 1e-6) == 0.0
    dev = paper_device("A")
    lim = coherence_limit_3q_epc(dev, 1e-6)
    dbl = dev.with_(t1=tuple(2 * t for t in dev.t1), t2=tuple(2 * t for t in dev.t2))
    assert coherence_limit_3q_epc(dbl, 1e-6) / lim == pytest.approx(0.5, rel=0.05)


def test_propagate_linear():
    s = propagate(lambda v: 2 * v[0] + 3 * v[1], [1.0, 1.0], [0.1, 0.2])
    assert s == pytest.approx(np.hypot(0.2, 0.6), rel=1e-6)
