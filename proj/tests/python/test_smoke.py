import math

import numpy as np
import pytest

import oqsim


def test_version():
    assert oqsim.__version__


def test_bell_state_and_entropy():
    rho = oqsim.DensityMatrix.from_pure(oqsim.PureState.phi_plus())
    assert oqsim.vn_entropy(rho) == pytest.approx(0.0, abs=1e-12)
    assert oqsim.vn_entropy(oqsim.partial_trace(rho, [0])) == pytest.approx(1.0)
    assert oqsim.mutual_information(rho, [0]) == pytest.approx(2.0)


def test_invalid_state_raises_value_error():
    with pytest.raises(ValueError):
        oqsim.DensityMatrix(np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex))


def test_depolarizing_circuit_matches_channel():
    for p in (0.0, 0.35, 1.0):
        choi = oqsim.circuit_to_channel(oqsim.build_depolarizing_circuit(p), [0])
        expect = oqsim.choi(oqsim.depolarizing(p))
        assert np.abs(choi.matrix - expect.matrix).max() < 1e-9


def test_circuit_builder_and_sampling():
    c = oqsim.Circuit(2).h(0).cnot(0, 1)
    assert len(c) == 2
    rho = oqsim.run_exact(c, oqsim.DensityMatrix.basis(2, 0))
    assert oqsim.overlap(rho, oqsim.PureState.phi_plus()) == pytest.approx(1.0)
    counts = oqsim.sample_counts(rho, 1000, [], 7)
    assert set(counts.table) <= {"00", "11"}
    assert counts.shots == 1000
    assert oqsim.Circuit.from_json(c.to_json()).to_json() == c.to_json()


def test_capacity_and_revivals():
    assert oqsim.channel_capacity_ad(1.0) == pytest.approx(1.0)
    assert oqsim.channel_capacity_ad(0.4) == 0.0
    params = oqsim.ADParams.from_ratio(100.0)
    c = [oqsim.c1(4.0 * i / 400, params) for i in range(401)]
    assert oqsim.detect_revivals([x * x for x in c], 1e-6)


def test_singularity_is_a_numerical_error():
    params = oqsim.ADParams.from_ratio(100.0)
    ts = np.linspace(0.0, 1.0, 2001)
    vals = [oqsim.c1(t, params) for t in ts]
    i = next(k for k in range(len(vals) - 1) if vals[k] > 0 >= vals[k + 1])
    lo, hi = ts[i], ts[i + 1]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if oqsim.c1(mid, params) > 0 else (lo, mid)
    with pytest.raises(oqsim.NumericalError):
        oqsim.gamma_ad(0.5 * (lo + hi), params)


def test_run_experiment_is_deterministic():
    a = oqsim.run("reservoir", shots=500, seed=9)
    b = oqsim.run("reservoir", shots=500, seed=9)
    assert oqsim.to_csv(a.simulated) == oqsim.to_csv(b.simulated)
    psi = next(s for s in a.theory if s.label == "psi_minus")
    assert psi.values[-1] == pytest.approx(1.0)
    with pytest.raises(TypeError):
        oqsim.run("reservoir", bogus=1)
    with pytest.raises(ValueError):
        oqsim.run("teleport")


def test_pauli_probabilities():
    p = oqsim.pauli_rates_to_probabilities(oqsim.PauliRates.eternal(1.0, 0.5), 1.0)
    assert sum(p) == pytest.approx(1.0)
    assert min(p) >= 0.0
    assert not math.isnan(oqsim.witness_f(oqsim.pauli_channel(p)))
