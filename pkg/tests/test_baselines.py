import math
from dataclasses import replace

import numpy as np
import pytest
import scipy.linalg as sl

from qgdprep import baselines, models, qgd
from qgdprep.pauli import Branch, GradientLcu, PauliHamiltonian, PauliTerm, build_gradient_lcu, dense_matrix
from qgdprep.sim import PostSelectionError, StateVector, fidelity

from oracles import pauli_kron, random_pairs, random_state


def test_fqe_ancilla_normalized():
    g = build_gradient_lcu(models.deuteron_hamiltonian(), 0.05)
    anc = baselines.FqeAncilla.from_lcu(g)
    assert abs(np.sum(anc.amplitudes**2) - 1) < 1e-12
    assert anc.normalizer == pytest.approx(float(np.sum(g.weights**2)))


def test_fqe_step_direction_and_probability(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        g = build_gradient_lcu(PauliHamiltonian.from_terms(random_pairs(rng, n, 4)), float(rng.uniform(0.01, 0.2)))
        phi = StateVector(random_state(rng, n))
        a, p = qgd.qgd_step(phi, g)
        b, pt = baselines.fqe_step(phi, g)
        assert fidelity(a, b) >= 1 - 1e-10
        assert p >= pt - 1e-15
        gphi = g.apply(phi.amplitudes)
        w = g.weights
        assert pt == pytest.approx(np.vdot(gphi, gphi).real / (w.size * np.sum(w * w)), abs=1e-12)


def test_fqe_uniform_weights_equal_probability(rng):
    g = GradientLcu(0.1, tuple(Branch(0.3, s, l) for s, l in [(1, "I"), (-1, "X"), (1, "Z"), (1, "Y")]), 1)
    phi = StateVector(random_state(rng, 1))
    _, p = qgd.qgd_step(phi, g)
    _, pt = baselines.fqe_step(phi, g)
    assert p == pytest.approx(pt, abs=1e-13)


def test_fqe_identity_lcu_uniform_split(rng):
    g = GradientLcu(1e-9, tuple(Branch(0.25, 1, "II") for _ in range(4)), 2)
    phi = StateVector(random_state(rng, 2))
    nxt, pt = baselines.fqe_step(phi, g)
    assert pt == pytest.approx(1.0)
    np.testing.assert_allclose(nxt.amplitudes, phi.amplitudes, atol=1e-12)


def test_fqe_run_monotone():
    cfg = qgd.QgdConfig(models.deuteron_hamiltonian(), mu=0.05, identity_split=(0.2, 0.3, 0.5),
                        ancilla_source="exact", initial_state=models.deuteron_initial_state())
    tr = baselines.fqe_run(cfg)
    assert baselines.fqe_probability_monotone(tr)
    rep_u0 = np.linalg.eigh(dense_matrix(cfg.hamiltonian))[1][:, 0]
    const = baselines.fqe_run(replace(cfg, initial_state=StateVector(rep_u0)))
    assert np.allclose(const.local_probs[1:], const.local_probs[1])
    assert baselines.fqe_probability_monotone(const)


def test_fqe_monotone_refuses_noisy_runs():
    cfg = qgd.QgdConfig(models.deuteron_hamiltonian(), mu=0.05, ancilla_source="exact",
                        initial_state=models.deuteron_initial_state(), noise_beta=0.02, max_steps=3)
    tr = baselines.fqe_run(cfg)
    with pytest.raises(ValueError):
        baselines.fqe_probability_monotone(tr)
    assert not baselines.fqe_probability_monotone([0.3, 0.2])


def test_vqe_ansatz_layout():
    assert baselines.VqeAnsatz(1).num_params == 4 and baselines.VqeAnsatz(2).num_params == 8
    with pytest.raises(ValueError):
        baselines.VqeAnsatz(1).state(np.zeros(3))
    np.testing.assert_allclose(baselines.VqeAnsatz(2).state(np.zeros(8)).amplitudes, np.eye(4)[0])


def test_vqe_deuteron_reaches_ground_energy():
    h = models.deuteron_hamiltonian()
    e0 = np.linalg.eigvalsh(dense_matrix(h))[0]
    res = baselines.vqe_run(h, seed=0)
    assert abs(res.final_energy - e0) < 1e-3
    assert np.all(np.diff(res.energy_history) <= 0)


def test_vqe_z_with_rotation_only():
    h = PauliHamiltonian.from_terms([(1.0, "ZI")])
    res = baselines.vqe_run(h, baselines.VqeAnsatz(1, entangle=False), gamma0=[3.0, 0, 0, 0], seed=0)
    assert res.final_energy == pytest.approx(-1.0, abs=1e-8)
    assert math.cos(res.gamma_opt[0] + res.gamma_opt[2]) == pytest.approx(-1.0, abs=1e-6)


def test_vqe_variational_bound(rng):
    for seed in range(5):
        h = PauliHamiltonian.from_terms(random_pairs(rng, 2, 5))
        e0 = np.linalg.eigvalsh(dense_matrix(h))[0]
        res = baselines.vqe_run(h, baselines.VqeAnsatz(2), seed=seed, max_evals=1500)
        assert res.final_energy >= e0 - 1e-9


def test_vqe_rejects_wrong_size():
    with pytest.raises(ValueError):
        baselines.vqe_run(PauliHamiltonian.from_terms([(1.0, "ZZZ")]))


def test_single_term_eigenvalue_minus_one():
    # |1> is the -1 eigenvector of Z
    phi = StateVector(np.array([0, 1], dtype=complex))
    nxt, p = baselines.single_term_step(phi, "Z", 0.3)
    assert p == pytest.approx(1.0)
    assert abs(abs(nxt.amplitudes[1]) - 1) < 1e-12


def test_single_term_annihilation():
    with pytest.raises(PostSelectionError):
        baselines.single_term_step(StateVector.zero(1), "Z", 1.0)
    with pytest.raises(ValueError):
        baselines.single_term_step(StateVector.zero(1), "Z", 0.0)


def test_single_term_matches_dense(rng):
    phi = StateVector(random_state(rng, 2))
    nxt, p = baselines.single_term_step(phi, "XX", 0.1)
    ref = (np.eye(4) - 0.1 * pauli_kron("XX")) @ phi.amplitudes
    assert p == pytest.approx(np.vdot(ref, ref).real / 1.1**2, abs=1e-12)
    ref /= np.linalg.norm(ref)
    assert abs(abs(np.vdot(ref, nxt.amplitudes)) - 1) < 1e-12


def test_single_term_signed_coefficient(rng):
    phi = StateVector(random_state(rng, 2))
    nxt, p = baselines.single_term_step(phi, PauliTerm(-2.143, "YY"), 0.01)
    dt = 0.01 * 2.143
    ref = (np.eye(4) + dt * pauli_kron("YY")) @ phi.amplitudes
    assert p == pytest.approx(np.vdot(ref, ref).real / (1 + dt) ** 2, abs=1e-12)
    assert baselines.single_term_angle(0.1) == pytest.approx(2 * math.acos(1 / math.sqrt(1.1)))


def test_trotter_sweep_first_order():
    h = models.deuteron_hamiltonian()
    phi = models.deuteron_initial_state()
    dt = 1e-3
    out, _ = baselines.trotter_sweep(phi, h, dt)
    ref = sl.expm(-dt * dense_matrix(h)) @ phi.amplitudes
    ref /= np.linalg.norm(ref)
    assert 1 - abs(np.vdot(ref, out.amplitudes)) ** 2 < 1e-5
