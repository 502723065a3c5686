import numpy as np
import pytest

from qgdprep import analysis, models, qgd, vqsp
from qgdprep.pauli import (Branch, GradientLcu, PauliHamiltonian, amplitude_vector, build_gradient_lcu, dense_matrix,
                           pauli_matrix)
from qgdprep.sim import PostSelectionError, StateVector

from oracles import power_iteration, random_pairs, random_state


def deuteron_config(**kw):
    base = dict(hamiltonian=models.deuteron_hamiltonian(), precision=1e-2, identity_split=(0.2, 0.3, 0.5),
                ancilla_source="exact", initial_state=models.deuteron_initial_state())
    base.update(kw)
    return qgd.QgdConfig(**base)


def test_config_validation():
    h = models.deuteron_hamiltonian()
    with pytest.raises(ValueError, match="exactly one"):
        qgd.QgdConfig(h)
    with pytest.raises(ValueError, match="exactly one"):
        qgd.QgdConfig(h, mu=0.1, precision=0.01)
    with pytest.raises(ValueError):
        qgd.QgdConfig(h, mu=0.1, noise_beta=1.5)
    with pytest.raises(ValueError):
        qgd.QgdConfig(h, mu=0.1, max_steps=0)
    with pytest.raises(ValueError):
        qgd.QgdConfig(h, mu=0.1, ancilla_source="magic")
    assert qgd.QgdConfig(h, precision=0.01).rate == pytest.approx(0.05)


def test_step_identity_lcu(rng):
    g = GradientLcu(1e-9, (Branch(0.5, 1, "II"), Branch(0.5, 1, "II")), 2)
    phi = StateVector(random_state(rng, 2))
    nxt, p = qgd.qgd_step(phi, g)
    assert p == pytest.approx(1.0)
    np.testing.assert_allclose(nxt.amplitudes, phi.amplitudes, atol=1e-12)


def test_step_matches_dense_gradient():
    h = models.deuteron_hamiltonian()
    g = build_gradient_lcu(h, 0.05, (0.2, 0.3, 0.5))
    phi = models.deuteron_initial_state()
    nxt, p = qgd.qgd_step(phi, g)
    ref = (np.eye(4) - 0.1 * dense_matrix(h)) @ phi.amplitudes
    assert p == pytest.approx(np.vdot(ref, ref).real / g.normalizer**2, abs=1e-12)
    ref /= np.linalg.norm(ref)
    assert abs(abs(np.vdot(ref, nxt.amplitudes)) - 1) < 1e-10


def test_step_fixed_point_at_ground_state():
    h = models.deuteron_hamiltonian()
    rep = analysis.spectrum(h)
    g = build_gradient_lcu(h, 0.05)
    u0 = rep.ground_state()
    nxt, p = qgd.qgd_step(u0, g)
    assert abs(abs(np.vdot(u0.amplitudes, nxt.amplitudes)) - 1) < 1e-12
    lam0 = 1 - 0.1 * rep.ground_energy
    assert p == pytest.approx(lam0**2 / g.normalizer**2)


def test_step_annihilation_raises():
    # G = I - 2 mu Z with 2 mu = 1 kills |0>
    g = build_gradient_lcu(PauliHamiltonian.from_terms([(1.0, "Z")]), 0.5, (1.0,))
    with pytest.raises(PostSelectionError):
        qgd.qgd_step(StateVector.zero(1), g)


def test_step_vqsp_ancilla_effective_operator(rng):
    h = models.deuteron_hamiltonian()
    g = build_gradient_lcu(h, 0.05, (0.2, 0.3, 0.5))
    spec = vqsp.AnsatzSpec(3, 3)
    theta = rng.uniform(0, 2 * np.pi, 9)
    u = vqsp.ansatz_unitary(spec, theta)
    ytil = u[:, 0].real
    phi = models.deuteron_initial_state()
    nxt, p = qgd.qgd_step(phi, g, u)
    eff = sum(ytil[k] ** 2 * b.sign * pauli_matrix(b.letters) for k, b in enumerate(g.branches))
    ref = eff @ phi.amplitudes
    assert p == pytest.approx(np.vdot(ref, ref).real, abs=1e-12)
    ref /= np.linalg.norm(ref)
    assert abs(abs(np.vdot(ref, nxt.amplitudes)) - 1) < 1e-10


def test_run_records_and_probabilities():
    tr = qgd.run(deuteron_config())
    rec = tr.records
    assert rec[0].step == 0 and rec[0].local_prob == 1.0 and rec[0].global_prob == 1.0
    assert tr.converged
    assert abs(rec[-1].energy - rec[-2].energy) <= 1e-6
    np.testing.assert_allclose(tr.global_probs, np.cumprod(tr.local_probs), rtol=1e-12)
    assert np.all(np.diff(tr.global_probs) <= 0)
    assert np.all(np.diff(tr.local_probs[1:]) >= -1e-12)
    assert np.all((tr.local_probs > 0) & (tr.local_probs <= 1))


def test_run_energy_error_monotone():
    tr = qgd.run(deuteron_config())
    err = np.abs(tr.energies - tr.ground_energy)
    assert np.all(np.diff(err[1:]) <= 1e-9)


def test_run_matches_power_iteration(rng):
    for _ in range(10):
        n = int(rng.integers(1, 4))
        h = PauliHamiltonian.from_terms(random_pairs(rng, n, 4))
        rep = analysis.spectrum(h)
        iv = analysis.learning_rate_interval(rep)
        mu = 0.5 * min(iv.upper, 1.0)
        phi = StateVector(random_state(rng, n))
        cfg = qgd.QgdConfig(h, mu=mu, ancilla_source="exact", initial_state=phi, max_steps=40, min_steps=40)
        tr = qgd.run(cfg, keep_states=True)
        ref = power_iteration(np.eye(1 << n) - 2 * mu * dense_matrix(h), phi.amplitudes, 40)
        for st, r in zip(tr.states, ref):
            assert abs(np.vdot(r, st.amplitudes)) ** 2 >= 1 - 1e-9


def test_run_vqsp_ancilla_trains_and_converges():
    tr = qgd.run(deuteron_config(ancilla_source="vqsp", vqsp_options={"restarts": 10, "seed": 0}))
    assert tr.vqsp_result is not None and tr.vqsp_result.converged
    assert abs(tr.energies[-1] - tr.ground_energy) < 1e-3


def test_run_with_given_theta_skips_training():
    spec = vqsp.AnsatzSpec(3, 3)
    res = vqsp.train(spec, amplitude_vector(deuteron_config().lcu()), 1e-9, seed=0)
    tr = qgd.run(deuteron_config(ancilla_source="vqsp", ansatz=spec, theta=tuple(res.theta_opt)))
    assert tr.vqsp_result is None and tr.converged


def test_noisy_run_uses_density_matrix():
    tr = qgd.run(deuteron_config(noise_beta=0.04, max_steps=10, min_steps=10))
    assert isinstance(tr.final_state, qgd.DensityMatrix)
    assert tr.final_state.is_valid()
    before = qgd.run(deuteron_config(noise_beta=0.04, noise_stage="before", max_steps=10, min_steps=10))
    assert before.records[-1].overlap != pytest.approx(tr.records[-1].overlap)


def test_full_depolarization_gives_uniform_overlap():
    tr = qgd.run(deuteron_config(noise_beta=1.0, max_steps=3, min_steps=3))
    assert tr.records[-1].overlap == pytest.approx(1 / 4)


def test_degenerate_ground_uses_projector():
    # -Z on qubit 0 only: ground space spanned by |00>, |01>
    h = PauliHamiltonian.from_terms([(-1.0, "ZI")])
    phi = StateVector(np.array([0.5, 0.5, 0.5, 0.5]))
    cfg = qgd.QgdConfig(h, mu=0.2, ancilla_source="exact", initial_state=phi)
    tr = qgd.run(cfg)
    assert tr.records[0].overlap == pytest.approx(0.5)
    assert tr.records[-1].fidelity > 0.999


def test_sampling_bound():
    h = models.deuteron_hamiltonian()
    rep = analysis.spectrum(h)
    g = build_gradient_lcu(h, 0.05, (0.2, 0.3, 0.5))
    lam0 = 1 - 0.1 * rep.ground_energy
    u0 = rep.ground_state()
    b = qgd.sampling_bound(g, 1.0, lam0, u0)
    assert b.exact == pytest.approx(g.normalizer**2 / lam0**2)
    phi = models.deuteron_initial_state()
    c0 = abs(np.vdot(u0.amplitudes, phi.amplitudes))
    b = qgd.sampling_bound(g, c0, lam0, phi)
    assert b.squared >= b.exact
    assert b.printed == pytest.approx(g.normalizer / (lam0**2 * c0**2))
    with pytest.raises(ValueError):
        qgd.sampling_bound(g, 0.0, lam0)


def test_inverse_probability_nonincreasing():
    tr = qgd.run(deuteron_config())
    inv = 1 / tr.local_probs[1:]
    assert np.all(np.diff(inv) <= 1e-9)
