"""The post-selected gradient iteration.

Each step loads the ancilla with U, applies the block unitary
sum_k |k><k| (x) s_k P_k, undoes U and keeps the |0...0> ancilla outcome,
which leaves G|phi> / ||G|phi>|| on the work register.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import vqsp
from .analysis import SpectrumReport, rate_from_precision, spectrum
from .pauli import GradientLcu, PauliHamiltonian, amplitude_vector, build_gradient_lcu
from .sim import (DensityMatrix, StateVector, apply_block_unitary, apply_register_unitary, depolarize,
                  expectation, project_ancilla_zero)

NOISE_STAGES = ("after", "before")
ANCILLA_SOURCES = ("vqsp", "exact")


@dataclass(frozen=True)
class QgdConfig:
    hamiltonian: PauliHamiltonian
    mu: float | None = None
    precision: float | None = None
    identity_split: tuple[float, ...] | None = None
    identity_mode: str = "signed"
    max_steps: int = 500
    convergence_epsilon: float = 1e-6
    min_steps: int = 2
    noise_beta: float = 0.0
    noise_stage: str = "after"
    ancilla_source: str = "vqsp"
    ansatz: vqsp.AnsatzSpec | None = None
    vqsp_options: dict = field(default_factory=dict)
    theta: tuple[float, ...] | None = None
    initial_state: StateVector | None = None
    seed: int = 0

    def __post_init__(self):
        if (self.mu is None) == (self.precision is None):
            raise ValueError("give exactly one of mu and precision")
        if self.mu is not None and not self.mu > 0:
            raise ValueError(f"learning rate must be positive, got {self.mu}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if not self.convergence_epsilon > 0:
            raise ValueError("convergence_epsilon must be positive")
        if not 0 <= self.noise_beta <= 1:
            raise ValueError(f"noise_beta must lie in [0, 1], got {self.noise_beta}")
        if self.noise_stage not in NOISE_STAGES:
            raise ValueError(f"noise_stage must be one of {NOISE_STAGES}")
        if self.ancilla_source not in ANCILLA_SOURCES:
            raise ValueError(f"ancilla_source must be one of {ANCILLA_SOURCES}")
        if self.initial_state is not None and self.initial_state.m != self.hamiltonian.n:
            raise ValueError("initial state and Hamiltonian qubit counts differ")

    @property
    def rate(self) -> float:
        return self.mu if self.mu is not None else rate_from_precision(self.precision)

    def lcu(self) -> GradientLcu:
        return build_gradient_lcu(self.hamiltonian, self.rate, self.identity_split, self.identity_mode)


@dataclass(frozen=True)
class IterationRecord:
    step: int
    energy: float
    fidelity: float
    local_prob: float
    global_prob: float
    overlap: float  # Tr(Q rho) with Q the ground-space projector


@dataclass
class Trajectory:
    records: list[IterationRecord]
    converged: bool
    final_state: StateVector | DensityMatrix
    lcu: GradientLcu
    ground_energy: float
    vqsp_result: vqsp.VqspResult | None = None
    states: list | None = None

    @property
    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.records])

    @property
    def fidelities(self) -> np.ndarray:
        return np.array([r.fidelity for r in self.records])

    @property
    def local_probs(self) -> np.ndarray:
        return np.array([r.local_prob for r in self.records])

    @property
    def global_probs(self) -> np.ndarray:
        return np.array([r.global_prob for r in self.records])

    @property
    def steps(self) -> int:
        return self.records[-1].step


def exact_ancilla_unitary(g: GradientLcu) -> np.ndarray:
    return vqsp.amplitude_loading_unitary(amplitude_vector(g))


def qgd_step(state, g: GradientLcu, ancilla_unitary: np.ndarray | None = None):
    """One post-selected iteration on a work-register state.

    Returns ``(next_state, local_prob)``. Without ``ancilla_unitary`` the
    ancilla is loaded with the exact amplitudes sqrt(y_k / N_y).
    """
    if state.m != g.n:
        raise ValueError(f"state has {state.m} qubits, LCU acts on {g.n}")
    u = exact_ancilla_unitary(g) if ancilla_unitary is None else np.asarray(ancilla_unitary)
    if u.shape != (1 << g.k_tilde,) * 2:
        raise ValueError(f"ancilla unitary must be {1 << g.k_tilde} x {1 << g.k_tilde}")
    anc = StateVector.zero(g.k_tilde)
    full = anc.kron(state) if isinstance(state, StateVector) else anc.to_density().kron(state)
    full = apply_register_unitary(full, u, g.k_tilde)
    full = apply_block_unitary(full, g)
    full = apply_register_unitary(full, u.conj().T, g.k_tilde)
    prob, collapsed = project_ancilla_zero(full, g.k_tilde)
    return collapsed, prob


def ground_overlap(state, ground: np.ndarray) -> float:
    """Mass of ``state`` in the span of the orthonormal columns of ``ground``."""
    if isinstance(state, StateVector):
        proj = ground.conj().T @ state.amplitudes
        return float(np.real(np.vdot(proj, proj)))
    return float(np.real(np.trace(ground.conj().T @ state.entries @ ground)))


def _metrics(state, h, ground):
    ov = min(max(ground_overlap(state, ground), 0.0), 1.0)
    fid = math.sqrt(ov) if isinstance(state, StateVector) else ov
    return expectation(state, h), fid, ov


def build_ancilla(config: QgdConfig, g: GradientLcu):
    """Return ``(unitary, vqsp_result)`` for the configured ancilla source."""
    if config.ancilla_source == "exact":
        return exact_ancilla_unitary(g), None
    spec = config.ansatz or vqsp.AnsatzSpec(g.k_tilde, 3, "cz")
    if spec.qubits != g.k_tilde:
        raise ValueError(f"ansatz has {spec.qubits} qubits, LCU needs {g.k_tilde}")
    result = None
    if config.theta is not None:
        theta = np.asarray(config.theta, dtype=float)
    else:
        options = {"seed": config.seed, **config.vqsp_options}
        result = vqsp.train(spec, amplitude_vector(g), **options)
        theta = result.theta_opt
    return vqsp.ansatz_unitary(spec, theta), result


def run(config: QgdConfig, ancilla_unitary: np.ndarray | None = None, keep_states: bool = False,
        reference: SpectrumReport | None = None, stepper=qgd_step) -> Trajectory:
    """Iterate until the energy change drops to ``convergence_epsilon`` or ``max_steps``.

    ``stepper(state, g, u)`` performs one post-selected step; baselines swap
    in their own.
    """
    h = config.hamiltonian
    g = config.lcu()
    result = None
    if ancilla_unitary is None:
        ancilla_unitary, result = build_ancilla(config, g)
    ref = reference if reference is not None else spectrum(h)
    ground = ref.ground_space()

    state = config.initial_state if config.initial_state is not None else StateVector.zero(h.n)
    noisy = config.noise_beta > 0
    if noisy:
        state = state.to_density() if isinstance(state, StateVector) else state

    energy, fid, ov = _metrics(state, h, ground)
    records = [IterationRecord(0, energy, fid, 1.0, 1.0, ov)]
    states = [state] if keep_states else None
    global_prob = 1.0
    converged = False
    for s in range(1, config.max_steps + 1):
        if noisy and config.noise_stage == "before":
            state = depolarize(state, config.noise_beta)
        state, prob = stepper(state, g, ancilla_unitary)
        if noisy and config.noise_stage == "after":
            state = depolarize(state, config.noise_beta)
        global_prob *= prob
        prev = energy
        energy, fid, ov = _metrics(state, h, ground)
        records.append(IterationRecord(s, energy, fid, prob, global_prob, ov))
        if keep_states:
            states.append(state)
        if s >= config.min_steps and abs(energy - prev) <= config.convergence_epsilon:
            converged = True
            break
    return Trajectory(records, converged, state, g, ref.ground_energy, result, states)


@dataclass(frozen=True)
class SamplingBound:
    printed: float   # sum_k y_k / (lambda0**2 c0**2), as published
    squared: float   # N_y**2 / (lambda0**2 c0**2), a true upper bound on 1/P(1)
    exact: float | None  # N_y**2 / ||G phi||**2 when a state is supplied


def sampling_bound(g: GradientLcu, c0: float, lambda0: float, state: StateVector | None = None) -> SamplingBound:
    """Bounds on the expected number of repetitions 1/P(1) of the first step.

    ``c0`` is the overlap amplitude |<u0|phi(0)>| and ``lambda0`` = 1 - 2 mu E0.
    """
    if not 0 < abs(c0) <= 1 + 1e-12:
        raise ValueError(f"overlap amplitude must lie in (0, 1], got {c0}")
    if lambda0 == 0:
        raise ValueError("lambda0 must be non-zero")
    denom = lambda0**2 * abs(c0) ** 2
    n_y = g.normalizer
    exact = None
    if state is not None:
        exact = n_y**2 / float(np.sum(np.abs(g.apply(state.amplitudes)) ** 2))
    return SamplingBound(n_y / denom, n_y**2 / denom, exact)
