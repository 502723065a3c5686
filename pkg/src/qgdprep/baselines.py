"""Reference methods: the FQE iteration, a small VQE, and the one-ancilla per-term step."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import hadamard

from . import qgd
from .pauli import Branch, GradientLcu, PauliHamiltonian, PauliTerm
from .sim import (DensityMatrix, StateVector, apply_block_unitary, apply_circuit, apply_register_unitary,
                  cz, expectation, project_ancilla_zero, ry, ry_matrix)
from .vqsp import amplitude_loading_unitary, nelder_mead


@dataclass(frozen=True)
class FqeAncilla:
    """Ancilla amplitudes y_k / sqrt(sum_k y_k**2)."""

    amplitudes: np.ndarray
    normalizer: float

    @classmethod
    def from_lcu(cls, g: GradientLcu) -> FqeAncilla:
        w = g.weights
        n2 = float(np.sum(w * w))
        return cls(w / math.sqrt(n2), n2)


def fqe_step(state, g: GradientLcu, ancilla_unitary=None):
    """One FQE step: load y/||y||, apply the block unitary, Hadamard the ancilla, keep |0...0>.

    ``ancilla_unitary`` is accepted for interface parity with ``qgd_step`` and ignored.
    """
    anc = FqeAncilla.from_lcu(g)
    prep = amplitude_loading_unitary(anc.amplitudes)
    had = hadamard(1 << g.k_tilde) / math.sqrt(1 << g.k_tilde)
    zero = StateVector.zero(g.k_tilde)
    full = zero.kron(state) if isinstance(state, StateVector) else zero.to_density().kron(state)
    full = apply_register_unitary(full, prep, g.k_tilde)
    full = apply_block_unitary(full, g)
    full = apply_register_unitary(full, had, g.k_tilde)
    prob, collapsed = project_ancilla_zero(full, g.k_tilde)
    return collapsed, prob


def fqe_run(config: qgd.QgdConfig, **kwargs) -> qgd.Trajectory:
    """Same iteration and stopping rule as ``qgd.run`` with FQE steps."""
    config = replace(config, ancilla_source="exact")
    return qgd.run(config, stepper=fqe_step, **kwargs)


def fqe_probability_monotone(trajectory, slack: float = 1e-12) -> bool:
    """True iff the local success probabilities never decrease (noiseless runs only)."""
    if isinstance(trajectory, qgd.Trajectory):
        if isinstance(trajectory.final_state, DensityMatrix):
            raise ValueError("monotonicity is only claimed for noiseless runs")
        probs = trajectory.local_probs[1:]
    else:
        probs = np.asarray(trajectory, dtype=float)
    return bool(np.all(np.diff(probs) >= -slack))


@dataclass(frozen=True)
class VqeAnsatz:
    """W(gamma) = [Ry (x) Ry] . CZ . [Ry (x) Ry], stacked ``depth`` times."""

    depth: int = 1
    entangle: bool = True

    @property
    def num_params(self) -> int:
        return 4 * self.depth

    def gates(self, gamma):
        gamma = np.asarray(gamma, dtype=float).reshape(-1)
        if gamma.size != self.num_params:
            raise ValueError(f"ansatz needs {self.num_params} parameters, got {gamma.size}")
        out = []
        for d in range(self.depth):
            g = gamma[4 * d:4 * d + 4]
            out += [ry(0, g[0]), ry(1, g[1])]
            if self.entangle:
                out.append(cz(0, 1))
            out += [ry(0, g[2]), ry(1, g[3])]
        return out

    def state(self, gamma) -> StateVector:
        return apply_circuit(StateVector.zero(2), self.gates(gamma))


@dataclass
class VqeResult:
    gamma_opt: np.ndarray
    final_energy: float
    energy_history: np.ndarray
    evaluations: int
    converged: bool


def vqe_run(h: PauliHamiltonian, ansatz: VqeAnsatz = VqeAnsatz(), gamma0=None, max_evals: int = 5000,
            seed: int = 0, simplex_step: float = 0.5, target_energy: float = -math.inf) -> VqeResult:
    """Nelder-Mead minimization of <00|W(gamma)^dag H W(gamma)|00>.

    ``converged`` is False when the budget ran out before the simplex stalled
    (or before ``target_energy`` was reached, if one is given).
    """
    if h.n != 2:
        raise ValueError(f"the VQE ansatz acts on 2 qubits, Hamiltonian has {h.n}")
    if gamma0 is None:
        gamma0 = np.random.default_rng(seed).uniform(0, 2 * math.pi, ansatz.num_params)

    def energy(gamma):
        return expectation(ansatz.state(gamma), h)

    obj = nelder_mead(energy, gamma0, simplex_step, max_evals, target_energy)
    converged = obj.best <= target_energy if math.isfinite(target_energy) else obj.count < max_evals
    return VqeResult(obj.best_x, float(obj.best), np.asarray(obj.history), obj.count, bool(converged))


def single_term_angle(delta_t: float) -> float:
    """Ry angle with cos(theta/2) = 1/sqrt(1 + dt)."""
    return 2 * math.acos(1 / math.sqrt(1 + delta_t))


def single_term_step(state, term: PauliTerm | str, delta_t: float):
    """Apply (I - dt h P) with one ancilla; returns ``(next_state, prob)``.

    The ancilla is rotated by Ry(theta), drives a controlled -sign(h) P and is
    rotated back; keeping |0> leaves (I - dt |h| sign(h) P)|phi> with
    probability ||(I - dt h P)|phi>||**2 / (1 + dt |h|)**2. A bare letter
    string means h = 1.
    """
    if not delta_t > 0:
        raise ValueError(f"time step must be positive, got {delta_t}")
    if isinstance(term, str):
        term = PauliTerm(1.0, term)
    if term.n != state.m:
        raise ValueError(f"term has {term.n} qubits, state has {state.m}")
    dt = delta_t * abs(term.coefficient)
    if dt == 0:
        return state, 1.0
    branches = (Branch(1.0, 1, "I" * term.n), Branch(dt, -1 if term.coefficient > 0 else 1, term.letters))
    g = GradientLcu(dt / 2, branches, term.n)
    return qgd.qgd_step(state, g, ry_matrix(single_term_angle(dt)))


def trotter_sweep(state, h: PauliHamiltonian, delta_t: float):
    """Compose single_term_step over every term of ``h`` in order."""
    prob = 1.0
    for t in h.terms:
        state, p = single_term_step(state, t, delta_t)
        prob *= p
    return state, prob
