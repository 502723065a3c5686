"""Variational preparation of the positive ancilla state |y>.

A hardware-efficient circuit of Ry layers and ring entanglers is trained with
Nelder-Mead on a KL-divergence cost plus a term that fixes the amplitude signs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .sim import GateOp, StateVector, cz, cry, gate_unitary, ry, sample_distribution

KL_FLOOR = 1e-12


@dataclass(frozen=True)
class AnsatzSpec:
    """Each layer is Ry on every qubit followed by a ring of entanglers.

    ``entangler="cz"`` uses fixed CZ gates (layer has ``qubits`` parameters);
    ``"cry"`` uses parameterized controlled-Ry gates on the same ring.
    """

    qubits: int
    layers: int
    entangler: str = "cz"

    def __post_init__(self):
        if self.qubits < 1 or self.layers < 1:
            raise ValueError("need at least one qubit and one layer")
        if self.entangler not in ("cz", "cry"):
            raise ValueError(f"unknown entangler {self.entangler!r}")

    @property
    def ring(self) -> list[tuple[int, int]]:
        k = self.qubits
        if k == 1:
            return []
        if k == 2:
            return [(0, 1)]
        return [(q, (q + 1) % k) for q in range(k)]

    @property
    def params_per_layer(self) -> int:
        return self.qubits + (len(self.ring) if self.entangler == "cry" else 0)

    @property
    def num_params(self) -> int:
        return self.layers * self.params_per_layer

    @cached_property
    def program(self) -> tuple[np.ndarray, ...]:
        """Gate list as (kind, qubit_a, qubit_b, param_index) int arrays."""
        rows = []
        p = 0
        for _ in range(self.layers):
            for q in range(self.qubits):
                rows.append((kernels.RY, q, -1, p))
                p += 1
            for a, b in self.ring:
                if self.entangler == "cz":
                    rows.append((kernels.CZ, a, b, -1))
                else:
                    rows.append((kernels.CRY, a, b, p))
                    p += 1
        arr = np.array(rows, dtype=np.int64).reshape(-1, 4)
        return tuple(np.ascontiguousarray(arr[:, i]) for i in range(4))


def _check_theta(spec: AnsatzSpec, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.size != spec.num_params:
        raise ValueError(f"ansatz needs {spec.num_params} parameters, got {theta.size}")
    return theta


def ansatz_amplitudes(spec: AnsatzSpec, theta) -> np.ndarray:
    """Real amplitudes of U(theta)|0...0> (all gates are real)."""
    theta = _check_theta(spec, theta)
    return kernels.ansatz_state(theta, *spec.program, spec.qubits)


def build_ansatz_state(spec: AnsatzSpec, theta) -> StateVector:
    return StateVector.normalized(ansatz_amplitudes(spec, theta))


def ansatz_gates(spec: AnsatzSpec, theta) -> list[GateOp]:
    theta = _check_theta(spec, theta)
    gates = []
    for kind, a, b, p in zip(*spec.program):
        if kind == kernels.RY:
            gates.append(ry(int(a), theta[p]))
        elif kind == kernels.CZ:
            gates.append(cz(int(a), int(b)))
        else:
            gates.append(cry(int(a), int(b), theta[p]))
    return gates


def ansatz_unitary(spec: AnsatzSpec, theta) -> np.ndarray:
    return gate_unitary(ansatz_gates(spec, theta), spec.qubits)


def amplitude_loading_unitary(amplitudes) -> np.ndarray:
    """Real orthogonal matrix whose first column is ``amplitudes`` (Householder)."""
    y = np.asarray(amplitudes, dtype=float)
    y = y / np.linalg.norm(y)
    e0 = np.zeros_like(y)
    e0[0] = 1.0
    v = e0 - y
    vv = v @ v
    if vv < 1e-30:
        return np.eye(y.size)
    return np.eye(y.size) - 2 * np.outer(v, v) / vv


def overlap_plus(state: StateVector, shots: int = 0, seed: int | None = None) -> float:
    """Re<+...+|psi>, exactly or as a finite-shot Hadamard-test estimate."""
    amps = state.amplitudes
    exact = float(np.real(amps.sum())) / math.sqrt(amps.size)
    if shots == 0:
        return exact
    p0 = min(max((1 + exact) / 2, 0.0), 1.0)
    hits = np.random.default_rng(seed).binomial(shots, p0)
    return 2 * hits / shots - 1


def _cost_from_amplitudes(psi, target, probs, phase_term):
    t2 = target**2
    support = t2 > 0
    kl = -np.sum(t2[support] * np.log(np.maximum(probs[support], KL_FLOOR) / t2[support]))
    gap = target.sum() - psi.sum()
    phase = abs(gap) if phase_term == "abs" else gap * gap
    return max(float(kl + phase), 0.0)


def _check_target(target, qubits):
    target = np.asarray(target, dtype=float).reshape(-1)
    if target.size != 1 << qubits:
        raise ValueError(f"target needs {1 << qubits} amplitudes, got {target.size}")
    if np.any(target < 0) or abs(target @ target - 1) > 1e-9:
        raise ValueError("target amplitudes must be non-negative with unit 2-norm")
    return target


def cost_F(theta, spec: AnsatzSpec, target_amplitudes, shots: int = 0, seed: int | None = None,
           phase_term: str = "abs") -> float:
    """KL divergence of sampled probabilities from y**2 plus the sign-fixing term.

    The sign term is |sum_k y_k - sqrt(K+1) <+|psi>|, or its square with
    ``phase_term="squared"``.
    """
    target = _check_target(target_amplitudes, spec.qubits)
    psi = ansatz_amplitudes(spec, theta)
    if shots == 0:
        return _cost_from_amplitudes(psi, target, psi * psi, phase_term)
    state = StateVector.normalized(psi)
    probs = sample_distribution(state, shots, seed)
    plus = overlap_plus(state, shots, None if seed is None else seed + 1)
    t2 = target**2
    support = t2 > 0
    kl = -np.sum(t2[support] * np.log(np.maximum(probs[support], KL_FLOOR) / t2[support]))
    gap = target.sum() - math.sqrt(target.size) * plus
    return max(float(kl + (abs(gap) if phase_term == "abs" else gap * gap)), 0.0)


@dataclass
class VqspResult:
    theta_opt: np.ndarray
    final_cost: float
    cost_history: np.ndarray
    prepared_fidelity: float
    converged: bool
    evaluations: int
    restart_costs: list[float] = field(default_factory=list)


class _TargetReached(Exception):
    pass


class _Objective:
    """Counts evaluations, tracks the best point and stops at the target."""

    def __init__(self, fn, target_cost, budget):
        self.fn = fn
        self.target_cost = target_cost
        self.budget = budget
        self.count = 0
        self.best = math.inf
        self.best_x = None
        self.history = []

    def __call__(self, x):
        if self.count >= self.budget:
            raise _TargetReached
        value = self.fn(x)
        self.count += 1
        if value < self.best:
            self.best = value
            self.best_x = np.array(x, copy=True)
        self.history.append(self.best)
        if value <= self.target_cost:
            raise _TargetReached
        return value


def nelder_mead(fn, x0, step: float, budget: int, target_cost: float = -math.inf,
                xatol: float = 1e-12, fatol: float = 1e-15) -> _Objective:
    """Nelder-Mead with simplex rebuilds around the incumbent until it stalls.

    Coefficients are the textbook ones (reflection 1, expansion 2, contraction
    and shrink 1/2). Returns the objective tracker holding the best point.
    """
    obj = _Objective(fn, target_cost, budget)
    x = np.asarray(x0, dtype=float)
    simplex_offsets = step * np.vstack([np.zeros(x.size), np.eye(x.size)])
    prev = math.inf
    try:
        while obj.count < budget:
            minimize(obj, x, method="Nelder-Mead",
                     options={"initial_simplex": x + simplex_offsets, "maxfev": budget - obj.count,
                              "xatol": xatol, "fatol": fatol})
            x = obj.best_x
            if obj.best >= prev:
                break
            prev = obj.best
    except _TargetReached:
        pass
    return obj


def train(spec: AnsatzSpec, target_amplitudes, epsilon_prime: float = 1e-9, restarts: int = 10,
          seed: int = 0, max_evals: int = 50_000, simplex_step: float = math.pi / 2,
          phase_term: str = "abs", shots: int = 0, polish_evals: int = 0) -> VqspResult:
    """Train U(theta) so that U(theta)|0> approximates the target amplitudes.

    Each restart draws theta_0 uniformly from [0, 2pi) and gets its own
    ``max_evals`` budget. Training stops at the first restart whose cost drops
    to ``epsilon_prime``; otherwise the best restart is returned with
    ``converged=False``. A positive ``polish_evals`` continues Nelder-Mead from
    the best restart with that many extra evaluations when the target is not
    yet reached.
    """
    if not epsilon_prime > 0:
        raise ValueError("epsilon_prime must be positive")
    target = _check_target(target_amplitudes, spec.qubits)
    program = spec.program
    k = spec.qubits

    if shots == 0:
        def fn(theta):
            psi = kernels.ansatz_state(theta, *program, k)
            return _cost_from_amplitudes(psi, target, psi * psi, phase_term)
    else:
        sample_rng = np.random.default_rng([seed, 1])

        def fn(theta):
            return cost_F(theta, spec, target, shots, int(sample_rng.integers(2**31)), phase_term)

    rng = np.random.default_rng(seed)
    best = None
    restart_costs = []
    evaluations = 0
    for _ in range(max(restarts, 1)):
        x0 = rng.uniform(0, 2 * math.pi, spec.num_params)
        obj = nelder_mead(fn, x0, simplex_step, max_evals, epsilon_prime)
        evaluations += obj.count
        restart_costs.append(obj.best)
        if best is None or obj.best < best.best:
            best = obj
        if best.best <= epsilon_prime:
            break
    if polish_evals > 0 and best.best > epsilon_prime:
        polished = nelder_mead(fn, best.best_x, simplex_step, polish_evals, epsilon_prime)
        evaluations += polished.count
        if polished.best < best.best:
            polished.history = best.history + polished.history
            best = polished
    theta = best.best_x
    psi = ansatz_amplitudes(spec, theta)
    return VqspResult(
        theta_opt=theta,
        final_cost=float(best.best),
        cost_history=np.asarray(best.history),
        prepared_fidelity=float(abs(psi @ target)),
        converged=bool(best.best <= epsilon_prime),
        evaluations=evaluations,
        restart_costs=restart_costs,
    )
