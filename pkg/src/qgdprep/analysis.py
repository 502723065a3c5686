"""Spectral diagnostics, learning-rate bounds and success-probability algebra.

The dense eigensolver here is the reference for ground energies and ground
vectors used everywhere else in the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import GradientLcu, PauliHamiltonian, dense_matrix
from .sim import GateOp, StateVector, gate_unitary, mc_pauli

DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumReport:
    energies: np.ndarray
    vectors: np.ndarray | None = None
    mu: float | None = None

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    @property
    def degenerate_ground(self) -> bool:
        return bool(len(self.energies) > 1 and self.energies[1] - self.energies[0] <= DEGENERACY_TOL)

    def lambdas(self, mu: float | None = None) -> np.ndarray:
        """|1 - 2 mu E_i|."""
        mu = self.mu if mu is None else mu
        if mu is None:
            raise ValueError("a learning rate is needed for the gradient magnitudes")
        return np.abs(1 - 2 * mu * self.energies)

    def dominant_index(self, mu: float | None = None) -> int:
        return int(np.argmax(self.lambdas(mu)))

    def ground_space(self, tol: float = DEGENERACY_TOL) -> np.ndarray:
        """Orthonormal columns spanning the lowest eigenspace."""
        if self.vectors is None:
            raise ValueError("spectrum was computed without eigenvectors")
        count = int(np.sum(self.energies - self.energies[0] <= tol))
        return self.vectors[:, :count]

    def ground_state(self) -> StateVector:
        return StateVector.normalized(self.vectors[:, 0])


def spectrum(h: PauliHamiltonian | np.ndarray, mu: float | None = None) -> SpectrumReport:
    """Full spectrum of a Hamiltonian (or of a list of eigenvalues)."""
    if isinstance(h, PauliHamiltonian):
        w, v = np.linalg.eigh(dense_matrix(h))
        return SpectrumReport(w, v, mu)
    return SpectrumReport(np.sort(np.asarray(h, dtype=float)), None, mu)


@dataclass(frozen=True)
class RateInterval:
    """Open interval (lower, upper) of learning rates that reach the ground state."""

    lower: float
    upper: float
    case_tag: str
    degenerate: bool = False

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.upper)

    def contains(self, mu: float) -> bool:
        return self.lower < mu < self.upper


def _energies(spec) -> np.ndarray:
    if isinstance(spec, SpectrumReport):
        return spec.energies
    return np.sort(np.asarray(spec, dtype=float))


def learning_rate_interval(spec) -> RateInterval:
    """(0, 1/(E_max + E_0)) when E_max + E_0 > 0, else (0, inf).

    Case tags: ``case1`` all energies >= 0, ``case2`` all <= 0, ``case3a``
    mixed signs with E_max + E_0 <= 0, ``case3b`` mixed with E_max + E_0 > 0.
    A degenerate ground level is flagged and the same formula applied.
    """
    e = _energies(spec)
    e0, emax = float(e[0]), float(e[-1])
    total = emax + e0
    if e0 >= 0:
        tag = "case1"
    elif emax <= 0:
        tag = "case2"
    else:
        tag = "case3a" if total <= 0 else "case3b"
    upper = 1.0 / total if total > 0 else math.inf
    degenerate = bool(len(e) > 1 and e[1] - e0 <= DEGENERACY_TOL)
    return RateInterval(0.0, upper, tag, degenerate)


def shift_analysis(spec, tau: float) -> RateInterval:
    """Interval for H + tau I."""
    return learning_rate_interval(_energies(spec) + tau)


def rate_from_precision(epsilon: float) -> float:
    """mu = sqrt(epsilon) / 2, so that the time step 2 mu equals sqrt(epsilon)."""
    if not epsilon > 0:
        raise ValueError(f"precision must be positive, got {epsilon}")
    return math.sqrt(epsilon) / 2


def time_step(mu: float) -> float:
    return 2 * mu


def ite_first_order(h: PauliHamiltonian, dt: float) -> np.ndarray:
    """I - dt H, the first-order imaginary-time step (equal to G at mu = dt/2)."""
    return np.eye(1 << h.n) - dt * dense_matrix(h)


def closed_form_probability(lambdas, overlaps, n_y: float, steps: int = 1):
    """Post-selection probabilities from the eigen-expansion of the state.

    ``lambdas`` are the signed or absolute eigenvalues of G and ``overlaps``
    the coefficients c_i of the current state. Returns ``(probs, coeffs)``
    with probs[s] = P(s+1) and coeffs[s] the coefficients after step s+1.
    """
    lam = np.asarray(lambdas, dtype=float)
    c = np.asarray(overlaps, dtype=complex)
    if not math.isclose(float(np.sum(np.abs(c) ** 2)), 1.0, abs_tol=1e-9):
        raise ValueError("overlaps must have unit 2-norm")
    probs = np.empty(steps)
    coeffs = np.empty((steps, c.size), dtype=complex)
    for s in range(steps):
        mass = float(np.sum(lam**2 * np.abs(c) ** 2))
        probs[s] = mass / n_y**2
        c = lam * c / math.sqrt(mass)
        coeffs[s] = c
    return probs, coeffs


def monotonicity_gap(lambdas, overlaps) -> float:
    """sum |l|^4 |c|^2 - (sum |l|^2 |c|^2)^2, non-negative by Cauchy-Schwarz."""
    l2 = np.abs(np.asarray(lambdas, dtype=float)) ** 2
    c2 = np.abs(np.asarray(overlaps)) ** 2
    return float(np.sum(l2**2 * c2) - np.sum(l2 * c2) ** 2)


def fqe_probability_comparison(g: GradientLcu, state: StateVector):
    """(P, P_tilde, P - P_tilde) for one post-selected step from ``state``."""
    norm2 = float(np.sum(np.abs(g.apply(state.amplitudes)) ** 2))
    w = g.weights
    p = norm2 / g.normalizer**2
    p_tilde = norm2 / (w.size * float(np.sum(w * w)))
    return p, p_tilde, p - p_tilde


@dataclass(frozen=True)
class GateCost:
    t_total: float
    fqe_depth: float
    qgd_depth: float
    degenerate: bool


def gate_cost_estimate(l: int, K: int, k_tilde: int, d1: float = 0.0, c: float = 1.0) -> GateCost:
    """T_total = c l (K+1) k_tilde**2, with c = 1 as an asymptotic-count convention.

    ``d1`` is the ancilla-preparation depth; the block unitary depth is taken
    as T_total, giving FQE depth d1 + T_total against 2 d1 + T_total here.
    """
    if l < 0 or K < 0 or k_tilde < 0:
        raise ValueError("gate-cost inputs must be non-negative")
    t = c * l * (K + 1) * k_tilde**2
    return GateCost(t, d1 + t, 2 * d1 + t, k_tilde == 0)


def controlled_branch_unitary(pattern: int, k_tilde: int, letters: str) -> np.ndarray:
    """|pattern>-controlled Pauli, built directly with mixed control values."""
    n = len(letters)
    values = [(pattern >> (k_tilde - 1 - q)) & 1 for q in range(k_tilde)]
    gate = mc_pauli(range(k_tilde), values, range(k_tilde, k_tilde + n), letters)
    return gate_unitary([gate], k_tilde + n)


def sigma_x_lowering(pattern: int, k_tilde: int, letters: str) -> np.ndarray:
    """Same gate as NOTs on the zero bits of ``pattern`` around an all-ones control."""
    n = len(letters)
    flips = [GateOp("x", (q,)) for q in range(k_tilde) if not (pattern >> (k_tilde - 1 - q)) & 1]
    core = mc_pauli(range(k_tilde), [1] * k_tilde, range(k_tilde, k_tilde + n), letters)
    return gate_unitary([*flips, core, *flips], k_tilde + n)
