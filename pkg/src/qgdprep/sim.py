"""Exact statevector and density-matrix simulation.

Register convention: qubit 0 is the most significant bit, and when an
ancilla register is present it occupies the leading qubits, so a joint basis
index is ``k * 2**n + b`` for ancilla value k and work value b.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .pauli import GradientLcu, PauliHamiltonian, pauli_masks

PROBABILITY_FLOOR = 1e-14
NORM_TOL = 1e-10


class PostSelectionError(RuntimeError):
    """Post-selection probability fell below the floor; the run has diverged."""


def _num_qubits(dim: int) -> int:
    m = dim.bit_length() - 1
    if dim != 1 << m:
        raise ValueError(f"dimension {dim} is not a power of two")
    return m


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        _num_qubits(amps.size)
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(amps / np.linalg.norm(amps))

    @classmethod
    def zero(cls, m: int) -> StateVector:
        amps = np.zeros(1 << m, dtype=complex)
        amps[0] = 1
        return cls(amps)

    @property
    def m(self) -> int:
        return _num_qubits(self.amplitudes.size)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def kron(self, other: StateVector) -> StateVector:
        return StateVector(np.kron(self.amplitudes, other.amplitudes))

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        _num_qubits(rho.shape[0])
        if abs(np.trace(rho) - 1) > NORM_TOL:
            raise ValueError(f"density matrix trace is {np.trace(rho)}")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > NORM_TOL:
            raise ValueError("density matrix is not Hermitian")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @classmethod
    def maximally_mixed(cls, m: int) -> DensityMatrix:
        return cls(np.eye(1 << m, dtype=complex) / (1 << m))

    @property
    def m(self) -> int:
        return _num_qubits(self.entries.shape[0])

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def purity(self) -> float:
        return float(np.real(np.vdot(self.entries, self.entries)))

    def kron(self, other: DensityMatrix) -> DensityMatrix:
        return DensityMatrix(np.kron(self.entries, other.entries))

    def is_valid(self, tol: float = NORM_TOL) -> bool:
        rho = self.entries
        herm = np.max(np.abs(rho - rho.conj().T), initial=0.0) <= tol
        return bool(herm and abs(np.trace(rho) - 1) <= tol
                    and np.linalg.eigvalsh(rho).min() >= -tol)


def _hermitian(rho):
    return (rho + rho.conj().T) / 2


def _conjugate(rho, op):
    """op rho op^dagger for an array-level linear map ``op`` acting on axis 0."""
    a = op(rho)
    return _hermitian(op(a.conj().T).conj().T)


# ---------------------------------------------------------------------------
# gates


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_FIXED = {"x": _X, "y": _Y, "z": _Z}


def ry_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rx_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


@dataclass(frozen=True)
class GateOp:
    """One gate. ``kind`` is ry, rx, x, y, z, cnot, cz, cry or mcpauli.

    Two-qubit kinds take ``controls=(c,)`` and ``targets=(t,)``. ``mcpauli``
    applies ``letters`` to ``targets`` when the controls read ``control_values``.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    angle: float | None = None
    control_values: tuple[int, ...] | None = None
    letters: str | None = None

    def __post_init__(self):
        qubits = (*self.controls, *self.targets)
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"gate qubits must be distinct, got {qubits}")
        if self.kind in ("ry", "rx") and self.angle is None:
            raise ValueError(f"{self.kind} needs an angle")
        if self.kind == "mcpauli":
            if self.letters is None or len(self.letters) != len(self.targets):
                raise ValueError("mcpauli needs one letter per target")
            if self.control_values is not None and len(self.control_values) != len(self.controls):
                raise ValueError("control_values must match controls")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.controls, *self.targets)


def ry(q, angle):
    return GateOp("ry", (q,), angle=angle)


def rx(q, angle):
    return GateOp("rx", (q,), angle=angle)


def cnot(control, target):
    return GateOp("cnot", (target,), (control,))


def cz(a, b):
    return GateOp("cz", (b,), (a,))


def cry(control, target, angle):
    return GateOp("cry", (target,), (control,), angle=angle)


def mc_pauli(controls, control_values, targets, letters):
    return GateOp("mcpauli", tuple(targets), tuple(controls), control_values=tuple(control_values),
                  letters=letters)


def _gate_array_op(g: GateOp, m: int):
    for q in g.qubits:
        if not 0 <= q < m:
            raise IndexError(f"qubit {q} out of range for {m}-qubit register")

    def bit(q):
        return 1 << (m - 1 - q)

    if g.kind in ("ry", "rx", "x", "y", "z"):
        u = {"ry": ry_matrix, "rx": rx_matrix}[g.kind](g.angle) if g.kind in ("ry", "rx") else _FIXED[g.kind]
        return lambda arr: kernels.gate_1q(arr, u, g.targets[0], m)
    if g.kind in ("cnot", "cz", "cry"):
        u = {"cnot": _X, "cz": _Z}.get(g.kind)
        if u is None:
            u = ry_matrix(g.angle)
        c = bit(g.controls[0])
        return lambda arr: kernels.controlled_1q(arr, u, c, c, g.targets[0], m)
    if g.kind == "mcpauli":
        full = ["I"] * m
        for q, ch in zip(g.targets, g.letters):
            full[q] = ch
        x, z, ny = pauli_masks("".join(full))
        values = g.control_values if g.control_values is not None else (1,) * len(g.controls)
        mask = sum(bit(q) for q in g.controls)
        val = sum(bit(q) for q, v in zip(g.controls, values) if v)
        return lambda arr: kernels.controlled_pauli_apply(arr, x, z, ny, mask, val)
    raise ValueError(f"unknown gate kind {g.kind!r}")


def apply_gate(state, g: GateOp):
    op = _gate_array_op(g, state.m)
    if isinstance(state, StateVector):
        return StateVector.normalized(op(state.amplitudes[:, None].copy())[:, 0])
    return DensityMatrix(_conjugate(state.entries.copy(), op))


def apply_circuit(state, gates):
    for g in gates:
        state = apply_gate(state, g)
    return state


def gate_unitary(gates, m: int) -> np.ndarray:
    """Dense unitary of a gate list, built column by column."""
    arr = np.eye(1 << m, dtype=complex)
    for g in gates:
        arr = _gate_array_op(g, m)(arr)
    return arr


# ---------------------------------------------------------------------------
# LCU block unitary and post-selection


def _block_op(g: GradientLcu, k_tilde: int, n: int):
    masks = [(b.sign, pauli_masks(b.letters)) for b in g.branches]

    def op(arr):
        ncol = arr.shape[1]
        view = arr.reshape(1 << k_tilde, 1 << n, ncol)
        out = np.empty_like(view)
        for k, (sign, (x, z, ny)) in enumerate(masks):
            out[k] = sign * kernels.pauli_apply(np.ascontiguousarray(view[k]), x, z, ny)
        return out.reshape(arr.shape)

    return op


def apply_block_unitary(state, g: GradientLcu):
    """Apply sum_k |k><k| (x) s_k P_k with the ancilla as the leading register."""
    if state.m != g.k_tilde + g.n:
        raise ValueError(f"state has {state.m} qubits, LCU needs {g.k_tilde} + {g.n}")
    op = _block_op(g, g.k_tilde, g.n)
    if isinstance(state, StateVector):
        return StateVector.normalized(op(state.amplitudes[:, None].copy())[:, 0])
    return DensityMatrix(_conjugate(state.entries.copy(), op))


def apply_register_unitary(state, u: np.ndarray, k_tilde: int):
    """Apply a dense 2**k_tilde unitary to the leading ``k_tilde`` qubits."""
    if state.m < k_tilde:
        raise ValueError(f"state has {state.m} qubits, fewer than {k_tilde}")
    rows = 1 << k_tilde

    def op(arr):
        ncol = arr.shape[1]
        view = arr.reshape(rows, -1)
        return (u @ view).reshape(-1, ncol)

    if isinstance(state, StateVector):
        return StateVector.normalized(op(state.amplitudes[:, None].copy())[:, 0])
    return DensityMatrix(_conjugate(state.entries.copy(), op))


def project_ancilla_zero(state, k_tilde: int, floor: float = PROBABILITY_FLOOR):
    """Measure the leading ``k_tilde`` qubits in |0...0>.

    Returns ``(probability, collapsed)`` where ``collapsed`` is the
    renormalized state of the remaining register.
    """
    if state.m < k_tilde:
        raise ValueError(f"state has {state.m} qubits, fewer than {k_tilde}")
    size = state.dim >> k_tilde
    if isinstance(state, StateVector):
        block = state.amplitudes[:size]
        prob = float(np.real(np.vdot(block, block)))
    else:
        block = state.entries[:size, :size]
        prob = float(np.real(np.trace(block)))
    if prob < floor:
        raise PostSelectionError(f"post-selection probability {prob:.3e} is below {floor:.0e}")
    prob = min(prob, 1.0)
    if isinstance(state, StateVector):
        return prob, StateVector.normalized(block)
    rho = _hermitian(block)
    return prob, DensityMatrix(rho / np.real(np.trace(rho)))


# ---------------------------------------------------------------------------
# metrics and channels


def expectation(state, h: PauliHamiltonian, imag_tol: float = 1e-8) -> float:
    if state.m != h.n:
        raise ValueError(f"state has {state.m} qubits, Hamiltonian has {h.n}")
    total = 0j
    for t in h.terms:
        x, z, ny = t.masks()
        if isinstance(state, StateVector):
            total += t.coefficient * kernels.pauli_expect(state.amplitudes, x, z, ny)
        else:
            total += t.coefficient * kernels.pauli_trace(state.entries, x, z, ny)
    if abs(total.imag) > imag_tol:
        raise ValueError(f"expectation has imaginary residue {total.imag:.3e}")
    return float(total.real)


def overlap_probability(a, b: StateVector) -> float:
    """|<a|b>|**2 for pure a, Tr(|b><b| rho) for mixed a."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    vec = b.amplitudes
    if isinstance(a, StateVector):
        return float(abs(np.vdot(a.amplitudes, vec)) ** 2)
    return float(np.real(np.vdot(vec, a.entries @ vec)))


def fidelity(a, b: StateVector) -> float:
    """sqrt(|<a|b>|**2) between pure states; Tr(|b><b| rho) when ``a`` is mixed."""
    p = min(max(overlap_probability(a, b), 0.0), 1.0)
    return math.sqrt(p) if isinstance(a, StateVector) else p


def depolarize(rho: DensityMatrix, beta: float) -> DensityMatrix:
    if not 0 <= beta <= 1:
        raise ValueError(f"depolarizing strength must lie in [0, 1], got {beta}")
    d = rho.dim
    return DensityMatrix((1 - beta) * rho.entries + beta * np.eye(d) / d)


def sample_distribution(state: StateVector, shots: int, seed: int | None = None) -> np.ndarray:
    """Empirical outcome frequencies; ``shots=0`` returns exact probabilities."""
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    if shots == 0:
        return probs
    if shots < 0:
        raise ValueError("shots must be non-negative")
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    return counts / shots
