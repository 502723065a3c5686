"""Pauli strings, qubit Hamiltonians and the gradient-operator LCU.

Letter strings are read left to right as qubit 0, 1, ..., n-1, and qubit 0 is
the most significant bit of a basis index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels

PAULI_LETTERS = frozenset("IXYZ")
DENSE_LIMIT = 12


class HamiltonianFormatError(ValueError):
    pass


def pauli_masks(letters: str) -> tuple[int, int, int]:
    """Return ``(xmask, zmask, ny)`` so that P|b> = i**ny (-1)**|b & z| |b ^ x>."""
    n = len(letters)
    x = z = ny = 0
    for q, ch in enumerate(letters):
        bit = 1 << (n - 1 - q)
        if ch == "X":
            x |= bit
        elif ch == "Z":
            z |= bit
        elif ch == "Y":
            x |= bit
            z |= bit
            ny += 1
    return x, z, ny


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    letters: str

    def __post_init__(self):
        if not set(self.letters) <= PAULI_LETTERS:
            raise ValueError(f"letters must be drawn from IXYZ, got {self.letters!r}")
        if not math.isfinite(self.coefficient):
            raise ValueError(f"coefficient must be finite, got {self.coefficient}")

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return set(self.letters) <= {"I"}

    @property
    def locality(self) -> int:
        return sum(ch != "I" for ch in self.letters)

    def masks(self) -> tuple[int, int, int]:
        return pauli_masks(self.letters)


@dataclass(frozen=True)
class PauliHamiltonian:
    """Real-weighted sum of Pauli strings with unique letter strings."""

    terms: tuple[PauliTerm, ...]
    n: int

    def __post_init__(self):
        seen = set()
        for t in self.terms:
            if t.n != self.n:
                raise ValueError(f"term {t.letters!r} has {t.n} qubits, expected {self.n}")
            if t.letters in seen:
                raise ValueError(f"duplicate letter string {t.letters!r}; use from_terms to merge")
            seen.add(t.letters)

    @classmethod
    def from_terms(cls, terms, n: int | None = None) -> PauliHamiltonian:
        """Merge equal letter strings (first-occurrence order) and drop zeros."""
        merged: dict[str, float] = {}
        for t in terms:
            if not isinstance(t, PauliTerm):
                t = PauliTerm(float(t[0]), str(t[1]))
            if n is None:
                n = t.n
            elif t.n != n:
                raise ValueError(f"inconsistent string lengths: {t.n} vs {n}")
            merged[t.letters] = merged.get(t.letters, 0.0) + t.coefficient
        if n is None:
            raise ValueError("cannot infer qubit count from an empty term list")
        kept = tuple(PauliTerm(c, s) for s, c in merged.items() if c != 0.0)
        return cls(kept, n)

    def __len__(self):
        return len(self.terms)

    @property
    def identity_coefficient(self) -> float:
        return sum(t.coefficient for t in self.terms if t.is_identity)

    @property
    def locality(self) -> int:
        return max((t.locality for t in self.terms), default=0)

    def shifted(self, tau: float) -> PauliHamiltonian:
        return PauliHamiltonian.from_terms([*self.terms, PauliTerm(tau, "I" * self.n)], self.n)


def parse_hamiltonian(text: str) -> PauliHamiltonian:
    """Parse ``<coefficient> <letters>`` lines; ``#`` starts a comment."""
    terms = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise HamiltonianFormatError(f"line {lineno}: expected '<coefficient> <letters>', got {raw!r}")
        try:
            coeff = float(fields[0])
        except ValueError:
            raise HamiltonianFormatError(f"line {lineno}: malformed coefficient {fields[0]!r}") from None
        if not math.isfinite(coeff):
            raise HamiltonianFormatError(f"line {lineno}: coefficient must be finite")
        letters = fields[1].upper()
        bad = set(letters) - PAULI_LETTERS
        if bad:
            raise HamiltonianFormatError(f"line {lineno}: letters outside IXYZ: {''.join(sorted(bad))}")
        if n is None:
            n = len(letters)
        elif len(letters) != n:
            raise HamiltonianFormatError(f"line {lineno}: string length {len(letters)} differs from {n}")
        terms.append(PauliTerm(coeff, letters))
    if n is None:
        raise HamiltonianFormatError("no terms found")
    return PauliHamiltonian.from_terms(terms, n)


def format_hamiltonian(h: PauliHamiltonian) -> str:
    return "".join(f"{t.coefficient!r} {t.letters}\n" for t in h.terms)


def pauli_matrix(letters: str) -> np.ndarray:
    n = len(letters)
    if n > DENSE_LIMIT:
        raise ValueError(f"dense matrices are limited to {DENSE_LIMIT} qubits, got {n}")
    return kernels.pauli_apply(np.eye(1 << n, dtype=complex), *pauli_masks(letters))


def dense_matrix(h: PauliHamiltonian) -> np.ndarray:
    if h.n > DENSE_LIMIT:
        raise ValueError(f"dense matrices are limited to {DENSE_LIMIT} qubits, got {h.n}")
    out = np.zeros((1 << h.n, 1 << h.n), dtype=complex)
    for t in h.terms:
        out += t.coefficient * pauli_matrix(t.letters)
    return out


@dataclass(frozen=True)
class Branch:
    weight: float
    sign: int
    letters: str

    @property
    def is_identity(self) -> bool:
        return set(self.letters) <= {"I"}


@dataclass(frozen=True)
class GradientLcu:
    """G = I - 2 mu H written as sum_k weight_k * sign_k * P_k."""

    mu: float
    branches: tuple[Branch, ...]
    n: int
    k_tilde: int = field(init=False)

    def __post_init__(self):
        count = len(self.branches)
        if count == 0 or count & (count - 1):
            raise ValueError(f"branch count must be a power of two, got {count}")
        if any(b.weight <= 0 for b in self.branches):
            raise ValueError("branch weights must be positive")
        object.__setattr__(self, "k_tilde", count.bit_length() - 1)

    @property
    def weights(self) -> np.ndarray:
        return np.array([b.weight for b in self.branches])

    @property
    def signs(self) -> np.ndarray:
        return np.array([b.sign for b in self.branches])

    @property
    def normalizer(self) -> float:
        return math.fsum(b.weight for b in self.branches)

    @property
    def term_count(self) -> int:
        """K in G = sum_{k=0}^{K} y_k G_k."""
        return len(self.branches) - 1

    def dense(self) -> np.ndarray:
        out = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for b in self.branches:
            out += b.weight * b.sign * pauli_matrix(b.letters)
        return out

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """G applied to a state array of shape (2**n,) or (2**n, ncol)."""
        arr = np.asarray(vec, dtype=complex)
        flat = arr.reshape(arr.shape[0], -1)
        out = np.zeros_like(flat)
        for b in self.branches:
            out += b.weight * b.sign * kernels.pauli_apply(flat, *pauli_masks(b.letters))
        return out.reshape(arr.shape)


def _split_to_power_of_two(branches: list[Branch]) -> list[Branch]:
    while len(branches) & (len(branches) - 1):
        ids = [i for i, b in enumerate(branches) if b.is_identity] or range(len(branches))
        i = max(ids, key=lambda j: branches[j].weight)
        b = branches[i]
        half = Branch(b.weight / 2, b.sign, b.letters)
        branches[i:i + 1] = [half, half]
    return branches


def build_gradient_lcu(h: PauliHamiltonian, mu: float, identity_split=None,
                       identity_mode: str = "signed") -> GradientLcu:
    """Decompose G = I - 2 mu H into positively weighted signed Pauli branches.

    ``identity_mode="signed"`` keeps the unit identity of G as its own mass
    (split by ``identity_split``, which must sum to 1) and puts -2 mu h_id I
    in a separate signed branch. ``"merged"`` folds h_id into the identity
    mass 1 - 2 mu h_id, which must be positive and which the split must sum to.
    """
    if not mu > 0:
        raise ValueError(f"learning rate must be positive, got {mu}")
    if len(h) == 0:
        raise ValueError("empty Hamiltonian")
    if identity_mode not in ("signed", "merged"):
        raise ValueError(f"unknown identity_mode {identity_mode!r}")
    ident = "I" * h.n
    h_id = h.identity_coefficient
    mass = 1.0 if identity_mode == "signed" else 1.0 - 2 * mu * h_id
    if mass <= 0:
        raise ValueError(f"identity mass 1 - 2 mu h_id = {mass} is not positive; use identity_mode='signed'")
    if identity_split is None:
        split = [mass / 3] * 3
    else:
        split = [float(w) for w in identity_split]
        if any(not w > 0 for w in split):
            raise ValueError("identity split weights must be positive")
        if not math.isclose(math.fsum(split), mass, rel_tol=1e-9, abs_tol=1e-12):
            raise ValueError(f"identity split sums to {math.fsum(split)}, expected identity mass {mass}")
    branches = [Branch(w, 1, ident) for w in split]
    if identity_mode == "signed" and h_id != 0.0:
        branches.append(Branch(abs(2 * mu * h_id), -1 if h_id > 0 else 1, ident))
    for t in h.terms:
        if t.is_identity:
            continue
        weight = abs(2 * mu * t.coefficient)
        if weight > 0:
            branches.append(Branch(weight, -1 if t.coefficient > 0 else 1, t.letters))
    return GradientLcu(mu, tuple(_split_to_power_of_two(branches)), h.n)


def amplitude_vector(g: GradientLcu) -> np.ndarray:
    """Ancilla amplitudes sqrt(y_k / N_y)."""
    return np.sqrt(g.weights / g.normalizer)
