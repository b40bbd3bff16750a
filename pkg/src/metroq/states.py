"""Generators, phase unitaries, probe states and strategy descriptions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .linalg import as_matrix, basis_state, is_unitary

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
ID2 = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class Generator:
    """Hermitian generator stored as its real diagonal in its own eigenbasis.

    min_index / max_index designate the extreme eigenvalues; the corresponding
    basis states play the role of the two levels every estimation strategy
    superposes.  A non-degenerate spread (min != max) is required.
    """

    eigenvalues: np.ndarray
    min_index: int
    max_index: int

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float).copy()
        if lam.ndim != 1 or lam.size < 2:
            raise ValueError("generator needs at least two eigenvalues")
        if not (0 <= self.min_index < lam.size and 0 <= self.max_index < lam.size):
            raise ValueError("min/max indices out of range")
        if self.min_index == self.max_index:
            raise ValueError("generator must have distinct min and max eigenstates")
        if lam[self.min_index] != lam.min() or lam[self.max_index] != lam.max():
            raise ValueError("designated indices do not hold the extreme eigenvalues")
        if lam[self.min_index] == lam[self.max_index]:
            raise ValueError("generator spread is degenerate")
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def gap(self) -> float:
        return float(self.eigenvalues[self.max_index] - self.eigenvalues[self.min_index])

    @staticmethod
    def qubit() -> "Generator":
        """Default two-level generator diag(0, 1)."""
        return Generator(np.array([0.0, 1.0]), 0, 1)


def u_phi(h: Generator, phi: float) -> np.ndarray:
    """Diagonal phase unitary with entries exp(i * phi * eigenvalue)."""
    return np.diag(np.exp(1j * phi * h.eigenvalues))


def plus_minus_states(h: Generator) -> tuple[np.ndarray, np.ndarray]:
    """Equal superpositions (|min> +- |max>)/sqrt(2) of the extreme eigenstates."""
    lo = basis_state(h.dim, h.min_index)
    hi = basis_state(h.dim, h.max_index)
    return (lo + hi) / math.sqrt(2), (lo - hi) / math.sqrt(2)


def ghz_like(h: Generator, n: int, lam: float = 0.0) -> np.ndarray:
    """Normalized (|min>^n + e^{i lam} |max>^n)/sqrt(2) on the n-probe register."""
    if n < 1:
        raise ValueError("need at least one probe")
    d = h.dim
    state = np.zeros(d**n, dtype=np.complex128)
    idx_min = int(np.ravel_multi_index((h.min_index,) * n, (d,) * n))
    idx_max = int(np.ravel_multi_index((h.max_index,) * n, (d,) * n))
    state[idx_min] = 1 / math.sqrt(2)
    state[idx_max] = np.exp(1j * lam) / math.sqrt(2)
    return state


def ghz_state(n: int, lam: float = 0.0) -> np.ndarray:
    """Qubit GHZ family (|0...0> + e^{i lam} |1...1>)/sqrt(2)."""
    return ghz_like(Generator.qubit(), n, lam)


def classical_corr_state(basis: str) -> np.ndarray:
    """Two-probe mixed state correlated in a single basis only.

    "computational" gives (|00><00| + |11><11|)/2, "hadamard" the analogue
    built from |++> and |-->.  Both are rank-2, unit-trace, and carry no
    correlation in the complementary basis.
    """
    if basis == "computational":
        a = np.kron(basis_state(2, 0), basis_state(2, 0))
        b = np.kron(basis_state(2, 1), basis_state(2, 1))
    elif basis == "hadamard":
        plus = (basis_state(2, 0) + basis_state(2, 1)) / math.sqrt(2)
        minus = (basis_state(2, 0) - basis_state(2, 1)) / math.sqrt(2)
        a = np.kron(plus, plus)
        b = np.kron(minus, minus)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    return (np.outer(a, a.conj()) + np.outer(b, b.conj())) / 2


class StrategyKind(str, Enum):
    SEQUENTIAL = "sequential"
    CLASSICAL_PARALLEL = "classical"
    ENTANGLED_PARALLEL = "entangled"
    GENERALIZED_ENTANGLED = "generalized"


@dataclass(frozen=True, eq=False)
class StrategySpec:
    """One estimation strategy: what is prepared, how many probes, which boxes."""

    kind: StrategyKind
    n_probes: int
    generator: Generator = field(default_factory=Generator.qubit)
    lam: float = 0.0
    w: np.ndarray | None = None
    v: np.ndarray | None = None

    def __post_init__(self):
        if self.n_probes < 1:
            raise ValueError("n_probes must be >= 1")
        if self.kind is StrategyKind.GENERALIZED_ENTANGLED:
            if self.w is None or self.v is None:
                raise ValueError("generalized strategy requires w and v")
        for name in ("w", "v"):
            m = getattr(self, name)
            if m is not None:
                m = as_matrix(m)
                if not is_unitary(m):
                    raise ValueError(f"{name} must be unitary")
                m.setflags(write=False)
                object.__setattr__(self, name, m)
