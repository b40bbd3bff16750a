"""Indistinguishable-probe (bosonic) states: N0 and NOON interferometry.

Occupation-number representation with a hard photon-number cutoff.  All
generators used here are diagonal in the number basis, so evolution is a
phase mask; no ladder-operator exponentials are needed.  Two-mode states live
in the fixed-total-photon subspace n_a + n_b = N (dimension N+1), indexed by
the photon count of mode a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .linalg import as_vector
from .simulate import coincidence_probability, evolve_parallel_entangled
from .states import Generator, ghz_state


@dataclass(frozen=True, eq=False)
class FockVector:
    """State in a truncated Fock space; amplitudes indexed by occupation.

    modes=1: amplitudes[k] is the weight of |k photons>, k = 0..cutoff.
    modes=2: amplitudes[k] is the weight of |k, cutoff-k> in the
    fixed-total-photon subspace.
    """

    modes: int
    cutoff: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise ValueError("modes must be 1 or 2")
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        amp = as_vector(self.amplitudes)
        if amp.size != self.cutoff + 1:
            raise ValueError("amplitude count must be cutoff + 1")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError("state must be normalized within 1e-12")
        amp = amp.copy()
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)


def n0_state(n: int) -> FockVector:
    """Single-mode (|vacuum> + |n>)/sqrt(2)."""
    amp = np.zeros(n + 1, dtype=np.complex128)
    amp[0] = amp[n] = 1 / math.sqrt(2)
    return FockVector(modes=1, cutoff=n, amplitudes=amp)


def evolve_single_mode(state: FockVector, phi: float) -> FockVector:
    """Number-operator evolution: amplitude of |k> picks up e^{i k phi}."""
    if state.modes != 1:
        raise ValueError("expected a single-mode state")
    phases = np.exp(1j * phi * np.arange(state.cutoff + 1))
    return FockVector(1, state.cutoff, state.amplitudes * phases)


def noon_state(n: int) -> FockVector:
    """Two-mode (|n, vacuum> + |vacuum, n>)/sqrt(2) in the n-photon subspace."""
    amp = np.zeros(n + 1, dtype=np.complex128)
    amp[n] = amp[0] = 1 / math.sqrt(2)
    return FockVector(modes=2, cutoff=n, amplitudes=amp)


def evolve_two_mode(state: FockVector, phi: float) -> FockVector:
    """Photon-number-difference evolution: |k, n-k> picks up e^{i (2k - n) phi}."""
    if state.modes != 2:
        raise ValueError("expected a two-mode state")
    n = state.cutoff
    phases = np.exp(1j * phi * (2 * np.arange(n + 1) - n))
    return FockVector(2, n, state.amplitudes * phases)


def fringe(state: FockVector, phi: float) -> float:
    """Coincidence probability |<psi_0|psi_phi>|^2 of the evolved state."""
    evolve = evolve_single_mode if state.modes == 1 else evolve_two_mode
    return coincidence_probability(evolve(state, phi).amplitudes, state.amplitudes)


@dataclass(frozen=True)
class SymmetrizationMap:
    """Correspondence between the n-qubit GHZ-relevant subspace and Fock states.

    pairs lists (qubit register basis index, single-mode occupation,
    (mode-a, mode-b) occupations): the all-minimum product state symmetrizes
    to the vacuum / |vacuum, n>, the all-maximum one to |n> / |n, vacuum>.
    The map is an isometry on the two-dimensional subspace it covers.
    """

    n: int
    direction: str
    pairs: tuple[tuple[int, int, tuple[int, int]], ...]

    def qubit_indices(self) -> tuple[int, int]:
        return self.pairs[0][0], self.pairs[1][0]

    def apply(self, state, modes: int = 1):
        """Carry a state across the correspondence.

        qubit_to_fock expects a 2^n vector supported on the GHZ subspace and
        returns a FockVector; fock_to_qubit is the inverse.
        """
        lo_idx, hi_idx = self.qubit_indices()
        if self.direction == "qubit_to_fock":
            v = as_vector(state)
            if v.size != 2**self.n:
                raise ValueError("expected a 2^n qubit register state")
            support = np.zeros(v.size, dtype=bool)
            support[[lo_idx, hi_idx]] = True
            if float(np.max(np.abs(v[~support]), initial=0.0)) > 1e-12:
                raise ValueError("state has weight outside the GHZ subspace")
            amp = np.zeros(self.n + 1, dtype=np.complex128)
            if modes == 1:
                amp[0], amp[self.n] = v[lo_idx], v[hi_idx]
            else:
                # minimum eigenstate -> |vacuum, n> (mode-a count 0)
                amp[0], amp[self.n] = v[lo_idx], v[hi_idx]
            return FockVector(modes, self.n, amp)
        if self.direction == "fock_to_qubit":
            if not isinstance(state, FockVector):
                raise ValueError("expected a FockVector")
            amp = state.amplitudes
            interior = amp[1:-1]
            if interior.size and float(np.max(np.abs(interior))) > 1e-12:
                raise ValueError("state has weight outside the extreme occupations")
            v = np.zeros(2**self.n, dtype=np.complex128)
            v[lo_idx], v[hi_idx] = amp[0], amp[self.n]
            return v
        raise ValueError(f"unknown direction {self.direction!r}")


def symmetrization_map(n: int, direction: str = "qubit_to_fock") -> SymmetrizationMap:
    """Identify product extreme eigenstates with their symmetrized Fock images."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if direction not in ("qubit_to_fock", "fock_to_qubit"):
        raise ValueError(f"unknown direction {direction!r}")
    lo_idx = 0
    hi_idx = 2**n - 1
    pairs = (
        (lo_idx, 0, (0, n)),   # |0>^n  <->  vacuum  <->  |vacuum, n>
        (hi_idx, n, (n, 0)),   # |1>^n  <->  |n>     <->  |n, vacuum>
    )
    return SymmetrizationMap(n=n, direction=direction, pairs=pairs)


def n0_equivalence_certificate(n: int, grid_points: int = 100) -> float:
    """Max deviation between the N0 fringe and the qubit GHZ fringe.

    Both are cos^2(n phi / 2); the comparison runs both simulations on a
    shared grid and returns the largest absolute probability difference.
    """
    if not 1 <= n <= 12:
        raise ValueError("n must lie in 1..12")
    h = Generator.qubit()
    state = n0_state(n)
    ghz = ghz_state(n)
    worst = 0.0
    for phi in np.linspace(0.0, math.pi, grid_points):
        p_fock = fringe(state, phi)
        final = evolve_parallel_entangled(h, phi, n, 0.0)
        p_qubit = coincidence_probability(final, ghz)
        worst = max(worst, abs(p_fock - p_qubit))
    return worst


def noon_equivalence_certificate(n: int, grid_points: int = 100) -> float:
    """Max deviation between the NOON fringe and the rescaled qubit fringe.

    The two-mode number-difference generator has eigenvalue gap 2n on the NOON
    pair where the qubit register has gap n, so the NOON fringe at phi is
    compared against the qubit entangled-parallel fringe at 2 phi.
    """
    if not 1 <= n <= 12:
        raise ValueError("n must lie in 1..12")
    h = Generator.qubit()
    state = noon_state(n)
    ghz = ghz_state(n)
    worst = 0.0
    for phi in np.linspace(0.0, math.pi, grid_points):
        p_fock = fringe(state, phi)
        final = evolve_parallel_entangled(h, 2 * phi, n, 0.0)
        p_qubit = coincidence_probability(final, ghz)
        worst = max(worst, abs(p_fock - p_qubit))
    return worst


def noon_fringe_zeros(n: int, count: int) -> list[float]:
    """First `count` zeros of the NOON fringe, located by root bracketing.

    The fringe is cos^2(n phi); roots of the overlap amplitude (which changes
    sign) sit at phi = pi (2k + 1) / (2n).
    """
    if n < 1 or count < 1:
        raise ValueError("n and count must be >= 1")
    state = noon_state(n)

    def overlap(phi: float) -> float:
        return float(np.real(np.vdot(state.amplitudes, evolve_two_mode(state, phi).amplitudes)))

    zeros = []
    for k in range(count):
        center = math.pi * (2 * k + 1) / (2 * n)
        half = math.pi / (4 * n)
        zeros.append(float(optimize.brentq(overlap, center - half, center + half, xtol=1e-12)))
    return zeros
