"""Certificates that parallel entangled strategies reduce to sequential ones.

The central construction: evolve a GHZ-type state by one phase box per probe,
measure every probe but the first in the (|min> +- |max>)/sqrt(2) basis, and
check that each measurement branch leaves probe 1 in the state a sequential
strategy would have produced, up to a global phase and a known +- sign.  The
same machinery certifies the classical-correlation counterexamples, the noise
conversion with its unitality condition, the characterization of useful
entanglement, and the generalized W e^{i phi H} V boxes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel
from .information import cfi_binary
from .linalg import (
    ATOL_IDENTITY,
    apply_on_factor,
    as_matrix,
    fidelity_up_to_phase,
    is_antidiagonal,
    is_diagonal,
    is_unitary,
    normalized,
    partial_trace,
    trace_distance,
    vec,
)
from .states import Generator, PAULI_X, classical_corr_state, ghz_like, plus_minus_states, u_phi

MAX_PROBES = 12  # branch enumeration is exhaustive; 2^(N-1) branches


@dataclass(frozen=True)
class BranchRecord:
    """One measurement branch: outcome string over {+,-}, its probability,
    and the fidelity of the conditional probe-1 state to the sequential
    reference."""

    outcome: str
    probability: float
    fidelity: float


@dataclass(frozen=True)
class ConversionCertificate:
    n_probes: int
    records: tuple[BranchRecord, ...]
    min_fidelity: float
    max_prob_error: float

    @property
    def probability_sum(self) -> float:
        return float(sum(r.probability for r in self.records))


def _branch_amplitudes(state: np.ndarray, h: Generator, n: int) -> np.ndarray:
    """Rotate probes 2..n into the +- basis and return the amplitude tensor.

    Output shape (d, 2, ..., 2): axis 0 is probe 1, axis j >= 1 indexes the
    {+,-} outcome of probe j+1.  Slicing a full outcome assignment yields the
    unnormalized conditional probe-1 vector.
    """
    plus, minus = plus_minus_states(h)
    proj = np.stack([plus.conj(), minus.conj()])
    t = state.reshape((h.dim,) * n)
    for axis in range(1, n):
        t = np.moveaxis(np.tensordot(proj, t, axes=([1], [axis])), 0, axis)
    return t


def _certificate(evolved: np.ndarray, h: Generator, n: int,
                 ref_plus: np.ndarray, ref_minus: np.ndarray) -> ConversionCertificate:
    """Enumerate every +- branch of probes 2..n and grade it against the
    sign-matched sequential reference state."""
    t = _branch_amplitudes(evolved, h, n)
    uniform = 0.5 ** (n - 1)
    records = []
    for outcome in itertools.product((0, 1), repeat=n - 1):
        amp = t[(slice(None),) + outcome]
        prob = float(np.real(np.vdot(amp, amp)))
        parity = sum(outcome) % 2
        ref = ref_minus if parity else ref_plus
        if prob < 1e-15:
            fid = 0.0
        else:
            fid = fidelity_up_to_phase(amp / math.sqrt(prob), ref)
        label = "".join("+-"[o] for o in outcome)
        records.append(BranchRecord(outcome=label, probability=prob, fidelity=fid))
    return ConversionCertificate(
        n_probes=n,
        records=tuple(records),
        min_fidelity=min(r.fidelity for r in records),
        max_prob_error=max(abs(r.probability - uniform) for r in records),
    )


def convert_general_n(h: Generator, phis, lam: float = 0.0) -> ConversionCertificate:
    """Certify the parallel-to-sequential conversion for N probes.

    Evolves (|min>^N + e^{i lam} |max>^N)/sqrt(2) by one phase box per probe
    (phase phis[j] on probe j), measures probes 2..N in the +- basis, and
    compares every one of the 2^(N-1) conditional probe-1 states against
    e^{i (sum phis) H} (|min> +- e^{i lam} |max>)/sqrt(2), the sign being the
    parity of - outcomes.  All branches should be uniform with probability
    2^-(N-1) and fidelity 1 up to roundoff.
    """
    phis = [float(p) for p in phis]
    n = len(phis)
    if n < 2:
        raise ValueError("need at least 2 probes for a conversion certificate")
    if n > MAX_PROBES:
        raise ValueError(f"branch enumeration capped at {MAX_PROBES} probes")
    state = ghz_like(h, n, lam)
    dims = (h.dim,) * n
    for j, phi in enumerate(phis):
        state = apply_on_factor(state, dims, j, u_phi(h, phi))
    u_total = u_phi(h, sum(phis))
    lo, hi = _extreme_states(h)
    base_plus = (lo + np.exp(1j * lam) * hi) / math.sqrt(2)
    base_minus = (lo - np.exp(1j * lam) * hi) / math.sqrt(2)
    return _certificate(state, h, n, u_total @ base_plus, u_total @ base_minus)


def convert_n2(h: Generator, phi: float, phi_prime: float) -> ConversionCertificate:
    """Two-probe special case: evolve the maximally correlated pair by
    U_phi (x) U_phi', measure probe 2 in the +- basis."""
    return convert_general_n(h, [phi, phi_prime], 0.0)


def _extreme_states(h: Generator) -> tuple[np.ndarray, np.ndarray]:
    lo = np.zeros(h.dim, dtype=np.complex128)
    hi = np.zeros(h.dim, dtype=np.complex128)
    lo[h.min_index] = 1.0
    hi[h.max_index] = 1.0
    return lo, hi


def counterexample(basis: str, phi: float) -> tuple[np.ndarray, float]:
    """Run the conversion on a state correlated in one basis only.

    Evolves the classical-correlation mixture by U_phi (x) U_phi, measures
    probe 2 in the +- basis, and averages the conditional probe-1 states over
    the outcome.  Returns (averaged state, trace distance to the same
    computation at phi = 0).  The average is the maximally mixed state for
    every phi (checked, deviation beyond 1e-12 raises): single-basis
    correlation carries no phase information once the measurement record is
    discarded.
    """
    h = Generator.qubit()

    def averaged(angle: float) -> np.ndarray:
        rho = classical_corr_state(basis)
        u2 = np.kron(u_phi(h, angle), u_phi(h, angle))
        rho = u2 @ rho @ u2.conj().T
        plus, minus = plus_minus_states(h)
        acc = np.zeros((4, 4), dtype=np.complex128)
        for o in (plus, minus):
            proj = np.kron(np.eye(2), np.outer(o, o.conj()))
            acc += proj @ rho @ proj
        return partial_trace(acc, [2, 2], keep=[0])

    avg = averaged(phi)
    deviation = float(np.max(np.abs(avg - np.eye(2) / 2)))
    if deviation > ATOL_IDENTITY:
        raise RuntimeError(f"averaged post-measurement state deviates from I/2 by {deviation}")
    return avg, trace_distance(avg, averaged(0.0))


def unaveraged_counterexample_fisher(basis: str, phi: float) -> float:
    """Fisher information of the counterexample when nothing is discarded.

    Keeps the full record: the classical preparation label (which of the two
    equally weighted pure components was prepared), the probe-2 +- outcome and
    the probe-1 +- outcome.  Probability derivatives are exact (d/dphi of each
    phase box is i H times the box).  The result equals the N=2
    classical-parallel value 2 * cfi_binary(1, phi) for every phi; a mismatch
    beyond 1e-9 raises.
    """
    if basis != "hadamard":
        raise ValueError("the record-keeping counterexample is defined for the hadamard basis")
    h = Generator.qubit()
    plus, minus = plus_minus_states(h)
    # equally weighted pure components of the hadamard-correlated mixture
    comp_id = normalized(vec(np.eye(2)))
    comp_x = normalized(vec(PAULI_X))
    u = u_phi(h, phi)
    du = 1j * np.diag(h.eigenvalues) @ u
    uu = np.kron(u, u)
    duu = np.kron(du, u) + np.kron(u, du)

    fisher = 0.0
    for comp in (comp_id, comp_x):
        psi = uu @ comp
        dpsi = duu @ comp
        for o2 in (plus, minus):
            for o1 in (plus, minus):
                out = np.kron(o1, o2)
                amp = np.vdot(out, psi)
                damp = np.vdot(out, dpsi)
                p = 0.5 * abs(amp) ** 2
                dp = 0.5 * 2.0 * np.real(np.conj(amp) * damp)
                if p < 1e-14:
                    if abs(dp) > 1e-7:
                        raise RuntimeError("vanishing outcome with non-vanishing derivative")
                    continue
                fisher += dp * dp / p
    reference = 2.0 * cfi_binary(1, phi)
    if abs(fisher - reference) > 1e-9:
        raise RuntimeError(
            f"record-keeping Fisher information {fisher} does not match the "
            f"classical-parallel value {reference}"
        )
    return float(fisher)


def noise_conversion_residual(cha: KrausChannel, chb: KrausChannel) -> float:
    """Residual of the two-probe noise conversion identity.

    sum_{jk} (A_k (x) B_j) |1><1| (A_k (x) B_j)^dag must equal
    sum_{jk} (A_k B_j^T (x) 1) |1><1| (A_k B_j^T (x) 1)^dag, where |1> is the
    unnormalized vectorized identity.  Holds for every channel pair.
    """
    if cha.dim != chb.dim:
        raise ValueError("channels must act on equal dimensions")
    d = cha.dim
    idv = vec(np.eye(d))
    eye = np.eye(d)
    lhs = np.zeros((d * d, d * d), dtype=np.complex128)
    rhs = np.zeros_like(lhs)
    for a in cha.ops:
        for b in chb.ops:
            u = np.kron(a, b) @ idv
            lhs += np.outer(u, u.conj())
            w = np.kron(a @ b.T, eye) @ idv
            rhs += np.outer(w, w.conj())
    return float(np.max(np.abs(lhs - rhs)))


def effective_sequential_channel(cha: KrausChannel, chb: KrausChannel) -> tuple[KrausChannel, bool]:
    """Convert two-probe noise into the single-probe family {A_k B_j^T}.

    Returns the effective channel on probe 1 and whether it is trace
    preserving, which holds exactly when the second channel is unital.  The
    conversion identity itself is verified on the way (it holds for all
    channel pairs); a residual above 1e-12 raises.
    """
    residual = noise_conversion_residual(cha, chb)
    if residual > ATOL_IDENTITY:
        raise RuntimeError(f"noise conversion identity violated: residual {residual}")
    ops = tuple(a @ b.T for a in cha.ops for b in chb.ops)
    effective = KrausChannel(ops)
    return effective, effective.is_trace_preserving()


def noisy_conversion_valid_beyond_n2(cha: KrausChannel, chb: KrausChannel) -> bool:
    """Whether the conversion survives induction past two probes.

    Requires every product A_k (x) B_j to be diagonal or anti-diagonal, so the
    two-level subspace stays invariant under the noisy evolution.
    """
    if cha.dim != 2 or chb.dim != 2:
        raise ValueError("the induction predicate is defined for qubit channels")
    for a in cha.ops:
        for b in chb.ops:
            prod = np.kron(a, b)
            if not (is_diagonal(prod) or is_antidiagonal(prod)):
                return False
    return True


def useful_entanglement_check(e, h: Generator) -> tuple[bool, float | None]:
    """Decide whether a 2x2 seed operator yields a working entangled strategy.

    Samples a 50-point phase grid and accepts iff e^{i phi H} E e^{i phi H}
    applied to |+-> matches e^{2 i phi H} (|0> +- e^{i lambda} |1>)/sqrt(2) up
    to a global phase for one phi-independent lambda, returned as the second
    element.  Exactly the operators proportional to diag(c, c e^{i lambda})
    pass; global scale is quotiented out beforehand.
    """
    e = as_matrix(e)
    if e.shape != (2, 2) or h.dim != 2:
        raise ValueError("useful_entanglement_check is defined for 2x2 operators")
    smax = float(np.max(np.linalg.svd(e, compute_uv=False)))
    if smax == 0.0:
        return False, None
    e = e / smax
    c0 = e[h.min_index, h.min_index]
    c1 = e[h.max_index, h.max_index]
    if abs(c0) < 1e-12 or abs(c1) < 1e-12:
        return False, None
    lam_hat = float(np.angle(c1 / c0))
    lo, hi = _extreme_states(h)
    targets = [
        normalized(lo + sign * np.exp(1j * lam_hat) * hi) for sign in (1.0, -1.0)
    ]
    plus, minus = plus_minus_states(h)
    for phi in np.linspace(0.0, 2 * math.pi, 50, endpoint=False):
        u = u_phi(h, phi)
        u2 = u @ u
        for start, target in zip((plus, minus), targets):
            v = u @ e @ u @ start
            nv = float(np.linalg.norm(v))
            if nv < 1e-12:
                return False, None
            if fidelity_up_to_phase(v / nv, u2 @ target) < 1.0 - 1e-12:
                return False, None
    return True, lam_hat


def generalized_strategy_certificate(w, v, h: Generator, phi: float, n: int) -> ConversionCertificate:
    """Certify the parallel strategy for generalized boxes U' = W e^{i phi H} V.

    Naive iteration of U' does not accumulate phase in general, but the
    per-probe operator M = W^dag U' V^dag does.  Applies M^{(x) n} to the
    GHZ-type state, runs the +- measurement cascade, and grades conditionals
    against M^n |+-> (equal to e^{i n phi H} |+->).
    """
    w = as_matrix(w)
    v = as_matrix(v)
    if not (is_unitary(w) and is_unitary(v)):
        raise ValueError("w and v must be unitary")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_PROBES:
        raise ValueError(f"branch enumeration capped at {MAX_PROBES} probes")
    u_prime = w @ u_phi(h, phi) @ v
    m = w.conj().T @ u_prime @ v.conj().T
    state = ghz_like(h, n, 0.0)
    dims = (h.dim,) * n
    for k in range(n):
        state = apply_on_factor(state, dims, k, m)
    m_n = np.linalg.matrix_power(m, n)
    plus, minus = plus_minus_states(h)
    if n == 1:
        prob = 1.0
        fid = fidelity_up_to_phase(normalized(state), normalized(m_n @ plus))
        rec = BranchRecord(outcome="", probability=prob, fidelity=fid)
        return ConversionCertificate(1, (rec,), fid, 0.0)
    return _certificate(state, h, n, normalized(m_n @ plus), normalized(m_n @ minus))
