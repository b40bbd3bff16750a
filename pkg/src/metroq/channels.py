"""Kraus noise channels: constructors, application, structure predicates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import ATOL_PREDICATE, as_matrix, is_antidiagonal, is_diagonal
from .states import ID2, PAULI_X, PAULI_Y, PAULI_Z


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A finite Kraus family of equal-dimension square operators.

    Channels built by the public constructors are trace preserving
    (sum K^dag K = identity); derived families, e.g. the effective
    single-probe channel of a converted strategy, may not be, which is
    why completeness is a queried property rather than a constructor
    invariant.
    """

    ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.ops)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise ValueError("all Kraus operators must be square with equal dims")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def completeness_residual(self) -> float:
        """Max-abs entry of sum_k K^dag K - identity (0 for trace preserving)."""
        acc = sum(k.conj().T @ k for k in self.ops)
        return float(np.max(np.abs(acc - np.eye(self.dim))))

    def unital_residual(self) -> float:
        """Max-abs entry of sum_k K K^dag - identity (0 for unital)."""
        acc = sum(k @ k.conj().T for k in self.ops)
        return float(np.max(np.abs(acc - np.eye(self.dim))))

    def is_trace_preserving(self, atol: float = ATOL_PREDICATE) -> bool:
        return self.completeness_residual() < atol


def _trace_preserving(ops) -> KrausChannel:
    ch = KrausChannel(tuple(ops))
    if ch.completeness_residual() > 1e-12:
        raise ValueError("constructed channel is not trace preserving")
    return ch


def identity_channel(dim: int = 2) -> KrausChannel:
    return _trace_preserving([np.eye(dim, dtype=np.complex128)])


def dephasing(p: float) -> KrausChannel:
    """Phase-flip noise {sqrt(1-p) I, sqrt(p) Z}; unital, all operators diagonal."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return _trace_preserving([math.sqrt(1 - p) * ID2, math.sqrt(p) * PAULI_Z])


def bit_phase_flip(p: float) -> KrausChannel:
    """Bit flip with phase noise {sqrt(1-p) X, sqrt(p) Y}; unital, anti-diagonal."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return _trace_preserving([math.sqrt(1 - p) * PAULI_X, math.sqrt(p) * PAULI_Y])


def amplitude_damping(g: float) -> KrausChannel:
    """Decay toward |0>; the canonical non-unital channel."""
    if not 0.0 <= g <= 1.0:
        raise ValueError("g must lie in [0, 1]")
    k0 = np.diag([1.0, math.sqrt(1 - g)]).astype(np.complex128)
    k1 = np.zeros((2, 2), dtype=np.complex128)
    k1[0, 1] = math.sqrt(g)
    return _trace_preserving([k0, k1])


def apply_channel(rho, ch: KrausChannel, dims, k: int) -> np.ndarray:
    """Apply a channel to subsystem k of a multi-probe density matrix."""
    rho = as_matrix(rho)
    dims = list(dims)
    d_total = int(np.prod(dims))
    if rho.shape != (d_total, d_total):
        raise ValueError("rho shape does not match product of dims")
    if ch.dim != dims[k]:
        raise ValueError("channel dimension does not match subsystem k")
    pre = int(np.prod(dims[:k])) if k > 0 else 1
    post = int(np.prod(dims[k + 1:])) if k + 1 < len(dims) else 1
    t = rho.reshape(pre, dims[k], post, pre, dims[k], post)
    out = np.zeros_like(t)
    for op in ch.ops:
        out += np.einsum("ab,pbqrcs,dc->paqrds", op, t, op.conj())
    return out.reshape(d_total, d_total)


def is_unital(ch: KrausChannel, atol: float = ATOL_PREDICATE) -> bool:
    return ch.unital_residual() < atol


def is_diag_or_antidiag(ch: KrausChannel, atol: float = ATOL_PREDICATE) -> bool:
    """True when the Kraus family is structurally homogeneous: every operator
    diagonal, or every operator anti-diagonal.

    A mixed family (e.g. amplitude damping, whose two operators have different
    structure) returns False: only the homogeneous families keep the two-level
    subspace of the conversion argument invariant under all operator pairs.
    """
    return all(is_diagonal(k, atol) for k in ch.ops) or all(
        is_antidiagonal(k, atol) for k in ch.ops
    )
