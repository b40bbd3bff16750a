"""Shared test utilities: random quantum objects with seeded generators."""

import numpy as np

from metroq.channels import KrausChannel


def random_complex_matrix(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_state(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density_matrix(rng, d):
    g = random_complex_matrix(rng, d)
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_cptp_channel(rng, d, n_ops):
    """Random trace-preserving Kraus family: Ginibre blocks right-normalized."""
    gs = [random_complex_matrix(rng, d) for _ in range(n_ops)]
    s = sum(g.conj().T @ g for g in gs)
    w, v = np.linalg.eigh(s)
    s_inv_sqrt = v @ np.diag(1.0 / np.sqrt(w)) @ v.conj().T
    return KrausChannel(tuple(g @ s_inv_sqrt for g in gs))
