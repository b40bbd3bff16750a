"""Seeded Monte Carlo phase-estimation experiments over the estimation strategies.

Repetition streams come from the counter-based Philox generator; per-round
seeds are derived from the experiment seed through numpy's SeedSequence with
spawn_key=(N, round_index), so reports are pure functions of their config and
independent of any execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .information import crb, operating_phase, time_advantage
from .linalg import apply_on_factor, as_vector
from .states import Generator, StrategyKind, StrategySpec, ghz_like, plus_minus_states, u_phi


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Config for one scaling experiment; the report is a pure function of it.

    phi_true=None selects the per-N maximum-sensitivity operating point
    pi/(2N); an explicit value must keep N*phi_true inside (0, pi) for every
    N in n_values.
    """

    strategy: StrategySpec
    nu: int
    seed: int
    n_values: tuple[int, ...]
    rounds: int = 200
    phi_true: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if self.nu < 1 or self.rounds < 1:
            raise ValueError("nu and rounds must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ValueError("n_values must be positive integers")
        if self.phi_true is not None:
            for n in self.n_values:
                if not 0.0 < n * self.phi_true < math.pi:
                    raise ValueError("N * phi_true must lie in (0, pi) for every N")

    def phase_for(self, n: int) -> float:
        return self.phi_true if self.phi_true is not None else operating_phase(n)


@dataclass(frozen=True)
class ScalingRow:
    strategy: str
    n: int
    nu: int
    rounds: int
    empirical_rmse: float
    crb: float
    seed: int
    time_advantage: float


@dataclass(frozen=True)
class ScalingReport:
    strategy: str
    rows: tuple[ScalingRow, ...]
    fitted_slope: float
    slope_stderr: float
    seed: int


def evolve_sequential(h: Generator, phi: float, n: int, initial) -> np.ndarray:
    """Run one probe through n boxes: apply u_phi(h, phi) n times."""
    state = as_vector(initial)
    if state.size != h.dim:
        raise ValueError("initial state dimension does not match generator")
    u = u_phi(h, phi)
    for _ in range(n):
        state = u @ state
    return state


def evolve_parallel_entangled(h: Generator, phi: float, n: int, lam: float = 0.0) -> np.ndarray:
    """Apply the n-fold tensor-product unitary to the GHZ-type initial state.

    The unitary is applied factor by factor (a literal evaluation of
    u_phi^{tensor n}), not replaced by the analytic closed form, so the
    phase-accumulation claim is something tests can check rather than assume.
    """
    state = ghz_like(h, n, lam)
    u = u_phi(h, phi)
    dims = (h.dim,) * n
    for k in range(n):
        state = apply_on_factor(state, dims, k, u)
    return state


def coincidence_probability(final, initial) -> float:
    """Born probability |<initial|final>|^2 that the evolved state passes
    the projection back onto the initial one."""
    final = as_vector(final)
    initial = as_vector(initial)
    if final.size != initial.size:
        raise ValueError("state dimensions do not match")
    p = float(abs(np.vdot(initial, final)) ** 2)
    return min(max(p, 0.0), 1.0)


def strategy_success_probability(strategy: StrategySpec, phi: float) -> float:
    """Per-trial Bernoulli success probability of one repetition.

    For the classical-parallel strategy this is the single-probe (N=1)
    probability: its N probes are independent trials.
    """
    h = strategy.generator
    plus, _ = plus_minus_states(h)
    if strategy.kind is StrategyKind.SEQUENTIAL:
        final = evolve_sequential(h, phi, strategy.n_probes, plus)
        return coincidence_probability(final, plus)
    if strategy.kind is StrategyKind.CLASSICAL_PARALLEL:
        final = evolve_sequential(h, phi, 1, plus)
        return coincidence_probability(final, plus)
    if strategy.kind is StrategyKind.ENTANGLED_PARALLEL:
        initial = ghz_like(h, strategy.n_probes, strategy.lam)
        final = evolve_parallel_entangled(h, phi, strategy.n_probes, strategy.lam)
        return coincidence_probability(final, initial)
    # generalized: per-probe operator W^dag U'_phi V^dag applied in parallel
    m = strategy.w.conj().T @ (strategy.w @ u_phi(h, phi) @ strategy.v) @ strategy.v.conj().T
    initial = ghz_like(h, strategy.n_probes, strategy.lam)
    state = initial
    dims = (h.dim,) * strategy.n_probes
    for k in range(strategy.n_probes):
        state = apply_on_factor(state, dims, k, m)
    return coincidence_probability(state, initial)


def run_trials(strategy: StrategySpec, phi_true: float, nu: int, seed: int) -> int:
    """Draw the strategy's Bernoulli outcomes and return the success count.

    Sequential/entangled repetitions draw nu outcomes at the N-fold fringe;
    the classical-parallel strategy draws N*nu single-probe outcomes (recorded
    per probe), consuming the same N*nu box samplings per experiment.
    Deterministic for a fixed seed (Philox counter-based stream).
    """
    if nu < 1:
        raise ValueError("nu must be >= 1")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    p = strategy_success_probability(strategy, phi_true)
    rng = np.random.Generator(np.random.Philox(seed))
    if strategy.kind is StrategyKind.CLASSICAL_PARALLEL:
        per_probe = rng.random((strategy.n_probes, nu)) < p
        return int(per_probe.sum())
    return int((rng.random(nu) < p).sum())


def estimate_phase(k: int, nu: int, n: int) -> float:
    """Invert the empirical fringe: phi_hat = (2/n) arccos(sqrt(k/nu)).

    Clamped to the branch [0, pi/n] (k=nu gives 0, k=0 gives pi/n) and
    monotone decreasing in k.
    """
    if not 0 <= k <= nu:
        raise ValueError("k must lie in [0, nu]")
    if n < 1:
        raise ValueError("n must be >= 1")
    ratio = min(max(k / nu, 0.0), 1.0)
    return (2.0 / n) * math.acos(math.sqrt(ratio))


def derive_round_seed(seed: int, n: int, round_index: int) -> int:
    """Per-round child seed: SeedSequence(seed, spawn_key=(n, round_index))."""
    ss = np.random.SeedSequence(seed, spawn_key=(n, round_index))
    return int(ss.generate_state(1, np.uint64)[0])


def rmse_stderr(rmse: float, rounds: int) -> float:
    """Large-sample standard error of an RMSE estimated from `rounds` rounds."""
    return rmse / math.sqrt(2 * rounds)


def fit_loglog_slope(ns, rmses) -> tuple[float, float]:
    """Ordinary least squares slope of log(rmse) vs log(N), with standard error."""
    ns = np.asarray(ns, dtype=float)
    rmses = np.asarray(rmses, dtype=float)
    if ns.size < 3:
        raise ValueError("need at least 3 distinct N values for a slope fit")
    if np.any(rmses <= 0):
        raise ValueError("rmse values must be positive for a log-log fit")
    x = np.log(ns)
    y = np.log(rmses)
    xc = x - x.mean()
    sxx = float(np.sum(xc * xc))
    slope = float(np.sum(xc * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    dof = ns.size - 2
    s2 = float(np.sum(resid * resid) / dof)
    return slope, math.sqrt(s2 / sxx)


def scaling_experiment(cfg: ExperimentConfig) -> ScalingReport:
    """Estimate phi over rounds of nu trials for each N and fit the error scaling.

    Each round draws its own Philox stream (see derive_round_seed), estimates
    the phase by fringe inversion, and contributes to the per-N RMSE about the
    operating phase.  Rows carry the matching Cramér-Rao bound.
    """
    n_values = sorted(set(cfg.n_values))
    if len(n_values) < 3:
        raise ValueError("need at least 3 distinct N values")
    rows = []
    for n in n_values:
        strat = replace(cfg.strategy, n_probes=n)
        phi = cfg.phase_for(n)
        errors = np.empty(cfg.rounds)
        for r in range(cfg.rounds):
            k = run_trials(strat, phi, cfg.nu, derive_round_seed(cfg.seed, n, r))
            if strat.kind is StrategyKind.CLASSICAL_PARALLEL:
                phi_hat = estimate_phase(k, n * cfg.nu, 1)
            else:
                phi_hat = estimate_phase(k, cfg.nu, n)
            errors[r] = phi_hat - phi
        rows.append(
            ScalingRow(
                strategy=cfg.strategy.kind.value,
                n=n,
                nu=cfg.nu,
                rounds=cfg.rounds,
                empirical_rmse=float(np.sqrt(np.mean(errors**2))),
                crb=crb(strat, cfg.nu).bound,
                seed=cfg.seed,
                time_advantage=time_advantage(n),
            )
        )
    slope, stderr = fit_loglog_slope(
        [row.n for row in rows], [row.empirical_rmse for row in rows]
    )
    return ScalingReport(
        strategy=cfg.strategy.kind.value,
        rows=tuple(rows),
        fitted_slope=slope,
        slope_stderr=stderr,
        seed=cfg.seed,
    )
