"""Interacting eigenvalue diffusions with tunable pairwise repulsion.

Each of the N particles obeys

    d lam_i = [ -lam_i/2 + g(t) * sum_{j != i} 1/(lam_i - lam_j) ] dt
              + sigma db_i

with independent Brownian motions b_i.  The coupling g selects the model:

    fixed_beta:  g = beta * sigma^2 / 2                     (constant)
    crossover:   g = c * sigma^2 / N                        (constant, weak)
    switched:    g = eps_k * sigma^2 / 2, eps_k ~ Bernoulli(p) redrawn on
                 every interval [k/n, (k+1)/n)              (piecewise)

Integration is Euler-Maruyama in split form: a Gaussian kick of scale
sigma*sqrt(dt), then the drift marched across the same dt in dyadic
sub-steps sized so no particle moves more than a fixed fraction of the
gap to its nearest neighbour.  Pairs that land closer than the
resolvable scale sqrt(2*g*h_unit) are pushed apart symmetrically before
each drift evaluation; below that separation the discrete repulsion
cannot be integrated stably anyway, and the true paths never cross.

The split scheme cannot represent spacing structure finer than one noise
kick sigma*sqrt(2*dt).  Statistics that probe spacings below a fraction
q of the local mean spacing need dt <= (q / (N * rho_max * sigma))**2 / 2;
the defaults are fine for densities and moments, spacing-law work at
large N wants a much smaller dt.

The inner loop runs a few million times per production run, so the hot
path writes into preallocated buffers instead of allocating per call.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .streams import ParticleNoise, SwitchSchedule

_MODES = ("fixed_beta", "crossover", "switched")
_SUBSTEP_POWER = 20          # drift sub-step unit is dt / 2**20
_GAP_FRACTION = 0.2          # max drift move per sub-step, as a gap fraction
_GUARD_FLOOR = 1e-9          # absolute separation floor, in units of sigma


@dataclass(frozen=True)
class SdeConfig:
    """Run parameters for one eigenvalue-gas simulation.

    sample_stride is the model time between retained samples.  The actual
    step is dt snapped so that strides (and, in switched mode, the 1/n
    switching intervals) contain a whole number of steps; see time_grid.
    """
    n_dim: int
    mode: str = "fixed_beta"
    beta: float | None = None
    coupling_c: float | None = None
    switch_p: float | None = None
    switch_rate: int | None = None
    sigma: float = 1.0
    dt: float = 1e-3
    burn_in: float = 40.0
    n_samples: int = 100
    sample_stride: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_dim < 1:
            raise ValueError(f"n_dim must be >= 1, got {self.n_dim}")
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "fixed_beta":
            if self.beta is None or not (0.0 <= self.beta <= 2.0):
                raise ValueError("fixed_beta mode needs beta in [0, 2]")
        elif self.mode == "crossover":
            if self.coupling_c is None or self.coupling_c < 0:
                raise ValueError("crossover mode needs coupling_c >= 0")
            if self.dt > 0.01:
                raise ValueError("crossover mode needs dt <= 0.01")
        else:
            if self.switch_p is None or not (0.0 <= self.switch_p <= 1.0):
                raise ValueError("switched mode needs switch_p in [0, 1]")
            if self.switch_rate is None or self.switch_rate < 1:
                raise ValueError("switched mode needs switch_rate >= 1")
        if self.sigma <= 0 or self.dt <= 0 or self.sample_stride <= 0:
            raise ValueError("sigma, dt and sample_stride must be positive")
        if self.dt > self.sample_stride:
            raise ValueError("dt must not exceed sample_stride")
        if self.burn_in < 0 or self.n_samples < 1:
            raise ValueError("burn_in must be >= 0 and n_samples >= 1")

    def coupling(self) -> float:
        """Constant coupling g; for switched mode, the value while on."""
        s2 = self.sigma * self.sigma
        if self.mode == "fixed_beta":
            return 0.5 * self.beta * s2
        if self.mode == "crossover":
            return self.coupling_c * s2 / self.n_dim
        return 0.5 * s2


@dataclass
class GasState:
    """Current positions, kept sorted ascending."""
    t: float
    lam: np.ndarray


@dataclass(frozen=True)
class SpectrumSample:
    """One retained spectrum: sample time and the sorted eigenvalues."""
    t: float
    lam: np.ndarray


@dataclass(frozen=True)
class TimeGrid:
    dt_eff: float
    steps_per_stride: int
    burn_steps: int


def time_grid(config: SdeConfig) -> TimeGrid:
    """Snap dt so strides and switching intervals hold whole steps."""
    if config.mode == "switched":
        interval = 1.0 / config.switch_rate
        per_interval = max(1, math.ceil(interval / config.dt - 1e-12))
        dt_eff = interval / per_interval
        intervals_per_stride = max(1, round(config.sample_stride * config.switch_rate))
        steps_per_stride = intervals_per_stride * per_interval
    else:
        steps_per_stride = max(1, round(config.sample_stride / config.dt))
        dt_eff = config.sample_stride / steps_per_stride
    burn_steps = math.ceil(config.burn_in / dt_eff - 1e-12)
    return TimeGrid(dt_eff=dt_eff, steps_per_stride=steps_per_stride,
                    burn_steps=burn_steps)


def _positions(state_or_lam) -> np.ndarray:
    if isinstance(state_or_lam, GasState):
        return state_or_lam.lam
    return np.asarray(state_or_lam, dtype=float)


def pair_interaction(lam: np.ndarray) -> np.ndarray:
    """sum_{j != i} 1/(lam_i - lam_j) for every i."""
    diff = lam[:, None] - lam[None, :]
    np.fill_diagonal(diff, np.inf)
    return (1.0 / diff).sum(axis=1)


def drift(state, coupling: float) -> np.ndarray:
    """Total drift -lam/2 + g * (pairwise repulsion).

    Accepts a GasState or a strictly increasing position array.  The
    repulsion sums cancel pairwise, so sum(drift) == -sum(lam)/2.
    """
    lam = _positions(state)
    if lam.ndim != 1:
        raise ValueError("positions must form a 1-D array")
    if lam.shape[0] > 1 and np.any(np.diff(lam) <= 0.0):
        raise ValueError("positions must be strictly increasing")
    if coupling == 0.0:
        return -0.5 * lam
    return -0.5 * lam + coupling * pair_interaction(lam)


def enforce_min_gap(lam: np.ndarray, delta: float) -> int:
    """Push adjacent pairs of the sorted array apart to at least delta.

    Returns the number of pair separations applied.  Each violating pair
    is moved symmetrically, preserving the centre of mass; a few sweeps
    settle rare multi-particle pile-ups.
    """
    applied = 0
    for _ in range(64):
        gaps = np.diff(lam)
        idx = np.nonzero(gaps < delta)[0]
        if idx.size == 0:
            break
        shift = 0.5 * (delta - gaps[idx])
        np.subtract.at(lam, idx, shift)
        np.add.at(lam, idx + 1, shift)
        lam.sort()
        applied += idx.size
    return applied


class _Workspace:
    """Scratch buffers for the hot path, sized once per run."""

    def __init__(self, n: int):
        self.n = n
        self.diff = np.empty((n, n))
        self.diag = self.diff.reshape(-1)[:: n + 1]
        self.inv = np.empty((n, n))
        self.rows = np.empty(n)
        self.d = np.empty(n)
        self.move = np.empty(n)
        self.gaps = np.empty(max(n - 1, 1))
        self.room = np.empty(n)

    def drift_into(self, lam: np.ndarray, coupling: float) -> np.ndarray:
        np.copyto(self.diff, lam[:, None])
        self.diff -= lam[None, :]
        self.diag[...] = np.inf
        np.reciprocal(self.diff, out=self.inv)
        np.sum(self.inv, axis=1, out=self.rows)
        np.multiply(lam, -0.5, out=self.d)
        self.rows *= coupling
        self.d += self.rows
        return self.d


def _march_drift(lam: np.ndarray, coupling: float, dt: float, sigma: float,
                 stats: dict | None, ws: _Workspace) -> np.ndarray:
    """Advance the drift part across one macro step of length dt.

    The step is split into 2**20 units and consumed in the largest
    power-of-two chunks for which every particle moves at most
    _GAP_FRACTION of the gap to its nearest neighbour.  When even one
    unit violates that (particles at the guard separation), one unit is
    taken anyway; the symmetric repulsion then grows the gap, so the
    march terminates after a handful of iterations.
    """
    n = lam.shape[0]
    if coupling == 0.0 or n == 1:
        lam *= 1.0 - 0.5 * dt
        return lam
    unit = dt / (1 << _SUBSTEP_POWER)
    delta = max(_GUARD_FLOOR * sigma, math.sqrt(2.0 * coupling * unit))
    remaining = 1 << _SUBSTEP_POWER
    while remaining > 0:
        np.subtract(lam[1:], lam[:-1], out=ws.gaps)
        if ws.gaps.min() < delta:
            guarded = enforce_min_gap(lam, delta)
            np.subtract(lam[1:], lam[:-1], out=ws.gaps)
            if stats is not None:
                stats["guard_separations"] += guarded
        d = ws.drift_into(lam, coupling)
        ws.room[0] = ws.gaps[0]
        ws.room[-1] = ws.gaps[-1]
        if n > 2:
            np.minimum(ws.gaps[:-1], ws.gaps[1:], out=ws.room[1:-1])
        np.abs(d, out=ws.move)
        np.maximum(ws.move, 1e-300, out=ws.move)
        ws.room /= ws.move
        cap = _GAP_FRACTION * ws.room.min()
        max_units = remaining if cap >= dt else min(remaining, int(cap / unit))
        if max_units < 1:
            chunk = 1
            if stats is not None:
                stats["forced_units"] += 1
        else:
            chunk = 1 << (max_units.bit_length() - 1)
        np.multiply(d, chunk * unit, out=ws.move)
        lam += ws.move
        lam.sort()
        remaining -= chunk
        if stats is not None:
            stats["drift_marches"] += 1
    return lam


def step(state: GasState, config: SdeConfig, noise: np.ndarray,
         coupling: float | None = None, stats: dict | None = None,
         workspace: _Workspace | None = None) -> GasState:
    """One Euler-Maruyama macro step of length config.dt.

    noise holds one standard normal per particle.  coupling defaults to
    config.coupling(); switched-mode callers pass the current value
    (0 or the on-value) resolved from their schedule.  The returned
    state is sorted ascending.
    """
    if coupling is None:
        coupling = config.coupling()
    if workspace is None:
        workspace = _Workspace(config.n_dim)
    lam = state.lam + (config.sigma * math.sqrt(config.dt)) * np.asarray(noise)
    lam.sort()
    lam = _march_drift(lam, coupling, config.dt, config.sigma, stats, workspace)
    return GasState(t=state.t + config.dt, lam=lam)


def initial_positions(config: SdeConfig) -> np.ndarray:
    """Deterministic start: midpoint grid over the rough support."""
    n = config.n_dim
    if config.mode == "fixed_beta":
        beta_eff = config.beta
    elif config.mode == "crossover":
        beta_eff = 2.0 * config.coupling_c / n
    else:
        beta_eff = config.switch_p
    half = config.sigma * max(2.0, math.sqrt(2.0 * beta_eff * n))
    return half * ((2.0 * np.arange(n) + 1.0) / n - 1.0)


def simulate_with_stats(config: SdeConfig, replica: int = 0
                        ) -> tuple[list[SpectrumSample], dict]:
    """Run burn-in, then collect n_samples spectra one stride apart.

    Deterministic given (config.seed, replica).  The stats dict counts
    macro steps, drift-march iterations, forced minimal sub-steps and
    guard separations.  The loop body repeats step() inline to avoid
    per-step allocation.
    """
    grid = time_grid(config)
    noise = ParticleNoise(config.seed, config.n_dim, replica=replica)
    schedule = None
    if config.mode == "switched":
        schedule = SwitchSchedule(config.seed, config.switch_p,
                                  config.switch_rate, replica=replica)
    g_on = config.coupling()
    ws = _Workspace(config.n_dim)
    lam = initial_positions(config)
    stats = {"macro_steps": 0, "drift_marches": 0, "forced_units": 0,
             "guard_separations": 0}
    samples: list[SpectrumSample] = []
    total_steps = grid.burn_steps + config.n_samples * grid.steps_per_stride
    kick = math.sqrt(grid.dt_eff) * config.sigma
    for k in range(total_steps):
        if schedule is not None:
            g = g_on * schedule.value(schedule.interval_of(k * grid.dt_eff))
        else:
            g = g_on
        np.multiply(noise.normals(), kick, out=ws.move)
        lam += ws.move
        lam.sort()
        lam = _march_drift(lam, g, grid.dt_eff, config.sigma, stats, ws)
        stats["macro_steps"] += 1
        done = k + 1
        if done > grid.burn_steps and (done - grid.burn_steps) % grid.steps_per_stride == 0:
            samples.append(SpectrumSample(t=done * grid.dt_eff, lam=lam.copy()))
    return samples, stats


def simulate(config: SdeConfig, replica: int = 0) -> list[SpectrumSample]:
    """As simulate_with_stats, returning just the samples."""
    return simulate_with_stats(config, replica=replica)[0]


def stieltjes_sample(state, z: complex) -> complex:
    """Empirical transform (1/N) * sum_i 1/(lam_i - z) of one spectrum.

    Accepts a GasState, a SpectrumSample, or a position array.
    """
    z = complex(z)
    if z.imag == 0.0:
        raise ValueError("z must lie off the real axis")
    if isinstance(state, (GasState, SpectrumSample)):
        lam = state.lam
    else:
        lam = np.asarray(state, dtype=float)
    return complex(np.mean(1.0 / (lam - z)))
