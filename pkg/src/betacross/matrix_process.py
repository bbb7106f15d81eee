"""Switched symmetric-matrix diffusion and its eigendecomposition tools.

The matrix process alternates two slice types on intervals of length 1/n,
chosen by independent Bernoulli(p) draws:

    free:       dM = -M/2 dt + dH,  dH symmetric Gaussian with
                Var(dH_ii) = sigma^2 dt, Var(dH_ij) = sigma^2 dt / 2
    commuting:  dM = -M/2 dt + V diag(sigma*sqrt(dt)*xi) V^T,
                V the eigenbasis of M at the interval start

Free slices rotate eigenvectors (full repulsion); commuting slices leave
them frozen and let the eigenvalues diffuse independently.

The eigensolver is cyclic Jacobi with an off-diagonal threshold, kept
self-contained so the simulation's orthogonality and reconstruction
guarantees do not depend on LAPACK behaviour; numpy.linalg.eigh is used
only as an oracle in the tests.  Degenerate eigenvalues get whatever
orthonormal basis the sweep converges to; the commuting noise is
law-invariant under that choice.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen_sde import SpectrumSample
from .streams import SwitchSchedule, stream

_JACOBI_TOL = 1e-12
_MAX_SWEEPS = 60


@dataclass
class SymMatrixState:
    """Symmetric matrix with its time tag."""
    t: float
    m: np.ndarray


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the matching orthonormal columns."""
    values: np.ndarray
    vectors: np.ndarray


def _jacobi_sweeps(a: np.ndarray, tol_abs: float) -> np.ndarray:
    """Diagonalize symmetric a in place; returns accumulated rotations."""
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol_abs:
                    continue
                rotated = True
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                if abs(theta) > 1e100:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        if not rotated:
            return v
    raise ArithmeticError(f"Jacobi sweep did not converge in {_MAX_SWEEPS} sweeps")


def eigh(state) -> EigenSystem:
    """Full eigendecomposition by cyclic Jacobi rotations.

    Accepts a SymMatrixState or a symmetric array.  Eigenvalues come back
    ascending; each eigenvector's largest-magnitude component is made
    positive, so the decomposition is deterministic.
    """
    m = state.m if isinstance(state, SymMatrixState) else np.asarray(state, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(m).max())):
        raise ValueError("matrix must be symmetric")
    a = 0.5 * (m + m.T)
    scale = np.abs(a).max()
    if scale == 0.0:
        return EigenSystem(values=np.zeros(m.shape[0]), vectors=np.eye(m.shape[0]))
    v = _jacobi_sweeps(a, _JACOBI_TOL * scale)
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0.0] = 1.0
    vectors = vectors * signs[None, :]
    return EigenSystem(values=values, vectors=vectors)


def _symmetric_increment(n: int, dt: float, sigma: float,
                         rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((n, n))
    h = a + a.T
    h *= 0.5 * sigma * math.sqrt(dt)
    return h


def step_free(state: SymMatrixState, dt: float, sigma: float,
              rng: np.random.Generator) -> SymMatrixState:
    """Free slice update M <- M - M/2 dt + dH.

    dH = (A + A^T) * sigma*sqrt(dt)/2 with A iid standard normal, which
    delivers the required entry variances and is symmetric bit for bit.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    h = _symmetric_increment(state.m.shape[0], dt, sigma, rng)
    m = state.m * (1.0 - 0.5 * dt) + h
    return SymMatrixState(t=state.t + dt, m=m)


def step_commuting(state: SymMatrixState, dt: float, sigma: float,
                   rng: np.random.Generator, basis: EigenSystem) -> SymMatrixState:
    """Commuting slice update M <- M - M/2 dt + V diag(sigma*sqrt(dt)*xi) V^T.

    basis must be the eigensystem taken at the start of the current
    commuting interval; the drift only rescales it, so eigenvectors stay
    put while eigenvalues random-walk.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    xi = rng.standard_normal(state.m.shape[0])
    w = basis.vectors * (sigma * math.sqrt(dt) * xi)[None, :]
    y = w @ basis.vectors.T
    y = 0.5 * (y + y.T)
    m = state.m * (1.0 - 0.5 * dt) + y
    return SymMatrixState(t=state.t + dt, m=m)


def simulate_switched(n_dim: int, p: float, switch_rate: int, sigma: float = 1.0,
                      dt: float = 1e-3, total_time: float = 100.0,
                      burn_in: float = 40.0, stride: float = 1.0, seed: int = 0,
                      replica: int = 0, collect_vectors: bool = False,
                      m0: np.ndarray | None = None,
                      conjugation: np.ndarray | None = None):
    """Run the switched matrix diffusion and record spectra every stride.

    total_time counts the post-burn-in sampling window, so the number of
    recorded samples is round(total_time / stride).  dt must divide the
    switching interval 1/switch_rate and 1/switch_rate must divide
    stride, keeping samples on interval boundaries.  The eigenbasis is
    refreshed at the start of a commuting interval whenever the previous
    slice invalidated it, and a full decomposition is taken at every
    sample time.

    conjugation, if given, runs the process started from R M0 R^T with
    every free increment replaced by R dH R^T: in exact arithmetic the
    eigenvalue stream is unchanged.  collect_vectors additionally returns
    the EigenSystem snapshots taken at sample times.

    Returns list[SpectrumSample], or (samples, snapshots) when
    collect_vectors is true.
    """
    if n_dim < 1:
        raise ValueError("n_dim must be >= 1")
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    if switch_rate < 1:
        raise ValueError("switch_rate must be >= 1")
    if sigma <= 0 or dt <= 0 or stride <= 0 or total_time <= 0 or burn_in < 0:
        raise ValueError("sigma, dt, stride and total_time must be positive")
    interval = 1.0 / switch_rate
    steps_per_interval = (interval / dt)
    if abs(steps_per_interval - round(steps_per_interval)) > 1e-9:
        raise ValueError("dt must divide the switching interval 1/switch_rate")
    steps_per_interval = round(steps_per_interval)
    intervals_per_stride = stride * switch_rate
    if abs(intervals_per_stride - round(intervals_per_stride)) > 1e-9:
        raise ValueError("1/switch_rate must divide stride")
    intervals_per_stride = round(intervals_per_stride)
    n_samples = round(total_time / stride)
    if n_samples < 1:
        raise ValueError("total_time must cover at least one stride")

    dt_eff = interval / steps_per_interval
    rng_free = stream(seed, "free", replica=replica)
    rng_spec = stream(seed, "spectrum", replica=replica)
    schedule = SwitchSchedule(seed, p, switch_rate, replica=replica)

    if m0 is None:
        m = np.zeros((n_dim, n_dim))
    else:
        m = np.array(m0, dtype=float)
        if not np.array_equal(m, m.T):
            raise ValueError("m0 must be symmetric")
    if conjugation is not None:
        m = conjugation @ m @ conjugation.T
        m = 0.5 * (m + m.T)

    burn_intervals = math.ceil(burn_in * switch_rate - 1e-9)
    total_intervals = burn_intervals + n_samples * intervals_per_stride
    state = SymMatrixState(t=0.0, m=m)
    basis: EigenSystem | None = None
    samples: list[SpectrumSample] = []
    snapshots: list[EigenSystem] = []
    for k in range(total_intervals):
        eps = schedule.value(k)
        if eps == 1:
            for _ in range(steps_per_interval):
                h = _symmetric_increment(n_dim, dt_eff, sigma, rng_free)
                if conjugation is not None:
                    h = conjugation @ h @ conjugation.T
                    h = 0.5 * (h + h.T)
                state = SymMatrixState(t=state.t + dt_eff,
                                       m=state.m * (1.0 - 0.5 * dt_eff) + h)
            basis = None
        else:
            if basis is None:
                basis = eigh(state)
            for _ in range(steps_per_interval):
                state = step_commuting(state, dt_eff, sigma, rng_spec, basis)
        done = k + 1
        if done > burn_intervals and (done - burn_intervals) % intervals_per_stride == 0:
            es = eigh(state)
            samples.append(SpectrumSample(t=done * interval, lam=es.values.copy()))
            if collect_vectors:
                snapshots.append(es)
    if collect_vectors:
        return samples, snapshots
    return samples


def haar_overlap_samples(snapshots: list[EigenSystem], direction: np.ndarray,
                         index: int = 0) -> np.ndarray:
    """Squared overlaps (v_index . e)^2 across snapshots.

    direction is normalized internally.  Under full eigenvector
    randomization these follow Beta(1/2, (N-1)/2); for a frozen basis
    they are constant.
    """
    e = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(e)
    if norm == 0.0:
        raise ValueError("direction must be a nonzero vector")
    e = e / norm
    out = np.empty(len(snapshots))
    for i, snap in enumerate(snapshots):
        out[i] = float(snap.vectors[:, index] @ e) ** 2
    return out
