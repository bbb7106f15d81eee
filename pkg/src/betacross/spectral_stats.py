"""Statistics extracted from ensembles of spectra.

Turns lists of spectrum samples into density histograms, unfolded
nearest-neighbour spacing sets, surmise reference curves, pooled moments
with jackknife errors, and goodness-of-fit numbers.  Everything here is
a pure function over immutable sample lists.

Unfolding convention: spacings are taken inside the central bulk
fraction of each sorted spectrum, then divided by the local mean level
spacing 1/(N rho(midpoint)) predicted by a density model, then pooled
and rescaled to overall mean one.  Unfolding against the exact
finite-size density avoids the smoothing artifacts of empirical
unfolding; edge levels are excluded because no surmise applies there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .density import DensityCurve, DensityModel

_MEAN_TOL = 1e-12


def _spectrum_values(sample) -> np.ndarray:
    lam = np.asarray(getattr(sample, "lam", sample), dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ValueError("each sample must be a nonempty 1-d spectrum")
    return lam


@dataclass(frozen=True)
class SpacingSet:
    """Pooled unfolded spacings, normalized to sample mean one.

    n_dropped counts non-positive raw spacings removed before
    normalization (collisions guarded in the simulation can produce
    exact ties).
    """
    spacings: np.ndarray
    n_dropped: int
    bulk_fraction: float
    n_samples: int

    def __post_init__(self):
        s = np.asarray(self.spacings, dtype=float)
        if s.size == 0:
            raise ValueError("spacing set is empty")
        if not np.all(s > 0):
            raise ValueError("spacings must be positive")
        if abs(s.mean() - 1.0) > _MEAN_TOL:
            raise ValueError("spacings must be normalized to mean one")
        object.__setattr__(self, "spacings", s)


def histogram(samples, bins: int, value_range: tuple[float, float]) -> DensityCurve:
    """Density-normalized histogram of pooled eigenvalues.

    Bins are left-closed (the last one closed on both sides, numpy
    convention) and the returned curve lives on bin centers.  The
    histogram integrates to one over the range in the sense
    sum(value * width) = 1; values outside the range are ignored.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    lo, hi = value_range
    if not (hi > lo):
        raise ValueError("range must be non-degenerate")
    if len(samples) == 0:
        raise ValueError("no samples given")
    pooled = np.concatenate([_spectrum_values(s) for s in samples])
    values, edges = np.histogram(pooled, bins=bins, range=(lo, hi), density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return DensityCurve(lambda_grid=centers, values=values)


def nns(samples, bulk_fraction: float = 0.5,
        model: DensityModel | None = None) -> SpacingSet:
    """Nearest-neighbour spacings from the central bulk of each spectrum.

    Keeps the middle floor(N * bulk_fraction) levels of every sorted
    spectrum, takes consecutive differences, and unfolds each gap by the
    local mean spacing of the model density (skipped when model is
    None, which is only appropriate for flat spectra).  Non-positive
    gaps are dropped and counted; the pooled result is rescaled to mean
    exactly one.
    """
    if not (0.0 < bulk_fraction <= 1.0):
        raise ValueError("bulk_fraction must lie in (0, 1]")
    if len(samples) == 0:
        raise ValueError("no samples given")
    pooled = []
    dropped = 0
    for sample in samples:
        lam = _spectrum_values(sample)
        n = lam.size
        if n < 4:
            raise ValueError("spectra must have at least 4 levels")
        keep = max(2, int(math.floor(n * bulk_fraction)))
        start = (n - keep) // 2
        bulk = lam[start:start + keep]
        gaps = np.diff(bulk)
        if model is not None:
            midpoints = 0.5 * (bulk[:-1] + bulk[1:])
            gaps = gaps * n * model.evaluate(midpoints)
        good = gaps > 0
        dropped += int(gaps.size - good.sum())
        pooled.append(gaps[good])
    spacings = np.concatenate(pooled)
    if spacings.size == 0:
        raise ValueError("all spacings were dropped")
    spacings = spacings / spacings.mean()
    return SpacingSet(spacings=spacings, n_dropped=dropped,
                      bulk_fraction=bulk_fraction, n_samples=len(samples))


def _surmise_constants(beta: float) -> tuple[float, float]:
    if beta <= 0:
        raise ValueError("beta must be positive")
    half = 0.5 * (beta + 1.0)
    b = (special.gamma(half + 0.5) / special.gamma(half)) ** 2
    a = 2.0 * b ** half / special.gamma(half)
    return a, b


def wigner_surmise(beta: float, s):
    """Spacing density a s^beta exp(-b s^2) with unit norm and unit mean.

    b = [Gamma((beta+2)/2) / Gamma((beta+1)/2)]^2 fixes the mean and
    a = 2 b^((beta+1)/2) / Gamma((beta+1)/2) the normalization; these
    are the unique constants doing both.  The small-s behaviour is s^beta.
    """
    a, b = _surmise_constants(beta)
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("spacings must be >= 0")
    out = a * s ** beta * np.exp(-b * s * s)
    return float(out) if out.ndim == 0 else out


def wigner_surmise_cdf(beta: float, s):
    """Closed-form distribution function of the surmise.

    Substituting u = b s^2 turns the integral into a lower incomplete
    gamma function: F(s) = P((beta+1)/2, b s^2) in regularized form.
    """
    _, b = _surmise_constants(beta)
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("spacings must be >= 0")
    out = special.gammainc(0.5 * (beta + 1.0), b * s * s)
    return float(out) if out.ndim == 0 else out


def ks_distance(data, cdf) -> float:
    """One-sample Kolmogorov-Smirnov statistic sup |F_n - F|."""
    x = np.sort(np.asarray(data, dtype=float))
    if x.size == 0:
        raise ValueError("data must be non-empty")
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


@dataclass(frozen=True)
class MomentEstimate:
    """Pooled moment with a jackknife standard error over samples."""
    value: float
    se: float
    n_samples: int

    def __float__(self):
        return self.value


def moment(samples, k: int) -> MomentEstimate:
    """Pooled empirical k-th moment of the eigenvalues.

    The standard error is the delete-one jackknife over whole spectra,
    which treats one sampling time as the exchangeable unit.  Residual
    autocorrelation between nearby sample times is not corrected here;
    widen the sampling stride if that matters.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    spectra = [_spectrum_values(s) for s in samples]
    if len(spectra) == 0:
        raise ValueError("no samples given")
    sums = np.array([np.sum(lam ** k) for lam in spectra])
    counts = np.array([lam.size for lam in spectra], dtype=float)
    total, n_total = sums.sum(), counts.sum()
    value = total / n_total
    n_s = len(spectra)
    if n_s < 2:
        return MomentEstimate(value=float(value), se=math.inf, n_samples=n_s)
    leave_one = (total - sums) / (n_total - counts)
    se = math.sqrt((n_s - 1) / n_s * np.sum((leave_one - leave_one.mean()) ** 2))
    return MomentEstimate(value=float(value), se=se, n_samples=n_s)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float


def chi_square(values, cdf, bins: int, value_range: tuple[float, float],
               min_expected: float = 20.0) -> ChiSquareResult:
    """Pearson chi-square of binned values against a model CDF.

    Requires at least min_expected expected counts in every bin, the
    usual validity condition; use fewer, wider bins otherwise.
    """
    values = np.asarray(values, dtype=float)
    lo, hi = value_range
    edges = np.linspace(lo, hi, bins + 1)
    observed, _ = np.histogram(values, bins=edges)
    cdf_edges = np.asarray(cdf(edges), dtype=float)
    probs = np.diff(cdf_edges)
    expected = probs * values.size
    if np.any(expected < min_expected):
        raise ValueError(f"expected counts below {min_expected}; widen the bins")
    stat = float(np.sum((observed - expected) ** 2 / expected))
    dof = bins - 1
    return ChiSquareResult(statistic=stat, dof=dof,
                           p_value=float(special.chdtrc(dof, stat)))
