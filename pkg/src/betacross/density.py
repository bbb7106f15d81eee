"""Spectral density models: Gaussian, semicircle, and the crossover family.

The one-parameter family

    rho_c(u) = 1 / (sqrt(2*pi) * Gamma(1+c)) * 1 / |D_{-c}(i*u)|**2

interpolates between the standard Gaussian (c = 0) and, after rescaling,
the Wigner semicircle (c -> inf).  Its Stieltjes transform solves the
stationary relation

    c*G(z)**2 + z*G(z) + G'(z) = -1,        G(z) ~ -1/z at infinity,

which is the source of the moment values used below.  A finite-size
corrected density for an N-dimensional ensemble at repulsion strength
beta is the same family evaluated at c = beta*N/(2-beta) with the
argument stretched by sqrt(alpha), alpha = 2/(2-beta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special_fn import gamma_ln, log_abs_d2

_KINDS = ("gaussian", "semicircle", "kerov", "corrected")
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def eval_gaussian(sigma: float, lam) -> np.ndarray | float:
    """Centred Gaussian density with standard deviation sigma."""
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    lam = np.asarray(lam, dtype=float)
    out = np.exp(-0.5 * (lam / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))
    return float(out) if out.ndim == 0 else out


def eval_semicircle(beta: float, n_dim: int, sigma: float, lam) -> np.ndarray | float:
    """Semicircle of edge sigma*sqrt(2*beta*n_dim), the wide-matrix limit.

    rho(lam) = sqrt(2*beta*sigma^2*n_dim - lam^2) / (pi*beta*sigma^2*n_dim)
    on its support, zero outside.
    """
    if beta <= 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    if n_dim < 1:
        raise ValueError(f"n_dim must be >= 1, got {n_dim}")
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    lam = np.asarray(lam, dtype=float)
    b2n = beta * sigma * sigma * n_dim
    out = np.sqrt(np.clip(2.0 * b2n - lam * lam, 0.0, None)) / (math.pi * b2n)
    return float(out) if out.ndim == 0 else out


def eval_kerov(c: float, lam) -> np.ndarray | float:
    """Crossover density rho_c; Gaussian at c=0, semicircle-like for large c."""
    if c <= -1.0:
        raise ValueError(f"c must exceed -1, got {c}")
    la2 = log_abs_d2(c, lam)
    out = np.exp(-np.asarray(la2) - gamma_ln(1.0 + c) - _LN_SQRT_2PI)
    return float(out) if out.ndim == 0 else out


def corrected_params(beta: float, n_dim: int) -> tuple[float, float]:
    """(alpha, c) of the corrected finite-size density."""
    if not (0.0 <= beta < 2.0):
        raise ValueError(f"beta must lie in [0, 2), got {beta}")
    if n_dim < 1:
        raise ValueError(f"n_dim must be >= 1, got {n_dim}")
    return 2.0 / (2.0 - beta), beta * n_dim / (2.0 - beta)


def eval_corrected(beta: float, n_dim: int, sigma: float, lam) -> np.ndarray | float:
    """Finite-size corrected spectral density at repulsion strength beta.

    Reduces to eval_kerov(c, .) when beta -> 0 with beta*n_dim = 2c held
    fixed, and carries the exact second moment sigma^2*(2-beta+beta*N)/2.
    """
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    alpha, c = corrected_params(beta, n_dim)
    root_a = math.sqrt(alpha)
    lam = np.asarray(lam, dtype=float)
    out = (root_a / sigma) * np.asarray(eval_kerov(c, root_a * lam / sigma))
    return float(out) if out.ndim == 0 else out


@dataclass
class DensityCurve:
    """A density sampled on an ascending grid."""
    lambda_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.lambda_grid = np.asarray(self.lambda_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.lambda_grid.ndim != 1 or self.lambda_grid.shape != self.values.shape:
            raise ValueError("grid and values must be matching 1-D arrays")
        if len(self.lambda_grid) < 2 or not np.all(np.diff(self.lambda_grid) > 0):
            raise ValueError("grid must be strictly ascending with >= 2 points")
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise ValueError("density values must be finite and non-negative")

    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.lambda_grid))

    def moment(self, k: int) -> float:
        return float(np.trapezoid(self.values * self.lambda_grid ** k, self.lambda_grid))

    def cdf(self):
        """Piecewise-linear CDF callable built from the curve."""
        cum = np.concatenate([[0.0], np.cumsum(
            0.5 * (self.values[1:] + self.values[:-1]) * np.diff(self.lambda_grid))])
        total = cum[-1]
        if total <= 0.0:
            raise ValueError("curve has zero mass")
        cum /= total

        def _cdf(x):
            return np.interp(x, self.lambda_grid, cum, left=0.0, right=1.0)

        return _cdf

    def write_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write("lambda,value\n")
            for x, v in zip(self.lambda_grid, self.values):
                fh.write(f"{x:.17g},{v:.17g}\n")

    @classmethod
    def read_csv(cls, path) -> "DensityCurve":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(lambda_grid=data[:, 0], values=data[:, 1])


@dataclass
class DensityModel:
    """A density kind plus the parameters that kind actually uses.

    gaussian:    sigma
    semicircle:  beta, n_dim, sigma
    kerov:       c
    corrected:   beta, n_dim, sigma (alpha and c are always recomputed)
    """
    kind: str
    beta: float | None = None
    n_dim: int | None = None
    sigma: float = 1.0
    c: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown density kind {self.kind!r}")
        if self.kind == "gaussian":
            if self.sigma <= 0:
                raise ValueError("gaussian model needs sigma > 0")
        elif self.kind == "kerov":
            if self.c is None or self.c <= -1.0:
                raise ValueError("kerov model needs c > -1")
        else:
            if self.beta is None or self.n_dim is None:
                raise ValueError(f"{self.kind} model needs beta and n_dim")
            if self.n_dim < 1:
                raise ValueError(f"n_dim must be >= 1, got {self.n_dim}")
            if self.kind == "semicircle":
                if self.beta <= 0:
                    raise ValueError("semicircle model needs beta > 0")
            else:
                corrected_params(self.beta, self.n_dim)
            if self.sigma <= 0:
                raise ValueError(f"{self.kind} model needs sigma > 0")

    @classmethod
    def gaussian(cls, sigma: float = 1.0) -> "DensityModel":
        return cls(kind="gaussian", sigma=sigma)

    @classmethod
    def semicircle(cls, beta: float, n_dim: int, sigma: float = 1.0) -> "DensityModel":
        return cls(kind="semicircle", beta=beta, n_dim=n_dim, sigma=sigma)

    @classmethod
    def kerov(cls, c: float) -> "DensityModel":
        return cls(kind="kerov", c=c)

    @classmethod
    def corrected(cls, beta: float, n_dim: int, sigma: float = 1.0) -> "DensityModel":
        return cls(kind="corrected", beta=beta, n_dim=n_dim, sigma=sigma)

    def evaluate(self, lam):
        if self.kind == "gaussian":
            return eval_gaussian(self.sigma, lam)
        if self.kind == "semicircle":
            return eval_semicircle(self.beta, self.n_dim, self.sigma, lam)
        if self.kind == "kerov":
            return eval_kerov(self.c, lam)
        return eval_corrected(self.beta, self.n_dim, self.sigma, lam)

    def half_width(self) -> float:
        """Half-width of the default evaluation window."""
        if self.kind == "gaussian":
            return 10.0 * self.sigma
        if self.kind == "semicircle":
            return 1.05 * self.sigma * math.sqrt(2.0 * self.beta * self.n_dim)
        if self.kind == "kerov":
            return max(10.0, 4.0 * math.sqrt(1.0 + self.c))
        alpha, c = corrected_params(self.beta, self.n_dim)
        return self.sigma * max(10.0, 4.0 * math.sqrt(1.0 + c)) / math.sqrt(alpha)

    def default_grid(self, n_points: int = 2001) -> np.ndarray:
        half = self.half_width()
        return np.linspace(-half, half, n_points)

    def curve(self, grid=None) -> DensityCurve:
        if grid is None:
            grid = self.default_grid()
        grid = np.asarray(grid, dtype=float)
        return DensityCurve(lambda_grid=grid, values=np.asarray(self.evaluate(grid)))


def kerov_moment(c: float, k: int) -> float:
    """Moments of rho_c from the stationary Stieltjes relation.

    Expanding G(z) = -sum_k m_{2k} z^{-2k-1} in c*G^2 + z*G + G' = -1 gives
    the recursion

        m_{2k} = (2k-1)*m_{2k-2} + c * sum_{j=0}^{k-1} m_{2j} * m_{2k-2-2j}

    with m_0 = 1; odd moments vanish by symmetry.  Only k <= 4 is exposed.
    """
    if c <= -1.0:
        raise ValueError(f"c must exceed -1, got {c}")
    if k == 0:
        return 1.0
    if k == 2:
        return 1.0 + c
    if k == 4:
        return (1.0 + c) * (2.0 * c + 3.0)
    raise ValueError(f"moment order {k} not provided (only 0, 2, 4)")


def stieltjes_numeric(curve: DensityCurve, z: complex) -> complex:
    """G(z) = int rho(x) / (x - z) dx by the trapezoid rule on the curve."""
    z = complex(z)
    if z.imag == 0.0:
        raise ValueError("z must lie off the real axis")
    integrand = curve.values / (curve.lambda_grid - z)
    return complex(np.trapezoid(integrand, curve.lambda_grid))


def ode_residual(c: float, curve: DensityCurve, z_samples) -> float:
    """Max residual |c*G^2 + z*G + G' + 1| over the given points.

    G comes from stieltjes_numeric on the curve and G' from a centred
    difference with step 1e-4*|z|.  Small for curves of the crossover
    family at matching c, order-one for anything else.
    """
    worst = 0.0
    for z in np.atleast_1d(np.asarray(z_samples, dtype=complex)):
        z = complex(z)
        if abs(z.imag) < 0.5:
            raise ValueError(f"sample point {z} too close to the real axis")
        h = 1e-4 * abs(z)
        g = stieltjes_numeric(curve, z)
        dg = (stieltjes_numeric(curve, z + h) - stieltjes_numeric(curve, z - h)) / (2.0 * h)
        worst = max(worst, abs(c * g * g + z * g + dg + 1.0))
    return worst


def tail_exponent_check(c: float, window: tuple[float, float] = (8.0, 12.0),
                        n_pts: int = 25) -> float:
    """Fitted tail exponent of rho_c, nominally 2c.

    ln[rho_c(u) * e^{u^2/2}] is fit over the window with the model
    a + s*ln(u) + b/u^2 and s is returned.  The 1/u^2 term absorbs the
    subleading correction (size ~ c*(c+1)/u^2), which would otherwise bias
    a plain log-log slope by more than the contract allows for c >= 2.
    """
    lo, hi = window
    if not (0.0 < lo < hi):
        raise ValueError(f"bad window {window}")
    u = np.geomspace(lo, hi, n_pts)
    ln_g = (-np.asarray(log_abs_d2(c, u)) - gamma_ln(1.0 + c) - _LN_SQRT_2PI
            + 0.5 * u * u)
    design = np.column_stack([np.ones_like(u), np.log(u), u ** -2.0])
    coef, *_ = np.linalg.lstsq(design, ln_g, rcond=None)
    return float(coef[1])
