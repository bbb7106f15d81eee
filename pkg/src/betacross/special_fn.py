"""Parabolic cylinder function D_{-c} on the imaginary axis, two ways.

The crossover spectral densities need |D_{-c}(i*lam)|**2 for real lam and
order c > -1.  Two independent evaluation routes are provided and are kept
deliberately separate so they can cross-validate each other:

* ``pcf_quadrature`` integrates the representation

      D_{-c}(z) = exp(-z**2/4) / Gamma(c) * I(z),
      I(z) = int_0^inf exp(-z*x - x**2/2) * x**(c-1) dx      (c > 0)

  at z = i*lam.  On the imaginary axis the raw integrand oscillates and
  cancels catastrophically (the lost digits grow like lam**2/2 / ln 10), so
  the contour is bent at the branch point: with t running down the segment
  from i*lam to 0 and s along the positive real axis,

      I(i*lam) = exp(-i*pi*c/2) * J + exp(-lam**2/2) * H,
      J = int_0^lam exp(-lam*t + t**2/2) * t**(c-1) dt,
      H = int_0^inf exp(-s**2/2) * (s - i*lam)**(c-1) ds.

  J has a positive integrand and H only a bounded phase rotation, so both
  are benign in double precision.  The identity is exact (Cauchy's theorem
  in the quarter strip; the integrand decays for Re x -> inf).

* ``pcf_weber_ode`` integrates the Weber equation satisfied by
  y(lam) = D_{-c}(i*lam),

      y'' + (c - 1/2 - lam**2/4) y = 0,

  upward from lam = 0 with initial values taken from the quadrature route
  (or from the order recurrence for c <= 0).  |y| grows like
  exp(lam**2/4), which overflows near lam ~= 38, so the solver carries a
  renormalised direction vector plus an accumulated log scale and reports
  log |y|**2 directly.

Conventions: lam < 0 maps to the conjugate value; only |.|**2 is even.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln as _scipy_gammaln

# quadrature route is refused above this order: the integrand scale
# exp((c/2)*(ln c - 1)) eats into the exponent range and the ODE route is
# the authoritative one there anyway
C_MAX_QUAD = 60.0

_ODE_RTOL = 1e-12
_ODE_ATOL = 1e-14
# max growth in ln|y| allowed inside one solver span before renormalising
_SPAN_LOG_CAP = 120.0


class AccuracyError(ArithmeticError):
    """Raised when a quadrature cannot reach the requested accuracy."""


@dataclass(frozen=True)
class PcfEval:
    """One evaluation of D_{-c}(i*lam), stored on a log scale.

    phase is the argument of the complex value; the ODE route propagates
    only magnitude information, so it reports phase=None.
    """
    c: float
    lam: float
    log_abs2: float
    phase: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.log_abs2):
            raise ValueError(f"non-finite log_abs2 at c={self.c}, lam={self.lam}")


@dataclass(frozen=True)
class WeberState:
    """Solution state (y, y') of the Weber equation at one abscissa."""
    lam: float
    y: complex
    dy: complex

    @property
    def wronskian(self) -> float:
        """W = Im(y') Re(y) - Im(y) Re(y'), constant along trajectories."""
        return self.dy.imag * self.y.real - self.y.imag * self.dy.real


def gamma_ln(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if x <= 0.0:
        raise ValueError(f"gamma_ln requires x > 0, got {x}")
    return float(_scipy_gammaln(x))


def _quad(func, a, b, **kwargs):
    """scipy.integrate.quad returning (value, error estimate).

    QUADPACK warnings (e.g. roundoff detection at tight tolerances) are not
    fatal by themselves; the caller checks the returned estimate against its
    accuracy contract and raises AccuracyError there.
    """
    out = integrate.quad(func, a, b, full_output=1, **kwargs)
    if not math.isfinite(out[0]):
        raise AccuracyError(f"quadrature diverged on [{a}, {b}]")
    return out[0], out[1]


def _wedge_integral(c: float, lam: float, eps_abs: float) -> tuple[float, float]:
    """J = int_0^lam exp(-lam*t + t**2/2) * t**(c-1) dt, positive."""
    if lam == 0.0:
        return 0.0, 0.0

    def g(t):
        return math.exp(t * (0.5 * t - lam))

    if c < 1.0:
        # endpoint factor t**(c-1) handled by weighted (QAWS) quadrature
        return _quad(g, 0.0, lam, weight="alg", wvar=(c - 1.0, 0.0),
                     epsabs=eps_abs, epsrel=1e-12, limit=200)
    return _quad(lambda t: g(t) * t ** (c - 1.0), 0.0, lam,
                 epsabs=eps_abs, epsrel=1e-12, limit=200)


def _axis_truncation(c: float, lam: float) -> float:
    """Abscissa past which the axis integrand is below ~1e-330."""
    s_hi = 42.0
    while 0.5 * s_hi * s_hi - 0.5 * abs(c - 1.0) * math.log(s_hi * s_hi + lam * lam) < 760.0:
        s_hi += 1.0
    return s_hi


def _axis_integral(c: float, lam: float) -> tuple[complex, float]:
    """H = int_0^inf exp(-s**2/2) * (s - i*lam)**(c-1) ds."""
    s_hi = _axis_truncation(c, lam)
    if lam == 0.0 and c < 1.0:
        # algebraic endpoint at s = 0; split at 1 and weight the first piece
        v1, e1 = _quad(lambda s: math.exp(-0.5 * s * s), 0.0, 1.0,
                       weight="alg", wvar=(c - 1.0, 0.0), epsrel=1e-12)
        v2, e2 = _quad(lambda s: math.exp(-0.5 * s * s) * s ** (c - 1.0),
                       1.0, s_hi, epsrel=1e-12, limit=200)
        return complex(v1 + v2, 0.0), e1 + e2

    def h(s, part):
        w = (s - 1j * lam) ** (c - 1.0) * math.exp(-0.5 * s * s)
        return w.real if part == 0 else w.imag

    re, ere = _quad(h, 0.0, s_hi, args=(0,), epsrel=1e-12, limit=400)
    im, eim = _quad(h, 0.0, s_hi, args=(1,), epsrel=1e-12, limit=400)
    return complex(re, im), ere + eim


def pcf_quadrature(c: float, lam: float) -> complex:
    """D_{-c}(i*lam) by direct quadrature, for 0 < c <= C_MAX_QUAD.

    Relative accuracy is checked against the quadrature error estimates;
    failure to meet ~1e-10 raises AccuracyError rather than returning a
    silently degraded value.
    """
    if not (c > 0.0):
        raise ValueError(f"pcf_quadrature requires c > 0, got c={c}")
    if c > C_MAX_QUAD:
        raise ValueError(
            f"order c={c} above quadrature limit {C_MAX_QUAD}; use the ODE route")
    if not math.isfinite(lam):
        raise ValueError(f"lam must be finite, got {lam}")

    a = abs(lam)
    axis, err_axis = _axis_integral(c, a)
    axis_term = math.exp(-0.5 * a * a) * axis
    scale = abs(axis_term)
    wedge, err_wedge = _wedge_integral(c, a, eps_abs=max(1e-300, 1e-13 * scale))
    ivalue = np.exp(-0.5j * math.pi * c) * wedge + axis_term

    total_err = err_wedge + math.exp(-0.5 * a * a) * err_axis
    if abs(ivalue) == 0.0 or total_err > 5e-9 * abs(ivalue):
        raise AccuracyError(
            f"quadrature error {total_err:.2e} too large relative to "
            f"|I|={abs(ivalue):.2e} at c={c}, lam={lam}")

    value = math.exp(0.25 * a * a - gamma_ln(c)) * ivalue
    if lam < 0.0:
        value = value.conjugate()
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise AccuracyError(f"non-finite value at c={c}, lam={lam}")
    return complex(value)


def pcf_negative_order(c: float, lam: float) -> complex:
    """D_{-c}(i*lam) for -1 < c <= 0 via the order recurrence.

    D_nu at adjacent orders satisfies D_{-c}(z) = z D_{-(c+1)}(z)
    + (c+1) D_{-(c+2)}(z); both right-hand orders are positive, so the
    quadrature route applies to them.
    """
    if not (-1.0 < c <= 0.0):
        raise ValueError(f"pcf_negative_order requires -1 < c <= 0, got c={c}")
    z = 1j * lam
    return z * pcf_quadrature(c + 1.0, lam) + (c + 1.0) * pcf_quadrature(c + 2.0, lam)


def _log_moment_integral(k: float) -> float:
    """ln int_0^inf x**k exp(-x**2/2) dx for k > 0, by max-subtracted quadrature."""
    x0 = math.sqrt(k)
    hmax = 0.5 * k * (math.log(k) - 1.0)

    def g(x):
        if x <= 0.0:
            return 0.0
        return math.exp(k * math.log(x) - 0.5 * x * x - hmax)

    lo = max(0.0, x0 - 30.0)
    val, _ = _quad(g, lo, x0 + 30.0, epsrel=1e-13, limit=200)
    return hmax + math.log(val)


def _weber_ic(c: float) -> tuple[float, complex, complex]:
    """Initial data (log_scale, y(0)*e^-s, y'(0)*e^-s) for the Weber ODE.

    y(0) is real positive and y'(0) purely imaginary; the derivative comes
    from the differentiated integral representation,
    y'(0) = -i * int_0^inf x**c exp(-x**2/2) dx / Gamma(c).
    """
    if c <= -1.0:
        raise ValueError(f"order must satisfy c > -1, got c={c}")
    if c <= 0.0:
        # recurrence at lam = 0: value through order c+2, slope through both
        y0 = (c + 1.0) * pcf_quadrature(c + 2.0, 0.0).real
        d_c1 = pcf_quadrature(c + 1.0, 0.0).real
        i_c2 = math.exp(_log_moment_integral(c + 2.0) - gamma_ln(c + 2.0))
        dy0 = 1j * (d_c1 - (c + 1.0) * i_c2)
        return 0.0, complex(y0), dy0
    if c <= C_MAX_QUAD:
        y0 = pcf_quadrature(c, 0.0).real
        dy0 = -1j * math.exp(_log_moment_integral(c) - gamma_ln(c))
        return 0.0, complex(y0), dy0
    # large order: both pieces only representable on the log scale
    log_y0 = _log_moment_integral(c - 1.0) - gamma_ln(c)
    log_dy0 = _log_moment_integral(c) - gamma_ln(c)
    s = max(log_y0, log_dy0)
    return s, complex(math.exp(log_y0 - s)), -1j * math.exp(log_dy0 - s)


@dataclass
class _WeberSolution:
    c: float
    grid: np.ndarray          # ascending, grid[0] == 0
    log_abs2: np.ndarray
    log_scale: np.ndarray     # s_k with physical state = e^{s_k} * vec_k
    vecs: np.ndarray          # shape (n, 4): renormalised (y_re, y_im, y'_re, y'_im)

    def state(self, k: int) -> WeberState:
        s = math.exp(self.log_scale[k])
        v = self.vecs[k]
        return WeberState(lam=float(self.grid[k]),
                          y=complex(s * v[0], s * v[1]),
                          dy=complex(s * v[2], s * v[3]))


def _integrate_weber(c: float, grid: np.ndarray) -> _WeberSolution:
    """March the renormalised Weber system through an ascending grid from 0."""

    def rhs(lam, v):
        q = 0.25 * lam * lam + 0.5 - c
        return (v[2], v[3], q * v[0], q * v[1])

    s, y0, dy0 = _weber_ic(c)
    vec = np.array([y0.real, y0.imag, dy0.real, dy0.imag])
    nrm = float(np.linalg.norm(vec))
    vec /= nrm
    s += math.log(nrm)

    n = len(grid)
    log_abs2 = np.empty(n)
    log_scale = np.empty(n)
    vecs = np.empty((n, 4))

    def record(k, sval, v):
        log_scale[k] = sval
        vecs[k] = v
        log_abs2[k] = 2.0 * sval + math.log(v[0] * v[0] + v[1] * v[1])

    record(0, s, vec)
    done = 1
    lam_cur = 0.0
    while done < n:
        # span end: cap the amplitude growth exp((lam_end^2-lam_cur^2)/4)
        lam_end = math.sqrt(lam_cur * lam_cur + 4.0 * _SPAN_LOG_CAP)
        lam_end = min(grid[-1], max(lam_end, lam_cur + 1.0))
        sol = integrate.solve_ivp(
            rhs, (lam_cur, lam_end), vec, method="DOP853",
            rtol=_ODE_RTOL, atol=_ODE_ATOL, dense_output=True)
        if not sol.success:
            raise AccuracyError(f"Weber integration failed at c={c}: {sol.message}")
        hi = int(np.searchsorted(grid, lam_end, side="right"))
        pts = grid[done:hi]
        if len(pts):
            vals = sol.sol(pts)     # (4, m)
            for j, lam in enumerate(pts):
                record(done + j, s, vals[:, j])
        vec = sol.y[:, -1].copy()
        nrm = float(np.linalg.norm(vec))
        vec /= nrm
        s += math.log(nrm)
        lam_cur = lam_end
        done = hi
    return _WeberSolution(c=c, grid=grid, log_abs2=log_abs2,
                          log_scale=log_scale, vecs=vecs)


def log_abs_d2(c: float, lam) -> np.ndarray | float:
    """log |D_{-c}(i*lam)|**2, vectorised over lam (any sign), for c > -1.

    All requested points are served from a single upward integration of the
    Weber equation; the result is even in lam.
    """
    if c <= -1.0:
        raise ValueError(f"order must satisfy c > -1, got c={c}")
    arr = np.asarray(lam, dtype=float)
    scalar = arr.ndim == 0
    flat = np.abs(arr.ravel())
    if not np.all(np.isfinite(flat)):
        raise ValueError("lam contains non-finite entries")
    grid = np.unique(np.concatenate([[0.0], flat]))
    solution = _integrate_weber(c, grid)
    idx = np.searchsorted(grid, flat)
    out = solution.log_abs2[idx]
    if scalar:
        return float(out[0])
    return out.reshape(arr.shape)


def pcf_weber_ode(c: float, lambda_grid) -> list[PcfEval]:
    """Evaluate log |D_{-c}(i*lam)|**2 along an ascending grid starting at 0."""
    grid = np.asarray(lambda_grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError("lambda_grid must be a non-empty 1-D array")
    if grid[0] != 0.0:
        raise ValueError("lambda_grid must start at 0")
    if not np.all(np.diff(grid) > 0.0) and len(grid) > 1:
        raise ValueError("lambda_grid must be strictly ascending")
    if not np.all(np.isfinite(grid)):
        raise ValueError("lambda_grid contains non-finite entries")
    solution = _integrate_weber(c, grid)
    return [PcfEval(c=c, lam=float(g), log_abs2=float(v))
            for g, v in zip(grid, solution.log_abs2)]


def weber_states(c: float, lambda_grid) -> list[WeberState]:
    """Physical (y, y') states along a grid; overflows past lam ~= 37."""
    grid = np.asarray(lambda_grid, dtype=float)
    if grid[0] != 0.0:
        raise ValueError("lambda_grid must start at 0")
    solution = _integrate_weber(c, grid)
    return [solution.state(k) for k in range(len(grid))]


def wronskian_drift(c: float, lam_max: float, n_pts: int = 41) -> float:
    """Max relative drift of the Wronskian along [0, lam_max].

    The Wronskian of (Re y, Im y) is conserved by the Weber flow; its
    numerical drift measures integrator quality.  Past lam ~ 6 the two
    solution components align with the growing mode and the subtraction
    cancels in double precision, so keep lam_max moderate.
    """
    states = weber_states(c, np.linspace(0.0, lam_max, n_pts))
    w0 = states[0].wronskian
    if w0 == 0.0:
        raise ValueError("Wronskian vanishes at lam=0 (c=0?); drift undefined")
    return max(abs(st.wronskian - w0) for st in states) / abs(w0)
