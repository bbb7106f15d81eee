"""betacross: beta-ensemble eigenvalue diffusions and crossover spectral laws.

Simulation of interacting eigenvalue SDEs and of the underlying symmetric
matrix diffusions with randomly switched increments, evaluation of the
one-parameter family of spectral densities that interpolates between a
Gaussian and a semicircle, and the spectral statistics used to compare
the two.
"""

__version__ = "0.1.0"

from .density import (
    DensityCurve,
    DensityModel,
    corrected_params,
    eval_corrected,
    eval_gaussian,
    eval_kerov,
    eval_semicircle,
    kerov_moment,
    ode_residual,
    stieltjes_numeric,
    tail_exponent_check,
)
from .eigen_sde import (
    GasState,
    SdeConfig,
    SpectrumSample,
    drift,
    enforce_min_gap,
    initial_positions,
    pair_interaction,
    simulate,
    simulate_with_stats,
    step,
    stieltjes_sample,
    time_grid,
)
from .matrix_process import (
    EigenSystem,
    SymMatrixState,
    eigh,
    haar_overlap_samples,
    simulate_switched,
    step_commuting,
    step_free,
)
from .special_fn import (
    AccuracyError,
    PcfEval,
    WeberState,
    gamma_ln,
    log_abs_d2,
    pcf_negative_order,
    pcf_quadrature,
    pcf_weber_ode,
    weber_states,
    wronskian_drift,
)
from .spectral_stats import (
    ChiSquareResult,
    MomentEstimate,
    SpacingSet,
    chi_square,
    histogram,
    ks_distance,
    moment,
    nns,
    wigner_surmise,
    wigner_surmise_cdf,
)
from .streams import ParticleNoise, SwitchSchedule, stream

__all__ = [
    "__version__",
    "AccuracyError",
    "ChiSquareResult",
    "DensityCurve",
    "DensityModel",
    "EigenSystem",
    "GasState",
    "MomentEstimate",
    "ParticleNoise",
    "PcfEval",
    "SdeConfig",
    "SpacingSet",
    "SpectrumSample",
    "SwitchSchedule",
    "SymMatrixState",
    "WeberState",
    "chi_square",
    "corrected_params",
    "drift",
    "eigh",
    "enforce_min_gap",
    "eval_corrected",
    "eval_gaussian",
    "eval_kerov",
    "eval_semicircle",
    "gamma_ln",
    "haar_overlap_samples",
    "histogram",
    "initial_positions",
    "kerov_moment",
    "ks_distance",
    "log_abs_d2",
    "moment",
    "nns",
    "ode_residual",
    "pair_interaction",
    "pcf_negative_order",
    "pcf_quadrature",
    "pcf_weber_ode",
    "simulate",
    "simulate_switched",
    "simulate_with_stats",
    "step",
    "step_commuting",
    "step_free",
    "stieltjes_numeric",
    "stieltjes_sample",
    "stream",
    "tail_exponent_check",
    "time_grid",
    "weber_states",
    "wigner_surmise",
    "wigner_surmise_cdf",
    "wronskian_drift",
]
