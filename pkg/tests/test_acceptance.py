"""Acceptance checklist for the package.

Each test covers one numbered criterion and prints a single PASS/FAIL
line with the measured numbers (visible with pytest -s; the test verdict
itself carries the same information).  Workloads are sized so the whole
module runs in well under an hour on one core; seeds are fixed, so
every number here is reproducible.

Statistical checks compare against exact finite-size expectations (Ito
sum rules, closed-form small-N laws) within three standard errors, or
against stated distributional tolerances (KS distances, slope windows).
"""
import math

import numpy as np
from scipy import integrate, stats

from betacross.density import (DensityModel, eval_gaussian, eval_kerov,
                               ode_residual, tail_exponent_check)
from betacross.eigen_sde import SdeConfig, simulate, stieltjes_sample
from betacross.matrix_process import haar_overlap_samples, simulate_switched
from betacross.special_fn import log_abs_d2, pcf_quadrature, wronskian_drift
from betacross.spectral_stats import (ks_distance, moment, nns,
                                      wigner_surmise_cdf)

_OFF_AXIS = [1.5j, 1.0 + 2.0j, -2.0 + 1.0j]


def report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} ({detail})")


def batch_se(values, n_batches=20):
    values = np.asarray(values)
    usable = (len(values) // n_batches) * n_batches
    means = values[:usable].reshape(n_batches, -1).mean(axis=1)
    return means.std(ddof=1) / math.sqrt(n_batches)


def test_criterion_01_family_density_checks():
    worst = {"norm": 0.0, "m2": 0.0, "m4": 0.0, "resid": 0.0}
    for c in (0.0, 0.5, 1.0, 2.0, 4.0):
        curve = DensityModel.kerov(c).curve()
        worst["norm"] = max(worst["norm"], abs(curve.integral() - 1.0))
        worst["m2"] = max(worst["m2"],
                          abs(curve.moment(2) - (1.0 + c)) / (1.0 + c))
        m4 = (1.0 + c) * (2.0 * c + 3.0)
        worst["m4"] = max(worst["m4"], abs(curve.moment(4) - m4) / m4)
        worst["resid"] = max(worst["resid"], ode_residual(c, curve, _OFF_AXIS))
    ok = (worst["norm"] <= 1e-5 and worst["m2"] <= 1e-4
          and worst["m4"] <= 1e-3 and worst["resid"] <= 5e-3)
    report(1, ok, "worst over c in {0,0.5,1,2,4}: "
           f"|norm-1|={worst['norm']:.2e}, m2 rel={worst['m2']:.2e}, "
           f"m4 rel={worst['m4']:.2e}, ode resid={worst['resid']:.2e}")
    assert worst["norm"] <= 1e-5
    assert worst["m2"] <= 1e-4
    assert worst["m4"] <= 1e-3
    assert worst["resid"] <= 5e-3


def test_criterion_02_endpoint_limits():
    lam = np.linspace(-10.0, 10.0, 2001)
    gauss_gap = np.abs(eval_kerov(0.0, lam) - eval_gaussian(1.0, lam)).max()

    c = 100.0
    u = np.linspace(-1.8 * math.sqrt(c), 1.8 * math.sqrt(c), 721)
    semi = np.sqrt(4.0 * c - u * u) / (2.0 * math.pi * c)
    semi_gap = np.abs(eval_kerov(c, u) - semi).max()
    peak = 1.0 / (math.pi * math.sqrt(c))
    ok = gauss_gap <= 1e-8 and semi_gap <= 0.05 * peak
    report(2, ok, f"c=0 vs Gaussian sup={gauss_gap:.2e} (tol 1e-8); "
           f"c=100 vs semicircle sup={semi_gap:.2e} (tol {0.05 * peak:.2e})")
    assert gauss_gap <= 1e-8
    assert semi_gap <= 0.05 * peak


def test_criterion_03_tail_exponent():
    errors = {}
    for c in (1.0, 2.0, 3.0):
        errors[c] = abs(tail_exponent_check(c) - 2.0 * c)
    ok = all(e <= 0.1 for e in errors.values())
    report(3, ok, "fitted tail exponent error vs 2c: "
           + ", ".join(f"c={c:g}: {e:.3f}" for c, e in errors.items())
           + " (tol 0.1)")
    assert all(e <= 0.1 for e in errors.values())


def test_criterion_04_gas_density_finite_n():
    config = SdeConfig(n_dim=50, mode="fixed_beta", beta=0.5, sigma=1.0,
                       dt=1e-3, burn_in=30.0, n_samples=420,
                       sample_stride=2.0, seed=2024)
    run = simulate(config)
    pooled = np.concatenate([s.lam for s in run])
    assert pooled.size >= 20_000
    corrected_cdf = DensityModel.corrected(0.5, 50, 1.0).curve().cdf()
    semicircle_cdf = DensityModel.semicircle(0.5, 50, 1.0).curve().cdf()
    ks_corr = ks_distance(pooled, corrected_cdf)
    ks_semi = ks_distance(pooled, semicircle_cdf)
    ok = ks_corr <= 0.02 and ks_corr < ks_semi
    report(4, ok, f"pooled draws={pooled.size}, KS corrected={ks_corr:.4f} "
           f"(tol 0.02), KS semicircle={ks_semi:.4f} (must exceed)")
    assert ks_corr <= 0.02
    assert ks_corr < ks_semi


def test_criterion_05_spacing_distribution():
    config = SdeConfig(n_dim=100, mode="fixed_beta", beta=0.5, sigma=1.0,
                       dt=2e-5, burn_in=10.0, n_samples=440,
                       sample_stride=0.125, seed=42)
    run = simulate(config)
    spacing_set = nns(run, bulk_fraction=0.5,
                      model=DensityModel.corrected(0.5, 100, 1.0))
    s = spacing_set.spacings
    assert s.size >= 20_000

    ks = ks_distance(s, lambda x: wigner_surmise_cdf(0.5, x))

    edges = np.geomspace(0.05, 0.3, 7)
    counts, _ = np.histogram(s, bins=edges)
    widths = np.diff(edges)
    centers = np.sqrt(edges[:-1] * edges[1:])
    density = counts / (s.size * widths)
    assert np.all(counts > 0)
    design = np.column_stack([np.ones_like(centers), np.log(centers)])
    (_, slope), *_ = np.linalg.lstsq(design, np.log(density), rcond=None)

    ok = ks <= 0.08 and abs(slope - 0.5) <= 0.15
    report(5, ok, f"spacings={s.size}, KS to surmise={ks:.4f} (tol 0.08), "
           f"small-s log-slope={slope:.3f} (target 0.5 +- 0.15)")
    assert ks <= 0.08
    assert abs(slope - 0.5) <= 0.15


def test_criterion_06_matrix_gas_equivalence():
    matrix_run = simulate_switched(8, 0.5, 100, sigma=1.0, dt=1e-3,
                                   total_time=600.0, burn_in=20.0,
                                   stride=2.0, seed=303)
    gas_run = simulate(SdeConfig(n_dim=8, mode="fixed_beta", beta=0.5,
                                 sigma=1.0, dt=1e-3, burn_in=30.0,
                                 n_samples=400, sample_stride=1.0, seed=304))
    details = []
    ok = True
    for k in (2, 4):
        mat = moment(matrix_run, k)
        gas = moment(gas_run, k)
        combined = math.hypot(mat.se, gas.se)
        good = abs(mat.value - gas.value) <= 3.0 * combined
        ok = ok and good
        details.append(f"m{k}: matrix={mat.value:.4f}, gas={gas.value:.4f}, "
                       f"3SE={3 * combined:.4f}")
    report(6, ok, "; ".join(details))
    for k in (2, 4):
        mat = moment(matrix_run, k)
        gas = moment(gas_run, k)
        assert abs(mat.value - gas.value) <= 3.0 * math.hypot(mat.se, gas.se)


def test_criterion_07_small_n_laws():
    single = simulate(SdeConfig(n_dim=1, mode="fixed_beta", beta=0.5,
                                sigma=1.0, dt=2e-3, burn_in=20.0,
                                n_samples=1000, sample_stride=1.0, seed=55))
    squares = np.array([s.lam[0] ** 2 for s in single])
    se_var = batch_se(squares)
    var_ok = abs(squares.mean() - 1.0) <= 3.0 * se_var

    pair = simulate(SdeConfig(n_dim=2, mode="fixed_beta", beta=1.0,
                              sigma=1.0, dt=2e-3, burn_in=20.0,
                              n_samples=1500, sample_stride=3.0, seed=56))
    gaps = np.array([s.lam[1] - s.lam[0] for s in pair])

    # beta=1, sigma=1 spacing marginal is proportional to s*exp(-s^2/4)
    weight = lambda s: s * math.exp(-0.25 * s * s)
    z, _ = integrate.quad(weight, 0.0, np.inf)
    mean_exact = integrate.quad(lambda s: s * weight(s), 0.0, np.inf)[0] / z
    msq_exact = integrate.quad(lambda s: s * s * weight(s), 0.0, np.inf)[0] / z
    se_mean = batch_se(gaps)
    se_msq = batch_se(gaps ** 2)
    mean_ok = abs(gaps.mean() - mean_exact) <= 3.0 * se_mean
    msq_ok = abs((gaps ** 2).mean() - msq_exact) <= 3.0 * se_msq

    ok = var_ok and mean_ok and msq_ok
    report(7, ok, f"N=1 var={squares.mean():.4f} (target 1, 3SE={3 * se_var:.4f}); "
           f"N=2 spacing mean={gaps.mean():.4f} (target {mean_exact:.4f}, "
           f"3SE={3 * se_mean:.4f}), spacing msq={np.mean(gaps ** 2):.4f} "
           f"(target {msq_exact:.4f}, 3SE={3 * se_msq:.4f})")
    assert var_ok
    assert mean_ok
    assert msq_ok


def test_criterion_08_transform_fluctuation_scaling():
    sizes = [16, 32, 64]
    variances = []
    for i, n in enumerate(sizes):
        run = simulate(SdeConfig(n_dim=n, mode="fixed_beta", beta=0.5,
                                 sigma=1.0, dt=1e-3, burn_in=30.0,
                                 n_samples=400, sample_stride=2.0,
                                 seed=700 + i))
        z = 2.0j * math.sqrt(n)
        gs = np.array([stieltjes_sample(s, z) for s in run])
        variances.append(np.var(gs.real) + np.var(gs.imag))
    design = np.column_stack([np.ones(3), np.log(sizes)])
    (_, slope), *_ = np.linalg.lstsq(design, np.log(variances), rcond=None)
    ok = abs(slope + 3.0) <= 0.5
    report(8, ok, "Var[G(2i sqrt(N))] = "
           + ", ".join(f"{v:.3e}" for v in variances)
           + f" for N={sizes}; log-log slope={slope:.3f} (target -3 +- 0.5)")
    assert abs(slope + 3.0) <= 0.5


def test_criterion_09_eigenvector_haar_law():
    _, snaps = simulate_switched(10, 0.5, 50, sigma=1.0, dt=2e-3,
                                 total_time=1600.0, burn_in=20.0, stride=1.0,
                                 seed=808, collect_vectors=True)
    e = np.zeros(10)
    e[2] = 1.0
    overlaps = haar_overlap_samples(snaps, e, index=0)
    se = batch_se(overlaps)
    mean_ok = abs(overlaps.mean() - 0.1) <= 3.0 * se
    beta_cdf = stats.beta(0.5, 4.5).cdf
    ks = ks_distance(overlaps, beta_cdf)
    ks_ok = ks <= 0.05

    m0 = np.diag(np.linspace(-2.0, 2.0, 10))
    _, frozen = simulate_switched(10, 0.0, 10, sigma=1.0, dt=2e-3,
                                  total_time=200.0, burn_in=5.0, stride=1.0,
                                  seed=809, m0=m0, collect_vectors=True)
    frozen_overlaps = haar_overlap_samples(frozen, e, index=0)
    ks_frozen = ks_distance(frozen_overlaps, beta_cdf)
    control_ok = ks_frozen > 0.05

    ok = mean_ok and ks_ok and control_ok
    report(9, ok, f"snapshots={len(snaps)}, mean overlap={overlaps.mean():.4f} "
           f"(target 0.1, 3SE={3 * se:.4f}), KS={ks:.4f} (tol 0.05); "
           f"frozen-basis control KS={ks_frozen:.3f} (must exceed 0.05)")
    assert mean_ok
    assert ks_ok
    assert control_ok


def test_criterion_10_special_function_oracles():
    lam_grid = np.array([0.0, 0.5, 1.0, 2.0, 5.0])
    worst = 0.0
    for c in (0.25, 0.5, 1.0, 2.0, 5.0, 10.0):
        ode_vals = log_abs_d2(c, lam_grid)
        for lam, ode_val in zip(lam_grid, ode_vals):
            ref = 2.0 * math.log(abs(pcf_quadrature(c, lam)))
            worst = max(worst, abs(ode_val - ref))
    drift = max(wronskian_drift(c, 5.0) for c in (0.5, 2.0, 10.0))
    ok = worst <= 1e-7 and drift <= 1e-8
    report(10, ok, f"dual-route lattice gap={worst:.2e} (tol 1e-7), "
           f"Wronskian drift={drift:.2e} (tol 1e-8)")
    assert worst <= 1e-7
    assert drift <= 1e-8
