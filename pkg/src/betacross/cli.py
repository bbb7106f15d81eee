"""Command-line front end.

Subcommands: simulate-sde, simulate-matrix, density, analyze nnsd, and
verify.  Every run writes a manifest JSON with the fully resolved
configuration (defaults, config file, then explicit flags, in that
order of precedence), so re-running with --config <manifest> reproduces
the outputs byte for byte.

Exit codes: 0 success, 1 runtime failure (including failed verify
checks), 2 configuration errors.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import io
from .density import DensityModel, kerov_moment, ode_residual
from .eigen_sde import SdeConfig, simulate_with_stats
from .matrix_process import simulate_switched
from .special_fn import log_abs_d2, pcf_quadrature, wronskian_drift
from .spectral_stats import moment, nns, wigner_surmise, wigner_surmise_cdf, ks_distance

_SDE_DEFAULTS = {
    "n_dim": 8, "mode": "fixed_beta", "beta": 0.5, "c_param": 1.0, "p": 0.5,
    "switch_rate": 100, "sigma": 1.0, "dt": 1e-3, "burn_in": 40.0,
    "samples": 100, "stride": 1.0, "seed": 0, "replicas": 1, "out_dir": ".",
}
_MATRIX_DEFAULTS = {
    "n_dim": 8, "p": 0.5, "switch_rate": 100, "sigma": 1.0, "dt": 1e-3,
    "total_time": 100.0, "burn_in": 40.0, "stride": 1.0, "seed": 0,
    "out_dir": ".",
}
_DENSITY_DEFAULTS = {
    "kind": "kerov", "c_param": 1.0, "beta": 0.5, "n_dim": 8, "sigma": 1.0,
    "grid": None, "out": "density.csv", "out_dir": ".",
}
_NNSD_DEFAULTS = {
    "input": None, "beta": 0.5, "sigma": 1.0, "bulk_fraction": 0.5,
    "bins": 30, "s_max": 4.0, "ref": "surmise", "out": "nnsd.csv",
    "out_dir": ".",
}
_VERIFY_DEFAULTS = {
    "suite": "moments", "c_param": 1.0, "seed": 0, "out_dir": ".",
}


class ConfigError(ValueError):
    pass


def _add(parser, name, kind, **kw):
    parser.add_argument(name, type=kind, default=argparse.SUPPRESS, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="betacross")
    sub = parser.add_subparsers(dest="command", required=True)

    sde = sub.add_parser("simulate-sde", help="run the eigenvalue gas")
    _add(sde, "--n-dim", int)
    _add(sde, "--mode", str, choices=["fixed_beta", "crossover", "switched"])
    _add(sde, "--beta", float)
    _add(sde, "--c-param", float)
    _add(sde, "--p", float)
    _add(sde, "--switch-rate", int)
    _add(sde, "--sigma", float)
    _add(sde, "--dt", float)
    _add(sde, "--burn-in", float)
    _add(sde, "--samples", int)
    _add(sde, "--stride", float)
    _add(sde, "--seed", int)
    _add(sde, "--replicas", int)
    _add(sde, "--out-dir", str)
    _add(sde, "--config", str)

    mat = sub.add_parser("simulate-matrix", help="run the switched matrix process")
    _add(mat, "--n-dim", int)
    _add(mat, "--p", float)
    _add(mat, "--switch-rate", int)
    _add(mat, "--sigma", float)
    _add(mat, "--dt", float)
    _add(mat, "--total-time", float)
    _add(mat, "--burn-in", float)
    _add(mat, "--stride", float)
    _add(mat, "--seed", int)
    _add(mat, "--out-dir", str)
    _add(mat, "--config", str)

    den = sub.add_parser("density", help="tabulate a closed-form density")
    _add(den, "--kind", str, choices=["gaussian", "semicircle", "kerov", "corrected"])
    _add(den, "--c-param", float)
    _add(den, "--beta", float)
    _add(den, "--n-dim", int)
    _add(den, "--sigma", float)
    _add(den, "--grid", str, help="lo:hi:count")
    _add(den, "--out", str)
    _add(den, "--out-dir", str)
    _add(den, "--config", str)

    ana = sub.add_parser("analyze", help="post-process simulation output")
    ana_sub = ana.add_subparsers(dest="analysis", required=True)
    nnsd = ana_sub.add_parser("nnsd", help="spacing histogram with a reference curve")
    _add(nnsd, "--input", str)
    _add(nnsd, "--beta", float)
    _add(nnsd, "--sigma", float)
    _add(nnsd, "--bulk-fraction", float)
    _add(nnsd, "--bins", int)
    _add(nnsd, "--s-max", float)
    _add(nnsd, "--ref", str, choices=["surmise", "poisson"])
    _add(nnsd, "--out", str)
    _add(nnsd, "--out-dir", str)
    _add(nnsd, "--config", str)

    ver = sub.add_parser("verify", help="self-checks with a pass/fail table")
    _add(ver, "--suite", str, choices=["moments", "density", "dual-route"])
    _add(ver, "--c-param", float)
    _add(ver, "--seed", int)
    _add(ver, "--out-dir", str)
    _add(ver, "--config", str)

    return parser


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    merged = dict(defaults)
    given = {k: v for k, v in vars(args).items()
             if k not in ("command", "analysis", "config")}
    config_path = getattr(args, "config", None)
    if config_path is not None:
        file_cfg = io.read_config_json(config_path)
        unknown = sorted(set(file_cfg) - set(defaults))
        if unknown:
            raise ConfigError(f"unknown config keys {unknown} in {config_path}")
        merged.update(file_cfg)
    merged.update(given)
    return merged


def _ensure_out_dir(cfg: dict) -> Path:
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def _sde_config(cfg: dict, replica_seed: int | None = None) -> SdeConfig:
    kwargs = dict(n_dim=cfg["n_dim"], mode=cfg["mode"], sigma=cfg["sigma"],
                  dt=cfg["dt"], burn_in=cfg["burn_in"], n_samples=cfg["samples"],
                  sample_stride=cfg["stride"], seed=cfg["seed"])
    if cfg["mode"] == "fixed_beta":
        kwargs["beta"] = cfg["beta"]
    elif cfg["mode"] == "crossover":
        kwargs["coupling_c"] = cfg["c_param"]
    else:
        kwargs["switch_p"] = cfg["p"]
        kwargs["switch_rate"] = cfg["switch_rate"]
    return SdeConfig(**kwargs)


def _cmd_simulate_sde(cfg: dict) -> int:
    config = _sde_config(cfg)
    replicas = cfg["replicas"]
    if replicas < 1:
        raise ConfigError("--replicas must be >= 1")
    if replicas == 1:
        results = [simulate_with_stats(config, replica=0)]
    else:
        with ThreadPoolExecutor(max_workers=min(replicas, 8)) as pool:
            results = list(pool.map(
                lambda r: simulate_with_stats(config, replica=r),
                range(replicas)))
    samples = [s for run, _ in results for s in run]
    counters: dict = {"n_samples": len(samples), "n_replicas": replicas}
    for _, stats in results:
        for key, val in stats.items():
            counters[key] = counters.get(key, 0) + val
    out_dir = _ensure_out_dir(cfg)
    io.write_samples_csv(out_dir / "samples.csv", samples)
    io.write_manifest(out_dir / "manifest.json", "simulate-sde", cfg, counters)
    return 0


def _cmd_simulate_matrix(cfg: dict) -> int:
    samples = simulate_switched(
        cfg["n_dim"], cfg["p"], cfg["switch_rate"], sigma=cfg["sigma"],
        dt=cfg["dt"], total_time=cfg["total_time"], burn_in=cfg["burn_in"],
        stride=cfg["stride"], seed=cfg["seed"])
    out_dir = _ensure_out_dir(cfg)
    io.write_samples_csv(out_dir / "samples.csv", samples)
    io.write_manifest(out_dir / "manifest.json", "simulate-matrix", cfg,
                      {"n_samples": len(samples)})
    return 0


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid must look like lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--grid must look like lo:hi:count, got {text!r}") from exc
    if count < 2 or not hi > lo:
        raise ConfigError("--grid needs hi > lo and count >= 2")
    return np.linspace(lo, hi, count)


def _density_model(cfg: dict) -> DensityModel:
    kind = cfg["kind"]
    if kind == "gaussian":
        return DensityModel.gaussian(cfg["sigma"])
    if kind == "semicircle":
        return DensityModel.semicircle(cfg["beta"], cfg["n_dim"], cfg["sigma"])
    if kind == "kerov":
        return DensityModel.kerov(cfg["c_param"])
    return DensityModel.corrected(cfg["beta"], cfg["n_dim"], cfg["sigma"])


def _cmd_density(cfg: dict) -> int:
    model = _density_model(cfg)
    grid = _parse_grid(cfg["grid"]) if cfg["grid"] else None
    curve = model.curve(grid)
    out_dir = _ensure_out_dir(cfg)
    out_path = Path(cfg["out"])
    if not out_path.is_absolute():
        out_path = out_dir / out_path
    curve.write_csv(out_path)
    io.write_manifest(out_dir / "manifest.json", "density", cfg,
                      {"rows": len(curve.lambda_grid)})
    return 0


def _cmd_analyze_nnsd(cfg: dict) -> int:
    if not cfg["input"]:
        raise ConfigError("--input is required for analyze nnsd")
    samples = io.read_samples_csv(cfg["input"])
    n_dim = len(samples[0].lam)
    model = DensityModel.corrected(cfg["beta"], n_dim, cfg["sigma"])
    spacing_set = nns(samples, bulk_fraction=cfg["bulk_fraction"], model=model)
    edges = np.linspace(0.0, cfg["s_max"], cfg["bins"] + 1)
    p_emp, _ = np.histogram(spacing_set.spacings, bins=edges, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    if cfg["ref"] == "surmise":
        p_ref = wigner_surmise(cfg["beta"], centers)
        ref_cdf = lambda s: wigner_surmise_cdf(cfg["beta"], s)
    else:
        p_ref = np.exp(-centers)
        ref_cdf = lambda s: 1.0 - np.exp(-s)
    out_dir = _ensure_out_dir(cfg)
    out_path = Path(cfg["out"])
    if not out_path.is_absolute():
        out_path = out_dir / out_path
    io.write_nnsd_csv(out_path, centers, p_emp, p_ref)
    io.write_json(str(out_path) + ".meta.json", {
        "beta": cfg["beta"],
        "bulk_fraction": spacing_set.bulk_fraction,
        "ks_to_reference": ks_distance(spacing_set.spacings, ref_cdf),
        "n_dropped": spacing_set.n_dropped,
        "n_samples": spacing_set.n_samples,
        "n_spacings": int(spacing_set.spacings.size),
        "reference": cfg["ref"],
    })
    io.write_manifest(out_dir / "manifest.json", "analyze nnsd", cfg,
                      {"n_spacings": int(spacing_set.spacings.size),
                       "n_dropped": spacing_set.n_dropped})
    return 0


def _print_table(rows: list[tuple]) -> None:
    header = ("check", "expected", "measured", "tolerance", "status")
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(5)]
    for row in [header] + rows:
        print("  ".join(str(v).ljust(w) for v, w in zip(row, widths)))


def _verify_moments(cfg: dict) -> list[tuple]:
    c = cfg["c_param"]
    n = 20
    config = SdeConfig(n_dim=n, mode="crossover", coupling_c=c, sigma=1.0,
                       dt=2e-3, burn_in=30.0, n_samples=200,
                       sample_stride=2.0, seed=cfg["seed"])
    run, _ = simulate_with_stats(config)
    sum_sq = n + c * (n - 1)
    sum_quart = 2.0 * (c / n) * ((n - 1.5) * sum_sq + n / 2.0) + 3.0 * sum_sq
    rows = []
    for k, exact, family in ((2, sum_sq / n, kerov_moment(c, 2)),
                             (4, sum_quart / n, kerov_moment(c, 4))):
        est = moment(run, k)
        ok = abs(est.value - exact) <= 3.0 * est.se
        rows.append((f"m{k} (family limit {family:.6g})", f"{exact:.6g}",
                     f"{est.value:.6g}", f"3*SE={3 * est.se:.2g}",
                     "ok" if ok else "FAIL"))
    return rows


def _verify_density(cfg: dict) -> list[tuple]:
    c = cfg["c_param"]
    model = DensityModel.kerov(c)
    curve = model.curve()
    rows = []
    norm = curve.integral()
    rows.append(("normalization", "1", f"{norm:.8g}", "1e-05",
                 "ok" if abs(norm - 1.0) <= 1e-5 else "FAIL"))
    for k, tol in ((2, 1e-4), (4, 1e-3)):
        exact = kerov_moment(c, k)
        got = curve.moment(k)
        rel = abs(got - exact) / exact
        rows.append((f"m{k}", f"{exact:.6g}", f"{got:.6g}", f"rel {tol:g}",
                     "ok" if rel <= tol else "FAIL"))
    resid = ode_residual(c, curve, [1.5j, 1.0 + 2.0j, -2.0 + 1.0j])
    rows.append(("ode residual", "0", f"{resid:.3g}", "5e-03",
                 "ok" if resid <= 5e-3 else "FAIL"))
    return rows


def _verify_dual_route(cfg: dict) -> list[tuple]:
    lam_grid = np.array([0.0, 0.5, 1.0, 2.0, 5.0])
    worst = 0.0
    for c in (0.25, 0.5, 1.0, 2.0, 5.0, 10.0):
        ode_vals = log_abs_d2(c, lam_grid)
        for lam, ode_val in zip(lam_grid, ode_vals):
            ref = 2.0 * np.log(abs(pcf_quadrature(c, lam)))
            worst = max(worst, abs(ode_val - ref))
    rows = [("quadrature vs ode lattice", "0", f"{worst:.3g}", "1e-07",
             "ok" if worst <= 1e-7 else "FAIL")]
    drift = max(wronskian_drift(c, 5.0) for c in (0.5, 2.0, 10.0))
    rows.append(("wronskian drift", "0", f"{drift:.3g}", "1e-08",
                 "ok" if drift <= 1e-8 else "FAIL"))
    return rows


def _cmd_verify(cfg: dict) -> int:
    suites = {"moments": _verify_moments, "density": _verify_density,
              "dual-route": _verify_dual_route}
    rows = suites[cfg["suite"]](cfg)
    _print_table(rows)
    failures = sum(1 for r in rows if r[-1] != "ok")
    out_dir = _ensure_out_dir(cfg)
    io.write_manifest(out_dir / "manifest.json", "verify", cfg,
                      {"checks": len(rows), "failures": failures})
    return 0 if failures == 0 else 1


def _merge_grid_flags(argv: list[str]) -> list[str]:
    """Let `--grid -8:8:2001` work although the value starts with '-'."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--grid" and i + 1 < len(argv):
            out.append(f"--grid={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(_merge_grid_flags(list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    dispatch = {
        "simulate-sde": (_SDE_DEFAULTS, _cmd_simulate_sde),
        "simulate-matrix": (_MATRIX_DEFAULTS, _cmd_simulate_matrix),
        "density": (_DENSITY_DEFAULTS, _cmd_density),
        "analyze": (_NNSD_DEFAULTS, _cmd_analyze_nnsd),
        "verify": (_VERIFY_DEFAULTS, _cmd_verify),
    }
    defaults, handler = dispatch[args.command]
    try:
        cfg = _resolve(args, defaults)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return handler(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
