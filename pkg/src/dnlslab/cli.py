"""Command-line entry point: resonance / reduced / toy / pde / compare / verify.

Every run writes a manifest (tool version, fully resolved configuration,
wall clock) beside its outputs; feeding a manifest's config back through
``--config`` reproduces the output bytes.
"""

import argparse
import dataclasses
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, harness, reduced, spectral, toy
from .resonance import (
    build_quad,
    check_nondegeneracy,
    gauge_corrected_gap,
    dichotomy_scan,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def _write_manifest(out_dir: Path, subcommand: str, config: dict, elapsed: float):
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "tool": "dnlslab",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "wall_clock_sec": elapsed,
    }
    with open(out_dir / "manifest.json", "w") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _load_config_file(path):
    if path is None:
        return {}
    with open(path) as handle:
        data = json.load(handle)
    if isinstance(data, dict) and "config" in data and "tool" in data:
        data = data["config"]  # accept a manifest verbatim
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _merge_config(defaults: dict, file_cfg: dict, cli_cfg: dict) -> dict:
    merged = dict(defaults)
    unknown = set(file_cfg) - set(defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    merged.update(file_cfg)
    merged.update({k: v for k, v in cli_cfg.items() if v is not None})
    return merged


def _add_common(parser):
    parser.add_argument("--config", type=Path, help="JSON config file")
    parser.add_argument("--out", type=Path, default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="reserved; all computations are deterministic")


def cmd_resonance(args) -> int:
    defaults = {"m": 101, "n": -100, "lambda_used": None, "scan_sextuples": False}
    cfg = _merge_config(defaults, _load_config_file(args.config), {
        "m": args.m, "n": args.n, "lambda_used": args.lambda_used,
        "scan_sextuples": args.scan_sextuples or None,
    })
    quad = build_quad(cfg["m"], cfg["n"])
    lam_used = cfg["lambda_used"] if cfg["lambda_used"] is not None else quad.lam
    nondeg = check_nondegeneracy(quad)
    gap = gauge_corrected_gap(quad, lam_used)
    payload = {
        "M": quad.m,
        "N": quad.n,
        "alpha1": quad.alpha1,
        "alpha2": quad.alpha2,
        "beta1": quad.beta1,
        "beta2": quad.beta2,
        "lambda": quad.lam,
        "m_star": quad.m_star,
        "nondegenerate": nondeg.ok,
        "violations": [list(map(list, v)) for v in nondeg.violations],
        "raw_gap": gap.raw_gap,
        "gauge_gap": gap.gauge_gap,
    }
    if cfg["scan_sextuples"]:
        payload["dichotomy_violations"] = [list(v) for v in dichotomy_scan(quad)]
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.out:
        start = time.perf_counter()
        with open(args.out / "resonance.json", "w") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
        _write_manifest(args.out, "resonance", cfg, time.perf_counter() - start)
    return EXIT_OK


def cmd_reduced(args) -> int:
    defaults = {
        "mu": 1.0, "k0": 0.2, "phi0": 0.0, "variant": "consistent",
        "tol": 1e-12, "horizon": None, "find_period": False, "n_samples": 1025,
    }
    cfg = _merge_config(defaults, _load_config_file(args.config), {
        "mu": args.mu, "k0": args.k0, "phi0": args.phi0, "variant": args.variant,
        "tol": args.tol, "horizon": args.horizon,
        "find_period": args.find_period or None, "n_samples": args.n_samples,
    })
    start = time.perf_counter()
    coeffs = reduced.coefficients(cfg["variant"])
    state0 = reduced.ReducedState(cfg["phi0"], cfg["k0"])
    period = None
    if cfg["find_period"] or cfg["horizon"] is None:
        period = reduced.find_period(state0, cfg["mu"], coeffs, ode_tol=cfg["tol"])
    horizon = cfg["horizon"]
    if horizon is None:
        if period.classification != "periodic":
            horizon = 10.0 / abs(cfg["mu"])
        else:
            horizon = period.full_period
    cfg["horizon"] = horizon
    traj = reduced.integrate_reduced(
        state0, cfg["mu"], coeffs, horizon=horizon, tol=cfg["tol"],
        n_samples=cfg["n_samples"],
    )
    out_dir = args.out or Path("reduced-out")
    out_dir.mkdir(parents=True, exist_ok=True)
    harness.emit_series(
        "reduced", harness.reduced_rows(traj), harness.REDUCED_COLUMNS,
        out_dir / "reduced.csv", cfg,
    )
    if period is not None:
        report = {
            "classification": period.classification,
            "half_period": period.half_period,
            "full_period": period.full_period,
            "K0": period.k0,
            "KT": period.kt,
            "exchange_defect": None
            if period.kt is None
            else abs(period.k0 + period.kt - 1.0),
        }
        print(json.dumps(report, indent=2, sort_keys=True))
        with open(out_dir / "period.json", "w") as handle:
            json.dump(report, handle, indent=2, sort_keys=True)
            handle.write("\n")
    _write_manifest(out_dir, "reduced", cfg, time.perf_counter() - start)
    return EXIT_OK


def cmd_toy(args) -> int:
    defaults = {
        "m": 101, "n": -100, "mu": 1.0, "k0": 0.2, "flavor": "gauged",
        "tol": 1e-12, "horizon": 2.0, "n_samples": 513,
    }
    cfg = _merge_config(defaults, _load_config_file(args.config), {
        "m": args.m, "n": args.n, "mu": args.mu, "k0": args.k0,
        "flavor": args.flavor, "tol": args.tol, "horizon": args.horizon,
        "n_samples": args.n_samples,
    })
    start = time.perf_counter()
    quad = build_quad(cfg["m"], cfg["n"])
    field0 = spectral.synthesize_field(
        quad, cfg["k0"], cutoff=max(512, quad.m_star * 4 + 8)
    )
    p0 = spectral.conserved_triple(field0, quad.lam, cfg["mu"]).momentum
    params = toy.ToyParams(quad, cfg["mu"], flavor=cfg["flavor"], p0=p0)
    traj = toy.integrate_toy(
        toy.canonical_amplitudes(cfg["k0"]), params, horizon=cfg["horizon"],
        tol=cfg["tol"], n_samples=cfg["n_samples"],
    )
    out_dir = args.out or Path("toy-out")
    out_dir.mkdir(parents=True, exist_ok=True)
    harness.emit_series(
        "toy", harness.toy_rows(traj), harness.TOY_COLUMNS,
        out_dir / f"toy_{cfg['flavor']}.csv", cfg,
    )
    _write_manifest(out_dir, "toy", cfg, time.perf_counter() - start)
    return EXIT_OK


def cmd_pde(args) -> int:
    defaults = {
        "m": 101, "n": -100, "mu": 1.0, "k0": 0.2, "grid": 1024,
        "cutoff": None, "dt": None, "steps": None, "sample_stride": 1,
        "delta": 0.5,
    }
    cfg = _merge_config(defaults, _load_config_file(args.config), {
        "m": args.m, "n": args.n, "mu": args.mu, "k0": args.k0,
        "grid": args.grid, "cutoff": args.cutoff, "dt": args.dt,
        "steps": args.steps, "sample_stride": args.sample_stride,
        "delta": args.delta,
    })
    start = time.perf_counter()
    quad = build_quad(cfg["m"], cfg["n"])
    lam = quad.lam
    cutoff = cfg["cutoff"] if cfg["cutoff"] is not None else cfg["grid"] // 3
    cfg["cutoff"] = cutoff
    field0 = spectral.synthesize_field(
        quad, cfg["k0"], cutoff=cutoff, grid_size=cfg["grid"]
    )
    dt = cfg["dt"] if cfg["dt"] is not None else spectral.suggested_dt(
        field0, lam, cfg["mu"]
    )
    cfg["dt"] = dt
    if cfg["steps"] is None:
        window = harness.guaranteed_window(lam, cfg["mu"], quad.m_star)
        cfg["steps"] = int(math.ceil(window / dt))
    traj = spectral.evolve(
        field0, lam, cfg["mu"], dt, cfg["steps"], sample_stride=cfg["sample_stride"]
    )
    out_dir = args.out or Path("pde-out")
    out_dir.mkdir(parents=True, exist_ok=True)
    harness.emit_series(
        "pde", harness.pde_rows(traj, quad, cfg["delta"]), harness.PDE_COLUMNS,
        out_dir / "pde.csv", cfg,
    )
    final = traj.field_at(len(traj) - 1)
    write_checkpoint(out_dir / "checkpoint", final, lam, cfg["mu"], quad)
    _write_manifest(out_dir, "pde", cfg, time.perf_counter() - start)
    return EXIT_OK


def write_checkpoint(prefix: Path, field: spectral.SpectralField, lam, mu, quad):
    """Flat binary of complex coefficients plus a JSON sidecar."""
    with open(f"{prefix}.bin", "wb") as handle:
        handle.write(np.ascontiguousarray(field.coefficients, dtype=complex).tobytes())
    sidecar = {
        "t": field.t,
        "cutoff": field.cutoff,
        "grid_size": field.grid_size,
        "lambda": lam,
        "mu": mu,
        "quad": {"M": quad.m, "N": quad.n},
    }
    with open(f"{prefix}.json", "w") as handle:
        json.dump(sidecar, handle, indent=2, sort_keys=True)
        handle.write("\n")


def read_checkpoint(prefix: Path):
    with open(f"{prefix}.json") as handle:
        sidecar = json.load(handle)
    raw = np.fromfile(f"{prefix}.bin", dtype=complex)
    field = spectral.SpectralField(
        cutoff=sidecar["cutoff"], grid_size=sidecar["grid_size"],
        coefficients=raw, t=sidecar["t"],
    )
    return field, sidecar


def _run_config_from(cfg: dict) -> harness.RunConfig:
    fields = {f.name for f in dataclasses.fields(harness.RunConfig)}
    return harness.RunConfig(**{k: v for k, v in cfg.items() if k in fields})


def cmd_compare(args) -> int:
    defaults = {f.name: getattr(harness.RunConfig(), f.name)
                for f in dataclasses.fields(harness.RunConfig)}
    defaults["phases"] = list(defaults["phases"])
    cfg = _merge_config(defaults, _load_config_file(args.config), {
        "m": args.m, "n": args.n, "mu": args.mu, "k0": args.k0,
        "pde_horizon": args.pde_horizon,
    })
    cfg["phases"] = tuple(cfg["phases"])
    start = time.perf_counter()
    config = _run_config_from(cfg)
    out_dir = args.out or Path("compare-out")
    report = harness.run_exchange_experiment(config, out_dir=out_dir)
    report.pop("trajectories", None)
    levels = report.pop("levels")
    report["levels"] = {
        name: {"ok": lv.ok, "error": lv.error, **{
            k: v for k, v in lv.data.items() if not hasattr(v, "classification")
        }}
        for name, lv in levels.items()
    }
    print(json.dumps(report, indent=2, sort_keys=True, default=str))
    with open(out_dir / "report.json", "w") as handle:
        json.dump(report, handle, indent=2, sort_keys=True, default=str)
        handle.write("\n")
    cfg["phases"] = list(cfg["phases"])
    _write_manifest(out_dir, "compare", cfg, time.perf_counter() - start)
    failed = any(not lv["ok"] for lv in report["levels"].values())
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_verify(args) -> int:
    from . import acceptance

    out_dir = args.out or Path("verify-out")
    start = time.perf_counter()
    results = acceptance.run_all(out_dir)
    for res in results:
        print(res.line())
    _write_manifest(out_dir, "verify", {"criteria": len(results)},
                    time.perf_counter() - start)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dnlslab",
        description="Resonant energy-transfer laboratory for the quintic "
        "derivative NLS on the torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resonance", help="cluster report as JSON")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--lambda-used", dest="lambda_used", type=float)
    p.add_argument("--scan-sextuples", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("reduced", help="planar flow CSV and period report")
    p.add_argument("--mu", type=float)
    p.add_argument("--k0", type=float)
    p.add_argument("--phi0", type=float)
    p.add_argument("--variant", choices=["verbatim", "consistent"])
    p.add_argument("--tol", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--find-period", action="store_true")
    p.add_argument("--n-samples", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_reduced)

    p = sub.add_parser("toy", help="four-mode model CSV")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--k0", type=float)
    p.add_argument("--flavor", choices=["full", "gauged"])
    p.add_argument("--tol", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--n-samples", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_toy)

    p = sub.add_parser("pde", help="pseudospectral run CSV and checkpoint")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--k0", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--cutoff", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--sample-stride", type=int)
    p.add_argument("--delta", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_pde)

    p = sub.add_parser("compare", help="cross-model exchange experiment")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--k0", type=float)
    p.add_argument("--pde-horizon", choices=["window", "period"])
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the acceptance suite")
    _add_common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except (spectral.SpectralNanError, reduced.ReducedDomainError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
