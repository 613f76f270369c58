"""Command-line front end.

Subcommands
-----------
kernel-check          evaluate the kernel norm identity on the grid
selftest              exact discrete identities and sampling sanity checks
verify-multiplication product-rule residuals over the whole process catalog
convergence           Monte Carlo error sweep, CSV + JSON reports
identify              per-order coefficient estimates for one configuration

Exit status: 0 success, 1 a check or acceptance band failed, 2 usage or
configuration error.  Configs are JSON; see the README for the schema.
Numbers in reports are printed with ``repr``, the shortest decimal that
round-trips, so identical configurations give byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bohr import (
    CLOSED_FORM,
    RECOVERY_MODES,
    BohrConfig,
    identify_a,
    recover_b,
)
from .brownian import SeedSpec, sample_path
from .catalog import (
    CATALOG_KINDS,
    DRIFT_DET,
    DRIFT_W1,
    cosine,
    eval_functionals,
    make_process,
)
from .errors import ConfigError, NumericalFailureError
from .experiment import (
    ExperimentConfig,
    config_from_jsonable,
    config_hash,
    config_jsonable,
    fit_decay,
    run_convergence,
)
from .grid import TimeGrid, dirichlet_closed_form, dirichlet_kernel, eval_basis, kernel_l2_identity
from .malliavin import (
    DiscreteFunctional,
    lemma_fdelta_residual,
    prop1_residual,
    prop2_residual,
)

DEFAULT_SEED = 20260819

IDENTIFY_CSV_HEADER = (
    "process,n,N,m,P,seed,mode,a_mean_re,a_mean_im,a_se,b_mean_re,b_mean_im,b_se"
)


def _load_config(path_str: str) -> dict:
    path = Path(path_str)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data


def _apply_overrides(data: dict, args: argparse.Namespace) -> dict:
    if args.seed is not None:
        data["master_seed"] = args.seed
    if args.paths is not None:
        data["paths"] = args.paths
    if args.mesh is not None:
        data["m"] = args.mesh
    return data


def _check_line(ok: bool, name: str, detail: str) -> bool:
    print(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}")
    return ok


def _catalog_spec(kind: str, extra: dict | None = None):
    """Catalog entry with enough data to instantiate (DET needs a table)."""
    params = dict(extra or {})
    if kind == "DET":
        params.setdefault("f", cosine())
    return make_process(kind, params)


# ---------------------------------------------------------------------------
# kernel-check


def cmd_kernel_check(args: argparse.Namespace) -> int:
    value = kernel_l2_identity(args.N, args.m)
    expected = 2 * args.N + 1
    rel = abs(value - expected) / expected
    print(f"{value:.12g}")
    # cross-check the summed kernel against its closed form off the grid
    probe = np.linspace(0.05, 0.95, 7)
    gap = float(
        np.max(np.abs(dirichlet_kernel(args.N, probe) - dirichlet_closed_form(args.N, 2 * probe)))
    )
    print(
        f"kernel norm identity: N={args.N} m={args.m} expected={expected} "
        f"rel_err={rel:.3e} closed_form_gap={gap:.3e}"
    )
    return 0 if rel <= 1e-9 and gap <= 1e-9 * expected else 1


# ---------------------------------------------------------------------------
# selftest


def _selftest_functionals(path) -> list[tuple[str, DiscreteFunctional]]:
    m = path.grid.m
    s = 1.0 / math.sqrt(m)
    w1 = float(path.terminal)
    return [
        ("W_1", DiscreteFunctional(value=w1, partials=np.full(m, s))),
        ("W_1^2-1", DiscreteFunctional(value=w1 * w1 - 1.0, partials=np.full(m, 2.0 * w1 * s))),
        ("const", DiscreteFunctional(value=2.5, partials=np.zeros(m))),
    ]


def cmd_selftest(args: argparse.Namespace) -> int:
    ok = True
    seed = args.seed

    # kernel norm identity at several widths
    for N in (1, 5, 32):
        m = 4 * N + 4
        value = kernel_l2_identity(N, m)
        rel = abs(value - (2 * N + 1)) / (2 * N + 1)
        ok &= _check_line(rel <= 1e-9, f"kernel identity N={N}", f"rel_err={rel:.3e}")

    # basis orthogonality through the left-tag quadrature
    m = 64
    t = TimeGrid(m).left_nodes
    worst = 0.0
    for k in range(-5, 6):
        for l in range(-5, 6):
            val = np.sum(eval_basis(k, t) * eval_basis(-l, t)) / m
            worst = max(worst, abs(val - (1.0 if k == l else 0.0)))
    ok &= _check_line(worst <= 1e-12, "basis orthogonality", f"max_gap={worst:.3e}")

    # integration by parts on a few paths
    grid = TimeGrid(512)
    worst = 0.0
    for idx in range(20):
        path = sample_path(SeedSpec(seed, idx), grid)
        for _, functional in _selftest_functionals(path):
            for n in (0, 1, -3):
                e_nodes = eval_basis(n, grid.left_nodes)
                worst = max(worst, lemma_fdelta_residual(functional, e_nodes, path))
    ok &= _check_line(worst <= 1e-10, "integration by parts", f"max_residual={worst:.3e}")

    # product rules over the catalog
    worst1 = worst2 = 0.0
    for kind in CATALOG_KINDS:
        plain = _catalog_spec(kind)
        drifted = _catalog_spec(kind, {"g": cosine(), "drift": DRIFT_DET})
        for idx in range(10):
            path = sample_path(SeedSpec(seed, 1000 + idx), grid)
            for n in (0, 1):
                e_nodes = eval_basis(n, grid.left_nodes)
                worst1 = max(worst1, prop1_residual(plain, e_nodes, path))
                worst2 = max(worst2, prop2_residual(drifted, e_nodes, path))
    ok &= _check_line(worst1 <= 1e-9, "product rule, stochastic factor", f"max_residual={worst1:.3e}")
    ok &= _check_line(worst2 <= 1e-9, "product rule, drift factor", f"max_residual={worst2:.3e}")

    # sampling sanity: terminal variance and the discrete isometry
    paths = 400
    term = np.empty(paths)
    iso = np.empty(paths)
    for idx in range(paths):
        path = sample_path(SeedSpec(seed, 2000 + idx), grid)
        term[idx] = path.terminal
        iso[idx] = abs(np.dot(eval_basis(-1, grid.left_nodes), path.increments)) ** 2
    var = float(np.var(term, ddof=1))
    ok &= _check_line(0.85 <= var <= 1.15, "terminal variance", f"var={var:.4f}")
    iso_mean = float(np.mean(iso))
    ok &= _check_line(abs(iso_mean - 1.0) <= 0.2, "basis isometry", f"mean={iso_mean:.4f}")

    # prefix property: a longer run reproduces the shorter run's paths
    spec = make_process("CONST")
    base = ExperimentConfig(
        spec=spec, n_list=(4, 8), M=1, m=128, paths=100, master_seed=seed, block_size=32
    )
    longer = ExperimentConfig(
        spec=spec, n_list=(4, 8), M=1, m=128, paths=160, master_seed=seed, block_size=32
    )
    short_res = run_convergence(base)
    long_res = run_convergence(longer)
    same = bool(np.array_equal(short_res.abs_errors, long_res.abs_errors[:100]))
    ok &= _check_line(same, "prefix property", f"first 100 of 160 paths bitwise equal: {same}")

    print("selftest:", "all checks passed" if ok else "FAILED")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# verify-multiplication


def cmd_verify_multiplication(args: argparse.Namespace) -> int:
    grid = TimeGrid(args.m)
    tol_lemma = 1e-10
    tol_props = 1e-9
    ok = True

    worst = 0.0
    for idx in range(args.paths):
        path = sample_path(SeedSpec(args.seed, idx), grid)
        for _, functional in _selftest_functionals(path):
            for n in (0, 1, -3):
                e_nodes = eval_basis(n, grid.left_nodes)
                worst = max(worst, lemma_fdelta_residual(functional, e_nodes, path))
    ok &= _check_line(worst <= tol_lemma, "integration by parts", f"max_residual={worst:.3e}")

    for kind in CATALOG_KINDS:
        specs = [
            _catalog_spec(kind),
            _catalog_spec(kind, {"g": cosine(), "drift": DRIFT_DET}),
            _catalog_spec(kind, {"g": cosine(), "drift": DRIFT_W1}),
        ]
        worst1 = worst2 = 0.0
        for idx in range(args.paths):
            path = sample_path(SeedSpec(args.seed, idx), grid)
            for n in (0, 1):
                e_nodes = eval_basis(n, grid.left_nodes)
                worst1 = max(worst1, prop1_residual(specs[0], e_nodes, path))
                for spec in specs[1:]:
                    worst2 = max(worst2, prop2_residual(spec, e_nodes, path))
        ok &= _check_line(
            worst1 <= tol_props, f"{kind} stochastic product rule", f"max_residual={worst1:.3e}"
        )
        ok &= _check_line(
            worst2 <= tol_props, f"{kind} drift product rule", f"max_residual={worst2:.3e}"
        )

    print("verify-multiplication:", "all residuals in tolerance" if ok else "FAILED")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# convergence


def cmd_convergence(args: argparse.Namespace) -> int:
    data = _apply_overrides(_load_config(args.config), args)
    band = data.get("slope_band")
    band_orders = data.get("slope_band_orders", [0])
    cfg = config_from_jsonable(data)
    result = run_convergence(cfg)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "convergence.csv"
    json_path = out_dir / "convergence.json"
    result.write_csv(csv_path)
    result.write_json(json_path)
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    print(f"config_hash={config_hash(cfg)}")
    print(f"runtime_seconds={result.runtime_seconds:.3f}")

    status = 0
    for n in cfg.orders:
        fit = fit_decay(result, n)
        line = f"n={n} slope={fit.slope:.4f} half_width={fit.half_width:.4f}"
        if band is not None and n in band_orders:
            lo, hi = float(band[0]), float(band[1])
            inside = lo <= fit.slope <= hi
            line += f" band=[{lo}, {hi}] {'ok' if inside else 'OUT'}"
            if not inside:
                status = 1
        print(line)
    if status:
        print("slope outside the configured band", file=sys.stderr)
    return status


# ---------------------------------------------------------------------------
# identify


def run_identify(cfg: ExperimentConfig, mode: str) -> dict:
    """Per-order estimates of the two coefficient processes.

    Runs the estimator path by path at width N = max(cfg.n_list) and
    aggregates per order: the complex sample mean and a scalar standard
    error ``sqrt((var(re) + var(im)) / paths)`` for each coefficient.
    """
    if mode not in RECOVERY_MODES:
        raise ConfigError(f"mode must be one of {RECOVERY_MODES}, got {mode!r}")
    grid = TimeGrid(cfg.m)
    bohr_cfg = BohrConfig(N=max(cfg.n_list), M=cfg.M, mode=mode)
    a_vals = np.empty((cfg.paths, 2 * cfg.M + 1), dtype=complex)
    b_vals = np.empty_like(a_vals)
    for idx in range(cfg.paths):
        path = sample_path(SeedSpec(cfg.master_seed, idx), grid)
        pf = eval_functionals(cfg.spec, path)
        a_hat = identify_a(pf, bohr_cfg)
        b_hat = recover_b(pf, a_hat, bohr_cfg)
        a_vals[idx] = a_hat.values
        b_vals[idx] = b_hat.values
    if not (np.all(np.isfinite(a_vals)) and np.all(np.isfinite(b_vals))):
        raise NumericalFailureError("non-finite estimate in identify run")

    def stats(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mean = block.mean(axis=0)
        var = block.real.var(axis=0, ddof=1) + block.imag.var(axis=0, ddof=1)
        return mean, np.sqrt(var / cfg.paths)

    a_mean, a_se = stats(a_vals)
    b_mean, b_se = stats(b_vals)
    rows = []
    for oi, n in enumerate(cfg.orders):
        rows.append(
            {
                "process": cfg.spec.label,
                "n": n,
                "N": bohr_cfg.N,
                "m": cfg.m,
                "P": cfg.paths,
                "seed": cfg.master_seed,
                "mode": mode,
                "a_mean_re": float(a_mean[oi].real),
                "a_mean_im": float(a_mean[oi].imag),
                "a_se": float(a_se[oi]),
                "b_mean_re": float(b_mean[oi].real),
                "b_mean_im": float(b_mean[oi].imag),
                "b_se": float(b_se[oi]),
            }
        )
    return {
        "version": __version__,
        "config_hash": config_hash(cfg),
        "config": config_jsonable(cfg),
        "mode": mode,
        "rows": rows,
    }


def _identify_csv(report: dict) -> str:
    lines = [IDENTIFY_CSV_HEADER]
    for row in report["rows"]:
        lines.append(
            f"{row['process']},{row['n']},{row['N']},{row['m']},{row['P']},{row['seed']},"
            f"{row['mode']},{row['a_mean_re']!r},{row['a_mean_im']!r},{row['a_se']!r},"
            f"{row['b_mean_re']!r},{row['b_mean_im']!r},{row['b_se']!r}"
        )
    return "\n".join(lines) + "\n"


def cmd_identify(args: argparse.Namespace) -> int:
    data = _apply_overrides(_load_config(args.config), args)
    mode = data.get("mode", CLOSED_FORM)
    cfg = config_from_jsonable(data)
    report = run_identify(cfg, mode)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "identify.csv"
    json_path = out_dir / "identify.json"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_identify_csv(report))
    with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    for row in report["rows"]:
        print(
            f"n={row['n']} a_mean={row['a_mean_re']:+.6f}{row['a_mean_im']:+.6f}j "
            f"(se {row['a_se']:.2e}) b_mean={row['b_mean_re']:+.6f}{row['b_mean_im']:+.6f}j "
            f"(se {row['b_se']:.2e})"
        )
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfc-lab",
        description="Stochastic Fourier coefficient experiments on a discretized Wiener space.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("kernel-check", help="kernel norm identity on the grid")
    p.add_argument("--N", type=int, required=True, help="kernel half-width")
    p.add_argument("--m", type=int, required=True, help="grid cells (need m >= 4N+4)")
    p.set_defaults(func=cmd_kernel_check)

    p = sub.add_parser("selftest", help="exact identities and sampling sanity checks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("verify-multiplication", help="product rule residuals over the catalog")
    p.add_argument("--m", type=int, default=1024, help="grid cells")
    p.add_argument("--paths", type=int, default=100, help="paths per check")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify_multiplication)

    for name, func, help_text in (
        ("convergence", cmd_convergence, "Monte Carlo error sweep with CSV/JSON reports"),
        ("identify", cmd_identify, "per-order coefficient estimates"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--paths", type=int, default=None, help="override path count")
        p.add_argument("--mesh", type=int, default=None, help="override grid cells m")
        p.set_defaults(func=func)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
