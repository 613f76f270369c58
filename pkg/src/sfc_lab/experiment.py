"""Monte Carlo convergence experiments for the coefficient estimator.

Determinism contract
--------------------
Results are a pure function of the configuration:

* every path comes from its own counter-based substream keyed by
  ``(master_seed, path_index)``;
* paths are processed in fixed blocks of ``block_size`` rows, zero-padded to
  a constant shape, so the vectorized arithmetic sees identical shapes
  whatever the total path count -- per-path outputs are bitwise independent
  of both the worker schedule and the run's total P (prefix property);
* per-path statistics land in arrays indexed by path, and all reductions run
  afterwards in ascending path order with exactly rounded (compensated)
  summation via ``math.fsum``.

``SFC_LAB_THREADS`` caps how many blocks are processed concurrently and has
no effect on any reported number.  Wall-clock time is kept on the in-memory
result only; serialized artifacts contain nothing volatile, so identical
configurations yield identical bytes.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from hashlib import sha256
from typing import Mapping

import numpy as np

from . import __version__
from .bohr import grid_supports
from .catalog import (
    ProcessSpec,
    TrigPoly,
    block_functionals,
    block_true_fourier_a,
    make_process,
)
from .errors import ConfigError, NumericalFailureError
from .grid import TimeGrid
from .brownian import SeedSpec, substream

THREADS_ENV = "SFC_LAB_THREADS"

CSV_HEADER = "process,n,N,m,P,seed,mean_abs_err,lp_err,std_err"


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one convergence sweep."""

    spec: ProcessSpec
    n_list: tuple[int, ...] = (4, 8, 16, 32, 64, 128, 256)
    M: int = 4
    m: int = 4096
    paths: int = 2000
    master_seed: int = 20260819
    p_exponent: float = 2.0
    block_size: int = 256

    def __post_init__(self) -> None:
        if len(self.n_list) == 0:
            raise ConfigError("n_list must not be empty")
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ConfigError(f"n_list must be strictly increasing, got {self.n_list}")
        if self.n_list[0] < 1:
            raise ConfigError(f"averaging widths must be >= 1, got {self.n_list[0]}")
        if self.M < 0:
            raise ConfigError(f"M must be >= 0, got {self.M}")
        if not grid_supports(self.m, max(self.n_list), self.M):
            raise ConfigError(
                f"m={self.m} too coarse: need m >= 8 (max N + M) = "
                f"{8 * (max(self.n_list) + self.M)}"
            )
        if self.paths < 100:
            raise ConfigError(f"paths must be >= 100, got {self.paths}")
        if self.p_exponent < 1.0:
            raise ConfigError(f"p_exponent must be >= 1, got {self.p_exponent}")
        if self.block_size < 1:
            raise ConfigError(f"block_size must be >= 1, got {self.block_size}")
        SeedSpec(self.master_seed, 0)  # range check

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(range(-self.M, self.M + 1))


def _table_jsonable(table) -> object:
    if table is None:
        return None
    if isinstance(table, TrigPoly):
        return {"coeffs": {str(k): [c.real, c.imag] for k, c in table.coeffs}}
    return {"values": [float(v) for v in np.asarray(table)]}


def table_from_jsonable(obj) -> object:
    """Inverse of the table serialization used in configs and reports."""
    if obj is None:
        return None
    if "coeffs" in obj:
        return TrigPoly.from_mapping(
            {int(k): complex(v[0], v[1]) for k, v in obj["coeffs"].items()}
        )
    return np.asarray(obj["values"], dtype=float)


def config_jsonable(cfg: ExperimentConfig) -> dict:
    """Canonical plain-data form of a configuration (hash input)."""
    return {
        "process": {
            "kind": cfg.spec.kind,
            "f": _table_jsonable(cfg.spec.f),
            "drift": cfg.spec.drift_kind,
            "g": _table_jsonable(cfg.spec.g),
        },
        "N_list": list(cfg.n_list),
        "M": cfg.M,
        "m": cfg.m,
        "paths": cfg.paths,
        "master_seed": cfg.master_seed,
        "p_exponent": cfg.p_exponent,
        "block_size": cfg.block_size,
    }


def config_from_jsonable(data: Mapping) -> ExperimentConfig:
    """Build a config from plain data (the CLI's JSON schema)."""
    data = dict(data)
    proc = dict(data.pop("process", {}))
    kind = proc.pop("kind", None)
    if kind is None:
        raise ConfigError("config needs process.kind")
    params: dict = {}
    if proc.get("f") is not None:
        params["f"] = table_from_jsonable(proc["f"])
    drift = proc.get("drift", "none")
    if proc.get("g") is not None:
        params["g"] = table_from_jsonable(proc["g"])
        params["drift"] = drift
    elif drift not in (None, "none"):
        raise ConfigError(f"drift {drift!r} requires a table g")
    spec = make_process(kind, params)
    kwargs = {}
    for src, dst in (
        ("N_list", "n_list"),
        ("M", "M"),
        ("m", "m"),
        ("paths", "paths"),
        ("master_seed", "master_seed"),
        ("p_exponent", "p_exponent"),
        ("block_size", "block_size"),
    ):
        if src in data:
            value = data.pop(src)
            kwargs[dst] = tuple(value) if dst == "n_list" else value
    known_extra = {"mode", "slope_band", "slope_band_orders"}
    stray = set(data) - known_extra
    if stray:
        raise ConfigError(f"unknown config keys: {sorted(stray)}")
    try:
        return ExperimentConfig(spec=spec, **kwargs)
    except TypeError as exc:  # bad field types
        raise ConfigError(str(exc)) from None


def config_hash(cfg: ExperimentConfig) -> str:
    payload = json.dumps(config_jsonable(cfg), sort_keys=True, separators=(",", ":"))
    return sha256(payload.encode()).hexdigest()


def resolve_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {value}")
    return value


@dataclass(frozen=True)
class DecayFit:
    """Log-log least squares: ``log err ~ intercept + slope * log(2N+1)``."""

    slope: float
    half_width: float
    intercept: float


def fit_loglog(widths: np.ndarray, errors: np.ndarray) -> DecayFit:
    """Least-squares slope of log(errors) against log(widths).

    ``half_width`` is the one-sigma standard error of the slope from the fit
    residuals (zero when only two points are given or the fit is exact).
    """
    widths = np.asarray(widths, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if widths.shape != errors.shape or widths.ndim != 1 or widths.size < 2:
        raise ValueError("need matching 1-d arrays with at least two points")
    if np.any(errors <= 0) or np.any(widths <= 0):
        raise ValueError("log fit requires positive widths and errors")
    x = np.log(widths)
    y = np.log(errors)
    xbar = x.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    slope = float(np.sum((x - xbar) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * xbar)
    resid = y - (intercept + slope * x)
    if x.size > 2:
        s2 = float(np.sum(resid**2)) / (x.size - 2)
        half = math.sqrt(s2 / sxx)
    else:
        half = 0.0
    return DecayFit(slope=slope, half_width=half, intercept=intercept)


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    """Aggregated errors of the estimator, per order n and width N.

    Tables are indexed ``[order_index, width_index]`` with orders ascending
    (-M .. M) and widths in ``config.n_list`` order.  ``abs_errors`` and
    ``estimates`` keep the per-path tensors (paths, widths, orders) of
    |estimate - truth| and of the raw estimates; they and ``runtime_seconds``
    stay out of every serialization so identical configurations serialize
    identically.
    """

    config: ExperimentConfig
    mean_abs_err: np.ndarray = field(repr=False)
    lp_err: np.ndarray = field(repr=False)
    std_err: np.ndarray = field(repr=False)
    abs_errors: np.ndarray = field(repr=False)
    estimates: np.ndarray = field(repr=False)
    runtime_seconds: float = 0.0

    def row_iter(self):
        cfg = self.config
        for oi, n in enumerate(cfg.orders):
            for wi, N in enumerate(cfg.n_list):
                yield {
                    "process": cfg.spec.label,
                    "n": n,
                    "N": N,
                    "m": cfg.m,
                    "P": cfg.paths,
                    "seed": cfg.master_seed,
                    "mean_abs_err": float(self.mean_abs_err[oi, wi]),
                    "lp_err": float(self.lp_err[oi, wi]),
                    "std_err": float(self.std_err[oi, wi]),
                }

    def csv_text(self) -> str:
        lines = [CSV_HEADER]
        for row in self.row_iter():
            lines.append(
                f"{row['process']},{row['n']},{row['N']},{row['m']},{row['P']},"
                f"{row['seed']},{row['mean_abs_err']!r},{row['lp_err']!r},{row['std_err']!r}"
            )
        return "\n".join(lines) + "\n"

    def json_dict(self) -> dict:
        decay = {}
        for oi, n in enumerate(self.config.orders):
            fit = fit_decay(self, n)
            decay[str(n)] = {
                "slope": fit.slope,
                "half_width": fit.half_width,
                "intercept": fit.intercept,
            }
        return {
            "version": __version__,
            "config_hash": config_hash(self.config),
            "config": config_jsonable(self.config),
            "rows": list(self.row_iter()),
            "decay": decay,
        }

    def json_text(self) -> str:
        return json.dumps(self.json_dict(), sort_keys=True, indent=2) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.csv_text())

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.json_text())


def fit_decay(result: ExperimentResult, n: int = 0) -> DecayFit:
    """Decay fit of the sample L^p error against 2N+1 for one order n."""
    cfg = result.config
    if abs(n) > cfg.M:
        raise ValueError(f"order {n} outside |n| <= {cfg.M}")
    widths = np.array([2 * N + 1 for N in cfg.n_list], dtype=float)
    return fit_loglog(widths, result.lp_err[n + cfg.M])


def _run_block(
    cfg: ExperimentConfig,
    grid: TimeGrid,
    basis_table: np.ndarray,
    block_index: int,
    abs_err: np.ndarray,
    estimates: np.ndarray,
) -> None:
    """Fill ``abs_err`` rows for one fixed-size block of paths."""
    m = cfg.m
    bs = cfg.block_size
    n_max = max(cfg.n_list)
    k_max = n_max + cfg.M
    lo = block_index * bs
    hi = min(cfg.paths, lo + bs)
    count = hi - lo

    xi = np.zeros((bs, m))
    for r in range(count):
        rng = substream(SeedSpec(cfg.master_seed, lo + r))
        xi[r] = rng.standard_normal(m)
    dw = xi / np.sqrt(m)
    w = np.concatenate([np.zeros((bs, 1)), np.cumsum(dw, axis=1)], axis=1)

    _, _, x = block_functionals(cfg.spec, w, grid)
    dx = np.diff(x, axis=1)
    f_coef = dx @ basis_table.T  # (bs, 2k_max+1), order k at column k + k_max
    i_coef = dw @ basis_table[k_max - n_max : k_max + n_max + 1].T
    truth = block_true_fourier_a(cfg.spec, w, grid, cfg.orders)

    ells = np.arange(-n_max, n_max + 1)
    for oi, n in enumerate(cfg.orders):
        cols = (n - ells) + k_max
        prods = f_coef[:, cols] * i_coef
        prefix = np.cumsum(prods, axis=1)
        for wi, N in enumerate(cfg.n_list):
            hi_col = N + n_max
            lo_col = -N + n_max
            window = prefix[:, hi_col]
            if lo_col > 0:
                window = window - prefix[:, lo_col - 1]
            est = window / (2 * N + 1)
            err = np.abs(est - truth[:, oi])[:count]
            if not np.all(np.isfinite(err)):
                bad = int(np.flatnonzero(~np.isfinite(err))[0])
                raise NumericalFailureError(
                    f"non-finite estimate for path {lo + bad} (n={n}, N={N})"
                )
            abs_err[lo:hi, wi, oi] = err
            estimates[lo:hi, wi, oi] = est[:count]


def run_convergence(cfg: ExperimentConfig) -> ExperimentResult:
    """Run the sweep; see the module docstring for the determinism contract."""
    started = time.perf_counter()
    grid = TimeGrid(cfg.m)
    n_max = max(cfg.n_list)
    k_max = n_max + cfg.M
    k_orders = np.arange(-k_max, k_max + 1)
    basis_table = np.exp(-2j * np.pi * np.outer(k_orders, grid.left_nodes))

    n_blocks = -(-cfg.paths // cfg.block_size)
    abs_err = np.zeros((cfg.paths, len(cfg.n_list), len(cfg.orders)))
    estimates = np.zeros((cfg.paths, len(cfg.n_list), len(cfg.orders)), dtype=complex)
    threads = min(resolve_threads(), n_blocks)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_run_block, cfg, grid, basis_table, bi, abs_err, estimates)
                for bi in range(n_blocks)
            ]
            for fut in futures:
                fut.result()
    else:
        for bi in range(n_blocks):
            _run_block(cfg, grid, basis_table, bi, abs_err, estimates)

    p = cfg.p_exponent
    shape = (len(cfg.orders), len(cfg.n_list))
    mean_abs = np.zeros(shape)
    lp = np.zeros(shape)
    se = np.zeros(shape)
    for oi in range(len(cfg.orders)):
        for wi in range(len(cfg.n_list)):
            col = abs_err[:, wi, oi]
            mean = math.fsum(col) / cfg.paths
            power_mean = math.fsum(float(v) ** p for v in col) / cfg.paths
            var = math.fsum((float(v) - mean) ** 2 for v in col) / (cfg.paths - 1)
            mean_abs[oi, wi] = mean
            lp[oi, wi] = power_mean ** (1.0 / p)
            se[oi, wi] = math.sqrt(var / cfg.paths)
    return ExperimentResult(
        config=cfg,
        mean_abs_err=mean_abs,
        lp_err=lp,
        std_err=se,
        abs_errors=abs_err,
        estimates=estimates,
        runtime_seconds=time.perf_counter() - started,
    )
