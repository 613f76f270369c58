"""Seeded Brownian paths on the grid and left-tagged Wiener sums.

Seeding contract
----------------
Each path is drawn from its own counter-based substream: the Philox bit
generator keyed by ``(master_seed, path_index)``.  Consequences, all relied
on elsewhere:

* a path is a pure function of ``(master_seed, path_index, m)`` -- no global
  state, no draw-order coupling between paths;
* Monte Carlo runs can be split across workers in any schedule and still
  produce bit-identical paths;
* the first ``P'`` paths of a ``P``-path run coincide with a ``P'``-path run
  (prefix property).

Gaussian variates come from ``numpy``'s ``Generator.standard_normal``
(ziggurat), which is deterministic for a fixed bit stream.

The stored ``xi`` array holds the standardized increments
``xi_i = (W_{t_{i+1}} - W_{t_i}) * sqrt(m) ~ N(0, 1)``; they are the
coordinates in which functional derivatives are taken.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import TimeGrid


@dataclass(frozen=True)
class SeedSpec:
    """Substream address: master seed plus path index."""

    master_seed: int
    path_index: int = 0

    def __post_init__(self) -> None:
        if self.master_seed < 0 or self.master_seed > 2**64 - 1:
            raise ValueError(f"master_seed must fit in uint64, got {self.master_seed}")
        if self.path_index < 0 or self.path_index > 2**64 - 1:
            raise ValueError(f"path_index must fit in uint64, got {self.path_index}")


@dataclass(frozen=True)
class BrownianPath:
    """One discrete Brownian path bound to its grid.

    Attributes
    ----------
    grid : TimeGrid
    values : ndarray, shape (m + 1,)
        ``W`` at every node, ``W_0 = 0``.
    increments : ndarray, shape (m,)
        ``W_{t_{i+1}} - W_{t_i}``, i.i.d. ``N(0, 1/m)``.
    xi : ndarray, shape (m,)
        Standardized increments, ``increments * sqrt(m)``.
    """

    grid: TimeGrid
    values: np.ndarray = field(repr=False)
    increments: np.ndarray = field(repr=False)
    xi: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = self.grid.m
        if self.values.shape != (m + 1,):
            raise ValueError(f"values must have shape ({m + 1},), got {self.values.shape}")
        if self.increments.shape != (m,):
            raise ValueError(f"increments must have shape ({m},), got {self.increments.shape}")
        if self.xi.shape != (m,):
            raise ValueError(f"xi must have shape ({m},), got {self.xi.shape}")
        if self.values[0] != 0.0:
            raise ValueError("paths start at W_0 = 0")

    @property
    def terminal(self) -> float:
        """``W_1``."""
        return float(self.values[-1])


def substream(seed: SeedSpec) -> np.random.Generator:
    """Generator for one path's substream (Philox keyed by seed and index)."""
    key = np.array([seed.master_seed, seed.path_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_path(seed: SeedSpec, grid: TimeGrid) -> BrownianPath:
    """Draw the path addressed by ``seed`` on ``grid``."""
    rng = substream(seed)
    xi = rng.standard_normal(grid.m)
    increments = xi / np.sqrt(grid.m)
    values = np.concatenate([[0.0], np.cumsum(increments)])
    return BrownianPath(grid=grid, values=values, increments=increments, xi=xi)


def path_from_xi(xi: np.ndarray, grid: TimeGrid) -> BrownianPath:
    """Wrap externally supplied standardized increments as a path."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (grid.m,):
        raise ValueError(f"xi must have shape ({grid.m},), got {xi.shape}")
    increments = xi / np.sqrt(grid.m)
    values = np.concatenate([[0.0], np.cumsum(increments)])
    return BrownianPath(grid=grid, values=values, increments=increments, xi=xi)


def wiener_integral(path: BrownianPath, f_nodes: np.ndarray) -> complex:
    """Left-tagged Wiener sum ``sum_i f(t_i) * (W_{t_{i+1}} - W_{t_i})``.

    ``f_nodes`` must hold the integrand at the m left tags; passing node
    values of length m + 1 is a tagging mistake and is rejected.
    """
    f_nodes = np.asarray(f_nodes)
    if f_nodes.shape != (path.grid.m,):
        raise ValueError(
            f"integrand must be sampled at the {path.grid.m} left nodes, got shape {f_nodes.shape}"
        )
    return complex(np.dot(f_nodes, path.increments))
