"""Stochastic Fourier coefficients of dX and of dW.

The coefficient of order n is the left-tagged Riemann-Stieltjes sum

    F_n(dX) = sum_i conj(e_n(t_i)) (X_{t_{i+1}} - X_{t_i}),

taken against the increments of the integrated process.  Left tagging is the
definition here, not an approximation choice: with anticipating integrands
the tag selects which integral the sum converges to.

Aliasing guard: order n is only meaningful when the grid resolves the
oscillation, so every operation requires ``m > 2 |n|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .brownian import BrownianPath
from .catalog import PathFunctionals
from .grid import eval_basis


@dataclass(frozen=True)
class CoefficientSet:
    """Coefficients indexed symmetrically by order n, |n| <= max_order."""

    max_order: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.max_order < 0:
            raise ValueError(f"max_order must be >= 0, got {self.max_order}")
        if self.values.shape != (2 * self.max_order + 1,):
            raise ValueError(
                f"values must have shape ({2 * self.max_order + 1},), got {self.values.shape}"
            )

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.max_order, self.max_order + 1)

    def entry(self, n: int) -> complex:
        if abs(n) > self.max_order:
            raise ValueError(
                f"order {n} not held by this set (max_order={self.max_order})"
            )
        return complex(self.values[n + self.max_order])


def _check_alias(m: int, n: int) -> None:
    if m <= 2 * abs(n):
        raise ValueError(f"order {n} aliases on a grid with m={m} cells; need m > {2 * abs(n)}")


def sfc_dx(pf: PathFunctionals, n: int) -> complex:
    """Coefficient of order n of dX along one path."""
    _check_alias(pf.grid.m, n)
    ebar = eval_basis(-n, pf.grid.left_nodes)
    return complex(np.dot(ebar, pf.dx))


def sfc_range(pf: PathFunctionals, max_order: int) -> CoefficientSet:
    """All coefficients of dX with |n| <= max_order."""
    _check_alias(pf.grid.m, max_order)
    t = pf.grid.left_nodes
    dx = pf.dx
    orders = np.arange(-max_order, max_order + 1)
    table = np.exp(-2j * np.pi * np.outer(orders, t))
    return CoefficientSet(max_order=max_order, values=table @ dx)


def wiener_sfc(path: BrownianPath, ell: int) -> complex:
    """Coefficient of order ell of dW: ``sum_i conj(e_ell(t_i)) dW_i``."""
    _check_alias(path.grid.m, ell)
    ebar = eval_basis(-ell, path.grid.left_nodes)
    return complex(np.dot(ebar, path.increments))


def wiener_sfc_range(path: BrownianPath, max_order: int) -> CoefficientSet:
    """All coefficients of dW with |ell| <= max_order."""
    _check_alias(path.grid.m, max_order)
    t = path.grid.left_nodes
    orders = np.arange(-max_order, max_order + 1)
    table = np.exp(-2j * np.pi * np.outer(orders, t))
    return CoefficientSet(max_order=max_order, values=table @ path.increments)
