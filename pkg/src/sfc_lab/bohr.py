"""Coefficient identification by kernel-averaged products of coefficients.

The estimator for the n-th Fourier coefficient of the diffusion a is the
Bohr-style product of the coefficient sequences of dX and dW,

    B_N(n) = (1/(2N+1)) sum_{|l| <= N} F_{n-l}(dX) * F_l(dW),

which converges to ``integral a(t) conj(e_n(t)) dt`` pathwise in L^2 at rate
O(1/sqrt(2N+1)).  On the discrete space the estimator decomposes exactly --
pure increment algebra, no limits -- into the target coefficient plus four
remainders:

* ``double_wiener``       an iterated stochastic integral of a against the
                          Dirichlet kernel (the dominant O(1/sqrt(2N+1)) term);
* ``diffusion_derivative`` the derivative of a smoothed by the kernel, then
                          integrated against dW;
* ``drift_wiener``        the drift smoothed by the kernel, integrated
                          against dW;
* ``drift_derivative``    the derivative of the drift, double time integral.

``remainder_terms`` evaluates the last three from the catalog's derivative
tables and reads ``double_wiener`` off as the residual, as its contract
states; ``iterated_divergence_term`` computes the same double integral
directly so tests can confirm the decomposition holds term by term and the
residual is not absorbing errors.

Drift recovery inverts the coefficient relation
``F_n(dX) = div(a conj(e_n)) + (1/m) sum b conj(e_n)``: subtract the
stochastic part and what is left is the drift coefficient.  Two modes:

* ``closed_form``   subtract the catalog's exact ``div(a conj(e_n))``;
* ``synthesized``   rebuild a from the *estimated* coefficients and subtract
                    the divergence of the synthesized trigonometric
                    polynomial, differentiating the whole estimation pipeline
                    to supply the divergence correction.  Available when the
                    diffusion's chaos order is at most 1 (all catalog kinds);
                    higher chaos would need second-derivative data the
                    pipeline does not carry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import catalog as cat
from .brownian import BrownianPath
from .errors import UnsupportedModeError
from .grid import eval_basis, kernel_difference_table
from .sfc import CoefficientSet, sfc_dx, sfc_range, wiener_sfc_range

CLOSED_FORM = "closed_form"
SYNTHESIZED = "synthesized"
RECOVERY_MODES = (CLOSED_FORM, SYNTHESIZED)


@dataclass(frozen=True)
class BohrConfig:
    """Estimator settings: averaging width N, target band M, recovery mode."""

    N: int
    M: int = 0
    mode: str = CLOSED_FORM

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.M < 0:
            raise ValueError(f"M must be >= 0, got {self.M}")
        if self.mode not in RECOVERY_MODES:
            raise ValueError(f"mode must be one of {RECOVERY_MODES}, got {self.mode!r}")


def grid_supports(m: int, N: int, M: int) -> bool:
    """Mesh rule for identification: m >= 8 (N + M)."""
    return m >= 8 * (N + M)


def bohr_product(
    dx_coeffs: CoefficientSet, dw_coeffs: CoefficientSet, n: int, N: int
) -> complex:
    """``(1/(2N+1)) sum_{|l| <= N} dx_coeffs(n - l) dw_coeffs(l)``.

    Raises ``ValueError`` if either set lacks a required order.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if dw_coeffs.max_order < N:
        raise ValueError(
            f"dW coefficients cover |l| <= {dw_coeffs.max_order}, need |l| <= {N}"
        )
    if dx_coeffs.max_order < N + abs(n):
        raise ValueError(
            f"dX coefficients cover |k| <= {dx_coeffs.max_order}, "
            f"need |k| <= {N + abs(n)} for order n={n}"
        )
    ells = np.arange(-N, N + 1)
    f_vals = dx_coeffs.values[(n - ells) + dx_coeffs.max_order]
    w_vals = dw_coeffs.values[ells + dw_coeffs.max_order]
    return complex(np.dot(f_vals, w_vals) / (2 * N + 1))


def identify_a(pf: cat.PathFunctionals, cfg: BohrConfig) -> CoefficientSet:
    """Estimate the Fourier coefficients of a for all |n| <= cfg.M."""
    m = pf.grid.m
    if not grid_supports(m, cfg.N, cfg.M):
        raise ValueError(
            f"grid too coarse: m={m} < 8 (N + M) = {8 * (cfg.N + cfg.M)}"
        )
    f_set = sfc_range(pf, cfg.N + cfg.M)
    w_set = wiener_sfc_range(pf.path, cfg.N)
    values = np.array(
        [bohr_product(f_set, w_set, n, cfg.N) for n in range(-cfg.M, cfg.M + 1)]
    )
    return CoefficientSet(max_order=cfg.M, values=values)


def synthesize(coeffs: CoefficientSet, t: np.ndarray | float) -> np.ndarray:
    """Evaluate the trigonometric polynomial with the given coefficients."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for n in range(-coeffs.max_order, coeffs.max_order + 1):
        out = out + coeffs.entry(n) * eval_basis(n, t)
    return out


def _estimator_gradient(
    pf: cat.PathFunctionals, a_hat: CoefficientSet, N: int
) -> np.ndarray:
    """Diagonal-use gradient table d a_hat_q / d xi_r, shape (orders, m).

    Differentiates B_N(q) = (1/(2N+1)) sum_l F_{q-l} I_l through both
    factors; the catalog supplies dF_k/dxi_r in closed form and
    dI_l/dxi_r = conj(e_l(t_r))/sqrt(m).
    """
    m = pf.grid.m
    M = a_hat.max_order
    t_left = pf.grid.left_nodes
    f_set = sfc_range(pf, N + M)
    w_set = wiener_sfc_range(pf.path, N)
    k_orders = range(-(N + M), N + M + 1)
    dF = {k: cat.dsfc_partials(pf.spec, pf.path, k) for k in k_orders}
    grad = np.zeros((2 * M + 1, m), dtype=complex)
    sqrt_m = np.sqrt(m)
    for qi, q in enumerate(range(-M, M + 1)):
        acc = np.zeros(m, dtype=complex)
        for ell in range(-N, N + 1):
            acc += dF[q - ell] * w_set.entry(ell)
            acc += f_set.entry(q - ell) * eval_basis(-ell, t_left) / sqrt_m
        grad[qi] = acc / (2 * N + 1)
    return grad


def recover_b(
    pf: cat.PathFunctionals, a_hat: CoefficientSet, cfg: BohrConfig
) -> CoefficientSet:
    """Recover the drift coefficients: ``b_n = F_n(dX) - div(a conj(e_n))``.

    ``closed_form`` subtracts the catalog's exact stochastic integral of the
    true a.  ``synthesized`` subtracts the divergence of the polynomial
    rebuilt from ``a_hat``, using the estimator's own gradient for the
    divergence correction; requires diffusion chaos order <= 1.
    """
    m = pf.grid.m
    orders = range(-cfg.M, cfg.M + 1)
    if cfg.mode == CLOSED_FORM:
        values = np.array(
            [
                sfc_dx(pf, n) - cat.exact_diffusion_sfc(pf.spec, pf.path, n)
                for n in orders
            ]
        )
        return CoefficientSet(max_order=cfg.M, values=values)

    if pf.spec.a_chaos_order > 1:
        raise UnsupportedModeError(
            f"synthesized recovery needs diffusion chaos order <= 1, "
            f"got {pf.spec.a_chaos_order} for kind {pf.spec.kind}"
        )
    t_left = pf.grid.left_nodes
    a_nodes = synthesize(a_hat, t_left)
    grad = _estimator_gradient(pf, a_hat, cfg.N)
    # d a_hat(t_i)/d xi_i = sum_q grad[q, i] e_q(t_i)
    diag = np.zeros(m, dtype=complex)
    for qi, q in enumerate(range(-a_hat.max_order, a_hat.max_order + 1)):
        diag += grad[qi] * eval_basis(q, t_left)
    values = []
    for n in orders:
        ebar = eval_basis(-n, t_left)
        div_hat = np.dot(a_nodes * ebar, pf.path.increments) - np.dot(diag, ebar) / np.sqrt(m)
        values.append(sfc_dx(pf, n) - div_hat)
    return CoefficientSet(max_order=cfg.M, values=np.array(values))


@dataclass(frozen=True)
class RemainderTerms:
    """The four-term error decomposition of ``B_N(n) - true coefficient``."""

    double_wiener: complex
    diffusion_derivative: complex
    drift_wiener: complex
    drift_derivative: complex

    @property
    def total(self) -> complex:
        return (
            self.double_wiener
            + self.diffusion_derivative
            + self.drift_wiener
            + self.drift_derivative
        )


def _direct_terms(
    pf: cat.PathFunctionals, n: int, N: int
) -> tuple[complex, complex, complex]:
    """The three directly computable remainders (all but double_wiener)."""
    m = pf.grid.m
    spec = pf.spec
    path = pf.path
    t_left = pf.grid.left_nodes
    ebar = eval_basis(-n, t_left)
    kernel = kernel_difference_table(N, pf.grid)
    scale = 1.0 / (2 * N + 1)
    sqrt_m = np.sqrt(m)

    # diffusion derivative: u_i = (1/sqrt(m)) sum_j (da_i/dxi_j) ebar_i K[i, j],
    # integrated dW in the i slot.  Catalog diffusions have deterministic
    # derivative tables, so the divergence is the plain Wiener sum.
    da = cat.diffusion_array(spec, path).partials
    u = (np.einsum("ij,ij->i", da, kernel) / sqrt_m) * ebar
    diffusion_derivative = scale * np.dot(u, path.increments)

    # drift smoothed by the kernel, integrated dW in the j slot.
    b = pf.b_nodes
    v = kernel.T @ (b * ebar) / m
    c = cat.drift_partial_const(spec, path)
    dv_diag = kernel.T @ (c * ebar) / m
    drift_wiener = scale * (np.dot(v, path.increments) - np.sum(dv_diag) / sqrt_m)

    # derivative of the drift, double time integral.
    drift_derivative = scale * np.sum(kernel.T @ (c * ebar)) / (m * sqrt_m)
    return complex(diffusion_derivative), complex(drift_wiener), complex(drift_derivative)


def remainder_terms(pf: cat.PathFunctionals, n: int, N: int) -> RemainderTerms:
    """Evaluate the four-term decomposition at order n and width N.

    The three structured terms come from the catalog's closed forms; the
    double stochastic integral is the residual
    ``B_N(n) - true coefficient - (other three)``, per the decomposition's
    exactness on the discrete space.  Memory is O(m^2) for the kernel table.
    """
    if pf.spec.kind not in cat.CATALOG_KINDS:  # pragma: no cover - spec guards
        raise UnsupportedModeError(f"no closed forms for kind {pf.spec.kind!r}")
    m = pf.grid.m
    if not grid_supports(m, N, abs(n)):
        raise ValueError(f"grid too coarse: m={m} < 8 (N + |n|) = {8 * (N + abs(n))}")
    f_set = sfc_range(pf, N + abs(n))
    w_set = wiener_sfc_range(pf.path, N)
    estimate = bohr_product(f_set, w_set, n, N)
    truth = cat.true_fourier_a(pf.spec, pf.path, n)
    diffusion_derivative, drift_wiener, drift_derivative = _direct_terms(pf, n, N)
    double_wiener = (
        estimate - truth - diffusion_derivative - drift_wiener - drift_derivative
    )
    return RemainderTerms(
        double_wiener=complex(double_wiener),
        diffusion_derivative=diffusion_derivative,
        drift_wiener=drift_wiener,
        drift_derivative=drift_derivative,
    )


def iterated_divergence_term(pf: cat.PathFunctionals, n: int, N: int) -> complex:
    """Direct evaluation of the double stochastic integral remainder.

    Computes ``(1/(2N+1)) div_j( div_i( a_i conj(e_n(t_i)) K_N(t_i - t_j) ) )``
    with full divergence corrections in both slots.  Exact for diffusion
    chaos order <= 1; used as the independent oracle for the residual-based
    ``double_wiener``.
    """
    if pf.spec.a_chaos_order > 1:
        raise UnsupportedModeError(
            f"direct double integral needs diffusion chaos order <= 1, "
            f"got {pf.spec.a_chaos_order}"
        )
    m = pf.grid.m
    path = pf.path
    t_left = pf.grid.left_nodes
    ebar = eval_basis(-n, t_left)
    kernel = kernel_difference_table(N, pf.grid)
    sqrt_m = np.sqrt(m)
    a = cat.diffusion_array(pf.spec, path)

    # inner divergence at each j: values G_j and their diagonal derivatives
    weighted = a.values * ebar  # a_i conj(e_n)(t_i)
    inner_trace = (np.diag(a.partials) * ebar) @ kernel  # sum_i da_i/dxi_i ebar_i K[i,j]
    g = (weighted * path.increments) @ kernel - inner_trace / sqrt_m
    # dG_j/dxi_j = sum_i da_i/dxi_j ebar_i K[i,j] dW_i + a_j ebar_j K[j,j]/sqrt(m)
    cross = np.einsum("i,ij->j", ebar * path.increments, a.partials * kernel)
    dg_diag = cross + weighted * np.diag(kernel) / sqrt_m
    outer = np.dot(g, path.increments) - np.sum(dg_diag) / sqrt_m
    return complex(outer / (2 * N + 1))
