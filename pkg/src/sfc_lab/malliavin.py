"""Functional calculus on the discrete Wiener space R^m.

A random variable on the discrete space is a function of the standardized
increments ``xi_0 .. xi_{m-1}``.  We carry it together with its partial
derivatives, which is all the structure the integration-by-parts identities
need.

Normalization (worked example)
------------------------------
With ``xi_i = (W_{t_{i+1}} - W_{t_i}) sqrt(m)``, the derivative of a
functional F at time ``t_i`` is ``sqrt(m) * dF/dxi_i``, so the pairing

    <DF, e> = (1/sqrt(m)) * sum_i (dF/dxi_i) e(t_i)

is the left Riemann sum of ``D_t F * e(t)``.  The divergence of a process
``u`` sampled on the left nodes is

    div(u) = sum_i u_i dW_i - (1/sqrt(m)) sum_i du_i/dxi_i,

the Wiener sum minus the trace of the derivative along the diagonal.  Taking
``u_i = W_1`` for every i: the Wiener sum is ``W_1^2`` and each diagonal
derivative is ``dW_1/dxi_i = 1/sqrt(m)``, so the correction totals
``(1/sqrt(m)) * m * (1/sqrt(m)) = 1`` and ``div(u) = W_1^2 - 1`` exactly --
the Skorokhod integral of the terminal value, with no discretization error.
For ``u`` adapted on the left (``u_i`` independent of ``xi_j`` for
``j >= i``) every diagonal derivative vanishes and div(u) is the plain Ito
sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .brownian import BrownianPath, wiener_integral


@dataclass(frozen=True)
class DiscreteFunctional:
    """A scalar functional of the increments: value plus gradient.

    ``partials[r]`` holds ``dF/dxi_r``.  The gradient may itself be random
    (it is evaluated on the same path as the value); all identities below
    use it only algebraically.
    """

    value: complex
    partials: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.partials is None:
            raise ValueError("partials are required; pass zeros for a deterministic value")
        if self.partials.ndim != 1:
            raise ValueError(f"partials must be a vector, got shape {self.partials.shape}")


@dataclass(frozen=True)
class FunctionalArray:
    """A process on the left nodes: values ``u_i`` and partials ``du_i/dxi_r``.

    ``partials`` has shape (m, m) with rows indexed by the node i and columns
    by the differentiation direction r.  Dense by design -- the exact-identity
    checks run at moderate m where an m x m table is cheap and unambiguous.
    """

    values: np.ndarray = field(repr=False)
    partials: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.partials is None:
            raise ValueError("partials are required; pass zeros for a deterministic process")
        m = self.values.shape[0]
        if self.values.ndim != 1:
            raise ValueError(f"values must be a vector, got shape {self.values.shape}")
        if self.partials.shape != (m, m):
            raise ValueError(f"partials must have shape ({m}, {m}), got {self.partials.shape}")

    @property
    def m(self) -> int:
        return self.values.shape[0]


def deterministic_array(values: np.ndarray) -> FunctionalArray:
    """Wrap a deterministic integrand (zero partials)."""
    values = np.asarray(values)
    m = values.shape[0]
    return FunctionalArray(values=values, partials=np.zeros((m, m), dtype=values.dtype))


def pairing(functional: DiscreteFunctional, e_nodes: np.ndarray, path: BrownianPath) -> complex:
    """Left Riemann sum of ``D_t F * e(t)``: ``(1/sqrt(m)) sum_i dF/dxi_i e(t_i)``."""
    m = path.grid.m
    e_nodes = np.asarray(e_nodes)
    if functional.partials.shape != (m,) or e_nodes.shape != (m,):
        raise ValueError("functional partials and e must live on the grid's left nodes")
    return complex(np.dot(functional.partials, e_nodes) / np.sqrt(m))


def discrete_divergence(u: FunctionalArray, path: BrownianPath) -> complex:
    """Divergence ``sum_i u_i dW_i - (1/sqrt(m)) sum_i du_i/dxi_i``.

    Coincides with the Ito sum for left-adapted integrands and with the
    Skorokhod integral's closed forms for the anticipating ones used here.
    """
    m = path.grid.m
    if u.m != m:
        raise ValueError(f"integrand has {u.m} nodes but path grid has {m}")
    trace = np.trace(u.partials)
    return complex(np.dot(u.values, path.increments) - trace / np.sqrt(m))


def divergence_with_partials(u: FunctionalArray, path: BrownianPath) -> DiscreteFunctional:
    """Divergence together with its own gradient.

    The gradient formula

        d(div u)/dxi_r = sum_i (du_i/dxi_r) dW_i + u_r / sqrt(m)

    drops the second-derivative trace term and is therefore exact only when
    the entries of ``u.partials`` are deterministic, i.e. ``u`` has chaos
    order at most 1.  Every catalog coefficient satisfies this; callers
    feeding richer integrands must supply their own gradient.
    """
    m = path.grid.m
    value = discrete_divergence(u, path)
    grad = u.partials.T @ path.increments + u.values / np.sqrt(m)
    return DiscreteFunctional(value=value, partials=grad)


def lemma_fdelta_residual(
    functional: DiscreteFunctional, e_nodes: np.ndarray, path: BrownianPath
) -> float:
    """Defect of the factor-out identity ``F * I(e) = div(F e) + <DF, e>``.

    ``I(e)`` is the left Wiener sum of e.  The identity is pure algebra on
    the discrete space, so the return value is rounding noise (<= 1e-10 at
    the meshes used here) whenever the supplied partials are exact.
    """
    m = path.grid.m
    e_nodes = np.asarray(e_nodes)
    lhs = functional.value * wiener_integral(path, e_nodes)
    integrand = FunctionalArray(
        values=functional.value * e_nodes,
        partials=np.outer(e_nodes, functional.partials),
    )
    rhs = discrete_divergence(integrand, path) + pairing(functional, e_nodes, path)
    return float(abs(lhs - rhs))


def prop1_residual(spec, e_nodes: np.ndarray, path: BrownianPath) -> float:
    """Defect of the product rule for a Wiener integral times a basis sum.

    Checks, for the diffusion coefficient a of ``spec``,

        div(a) * I(e) = div(div(a) e) + div(s -> <D a(s), e>) + (1/m) sum a e

    which is the exact discrete form of multiplying a stochastic integral by
    a first-order one.  Returns |LHS - RHS|.
    """
    # Container types live here; closed forms live in the catalog.
    from .catalog import diffusion_array

    e_nodes = np.asarray(e_nodes)
    m = path.grid.m
    a = diffusion_array(spec, path)
    ito_e = wiener_integral(path, e_nodes)
    div_a = divergence_with_partials(a, path)
    lhs = div_a.value * ito_e

    first = discrete_divergence(
        FunctionalArray(values=div_a.value * e_nodes, partials=np.outer(e_nodes, div_a.partials)),
        path,
    )
    # <D a(s), e> at each node s: rows of the partial table paired with e.
    deriv_pair = (a.partials @ e_nodes) / np.sqrt(m)
    second = discrete_divergence(deterministic_array(deriv_pair), path)
    third = np.dot(a.values, e_nodes) / m
    return float(abs(lhs - (first + second + third)))


def prop2_residual(spec, e_nodes: np.ndarray, path: BrownianPath) -> float:
    """Defect of the product rule for a time integral times a basis sum.

    Checks, for the drift coefficient b of ``spec``,

        ((1/m) sum b) * I(e) = div(((1/m) sum b) e) + (1/m) sum_s <D b(s), e>

    i.e. the drift integral times a first-order integral equals a divergence
    plus the double time integral of the derivative.  Returns |LHS - RHS|.
    """
    from .catalog import drift_array

    e_nodes = np.asarray(e_nodes)
    m = path.grid.m
    b = drift_array(spec, path)
    ito_e = wiener_integral(path, e_nodes)
    b_int = DiscreteFunctional(
        value=complex(np.sum(b.values) / m),
        partials=b.partials.sum(axis=0) / m,
    )
    lhs = b_int.value * ito_e
    first = discrete_divergence(
        FunctionalArray(values=b_int.value * e_nodes, partials=np.outer(e_nodes, b_int.partials)),
        path,
    )
    second = pairing(b_int, e_nodes, path)
    return float(abs(lhs - (first + second)))
