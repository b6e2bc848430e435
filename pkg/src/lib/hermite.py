"""Normalized Hermite functions xi_n and projections onto them."""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import numpy as np
from numpy.polynomial.hermite import hermgauss

logger = logging.getLogger(__name__)

MAX_ORDER = 512
PI_QUARTER = math.pi ** -0.25

ArrayLike = Union[float, np.ndarray]


def _check_order(n: int, max_order: int) -> None:
    if n < 0:
        raise ValueError(f"Hermite order must be non-negative, got {n}")
    if n > max_order:
        raise ValueError(f"Hermite order {n} exceeds the configured maximum {max_order}")


def hermite_table(count: int, x: ArrayLike, max_order: int = MAX_ORDER) -> np.ndarray:
    """
    Values of xi_0 .. xi_(count-1) at x, one row per order.

    Uses the normalized recurrence
    xi_(n+1) = sqrt(2/(n+1)) x xi_n - sqrt(n/(n+1)) xi_(n-1),
    whose values stay bounded by pi**(-1/4).

    Args:
        count: Number of functions
        x: Evaluation points
        max_order: Largest admissible order

    Returns:
        Array of shape (count,) + shape(x)
    """
    if count > 0:
        _check_order(count - 1, max_order)
    x = np.asarray(x, dtype=float)
    table = np.zeros((count,) + x.shape)
    if count == 0:
        return table
    table[0] = PI_QUARTER * np.exp(-0.5 * x * x)
    if count > 1:
        table[1] = math.sqrt(2.0) * x * table[0]
    for n in range(1, count - 1):
        table[n + 1] = math.sqrt(2.0 / (n + 1)) * x * table[n] - math.sqrt(n / (n + 1)) * table[n - 1]
    return table


def hermite_xi(n: int, x: ArrayLike, max_order: int = MAX_ORDER) -> ArrayLike:
    """
    Normalized Hermite function xi_n(x) = (2**n n! sqrt(pi))**(-1/2) H_n(x) exp(-x**2/2).

    Args:
        n: Order, 0 <= n <= max_order
        x: Point or array of points
        max_order: Largest admissible order

    Returns:
        xi_n(x), a float for scalar x
    """
    _check_order(n, max_order)
    values = hermite_table(n + 1, x, max_order)[n]
    return float(values) if np.ndim(values) == 0 else values


def _polynomial_table(count: int, x: np.ndarray) -> np.ndarray:
    """xi_n(x) * exp(x**2/2); bounded only near the Gauss-Hermite nodes."""
    table = np.zeros((count,) + x.shape)
    if count == 0:
        return table
    table[0] = PI_QUARTER
    if count > 1:
        table[1] = math.sqrt(2.0) * x * PI_QUARTER
    for n in range(1, count - 1):
        table[n + 1] = math.sqrt(2.0 / (n + 1)) * x * table[n] - math.sqrt(n / (n + 1)) * table[n - 1]
    return table


@lru_cache(maxsize=8)
def gauss_hermite_rule(degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrals against exp(-x**2)."""
    return hermgauss(degree)


def gram_matrix(count: int, degree: int = 96) -> np.ndarray:
    """
    Gram matrix of xi_0 .. xi_(count-1) by Gauss-Hermite quadrature.

    xi_m xi_n = exp(-x**2) * (polynomial of degree m+n), so the rule is exact
    while 2*degree > m + n.
    """
    nodes, weights = gauss_hermite_rule(degree)
    table = _polynomial_table(count, nodes)
    return (table * weights) @ table.T


def hermite_coefficients(f: Callable[[np.ndarray], np.ndarray], count: int, degree: int = 160) -> np.ndarray:
    """
    Project f onto xi_0 .. xi_(count-1): f_n = integral of f xi_n.

    Args:
        f: Vectorised real function in L2
        count: Number of coefficients
        degree: Gauss-Hermite degree

    Returns:
        Coefficient vector f_0 .. f_(count-1)
    """
    nodes, weights = gauss_hermite_rule(degree)
    table = _polynomial_table(count, nodes)
    # integral f xi_n = sum_i w_i exp(x_i**2) f(x_i) xi_n(x_i)
    samples = np.asarray(f(nodes), dtype=float) * np.exp(0.5 * nodes * nodes)
    return table @ (weights * samples)


def hermite_reconstruct(coefficients: np.ndarray, x: ArrayLike) -> np.ndarray:
    """sum_n f_n xi_n(x)."""
    coefficients = np.asarray(coefficients, dtype=float)
    return np.tensordot(coefficients, hermite_table(len(coefficients), x), axes=1)


def hermite_fourier(n: int, u: ArrayLike) -> np.ndarray:
    """
    Fourier transform of xi_n under f_hat(u) = integral f(x) exp(-iux) dx.

    xi_n is an eigenfunction: the transform is (-i)**n sqrt(2 pi) xi_n(u).
    """
    return ((-1j) ** n) * math.sqrt(2.0 * math.pi) * np.asarray(hermite_xi(n, u))


@dataclass(frozen=True)
class HermiteBasis:
    """
    xi_0 .. xi_max_order together with the uniform grid they are sampled on.

    Attributes:
        max_order: Largest admissible order N
        half_width: Grid half-width U
        points: Number of grid points
    """

    max_order: int = MAX_ORDER
    half_width: float = 50.0
    points: int = 16384

    def __post_init__(self) -> None:
        if self.max_order < 0:
            raise ValueError(f"max_order must be non-negative, got {self.max_order}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.points < 2:
            raise ValueError(f"points must be at least 2, got {self.points}")

    def line(self) -> np.ndarray:
        """Uniform grid on [-U, U]."""
        return np.linspace(-self.half_width, self.half_width, self.points)

    def half_line(self, power: int = 1) -> Tuple[np.ndarray, np.ndarray]:
        """
        Trapezoid nodes and weights on [0, U] after the substitution u = v**power.

        Returns:
            (u, weights) with sum(weights * g(u)) ~ integral_0^U g(u) du
        """
        if power < 1:
            raise ValueError(f"Substitution power must be at least 1, got {power}")
        v = np.linspace(0.0, self.half_width ** (1.0 / power), self.points)
        weights = np.full(v.shape, v[1] - v[0])
        weights[[0, -1]] *= 0.5
        return v ** power, weights * power * v ** (power - 1)

    def table(self, count: int, x: ArrayLike) -> np.ndarray:
        return hermite_table(count, x, self.max_order)

    def xi(self, n: int, x: ArrayLike) -> ArrayLike:
        return hermite_xi(n, x, self.max_order)

    def orthonormality_error(self, count: Optional[int] = None) -> float:
        """max |G - I| over the Gram matrix of xi_0 .. xi_(count-1), all orders by default."""
        count = self.max_order + 1 if count is None else count
        _check_order(count - 1, self.max_order)
        deviation = np.abs(gram_matrix(count, max(96, count + 1)) - np.eye(count)).max()
        logger.debug("Hermite Gram deviation for %d functions: %.3g", count, deviation)
        return float(deviation)
