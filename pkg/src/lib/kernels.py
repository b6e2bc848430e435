"""
Spectral covariance kernels and Grassmann-valued processes.

Conventions: f_hat(u) = integral f(x) exp(-iux) dx, inverse transform with
1/(2 pi). The process attached to a density m is

    X S_m 1_[0,t] = sum_n (integral_0^t (S_m xi_n)(u) du) e_(n+1),

and its covariance is K(t, s) = (1/2pi) integral (e^iut - 1)(e^-ius - 1) / u^2 m(u) du,
i.e. the Stieltjes measure of the kernel is d sigma = m(u) du / (2 pi).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import pandas as pd
from scipy.integrate import quad, trapezoid

from src.lib import algebra
from src.lib.algebra import TernaryElement
from src.lib.hermite import HermiteBasis
from src.lib.hilbert_scale import IDENTITY_WEIGHTS, WeightProfile, check_vage, h_norm
from src.lib.multi_index import MultiIndex
from src.lib.scalars import FLOAT, CoefficientField
from src.lib.spectral import SpectralDensity, fbm_density, fbm_normalization
from src.utils.config import DEFAULT_CONFIG, EngineConfig
from src.utils.error_handlers import DomainViolation, NoConvergence
from src.utils.formatters import format_float17
from src.utils.validators import validate_time_grid

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)
DIFFERENCE_STEPS = (1e-2, 1e-3, 1e-4)


def brownian_covariance(t: float, s: float) -> float:
    return min(t, s)


def fbm_covariance(hurst: float, t: float, s: float) -> float:
    """(t^2H + s^2H - |t-s|^2H) / 2."""
    two_h = 2.0 * hurst
    return 0.5 * (abs(t) ** two_h + abs(s) ** two_h - abs(t - s) ** two_h)


def embed_X(coefficients: Sequence[complex], field: CoefficientField = FLOAT) -> TernaryElement:
    """
    Xf = sum_n f_n e_(n+1): the isometric image of a Hermite coefficient sequence.

    Args:
        coefficients: f_0, f_1, ... (finite truncation)
        field: Coefficient field of the result

    Returns:
        Grade-1 element with ||Xf||_2 = ||f||_l2
    """
    return TernaryElement(
        ((MultiIndex.generator(n + 1), value) for n, value in enumerate(coefficients)), field
    )


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with value 1 at 0."""
    return np.sinc(x / math.pi)


def _substitution_power(b: float) -> int:
    """
    Power k of the substitution u = v**k on the Hermite grid.

    Chosen so that sqrt(m(v**k)) * k v**(k-1) ~ v**e with e an even integer,
    which keeps the integrand even and smooth in v; 4 when no small k does.
    """
    for k in range(1, 9):
        e = k * (2.0 - b) / 2.0 - 1.0
        if e >= -1e-12 and abs(e - 2 * round(e / 2)) < 1e-9:
            return k
    return 4


class SpectralProjector:
    """
    Indicator coefficients c_n(t) = integral_0^t (S_m xi_n)(u) du for n < count.

    With s_n = (-1)**floor(n/2),

        c_n(t) = s_n (2/sqrt(2pi)) integral_0^inf sqrt(m(u)) xi_n(u) K_n(u, t) du,

    K_n = sin(ut)/u for even n and (1 - cos ut)/u for odd n. The integrand is
    even in u, so the trapezoid rule on [0, U] converges spectrally.
    """

    def __init__(self, density: SpectralDensity, count: int, config: EngineConfig = DEFAULT_CONFIG) -> None:
        if count < 0:
            raise ValueError(f"Coefficient count must be non-negative, got {count}")
        if count > config.hermite_max_order + 1:
            raise ValueError(f"{count} coefficients exceed the Hermite maximum order {config.hermite_max_order}")
        self.density = density
        self.count = count
        self.power = 1 if density.smooth_at_zero else _substitution_power(density.b)
        self.basis = HermiteBasis(config.hermite_max_order, config.grid_half_width, config.grid_points)
        self.u, trapezoid_weights = self.basis.half_line(self.power)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            weights = trapezoid_weights * np.sqrt(density(self.u)) * (2.0 / SQRT_2PI)
        weights[~np.isfinite(weights)] = 0.0
        self.weights = weights
        self.table = self.basis.table(count, self.u)
        orders = np.arange(count)
        self.signs = np.where((orders // 2) % 2 == 0, 1.0, -1.0)
        self.even = orders % 2 == 0
        logger.debug(
            "projector for %s: %d functions, %d nodes, substitution power %d",
            density.label, count, len(self.u), self.power,
        )

    def _project(self, even_kernel: np.ndarray, odd_kernel: np.ndarray) -> np.ndarray:
        even_values = self.table @ (self.weights * even_kernel)
        odd_values = self.table @ (self.weights * odd_kernel)
        return self.signs * np.where(self.even, even_values, odd_values)

    def coefficients(self, t: float) -> np.ndarray:
        """c_0(t) .. c_(count-1)(t)."""
        ut = self.u * t
        half = 0.5 * ut
        even_kernel = t * _sinc(ut)
        # (1 - cos ut)/u = (u t^2 / 2) sinc^2(ut/2)
        odd_kernel = 0.5 * self.u * t * t * _sinc(half) ** 2
        return self._project(even_kernel, odd_kernel)

    def derivatives(self, t: float) -> np.ndarray:
        """(S_m xi_n)(t), the t-derivatives of the coefficients."""
        ut = self.u * t
        return self._project(np.cos(ut), np.sin(ut))


@lru_cache(maxsize=16)
def _projector(density: SpectralDensity, count: int, config: EngineConfig) -> SpectralProjector:
    return SpectralProjector(density, count, config)


def _require_domain(density: SpectralDensity) -> None:
    if not density.is_admissible:
        raise DomainViolation(
            f"{density.label}: integral of m |1_[0,t] hat|^2 diverges (b={density.b:g}, "
            f"tail exponent={density.tail_exponent:g})"
        )


def indicator_coefficients(
    density: SpectralDensity, t: float, count: int, config: EngineConfig = DEFAULT_CONFIG
) -> np.ndarray:
    """Vector of integral_0^t (S_m xi_n)(u) du for n < count."""
    _require_domain(density)
    if not math.isfinite(t):
        raise ValueError(f"Time must be finite, got {t}")
    if count == 0:
        return np.zeros(0)
    return _projector(density, count, config).coefficients(t)


def indicator_coeff(density: SpectralDensity, n: int, t: float, config: EngineConfig = DEFAULT_CONFIG) -> float:
    """
    integral_0^t (S_m xi_n)(u) du.

    Raises:
        DomainViolation: When m is not admissible for indicator functions
    """
    if n < 0:
        raise ValueError(f"Hermite order must be non-negative, got {n}")
    return float(indicator_coefficients(density, t, n + 1, config)[n])


def derivative_coefficients(
    density: SpectralDensity, t: float, count: int, config: EngineConfig = DEFAULT_CONFIG
) -> np.ndarray:
    """(S_m xi_n)(t) for n < count."""
    _require_domain(density)
    if count == 0:
        return np.zeros(0)
    return _projector(density, count, config).derivatives(t)


def apply_Sm(
    density: SpectralDensity,
    f_hat: Callable[[np.ndarray], np.ndarray],
    x: Union[float, np.ndarray],
    config: EngineConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """
    (S_m f)(x) = (1/2pi) integral sqrt(m(u)) f_hat(u) exp(iux) du on a uniform grid.

    Args:
        density: Spectral density m
        f_hat: Vectorised Fourier transform of f
        x: Evaluation points
        config: Grid half-width and point count

    Returns:
        Complex values of S_m f at x (real up to rounding for real f)

    Raises:
        DomainViolation: When m |f_hat|^2 stops decaying over the grid
    """
    half_width = config.grid_half_width
    u = HermiteBasis(config.hermite_max_order, half_width, config.grid_points).line()
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        spectrum = np.sqrt(density(u)) * np.asarray(f_hat(u), dtype=complex)
    spectrum[~np.isfinite(spectrum)] = 0.0

    energy = np.abs(spectrum) ** 2
    magnitude = np.abs(u)
    inner = energy[(magnitude >= half_width / 4) & (magnitude < half_width / 2)].sum()
    outer = energy[magnitude >= half_width / 2].sum()
    if not np.isfinite(energy.sum()) or (outer > inner and outer > 1e-12 * max(energy.sum(), 1e-300)):
        raise DomainViolation(
            f"{density.label}: m |f_hat|^2 does not decay up to |u| = {half_width:g} "
            f"(envelope b={density.b:g}, N={density.N})"
        )

    points = np.atleast_1d(np.asarray(x, dtype=float))
    values = np.empty(points.shape, dtype=complex)
    chunk = max(1, 4_000_000 // len(u))
    for start in range(0, len(points), chunk):
        block = points[start:start + chunk]
        phases = np.exp(1j * np.outer(block, u))
        values[start:start + chunk] = trapezoid(phases * spectrum, u, axis=1) / (2.0 * math.pi)
    return values.reshape(np.shape(x))


def _kernel_bracket(u: np.ndarray, t: float, s: float) -> np.ndarray:
    """Re[(e^iut - 1)(e^-ius - 1)] / u^2 = g(t) + g(s) - g(t-s), g(a) = (a^2/2) sinc^2(ua/2)."""

    def g(a: float) -> np.ndarray:
        return 0.5 * a * a * _sinc(0.5 * u * a) ** 2

    return g(t) + g(s) - g(t - s)


def covariance_quadrature(
    density: SpectralDensity, t: float, s: float, config: EngineConfig = DEFAULT_CONFIG
) -> float:
    """
    K(t, s) = (1/pi) integral_0^inf Re[(e^iut - 1)(e^-ius - 1)] / u^2 m(u) du.

    Split at delta and U: an algebraic-weight rule on [0, delta] when m has a
    pole at 0, adaptive Gauss-Kronrod on [delta, U], and on [U, inf) the
    non-oscillatory part by QAGI plus one Fourier-weight integral per cosine.

    Raises:
        TailDivergence: When the envelope makes the kernel integral diverge
    """
    density.require_admissible()
    if t == 0 or s == 0:
        return 0.0
    delta = config.near_zero_split
    upper = config.grid_half_width

    def integrand(u: float) -> float:
        return float(_kernel_bracket(np.asarray(u), t, s) * density(u))

    if density.b > 0:
        near, _ = quad(
            lambda u: float(_kernel_bracket(np.asarray(u), t, s) * density.regular_part(u)),
            0.0, delta, weight="alg", wvar=(-density.b, 0.0),
        )
    else:
        near, _ = quad(integrand, 0.0, delta)
    middle, middle_error = quad(integrand, delta, upper, limit=2000, epsabs=1e-13, epsrel=1e-11)

    def damped(u: float) -> float:
        return float(density(u)) / (u * u)

    # 1 - cos(ut) - cos(us) + cos(u(t-s)), zero frequencies merged into the constant
    cosines: Dict[float, float] = {}
    constant = 1.0
    for frequency, sign in ((abs(t), -1.0), (abs(s), -1.0), (abs(t - s), 1.0)):
        if frequency == 0:
            constant += sign
        else:
            cosines[frequency] = cosines.get(frequency, 0.0) + sign
    tail = 0.0
    if constant != 0:
        tail += constant * quad(damped, upper, np.inf, epsabs=config.tail_tolerance * 1e-3)[0]
    for frequency, weight in cosines.items():
        if weight != 0:
            tail += weight * quad(damped, upper, np.inf, weight="cos", wvar=frequency, epsabs=config.tail_tolerance * 1e-3)[0]

    logger.debug(
        "K(%g, %g) for %s: near=%.3e middle=%.3e (+-%.1e) tail=%.3e",
        t, s, density.label, near, middle, middle_error, tail,
    )
    return (near + middle + tail) / math.pi


def covariance_series(
    density: SpectralDensity, t: float, s: float, N: int, config: EngineConfig = DEFAULT_CONFIG
) -> float:
    """
    Fock-expansion partial sum sum_{n<N} c_n(t) c_n(s).

    Args:
        density: Spectral density
        t, s: Times
        N: Number of Hermite terms (N <= hermite_max_order + 1)
        config: Grid settings

    Returns:
        The truncated covariance; 0 for N = 0
    """
    if N < 0:
        raise ValueError(f"Series length must be non-negative, got {N}")
    if N == 0:
        return 0.0
    return float(
        np.dot(indicator_coefficients(density, t, N, config), indicator_coefficients(density, s, N, config))
    )


@dataclass
class CovarianceGrid:
    """
    Sampled kernel K(t, s): one row per s value, one column per t value.

    Attributes:
        t_values: Column times
        s_values: Row times
        values: Matrix with values[i, j] = K(t_j, s_i)
    """

    t_values: np.ndarray
    s_values: np.ndarray
    values: np.ndarray

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, index=self.s_values, columns=self.t_values)

    @property
    def is_square(self) -> bool:
        return self.t_values.shape == self.s_values.shape and np.array_equal(self.t_values, self.s_values)

    def is_symmetric(self, tolerance: float = 1e-8) -> bool:
        return self.is_square and bool(np.allclose(self.values, self.values.T, atol=tolerance, rtol=0.0))

    def min_eigenvalue(self) -> float:
        if not self.is_square:
            raise ValueError("Eigenvalues need identical t and s grids")
        return float(np.linalg.eigvalsh(0.5 * (self.values + self.values.T)).min())

    def is_psd(self) -> bool:
        """Smallest eigenvalue >= -1e-8 * trace."""
        return self.min_eigenvalue() >= -1e-8 * float(np.trace(self.values))

    def to_csv(self, target: Union[str, Path, TextIO]) -> None:
        """Tab separated: header 's' then the t values; 17 significant digits throughout."""
        frame = pd.DataFrame(
            self.values,
            index=[format_float17(value) for value in self.s_values],
            columns=[format_float17(value) for value in self.t_values],
        )
        frame.to_csv(target, sep="\t", index_label="s", float_format="%.17g", lineterminator="\n")


def _checked_grid(values: Sequence[float], name: str) -> np.ndarray:
    grid = [float(value) for value in values]
    is_valid, message = validate_time_grid(grid)
    if not is_valid:
        raise ValueError(f"{name}: {message}")
    return np.array(grid)


def covariance_grid(
    density: SpectralDensity,
    ts: Sequence[float],
    ss: Sequence[float],
    mode: str = "quadrature",
    N: Optional[int] = None,
    config: EngineConfig = DEFAULT_CONFIG,
    workers: Optional[int] = None,
) -> CovarianceGrid:
    """
    Evaluate K on the product grid ss x ts.

    Cells are independent; with workers > 1 they run on a thread pool and
    each result is stored by its cell index.

    Args:
        density: Spectral density
        ts, ss: Strictly increasing non-negative time grids
        mode: 'quadrature' or 'series'
        N: Series length (defaults to config.hermite_order)
        config: Numerical settings
        workers: Thread count (defaults to config.workers)

    Returns:
        CovarianceGrid
    """
    t_values = _checked_grid(ts, "t grid")
    s_values = _checked_grid(ss, "s grid")
    values = np.zeros((len(s_values), len(t_values)))

    if mode == "series":
        count = config.hermite_order if N is None else N
        times = sorted(set(t_values) | set(s_values))
        vectors = {time: indicator_coefficients(density, time, count, config) for time in times}
        for i, s in enumerate(s_values):
            for j, t in enumerate(t_values):
                values[i, j] = float(np.dot(vectors[t], vectors[s])) if count else 0.0
    elif mode == "quadrature":
        density.require_admissible()
        cells: List[Tuple[int, int]] = [(i, j) for i in range(len(s_values)) for j in range(len(t_values))]

        def evaluate(cell: Tuple[int, int]) -> float:
            i, j = cell
            return covariance_quadrature(density, float(t_values[j]), float(s_values[i]), config)

        pool_size = config.workers if workers is None else workers
        if pool_size > 1:
            with ThreadPoolExecutor(max_workers=pool_size) as executor:
                results = list(executor.map(evaluate, cells))
        else:
            results = [evaluate(cell) for cell in cells]
        for (i, j), value in zip(cells, results):
            values[i, j] = value
    else:
        raise ValueError(f"Unknown covariance mode {mode!r}; expected 'quadrature' or 'series'")

    return CovarianceGrid(t_values, s_values, values)


def differentiability_check(
    density: SpectralDensity,
    t: float,
    p: int,
    weights: WeightProfile = IDENTITY_WEIGHTS,
    N: int = 200,
    steps: Sequence[float] = DIFFERENCE_STEPS,
    config: EngineConfig = DEFAULT_CONFIG,
) -> pd.DataFrame:
    """
    Finite-difference report for F_N(t) = sum_{n<N} c_n(t) e_(n+1).

    For each step h the error ||(F_N(t+h) - F_N(t))/h - D_N(t)||_-p is
    reported, with D_N(t) = sum (S_m xi_n)(t) e_(n+1) the candidate derivative.

    Returns:
        DataFrame with columns h, error and ratio (previous error / error)
    """
    errors = []
    if N > 0:
        base = indicator_coefficients(density, t, N, config)
        derivative = embed_X(derivative_coefficients(density, t, N, config))
        for h in steps:
            shifted = indicator_coefficients(density, t + h, N, config)
            quotient = embed_X((shifted - base) / h)
            errors.append(h_norm(algebra.sub(quotient, derivative), -p, weights))
    else:
        errors = [0.0 for _ in steps]
    report = pd.DataFrame({"h": list(steps), "error": errors})
    report["ratio"] = report["error"].shift(1) / report["error"]
    return report


@dataclass
class ProcessIntegral:
    """Result of the refined integral of Y(t) F'(t) over [0, 1]."""

    value: TernaryElement
    intervals: int
    difference: float
    nodes_checked: int
    vage_violations: int


Sampler = Union[Callable[[float], TernaryElement], Sequence[TernaryElement]]


def _sampler(source: Sampler) -> Tuple[Callable[[Fraction], TernaryElement], Optional[int]]:
    """Callable on dyadic nodes plus the finest level a grid input supports."""
    if callable(source):
        return (lambda node: source(float(node))), None  # type: ignore[operator]
    nodes = list(source)
    intervals = len(nodes) - 1
    if intervals < 1 or intervals & (intervals - 1):
        raise ValueError(f"Grid input needs 2^k + 1 uniform nodes on [0, 1], got {len(nodes)}")

    def lookup(node: Fraction) -> TernaryElement:
        scaled = node * intervals
        if scaled.denominator != 1:
            raise NoConvergence("Refinement went beyond the supplied grid")
        return nodes[int(scaled)]

    return lookup, intervals.bit_length() - 1


def process_integral(
    Y: Sampler,
    Fprime: Sampler,
    p: int,
    weights: WeightProfile = IDENTITY_WEIGHTS,
    q: Optional[int] = None,
    config: EngineConfig = DEFAULT_CONFIG,
) -> ProcessIntegral:
    """
    Integral over [0, 1] of Y(t) F'(t) in H_-p by composite trapezoid sums.

    The step is halved until successive sums differ by less than
    ``config.integral_tolerance`` in the H_-p norm. Every node is checked
    against the Våge bound ||Y F'||_-p <= C_(p-q) ||Y||_-q ||F'||_-p.

    Args:
        Y, Fprime: Callables t -> element, or grids of 2^k + 1 uniform nodes
        p: Level of the integral, p >= 1
        weights: Weight profile
        q: Level of Y in the Våge check (default p - 1)
        config: Tolerance and refinement cap

    Returns:
        ProcessIntegral with the value and the convergence record

    Raises:
        NoConvergence: When the refinement cap is reached first
    """
    q = p - 1 if q is None else q
    if not p > q >= 0:
        raise ValueError(f"process_integral needs p > q >= 0, got p={p}, q={q}")
    y_at, y_levels = _sampler(Y)
    f_at, f_levels = _sampler(Fprime)
    levels = [level for level in (y_levels, f_levels) if level is not None]
    cap = min([config.refinement_cap] + levels)

    cache: Dict[Fraction, TernaryElement] = {}
    violations = 0

    def summand(node: Fraction) -> TernaryElement:
        nonlocal violations
        if node not in cache:
            y, f = y_at(node), f_at(node)
            if not check_vage(y, f, p, q, weights).holds:
                violations += 1
                logger.warning("Våge bound fails at node t=%s", node)
            cache[node] = algebra.mul(y, f)
        return cache[node]

    def trapezoid_sum(intervals: int) -> TernaryElement:
        total = algebra.scale(Fraction(1, 2), algebra.add(summand(Fraction(0)), summand(Fraction(1))))
        for i in range(1, intervals):
            total = algebra.add(total, summand(Fraction(i, intervals)))
        return algebra.scale(Fraction(1, intervals), total)

    previous = trapezoid_sum(1)
    difference = math.inf
    for level in range(1, cap + 1):
        intervals = 2 ** level
        current = trapezoid_sum(intervals)
        difference = h_norm(algebra.sub(current, previous), -p, weights)
        logger.debug("process integral: %d intervals, difference %.3e", intervals, difference)
        if difference < config.integral_tolerance:
            return ProcessIntegral(current, intervals, difference, len(cache), violations)
        previous = current
    raise NoConvergence(
        f"Process integral did not reach tolerance {config.integral_tolerance:g} after {cap} halvings "
        f"(last difference {difference:.3e})"
    )


@dataclass
class FbmCalibration:
    """Normalisation c_H fitted from K(1, 1) = 1 next to the analytic value."""

    hurst: float
    fitted: float
    analytic: float

    @property
    def relative_gap(self) -> float:
        return abs(self.fitted - self.analytic) / self.analytic


def calibrate_fbm(hurst: float, config: EngineConfig = DEFAULT_CONFIG) -> FbmCalibration:
    """Fit c_H so that the quadrature kernel gives K(1, 1) = 1."""
    unit = covariance_quadrature(fbm_density(hurst, normalization=1.0), 1.0, 1.0, config)
    calibration = FbmCalibration(hurst=hurst, fitted=1.0 / unit, analytic=fbm_normalization(hurst))
    logger.info(
        "fBm H=%g: fitted c_H=%.10g, analytic c_H=%.10g", hurst, calibration.fitted, calibration.analytic
    )
    return calibration
