"""Norms on the ternary algebra and the weighted Hilbert scale H_p / H_-p."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.special import logsumexp

from src.lib import algebra
from src.lib.algebra import TernaryElement
from src.lib.multi_index import MultiIndex
from src.utils.config import DEFAULT_CONFIG, EngineConfig
from src.utils.error_handlers import DivergenceGuard, NotInvertible, Overflow

logger = logging.getLogger(__name__)

# log(sys.float_info.max)
LOG_FLOAT_MAX = 709.782712893384

# lower bound on the power-series iteration cap
MIN_SERIES_TERMS = 64


@dataclass(frozen=True)
class WeightProfile:
    """
    Weights c_nu = exp(sum_k phi(3**(k-1) * nu_k)) of the Hilbert scale.

    The gauge phi must vanish at 0, be additive and increasing; this is
    checked on sample points when the profile is built.
    """

    gauge: Callable[[float], float]
    name: str = "identity"

    def __post_init__(self) -> None:
        phi = self.gauge
        if phi(0.0) != 0:
            raise ValueError(f"Gauge {self.name!r} must satisfy phi(0) = 0")
        samples = (1.0, 2.0, 3.0, 9.0, 27.0)
        previous = 0.0
        for x in samples:
            value = phi(x)
            if not value > previous:
                raise ValueError(f"Gauge {self.name!r} must be increasing on positive reals")
            previous = value
        for x, y in ((1.0, 2.0), (3.0, 6.0), (9.0, 18.0)):
            if not math.isclose(phi(x) + phi(y), phi(x + y), rel_tol=1e-12):
                raise ValueError(f"Gauge {self.name!r} must be additive")

    @classmethod
    def identity(cls) -> WeightProfile:
        """phi(x) = x."""
        return cls(_identity_gauge, "identity")

    @classmethod
    def linear(cls, rate: float) -> WeightProfile:
        """phi(x) = rate * x for rate > 0."""
        if not rate > 0:
            raise ValueError(f"Linear gauge rate must be positive, got {rate}")
        return cls(lambda x: rate * x, f"linear:{rate}")

    def slot_log_weight(self, position: int) -> float:
        """phi(3**(position-1)), the log-weight of a single e_position."""
        return self.gauge(float(3 ** (position - 1)))

    def log_weight(self, index: MultiIndex) -> float:
        return math.fsum(self.gauge(float(3 ** (position - 1) * exponent)) for position, exponent in index)

    def weight(self, index: MultiIndex) -> float:
        """
        c_nu itself.

        Raises:
            Overflow: When c_nu exceeds the floating range
        """
        log_c = self.log_weight(index)
        if log_c > LOG_FLOAT_MAX:
            raise Overflow(f"Weight of {index} is exp({log_c:.6g}), beyond float range")
        return math.exp(log_c)


def _identity_gauge(x: float) -> float:
    return x


IDENTITY_WEIGHTS = WeightProfile.identity()


@dataclass(frozen=True, order=True)
class ScaleIndex:
    """Level of the scale: p > 0 test-function side H_p, p < 0 distribution side H_-p."""

    p: int

    def __post_init__(self) -> None:
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise ValueError(f"Scale index must be an integer, got {self.p!r}")

    @property
    def is_distribution(self) -> bool:
        return self.p < 0


ScaleLike = Union[ScaleIndex, int]


def _level(p: ScaleLike) -> int:
    return p.p if isinstance(p, ScaleIndex) else ScaleIndex(p).p


def p_norm(z: TernaryElement, p: float) -> float:
    """
    (sum |z_nu|**p) ** (1/p).

    Args:
        z: Element
        p: Exponent, p >= 1

    Returns:
        The p-norm of the coefficient sequence
    """
    if not p >= 1:
        raise ValueError(f"p-norm requires p >= 1, got {p}")
    moduli = np.array([abs(complex(value)) for _, value in z.items()], dtype=float)
    if moduli.size == 0:
        return 0.0
    scale = moduli.max()
    return float(scale * np.sum((moduli / scale) ** p) ** (1.0 / p))


def h_norm(z: TernaryElement, p: ScaleLike, weights: WeightProfile = IDENTITY_WEIGHTS) -> float:
    """
    Weighted norm sqrt(sum |z_nu|**2 * c_nu**(2p)) of the level p.

    ``p = -q`` gives the distribution norm of H_-q. Accumulated as a
    log-sum-exp over 2*log|z_nu| + 2p*log(c_nu).

    Args:
        z: Element
        p: Scale level (ScaleIndex or signed integer)
        weights: Weight profile

    Returns:
        The norm

    Raises:
        Overflow: When the norm exceeds the floating range
    """
    level = _level(p)
    logs = [
        2.0 * math.log(abs(complex(value))) + 2.0 * level * weights.log_weight(index)
        for index, value in z.items()
        if complex(value) != 0
    ]
    if not logs:
        return 0.0
    log_norm = 0.5 * float(logsumexp(np.array(logs)))
    if log_norm > LOG_FLOAT_MAX:
        raise Overflow(f"H_{level} norm is exp({log_norm:.6g}), beyond float range")
    return math.exp(log_norm)


def distribution_norm(z: TernaryElement, q: int, weights: WeightProfile = IDENTITY_WEIGHTS) -> float:
    """Norm of H_-q for q >= 0."""
    return h_norm(z, -q, weights)


def scale_monotonicity(f: TernaryElement, ps: Iterable[int], weights: WeightProfile = IDENTITY_WEIGHTS) -> List[float]:
    """Distribution norms for each q in ``ps``; nonincreasing for increasing q."""
    return [distribution_norm(f, q, weights) for q in ps]


def vage_partial_sum(gap: int, truncation_d: int, weights: WeightProfile = IDENTITY_WEIGHTS) -> float:
    """
    sum of c_nu**(-2*gap) over nu supported in 1..truncation_d.

    Factorises as prod_k (1 + x_k + x_k**2) with x_k = c_(e_k)**(-2*gap).
    """
    total = 1.0
    for position in range(1, truncation_d + 1):
        x = math.exp(-2.0 * gap * weights.slot_log_weight(position))
        total *= 1.0 + x + x * x
    return total


def vage_tail_factor(gap: int, truncation_d: int, weights: WeightProfile = IDENTITY_WEIGHTS) -> float:
    """
    Upper bound on prod_{k > truncation_d} (1 + x_k + x_k**2).

    x_(k+1) = x_k**3 makes the x_k beyond the truncation geometric with ratio
    x_(d+1), so the product is at most exp(2 x_(d+1) / (1 - x_(d+1))).
    """
    x = math.exp(-2.0 * gap * weights.slot_log_weight(truncation_d + 1))
    return math.exp(2.0 * x / (1.0 - x))


def vage_closed_bound(gap: int, weights: WeightProfile = IDENTITY_WEIGHTS) -> float:
    """(1 - y) / (1 - 2y) with y = c_(e_1)**(-2*gap), the bound on the full weight sum."""
    y = math.exp(-2.0 * gap * weights.slot_log_weight(1))
    if 2.0 * y >= 1.0:
        raise ValueError(f"Closed-form bound needs 2*exp(-2*gap*phi(1)) < 1 (gap={gap})")
    return (1.0 - y) / (1.0 - 2.0 * y)


def vage_constant(gap: int, truncation_d: int, weights: WeightProfile = IDENTITY_WEIGHTS) -> float:
    """
    C_gap of the Våge inequality.

    Args:
        gap: p - q >= 1
        truncation_d: Positions summed exactly; the rest is bounded analytically
        weights: Weight profile

    Returns:
        sqrt of the partial weight sum times its tail bound, capped by the
        closed-form bound
    """
    if gap < 1:
        raise ValueError(f"Våge gap must be >= 1, got {gap}")
    if truncation_d < 0:
        raise ValueError(f"Truncation must be non-negative, got {truncation_d}")
    estimate = vage_partial_sum(gap, truncation_d, weights) * vage_tail_factor(gap, truncation_d, weights)
    try:
        estimate = min(estimate, vage_closed_bound(gap, weights))
    except ValueError:
        pass
    return math.sqrt(estimate)


@dataclass
class VageReport:
    """Both sides of ||fg||_-p <= C ||f||_-q ||g||_-p and its mirror."""

    p: int
    q: int
    lhs: float
    rhs: float
    constant: float
    margin: float
    holds: bool
    mirrored_lhs: float
    mirrored_holds: bool

    def to_record(self) -> dict:
        return asdict(self)


def check_vage(
    f: TernaryElement,
    g: TernaryElement,
    p: int,
    q: int,
    weights: WeightProfile = IDENTITY_WEIGHTS,
    closed_form: bool = False,
    slack: float = 1e-12,
) -> VageReport:
    """
    Evaluate the Våge inequality for one pair.

    Args:
        f, g: Factors
        p, q: Levels with p > q >= 0
        weights: Weight profile
        closed_form: Use sqrt of the closed-form bound instead of the
            truncated estimate at the support bound of f and g
        slack: Relative slack absorbing float rounding

    Returns:
        VageReport; the mirrored product gf is checked with the same constant
    """
    if not p > q:
        raise ValueError(f"Våge check requires p > q, got p={p}, q={q}")
    gap = p - q
    if closed_form:
        constant = math.sqrt(vage_closed_bound(gap, weights))
    else:
        constant = vage_constant(gap, max(f.max_position, g.max_position), weights)
    lhs = h_norm(algebra.mul(f, g), -p, weights)
    mirrored = h_norm(algebra.mul(g, f), -p, weights)
    rhs = constant * h_norm(f, -q, weights) * h_norm(g, -p, weights)
    bound = rhs * (1.0 + slack) + slack
    return VageReport(
        p=p,
        q=q,
        lhs=lhs,
        rhs=rhs,
        constant=constant,
        margin=rhs - lhs,
        holds=lhs <= bound,
        mirrored_lhs=mirrored,
        mirrored_holds=mirrored <= bound,
    )


def vage_report_frame(reports: Sequence[VageReport]) -> pd.DataFrame:
    """Flat table (p, q, lhs, rhs, constant, margin, holds, ...) for CSV output."""
    columns = [name for name in VageReport.__dataclass_fields__]
    return pd.DataFrame([report.to_record() for report in reports], columns=columns)


@dataclass
class NormInequalityReport:
    """Both sides of the 1-norm and p-norm product inequalities."""

    p: int
    product_one_norm: float
    one_norm_bound: float
    product_p_power: float
    p_power_bound: float
    mirrored_p_power: float
    holds: bool = field(default=False)


def theorem31_check(z: TernaryElement, w: TernaryElement, p: int, slack: float = 1e-9) -> NormInequalityReport:
    """
    ||zw||_1 <= ||z||_1 ||w||_1 and
    ||zw||_p**p <= ||z||_1**p * ||w||_(2**(p-1)) * prod_{k=1}^{p-1} ||w||_(2**k),
    the latter taken exactly as printed in the source, checked for zw and wz.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    zw = algebra.mul(z, w)
    wz = algebra.mul(w, z)
    one_bound = p_norm(z, 1) * p_norm(w, 1)
    p_bound = p_norm(z, 1) ** p * p_norm(w, 2 ** (p - 1))
    for k in range(1, p):
        p_bound *= p_norm(w, 2 ** k)
    product_p = p_norm(zw, p) ** p
    mirrored_p = p_norm(wz, p) ** p

    def within(value: float, bound: float) -> bool:
        return value <= bound * (1.0 + slack) + slack

    report = NormInequalityReport(
        p=p,
        product_one_norm=p_norm(zw, 1),
        one_norm_bound=one_bound,
        product_p_power=product_p,
        p_power_bound=p_bound,
        mirrored_p_power=mirrored_p,
    )
    report.holds = within(report.product_one_norm, one_bound) and within(product_p, p_bound) and within(mirrored_p, p_bound)
    return report


def scalar_part_criterion(f: TernaryElement, radius: float, c2: float) -> bool:
    """|f0|**2 < R / C_2, the scalar-part guard for power series."""
    return abs(complex(algebra.body(f))) ** 2 < radius / c2


Coefficients = Union[Sequence[complex], Callable[[int], complex]]


def _coefficient(alpha: Coefficients, n: int) -> Optional[complex]:
    if callable(alpha):
        return alpha(n)
    if n < len(alpha):
        return alpha[n]
    return None


def power_series_apply(
    alpha: Coefficients,
    radius: float,
    f: TernaryElement,
    p: int,
    weights: WeightProfile = IDENTITY_WEIGHTS,
    config: EngineConfig = DEFAULT_CONFIG,
) -> TernaryElement:
    """
    F(f) = sum_n alpha_n f**n, convergent in H_-(p+2).

    Summation stops when f**n vanishes, when the coefficients run out, or when
    the tail estimate drops below ``config.series_tolerance``. The estimate is
    the H_-(p+2) norm of the last term; under the norm guard it is raised to
    the geometric bound |alpha_n| C_2**(n-1) ||f||**n * rho / (1 - rho) with
    rho = C_2 ||f||_-p / R, which assumes |alpha_k| <= |alpha_n| R**(n-k).

    Args:
        alpha: Coefficient sequence, or a callable n -> alpha_n
        radius: Radius of convergence R of the scalar series (math.inf allowed)
        f: Argument
        p: Level q of the guard ||f||_-p < R / C_2
        weights: Weight profile
        config: Supplies series_tolerance and series_cap_factor; the cap is
            max(series_cap_factor * nilpotency_index(f), MIN_SERIES_TERMS)

    Returns:
        The partial sum at termination

    Raises:
        DivergenceGuard: When neither the norm guard nor the scalar-part guard holds
    """
    c2 = vage_constant(2, max(f.max_position, 1), weights)
    f_norm = distribution_norm(f, p, weights)
    norm_guard = f_norm < radius / c2
    if not norm_guard and not scalar_part_criterion(f, radius, c2):
        raise DivergenceGuard(
            f"||f||_-{p} = {f_norm:.6g} and |f0|^2 = "
            f"{abs(complex(algebra.body(f))) ** 2:.6g} both reach R/C2 = {radius / c2:.6g}"
        )
    rho = c2 * f_norm / radius if norm_guard else None

    cap = max(config.series_cap_factor * algebra.nilpotency_index(f), MIN_SERIES_TERMS)
    total = algebra.zero(f.field)
    term_power = algebra.one(f.field)
    n = 0
    while n <= cap:
        coefficient = _coefficient(alpha, n)
        if coefficient is None:
            break
        term = algebra.scale(coefficient, term_power)
        total = algebra.add(total, term)
        term_power = algebra.mul(term_power, f)
        if term_power.is_zero:
            logger.debug("power series terminated exactly after %d terms", n + 1)
            return total
        if n > 0 and coefficient != 0:
            estimate = distribution_norm(term, p + 2, weights)
            if rho is not None and rho > 0:
                bound = abs(complex(coefficient)) * c2 ** (n - 1) * f_norm ** n
                estimate = max(estimate, bound * rho / (1.0 - rho))
            if estimate < config.series_tolerance:
                logger.debug("power series met tolerance after %d terms", n + 1)
                return total
        n += 1
    if n > cap:
        logger.warning("power series stopped at the iteration cap (%d terms)", cap + 1)
    return total


def neumann_inverse(
    f: TernaryElement, p: int = 1, weights: WeightProfile = IDENTITY_WEIGHTS, config: EngineConfig = DEFAULT_CONFIG
) -> TernaryElement:
    """
    f**-1 = (1/f0) * sum_n (1 - f/f0)**n, the inverse in the distribution algebra.

    Raises:
        NotInvertible: When |f0| is at most ``config.inverse_floor`` (zero in exact mode)
    """
    if not algebra.is_invertible(f, config.inverse_floor):
        raise NotInvertible(f"Element with scalar part {algebra.body(f)!r} is not invertible")
    b0_inv = f.field.inverse(f.field.coerce(algebra.body(f)))
    g = algebra.sub(algebra.one(f.field), algebra.scale(b0_inv, f))
    series = power_series_apply(lambda n: 1, 1.0, g, p, weights, config)
    return algebra.scale(b0_inv, series)
