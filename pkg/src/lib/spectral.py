"""Spectral densities m(u) with declared growth envelopes."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np
import pandas as pd
from scipy.special import gamma

from src.utils.error_handlers import EnvelopeViolation, TailDivergence
from src.utils.validators import validate_density_spec

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SpectralDensity:
    """
    Positive even density m(u) with envelope
    m(u) <= K |u|**(-b) for |u| <= 1 and m(u) <= K |u|**(2N) for |u| > 1.

    ``tail_exponent`` is the actual growth rate of m at infinity (at most 2N);
    together with b it decides whether the integral of m(u)/(u**2 + 1) is finite.

    Attributes:
        evaluator: Vectorised m on u >= 0 (callers pass |u|)
        K, b, N: Envelope parameters
        tail_exponent: Growth exponent of m for large |u|
        label: Human readable name used in logs and errors
        smooth_at_zero: False when m has a power-law cusp or pole at 0
        envelope_verified: Result of the sampled envelope check
    """

    evaluator: Evaluator
    K: float
    b: float
    N: int
    tail_exponent: float = 0.0
    label: str = "density"
    smooth_at_zero: bool = True
    envelope_verified: bool = field(default=True, init=False)

    def __post_init__(self) -> None:
        if not self.K > 0:
            raise EnvelopeViolation(f"{self.label}: envelope constant K must be positive, got K={self.K}")
        if not self.b < 2:
            raise EnvelopeViolation(f"{self.label}: envelope exponent b must be < 2, got b={self.b}")
        if self.N < 0:
            raise EnvelopeViolation(f"{self.label}: envelope order N must be >= 0, got N={self.N}")
        if self.tail_exponent > 2 * self.N:
            raise EnvelopeViolation(
                f"{self.label}: tail exponent {self.tail_exponent} exceeds the envelope order 2N={2 * self.N}"
            )
        object.__setattr__(self, "envelope_verified", self._sample_envelope())

    def _sample_envelope(self) -> bool:
        """Soft check on a log grid; a failure is logged, not raised."""
        near = np.logspace(-4, 0, 64)
        far = np.logspace(0, 4, 64)
        slack = 1.0 + 1e-9
        ok_near = bool(np.all(self(near) <= self.K * near ** (-self.b) * slack))
        ok_far = bool(np.all(self(far) <= self.K * far ** (2 * self.N) * slack))
        if not (ok_near and ok_far):
            logger.warning(
                "Density %s exceeds its declared envelope (K=%g, b=%g, N=%d) on sampled points",
                self.label, self.K, self.b, self.N,
            )
        return ok_near and ok_far

    def __call__(self, u: Union[float, np.ndarray]) -> np.ndarray:
        points = np.asarray(u, dtype=float)
        values = self.evaluator(np.abs(np.atleast_1d(points)))
        return np.asarray(values, dtype=float).reshape(points.shape)

    def value(self, u: float) -> float:
        return float(self(u))

    @property
    def is_admissible(self) -> bool:
        """Integral of m(u)/(u**2 + 1) is finite: b < 1 near 0 and tail exponent < 1."""
        return self.b < 1 and self.tail_exponent < 1

    def require_admissible(self) -> None:
        """
        Raises:
            TailDivergence: Naming the failing envelope parameter
        """
        if self.b >= 1:
            raise TailDivergence(
                f"{self.label}: m(u) ~ |u|^(-{self.b:g}) near 0 is not integrable against the kernel (need b < 1)"
            )
        if self.tail_exponent >= 1:
            raise TailDivergence(
                f"{self.label}: tail growth |u|^{self.tail_exponent:g} is not integrable against 4/u^2 "
                f"(need tail exponent < 1)"
            )

    def regular_part(self, u: np.ndarray) -> np.ndarray:
        """m(u) * u**b, bounded near 0 for power-law densities."""
        u = np.maximum(np.asarray(u, dtype=float), 1e-300)
        return self(u) * u ** self.b


def brownian_density() -> SpectralDensity:
    """m = 1: standard Brownian motion."""
    return SpectralDensity(lambda u: np.ones_like(u), K=1.0, b=0.0, N=0, tail_exponent=0.0, label="bm")


def fbm_normalization(hurst: float) -> float:
    """Gamma(2H+1) sin(pi H), the c_H giving K(t,s) = (t^2H + s^2H - |t-s|^2H)/2."""
    return float(gamma(2.0 * hurst + 1.0) * math.sin(math.pi * hurst))


def fbm_density(hurst: float, normalization: Optional[float] = None) -> SpectralDensity:
    """
    m(u) = c_H |u|**(1-2H) for fractional Brownian motion.

    Args:
        hurst: Hurst index H in (0, 1)
        normalization: c_H; the analytic value when omitted

    Returns:
        Density with b = 2H - 1, N = 0 for H >= 1/2 and N = 1 below
    """
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"Hurst index must lie in (0, 1), got {hurst}")
    c = fbm_normalization(hurst) if normalization is None else normalization
    exponent = 1.0 - 2.0 * hurst
    if hurst == 0.5:
        return SpectralDensity(
            lambda u: np.full_like(u, c), K=c, b=0.0, N=0, tail_exponent=0.0, label="fbm:H=0.5"
        )
    return SpectralDensity(
        lambda u: c * np.power(u, exponent, where=u > 0, out=np.full_like(u, np.inf if exponent < 0 else 0.0)),
        K=c,
        b=-exponent,
        N=0 if exponent <= 0 else 1,
        tail_exponent=exponent,
        label=f"fbm:H={hurst:g}",
        smooth_at_zero=False,
    )


def power_law_density(b: float, K: float = 1.0) -> SpectralDensity:
    """m(u) = K |u|**(-b); admissible for 0 <= b < 1, rejected for b >= 2."""
    tail = -b
    return SpectralDensity(
        lambda u: K * np.power(u, -b, where=u > 0, out=np.full_like(u, np.inf if b > 0 else 0.0)),
        K=K,
        b=b,
        N=max(0, math.ceil(tail / 2)),
        tail_exponent=tail,
        label=f"power:b={b:g}",
        smooth_at_zero=b == 0,
    )


def tabulated_density(frame: pd.DataFrame, label: str = "table") -> SpectralDensity:
    """
    Density from a two-column (u, m) table with u >= 0, mirrored to u < 0.

    Linear interpolation inside the table, constant extension beyond its last
    abscissa (tail exponent 0).

    Raises:
        ValueError: If the table is malformed
    """
    if frame.shape[1] < 2:
        raise ValueError(f"{label}: density table needs two columns (u, m)")
    data = frame.iloc[:, :2].apply(pd.to_numeric, errors="coerce").dropna()
    data = data.sort_values(data.columns[0])
    u = data.iloc[:, 0].to_numpy(dtype=float)
    m = data.iloc[:, 1].to_numpy(dtype=float)
    if len(u) < 2:
        raise ValueError(f"{label}: density table needs at least two rows")
    if u[0] < 0:
        raise ValueError(f"{label}: abscissae must be non-negative")
    if np.any(np.diff(u) <= 0):
        raise ValueError(f"{label}: abscissae must be distinct")
    if np.any(m < 0) or not np.all(np.isfinite(m)):
        raise ValueError(f"{label}: density values must be finite and non-negative")

    def evaluate(x: np.ndarray) -> np.ndarray:
        return np.interp(x, u, m, left=m[0], right=m[-1])

    K = float(max(m.max(), 1e-300))
    return SpectralDensity(evaluate, K=K, b=0.0, N=0, tail_exponent=0.0, label=label)


def load_density_table(path: Union[str, Path]) -> SpectralDensity:
    """
    Read a two-column CSV (u, m); a header row is optional.

    Raises:
        ValueError: If the file cannot be parsed
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, header=None, comment="#")
    except Exception as e:
        raise ValueError(f"Failed to parse density table '{path}': {str(e)}") from e
    return tabulated_density(frame, label=f"table:{path}")


def parse_density_spec(spec: str) -> SpectralDensity:
    """
    Build a density from 'bm', 'fbm:H=<v>' or 'table:<path>'.

    Raises:
        ValueError: If the spec is invalid
    """
    is_valid, message = validate_density_spec(spec)
    if not is_valid:
        raise ValueError(message)
    if spec == "bm":
        return brownian_density()
    if spec.startswith("fbm:"):
        return fbm_density(float(spec.split("=", 1)[1]))
    return load_density_table(spec[len("table:"):])
