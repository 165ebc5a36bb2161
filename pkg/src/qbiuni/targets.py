"""Ma-Minda target functions phi(z) = 1 + B1 z + B2 z^2 + ..."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .series import DEFAULT_ORDER, Series, series_exp

__all__ = [
    "MindaTarget",
    "BadNormalization",
    "strongly_starlike",
    "starlike_order",
    "custom_target",
]


class BadNormalization(ValueError):
    pass


@dataclass(frozen=True)
class MindaTarget:
    kind: str  # "alpha", "beta" or "custom"
    param: Optional[float]
    series: Series
    # signed distance-like margin; positive inside the image region
    margin: Optional[Callable[[complex], float]] = field(default=None, compare=False, repr=False)

    @property
    def B1(self) -> float:
        return self.series[1].real

    @property
    def B2(self) -> float:
        return self.series[2].real if self.series.order >= 2 else 0.0

    @property
    def b_coeffs(self) -> np.ndarray:
        return self.series.coeffs[1:].real.copy()

    @property
    def has_region(self) -> bool:
        return self.margin is not None

    def region_test(self, w: complex) -> bool:
        if self.margin is None:
            raise NotImplementedError("custom targets have no region oracle")
        return self.margin(w) > 0

    def label(self) -> str:
        if self.kind == "custom":
            return "custom"
        return f"{self.kind}={self.param:g}"


def strongly_starlike(alpha: float, order: int = DEFAULT_ORDER) -> MindaTarget:
    """((1+z)/(1-z))**alpha, image the sector |arg w| < alpha*pi/2."""
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    # log((1+z)/(1-z)) = 2 atanh z = 2 (z + z^3/3 + z^5/5 + ...)
    log_cayley = np.zeros(order + 1, dtype=complex)
    log_cayley[1::2] = 2.0 / np.arange(1, order + 1, 2)
    s = series_exp(Series(alpha * log_cayley, order))
    half_angle = alpha * math.pi / 2

    def margin(w: complex) -> float:
        if w == 0:
            return 0.0
        return half_angle - abs(cmath.phase(w))

    return MindaTarget("alpha", float(alpha), s, margin)


def starlike_order(beta: float, order: int = DEFAULT_ORDER) -> MindaTarget:
    """(1 + (1-2 beta) z)/(1 - z), image the half-plane Re w > beta."""
    if not (0.0 <= beta < 1.0):
        raise ValueError(f"beta must lie in [0, 1), got {beta!r}")
    c = np.full(order + 1, 2.0 * (1.0 - beta), dtype=complex)
    c[0] = 1.0

    def margin(w: complex) -> float:
        return complex(w).real - beta

    return MindaTarget("beta", float(beta), Series(c, order), margin)


def custom_target(series: Series) -> MindaTarget:
    """Wrap an arbitrary phi; bounds work, membership checks do not."""
    c = series.coeffs
    if series.order < 2:
        raise BadNormalization("custom target needs order >= 2")
    if abs(c[0] - 1) > 1e-12:
        raise BadNormalization(f"phi(0) must be 1, got {c[0]!r}")
    if abs(c[1].imag) > 1e-12 or c[1].real <= 0:
        raise BadNormalization(f"B1 must be a positive real, got {c[1]!r}")
    return MindaTarget("custom", None, series, None)

