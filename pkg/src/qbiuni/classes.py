"""Defining expressions of the classes M(lambda, phi) and F(mu, phi), and
sampled subordination verdicts.

Both classes are built on the q-Salagean image ``D_q^k f``. The M class
compares successive operator images through the ratios
``D^{k+1} f / D^k f`` and ``D^{k+2} f / D^{k+1} f``. Two readings of the
extra step are provided:

``"classical"`` (default)
    ``D^{k+j} f = (z d/dz)^j D_q^k f``. Under this reading the expansion
    ``1 + (1+lam)[2]^k a2 z + (2(1+2lam)[3]^k a3 - (1+3lam)[2]^{2k} a2^2) z^2``
    holds exactly, and with it the coefficient bounds.
``"jackson"``
    ``D^{k+j} f = D_q^{k+j} f``, the literal q-operator. Its linear
    coefficient is ``q (1 + lam q) [2]^k a2``; the two readings agree as
    ``q -> 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from .qcalc import QParams, jackson_derivative, ordinary_derivative, salagean_q
from .series import NormalizedFunction, Series, _unwrap, comp_inverse
from .targets import MindaTarget

__all__ = [
    "ClassSpec",
    "SideVerdict",
    "MembershipVerdict",
    "NoRegionOracle",
    "DEFAULT_RINGS",
    "DEFAULT_POINTS_PER_RING",
    "m_expression",
    "f_expression",
    "class_expression",
    "g_expression",
    "subordination_check",
    "membership",
]

Step = Literal["classical", "jackson"]

DEFAULT_RINGS = (0.1, 0.3, 0.5, 0.7, 0.9, 0.95)
DEFAULT_POINTS_PER_RING = 64


class NoRegionOracle(ValueError):
    pass


@dataclass(frozen=True)
class ClassSpec:
    family: Literal["M", "F"]
    param: float  # lambda for M, mu for F
    qp: QParams
    target: MindaTarget
    step: Step = "classical"

    def __post_init__(self):
        if self.family not in ("M", "F"):
            raise ValueError(f"family must be 'M' or 'F', got {self.family!r}")
        if not (0.0 <= self.param <= 1.0):
            name = "lambda" if self.family == "M" else "mu"
            raise ValueError(f"{name} must lie in [0, 1], got {self.param!r}")
        if self.step not in ("classical", "jackson"):
            raise ValueError(f"unknown operator step {self.step!r}")

    @property
    def B1(self) -> float:
        return self.target.B1

    @property
    def B2(self) -> float:
        return self.target.B2


def _euler(s: Series) -> Series:
    return ordinary_derivative(s).times_z()


def _jackson_step(s: Series, q: float) -> Series:
    return jackson_derivative(s, q).times_z()


def m_expression(f, lam: float, qp: QParams, step: Step = "classical") -> Series:
    """``(1-lam) D^{k+1}f / D^k f + lam D^{k+2}f / D^{k+1}f``."""
    s = _unwrap(f)
    if s.order < 3:
        raise ValueError("m_expression needs truncation order >= 3")
    d0 = salagean_q(s, qp)
    if step == "classical":
        d1 = _euler(d0)
        d2 = _euler(d1)
    else:
        d1 = _jackson_step(d0, qp.q)
        d2 = _jackson_step(d1, qp.q)
    # every image vanishes at 0; cancel the common factor z before dividing
    r1 = d1.over_z() / d0.over_z()
    if lam == 0:
        return r1
    r2 = d2.over_z() / d1.over_z()
    return (1 - lam) * r1 + lam * r2


def f_expression(f, mu: float, qp: QParams) -> Series:
    """``(1-mu) D_q^k f / z + mu (D_q^k f)'`` with the ordinary derivative."""
    s = _unwrap(f)
    if s.order < 3:
        raise ValueError("f_expression needs truncation order >= 3")
    d = salagean_q(s, qp)
    return (1 - mu) * d.over_z() + mu * ordinary_derivative(d)


def class_expression(f, spec: ClassSpec) -> Series:
    if spec.family == "M":
        return m_expression(f, spec.param, spec.qp, spec.step)
    return f_expression(f, spec.param, spec.qp)


def g_expression(f, spec: ClassSpec) -> Series:
    """The class expression evaluated on the inverse branch ``g = f^{-1}``."""
    return class_expression(comp_inverse(f), spec)


@dataclass(frozen=True)
class SideVerdict:
    passed: bool
    worst_margin: float
    witness: complex  # sample point attaining the worst margin
    samples: int


@dataclass(frozen=True)
class MembershipVerdict:
    f_verdict: SideVerdict
    g_verdict: SideVerdict
    order: int

    @property
    def f_side(self) -> bool:
        return self.f_verdict.passed

    @property
    def g_side(self) -> bool:
        return self.g_verdict.passed

    @property
    def passed(self) -> bool:
        return self.f_side and self.g_side

    @property
    def worst_margin(self) -> float:
        return min(self.f_verdict.worst_margin, self.g_verdict.worst_margin)

    @property
    def samples_used(self) -> int:
        return self.f_verdict.samples + self.g_verdict.samples

    @property
    def witness_side(self) -> str:
        """Side whose witness is reported: the f-side if it fails, else the worse side."""
        if not self.f_side:
            return "f"
        if not self.g_side:
            return "g"
        return "f" if self.f_verdict.worst_margin <= self.g_verdict.worst_margin else "g"

    @property
    def witness(self) -> complex:
        return (self.f_verdict if self.witness_side == "f" else self.g_verdict).witness

    def describe(self) -> str:
        if self.passed:
            return f"pass (sampled, order {self.order})"
        z = self.witness
        return f"fail ({self.witness_side}-side witness z={z.real:.6g}{z.imag:+.6g}j)"


def _sample_points(rings: Sequence[float], points_per_ring: int) -> np.ndarray:
    theta = 2 * math.pi * np.arange(points_per_ring) / points_per_ring
    return np.concatenate([r * np.exp(1j * theta) for r in rings])


def subordination_check(
    expr: Series,
    target: MindaTarget,
    rings: Sequence[float] = DEFAULT_RINGS,
    points_per_ring: int = DEFAULT_POINTS_PER_RING,
) -> SideVerdict:
    """Check that ``expr`` maps every sample point into the image of ``target``.

    A failure is conclusive (the witness leaves the region); a pass is
    evidence at the given sample density.
    """
    if not target.has_region:
        raise NoRegionOracle("custom targets carry no region oracle")
    z = _sample_points(rings, points_per_ring)
    values = np.polyval(expr.coeffs[::-1], z)
    margins = np.array([target.margin(complex(w)) for w in values])
    i = int(np.argmin(margins))
    return SideVerdict(bool(np.all(margins > 0)), float(margins[i]), complex(z[i]), len(z))


def membership(
    f: NormalizedFunction,
    spec: ClassSpec,
    rings: Sequence[float] = DEFAULT_RINGS,
    points_per_ring: int = DEFAULT_POINTS_PER_RING,
) -> MembershipVerdict:
    fv = subordination_check(class_expression(f, spec), spec.target, rings, points_per_ring)
    gv = subordination_check(g_expression(f, spec), spec.target, rings, points_per_ring)
    return MembershipVerdict(fv, gv, _unwrap(f).order)
