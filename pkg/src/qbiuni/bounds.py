"""Closed-form coefficient and Fekete-Szego bounds for the M and F classes.

All functions take the class parameter (lambda or mu), a :class:`QParams`
and the target coefficients ``B1``, ``B2``. A vanishing radicand or
denominator raises :class:`DegenerateBound`; :func:`bound_report` turns
that into a flag so parameter sweeps keep going.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .classes import ClassSpec
from .qcalc import QParams

__all__ = [
    "DEGENERATE_TOL",
    "DegenerateBound",
    "m_bracket",
    "f_bracket",
    "a2_bound_M",
    "a3_bound_M",
    "a2_bound_F",
    "a3_bound_F",
    "theta",
    "fs_threshold_M",
    "fs_bound_M",
    "phi_fs",
    "fs_threshold_F",
    "fs_bound_F",
    "fs_two_term_M",
    "fs_two_term_F",
    "a2_bound_M_alpha",
    "a3_bound_M_alpha",
    "a2_bound_M_beta",
    "a3_bound_M_beta",
    "BoundReport",
    "bound_report",
]

DEGENERATE_TOL = 1e-12


class DegenerateBound(ArithmeticError):
    """The bound's radicand or denominator vanishes."""


def _pow(qp: QParams, n: int, e: int) -> float:
    return qp.bracket(n) ** e


def m_bracket(lam: float, qp: QParams, B1: float, B2: float) -> float:
    """``(2(1+2lam)[3]^k - (1+3lam)[2]^{2k}) B1^2 + (1+lam)^2 (B1-B2) [2]^{2k}``."""
    k = qp.k
    t2 = _pow(qp, 2, 2 * k)
    return (2 * (1 + 2 * lam) * _pow(qp, 3, k) - (1 + 3 * lam) * t2) * B1**2 + (
        (1 + lam) ** 2 * (B1 - B2) * t2
    )


def f_bracket(mu: float, qp: QParams, B1: float, B2: float) -> float:
    """``(1+2mu)[3]^k B1^2 + (1+mu)^2 [2]^{2k} (B1-B2)``."""
    k = qp.k
    return (1 + 2 * mu) * _pow(qp, 3, k) * B1**2 + (1 + mu) ** 2 * _pow(qp, 2, 2 * k) * (B1 - B2)


def _a2_from_bracket(bracket: float, B1: float) -> float:
    if abs(bracket) < DEGENERATE_TOL:
        raise DegenerateBound(f"radicand {bracket!r} vanishes")
    return B1 * math.sqrt(B1) / math.sqrt(abs(bracket))


def a2_bound_M(lam: float, qp: QParams, B1: float, B2: float) -> float:
    return _a2_from_bracket(m_bracket(lam, qp, B1, B2), B1)


def a3_bound_M(lam: float, qp: QParams, B1: float) -> float:
    k = qp.k
    return B1 / (2 * (1 + 2 * lam) * _pow(qp, 3, k)) + (B1 / ((1 + lam) * _pow(qp, 2, k))) ** 2


def a2_bound_F(mu: float, qp: QParams, B1: float, B2: float) -> float:
    return _a2_from_bracket(f_bracket(mu, qp, B1, B2), B1)


def a3_bound_F(mu: float, qp: QParams, B1: float) -> float:
    k = qp.k
    return B1 * (B1 / ((1 + mu) ** 2 * _pow(qp, 2, 2 * k)) + 1 / ((1 + 2 * mu) * _pow(qp, 3, k)))


def theta(tau: complex, lam: float, qp: QParams, B1: float, B2: float) -> complex:
    br = m_bracket(lam, qp, B1, B2)
    if abs(br) < DEGENERATE_TOL:
        raise DegenerateBound(f"denominator {br!r} vanishes")
    return B1**2 * (1 - complex(tau)) / (4 * br)


def fs_threshold_M(lam: float, qp: QParams) -> float:
    return 1 / (8 * (1 + 2 * lam) * _pow(qp, 3, qp.k))


def fs_bound_M(tau: complex, lam: float, qp: QParams, B1: float, B2: float) -> float:
    """Piecewise bound on ``|a3 - tau a2^2|`` for the M class.

    This is ``4 B1 max(|Theta|, t)`` with ``t = 1/(8(1+2lam)[3]^k)``, the
    closed form of the two-term estimate ``2 B1 (|Theta + t| + |Theta - t|)``
    when Theta is real, i.e. for real ``tau``. For non-real ``tau`` the
    two-term estimate is larger and the piecewise value is not implied by it;
    the oracle finds chain-consistent points above it (see
    :func:`fs_two_term_M`).
    """
    th = abs(theta(tau, lam, qp, B1, B2))
    t = fs_threshold_M(lam, qp)
    if th < t:
        return B1 / (2 * (1 + 2 * lam) * _pow(qp, 3, qp.k))
    return 4 * B1 * th


def phi_fs(tau: complex, mu: float, qp: QParams, B1: float, B2: float) -> complex:
    br = f_bracket(mu, qp, B1, B2)
    if abs(br) < DEGENERATE_TOL:
        raise DegenerateBound(f"denominator {br!r} vanishes")
    return B1**2 * (1 - complex(tau)) / (4 * br)


def fs_threshold_F(mu: float, qp: QParams) -> float:
    return 1 / (4 * (1 + 2 * mu) * _pow(qp, 3, qp.k))


def fs_bound_F(tau: complex, mu: float, qp: QParams, B1: float, B2: float) -> float:
    """Piecewise bound on ``|a3 - tau a2^2|`` for the F class.

    Closed form of ``2 B1 (|Phi + t| + |Phi - t|)`` for real Phi, with
    ``t = 1/(4(1+2mu)[3]^k)``: it equals ``4 B1 max(|Phi|, t)``. The same
    caveat as for :func:`fs_bound_M` applies to non-real ``tau``.
    """
    ph = abs(phi_fs(tau, mu, qp, B1, B2))
    t = fs_threshold_F(mu, qp)
    if ph < t:
        return B1 / ((1 + 2 * mu) * _pow(qp, 3, qp.k))
    return 4 * B1 * ph


def fs_two_term_M(tau: complex, lam: float, qp: QParams, B1: float, B2: float) -> float:
    """``2 B1 (|Theta + t| + |Theta - t|)``, valid for every complex ``tau``."""
    th, t = theta(tau, lam, qp, B1, B2), fs_threshold_M(lam, qp)
    return 2 * B1 * (abs(th + t) + abs(th - t))


def fs_two_term_F(tau: complex, mu: float, qp: QParams, B1: float, B2: float) -> float:
    """``2 B1 (|Phi + t| + |Phi - t|)``, valid for every complex ``tau``."""
    ph, t = phi_fs(tau, mu, qp, B1, B2), fs_threshold_F(mu, qp)
    return 2 * B1 * (abs(ph + t) + abs(ph - t))


# Specializations to the two built-in targets. Written out separately so the
# tests can hold them against the general formulas.

def a2_bound_M_alpha(alpha: float, lam: float, qp: QParams) -> float:
    k = qp.k
    t2 = _pow(qp, 2, 2 * k)
    d = 2 * (2 * (1 + 2 * lam) * _pow(qp, 3, k) - (1 + 3 * lam) * t2) * alpha + (
        (1 - alpha) * (1 + lam) ** 2 * t2
    )
    if abs(d) < DEGENERATE_TOL:
        raise DegenerateBound(f"radicand {d!r} vanishes")
    return 2 * alpha / math.sqrt(abs(d))


def a3_bound_M_alpha(alpha: float, lam: float, qp: QParams) -> float:
    k = qp.k
    return 4 * alpha**2 / ((1 + lam) ** 2 * _pow(qp, 2, 2 * k)) + alpha / (
        (1 + 2 * lam) * _pow(qp, 3, k)
    )


def a2_bound_M_beta(beta: float, lam: float, qp: QParams) -> float:
    k = qp.k
    d = 2 * (1 + 2 * lam) * _pow(qp, 3, k) - (1 + 3 * lam) * _pow(qp, 2, 2 * k)
    if abs(d) < DEGENERATE_TOL:
        raise DegenerateBound(f"radicand {d!r} vanishes")
    return math.sqrt(2 * (1 - beta) / abs(d))


def a3_bound_M_beta(beta: float, lam: float, qp: QParams) -> float:
    k = qp.k
    return 4 * (1 - beta) ** 2 / ((1 + lam) ** 2 * _pow(qp, 2, 2 * k)) + (1 - beta) / (
        (1 + 2 * lam) * _pow(qp, 3, k)
    )


@dataclass(frozen=True)
class BoundReport:
    spec: ClassSpec
    a2_bound: Optional[float]  # None when degenerate
    a3_bound: float
    fs_bounds: dict = field(default_factory=dict)  # tau -> bound or None

    @property
    def degenerate(self) -> bool:
        return self.a2_bound is None


def bound_report(spec: ClassSpec, taus: Iterable[complex] = ()) -> BoundReport:
    lam, qp, B1, B2 = spec.param, spec.qp, spec.B1, spec.B2
    if spec.family == "M":
        a2f, a3, fsf = a2_bound_M, a3_bound_M(lam, qp, B1), fs_bound_M
    else:
        a2f, a3, fsf = a2_bound_F, a3_bound_F(lam, qp, B1), fs_bound_F
    try:
        a2 = a2f(lam, qp, B1, B2)
    except DegenerateBound:
        a2 = None
    fs = {}
    for tau in taus:
        try:
            fs[complex(tau)] = fsf(tau, lam, qp, B1, B2)
        except DegenerateBound:
            fs[complex(tau)] = None
    return BoundReport(spec, a2, a3, fs)
