"""q-brackets, the Jackson q-derivative and the Salagean q-operator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import NormalizedFunction, Series, _unwrap

__all__ = [
    "QParams",
    "q_bracket",
    "q_brackets",
    "jackson_derivative",
    "ordinary_derivative",
    "salagean_q",
]


def _check_q(q: float) -> None:
    if not (0.0 < q < 1.0):
        raise ValueError(f"q must lie in the open interval (0, 1), got {q!r}")


@dataclass(frozen=True)
class QParams:
    q: float
    k: int = 0

    def __post_init__(self):
        _check_q(self.q)
        if int(self.k) != self.k or self.k < 0:
            raise ValueError(f"k must be a non-negative integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    def bracket(self, n: int) -> float:
        return q_bracket(n, self.q)


def q_bracket(n: int, q: float) -> float:
    """``[n]_q = (1 - q**n) / (1 - q)``.

    Summed as ``1 + q + ... + q**(n-1)`` so the value stays accurate as
    ``q -> 1``.

    >>> q_bracket(2, 0.5)
    1.5
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_q(q)
    return math.fsum(q**j for j in range(n))


def q_brackets(order: int, q: float) -> np.ndarray:
    """Array ``[0, [1]_q, ..., [order]_q]`` (index 0 holds 0)."""
    out = np.zeros(order + 1)
    for n in range(1, order + 1):
        out[n] = q_bracket(n, q)
    return out


def jackson_derivative(f, q: float) -> Series:
    """Series form of ``(f(z) - f(qz)) / ((1 - q) z)``: c_n -> [n]_q c_n, one degree down."""
    s = _unwrap(f)
    _check_q(q)
    if s.order == 0:
        return Series([0], 0)
    w = q_brackets(s.order, q)
    return Series((s.coeffs * w)[1:], s.order - 1)


def ordinary_derivative(f) -> Series:
    s = _unwrap(f)
    if s.order == 0:
        return Series([0], 0)
    return Series((s.coeffs * np.arange(s.order + 1))[1:], s.order - 1)


def salagean_q(f: NormalizedFunction | Series, qp: QParams) -> Series:
    """``z + sum_{n>=2} [n]_q**k a_n z**n``.

    Accepts any series vanishing at the origin, so the inverse branch
    ``g = f^{-1}`` can be passed directly.
    """
    s = _unwrap(f)
    w = q_brackets(s.order, qp.q) ** qp.k
    return s.scaled(w)

