"""Truncated complex power series.

A :class:`Series` of order ``N`` holds the coefficients ``c0 .. cN`` of an
expansion about the origin. Terms above ``z**N`` are unknown, not zero, so
every binary operation truncates to the smaller operand order.

    >>> f = Series([0, 1, 0.5])
    >>> (f * f).coeffs.tolist()
    [0j, 0j, (1+0j)]
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER = 16
ZERO_TOL = 1e-12

__all__ = [
    "DEFAULT_ORDER",
    "Series",
    "NormalizedFunction",
    "SeriesError",
    "ZeroConstantTerm",
    "NonzeroInnerConstant",
    "NotNormalized",
    "add",
    "sub",
    "mul",
    "div",
    "compose",
    "comp_inverse",
    "evaluate",
    "series_exp",
    "normalized",
]


class SeriesError(ValueError):
    pass


class ZeroConstantTerm(SeriesError):
    """Division by a series whose constant term vanishes."""


class NonzeroInnerConstant(SeriesError):
    """Composition with an inner series that does not fix the origin."""


class NotNormalized(SeriesError):
    """Series is not of the form z + a2 z^2 + ..."""


@dataclass(frozen=True, eq=False)
class Series:
    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable[complex], order: int | None = None):
        c = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                       dtype=complex).ravel()
        if order is None:
            order = max(len(c) - 1, 0)
        if order < 0:
            raise SeriesError("order must be >= 0")
        out = np.zeros(order + 1, dtype=complex)
        n = min(len(c), order + 1)
        out[:n] = c[:n]
        out.setflags(write=False)
        object.__setattr__(self, "coeffs", out)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value: complex, order: int = DEFAULT_ORDER) -> "Series":
        return cls([value], order)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "Series":
        return cls([0, 1], order)

    def __getitem__(self, n: int) -> complex:
        return complex(self.coeffs[n])

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise SeriesError(f"cannot raise order {self.order} to {order}")
        return Series(self.coeffs[: order + 1], order)

    def times_z(self) -> "Series":
        """Exact multiplication by z; the order grows by one."""
        return Series(np.concatenate([[0], self.coeffs]), self.order + 1)

    def over_z(self) -> "Series":
        """Exact division by z; requires c0 == 0 and drops one order."""
        if abs(self.coeffs[0]) > ZERO_TOL:
            raise ZeroConstantTerm("over_z needs a vanishing constant term")
        if self.order == 0:
            raise SeriesError("over_z of an order-0 series")
        return Series(self.coeffs[1:], self.order - 1)

    def scaled(self, weights: Sequence[complex] | np.ndarray) -> "Series":
        """Multiply coefficient n by ``weights[n]``."""
        w = np.asarray(weights, dtype=complex)[: len(self.coeffs)]
        return Series(self.coeffs * w, self.order)

    def allclose(self, other: "Series", atol: float = 1e-12) -> bool:
        n = min(self.order, other.order) + 1
        return bool(np.allclose(self.coeffs[:n], other.coeffs[:n], rtol=0, atol=atol))

    def __add__(self, other):
        return add(self, _coerce(other, self.order))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _coerce(other, self.order))

    def __rsub__(self, other):
        return sub(_coerce(other, self.order), self)

    def __neg__(self):
        return Series(-self.coeffs, self.order)

    def __mul__(self, other):
        if np.isscalar(other):
            return Series(self.coeffs * other, self.order)
        return mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if np.isscalar(other):
            return Series(self.coeffs / other, self.order)
        return div(self, other)

    def __rtruediv__(self, other):
        return div(_coerce(other, self.order), self)

    def __call__(self, z: complex) -> complex:
        return evaluate(self, z)

    def __repr__(self) -> str:
        return f"Series({self.coeffs.tolist()!r}, order={self.order})"


@dataclass(frozen=True)
class NormalizedFunction:
    """A member of the class A: z + a2 z^2 + a3 z^3 + ..."""

    series: Series

    def __post_init__(self):
        c = self.series.coeffs
        if self.series.order < 1 or c[0] != 0 or c[1] != 1:
            raise NotNormalized("expected c0 == 0 and c1 == 1 exactly")

    @property
    def order(self) -> int:
        return self.series.order

    def a(self, n: int) -> complex:
        return self.series[n] if n <= self.order else 0j


def normalized(tail: Sequence[complex] = (), order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """Build ``z + tail[0] z^2 + tail[1] z^3 + ...`` at the given order."""
    if len(tail) + 1 > order:
        raise SeriesError(f"{len(tail)} coefficients do not fit in order {order}")
    return NormalizedFunction(Series([0, 1, *tail], order))


def _coerce(x, order: int) -> Series:
    if isinstance(x, Series):
        return x
    if isinstance(x, NormalizedFunction):
        return x.series
    return Series.constant(x, order)


def _unwrap(s) -> Series:
    return s.series if isinstance(s, NormalizedFunction) else s


def add(a: Series, b: Series) -> Series:
    a, b = _unwrap(a), _unwrap(b)
    n = min(a.order, b.order)
    return Series(a.coeffs[: n + 1] + b.coeffs[: n + 1], n)


def sub(a: Series, b: Series) -> Series:
    a, b = _unwrap(a), _unwrap(b)
    n = min(a.order, b.order)
    return Series(a.coeffs[: n + 1] - b.coeffs[: n + 1], n)


def mul(a: Series, b: Series) -> Series:
    a, b = _unwrap(a), _unwrap(b)
    n = min(a.order, b.order)
    return Series(np.convolve(a.coeffs[: n + 1], b.coeffs[: n + 1])[: n + 1], n)


def div(a: Series, b: Series) -> Series:
    """Quotient ``a / b`` by forward substitution; needs ``b.c0 != 0``."""
    a, b = _unwrap(a), _unwrap(b)
    n = min(a.order, b.order)
    b0 = b.coeffs[0]
    if abs(b0) < ZERO_TOL:
        raise ZeroConstantTerm(f"divisor constant term {b0!r} is zero")
    ac, bc = a.coeffs, b.coeffs
    out = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        out[k] = (ac[k] - np.dot(out[:k], bc[k:0:-1])) / b0
    return Series(out, n)


def compose(outer: Series, inner: Series) -> Series:
    """``outer(inner(z))`` truncated at the smaller order."""
    outer, inner = _unwrap(outer), _unwrap(inner)
    if abs(inner.coeffs[0]) > ZERO_TOL:
        raise NonzeroInnerConstant(f"inner constant term {inner.coeffs[0]!r} != 0")
    n = min(outer.order, inner.order)
    oc = outer.coeffs
    ic = inner.coeffs[: n + 1].copy()
    ic[0] = 0
    out = np.zeros(n + 1, dtype=complex)
    out[0] = oc[0]
    power = np.zeros(n + 1, dtype=complex)
    power[0] = 1
    for j in range(1, n + 1):
        power = np.convolve(power, ic)[: n + 1]
        out += oc[j] * power
    return Series(out, n)


def comp_inverse(f: NormalizedFunction | Series) -> Series:
    """Compositional inverse ``g`` with ``f(g(w)) = w`` to the order of ``f``.

    Coefficients are solved one degree at a time: with ``f'(0) = 1`` the
    degree-n coefficient of ``f(g)`` depends on ``b_n`` with unit slope.
    """
    s = _unwrap(f)
    c = s.coeffs
    if s.order < 1 or abs(c[0]) > ZERO_TOL or abs(c[1] - 1) > ZERO_TOL:
        raise NotNormalized("comp_inverse needs c0 == 0 and c1 == 1")
    n = s.order
    g = np.zeros(n + 1, dtype=complex)
    g[1] = 1
    for m in range(2, n + 1):
        partial = Series(g[: m + 1], m)
        g[m] = -compose(s.truncate(m), partial).coeffs[m]
    g[0], g[1] = 0, 1
    return Series(g, n)


def evaluate(s: Series, z: complex) -> complex:
    """Horner evaluation of the truncated polynomial."""
    s = _unwrap(s)
    acc = 0j
    for c in s.coeffs[::-1]:
        acc = acc * z + c
    return complex(acc)


def series_exp(s: Series) -> Series:
    """``exp(s)`` via the recurrence ``n e_n = sum_k k s_k e_{n-k}``."""
    s = _unwrap(s)
    n = s.order
    c = s.coeffs
    e = np.zeros(n + 1, dtype=complex)
    e[0] = np.exp(c[0])
    k = np.arange(n + 1)
    for m in range(1, n + 1):
        e[m] = np.dot(k[1: m + 1] * c[1: m + 1], e[m - 1:: -1][:m]) / m
    return Series(e, n)
