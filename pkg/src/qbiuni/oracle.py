"""Brute-force verification of the coefficient bounds.

Coefficients are reconstructed from Caratheodory data ``p1, p2, q1, q2``
(``|p_i|, |q_i| <= 2``, ``q1 = -p1``) through the closed-form relation chain,
then checked two ways:

* against the series engine (:func:`relation_residuals`), which recomputes
  the class expressions of the reconstructed ``f`` and its inverse and
  compares their first coefficients with ``phi(u(z))``;
* against the bounds module (:func:`probe_bounds`), by a grid sweep of the
  admissible parameters.

The denominators here are written out independently of
:mod:`qbiuni.bounds` so that the sweep compares two separate code paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from . import bounds as _bounds
from .classes import ClassSpec, class_expression, g_expression
from .qcalc import QParams, q_bracket
from .series import Series, compose, normalized
from .targets import MindaTarget

__all__ = [
    "DOMINANCE_TOL",
    "CARATHEODORY_TOL",
    "Degenerate",
    "InadmissiblePoint",
    "CaratheodoryPoint",
    "derive_a2sq_a3_M",
    "derive_a2sq_a3_F",
    "derive_a2sq_a3",
    "relation_rhs",
    "relation_residuals",
    "sample_admissible_points",
    "consistency_check",
    "ProbeResult",
    "probe_bounds",
    "classical_bounds",
    "LimitRow",
    "classical_limit_scan",
]

DOMINANCE_TOL = 1e-9
CARATHEODORY_TOL = 1e-12
_DEGENERATE_TOL = 1e-12

BracketExponent = Literal["2k", "k"]


class Degenerate(ArithmeticError):
    pass


class InadmissiblePoint(ValueError):
    pass


@dataclass(frozen=True)
class CaratheodoryPoint:
    p1: complex
    p2: complex
    q1: complex
    q2: complex

    def __post_init__(self):
        for name in ("p1", "p2", "q1", "q2"):
            v = complex(getattr(self, name))
            object.__setattr__(self, name, v)
            if abs(v) > 2 + CARATHEODORY_TOL:
                raise InadmissiblePoint(f"|{name}| = {abs(v):.6g} exceeds 2")
        if abs(self.p1 + self.q1) > CARATHEODORY_TOL * max(1.0, abs(self.p1)):
            raise InadmissiblePoint("relation p1 = -q1 violated")

    @classmethod
    def from_p(cls, p1: complex, p2: complex, q2: complex) -> "CaratheodoryPoint":
        return cls(p1, p2, -complex(p1), q2)

    def as_tuple(self) -> tuple:
        return (self.p1, self.p2, self.q1, self.q2)


def _m_denominator(lam, qp: QParams, B1, B2, exponent: BracketExponent) -> float:
    k = qp.k
    b2, b3 = q_bracket(2, qp.q), q_bracket(3, qp.q)
    inner = b2 ** (2 * k) if exponent == "2k" else b2**k
    return (2 * (1 + 2 * lam) * b3**k - (1 + 3 * lam) * inner) * B1**2 + (
        (1 + lam) ** 2 * (B1 - B2) * b2 ** (2 * k)
    )


def _f_denominator(mu, qp: QParams, B1, B2) -> float:
    k = qp.k
    b2, b3 = q_bracket(2, qp.q), q_bracket(3, qp.q)
    return (1 + 2 * mu) * b3**k * B1**2 + (B1 - B2) * (1 + mu) ** 2 * b2 ** (2 * k)


def _m_arrays(p1, p2, q1, q2, lam, qp, B1, B2, exponent="2k"):
    den = _m_denominator(lam, qp, B1, B2, exponent)
    if abs(den) < _DEGENERATE_TOL:
        raise Degenerate(f"bracket {den!r} vanishes")
    k = qp.k
    b2, b3 = q_bracket(2, qp.q), q_bracket(3, qp.q)
    a2sq = B1**3 * (p2 + q2) / (4 * den)
    a3 = B1**2 * (p1**2 + q1**2) / (8 * (1 + lam) ** 2 * b2 ** (2 * k)) + B1 * (p2 - q2) / (
        8 * (1 + 2 * lam) * b3**k
    )
    return a2sq, a3


def _f_arrays(p1, p2, q1, q2, mu, qp, B1, B2):
    den = _f_denominator(mu, qp, B1, B2)
    if abs(den) < _DEGENERATE_TOL:
        raise Degenerate(f"bracket {den!r} vanishes")
    k = qp.k
    b2, b3 = q_bracket(2, qp.q), q_bracket(3, qp.q)
    a2sq = B1**3 * (p2 + q2) / (4 * den)
    a3 = B1**2 * (p1**2 + q1**2) / (8 * (1 + mu) ** 2 * b2 ** (2 * k)) + B1 * (p2 - q2) / (
        4 * (1 + 2 * mu) * b3**k
    )
    return a2sq, a3


def derive_a2sq_a3_M(
    cp: CaratheodoryPoint, lam: float, qp: QParams, B1: float, B2: float,
    bracket_exponent: BracketExponent = "2k",
) -> tuple[complex, complex]:
    """``(a2^2, a3)`` for the M class from Caratheodory data.

    ``bracket_exponent="k"`` reproduces the misprinted bracket and exists only
    to show that the relation chain rejects it.
    """
    a2sq, a3 = _m_arrays(*cp.as_tuple(), lam, qp, B1, B2, bracket_exponent)
    return complex(a2sq), complex(a3)


def derive_a2sq_a3_F(
    cp: CaratheodoryPoint, mu: float, qp: QParams, B1: float, B2: float
) -> tuple[complex, complex]:
    a2sq, a3 = _f_arrays(*cp.as_tuple(), mu, qp, B1, B2)
    return complex(a2sq), complex(a3)


def derive_a2sq_a3(cp: CaratheodoryPoint, spec: ClassSpec,
                   bracket_exponent: BracketExponent = "2k") -> tuple[complex, complex]:
    if spec.family == "M":
        return derive_a2sq_a3_M(cp, spec.param, spec.qp, spec.B1, spec.B2, bracket_exponent)
    return derive_a2sq_a3_F(cp, spec.param, spec.qp, spec.B1, spec.B2)


def _linear_factor(spec: ClassSpec) -> float:
    # coefficient of a2 in the linear term of the class expression
    return (1 + spec.param) * q_bracket(2, spec.qp.q) ** spec.qp.k


def relation_rhs(p1: complex, p2: complex, target: MindaTarget) -> tuple[complex, complex]:
    """First two coefficients of ``phi(u(z))`` with ``u = (p-1)/(p+1)``, ``p = 1 + p1 z + p2 z^2``.

    Computed by series composition rather than the expanded closed form.
    """
    p = Series([1, p1, p2], 3)
    u = (p - 1) / (p + 1)
    u = Series(np.concatenate([[0], u.coeffs[1:]]), u.order)
    phi = target.series.truncate(min(3, target.series.order))
    w = compose(phi, u)
    return w[1], w[2]


def relation_residuals(
    cp: CaratheodoryPoint, spec: ClassSpec, order: int = 8,
    bracket_exponent: BracketExponent = "2k",
) -> np.ndarray:
    """Residuals of the four coefficient relations at a reconstructed ``f``.

    Order: f-side ``z``, f-side ``z^2``, g-side ``z``, g-side ``z^2``.
    """
    a2sq, a3 = derive_a2sq_a3(cp, spec, bracket_exponent)
    root = complex(np.sqrt(a2sq))
    half_b1p1 = 0.5 * spec.B1 * cp.p1
    lin = _linear_factor(spec)
    a2 = root if abs(lin * root - half_b1p1) <= abs(-lin * root - half_b1p1) else -root
    f = normalized([a2, a3], order)
    ef = class_expression(f, spec)
    eg = g_expression(f, spec)
    rf1, rf2 = relation_rhs(cp.p1, cp.p2, spec.target)
    rg1, rg2 = relation_rhs(cp.q1, cp.q2, spec.target)
    return np.abs(np.array([ef[1] - rf1, ef[2] - rf2, eg[1] - rg1, eg[2] - rg2]))


def _disk(rng: np.random.Generator, radius: float) -> complex:
    r = radius * math.sqrt(rng.random())
    return complex(r * np.exp(2j * math.pi * rng.random()))


def sample_admissible_points(
    spec: ClassSpec, n: int, rng: np.random.Generator, order: int = 8, max_tries: int = 100_000
) -> list[CaratheodoryPoint]:
    """Draw ``n`` Caratheodory points realised by an actual ``f = z + a2 z^2 + a3 z^3``.

    ``a2`` is drawn so that ``|p1| <= 2``; ``p2`` is affine in ``a3``, so a
    target ``p2`` is drawn in the disk and ``a3`` solved from two probe
    evaluations. The point is then read off the class expressions of the
    resulting ``f`` and its inverse, as computed by the series engine, so it
    satisfies the whole relation chain. Draws with ``|q2| > 2`` are rejected.
    """
    B1, B2 = spec.B1, spec.B2
    r2 = B1 / _linear_factor(spec)

    def read(c1, c2):
        p1 = 2 * c1 / B1
        p2 = 2 * (c2 - 0.25 * B2 * p1**2) / B1 + p1**2 / 2
        return p1, p2

    def point(a2, a3):
        f = normalized([a2, a3], order)
        ef, eg = class_expression(f, spec), g_expression(f, spec)
        return (*read(ef[1], ef[2]), *read(eg[1], eg[2]))

    out: list[CaratheodoryPoint] = []
    for _ in range(max_tries):
        if len(out) == n:
            break
        a2 = _disk(rng, r2)
        base = point(a2, 0)[1]
        slope = point(a2, 1)[1] - base
        a3 = (_disk(rng, 2.0) - base) / slope
        p1, p2, q1, q2 = point(a2, a3)
        if max(abs(p1), abs(p2), abs(q1), abs(q2)) > 2:
            continue
        out.append(CaratheodoryPoint(p1, p2, -p1, q2))
    if len(out) < n:
        raise RuntimeError(f"only {len(out)} of {n} admissible points after {max_tries} draws")
    return out


def consistency_check(
    spec: ClassSpec, n: int = 100, seed: int = 0, order: int = 8,
    bracket_exponent: BracketExponent = "2k",
) -> np.ndarray:
    """Per-relation maximum residual over ``n`` seeded admissible points."""
    rng = np.random.default_rng(seed)
    pts = sample_admissible_points(spec, n, rng, order)
    res = np.array([relation_residuals(cp, spec, order, bracket_exponent) for cp in pts])
    return res.max(axis=0)


def _grid(step: float) -> np.ndarray:
    if not (0 < step <= 2):
        raise ValueError(f"grid step must lie in (0, 2], got {step!r}")
    m = int(math.floor(4 / step + 1e-9))
    v = -2 + step * np.arange(m + 1)
    if v[-1] < 2 - 1e-12:
        v = np.append(v, 2.0)
    v[-1] = min(v[-1], 2.0)
    return v


def _values(step: float, phases: int) -> np.ndarray:
    g = _grid(step)
    if phases <= 0:
        return g.astype(complex)
    radii = g[g >= -1e-12]
    ang = np.exp(2j * math.pi * np.arange(phases) / phases)
    return np.unique(np.round(np.outer(radii, ang).ravel(), 15))


@dataclass
class ProbeResult:
    spec: ClassSpec
    grid_step: float
    points: int
    degenerate: bool = False
    max_a2: float = float("nan")
    argmax_a2: Optional[tuple] = None
    max_a3: float = float("nan")
    argmax_a3: Optional[tuple] = None
    max_fs: dict = field(default_factory=dict)  # tau -> (value, argmax)
    bound_a2: Optional[float] = None
    bound_a3: Optional[float] = None
    bound_fs: dict = field(default_factory=dict)
    residual: Optional[float] = None  # max relation residual, when requested
    residual_tol: float = 1e-10
    seed: Optional[int] = None

    @property
    def dominated(self) -> dict:
        if self.degenerate:
            return {}
        flags = {
            "a2": self.max_a2 <= self.bound_a2 + DOMINANCE_TOL,
            "a3": self.max_a3 <= self.bound_a3 + DOMINANCE_TOL,
        }
        for tau, (val, _) in self.max_fs.items():
            flags[("fs", tau)] = val <= self.bound_fs[tau] + DOMINANCE_TOL
        if self.residual is not None:
            flags["residual"] = self.residual < self.residual_tol
        return flags

    @property
    def all_dominated(self) -> bool:
        return all(self.dominated.values())


def probe_bounds(
    spec: ClassSpec,
    taus: Iterable[complex] = (0, 0.5, 1, 2, -1),
    grid_step: float = 0.05,
    phases: int = 0,
    bracket_exponent: BracketExponent = "2k",
    consistency_samples: int = 0,
    seed: int = 0,
) -> ProbeResult:
    """Grid search of ``|a2|``, ``|a3|`` and ``|a3 - tau a2^2|`` against the bounds.

    ``p1, p2, q2`` run over the real grid on ``[-2, 2]`` (or, with
    ``phases > 0``, over radii times that many unit phases) and ``q1 = -p1``.
    The bounds on ``|a2|`` and ``|a3|`` are checked on the full product grid.

    The Fekete-Szego functional is only meaningful where the relation chain
    closes, i.e. where the ``a2^2`` read from ``p1`` agrees with the one read
    from ``p2 + q2``. For each ``(p2, q2)`` the chain is closed by solving for
    ``p1``; points whose closing ``p1`` leaves the disk ``|p1| <= 2`` are kept,
    which only enlarges the search.
    """
    taus = [complex(t) for t in taus]
    # descending, so ties resolve to the corner with a real closing p1
    vals = _values(grid_step, phases)[::-1]
    B1, B2, lam, qp = spec.B1, spec.B2, spec.param, spec.qp
    res = ProbeResult(spec, grid_step, len(vals) ** 3, seed=seed if consistency_samples else None)

    if spec.family == "M":
        def derive(p1, p2, q1, q2):
            return _m_arrays(p1, p2, q1, q2, lam, qp, B1, B2, bracket_exponent)
    else:
        def derive(p1, p2, q1, q2):
            return _f_arrays(p1, p2, q1, q2, lam, qp, B1, B2)
    # p1^2 that makes the p1-part of a3 equal to a2^2
    p1sq_per_a2sq = 4 * (1 + lam) ** 2 * q_bracket(2, qp.q) ** (2 * qp.k) / B1**2

    try:
        derive(0j, 0j, 0j, 0j)
    except Degenerate:
        res.degenerate = True
        return res

    rep = _bounds.bound_report(spec, taus)
    res.bound_a2, res.bound_a3, res.bound_fs = rep.a2_bound, rep.a3_bound, dict(rep.fs_bounds)

    P2, Q2 = np.meshgrid(vals, vals, indexing="ij")
    zero = np.zeros_like(P2)
    a2sq, _ = derive(zero, P2, zero, Q2)
    i = np.unravel_index(np.argmax(np.abs(a2sq)), a2sq.shape)
    res.max_a2 = float(np.sqrt(np.abs(a2sq[i])))

    best3 = (-1.0, None)
    for p1 in vals:
        _, a3 = derive(p1, P2, -p1, Q2)
        j = np.unravel_index(np.argmax(np.abs(a3)), a3.shape)
        v = float(np.abs(a3[j]))
        if v > best3[0]:
            best3 = (v, (p1, P2[j], -p1, Q2[j]))
    res.max_a3, res.argmax_a3 = best3
    # an argmax for |a2| needs a p1; use the one that closes the chain
    p1_a2 = complex(np.sqrt(p1sq_per_a2sq * a2sq[i]))
    res.argmax_a2 = (p1_a2, P2[i], -p1_a2, Q2[i])

    P1 = np.sqrt(p1sq_per_a2sq * a2sq.astype(complex))
    a2sq_c, a3_c = derive(P1, P2, -P1, Q2)
    for tau in taus:
        fs = np.abs(a3_c - tau * a2sq_c)
        j = np.unravel_index(np.argmax(fs), fs.shape)
        res.max_fs[tau] = (float(fs[j]), (P1[j], P2[j], -P1[j], Q2[j]))

    if consistency_samples:
        res.residual = float(
            consistency_check(spec, consistency_samples, seed, bracket_exponent=bracket_exponent).max()
        )
    return res


def classical_bounds(family: str, param: float, k: int, B1: float, B2: float) -> dict:
    """The ``q -> 1`` forms of the bounds, with ``[2] = 2`` and ``[3] = 3``."""
    if family == "M":
        lam = param
        rad = (2 * (1 + 2 * lam) * 3**k - (1 + 3 * lam) * 4**k) * B1**2 + (
            (1 + lam) ** 2 * (B1 - B2) * 4**k
        )
        a3 = B1 / (2 * (1 + 2 * lam) * 3**k) + (B1 / ((1 + lam) * 2**k)) ** 2
    else:
        mu = param
        rad = (1 + 2 * mu) * 3**k * B1**2 + (1 + mu) ** 2 * 4**k * (B1 - B2)
        a3 = B1 * (B1 / ((1 + mu) ** 2 * 4**k) + 1 / ((1 + 2 * mu) * 3**k))
    a2 = B1 * math.sqrt(B1) / math.sqrt(abs(rad)) if abs(rad) >= _DEGENERATE_TOL else None
    return {"a2": a2, "a3": a3}


@dataclass(frozen=True)
class LimitRow:
    q: float
    bracket2: float
    bracket3: float
    a2_bound: Optional[float]
    a3_bound: float
    a2_classical: Optional[float]
    a3_classical: float

    @property
    def a2_gap(self) -> Optional[float]:
        if self.a2_bound is None or self.a2_classical is None:
            return None
        return abs(self.a2_bound - self.a2_classical)

    @property
    def a3_gap(self) -> float:
        return abs(self.a3_bound - self.a3_classical)


def classical_limit_scan(
    family: str, param: float, target: MindaTarget,
    q_ladder: Sequence[float] = (0.5, 0.9, 0.99, 0.999, 1 - 1e-8), k: int = 0,
) -> list[LimitRow]:
    """Bounds along a ladder ``q -> 1-`` next to their classical values."""
    classical = classical_bounds(family, param, k, target.B1, target.B2)
    rows = []
    for q in q_ladder:
        spec = ClassSpec(family, param, QParams(q, k), target)
        rep = _bounds.bound_report(spec)
        rows.append(LimitRow(q, q_bracket(2, q), q_bracket(3, q), rep.a2_bound, rep.a3_bound,
                             classical["a2"], classical["a3"]))
    return rows
