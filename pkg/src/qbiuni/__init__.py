"""Coefficient estimates for bi-univalent function classes built on the
Salagean-type q-difference operator.

Modules:

* :mod:`qbiuni.series` - truncated complex power series
* :mod:`qbiuni.qcalc` - q-brackets, Jackson derivative, q-Salagean operator
* :mod:`qbiuni.targets` - Ma-Minda target functions
* :mod:`qbiuni.classes` - class expressions and sampled membership
* :mod:`qbiuni.bounds` - closed-form |a2|, |a3| and Fekete-Szego bounds
* :mod:`qbiuni.oracle` - relation-chain reconstruction and grid probes
"""

from .bounds import BoundReport, DegenerateBound, bound_report
from .classes import ClassSpec, MembershipVerdict, membership
from .oracle import CaratheodoryPoint, ProbeResult, classical_limit_scan, probe_bounds
from .qcalc import QParams, q_bracket
from .series import NormalizedFunction, Series, comp_inverse, normalized
from .targets import MindaTarget, custom_target, starlike_order, strongly_starlike

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CaratheodoryPoint",
    "ClassSpec",
    "DegenerateBound",
    "MembershipVerdict",
    "MindaTarget",
    "NormalizedFunction",
    "ProbeResult",
    "QParams",
    "Series",
    "bound_report",
    "classical_limit_scan",
    "comp_inverse",
    "custom_target",
    "membership",
    "normalized",
    "probe_bounds",
    "q_bracket",
    "starlike_order",
    "strongly_starlike",
]
