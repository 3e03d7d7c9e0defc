"""Action charts and their continuous extension toward the discriminant.

The focus-focus and generic charts are the quoted primitives

    psi_j(b) = -b1 log|b| + b1 + q(b) + b2 arg_j(b)        (j = 1, 2),

single-valued on their branch domains, with the -b1 log b1 -> 0 behavior
at the discriminant; the generic chart adds the smooth correction H and
its limit along the discriminant recovers tau = H|_Delta.

The positive model's correction a0 is computed from the Harvey-Lawson
geometry: a0(b) is the Liouville-primitive integral along the canonical
fibre path over the line {Im u = b1} in the u = z1 z2 z3 coordinate,

    a0(b) = 1/2 int [rho(s; b) - rho(0; b)] b1 / (s^2 + b1^2) ds,

with rho(s; b) the fibre modulus solving rho(rho-b2)(rho-b3) = s^2+b1^2.
The subtraction fixes the branch that extends continuously by 0 on the
plane {b1 = 0}; the map F(-z1, z2, z3) = (-b1, b2, b3) makes a0 odd in b1,
so a0 vanishes on the discriminant and the chart limit is H|_Delta there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from ..symplab.models import hl_modulus


def arg_branch_1(b1, b2):
    """Branch of arg on (0, 2 pi); cut along {b2 = 0, b1 > 0}."""
    a = math.atan2(b2, b1)
    return a if a >= 0.0 else a + 2.0 * math.pi


def arg_branch_2(b1, b2):
    """Branch of arg on (-pi, pi]; cut along {b2 = 0, b1 < 0}."""
    return math.atan2(b2, b1)


def psi_focus_focus(b, q=None, branch=1):
    """The focus-focus action chart (psi_j(b), 2 pi b2)."""
    b1, b2 = float(b[0]), float(b[1])
    r = math.hypot(b1, b2)
    corr = float(q(np.asarray(b, dtype=float))) if q is not None else 0.0
    arg = (arg_branch_1 if branch == 1 else arg_branch_2)(b1, b2)
    lead = -b1 * math.log(r) + b1 if r > 0.0 else 0.0
    return np.array([lead + corr + b2 * arg, 2.0 * math.pi * b2])


def positive_a0(b, quad_tol=1e-10):
    """The odd Harvey-Lawson correction a0(b); 0 on the plane {b1 = 0}."""
    b1, b2, b3 = (float(v) for v in b)
    if b1 == 0.0:
        return 0.0
    rho0 = hl_modulus(b1 * b1, b2, b3)

    def integrand(s):
        rho = hl_modulus(s * s + b1 * b1, b2, b3)
        return (rho - rho0) * b1 / (s * s + b1 * b1)

    neg, _ = quad(integrand, -np.inf, 0.0, epsabs=quad_tol, epsrel=quad_tol,
                  limit=400)
    pos, _ = quad(integrand, 0.0, np.inf, epsabs=quad_tol, epsrel=quad_tol,
                  limit=400)
    return 0.5 * (neg + pos)


@dataclass
class ActionChart:
    """Evaluable action chart on a branch domain."""

    kind: str
    branch: int = 1
    q: Optional[Callable] = None
    h: Optional[Callable] = None

    def __call__(self, b):
        b = np.asarray(b, dtype=float)
        if self.kind == "focus_focus":
            return psi_focus_focus(b, q=self.q, branch=self.branch)
        if self.kind == "generic":
            psi = psi_focus_focus(b[:2], branch=self.branch)
            corr = float(self.h(b)) if self.h is not None else 0.0
            return np.array([psi[0] + corr, 2.0 * math.pi * b[1], b[2]])
        if self.kind == "positive":
            corr = float(self.h(b)) if self.h is not None else 0.0
            return np.array([
                positive_a0(b) + corr,
                2.0 * math.pi * b[1],
                2.0 * math.pi * b[2],
            ])
        raise ValueError(f"no action chart for kind {self.kind!r}")


def action_chart(kind: str, q=None, h=None, branch=1) -> ActionChart:
    return ActionChart(kind, branch=branch, q=q, h=h)


@dataclass
class ExtensionReport:
    values: np.ndarray       # chart first components along the path
    limit: float
    cauchy: np.ndarray       # successive |value differences|
    converged: bool

    def to_json(self):
        return {
            "limit": self.limit,
            "values": [float(v) for v in self.values],
            "cauchy": [float(v) for v in self.cauchy],
            "converged": self.converged,
        }


def action_extension_check(chart: ActionChart, path, depth=22) -> ExtensionReport:
    """Limit of the chart's first component along a path onto the discriminant.

    ``path(s)`` is parametrized on [0, 1] with the endpoint at s = 1 on
    the discriminant; the chart is evaluated at s_k = 1 - 2^{-k} and the
    successive differences must decay (Cauchy modulus), else the check
    reports divergence.
    """
    s = 1.0 - 0.5 ** np.arange(2, depth)
    values = np.array([float(chart(np.asarray(path(sk), dtype=float))[0])
                       for sk in s])
    cauchy = np.abs(np.diff(values))
    tail = cauchy[-4:]
    converged = bool(np.all(tail[1:] <= 1e-12 + 0.9 * tail[:-1]))
    if not converged:
        raise ValueError("action chart diverges along the path (non-simple input)")
    return ExtensionReport(values, float(values[-1]), cauchy, converged)
