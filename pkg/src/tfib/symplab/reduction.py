"""Symplectic reduction by the (z1, z2) circle action and its smoothings.

The reduced form at level t is

    omega_t = (i/2) [ du1 ^ dconj(u1) / (2 sqrt(t^2 + |u1|^2)) + sum_{j>=2} duj ^ dconj(uj) ],

and Gamma_t(u) = (u1 / sqrt(|t| + sqrt(t^2 + |u1|^2)), u2, ...) pulls the
standard form back to omega_t.  ``reduction_check`` verifies this with
finite-difference Jacobians.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import numerics


@dataclass(frozen=True)
class ReductionMap:
    """The level-t smoothing map, with its closed-form inverse.

    Continuous everywhere; smooth away from u1 = 0 when t = 0.
    """

    t: float

    def __call__(self, u):
        return gamma_t(u, self.t)

    def inverse(self, w):
        return gamma_t_inverse(w, self.t)

    def omega_matrix(self, u1, k=2):
        return omega_t_matrix(u1, self.t, k=k)


def gamma_t(u, t):
    """Gamma_t on arrays (..., k) of reduced coordinates."""
    u = np.asarray(u, dtype=complex)
    u1 = u[..., 0]
    denom = np.sqrt(abs(t) + np.sqrt(t * t + np.abs(u1) ** 2))
    out = u.copy()
    with np.errstate(invalid="ignore", divide="ignore"):
        out[..., 0] = np.where(denom > 0, u1 / np.where(denom > 0, denom, 1.0), 0.0)
    return out


def gamma_t_inverse(w, t):
    """Closed-form inverse: u1 = w1 sqrt(2|t| + |w1|^2)."""
    w = np.asarray(w, dtype=complex)
    out = w.copy()
    out[..., 0] = w[..., 0] * np.sqrt(2.0 * abs(t) + np.abs(w[..., 0]) ** 2)
    return out


def omega_t_matrix(u1, t, k=2):
    """Matrix of omega_t at a point, interleaved real coordinates."""
    omega = numerics.omega_matrix(k)
    c = 1.0 / (2.0 * np.sqrt(t * t + abs(u1) ** 2))
    omega = omega.astype(float).copy()
    omega[0, 1] = c
    omega[1, 0] = -c
    return omega


def reduction_check(t, samples, step=1e-6):
    """max |Gamma_t^* omega_std - omega_t| over the samples, componentwise.

    ``samples`` is an array (m, k) of complex reduced points; at t = 0
    they must avoid u1 = 0, where Gamma_0 is not smooth.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=complex))
    k = samples.shape[1]
    if t == 0.0 and np.any(np.abs(samples[:, 0]) < 1e-9):
        raise ValueError("sample at the t = 0 singular locus u1 = 0")
    omega_std = numerics.omega_matrix(k)
    worst = 0.0
    for u in samples:
        x = numerics.c2r(u)

        def real_map(xx):
            return numerics.c2r(gamma_t(numerics.r2c(xx), t))

        jac = numerics.jacobian(real_map, x, step=step)
        pullback = jac.T @ omega_std @ jac
        defect = np.max(np.abs(pullback - omega_t_matrix(u[0], t, k)))
        worst = max(worst, float(defect))
    return worst
