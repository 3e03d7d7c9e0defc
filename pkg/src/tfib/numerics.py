"""Shared numerical helpers: finite differences, Hamiltonian fields, bumps.

Derivatives are central differences with one Richardson extrapolation step
(fourth order), with the step scaled by coordinate magnitude.  Piecewise
maps are differentiated one-sidedly by the callers where a seam is known;
nothing here tries to be clever across branch cuts.

Sign conventions, fixed once for the whole package:

* symplectic form on C^n = R^{2n}:  omega = sum dx_k ^ dy_k, as a bilinear
  form omega(a, b) = sum Im(conj(a_k) b_k) on complex tuples;
* Hamiltonian vector field of F:  xdot_k = -dF/dy_k, ydot_k = +dF/dx_k,
  equivalently udot_k = 2i dF/du_k.  With this choice the moment map
  (|z1|^2 - |z2|^2)/2 generates (z1, z2) -> (e^{i t} z1, e^{-i t} z2).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

DEFAULT_STEP = 1e-4


def fd_step(x, step=DEFAULT_STEP):
    """Step scaled by coordinate magnitude (never below ``step``)."""
    return step * np.maximum(1.0, np.abs(x))


def gradient(f, x, step=DEFAULT_STEP):
    """Richardson-extrapolated central gradient of scalar f at point x.

    ``f`` maps a 1d float array to a scalar.  Returns an array of the same
    shape as ``x``.
    """
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for k in range(x.size):
        h = fd_step(x[k], step)
        g[k] = _richardson_partial(f, x, k, h)
    return g


def _richardson_partial(f, x, k, h):
    def central(hh):
        xp = x.copy()
        xm = x.copy()
        xp[k] += hh
        xm[k] -= hh
        return (f(xp) - f(xm)) / (2.0 * hh)

    d1 = central(h)
    d2 = central(h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def jacobian(f, x, step=DEFAULT_STEP):
    """Richardson central Jacobian of a vector map f: R^n -> R^m at x."""
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(f(x), dtype=float)
    jac = np.empty((f0.size, x.size))
    for k in range(x.size):
        h = fd_step(x[k], step)

        def central(hh):
            xp = x.copy()
            xm = x.copy()
            xp[k] += hh
            xm[k] -= hh
            return (np.asarray(f(xp)) - np.asarray(f(xm))) / (2.0 * hh)

        d1 = central(h)
        d2 = central(h / 2.0)
        jac[:, k] = (4.0 * d2 - d1) / 3.0
    return jac


# ----------------------------------------------------------------------
# real <-> complex packing and the standard symplectic structure
# ----------------------------------------------------------------------

def c2r(z):
    """Complex array (..., n) -> interleaved real array (..., 2n)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],), dtype=float)
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def r2c(x):
    """Interleaved real array (..., 2n) -> complex array (..., n)."""
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def omega_matrix(n):
    """Matrix of sum dx_k ^ dy_k on R^{2n}, interleaved coordinates."""
    omega = np.zeros((2 * n, 2 * n))
    for k in range(n):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def omega_pair(a, b):
    """omega(a, b) for complex tuples a, b (vectorized over leading axes)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.sum((np.conj(a) * b).imag, axis=-1)


def hamiltonian_field(F, z, step=DEFAULT_STEP):
    """Hamiltonian vector field of a real function F of a complex tuple.

    udot_k = -dF/dy_k + i dF/dx_k, the convention stated in the module
    docstring.  ``F`` takes a complex 1d array; returns a complex array.
    """
    z = np.asarray(z, dtype=complex)
    x = c2r(z)
    g = gradient(lambda xx: F(r2c(xx)), x, step=step)
    gx = g[0::2]
    gy = g[1::2]
    return -gy + 1j * gx


# ----------------------------------------------------------------------
# bump functions (the fixed smoothstep-of-degree-7 family)
# ----------------------------------------------------------------------

def smoothstep7(x):
    """C^3 monotone step: 0 for x<=0, 1 for x>=1, degree-7 polynomial between."""
    x = np.clip(x, 0.0, 1.0)
    return x**4 * (35.0 - 84.0 * x + 70.0 * x**2 - 20.0 * x**3)


def cutoff(t, lo, hi):
    """1 for t <= lo, 0 for t >= hi, smoothstep7 transition in between."""
    return 1.0 - smoothstep7((np.asarray(t, dtype=float) - lo) / (hi - lo))


def plateau(t, inner_lo, inner_hi, outer_lo, outer_hi):
    """1 on [inner_lo, inner_hi], 0 outside (outer_lo, outer_hi)."""
    up = smoothstep7((np.asarray(t, dtype=float) - outer_lo) / (inner_lo - outer_lo))
    down = 1.0 - smoothstep7((np.asarray(t, dtype=float) - inner_hi) / (outer_hi - inner_hi))
    return up * down


# ----------------------------------------------------------------------
# quadrature
# ----------------------------------------------------------------------

def trapezoid_periodic(values):
    """Composite trapezoid of samples of a 1-periodic function on [0,1).

    Samples are at j/N, j = 0..N-1 (right endpoint omitted); for smooth
    periodic integrands this converges spectrally.
    """
    values = np.asarray(values, dtype=float)
    return float(values.mean(axis=0)) if values.ndim == 1 else values.mean(axis=0)


def periodic_quadrature(sample, n=1024):
    """Integrate a 1-periodic callable with an error estimate by doubling.

    ``sample(s)`` must accept a 1d array of parameters in [0,1) and return
    an array of values (vectorized).  Returns (integral, error_estimate).
    """
    s_coarse = np.arange(n // 2) / (n // 2)
    s_fine = np.arange(n) / n
    coarse = np.mean(sample(s_coarse), axis=0)
    fine = np.mean(sample(s_fine), axis=0)
    return fine, np.max(np.abs(np.atleast_1d(fine - coarse)))


# ----------------------------------------------------------------------
# parallel sampling
# ----------------------------------------------------------------------

def thread_count():
    """Parallelism cap from TFIB_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("TFIB_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, chunks):
    """Map fn over chunks, threaded when TFIB_THREADS > 1."""
    workers = thread_count()
    if workers == 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))
