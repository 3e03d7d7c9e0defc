"""Numeric period integrals over model fibre cycles.

For a cycle c(s) in the fibre over b and a base direction v, the period
covector value is  lambda(v) = -oint iota_w omega  for any lift w of v
along the cycle; Lagrangian fibres make the integral independent of the
lift, so the Moore-Penrose lift through the finite-difference Jacobian of
the model map is used.  Cycle parametrizations (and the normalization
matching the quoted closed forms) ship with each model; results are
reported in the model's period chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np

from .. import numerics
from ..symplab.models import FibrationModel
from ..symplab.poisson import batch_gradients


@dataclass
class PeriodResult:
    covectors: Dict[str, np.ndarray]   # chart-coordinate covectors
    errors: Dict[str, float]           # quadrature doubling estimates
    fibre_defect: float                # max |f(cycle) - b| over all cycles


def _cycle_integrand(model, cyc, b_raw, s):
    z = np.asarray(cyc(s), dtype=complex)
    defect = float(np.max(np.abs(model.f(z) - b_raw[None, :])))
    h = 1e-6
    dz = (np.asarray(cyc((s + h) % 1.0), dtype=complex)
          - np.asarray(cyc((s - h) % 1.0), dtype=complex)) / (2.0 * h)
    grads = batch_gradients(model, z)          # (m, comps, 2n)
    values = np.empty((len(s), model.components))
    for i in range(len(s)):
        jac = grads[i]
        lift = jac.T @ np.linalg.inv(jac @ jac.T)   # (2n, comps)
        wc = numerics.r2c(lift.T)                    # rows: complex lifts per direction
        # omega(w, dz), one value per base direction
        values[i] = -numerics.omega_pair(wc, dz[i][None, :])
    return values, defect


def numeric_periods(model: FibrationModel, b, cycles=None, n=512,
                    fibre_tol=1e-7, quad_tol=1e-3) -> PeriodResult:
    """Period covectors of the named cycles at base point b (chart coords).

    Raises when a cycle parametrization leaves the fibre by more than
    ``fibre_tol`` or the doubling error estimate exceeds ``quad_tol``.
    """
    if model.fibre_point is None or not model.cycles:
        raise ValueError(f"model {model.id} ships no cycle parametrizations")
    b_raw = np.asarray(b, dtype=float)
    z0 = model.fibre_point(b_raw)
    names = list(cycles) if cycles is not None else sorted(model.cycles)
    if model.chart is None:
        chart_jac_inv = np.eye(model.components)
    else:
        chart_jac_inv = np.linalg.inv(
            numerics.jacobian(lambda x: np.asarray(model.chart(x)), b_raw)
        )
    covectors = {}
    errors = {}
    worst_defect = 0.0
    for name in names:
        cyc, norm = model.cycles[name](z0)
        s_coarse = np.arange(n // 2) / (n // 2)
        s_fine = np.arange(n) / n
        vals_fine, defect = _cycle_integrand(model, cyc, b_raw, s_fine)
        vals_coarse, _ = _cycle_integrand(model, cyc, b_raw, s_coarse)
        raw = vals_fine.mean(axis=0) * norm
        err = float(np.max(np.abs(raw - vals_coarse.mean(axis=0) * norm)))
        worst_defect = max(worst_defect, defect)
        if defect > fibre_tol:
            raise ValueError(
                f"cycle {name} leaves the fibre by {defect:.2e} (> {fibre_tol})"
            )
        if err > quad_tol:
            raise ValueError(
                f"cycle {name}: quadrature did not converge "
                f"(doubling estimate {err:.2e} > {quad_tol})"
            )
        covectors[name] = raw @ chart_jac_inv
        errors[name] = err
    return PeriodResult(covectors, errors, worst_defect)
