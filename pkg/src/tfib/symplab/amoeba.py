"""The amoeba of v1 + v2 + 1 = 0 under coordinatewise log of modulus.

Membership is decided by the triangle inequality on the side lengths
(e^{x1}, e^{x2}, 1): a point is in the amoeba iff a triangle with those
sides exists, i.e. |e^{x1} - e^{x2}| <= 1 <= e^{x1} + e^{x2}; equality is
the boundary (degenerate triangle).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def amoeba_membership(x1, x2):
    """Vectorized membership test for the closed amoeba."""
    a = np.exp(np.asarray(x1, dtype=float))
    b = np.exp(np.asarray(x2, dtype=float))
    return (np.abs(a - b) <= 1.0) & (1.0 <= a + b)


@dataclass
class AmoebaRaster:
    bounds: tuple            # (x1_min, x1_max, x2_min, x2_max)
    resolution: tuple        # (n1, n2)
    mask: np.ndarray         # boolean, mask[i, j] at (x1_i, x2_j)
    boundary: np.ndarray     # (k, 2) float cloud of boundary-cell centers

    def grid(self):
        x1 = np.linspace(self.bounds[0], self.bounds[1], self.resolution[0])
        x2 = np.linspace(self.bounds[2], self.bounds[3], self.resolution[1])
        return x1, x2


def amoeba_raster(bounds=(-3.0, 3.0, -3.0, 3.0), resolution=(200, 200)) -> AmoebaRaster:
    n1, n2 = resolution
    x1 = np.linspace(bounds[0], bounds[1], n1)
    x2 = np.linspace(bounds[2], bounds[3], n2)
    g1, g2 = np.meshgrid(x1, x2, indexing="ij")
    mask = amoeba_membership(g1, g2)
    edge = np.zeros_like(mask)
    edge[:-1, :] |= mask[:-1, :] != mask[1:, :]
    edge[:, :-1] |= mask[:, :-1] != mask[:, 1:]
    boundary = np.stack([g1[edge], g2[edge]], axis=-1)
    return AmoebaRaster(tuple(bounds), (n1, n2), mask, boundary)
