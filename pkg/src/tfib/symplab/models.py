"""The explicit fibration models, as vectorized maps C^n -> R^m.

Every model evaluates on arrays of shape (..., n) of complex points.  The
piecewise map ``gamma`` takes the mu >= 0 branch on the seam, where both
branches agree.  Models carry, besides the map itself: a domain predicate,
a distance-like margin to their poles/critical/non-smooth loci (used by
the sampling helpers), the reduced-space symplectomorphism Phi of the
lifted construction (when there is one), a base chart in which the period
lattice takes its quoted closed form, and named fibre-cycle
parametrizations used by the period quadratures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

SQRT2 = math.sqrt(2.0)


def mu12(z):
    """Moment map (|z1|^2 - |z2|^2)/2 of the circle action on (z1, z2)."""
    return (np.abs(z[..., 0]) ** 2 - np.abs(z[..., 1]) ** 2) / 2.0


def gamma(z1, z2):
    """Piecewise map z1 z2 / |z1| (mu >= 0) or z1 z2 / |z2| (mu < 0).

    Both branches agree where |z1| = |z2|; the seam itself evaluates the
    mu >= 0 branch.
    """
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    r1 = np.abs(z1)
    r2 = np.abs(z2)
    denom = np.where(r1 >= r2, r1, r2)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(denom > 0, z1 * z2 / np.where(denom > 0, denom, 1.0), 0.0)
    return out


def log_abs(w):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(w))


# ----------------------------------------------------------------------
# reduced-space symplectomorphisms (the twists Phi)
# ----------------------------------------------------------------------

def psi_amoeba(u1, u2):
    """(u1, u2) -> ((u1 - u2)/sqrt2, (u1 + u2 - sqrt2)/sqrt2)."""
    return (u1 - u2) / SQRT2, (u1 + u2 - SQRT2) / SQRT2


def phi_leg_h(u1, u2):
    return -u2, u1 - 1.0


def phi_leg_v(u1, u2):
    return u1 - 1.0, u2 - SQRT2


def phi_leg_d(u1, u2):
    return (u1 - u2) / SQRT2, (u1 + u2) / SQRT2


def phi_thin_legs(u1, u2, eps, big_m):
    """The piecewise symplectomorphism pinching all three legs."""
    u1 = np.asarray(u1, dtype=complex)
    u2 = np.asarray(u2, dtype=complex)
    n1 = np.abs(u1) ** 2
    n2 = np.abs(u2) ** 2
    in_h = n1 + n2 <= eps
    in_v = n1 + np.abs(u2 - SQRT2) ** 2 <= eps
    in_d = n2 >= big_m
    v1 = np.where(in_h, -u2, np.where(in_v, u1 - 1.0, np.where(
        in_d, (u1 - u2) / SQRT2, (u1 - u2) / SQRT2)))
    v2 = np.where(in_h, u1 - 1.0, np.where(in_v, u2 - SQRT2, np.where(
        in_d, (u1 + u2) / SQRT2, (u1 + u2 - SQRT2) / SQRT2)))
    return v1, v2


def thin_legs_branch(u1, u2, eps, big_m):
    """Branch label of phi_thin_legs at (u1, u2)."""
    n1 = abs(u1) ** 2
    n2 = abs(u2) ** 2
    if n1 + n2 <= eps:
        return "horizontal_ball"
    if n1 + abs(u2 - SQRT2) ** 2 <= eps:
        return "vertical_ball"
    if n2 >= big_m:
        return "diagonal_far"
    return "amoeba"


# ----------------------------------------------------------------------
# model container
# ----------------------------------------------------------------------

@dataclass
class FibrationModel:
    id: str
    n: int                       # complex ambient dimension
    components: int              # number of real map components
    f: Callable[[np.ndarray], np.ndarray]
    domain_ok: Callable[[np.ndarray], np.ndarray]
    margin: Callable[[np.ndarray], np.ndarray]
    omega: str = "standard omega_{C^n}"
    smooth_locus: str = "smooth on its domain"
    phi: Optional[Callable] = None
    params: dict = field(default_factory=dict)
    chart: Optional[Callable[[np.ndarray], np.ndarray]] = None
    cycles: Dict[str, Callable] = field(default_factory=dict)
    fibre_point: Optional[Callable[[np.ndarray], np.ndarray]] = None
    sample_box: float = 1.5

    def __call__(self, z):
        return self.f(np.asarray(z, dtype=complex))


def _min_pair_norm(z, pairs):
    vals = [np.hypot(np.abs(z[..., i]), np.abs(z[..., j])) for i, j in pairs]
    return np.minimum.reduce(vals)


def _model_sm_ff() -> FibrationModel:
    def f(z):
        return np.stack([mu12(z), log_abs(z[..., 0] * z[..., 1] + 1.0)], axis=-1)

    def domain_ok(z):
        return np.abs(z[..., 0] * z[..., 1] + 1.0) > 0

    def margin(z):
        return np.minimum(np.abs(z[..., 0] * z[..., 1] + 1.0),
                          _min_pair_norm(z, [(0, 1)]))

    def chart(b):
        return np.array([b[1], b[0]])

    def fibre_point(b):
        # b = (mu, log|z1 z2 + 1|); pick u = z1 z2 real, off the pole
        t, c = float(b[0]), float(b[1])
        u = -1.0 + math.exp(c)
        r1sq = t + math.sqrt(t * t + abs(u) ** 2)
        z1 = math.sqrt(r1sq)
        z2 = u / z1
        return np.array([z1, z2], dtype=complex)

    def s1_orbit(z0):
        z0 = np.asarray(z0, dtype=complex)

        def cyc(s):
            ph = np.exp(-2j * np.pi * np.asarray(s))
            return np.stack([ph * z0[0], z0[1] / ph], axis=-1)

        return cyc, 1.0

    return FibrationModel(
        id="sm_ff", n=2, components=2, f=f, domain_ok=domain_ok, margin=margin,
        smooth_locus="smooth; only singular fibre over (0,0)",
        chart=chart, cycles={"s1_orbit": s1_orbit}, fibre_point=fibre_point,
    )


def _model_hl() -> FibrationModel:
    def f(z):
        prod = z[..., 0] * z[..., 1] * z[..., 2]
        return np.stack([
            prod.imag,
            np.abs(z[..., 0]) ** 2 - np.abs(z[..., 1]) ** 2,
            np.abs(z[..., 0]) ** 2 - np.abs(z[..., 2]) ** 2,
        ], axis=-1)

    def domain_ok(z):
        return np.ones(z.shape[:-1], dtype=bool)

    def margin(z):
        return _min_pair_norm(z, [(0, 1), (0, 2), (1, 2)])

    return FibrationModel(
        id="hl", n=3, components=3, f=f, domain_ok=domain_ok, margin=margin,
        smooth_locus="smooth; critical on the union of {z_i = z_j = 0}",
    )


def _model_positive() -> FibrationModel:
    def f(z):
        prod = z[..., 0] * z[..., 1] * z[..., 2]
        return np.stack([
            log_abs(1.0 + prod),
            np.abs(z[..., 0]) ** 2 - np.abs(z[..., 1]) ** 2,
            np.abs(z[..., 0]) ** 2 - np.abs(z[..., 2]) ** 2,
        ], axis=-1)

    def domain_ok(z):
        return np.abs(1.0 + z[..., 0] * z[..., 1] * z[..., 2]) > 0

    def margin(z):
        prod = z[..., 0] * z[..., 1] * z[..., 2]
        return np.minimum(np.abs(1.0 + prod),
                          _min_pair_norm(z, [(0, 1), (0, 2), (1, 2)]))

    def chart(b):
        return np.array([b[0], b[1] / 2.0, b[2] / 2.0])

    def fibre_point(b):
        c, b2, b3 = (float(v) for v in b)
        w = -1.0 + math.exp(c)
        rho = hl_modulus(abs(w) ** 2, b2, b3)
        z1 = math.sqrt(rho)
        z2 = math.sqrt(rho - b2)
        z3 = w / (z1 * z2)
        return np.array([z1, z2, z3], dtype=complex)

    def torus_cycle(pair):
        i, j = pair

        def builder(z0):
            z0 = np.asarray(z0, dtype=complex)

            def cyc(s):
                ph = np.exp(-2j * np.pi * np.asarray(s))
                out = np.broadcast_to(z0, (np.size(s), 3)).copy()
                out[:, i] = ph * z0[i]
                out[:, j] = z0[j] / ph
                return out

            return cyc, 1.0

        return builder

    return FibrationModel(
        id="positive", n=3, components=3, f=f, domain_ok=domain_ok, margin=margin,
        smooth_locus="smooth; modeled on the Harvey-Lawson cone near its critical set",
        chart=chart,
        cycles={"c2": torus_cycle((0, 1)), "c3": torus_cycle((0, 2))},
        fibre_point=fibre_point,
    )


def _model_generic() -> FibrationModel:
    def f(z):
        return np.stack([
            mu12(z),
            log_abs(z[..., 2]),
            log_abs(z[..., 0] * z[..., 1] - 1.0),
        ], axis=-1)

    def domain_ok(z):
        return (np.abs(z[..., 2]) > 0) & (np.abs(z[..., 0] * z[..., 1] - 1.0) > 0)

    def margin(z):
        return np.minimum.reduce([
            np.abs(z[..., 0] * z[..., 1] - 1.0),
            np.abs(z[..., 2]),
            _min_pair_norm(z, [(0, 1)]),
        ])

    def chart(b):
        return np.array([b[2], b[0], math.pi * math.exp(2.0 * b[1])])

    def fibre_point(b):
        t, c2, c3 = (float(v) for v in b)
        u = 1.0 + math.exp(c3)
        r1sq = t + math.sqrt(t * t + u * u)
        z1 = math.sqrt(r1sq)
        return np.array([z1, u / z1, math.exp(c2)], dtype=complex)

    def s1_orbit(z0):
        z0 = np.asarray(z0, dtype=complex)

        def cyc(s):
            ph = np.exp(-2j * np.pi * np.asarray(s))
            out = np.broadcast_to(z0, (np.size(s), 3)).copy()
            out[:, 0] = ph * z0[0]
            out[:, 1] = z0[1] / ph
            return out

        return cyc, 1.0

    def e3(z0):
        z0 = np.asarray(z0, dtype=complex)

        def cyc(s):
            ph = np.exp(-2j * np.pi * np.asarray(s))
            out = np.broadcast_to(z0, (np.size(s), 3)).copy()
            out[:, 2] = ph * z0[2]
            return out

        return cyc, 1.0

    return FibrationModel(
        id="generic", n=3, components=3, f=f, domain_ok=domain_ok, margin=margin,
        smooth_locus="smooth; singular fibres over {(0, r, 0)}",
        chart=chart, cycles={"s1_orbit": s1_orbit, "e3": e3},
        fibre_point=fibre_point,
    )


def _model_stitched_ff() -> FibrationModel:
    def f(z):
        return np.stack([
            mu12(z),
            log_abs(gamma(z[..., 0], z[..., 1]) + 1.0),
        ], axis=-1)

    def domain_ok(z):
        return np.abs(gamma(z[..., 0], z[..., 1]) + 1.0) > 0

    def margin(z):
        return np.minimum.reduce([
            np.abs(gamma(z[..., 0], z[..., 1]) + 1.0),
            _min_pair_norm(z, [(0, 1)]),
            np.abs(mu12(z)),
        ])

    return FibrationModel(
        id="stitched_ff", n=2, components=2, f=f, domain_ok=domain_ok,
        margin=margin, smooth_locus="non-smooth on mu^{-1}(0)",
    )


def _phi_model(model_id, phi, smooth_locus, params=None):
    params = dict(params or {})

    def f(z):
        g = gamma(z[..., 0], z[..., 1])
        v1, v2 = phi(g, z[..., 2])
        return np.stack([mu12(z), log_abs(v1), log_abs(v2)], axis=-1)

    def domain_ok(z):
        g = gamma(z[..., 0], z[..., 1])
        v1, v2 = phi(g, z[..., 2])
        return (np.abs(v1) > 0) & (np.abs(v2) > 0)

    def margin(z):
        g = gamma(z[..., 0], z[..., 1])
        v1, v2 = phi(g, z[..., 2])
        return np.minimum.reduce([
            np.abs(v1), np.abs(v2),
            _min_pair_norm(z, [(0, 1)]),
            np.abs(mu12(z)),
        ])

    return FibrationModel(
        id=model_id, n=3, components=3, f=f, domain_ok=domain_ok, margin=margin,
        smooth_locus=smooth_locus, phi=phi, params=params,
    )


def _model_thin_legs(eps=0.1, big_m=4.0) -> FibrationModel:
    def phi(u1, u2):
        return phi_thin_legs(u1, u2, eps, big_m)

    model = _phi_model(
        "thin_legs", phi,
        "non-smooth on mu^{-1}(0); discriminant an amoeba with three thin legs",
        params={"eps": eps, "M": big_m},
    )
    model.cycles = {
        "red_v1": _thin_leg_reduced_cycle(model, 0),
        "red_v2": _thin_leg_reduced_cycle(model, 1),
    }
    model.fibre_point = lambda b: _thin_legs_fibre_point(model, b)
    model.chart = lambda b: np.asarray(b, dtype=float)
    return model


def gamma_t_inv_scalar(w, t):
    """Inverse of u -> u / sqrt(|t| + sqrt(t^2 + |u|^2))."""
    return w * math.sqrt(2.0 * abs(t) + abs(w) ** 2)


def _thin_legs_fibre_point(model, b):
    """A fibre point in the plain-amoeba branch of the thin-legs model."""
    t, x1, x2 = (float(v) for v in b)
    v1 = np.exp(x1) * np.exp(0.35j)
    v2 = np.exp(x2) * np.exp(-0.2j)
    # invert Psi, then Gamma_t, then split u1 = z1 z2 with mu = t
    u1p = (v1 + v2 + 1.0) / SQRT2
    u2 = (-v1 + v2 + 1.0) / SQRT2
    eps, big_m = model.params["eps"], model.params["M"]
    if thin_legs_branch(u1p, u2, eps, big_m) != "amoeba":
        raise ValueError("requested base point leaves the plain amoeba branch")
    u1 = gamma_t_inv_scalar(u1p, t)
    r1sq = t + math.sqrt(t * t + abs(u1) ** 2)
    z1 = math.sqrt(r1sq) * np.exp(1j * np.angle(u1))
    z2 = u1 / z1
    return np.array([z1, z2, u2], dtype=complex)


def _thin_leg_reduced_cycle(model, which):
    """Circle in the v_which coordinate of the reduced fibre, lifted.

    Normalized by 1/(2 pi) to match the period convention of the quoted
    thin-leg slice frame (beta db1 - e^{2b} db).
    """
    eps, big_m = model.params["eps"], model.params["M"]

    def builder(z0):
        z0 = np.asarray(z0, dtype=complex)
        t = float(mu12(z0[None, :])[0])
        g0 = complex(gamma(z0[0], z0[1]))
        v1_0, v2_0 = (complex(v) for v in psi_amoeba(g0, complex(z0[2])))
        # the whole torus must stay in the plain-amoeba branch of Phi
        probe = np.exp(2j * np.pi * np.linspace(0.0, 1.0, 64))
        pv1 = v1_0 * (probe if which == 0 else np.ones_like(probe))
        pv2 = v2_0 * (probe if which == 1 else np.ones_like(probe))
        pu1 = (pv1 + pv2 + 1.0) / SQRT2
        pu2 = (-pv1 + pv2 + 1.0) / SQRT2
        for a, b in zip(pu1, pu2):
            if thin_legs_branch(a, b, eps, big_m) != "amoeba":
                raise ValueError(
                    "reduced cycle leaves the plain-amoeba branch; move the "
                    "base point inward or enlarge M"
                )

        def cyc(s):
            s = np.asarray(s, dtype=float)
            ph = np.exp(2j * np.pi * s)
            v1 = v1_0 * (ph if which == 0 else np.ones_like(ph))
            v2 = v2_0 * (ph if which == 1 else np.ones_like(ph))
            u1p = (v1 + v2 + 1.0) / SQRT2
            u2 = (-v1 + v2 + 1.0) / SQRT2
            u1 = u1p * np.sqrt(2.0 * abs(t) + np.abs(u1p) ** 2)
            r1sq = t + np.sqrt(t * t + np.abs(u1) ** 2)
            z1 = np.sqrt(r1sq) * np.exp(1j * np.angle(u1))
            z2 = u1 / z1
            return np.stack([z1, z2, u2], axis=-1)

        return cyc, 1.0 / (2.0 * math.pi)

    return builder


def _model_control() -> FibrationModel:
    """Deliberately non-commuting components: (|z1|^2, Re z1, Im z2)."""

    def f(z):
        return np.stack([
            np.abs(z[..., 0]) ** 2,
            z[..., 0].real,
            z[..., 1].imag,
        ], axis=-1)

    def domain_ok(z):
        return np.ones(z.shape[:-1], dtype=bool)

    def margin(z):
        return np.abs(z[..., 0].imag)

    return FibrationModel(
        id="control", n=2, components=3, f=f, domain_ok=domain_ok, margin=margin,
        smooth_locus="smooth everywhere; fibres deliberately not Lagrangian",
    )


def hl_modulus(usq, b2, b3):
    """Positive root of rho (rho - b2)(rho - b3) = usq, rho >= max(0,b2,b3)."""
    lo = max(0.0, b2, b3)
    if usq == 0.0:
        return lo
    hi = lo + max(1.0, usq) ** (1.0 / 3.0) + abs(b2) + abs(b3) + 1.0
    while hi * (hi - b2) * (hi - b3) < usq:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * (mid - b2) * (mid - b3) < usq:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


_BUILDERS = {
    "sm_ff": _model_sm_ff,
    "hl": _model_hl,
    "positive": _model_positive,
    "generic": _model_generic,
    "amoeba": lambda: _phi_model(
        "amoeba", psi_amoeba,
        "non-smooth on mu^{-1}(0); discriminant {0} x Log(v1+v2+1=0)",
    ),
    "leg_h": lambda: _phi_model(
        "leg_h", phi_leg_h, "non-smooth on mu^{-1}(0); discriminant {0} x R x {0}",
    ),
    "leg_v": lambda: _phi_model(
        "leg_v", phi_leg_v, "non-smooth on mu^{-1}(0); discriminant {0} x {0} x R",
    ),
    "leg_d": lambda: _phi_model(
        "leg_d", phi_leg_d, "non-smooth on mu^{-1}(0); discriminant the diagonal",
    ),
    "stitched_ff": _model_stitched_ff,
    "thin_legs": _model_thin_legs,
    "control": _model_control,
}

MODEL_IDS = tuple(sorted(_BUILDERS))


def make_model(model_id: str, **params) -> FibrationModel:
    """Construct a fibration model by id; thin_legs accepts eps and M."""
    if model_id not in _BUILDERS:
        raise ValueError(f"unknown model id {model_id!r}; known: {MODEL_IDS}")
    if model_id == "thin_legs":
        return _model_thin_legs(
            eps=params.pop("eps", 0.1), big_m=params.pop("M", 4.0)
        )
    if params:
        raise ValueError(f"model {model_id} takes no parameters")
    return _BUILDERS[model_id]()


def sample_domain(model: FibrationModel, count: int, rng, margin: float = 0.1,
                  box: Optional[float] = None) -> np.ndarray:
    """Seeded rejection sampling of domain points with the given margin."""
    box = model.sample_box if box is None else box
    out = []
    need = count
    for _ in range(200):
        raw = rng.uniform(-box, box, size=(4 * need, 2 * model.n))
        z = raw[:, 0::2] + 1j * raw[:, 1::2]
        keep = model.domain_ok(z) & (model.margin(z) > margin)
        z = z[keep]
        out.append(z[:need])
        need -= len(z[:need])
        if need <= 0:
            return np.concatenate(out, axis=0)[:count]
    raise RuntimeError(
        f"could not draw {count} samples at margin {margin} for {model.id}"
    )


def log_section(x1, x2):
    """Lagrangian section (x1, x2) -> (i e^{x1}, e^{x2}) of the Log fibration.

    Its image misses the critical surface {v1 + v2 + 1 = 0}:
    |i e^{x1} + e^{x2} + 1|^2 = (e^{x2} + 1)^2 + e^{2 x1} >= 1.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return np.stack([1j * np.exp(x1), np.exp(x2).astype(complex)], axis=-1)
