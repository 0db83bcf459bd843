"""Radial ultraviolet cutoff profiles and their real-space smearing.

The cutoff phi is a radial Schwartz-class weight on momentum space.  Its
inverse Fourier transform rho(x) = (2 pi)^-3 int phi(|k|) e^{ik.x} dk is the
smearing that enters every current density.  All 3D Fourier integrals of
radial functions are reduced to 1D radial quadratures against spherical
Bessel weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import spherical_jn

from .errors import DomainError, QuadratureError

# Truncation threshold for the radial integration domain: r_far is chosen so
# that |phi(r_far)| < FAR_TOL, making the tail contribution negligible.
FAR_TOL = 1e-16

_QUAD_LIMIT = 200


def _gaussian_phi(r, lam):
    return np.exp(-(r * r) / (2.0 * lam * lam))


def _gaussian_far(lam, tol):
    return lam * math.sqrt(-2.0 * math.log(tol))


# Registry of radial profile families.  Each entry maps kind -> (phi(r, lam),
# far_radius(lam, tol)).  Only "gaussian" is required; additional radial
# Schwartz profiles can be registered here.
PROFILES = {
    "gaussian": (_gaussian_phi, _gaussian_far),
}


@dataclass(frozen=True)
class CutoffProfile:
    """Radial ultraviolet cutoff with inverse-length scale lam > 0."""

    kind: str = "gaussian"
    lam: float = 1.0

    def __post_init__(self):
        if self.kind not in PROFILES:
            raise DomainError(f"unknown cutoff profile kind {self.kind!r}")
        if not self.lam > 0:
            raise DomainError(f"cutoff scale must be positive, got {self.lam}")

    def far_radius(self, tol: float = FAR_TOL) -> float:
        """Radius beyond which |phi| < tol."""
        return PROFILES[self.kind][1](self.lam, tol)


def phi_eval(profile: CutoffProfile, r):
    """Evaluate the radial cutoff phi at momentum radius r >= 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("phi_eval requires r >= 0")
    return PROFILES[profile.kind][0](r, profile.lam)


def _radial_quad(f, r_far, tol):
    """Adaptive quadrature of f on [0, r_far] with an error check."""
    val, err = integrate.quad(f, 0.0, r_far, epsabs=tol * 1e-2, epsrel=1e-12,
                              limit=_QUAD_LIMIT)
    if err > tol:
        raise QuadratureError(
            f"radial quadrature error estimate {err:.3e} exceeds {tol:.3e}",
            estimate=err)
    return val


def rho_eval(profile: CutoffProfile, x, tol: float = 1e-10) -> float:
    """Real-space smearing rho(x) = (2 pi)^-3 int phi(|k|) e^{ik.x} dk.

    Radial and real; for |x| > 0 computed as the 1D integral
    (2 pi^2 |x|)^-1 int_0^inf phi(r) r sin(r|x|) dr.
    """
    x = np.asarray(x, dtype=float)
    t = float(np.linalg.norm(x))
    r_far = profile.far_radius()
    if t < 1e-12:
        return _radial_quad(
            lambda r: phi_eval(profile, r) * r * r, r_far, tol) / (2.0 * math.pi ** 2)
    val = _radial_quad(
        lambda r: phi_eval(profile, r) * r * math.sin(r * t), r_far, tol)
    return val / (2.0 * math.pi ** 2 * t)


def grad_rho(profile: CutoffProfile, x, tol: float = 1e-10) -> np.ndarray:
    """Gradient of rho at x.

    Uses d rho / d|x| = -(2 pi^2)^-1 int phi(r) r^3 j_1(r |x|) dr, which
    follows from j_0' = -j_1; vanishes at the origin by radial symmetry.
    """
    x = np.asarray(x, dtype=float)
    t = float(np.linalg.norm(x))
    if t < 1e-12:
        return np.zeros(3)
    r_far = profile.far_radius()
    dval = -_radial_quad(
        lambda r: phi_eval(profile, r) * r ** 3 * spherical_jn(1, r * t),
        r_far, tol) / (2.0 * math.pi ** 2)
    return dval * x / t
