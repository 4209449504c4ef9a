"""Floating-point Cauchy transform of an annulus-supported datum.

The datum is ``f(z) = z * phi(|z|^2)`` with ``phi`` a smooth bump supported in
``s = |z|^2`` in ``[1, 2]`` (so ``f`` lives on ``1 <= |z| <= sqrt 2``).  Its
Cauchy transform

    u(z) = -(1 / 2 pi i) * integral f(zeta) / (zeta - z) dzetabar ^ dzeta

solves ``(1/2)(d/dx + i d/dy) u = f``; with ``dzetabar ^ dzeta = 2i dx dy`` this is
``u(z) = -(1/pi) * integral f(zeta) / (zeta - z) dA``.  At ``z = 0`` the radial
reduction gives ``u(0) = -integral_1^2 phi(s) ds``, which is nonzero, so ``u``
does not vanish inside the hole of the annulus.

This module is the only floating-point part of the package and shares no
numeric types with the exact core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class QuadratureNotConverged(RuntimeError):
    pass


def bump(s):
    """``exp(-1 / ((s - 1)(2 - s)))`` on ``(1, 2)``, zero elsewhere (vectorized)."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 1.0) & (s < 2.0)
    si = s[inside]
    out[inside] = np.exp(-1.0 / ((si - 1.0) * (2.0 - si)))
    return out


@dataclass(frozen=True)
class AnnulusDatum:
    amplitude: float = 1.0
    resolution: int = 128
    inner: float = 1.0  # support of phi in s = |z|^2
    outer: float = 2.0
    rule: str = "polar-midpoint"

    def __post_init__(self):
        if self.resolution < 16:
            raise ValueError("resolution must be at least 16")
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        if (self.inner, self.outer) != (1.0, 2.0):
            raise ValueError("the profile is fixed to s in [1, 2]")
        if self.rule != "polar-midpoint":
            raise ValueError(f"unknown quadrature rule {self.rule!r}")

    def phi(self, s):
        return self.amplitude * bump(s)

    def f(self, z):
        z = np.asarray(z, dtype=complex)
        return z * self.phi(np.abs(z) ** 2)

    @property
    def support_radius(self) -> float:
        return math.sqrt(self.outer)


def _polar_sum(datum: AnnulusDatum, z: complex, resolution: int) -> complex:
    # polar coordinates centred at z: dA / (zeta - z) = e^{-i theta} d rho d theta,
    # which removes the kernel singularity
    R = datum.support_radius
    lo = max(0.0, abs(z) - R)
    hi = abs(z) + R
    n_rho = resolution
    n_theta = 2 * resolution
    h_rho = (hi - lo) / n_rho
    h_theta = 2.0 * math.pi / n_theta
    rho = lo + (np.arange(n_rho) + 0.5) * h_rho
    theta = (np.arange(n_theta) + 0.5) * h_theta
    e = np.exp(1j * theta)
    zeta = z + rho[:, None] * e[None, :]
    integrand = datum.f(zeta) * np.conj(e)[None, :]
    # fixed summation order keeps results reproducible
    total = integrand.sum(axis=1).sum() * h_rho * h_theta
    return complex(-total / math.pi)


def cauchy_transform(datum: AnnulusDatum, z: complex, tol: float | None = None) -> complex:
    """``u(z)``; with ``tol`` the value is cross-checked against a 2x refined grid."""
    value = _polar_sum(datum, complex(z), datum.resolution)
    if tol is not None:
        refined = _polar_sum(datum, complex(z), 2 * datum.resolution)
        if abs(refined - value) > tol:
            raise QuadratureNotConverged(
                f"resolution {datum.resolution} too low at z={z}: "
                f"refinement changed u by {abs(refined - value):.3e} > {tol:.1e}"
            )
    return value


def profile_integral(datum: AnnulusDatum) -> float:
    """1-D oracle ``integral_1^2 phi(s) ds`` by adaptive quadrature."""
    from scipy.integrate import quad

    value, _ = quad(lambda s: float(datum.phi(s)), datum.inner, datum.outer, epsabs=1e-15, epsrel=1e-13)
    return value


def total_mass(datum: AnnulusDatum) -> float:
    """``(1/pi) * integral |f| dA = integral_1^2 sqrt(s) phi(s) ds``."""
    from scipy.integrate import quad

    value, _ = quad(lambda s: math.sqrt(s) * float(datum.phi(s)), datum.inner, datum.outer, epsabs=1e-15)
    return value


def dbar_residual(datum: AnnulusDatum, z: complex, h: float = 1e-3) -> complex:
    """``(1/2)(d/dx + i d/dy) u - f`` at ``z`` by centred differences."""
    ux = (cauchy_transform(datum, z + h) - cauchy_transform(datum, z - h)) / (2 * h)
    uy = (cauchy_transform(datum, z + 1j * h) - cauchy_transform(datum, z - 1j * h)) / (2 * h)
    return 0.5 * (ux + 1j * uy) - complex(datum.f(z))


@dataclass
class SupportReport:
    u0: complex
    oracle: float  # -integral phi
    relative_error: float
    hole_values: list[tuple[complex, complex]] = field(default_factory=list)
    outside_values: list[tuple[complex, complex]] = field(default_factory=list)
    refinement: list[tuple[int, float]] = field(default_factory=list)  # (resolution, |u(0) - oracle|)
    dbar_residuals: list[tuple[complex, float]] = field(default_factory=list)

    @property
    def nonzero_in_hole(self) -> bool:
        return all(abs(u) > 0.5 * abs(self.oracle) for _, u in self.hole_values)

    def lines(self) -> list[str]:
        out = [
            f"u(0)            = {self.u0.real:+.12f} {self.u0.imag:+.3e}i",
            f"-int_1^2 phi    = {self.oracle:+.12f}",
            f"relative error  = {self.relative_error:.3e}",
            f"u != 0 in hole  = {self.nonzero_in_hole}",
        ]
        out.append("z                      u(z)")
        for z, u in self.hole_values + self.outside_values:
            out.append(f"{z.real:+.3f}{z.imag:+.3f}i   {u.real:+.6e} {u.imag:+.6e}i")
        for res, err in self.refinement:
            out.append(f"resolution {res:5d}: |u(0) - oracle| = {err:.3e}")
        for z, r in self.dbar_residuals:
            out.append(f"dbar residual at {z.real:+.3f}{z.imag:+.3f}i: {r:.3e}")
        return out


def support_demo(datum: AnnulusDatum | None = None, dbar_points: int = 2) -> SupportReport:
    datum = datum or AnnulusDatum()
    oracle = -profile_integral(datum)
    u0 = cauchy_transform(datum, 0.0)
    rel = abs(u0 - oracle) / abs(oracle) if oracle else abs(u0)
    report = SupportReport(u0=u0, oracle=oracle, relative_error=rel)
    for z in (0.3, 0.5j, -0.4 - 0.4j, 0.8):
        report.hole_values.append((complex(z), cauchy_transform(datum, z)))
    for z in (1.6, -2.0j, 3.0 + 1.0j):
        report.outside_values.append((complex(z), cauchy_transform(datum, z)))
    for res in (datum.resolution // 4, datum.resolution // 2, datum.resolution):
        if res >= 16:
            d = AnnulusDatum(datum.amplitude, res)
            report.refinement.append((res, abs(cauchy_transform(d, 0.0) - oracle)))
    for z in (1.2, 1.1j)[:dbar_points]:
        report.dbar_residuals.append((complex(z), abs(dbar_residual(datum, z))))
    return report
