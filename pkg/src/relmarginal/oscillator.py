"""Relativistic oscillator: light-cone kinematics, wavefunctions, spectrum.

Natural units throughout. Boosts follow the lab -> hadron-rest map

    z' = (z - beta t) / sqrt(1 - beta^2),  t' = (t - beta z) / sqrt(1 - beta^2),

which in light-cone coordinates u = (z+t)/sqrt2, v = (z-t)/sqrt2 reads
u' = c u, v' = v / c with c = sqrt((1-beta)/(1+beta)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ImaginaryResidualError, check_velocity
from .mathcore import DEFAULT_SPEC, QuadratureSpec, fd_derivative, hermite, integrate_2d

SQRT2 = math.sqrt(2.0)
IMAG_TOL = 1e-8


class LightConePoint(NamedTuple):
    u: float
    v: float


@dataclass(frozen=True)
class OscillatorState:
    """Quantum numbers (a, b, n, k) of the oscillator and its velocity."""

    a: int = 0
    b: int = 0
    n: int = 0
    k: int = 0
    beta: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "n", "k"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"quantum number {name} must be a non-negative integer, got {value!r}")
        check_velocity(self.beta)

    @property
    def lam(self) -> int:
        return self.a + self.b + self.n - self.k

    def psi(self, z, t):
        if self.k != 0:
            raise ValueError("only states without timelike excitation (k = 0) have wavefunctions here")
        return psi_boosted(self.n, self.beta, z, t)

    def mass_squared(self, m0: float = 0.0) -> float:
        return mass_squared(m0, self.a, self.b, self.n, self.k)


def lightcone_scale(beta: float) -> float:
    """c(beta) = sqrt((1 - beta) / (1 + beta)); note c(-beta) = 1 / c(beta)."""
    beta = check_velocity(beta)
    return math.sqrt((1.0 - beta) / (1.0 + beta))


def lightcone_from_zt(z, t):
    return LightConePoint((z + t) / SQRT2, (z - t) / SQRT2)


def zt_from_lightcone(u, v):
    return (u + v) / SQRT2, (u - v) / SQRT2


def boost_lightcone(p, beta: float) -> LightConePoint:
    c = lightcone_scale(beta)
    u, v = p
    return LightConePoint(c * u, v / c)


def boost_zt(z, t, beta: float):
    beta = check_velocity(beta)
    g = 1.0 / math.sqrt(1.0 - beta * beta)
    return (z - beta * t) * g, (t - beta * z) * g


def unboost_zt(z_rest, t_rest, beta: float):
    """Inverse of :func:`boost_zt`: rest-frame coordinates back to the lab."""
    return boost_zt(z_rest, t_rest, -beta)


def norm_const(n: int) -> float:
    return 1.0 / math.sqrt(math.pi * 2.0**n * math.factorial(n))


def psi_rest(n: int, z, t):
    """Rest-frame wavefunction N_n H_n(z) exp(-(z^2 + t^2) / 2).

    Unit-normalized over the (z, t) plane. Works on arrays and on complex
    arguments (used by contour-shifted quadratures).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return norm_const(n) * hermite(n, z) * np.exp(-(z * z + t * t) / 2.0)


def psi_boosted(n: int, beta: float, z, t):
    zp, tp = boost_zt(z, t, beta)
    return psi_rest(n, zp, tp)


def psi_lightcone(n: int, beta: float, u, v):
    """The boosted wavefunction expressed in light-cone coordinates."""
    z, t = zt_from_lightcone(u, v)
    return psi_boosted(n, beta, z, t)


def psi_ground_lightcone(beta: float, u, v):
    c2 = lightcone_scale(beta) ** 2
    return np.exp(-0.5 * (c2 * u * u + v * v / c2)) / math.sqrt(math.pi)


def phi_ground(beta: float, p_u, p_v):
    c2 = lightcone_scale(beta) ** 2
    return np.exp(-0.5 * (p_u * p_u / c2 + c2 * p_v * p_v)) / math.sqrt(math.pi)


def phi_momentum(n: int, beta: float, p_u: float, p_v: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Momentum-energy wavefunction in light-cone momenta.

    The Fourier transform of an order-n state carries the global phase
    (-i)^n; it is removed, so the returned value is real and |phi|^2 is
    unaffected. n = 0 uses the closed Gaussian form, higher n go through
    quadrature over a box aligned with the boosted light-cone axes.
    """
    beta = check_velocity(beta)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return float(phi_ground(beta, p_u, p_v))
    c = lightcone_scale(beta)
    shift = n * math.pi / 2

    def integrand(part):
        def f(u, v):
            phase = shift - (u * p_u + v * p_v)
            return part(phase) * psi_lightcone(n, beta, u, v)

        return f

    # u' = c u and v' = v / c put the box in the rest frame of the state
    box = np.diag([1.0 / c, c])
    re = integrate_2d(integrand(np.cos), spec, transform=box) / (2 * math.pi)
    im = integrate_2d(integrand(np.sin), spec, transform=box) / (2 * math.pi)
    if abs(im) > IMAG_TOL:
        raise ImaginaryResidualError(f"momentum wavefunction has imaginary residual {im:.3e}")
    return re


def subsidiary_residual(n: int, beta: float, z: float, t: float, h: float = 1e-4) -> float:
    """|t' psi + d psi / dt'| at the lab point (z, t).

    The derivative is a central difference along the rest-frame time axis,
    taken through the lab-frame boosted wavefunction.
    """
    beta = check_velocity(beta)
    zr, tr = boost_zt(z, t, beta)

    def along_rest_time(s):
        zl, tl = unboost_zt(zr, s, beta)
        return float(psi_boosted(n, beta, zl, tl))

    value = float(psi_boosted(n, beta, z, t))
    return abs(tr * value + fd_derivative(along_rest_time, tr, h))


def mass_squared(m0: float, a: int, b: int, n: int, k: int = 0) -> float:
    if min(a, b, n, k) < 0:
        raise ValueError("quantum numbers must be non-negative")
    return m0 * m0 + (a + b + n - k + 1)


def degeneracy(lam: int) -> int:
    """Number of (a, b, n) >= 0 with a + b + n = lam (k = 0 sector)."""
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    return sum(1 for a in range(lam + 1) for b in range(lam + 1 - a))
