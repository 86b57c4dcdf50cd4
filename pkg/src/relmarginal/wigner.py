"""Wigner functions on the light-cone phase space (u, v, p_u, p_v).

Ground states are Gaussian and handled in closed form through
:class:`GaussianWignerState`. Excited states are evaluated directly from
the wavefunction by quadrature (:func:`wigner_numeric`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ImaginaryResidualError, IntegrandError, check_velocity
from .mathcore import DEFAULT_SPEC, QuadratureSpec, Scheme, quad_nodes
from .oscillator import lightcone_scale, psi_lightcone

IMAG_TOL = 1e-8
_CHUNK = 1 << 21


@dataclass(frozen=True, eq=False)
class GaussianWignerState:
    """Gaussian phase-space density with given mean and covariance.

    Ordering is (q, p) for dim 2 and (u, v, p_u, p_v) for dim 4.
    """

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.covariance, dtype=float)
        dim = mean.shape[0]
        if dim not in (2, 4) or cov.shape != (dim, dim):
            raise DimensionError(f"mean {mean.shape} / covariance {cov.shape} do not describe a 2- or 4-dim state")
        if np.max(np.abs(cov - cov.T)) > 1e-12:
            raise ValueError("covariance must be symmetric")
        if np.min(np.linalg.eigvalsh(cov)) <= 0:
            raise ValueError("covariance must be positive definite")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def peak(self) -> float:
        return float((2 * math.pi) ** (-self.dim / 2) / math.sqrt(np.linalg.det(self.covariance)))

    def __repr__(self):
        return f"GaussianWignerState(mean={self.mean.tolist()}, covariance={self.covariance.tolist()})"


def ho_ground() -> GaussianWignerState:
    """Nonrelativistic unit-mass, unit-frequency oscillator ground state."""
    return GaussianWignerState(np.zeros(2), 0.5 * np.eye(2))


def lightcone_squeeze(beta: float) -> np.ndarray:
    """diag(c, 1/c, 1/c, c): maps lab phase-space points to the rest frame."""
    c = lightcone_scale(beta)
    return np.diag([c, 1.0 / c, 1.0 / c, c])


def wigner_ground(beta: float) -> GaussianWignerState:
    beta = check_velocity(beta)
    big = (1 + beta) / (2 * (1 - beta))
    small = (1 - beta) / (2 * (1 + beta))
    return GaussianWignerState(np.zeros(4), np.diag([big, small, small, big]))


def wigner_eval(state: GaussianWignerState, xi):
    """Density of ``state`` at ``xi`` (shape ``(dim,)`` or ``(..., dim)``)."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1:] != (state.dim,):
        raise DimensionError(f"point of shape {xi.shape} does not match a {state.dim}-dim state")
    d = xi - state.mean
    prec = np.linalg.inv(state.covariance)
    quad = np.einsum("...i,ij,...j->...", d, prec, d)
    out = state.peak * np.exp(-0.5 * quad)
    return out if out.ndim else float(out)


def galileo_shift(state: GaussianWignerState, v: float, t: float) -> GaussianWignerState:
    """W(q, p) -> W(q - v t, p - v) for a unit-mass particle."""
    if state.dim != 2:
        raise DimensionError("Galileo shift acts on 1D (q, p) states")
    m0, m1 = state.mean.tolist()
    return GaussianWignerState(np.array([m0 + v * t, m1 + v]), state.covariance)


def _inner_rule(spec: QuadratureSpec):
    x, w = quad_nodes(spec)
    if spec.scheme is Scheme.GAUSS_HERMITE:
        w = w * np.exp(x * x)
    gx, gy = np.meshgrid(x, x, indexing="ij")
    return gx.ravel(), gy.ravel(), np.outer(w, w).ravel()


def wigner_numeric(n: int, beta: float, xi, spec: QuadratureSpec = DEFAULT_SPEC):
    """Wigner transform of the boosted order-n state, by quadrature.

        W(u, v, p_u, p_v) = pi^-2 \\int psi*(u+x, v+y) psi(u-x, v-y) e^{2i(p_u x + p_v y)} dx dy

    The (x, y) nodes live in rest-frame units, x = x'/c and y = c y', so the
    integration box follows the light-cone squeeze of the state.

    Gauss-Legendre integrates along the real axis over [-L, L]^2. With
    Gauss-Hermite the contour is first shifted to x' = w + i p' (p' the
    rest-frame momentum); the integrand then becomes polynomial times
    exp(-w^2), which the rule integrates exactly once ``order > n``.
    """
    beta = check_velocity(beta)
    if n < 0:
        raise ValueError("n must be non-negative")
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1:] != (4,):
        raise DimensionError(f"expected light-cone phase-space points (..., 4), got {xi.shape}")
    c = lightcone_scale(beta)
    pts = xi.reshape(-1, 4)
    gx, gy, gw = _inner_rule(spec)
    out = np.empty(pts.shape[0])
    step = max(1, _CHUNK // gx.size)
    for start in range(0, pts.shape[0], step):
        u, v, pu, pv = (col[:, None] for col in pts[start : start + step].T)
        if spec.scheme is Scheme.GAUSS_HERMITE:
            # shift to the steepest-descent contour in rest-frame units
            xr = gx + 1j * (pu / c)
            yr = gy + 1j * (c * pv)
            envelope = np.exp(gx * gx + gy * gy)
            wx = gw / envelope
        else:
            xr, yr = gx, gy
            envelope, wx = 1.0, gw
        x, y = xr / c, c * yr
        vals = (
            np.conj(psi_lightcone(n, beta, np.conj(u + x), np.conj(v + y)))
            * psi_lightcone(n, beta, u - x, v - y)
            * np.exp(2j * (pu * x + pv * y))
            * envelope
        )
        if not np.all(np.isfinite(vals)):
            raise IntegrandError("Wigner integrand overflowed; point lies too far in phase space")
        total = (vals @ wx) / math.pi**2
        if np.max(np.abs(total.imag), initial=0.0) > IMAG_TOL:
            raise ImaginaryResidualError(f"Wigner value has imaginary residual {np.max(np.abs(total.imag)):.3e}")
        out[start : start + step] = total.real
    out = out.reshape(xi.shape[:-1])
    return out if out.ndim else float(out)


def wigner_function(n: int, beta: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """Point evaluator ``xi -> W(xi)`` for the boosted order-n state."""
    return lambda xi: wigner_numeric(n, beta, xi, spec)


def gaussian_evaluator(state: GaussianWignerState):
    return lambda xi: wigner_eval(state, xi)


def wigner_total(
    n: int,
    beta: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    outer: QuadratureSpec = QuadratureSpec(Scheme.GAUSS_HERMITE, 6),
) -> float:
    """Phase-space integral of :func:`wigner_numeric` by nested quadrature.

    Outer nodes are placed in rest-frame units (unit Jacobian since the
    light-cone squeeze has determinant one). The default outer
    Gauss-Hermite rule is exact for levels n <= 5.
    """
    x, w = quad_nodes(outer)
    if outer.scheme is Scheme.GAUSS_HERMITE:
        w = w * np.exp(x * x)
    grid = np.stack(np.meshgrid(x, x, x, x, indexing="ij"), axis=-1).reshape(-1, 4)
    weights = np.einsum("i,j,k,l->ijkl", w, w, w, w).ravel()
    lab = grid @ np.linalg.inv(lightcone_squeeze(beta)).T
    return float(weights @ wigner_numeric(n, beta, lab, spec))
