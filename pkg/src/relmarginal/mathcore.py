"""Special functions and quadrature primitives shared by the other modules."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import IntegrandError, UnsupportedOrderError

MAX_ORDER = 256


class Scheme(str, Enum):
    GAUSS_HERMITE = "gauss-hermite"
    GAUSS_LEGENDRE = "gauss-legendre"


@dataclass(frozen=True)
class QuadratureSpec:
    """Node rule for one axis of a tensor-product quadrature.

    ``truncation`` is the half-width of the integration box for
    Gauss-Legendre; Gauss-Hermite ignores it.
    """

    scheme: Scheme = Scheme.GAUSS_LEGENDRE
    order: int = 96
    truncation: float = 8.0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if int(self.order) != self.order or self.order < 2:
            raise ValueError(f"quadrature order must be an integer >= 2, got {self.order!r}")
        if not self.truncation > 0:
            raise ValueError(f"truncation must be positive, got {self.truncation!r}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "truncation", float(self.truncation))


DEFAULT_SPEC = QuadratureSpec()


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by three-term recurrence.

    Accepts scalars or arrays, real or complex.
    """
    if n < 0:
        raise ValueError("Hermite degree must be non-negative")
    x = np.asarray(x)
    h_prev = np.ones_like(x, dtype=np.result_type(x, float))
    if n == 0:
        return h_prev if h_prev.ndim else h_prev[()]
    h = 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if np.ndim(h) else h[()]


@lru_cache(maxsize=64)
def _nodes(scheme: Scheme, order: int, truncation: float):
    if scheme is Scheme.GAUSS_HERMITE:
        x, w = np.polynomial.hermite.hermgauss(order)
    else:
        x, w = np.polynomial.legendre.leggauss(order)
        x, w = truncation * x, truncation * w
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def quad_nodes(spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(nodes, weights)`` for one axis, nodes strictly increasing.

    Gauss-Hermite weights integrate against exp(-x^2); Gauss-Legendre
    weights integrate against 1 on [-L, L]. Orders above ``MAX_ORDER``
    are refused.
    """
    if spec.order > MAX_ORDER:
        raise UnsupportedOrderError(f"order {spec.order} exceeds the supported maximum {MAX_ORDER}")
    return _nodes(spec.scheme, spec.order, spec.truncation)


def integrate_2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    spec: QuadratureSpec = DEFAULT_SPEC,
    transform=None,
    center=(0.0, 0.0),
) -> float:
    """Tensor-product estimate of the integral of ``f`` over the plane.

    ``f`` is called once with two broadcast coordinate arrays. For
    Gauss-Hermite the exp(-x^2 - y^2) weight is divided back out, so ``f``
    is always the plain integrand.

    The reference nodes ``r`` are mapped to ``center + transform @ r``,
    which lets the integration box follow an anisotropic or tilted
    integrand; the Jacobian ``|det transform|`` is applied.
    """
    x, w = quad_nodes(spec)
    if spec.scheme is Scheme.GAUSS_HERMITE:
        w = w * np.exp(x**2)
    rx, ry = np.meshgrid(x, x, indexing="ij")
    weights = np.outer(w, w)
    jac = 1.0
    if transform is not None:
        m = np.asarray(transform, dtype=float)
        jac = abs(np.linalg.det(m))
        rx, ry = m[0, 0] * rx + m[0, 1] * ry, m[1, 0] * rx + m[1, 1] * ry
    values = np.asarray(f(rx + center[0], ry + center[1]))
    values = np.broadcast_to(values, rx.shape)
    if not np.all(np.isfinite(values)):
        raise IntegrandError("integrand returned non-finite values")
    return float(jac * np.sum(weights * values))


def fd_derivative(f: Callable[[float], float], x: float, h: float = 1e-4) -> float:
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    return (f(x + h) - f(x - h)) / (2.0 * h)
