"""Tomographic marginals: delta-constrained projections of Wigner functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateProjectionError, DimensionError
from .mathcore import DEFAULT_SPEC, QuadratureSpec, Scheme, quad_nodes
from .wigner import GaussianWignerState

RANK_TOL = 1e-10

SIGMA_NAMES = ("mu1", "nu1", "nu2", "mu2", "zeta1", "eta1", "eta2", "zeta2")


@dataclass(frozen=True, eq=False)
class MarginalParams:
    """Projection (U, V) = A (u, v, p_u, p_v) onto a plane.

    Row 0 of ``A`` is (mu1, nu1, nu2, mu2) and row 1 is
    (zeta1, eta1, eta2, zeta2), i.e. the column order follows the
    phase-space ordering (u, v, p_u, p_v).
    """

    matrix: np.ndarray

    def __post_init__(self):
        a = np.array(self.matrix, dtype=float)
        if a.shape != (2, 4):
            raise DimensionError(f"projection matrix must be 2x4, got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @classmethod
    def from_sigma(cls, sigma) -> "MarginalParams":
        """Build from the flat sequence (mu1, nu1, nu2, mu2, zeta1, eta1, eta2, zeta2)."""
        sigma = [float(s) for s in sigma]
        if len(sigma) != 8:
            raise DimensionError(f"sigma needs 8 entries, got {len(sigma)}")
        return cls(np.reshape(sigma, (2, 4)))

    @classmethod
    def position_plane(cls) -> "MarginalParams":
        return cls([[1, 0, 0, 0], [0, 1, 0, 0]])

    @classmethod
    def momentum_plane(cls) -> "MarginalParams":
        return cls([[0, 0, 1, 0], [0, 0, 0, 1]])

    @classmethod
    def random(cls, seed: int) -> "MarginalParams":
        """Random full-rank projection, entries standard normal."""
        rng = np.random.default_rng(seed)
        while True:
            p = cls(rng.normal(size=(2, 4)))
            if p.smallest_singular_value() > 1e-3:
                return p

    @property
    def sigma(self) -> tuple[float, ...]:
        return tuple(self.matrix.ravel().tolist())

    def as_dict(self) -> dict[str, float]:
        return dict(zip(SIGMA_NAMES, self.sigma))

    def smallest_singular_value(self) -> float:
        norms = np.linalg.norm(self.matrix, axis=1)
        if np.any(norms == 0):
            return 0.0
        return float(np.linalg.svd(self.matrix / norms[:, None], compute_uv=False)[-1])

    def check_rank(self, tol: float = RANK_TOL) -> None:
        smin = self.smallest_singular_value()
        if smin <= tol:
            raise DegenerateProjectionError(
                f"projection is rank-deficient (smallest singular value {smin:.3e} <= {tol:.1e})", smin
            )

    def __repr__(self):
        return f"MarginalParams({self.matrix.tolist()})"


@dataclass(frozen=True)
class MarginalParams1D:
    mu: float
    nu: float

    def __post_init__(self):
        if math.hypot(self.mu, self.nu) <= 1e-12:
            raise DegenerateProjectionError("(mu, nu) must not vanish", 0.0)


@dataclass(frozen=True, eq=False)
class Gaussian2D:
    mean: np.ndarray
    covariance: np.ndarray

    def pdf(self, points):
        """Density at ``points`` of shape ``(2,)`` or ``(..., 2)``."""
        pts = np.asarray(points, dtype=float)
        d = pts - self.mean
        prec = np.linalg.inv(self.covariance)
        quad = np.einsum("...i,ij,...j->...", d, prec, d)
        norm = 1.0 / (2 * math.pi * math.sqrt(np.linalg.det(self.covariance)))
        out = norm * np.exp(-0.5 * quad)
        return out if out.ndim else float(out)


def marginal_gaussian(state: GaussianWignerState, params: MarginalParams) -> Gaussian2D:
    """Exact law of (U, V) = A xi when xi is distributed by ``state``."""
    if state.dim != 4:
        raise DimensionError("two-plane marginals need a 4-dim state")
    params.check_rank()
    a = params.matrix
    return Gaussian2D(a @ state.mean, a @ state.covariance @ a.T)


def completion(params: MarginalParams) -> np.ndarray:
    """4x4 map T whose first two rows are A and last two span null(A).

    The null rows are the trailing right singular vectors of A, which are
    orthonormal and orthogonal to the row space.
    """
    params.check_rank()
    _, _, vt = np.linalg.svd(params.matrix)
    return np.vstack([params.matrix, vt[2:]])


def marginal_numeric(
    wigner: Callable[[np.ndarray], np.ndarray],
    params: MarginalParams,
    points,
    spec: QuadratureSpec = DEFAULT_SPEC,
    envelope: GaussianWignerState | None = None,
):
    """Marginal density at ``points`` (shape ``(2,)`` or ``(..., 2)``).

    Both delta constraints are removed by the exact change of variables
    y = T xi (see :func:`completion`), leaving

        w(U, V) = |det T|^-1 \\int W(T^-1 (U, V, s, r)) ds dr,

    which is integrated with a tensor rule from ``spec``.

    Without ``envelope`` the (s, r) nodes sit on the fixed box of the rule.
    With a Gaussian ``envelope`` (the Gaussian that bounds the Wigner
    function, e.g. the ground state for any oscillator level) the nodes are
    centred on the conditional mean of (s, r) given (U, V) and scaled by its
    conditional covariance; Gauss-Hermite nodes are then exact whenever W is
    polynomial times the envelope.
    """
    t = completion(params)
    t_inv = np.linalg.inv(t)
    det = abs(np.linalg.det(t))
    pts = np.asarray(points, dtype=float)
    if pts.shape[-1:] != (2,):
        raise DimensionError(f"marginal points must have shape (..., 2), got {pts.shape}")
    flat = pts.reshape(-1, 2)

    x, w = quad_nodes(spec)
    if spec.scheme is Scheme.GAUSS_HERMITE:
        w = w * np.exp(x * x)
    gs, gr = (g.ravel() for g in np.meshgrid(x, x, indexing="ij"))
    ref = np.stack([gs, gr], axis=-1)
    weights = np.outer(w, w).ravel()

    if envelope is None:
        centers = np.zeros_like(flat)
        scale = np.eye(2)
    else:
        cov = t @ envelope.covariance @ t.T
        my = t @ envelope.mean
        gain = cov[2:, :2] @ np.linalg.inv(cov[:2, :2])
        centers = my[2:] + (flat - my[:2]) @ gain.T
        cond = cov[2:, 2:] - gain @ cov[:2, 2:]
        scale = np.linalg.cholesky((cond + cond.T) / 2)
        if spec.scheme is Scheme.GAUSS_HERMITE:
            scale = scale * math.sqrt(2.0)
    jac = abs(np.linalg.det(scale))
    sr = centers[:, None, :] + (ref @ scale.T)[None, :, :]
    y = np.concatenate([np.broadcast_to(flat[:, None, :], sr.shape), sr], axis=-1)
    xi = y @ t_inv.T
    vals = np.asarray(wigner(xi))
    out = jac * (vals @ weights) / det
    out = out.reshape(pts.shape[:-1])
    return out if out.ndim else float(out)


def marginal_1d(state: GaussianWignerState, p: MarginalParams1D) -> tuple[float, float]:
    """Mean and variance of X = mu q + nu p under a 1D Gaussian state."""
    if state.dim != 2:
        raise DimensionError("1D marginals need a 2-dim state")
    m_q, m_p = state.mean.tolist()
    (s_qq, s_qp), (_, s_pp) = state.covariance.tolist()
    mean = p.mu * m_q + p.nu * m_p
    var = p.mu * p.mu * s_qq + 2.0 * p.mu * p.nu * s_qp + p.nu * p.nu * s_pp
    return mean, var


def rotation_marginal(state: GaussianWignerState, theta: float) -> tuple[float, float]:
    return marginal_1d(state, MarginalParams1D(math.cos(theta), math.sin(theta)))


def normal_pdf(x, mean: float, var: float):
    return np.exp(-0.5 * (np.asarray(x) - mean) ** 2 / var) / math.sqrt(2 * math.pi * var)


@dataclass(frozen=True)
class Grid:
    """Uniform axis ``count`` points from ``lo`` to ``hi`` inclusive."""

    lo: float = -3.0
    hi: float = 3.0
    count: int = 21

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("grid count must be at least 2")

    @classmethod
    def parse(cls, text: str) -> "Grid":
        lo, hi, count = text.split(":")
        return cls(float(lo), float(hi), int(count))

    def axis(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)

    def __str__(self):
        return f"{self.lo!r}:{self.hi!r}:{self.count}"


def plane_points(gu: Grid, gv: Grid | None = None) -> np.ndarray:
    """Row-major (U outer, V inner) points of shape (count_u, count_v, 2)."""
    gv = gu if gv is None else gv
    uu, vv = np.meshgrid(gu.axis(), gv.axis(), indexing="ij")
    return np.stack([uu, vv], axis=-1)
