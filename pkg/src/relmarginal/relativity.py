"""Transformation laws of marginals under Galileo and Lorentz boosts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import check_velocity
from .marginal import (
    Grid,
    MarginalParams,
    MarginalParams1D,
    marginal_1d,
    marginal_gaussian,
    marginal_numeric,
    plane_points,
)
from .mathcore import QuadratureSpec, Scheme
from .oscillator import lightcone_scale
from .wigner import GaussianWignerState, galileo_shift, wigner_function, wigner_ground


class BoostConvention(str, Enum):
    """Which printed boost direction a velocity refers to.

    ``eq2.2`` is the lab -> rest coordinate map z' = (z - beta t)/..., under
    which u' = c u. ``eq7.46`` names the opposite direction u' = u / c; it is
    the same physics with beta -> -beta.
    """

    EQ2_2 = "eq2.2"
    EQ7_46 = "eq7.46"


def effective_beta(beta: float, convention=BoostConvention.EQ2_2) -> float:
    beta = check_velocity(beta)
    return -beta if BoostConvention(convention) is BoostConvention.EQ7_46 else beta


def velocity_addition(b1: float, b2: float) -> float:
    return (b1 + b2) / (1.0 + b1 * b2)


def boost_pullback_params(params: MarginalParams, beta: float) -> MarginalParams:
    """Parameters sigma_beta with w_beta(U, V; sigma) = w_0(U, V; sigma_beta).

    mu_i, zeta_i (u and p_v columns) are divided by c and nu_i, eta_i
    (v and p_u columns) multiplied by c, c = sqrt((1-beta)/(1+beta)).
    """
    c = lightcone_scale(beta)
    return MarginalParams(params.matrix * np.array([1.0 / c, c, c, 1.0 / c]))


class Method(str, Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


# With nodes following the ground-state envelope both rules are exact for
# oscillator levels n <= 5 (outer needs 2*order - 1 >= 4n, inner order > n).
NUMERIC_MARGINAL_SPEC = QuadratureSpec(Scheme.GAUSS_HERMITE, 12)
NUMERIC_WIGNER_SPEC = QuadratureSpec(Scheme.GAUSS_HERMITE, 8)


@dataclass(frozen=True)
class BoostReport:
    beta: float
    n: int
    grid: str
    max_abs_deviation: float
    tolerance: float
    method: Method

    @property
    def passed(self) -> bool:
        return self.max_abs_deviation <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "beta": self.beta,
            "n": self.n,
            "grid": self.grid,
            "max_abs_deviation": self.max_abs_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "method": self.method.value,
        }


def boosted_marginal(
    n: int,
    beta: float,
    params: MarginalParams,
    points,
    method=Method.ANALYTIC,
    spec: QuadratureSpec = NUMERIC_MARGINAL_SPEC,
    wigner_spec: QuadratureSpec = NUMERIC_WIGNER_SPEC,
):
    """w_beta(U, V; sigma) for the order-n oscillator moving with ``beta``."""
    method = Method(method)
    envelope = wigner_ground(beta)
    if method is Method.ANALYTIC:
        if n != 0:
            raise ValueError("the analytic marginal exists only for the ground state (n = 0)")
        return marginal_gaussian(envelope, params).pdf(points)
    return marginal_numeric(wigner_function(n, beta, wigner_spec), params, points, spec, envelope=envelope)


def verify_covariance(
    n: int,
    beta: float,
    params: MarginalParams,
    grid: Grid = Grid(),
    tol: float = 1e-10,
    method=Method.ANALYTIC,
    spec: QuadratureSpec = NUMERIC_MARGINAL_SPEC,
    wigner_spec: QuadratureSpec = NUMERIC_WIGNER_SPEC,
) -> BoostReport:
    """Compare w_beta(.; sigma) against w_0(.; sigma_beta) on ``grid`` x ``grid``."""
    beta = check_velocity(beta)
    method = Method(method)
    pts = plane_points(grid)
    lhs = boosted_marginal(n, beta, params, pts, method, spec, wigner_spec)
    rhs = boosted_marginal(n, 0.0, boost_pullback_params(params, beta), pts, method, spec, wigner_spec)
    dev = float(np.max(np.abs(lhs - rhs)))
    return BoostReport(beta, n, f"{grid}x{grid}", dev, tol, method)


def galileo_marginal_shift(state: GaussianWignerState, p: MarginalParams1D, v: float, t: float) -> float:
    """Shift mu v t + nu v of the 1D marginal under a unit-mass Galileo boost.

    Raises ``AssertionError`` if the shifted state's marginal is not the
    original translated by that amount with unchanged variance.
    """
    shift = p.mu * (v * t) + p.nu * v
    mean0, var0 = marginal_1d(state, p)
    mean1, var1 = marginal_1d(galileo_shift(state, v, t), p)
    assert var1 == var0, "Galileo boost changed the marginal variance"
    assert math.isclose(mean1 - mean0, shift, rel_tol=1e-12, abs_tol=1e-12 * (1 + abs(mean0))), (
        "Galileo boost did not translate the marginal by mu v t + nu v"
    )
    return shift
