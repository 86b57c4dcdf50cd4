"""Sp(2,R) and Sp(4,R) matrices with (positions..., momenta...) ordering."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError

DEFAULT_TOL = 1e-10


def symplectic_form(dim: int) -> np.ndarray:
    if dim not in (2, 4):
        raise DimensionError(f"unsupported phase-space dimension {dim}; expected 2 or 4")
    half = dim // 2
    eye = np.eye(half)
    zero = np.zeros((half, half))
    return np.block([[zero, eye], [-eye, zero]])


def is_symplectic(m, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Check ``M J M^T == J``; returns ``(ok, max-abs residual)``."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    j = symplectic_form(m.shape[0])
    residual = float(np.max(np.abs(m @ j @ m.T - j)))
    return residual <= tol, residual


def _rotation(dim, i, theta):
    # rotation in the (q_i, p_i) plane
    half = dim // 2
    g = np.eye(dim)
    c, s = np.cos(theta), np.sin(theta)
    g[i, i], g[i, i + half] = c, s
    g[i + half, i], g[i + half, i + half] = -s, c
    return g


def _squeeze(dim, i, r):
    half = dim // 2
    g = np.eye(dim)
    g[i, i] = np.exp(r)
    g[i + half, i + half] = np.exp(-r)
    return g


def _shear(dim, a):
    # q-block identity, p -> p + S q with S symmetric
    half = dim // 2
    g = np.eye(dim)
    g[half:, :half] = (a + a.T) / 2
    return g


def _mode_mixer(dim, theta):
    # orthogonal O acting identically on q and p blocks (O^T O = 1)
    half = dim // 2
    g = np.eye(dim)
    if half == 2:
        c, s = np.cos(theta), np.sin(theta)
        o = np.array([[c, s], [-s, c]])
        g[:half, :half] = o
        g[half:, half:] = o
    return g


def random_symplectic(dim: int, seed: int, n_generators: int = 6) -> np.ndarray:
    """Product of ``n_generators`` random elementary symplectic maps.

    Generators are phase rotations, squeezes diag(e^r, e^-r) per conjugate
    pair, symmetric momentum shears and (for dim 4) mode rotations.
    ``n_generators=0`` gives the identity.
    """
    if dim not in (2, 4):
        raise DimensionError(f"unsupported phase-space dimension {dim}; expected 2 or 4")
    rng = np.random.default_rng(seed)
    half = dim // 2
    m = np.eye(dim)
    for _ in range(n_generators):
        kind = rng.integers(4)
        if kind == 0:
            g = _rotation(dim, rng.integers(half), rng.uniform(0, 2 * np.pi))
        elif kind == 1:
            g = _squeeze(dim, rng.integers(half), rng.uniform(-1.0, 1.0))
        elif kind == 2:
            g = _shear(dim, rng.normal(size=(half, half)))
        else:
            g = _mode_mixer(dim, rng.uniform(0, 2 * np.pi))
        m = g @ m
    return m
