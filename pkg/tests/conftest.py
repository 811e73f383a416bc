"""Shared fixtures and independent numerical oracles.

The oracles here deliberately avoid the library's own fast paths: matrix
elements come from dense 2-D quadrature over the plane, tail functions
from scipy's regularized incomplete gamma, areas from plain grid counts.
"""

import numpy as np
import pytest
from scipy.special import gammaln

import fockdiv.divisor as dv


def displacement_oracle(z: complex, n: int, n_rad: int = 240,
                        n_ang: int = 256, rmax: float = 9.0) -> np.ndarray:
    """2-D quadrature of <T_z e_j, e_k> = (1/pi) int T_z e_j conj(e_k) dmu.

    Polar product rule: Gauss-Legendre radially (the integrand decays like
    e^{-r^2}), uniform angles (exact for trigonometric polynomials of the
    occurring degrees)."""
    nodes, wts = np.polynomial.legendre.leggauss(n_rad)
    r = (nodes + 1) * rmax / 2
    wr = wts * rmax / 2
    th = 2 * np.pi * np.arange(n_ang) / n_ang
    wth = 2 * np.pi / n_ang
    pts = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
    weight = (wr * r)[:, None].repeat(n_ang, axis=1).ravel() * wth
    k = np.arange(n)
    lg = gammaln(k + 1)
    logw = np.log(np.where(pts == 0, 1e-300, pts))
    basis = np.exp(k[None, :] * logw[:, None] - 0.5 * lg[None, :])
    pref = np.exp(np.conj(z) * pts - abs(z) ** 2 / 2)
    shifted = pts - z
    logs = np.log(np.where(shifted == 0, 1e-300, shifted))
    translated = pref[:, None] * np.exp(k[None, :] * logs[:, None]
                                        - 0.5 * lg[None, :])
    envelope = (weight * np.exp(-np.abs(pts) ** 2))[:, None]
    return (np.conj(basis) * envelope).T @ translated / np.pi


def random_divisor(rng: np.random.Generator, max_nodes: int = 4,
                   max_mult: int = 5, scale: float = 2.0) -> dv.Divisor:
    n = int(rng.integers(1, max_nodes + 1))
    while True:
        centers = scale * (rng.normal(size=n) + 1j * rng.normal(size=n))
        if np.unique(centers).size == n:
            break
    mults = rng.integers(1, max_mult + 1, size=n)
    return dv.Divisor(centers, mults)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
