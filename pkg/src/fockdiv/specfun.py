"""Incomplete-gamma tail functions and the radial profile t^2/2 - m log t.

The lower tail sigma_k and upper tail omega_k are normalized so that
sigma_k(x) + omega_k(x) = 1.  omega_k is summed in the log domain so that
k and x up to ~1e5 stay inside double range; sigma_k switches to an
independent evaluation once 1 - omega_k would lose all digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .errors import DomainError, ParameterError, VerificationError

# Below this distance from 1, 1 - omega is considered fully cancelled.
CANCELLATION_THRESHOLD = 1e-8

# Default resolution of the grid verifiers.
T_STEP = 0.05


def _check_kx(k, x):
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"x must be a finite nonnegative real, got {x!r}")
    return int(k), float(x)


def omega(k: int, x: float) -> float:
    """Upper tail e^{-x} * sum_{s<=k} x^s/s!, summed via log-sum-exp."""
    k, x = _check_kx(k, x)
    if x == 0.0:
        return 1.0
    s = np.arange(k + 1)
    terms = s * math.log(x) - gammaln(s + 1) - x
    m = terms.max()
    val = math.exp(m) * float(np.exp(terms - m).sum())
    return min(val, 1.0)


def _sigma_series(k: int, x: float) -> float:
    """Stable lower tail for the regime omega ~ 1 (so sigma is tiny):
    sigma_k(x) = e^{-x} sum_{s>k} x^s/s!, truncated once terms stop mattering."""
    if x == 0.0:
        return 0.0
    total = 0.0
    log_term = (k + 1) * math.log(x) - gammaln(k + 2) - x
    term = math.exp(log_term)
    s = k + 1
    while term > total * 1e-18 + 1e-320 and s < k + 100000:
        total += term
        s += 1
        term *= x / s
    return total


def _sigma_quadrature(k: int, x: float) -> float:
    """Adaptive quadrature of (1/k!) int_0^x y^k e^{-y} dy."""
    lg = gammaln(k + 1)

    def integrand(y):
        if y <= 0.0:
            return 0.0
        return math.exp(k * math.log(y) - y - lg)

    val, _ = integrate.quad(integrand, 0.0, x, epsabs=1e-300, epsrel=1e-12,
                            limit=200)
    return val


def sigma(k: int, x: float) -> float:
    """Lower tail (1/k!) int_0^x y^k e^{-y} dy = 1 - omega_k(x)."""
    k, x = _check_kx(k, x)
    w = omega(k, x)
    if w <= 1.0 - CANCELLATION_THRESHOLD:
        return 1.0 - w
    return _sigma_quadrature(k, x)


def _omega_batch(k: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vectorized omega for integer array k and real array x (same shape)."""
    k = np.asarray(k, dtype=np.int64).ravel()
    x = np.asarray(x, dtype=float).ravel()
    if k.size == 0:
        return np.empty(0)
    kmax = int(k.max())
    s = np.arange(kmax + 1)
    safe_x = np.maximum(x, 1e-300)
    terms = s[None, :] * np.log(safe_x)[:, None] - gammaln(s + 1)[None, :] - x[:, None]
    terms = np.where(s[None, :] <= k[:, None], terms, -np.inf)
    m = terms.max(axis=1)
    out = np.exp(m) * np.exp(terms - m[:, None]).sum(axis=1)
    out = np.where(x == 0.0, 1.0, out)
    return np.minimum(out, 1.0)


def _sigma_batch(k: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vectorized sigma, switching to the upper-series in the cancellation
    regime.  Used by the grid verifiers where scalar calls would be slow."""
    k = np.asarray(k, dtype=np.int64).ravel()
    x = np.asarray(x, dtype=float).ravel()
    w = _omega_batch(k, x)
    out = 1.0 - w
    bad = w > 1.0 - CANCELLATION_THRESHOLD
    if bad.any():
        out = out.copy()
        out[bad] = [_sigma_series(int(ki), float(xi))
                    for ki, xi in zip(k[bad], x[bad])]
    return out


def verify_tail_lower_a(t: float, k_max: int) -> tuple[float, int]:
    """Empirical lower bound for sigma_k(k - t sqrt(k)) over k0 <= k <= k_max.

    k0 is the smallest k making the argument positive.  Raises if the
    minimum over the second half of the range decays relative to the first
    half (the bound is supposed to stabilize, not vanish)."""
    if t < 0 or not math.isfinite(t):
        raise DomainError(f"t must be a finite nonnegative real, got {t!r}")
    if k_max < 10:
        raise ParameterError(f"k_max must be at least 10, got {k_max}")
    k0 = int(math.floor(t * t)) + 1
    if k0 > k_max:
        raise ParameterError(
            f"k - t*sqrt(k) <= 0 for every k <= {k_max}: empty range")
    ks = np.arange(k0, k_max + 1)
    xs = ks - t * np.sqrt(ks)
    vals = _sigma_batch(ks, xs)
    eps = float(vals.min())
    if eps <= 0.0:
        raise VerificationError("tail lower bound (a) is not positive")
    half = ks.size // 2
    if half >= 1:
        lo, hi = float(vals[:half].min()), float(vals[half:].min())
        if hi < 0.9 * lo:
            raise VerificationError(
                f"tail lower bound (a) decays: first half {lo:.3g}, "
                f"second half {hi:.3g}")
    return eps, k0


def verify_tail_lower_b(t: float, k_max: int) -> float:
    """Empirical lower bound for omega_k(k + t sqrt(k)) over 0 <= k <= k_max."""
    if t < 0 or not math.isfinite(t):
        raise DomainError(f"t must be a finite nonnegative real, got {t!r}")
    if k_max < 10:
        raise ParameterError(f"k_max must be at least 10, got {k_max}")
    ks = np.arange(0, k_max + 1)
    xs = ks + t * np.sqrt(ks)
    vals = _omega_batch(ks, xs)
    eps = float(vals.min())
    if eps <= 0.0:
        raise VerificationError("tail lower bound (b) is not positive")
    half = ks.size // 2
    lo, hi = float(vals[:half].min()), float(vals[half:].min())
    if hi < 0.8 * lo:
        raise VerificationError(
            f"tail lower bound (b) decays: first half {lo:.3g}, "
            f"second half {hi:.3g}")
    return eps


def find_tail_ratio_t(epsilon: float, k_max: int, t_step: float = T_STEP) -> float:
    """Smallest grid t making the shifted integrand dominate:
    (y - t sqrt(y))^k e^{-(y - t sqrt(y))} <= epsilon * y^k e^{-y} for every
    pair t^2 <= y <= k, checked on the integer grid up to k_max together
    with the closed-form large-y limit.  Integrating yields
    sigma_k(m - t sqrt(m)) <= 2 epsilon sigma_k(m).

    The comparison argument predicts t = sqrt(2 log(1/epsilon)) suffices
    (and is sharp for large k); anything beyond twice that cap flags a bug."""
    if not (0.0 < epsilon <= 1.0):
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    if k_max < 10:
        raise ParameterError(f"k_max must be at least 10, got {k_max}")
    log_eps = math.log(epsilon)
    t_pred = math.sqrt(-2.0 * log_eps) if epsilon < 1.0 else 0.0
    cap = 2.0 * t_pred
    n_steps = int(math.floor(cap / t_step)) + 1
    ys_all = np.arange(1, k_max + 1, dtype=float)
    for i in range(n_steps + 1):
        t = i * t_step
        # The inequality must hold for every y >= t^2; its log ratio at
        # (y, k) is t sqrt(y) + k log(1 - t/sqrt(y)).  The log factor is
        # <= 0, so the worst k is the smallest admissible one, k = y, and
        # the worst y is the large-y limit where the ratio tends to -t^2/2.
        if -t * t / 2.0 > log_eps + 1e-12:
            continue
        ys = ys_all[ys_all >= t * t]
        if ys.size == 0:
            continue
        with np.errstate(divide="ignore"):
            vals = t * np.sqrt(ys) + ys * np.log1p(-t / np.sqrt(ys))
        if float(vals.max()) <= log_eps + 1e-12:
            return t
    raise VerificationError(
        f"no t below the cap {cap:.3g} satisfies the tail ratio bound; "
        "this indicates an implementation bug")


def phi(m: float, t: float) -> float:
    """Radial profile t^2/2 - m log t (minimized at t = sqrt(m))."""
    if m <= 0:
        raise DomainError(f"m must be positive, got {m!r}")
    if t <= 0:
        raise DomainError(f"t must be positive, got {t!r}")
    return t * t / 2.0 - m * math.log(t)


@dataclass(frozen=True)
class TailValue:
    """One evaluation of the tail pair at (k, x), with the split recorded."""

    k: int
    x: float
    sigma: float
    omega: float

    def __post_init__(self):
        _check_kx(self.k, self.x)
        if abs(self.sigma + self.omega - 1.0) > 1e-12:
            raise VerificationError(
                f"sigma + omega = {self.sigma + self.omega!r} differs from 1")

    @classmethod
    def evaluate(cls, k: int, x: float) -> "TailValue":
        s = sigma(k, x)
        return cls(k=int(k), x=float(x), sigma=s, omega=1.0 - s)


@dataclass(frozen=True)
class RadialProfile:
    """phi_m sampled on a positive radius grid, monotone on each side of
    sqrt(m)."""

    m: float
    grid: np.ndarray
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.m <= 0:
            raise DomainError(f"m must be positive, got {self.m!r}")
        grid = np.asarray(self.grid, dtype=float)
        if grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
            raise ParameterError("grid must be strictly increasing positive radii")
        object.__setattr__(self, "grid", grid)
        if self.values is None:
            object.__setattr__(
                self, "values", grid ** 2 / 2.0 - self.m * np.log(grid))
        root = math.sqrt(self.m)
        vals = self.values
        left = grid <= root
        if np.any(np.diff(vals[left]) > 1e-12):
            raise VerificationError("phi_m fails to decrease left of sqrt(m)")
        right = grid >= root
        if np.any(np.diff(vals[right]) < -1e-12):
            raise VerificationError("phi_m fails to increase right of sqrt(m)")
