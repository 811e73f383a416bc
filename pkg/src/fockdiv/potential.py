"""Subharmonic-potential computations: the mass-redistribution functional
with its uniqueness certificate, and the explicit weight constructions.

Laplacian normalization used throughout (checked once, here):
Delta |z|^2 = 4 and Delta log|z| = 2 pi delta_0, so the redistributed
profile (|z - c|^2 - m)/2 on D(c, sqrt(m)) has constant Laplacian 2 and
total mass 2 pi m, matching the point mass m * 2 pi delta_c."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .divisor import Divisor, Region, _count_scan, disjointness_check
from .errors import (DomainError, ParameterError, PreconditionError,
                     VerificationError)

QUAD_RTOL = 1e-8
RADIAL_GRID_N = 4096

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


# ---------------------------------------------------------------------------
# mass redistribution
# ---------------------------------------------------------------------------

def _ring_mean_log(lam_abs: float, s: float, R: float) -> float:
    """(1/2pi) int log(R/|lam + s e^{i theta}|) d(theta), restricted to the
    arc inside D(R); returns the integral over theta divided by 2 pi times
    2 pi, i.e. the plain theta-integral."""
    if lam_abs + s <= R:
        # full circle inside: circular mean of log|.| is log(max(|lam|, s))
        return 2 * math.pi * math.log(R / max(lam_abs, s)) if max(lam_abs, s) > 0 \
            else 0.0
    if abs(lam_abs - s) >= R:
        return 0.0
    # partial arc: |lam + s e^{i phi}|^2 = lam^2 + s^2 + 2 lam s cos(phi)
    c = (R * R - lam_abs * lam_abs - s * s) / (2 * lam_abs * s)
    c = min(1.0, max(-1.0, c))
    phi0 = math.acos(c)  # inside for phi in (phi0, pi], doubled by symmetry
    phis = phi0 + (math.pi - phi0) * (_GL_NODES + 1) / 2
    mods_sq = lam_abs ** 2 + s ** 2 + 2 * lam_abs * s * np.cos(phis)
    vals = 0.5 * np.log(R * R / mods_sq)
    return float((math.pi - phi0) * np.dot(_GL_WEIGHTS, vals))


def _disc_log_integral(lam: complex, r: float, R: float) -> float:
    """int over D(lam, r) cap D(R) of log(R/|z|) dm."""
    lam_abs = abs(lam)
    if lam_abs - r >= R:
        return 0.0
    if lam_abs + r <= R:
        # wholly inside: exact via circular means of the harmonic log
        if lam_abs >= r:
            return math.pi * r * r * math.log(R / lam_abs)
        inner = 0.0
        if lam_abs > 0:
            inner += (lam_abs ** 2 / 2) * math.log(R / lam_abs)
        # int_{lam_abs}^{r} s log(R/s) ds
        def anti(s):
            return 0.0 if s == 0 else s * s / 2 * math.log(R / s) + s * s / 4
        inner += anti(r) - anti(lam_abs)
        return 2 * math.pi * inner
    val, _ = integrate.quad(
        lambda s: s * _ring_mean_log(lam_abs, s, R), 0.0, r,
        epsabs=1e-13, epsrel=QUAD_RTOL, limit=200,
        points=[max(0.0, R - lam_abs)])
    return val


def redistribution_integral(divisor: Divisor, R: float) -> float:
    """I(R) = sum over nodes of int_{D(center, radius) cap D(R)}
    log(R/|z|) dm, the radial growth functional of the redistributed mass."""
    if R <= 0:
        raise DomainError(f"R must be positive, got {R!r}")
    total = 0.0
    for lam, r in zip(divisor.centers, divisor.radii):
        total += _disc_log_integral(complex(lam), float(r), float(R))
    return total


@dataclass(frozen=True)
class RedistributionCurve:
    """I(R) against the pi R^2 / 2 benchmark."""

    radii: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if np.any(np.diff(radii) <= 0):
            raise ParameterError("radii must be strictly increasing")
        if np.any(values < -1e-9) or np.any(np.diff(values) < -1e-6):
            raise ParameterError("I(R) must be nonnegative and nondecreasing")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)

    @property
    def benchmark(self) -> np.ndarray:
        return math.pi * self.radii ** 2 / 2

    @property
    def excess(self) -> np.ndarray:
        return self.values - self.benchmark

    def csv(self) -> str:
        lines = ["R,I,piR2_half,excess"]
        for r, v, b, e in zip(self.radii, self.values, self.benchmark,
                              self.excess):
            lines.append(f"{r:.12g},{v:.12g},{b:.12g},{e:.12g}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class UniquenessReport:
    verdict: str
    grows: bool
    area_K: float
    area_error: float
    R0: float
    slope: float
    slope_benchmark: float
    curve: RedistributionCurve


def uniqueness_certificate(divisor: Divisor, window: Region, r_list
                           ) -> UniquenessReport:
    """Certificate that a divisor whose discs cover the window outside a
    compact set cannot annihilate a nonzero function: the excess
    I(R) - pi R^2 / 2 must outgrow (area(K) + 1) log R."""
    r_list = sorted(float(r) for r in r_list)
    if len(r_list) < 4:
        raise ParameterError("need at least 4 radii for the certificate")
    radii = divisor.radii
    collar = float(radii.max())
    pts = window.grid()
    if window.kind == "disc":
        inner = pts[np.abs(pts) <= window.radius - collar]
    else:
        xmin, xmax, ymin, ymax = window.rect
        inner = pts[(pts.real >= xmin + collar) & (pts.real <= xmax - collar)
                    & (pts.imag >= ymin + collar) & (pts.imag <= ymax - collar)]
    if inner.size == 0:
        raise ParameterError("window too small for the collar")
    counts = _count_scan(inner, divisor.centers, radii)
    h2 = window.h ** 2
    uncovered = inner[counts == 0]
    if uncovered.size:
        edge = float(np.abs(uncovered).max())
        limit = (window.radius - collar if window.kind == "disc"
                 else min(abs(v) for v in window.rect))
        if edge > limit - collar:
            raise PreconditionError(
                "uncovered set reaches the window collar: the covering "
                "hypothesis (complement compact) fails")
    area_K = uncovered.size * h2
    multi = inner[counts >= 2]
    need = area_K + 1.0
    multi_radii = np.sort(np.abs(multi))
    n_need = int(math.ceil(need / h2))
    if multi_radii.size < n_need:
        raise PreconditionError(
            "multiply covered set too small inside the window; "
            "cannot anchor the certificate")
    R0 = float(multi_radii[n_need - 1])
    values = np.array([redistribution_integral(divisor, r) for r in r_list])
    curve = RedistributionCurve(np.array(r_list), values)
    half = len(r_list) // 2
    logs = np.log(np.array(r_list[half:]))
    slope = float(np.polyfit(logs, curve.excess[half:], 1)[0])
    benchmark = need
    grows = slope >= 0.8 * benchmark
    verdict = ("not a zero divisor (certificate grows)" if grows
               else "inconclusive (excess does not outgrow the benchmark)")
    return UniquenessReport(verdict=verdict, grows=grows, area_K=area_K,
                            area_error=2 * window.h * math.sqrt(area_K * math.pi)
                            if area_K > 0 else h2,
                            R0=R0, slope=slope, slope_benchmark=benchmark,
                            curve=curve)


# ---------------------------------------------------------------------------
# explicit weights
# ---------------------------------------------------------------------------

def weight_v(divisor: Divisor, z: complex) -> float:
    """Nonpositive correction sum m [log u + 1 - u] over the discs
    containing z, with u = alpha |z - center|^2 / m.  Returns -inf exactly
    at a node center."""
    z = complex(z)
    total = 0.0
    for lam, m in zip(divisor.centers, divisor.mults):
        u = divisor.alpha * abs(z - lam) ** 2 / m
        if u >= 1.0:
            continue
        if u == 0.0:
            return -math.inf
        total += m * (math.log(u) + 1.0 - u)
    return total


def _psi_on_mesh(divisor: Divisor, zs: np.ndarray) -> np.ndarray:
    psi = divisor.alpha * np.abs(zs) ** 2
    for lam, m in zip(divisor.centers, divisor.mults):
        u = divisor.alpha * np.abs(zs - lam) ** 2 / m
        mask = (u < 1.0) & (u > 0.0)
        psi[mask] += m * (np.log(u[mask]) + 1.0 - u[mask])
    psi[np.isin(zs, divisor.centers)] = -np.inf
    return psi


@dataclass(frozen=True)
class LaplacianReport:
    h: float
    tol: float
    n_inside: int
    n_outside: int
    max_dev_inside: float
    max_dev_outside: float

    @property
    def ok(self) -> bool:
        return (self.max_dev_inside <= self.tol
                and self.max_dev_outside <= self.tol)


def verify_psi_laplacian(divisor: Divisor, window: Region,
                         tol_scale: float = 60.0) -> LaplacianReport:
    """Five-point stencil check of the distributional identities for
    psi = alpha |z|^2 + v: Laplacian 0 inside each disc off the center
    (the point mass lives at the center only) and 4 alpha outside all
    discs.  Points near centers, disc boundaries, or the window edge are
    excluded (the stencil is invalid across the C^1 interface)."""
    h = window.h
    tol = tol_scale * h * h
    if tol > 0.5:
        raise ParameterError(
            f"resolution too coarse: stencil error bound {tol:.3g} > 0.5")
    if window.kind == "disc":
        half = window.radius
        xs = np.arange(-half, half + h / 2, h)
    else:
        xs = np.arange(window.rect[0], window.rect[1] + h / 2, h)
    if window.kind == "disc":
        ys = xs
    else:
        ys = np.arange(window.rect[2], window.rect[3] + h / 2, h)
    gx, gy = np.meshgrid(xs, ys)
    zs = gx + 1j * gy
    psi = _psi_on_mesh(divisor, zs)
    lap = np.full(zs.shape, np.nan)
    lap[1:-1, 1:-1] = (psi[2:, 1:-1] + psi[:-2, 1:-1] + psi[1:-1, 2:]
                       + psi[1:-1, :-2] - 4 * psi[1:-1, 1:-1]) / (h * h)
    if len(divisor):
        dists = np.abs(zs[..., None] - divisor.centers[None, None, :])
        margin = np.min(dists - divisor.radii[None, None, :], axis=-1)
        boundary_dist = np.min(np.abs(dists - divisor.radii[None, None, :]),
                               axis=-1)
        # The log singularity at each center has fourth derivative of order
        # m / d^4, so the stencil error near a center is ~ 8 m h^2 / d^4.
        # Excluding d <= (8 m / tol_scale)^{1/4} (h-independent) keeps that
        # error below the quoted tolerance.
        eps = np.maximum(10.0 * h,
                         (8.0 * divisor.mults / tol_scale) ** 0.25)
        clear_of_centers = np.all(dists > eps[None, None, :], axis=-1)
    else:
        margin = np.full(zs.shape, np.inf)
        boundary_dist = np.full(zs.shape, np.inf)
        clear_of_centers = np.full(zs.shape, True)
    valid = np.isfinite(lap) & (boundary_dist > 2 * h)
    if window.kind == "disc":
        valid &= np.abs(zs) <= window.radius - 2 * h
    inside = valid & (margin < 0) & clear_of_centers
    outside = valid & (margin > 0)
    dev_in = float(np.max(np.abs(lap[inside]))) if inside.any() else 0.0
    dev_out = float(np.max(np.abs(lap[outside] - 4 * divisor.alpha))) \
        if outside.any() else 0.0
    return LaplacianReport(h=h, tol=tol, n_inside=int(inside.sum()),
                           n_outside=int(outside.sum()),
                           max_dev_inside=dev_in, max_dev_outside=dev_out)


# ---------------------------------------------------------------------------
# radial weight y_{q,a}
# ---------------------------------------------------------------------------

def _mass_antiderivative(r: float, q: float, a: float) -> float:
    """int_0^r s * a / (q + 2a - s)^2 ds, closed form."""
    c = q + 2 * a
    return a * (c / (c - r) + math.log(c - r) - 1.0 - math.log(c))


@dataclass(frozen=True)
class RadialWeight:
    """Radial building block y equal to r^2 outside radius q + a, glued
    C^1 at the boundary, with logarithmic singularity 2 q^2 log r at the
    origin and Laplacian bounded below by 4 gamma."""

    q: float
    a: float
    grid: np.ndarray
    gamma: np.ndarray
    g: np.ndarray
    h: np.ndarray
    y: np.ndarray
    laplacian_lhs: np.ndarray
    laplacian_rhs: np.ndarray
    mass: float
    boundary_value_error: float
    derivative_mismatch: float
    origin_limit: float

    @property
    def mass_bound(self) -> float:
        return 2 * math.pi * (self.q + self.a) ** 2 / (self.q + 2 * self.a)

    def csv(self) -> str:
        lines = ["r,gamma,g,h,y,laplacian_lhs,laplacian_rhs"]
        for row in zip(self.grid, self.gamma, self.g, self.h, self.y,
                       self.laplacian_lhs, self.laplacian_rhs):
            lines.append(",".join(f"{v:.12g}" for v in row))
        return "\n".join(lines) + "\n"


def build_radial_weight(q: float, a: float,
                        grid_n: int = RADIAL_GRID_N) -> RadialWeight:
    """Construct y = r^2 + g + h inside radius q + a (r^2 outside) where g
    solves the radial Dirichlet problem Delta g = 4 gamma - 4 b/(pi (q+a)^2)
    with zero boundary values and h carries the log singularity.

    Radial convention: Delta u = u'' + u'/r, so
    g'(r) = (1/r) int_0^r s (4 gamma(s) - const) ds with the mass integral
    in closed form; g itself by composite quadrature on the grid."""
    if q < 1 or a < 1:
        raise DomainError(f"the construction assumes q, a >= 1, got {q}, {a}")
    if grid_n < 16:
        raise ParameterError("grid_n too small")
    edge = q + a
    c = q + 2 * a
    mass = 2 * math.pi * _mass_antiderivative(edge, q, a)
    # (1/r) int_0^r s * (4 b / (pi edge^2)) ds = (2 b / (pi edge^2)) r
    const = 2 * mass / (math.pi * edge * edge)

    inner = np.linspace(edge / grid_n, edge, grid_n)
    outer = np.linspace(edge, 1.25 * edge, max(grid_n // 8, 8))[1:]
    grid = np.concatenate([inner, outer])

    def gprime(r):
        if r <= 0:
            return 0.0
        return 4 * _mass_antiderivative(min(r, edge), q, a) / r - const * r \
            if r <= edge else 0.0

    gp = np.array([gprime(r) for r in inner])
    # cumulative integral of g' from the first grid point; g(edge) = 0
    cum = integrate.cumulative_trapezoid(gp, inner, initial=0.0)
    # refine with Richardson-style correction: use Simpson on the uniform grid
    try:
        cum = integrate.cumulative_simpson(gp, x=inner, initial=0.0)
    except AttributeError:
        pass
    g_in = cum - cum[-1]
    # the missing piece below the first grid point: g' ~ O(r), negligible
    h_in = q * q * (2 * np.log(inner / edge) + 1 - (inner / edge) ** 2)
    y_in = inner ** 2 + g_in + h_in
    gamma_in = a / (c - inner) ** 2
    lap_in = 4.0 + 4 * gamma_in - 4 * mass / (math.pi * edge ** 2) \
        - 4 * q * q / edge ** 2
    rhs_in = 4 * gamma_in

    gamma_out = a / (c - np.minimum(outer, c - 1e-9)) ** 2
    y_out = outer ** 2
    lap_out = np.full(outer.size, 4.0)
    rhs_out = np.zeros(outer.size)

    boundary_value_error = abs(y_in[-1] - edge * edge)
    inner_deriv = 2 * edge + gprime(edge) + 0.0  # h'(edge) = 0 analytically
    derivative_mismatch = abs(inner_deriv - 2 * edge)
    # finite limit of y - 2 q^2 log r at the origin
    sing = y_in - 2 * q * q * np.log(inner)
    origin_limit = float(sing[0])
    if not math.isfinite(origin_limit) or abs(sing[1] - sing[0]) > 1.0:
        raise VerificationError(
            f"radial weight (q={q}, a={a}) lost its smooth origin limit")

    return RadialWeight(
        q=float(q), a=float(a), grid=grid,
        gamma=np.concatenate([gamma_in, gamma_out]),
        g=np.concatenate([g_in, np.zeros(outer.size)]),
        h=np.concatenate([h_in, np.zeros(outer.size)]),
        y=np.concatenate([y_in, y_out]),
        laplacian_lhs=np.concatenate([lap_in, lap_out]),
        laplacian_rhs=np.concatenate([rhs_in, rhs_out]),
        mass=mass,
        boundary_value_error=float(boundary_value_error),
        derivative_mismatch=float(derivative_mismatch),
        origin_limit=origin_limit,
    )


# ---------------------------------------------------------------------------
# cut-off interpolant
# ---------------------------------------------------------------------------

def _smoothstep(x: np.ndarray | float) -> np.ndarray | float:
    x = np.clip(x, 0.0, 1.0)
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x))

# max slope of the quintic smoothstep on [0, 1]
_SMOOTHSTEP_MAX_SLOPE = 15.0 / 8.0


def cutoff_interpolant_field(divisor: Divisor, payloads, z: complex,
                             margin: float) -> tuple[complex, float]:
    """Evaluate the glued interpolant F(z) = sum_node (translated payload)
    * eta(|z - center| - (radius + margin)) and the pointwise bound
    sup|eta'| * |payload(z)| on the transition annulus (0 elsewhere).

    eta is the fixed quintic smoothstep over the margin-wide band, so
    sup|eta'| = 1.875 / margin; requires the expanded discs to be pairwise
    disjoint.  Weight parameter must be 1 (rescale first)."""
    if margin <= 0:
        raise ParameterError(f"margin must be positive, got {margin!r}")
    if abs(divisor.alpha - 1.0) > 1e-12:
        raise ParameterError("cut-off field assumes alpha = 1; rescale first")
    ok, worst = disjointness_check(divisor, margin, expand=True)
    if not ok:
        raise PreconditionError(
            f"expanded discs overlap: pair {worst[:2]} by {worst[2]:.3g}")
    if len(payloads) != len(divisor):
        raise ParameterError("one payload coefficient vector per node required")
    z = complex(z)
    sup_slope = _SMOOTHSTEP_MAX_SLOPE / margin
    F = 0.0 + 0.0j
    bound = 0.0
    for lam, r, payload in zip(divisor.centers, divisor.radii, payloads):
        lam = complex(lam)
        expanded = r + margin
        s = abs(z - lam) - expanded
        if s >= 0:
            continue
        coeffs = np.asarray(getattr(payload, "coeffs", payload), dtype=complex)
        w = z - lam
        js = np.arange(coeffs.size)
        if w == 0:
            pw = complex(coeffs[0])
        else:
            pw = complex(np.sum(coeffs * np.exp(js * cmath.log(w)
                                                - 0.5 * gammaln(js + 1))))
        Q = cmath.exp(lam.conjugate() * z - abs(lam) ** 2 / 2) * pw
        if s <= -margin:
            eta = 1.0
        else:
            eta = 1.0 - _smoothstep((s + margin) / margin)
            bound = max(bound, sup_slope * abs(Q))
        F += Q * eta
    return F, bound
