"""Coefficient-space model of the Gaussian-weighted entire-function space.

Everything is expressed in the orthonormal monomial basis
e_k(z) = z^k / sqrt(k!) (weight parameter normalized to 1 internally;
callers rescale centers by sqrt(alpha)).  The weighted translation T_z
acts isometrically; its matrix in the basis is built column by column
from the coherent vector through an exact shift recurrence, so entries
carry no truncation error beyond floating point rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, ParameterError
from .specfun import _sigma_batch, find_tail_ratio_t, sigma


@dataclass(frozen=True)
class CoefVec:
    """Finite coefficient vector in the orthonormal basis."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ParameterError("coefficients must form a nonempty 1-D vector")
        if not np.all(np.isfinite(c)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree_bound(self) -> int:
        return self.coeffs.size

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    @classmethod
    def basis(cls, k: int, n: int) -> "CoefVec":
        if not 0 <= k < n:
            raise ParameterError(f"basis index {k} out of range for size {n}")
        c = np.zeros(n, dtype=complex)
        c[k] = 1.0
        return cls(c)


def coherent_coefficients(z: complex, n: int) -> np.ndarray:
    """Coefficients of T_z 1: conj(z)^k e^{-|z|^2/2} / sqrt(k!), in the log
    domain so large |z| does not overflow."""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    z = complex(z)
    if z == 0:
        out = np.zeros(n, dtype=complex)
        out[0] = 1.0
        return out
    k = np.arange(n)
    log_mod = k * math.log(abs(z)) - 0.5 * gammaln(k + 1) - 0.5 * abs(z) ** 2
    phase = np.exp(-1j * k * np.angle(z))
    return np.exp(log_mod) * phase


@dataclass(frozen=True)
class DisplacementMatrix:
    """Matrix D with D[k, j] = <T_z e_j, e_k>, k < nrows, j < ncols.

    Row truncation is exact: row k of column j+1 only references rows
    <= k of column j, so the stored entries equal the untruncated ones.
    The column tail bound records how much of each column's unit mass
    lies beyond the stored rows."""

    z: complex
    entries: np.ndarray

    @property
    def nrows(self) -> int:
        return self.entries.shape[0]

    @property
    def ncols(self) -> int:
        return self.entries.shape[1]

    @property
    def tail_bound(self) -> float:
        norms = np.sum(np.abs(self.entries) ** 2, axis=0)
        return float(np.clip(1.0 - norms.min(), 0.0, 1.0))

    def apply_adjoint(self, a: np.ndarray) -> np.ndarray:
        """(<f, T_z e_j>)_j for f with coefficients a."""
        return self.entries.conj().T @ np.asarray(a, dtype=complex)


# Roundoff in the column recurrence is amplified by roughly e^{|z|^2/2};
# beyond this threshold the multi-column build switches to extended
# precision (the single-column path is always the stable log-domain form).
_RECURRENCE_ZSQ_LIMIT = 32.0


def _displacement_columns_mp(z: complex, n: int, ncols: int) -> np.ndarray:
    """Extended-precision column recurrence for large |z|, where double
    precision loses ~ |z|^2/2 nats to error amplification."""
    import mpmath as mp

    zsq = abs(z) ** 2
    with mp.workdps(30 + int(math.ceil(0.25 * zsq))):
        mz = mp.mpc(z)
        col = [mp.conj(mz) ** k * mp.exp(-zsq / 2) / mp.sqrt(mp.factorial(k))
               for k in range(n)]
        out = np.empty((n, ncols), dtype=complex)
        out[:, 0] = [complex(c) for c in col]
        sq = [mp.sqrt(k) for k in range(n)]
        for j in range(ncols - 1):
            root = mp.sqrt(j + 1)
            nxt = [(-mz * col[0]) / root]
            nxt.extend((sq[k] * col[k - 1] - mz * col[k]) / root
                       for k in range(1, n))
            col = nxt
            out[:, j + 1] = [complex(c) for c in col]
    return out


def displacement_matrix(z: complex, n: int, ncols: int | None = None
                        ) -> DisplacementMatrix:
    """Build the translation matrix column by column.

    Column 0 is the coherent vector; column j+1 follows from
    T_z(zeta f) = (zeta - z) T_z f, i.e. multiply-by-zeta (a weighted
    shift in coefficients) conjugated by the translation."""
    if n < 1:
        raise ParameterError(f"matrix size must be positive, got {n}")
    z = complex(z)
    ncols = n if ncols is None else int(ncols)
    if not 1 <= ncols <= n:
        raise ParameterError(f"ncols must lie in [1, {n}], got {ncols}")
    if ncols > 1 and abs(z) ** 2 > _RECURRENCE_ZSQ_LIMIT:
        return DisplacementMatrix(z=z,
                                  entries=_displacement_columns_mp(z, n, ncols))
    out = np.empty((n, ncols), dtype=complex)
    out[:, 0] = coherent_coefficients(z, n)
    sq = np.sqrt(np.arange(n))
    for j in range(ncols - 1):
        col = out[:, j]
        shifted = np.empty(n, dtype=complex)
        shifted[0] = 0.0
        shifted[1:] = sq[1:] * col[:-1]
        out[:, j + 1] = (shifted - z * col) / math.sqrt(j + 1)
    return DisplacementMatrix(z=z, entries=out)


def restriction_values(f: CoefVec, lam: complex, m: int) -> np.ndarray:
    """(<f, T_lam e_k>)_{k<m}."""
    if m < 1:
        raise ParameterError(f"m must be positive, got {m}")
    n = f.degree_bound
    if m > n:
        raise ParameterError(f"m={m} exceeds truncation degree {n}")
    d = displacement_matrix(lam, n, ncols=m)
    return d.apply_adjoint(f.coeffs)


def quotient_norm_sq(f: CoefVec, lam: complex, m: int) -> float:
    """Squared distance from f to the functions vanishing to order m at lam."""
    v = restriction_values(f, lam, m)
    return float(np.vdot(v, v).real)


def basis_disc_norm(k: int, radius: float) -> float:
    """Mass of |e_k|^2 d(mu) inside the centered disc of the given radius."""
    if radius < 0:
        raise DomainError(f"radius must be nonnegative, got {radius!r}")
    return sigma(k, radius * radius)


def kernel_sampling_energy(z: complex, divisor) -> float:
    """Total quotient-norm energy of the normalized kernel T_z 1 against the
    divisor: sum over nodes of omega_{m-1}(alpha |z - center|^2)."""
    from .specfun import _omega_batch

    if len(divisor) == 0:
        return 0.0
    rho_sq = divisor.alpha * np.abs(z - divisor.centers) ** 2
    return float(_omega_batch(divisor.mults - 1, rho_sq).sum())


def disc_local_norm_sq(f: CoefVec, center: complex, radius: float) -> float:
    """Integral of |f|^2 d(mu) over the disc D(center, radius), up to the
    truncation tail: recenter and weight squared coefficients by the basis
    disc masses."""
    if radius < 0:
        raise DomainError(f"radius must be nonnegative, got {radius!r}")
    n = f.degree_bound
    if center == 0:
        b = f.coeffs
    else:
        b = restriction_values(f, center, n)
    ks = np.arange(n)
    weights = _sigma_batch(ks, np.full(n, radius * radius))
    return float(np.sum(np.abs(b) ** 2 * weights))


def local_concentration_check(f: CoefVec, m: int, eta: float,
                              a_step: float = 0.1,
                              k_max: int = 200) -> tuple[bool, float]:
    """Check the local-concentration mechanism: if the first m squared
    coefficients carry at most eta/2 and the disc D(sqrt(m)) carries at
    most 1, a slightly smaller disc carries at most eta.

    Scans the smallest shrink a on a grid achieving the eta bound and
    reports whether the uniform a(eta) predicted by the tail-ratio search
    suffices.  Returns (passes, a_used)."""
    if not (0.0 < eta <= 1.0):
        raise DomainError(f"eta must lie in (0, 1], got {eta!r}")
    if m < 1:
        raise ParameterError(f"m must be positive, got {m}")
    head = float(np.sum(np.abs(f.coeffs[:m]) ** 2))
    if head > eta / 2 + 1e-12:
        raise ParameterError(
            f"first {m} squared coefficients carry {head:.3g} > eta/2")
    if disc_local_norm_sq(f, 0.0, math.sqrt(m)) > 1.0 + 1e-9:
        raise ParameterError("disc norm on D(sqrt(m)) exceeds 1")
    # The tail-ratio search guarantees sigma_k(m - a sqrt(m)) <=
    # 2 epsilon sigma_k(m); eta/4 leaves room for that factor of 2.
    a_pred = find_tail_ratio_t(eta / 4, k_max=min(k_max, max(10, 2 * m)))
    root = math.sqrt(m)
    a = 0.0
    while a < root:
        if disc_local_norm_sq(f, 0.0, root - a) <= eta:
            return a <= a_pred + 1e-12, a
        a += a_step
    return False, float("nan")
