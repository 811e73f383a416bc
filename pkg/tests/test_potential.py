"""Redistribution functional, subharmonic checks, radial weights, cut-offs."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from fockdiv.divisor import Divisor, Region
from fockdiv.errors import (DomainError, ParameterError, PreconditionError)
from fockdiv.fock import CoefVec
from fockdiv.potential import (RedistributionCurve, build_radial_weight,
                               cutoff_interpolant_field,
                               redistribution_integral,
                               uniqueness_certificate, verify_psi_laplacian,
                               weight_v)


def disc_log_oracle(lam: complex, r: float, R: float) -> float:
    """int over D(lam, r) cap D(R) of log(R/|z|), by 1-D quadrature in
    polar coordinates about the origin: the arc of the circle |z| = rho
    inside D(lam, r) has angular width 2 acos((rho^2 + |lam|^2 - r^2) /
    (2 rho |lam|))."""
    d = abs(lam)

    def arc(rho):
        if rho == 0:
            return 2 * math.pi if d < r else 0.0
        if d == 0:
            return 2 * math.pi if rho < r else 0.0
        c = (rho * rho + d * d - r * r) / (2 * rho * d)
        if c >= 1:
            return 0.0
        if c <= -1:
            return 2 * math.pi
        return 2 * math.acos(c)

    pts = sorted({p for p in (abs(d - r), d + r) if 0 < p < R})
    val, _ = integrate.quad(
        lambda rho: rho * math.log(R / rho) * arc(rho), 0.0, R,
        points=pts or None, limit=400, epsabs=1e-12, epsrel=1e-10)
    return val


class TestRedistributionIntegral:
    def test_centered_disc_closed_form(self):
        # 2 pi int_0^r s log(R/s) ds
        r, R = 2.0, 10.0
        expect = 2 * math.pi * (r * r / 2 * math.log(R / r) + r * r / 4)
        X = Divisor(np.array([0j]), np.array([4]))
        assert redistribution_integral(X, R) == pytest.approx(expect,
                                                              rel=1e-10)

    def test_offcenter_inside_closed_form(self):
        # disc wholly inside, not meeting the origin: mean-value property
        lam, r, R = 5.0 + 0j, 2.0, 10.0
        expect = math.pi * r * r * math.log(R / abs(lam))
        X = Divisor(np.array([lam]), np.array([4]))
        assert redistribution_integral(X, R) == pytest.approx(expect,
                                                              rel=1e-10)

    def test_disc_fully_outside(self):
        X = Divisor(np.array([20.0 + 0j]), np.array([4]))
        assert redistribution_integral(X, 10.0) == 0.0

    @given(seed=st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=30, deadline=None)
    def test_matches_polar_oracle(self, seed):
        rng = np.random.default_rng(seed)
        lam = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
        r = rng.uniform(0.5, 4.0)
        R = rng.uniform(3.0, 12.0)
        X = Divisor(np.array([lam]), np.array([max(1, int(r * r))]))
        # use the divisor's own radius for the oracle
        r = float(X.radii[0])
        got = redistribution_integral(X, R)
        want = disc_log_oracle(lam, r, R)
        assert got == pytest.approx(want, rel=1e-6, abs=1e-8)

    def test_rejects_bad_radius(self):
        X = Divisor(np.array([0j]), np.array([1]))
        with pytest.raises(DomainError):
            redistribution_integral(X, 0.0)


class TestRedistributionCurve:
    def test_csv_header(self):
        c = RedistributionCurve(np.array([1.0, 2.0]), np.array([0.5, 1.5]))
        lines = c.csv().splitlines()
        assert lines[0] == "R,I,piR2_half,excess"
        assert len(lines) == 3

    def test_excess(self):
        c = RedistributionCurve(np.array([2.0]), np.array([10.0]))
        assert c.excess[0] == pytest.approx(10.0 - 2 * math.pi)

    def test_rejects_decreasing(self):
        with pytest.raises(ParameterError):
            RedistributionCurve(np.array([1.0, 2.0]), np.array([2.0, 1.0]))
        with pytest.raises(ParameterError):
            RedistributionCurve(np.array([2.0, 1.0]), np.array([1.0, 2.0]))


class TestUniquenessCertificate:
    def test_rejects_few_radii(self):
        X = Divisor(np.array([0j]), np.array([4]))
        W = Region.disc(6.0, 0.2)
        with pytest.raises(ParameterError):
            uniqueness_certificate(X, W, [5.0, 6.0])

    def test_covering_hypothesis_enforced(self):
        # a single far node leaves the window uncovered out to the collar
        X = Divisor(np.array([0j]), np.array([4]))
        W = Region.disc(20.0, 0.25)
        with pytest.raises(PreconditionError):
            uniqueness_certificate(X, W, [5.0, 8.0, 11.0, 14.0])

    def test_dense_lattice_grows(self):
        from fockdiv.divisor import lattice
        X = lattice(spacing=1.2, mult=2, extent=18.0)
        W = Region.disc(18.0, 0.3)
        report = uniqueness_certificate(X, W, [6.0, 8.0, 10.0, 12.0, 14.0])
        assert report.grows
        assert report.area_K == pytest.approx(0.0, abs=1e-9)
        assert report.slope >= 0.8 * report.slope_benchmark


class TestWeightV:
    def test_zero_outside_discs(self):
        X = Divisor(np.array([0j]), np.array([4]))
        assert weight_v(X, 3.0) == 0.0

    def test_neg_infinity_at_center(self):
        X = Divisor(np.array([1 + 1j]), np.array([4]))
        assert weight_v(X, 1 + 1j) == -math.inf

    def test_continuous_at_disc_boundary(self):
        X = Divisor(np.array([0j]), np.array([9]))
        assert weight_v(X, 3.0 - 1e-9) == pytest.approx(0.0, abs=1e-8)

    @given(x=st.floats(min_value=-4, max_value=4),
           y=st.floats(min_value=-4, max_value=4))
    @settings(max_examples=100, deadline=None)
    def test_nonpositive(self, x, y):
        X = Divisor(np.array([0j, 1 + 1j]), np.array([4, 2]))
        assert weight_v(X, complex(x, y)) <= 0.0


class TestPsiLaplacian:
    def test_empty_divisor_pure_quadratic(self):
        X = Divisor(np.array([], dtype=complex), np.array([], dtype=int))
        W = Region.disc(3.0, 0.05)
        rep = verify_psi_laplacian(X, W)
        assert rep.max_dev_outside <= rep.tol
        assert rep.n_inside == 0

    def test_single_node(self):
        X = Divisor(np.array([0j]), np.array([4]))
        W = Region.disc(5.0, 0.04)
        rep = verify_psi_laplacian(X, W)
        assert rep.ok
        assert rep.n_inside > 0 and rep.n_outside > 0

    def test_two_disjoint_nodes(self):
        X = Divisor(np.array([0j, 5.0 + 0j]), np.array([4, 4]))
        W = Region.disc(8.0, 0.04)
        rep = verify_psi_laplacian(X, W)
        assert rep.ok

    def test_coarse_grid_rejected(self):
        X = Divisor(np.array([0j]), np.array([4]))
        with pytest.raises(ParameterError):
            verify_psi_laplacian(X, Region.disc(5.0, 0.5))


class TestRadialWeight:
    @pytest.mark.parametrize("q,a", [(1, 1), (2, 4), (7, 2), (10, 10)])
    def test_glue_conditions(self, q, a):
        w = build_radial_weight(float(q), float(a))
        assert w.boundary_value_error <= 1e-6 * (q + a) ** 2
        assert w.derivative_mismatch <= 1e-9
        assert math.isfinite(w.origin_limit)

    @pytest.mark.parametrize("q,a", [(1, 1), (2, 4), (7, 2), (10, 10)])
    def test_laplacian_lower_bound_and_mass(self, q, a):
        w = build_radial_weight(float(q), float(a))
        assert np.all(w.laplacian_lhs >= w.laplacian_rhs - 1e-9)
        assert 0.0 < w.mass <= w.mass_bound + 1e-9

    def test_outside_is_quadratic(self):
        w = build_radial_weight(2.0, 3.0)
        edge = 5.0
        out = w.grid > edge
        assert np.allclose(w.y[out], w.grid[out] ** 2)

    def test_c1_across_edge_numeric(self):
        # one-sided difference quotients agree at the glue radius
        w = build_radial_weight(3.0, 2.0)
        edge = 5.0
        i = int(np.argmin(np.abs(w.grid - edge)))
        left = (w.y[i] - w.y[i - 1]) / (w.grid[i] - w.grid[i - 1])
        right = (w.y[i + 1] - w.y[i]) / (w.grid[i + 1] - w.grid[i])
        assert left == pytest.approx(2 * edge, rel=0.01)
        assert right == pytest.approx(2 * edge, rel=0.01)

    def test_origin_singularity_coefficient(self):
        # y - 2 q^2 log r tends to a finite limit: successive grid values
        # of the difference settle down near the origin
        w = build_radial_weight(2.0, 2.0)
        inner = w.grid[:16]
        sing = w.y[:16] - 2 * 4.0 * np.log(inner)
        assert np.max(np.abs(np.diff(sing))) <= 0.01

    def test_csv_header(self):
        w = build_radial_weight(1.0, 1.0, grid_n=64)
        assert w.csv().splitlines()[0] == \
            "r,gamma,g,h,y,laplacian_lhs,laplacian_rhs"

    def test_rejects_small_parameters(self):
        with pytest.raises(DomainError):
            build_radial_weight(0.5, 1.0)


class TestCutoffField:
    def _system(self):
        X = Divisor(np.array([0j, 8.0 + 0j]), np.array([4, 4]))
        payloads = [CoefVec(np.array([1.0 + 0j])),
                    CoefVec(np.array([0.0, 2.0 + 0j]))]
        return X, payloads

    def test_outside_everything_zero(self):
        X, payloads = self._system()
        F, bound = cutoff_interpolant_field(X, payloads, 4.0 + 20j, 0.5)
        assert F == 0 and bound == 0.0

    def test_deep_inside_matches_payload(self):
        X, payloads = self._system()
        F, bound = cutoff_interpolant_field(X, payloads, 0.0, 0.5)
        assert F == pytest.approx(1.0)
        assert bound == 0.0

    def test_transition_band_bound(self):
        X, payloads = self._system()
        z = 2.25 + 0j  # inside the band (2.0, 2.5) around the first disc
        F, bound = cutoff_interpolant_field(X, payloads, z, 0.5)
        assert bound > 0.0

    def test_overlapping_expansion_rejected(self):
        X = Divisor(np.array([0j, 3.0 + 0j]), np.array([4, 4]))
        payloads = [CoefVec(np.array([1.0 + 0j]))] * 2
        with pytest.raises(PreconditionError):
            cutoff_interpolant_field(X, payloads, 0.0, 0.5)

    def test_rejects_bad_margin_and_alpha(self):
        X, payloads = self._system()
        with pytest.raises(ParameterError):
            cutoff_interpolant_field(X, payloads, 0.0, 0.0)
        Y = Divisor(X.centers, X.mults, alpha=2.0)
        with pytest.raises(ParameterError):
            cutoff_interpolant_field(Y, payloads, 0.0, 0.5)
