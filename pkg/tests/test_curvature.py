import math

import numpy as np
import pytest

from bmetric import cone_of, make_conformal_surface, s1_extension_of
from bmetric.classify import lee_forms_at, phi_basis_at
from bmetric.curvature import (
    KindMismatchError,
    Tolerances,
    curvature_table_at,
    lee_derivatives_at,
    pi_tensors_at,
    verify_cone_theorems,
    verify_s1_theorems,
)
from bmetric.surface import gaussian_curvature_at
from conftest import random_points


def table(m, p, seed=(1.0, 0.0)):
    return curvature_table_at(m, p, phi_basis_at(m, p, seed))


class TestTableFlat:
    def test_cone_t2(self, flat):
        tab = table(cone_of(flat), (2.0, 0.0, 0.0))
        assert tab.R(1, 2, 1, 2) == pytest.approx(-0.25, abs=1e-12)
        assert (tab.k13, tab.k23) == pytest.approx((0.0, 0.0), abs=1e-12)
        assert tab.rho[0, 0] == pytest.approx(-0.25, abs=1e-12)
        assert tab.rho[1, 1] == pytest.approx(0.25, abs=1e-12)
        assert tab.tau == pytest.approx(-0.5, abs=1e-12)
        assert tab.tau_star == pytest.approx(0.0, abs=1e-12)
        assert tab.tau_star2 == pytest.approx(tab.tau, abs=1e-12)

    def test_extension_pi_over_6(self, flat):
        tab = table(s1_extension_of(flat), (math.pi / 6, 0.0, 0.0))
        assert tab.R(1, 2, 1, 2) == pytest.approx(-1.0, abs=1e-12)
        assert (tab.k13, tab.k23) == pytest.approx((1.0, 1.0), abs=1e-12)
        assert tab.rho[2, 2] == pytest.approx(2.0, abs=1e-12)
        assert (tab.tau, tab.tau_star, tab.tau_star2) == pytest.approx((2.0, 0.0, -2.0), abs=1e-12)


class TestTableInvariants:
    def test_symmetries_and_trace(self, conformal, construction, rng):
        m = construction(conformal)
        for p in random_points(rng, 5, cone=True):
            tab = table(m, p)
            r = tab.r_phi_basis
            assert np.max(np.abs(r + np.transpose(r, (1, 0, 2, 3)))) < 1e-9
            bianchi = r + np.transpose(r, (1, 2, 0, 3)) + np.transpose(r, (2, 0, 1, 3))
            assert np.max(np.abs(bianchi)) < 1e-9
            assert np.max(np.abs(tab.rho - tab.rho.T)) < 1e-9
            ginv = np.linalg.inv(tab.g_phi_basis)
            assert np.einsum("ij,ij->", ginv, tab.rho) == pytest.approx(tab.tau, abs=1e-10)

    def test_golden_extension_oracle(self):
        # frozen from an independent sympy evaluation (tests/oracles.py)
        m = s1_extension_of(make_conformal_surface("0.3*u*v", "0.2*sin(u) + v^2"))
        p = (0.7, 0.3, -0.4)
        b = phi_basis_at(m, p)
        tab = curvature_table_at(m, p, b)
        lee = lee_forms_at(m, p, b)
        assert tab.R(1, 2, 1, 2) == pytest.approx(-0.9421406079467703, abs=1e-10)
        assert tab.R(1, 2, 1, 3) == pytest.approx(-1.5195079672768357, abs=1e-10)
        assert tab.R(1, 2, 2, 3) == pytest.approx(-0.13551421882710862, abs=1e-10)
        assert lee.theta == pytest.approx([-0.1355142188271086, -1.519507967276835, -2.0], abs=1e-10)

    def test_gauge_independence(self, conformal, construction, rng):
        m = construction(conformal)
        for p in random_points(rng, 3, cone=True):
            ref = table(m, p)
            for _ in range(4):
                tab = table(m, p, rng.normal(size=2))
                for name in ("tau", "tau_star", "tau_star2", "k12", "k13", "k23"):
                    assert getattr(tab, name) == pytest.approx(getattr(ref, name), abs=1e-9)


class TestPiTensors:
    def test_values(self, mixed_surface, construction):
        m = construction(mixed_surface)
        p = (0.5, 0.2, 0.1)
        b = phi_basis_at(m, p)
        assert pi_tensors_at(m, p, b.e1, b.e1, b.e2, b.e3) == (0.0, 0.0)
        pi1, pi2 = pi_tensors_at(m, p, b.e1, b.e2, b.e2, b.e1)
        assert pi1 == pytest.approx(-1.0, abs=1e-12)
        # g(e2, phi e2) = 0, g(e1, phi e2) = -g(e1, e1) = -1, g(e2, phi e1) = g(e2, e2) = -1
        assert pi2 == pytest.approx(-1.0, abs=1e-12)


class TestLeeDerivatives:
    def test_flat_extension_terms_vanish(self, flat):
        m = s1_extension_of(flat)
        p = (0.4, 0.1, 0.2)
        dth, dts = lee_derivatives_at(m, p, phi_basis_at(m, p))
        assert abs(dth[0, 0]) < 1e-8 and abs(dth[1, 1]) < 1e-8
        assert abs(dts[0, 0]) < 1e-8 and abs(dts[1, 1]) < 1e-8


class TestVerifySuites:
    def test_cone_flat(self, flat):
        report = verify_cone_theorems(cone_of(flat), [(0.5, 0, 0), (2.0, 0.3, 0.1)])
        assert report.passed, [c.name for c in report.failures()]
        assert all(c.residual < 1e-8 for c in report.checks if c.tier == "second_order")

    def test_cone_conformal_law(self, rng):
        s = make_conformal_surface("u^2", "0")
        m = cone_of(s)
        pts = random_points(rng, 5, cone=True)
        report = verify_cone_theorems(m, pts)
        assert report.passed
        for p in pts:
            kp = gaussian_curvature_at(s, m.base_point(p))
            assert table(m, p).R(1, 2, 1, 2) == pytest.approx((kp - 1) / p[0] ** 2, abs=1e-9)

    def test_extension(self, conformal, rng):
        report = verify_s1_theorems(s1_extension_of(conformal), random_points(rng, 4, cone=False))
        assert report.passed, [(c.name, c.residual) for c in report.failures()]
        third = [c for c in report.checks if c.tier == "third_order" and c.gating]
        assert third and all(c.residual < 1e-4 for c in third)

    def test_variants_are_informational(self, conformal, rng):
        report = verify_s1_theorems(s1_extension_of(conformal), random_points(rng, 2, cone=False))
        variants = [c for c in report.checks if "(variant)" in c.name]
        assert variants and not any(c.gating for c in variants)

    def test_flat_extension_variants_hold(self, flat):
        report = verify_s1_theorems(s1_extension_of(flat), [(0.0, 0, 0), (1.0, 0.2, 0.3)])
        assert report.passed
        kaehler = {c.name for c in report.checks if c.gating}
        assert "tau = 2(k'cos2t + 1)" in kaehler and "R1213 = 2 theta2 (variant)" in kaehler

    def test_kind_mismatch(self, flat):
        with pytest.raises(KindMismatchError):
            verify_cone_theorems(s1_extension_of(flat), [(1.0, 0, 0)])
        with pytest.raises(KindMismatchError):
            verify_s1_theorems(cone_of(flat), [(1.0, 0, 0)])

    def test_point_errors_isolated(self, flat):
        report = verify_cone_theorems(cone_of(flat), [(1.0, 0, 0), (-1.0, 0, 0), (2.0, 0, 0)])
        assert len(report.errors) == 1 and report.errors[0]["point"] == [-1.0, 0.0, 0.0]
        assert {c.point for c in report.checks} == {(1.0, 0.0, 0.0), (2.0, 0.0, 0.0)}
        assert not report.passed

    def test_tolerances_configurable(self, mixed_surface):
        m = cone_of(mixed_surface)
        assert verify_cone_theorems(m, [(1.3, 0.2, 0.1)]).passed
        assert not verify_cone_theorems(m, [(1.3, 0.2, 0.1)], Tolerances(second_order=1e-30)).passed

    def test_report_dict(self, flat):
        doc = verify_cone_theorems(cone_of(flat), [(1.0, 0, 0)]).to_dict()
        assert doc["passed"] and doc["kind"] == "cone"
        assert {"name", "lhs", "rhs", "residual", "tolerance"} <= set(doc["checks"][0])
