import numpy as np
import pytest

from bmetric import cone_of, make_flat_surface, s1_extension_of
from bmetric.tensor import (
    BasisMismatchError,
    DegenerateMetricError,
    MetricChart,
    TensorComponents,
    christoffel_at,
    contract,
    cov_deriv_oneform_at,
    raise_lower,
    riemann_at,
)
from conftest import random_points

CONST = MetricChart(2, lambda p: [[1.0, 0.0], [0.0, -1.0]], name="const")


class TestChristoffel:
    def test_constant_metric(self):
        assert not christoffel_at(CONST, (0.3, 0.4)).data.any()

    def test_cone_flat_values(self):
        gam = christoffel_at(cone_of(make_flat_surface()).metric, (2.0, 0.1, -0.2)).data
        assert gam[1, 0, 1] == pytest.approx(0.5, abs=1e-15)
        # frozen from a symbolic Koszul evaluation
        assert gam[0, 1, 1] == pytest.approx(-2.0, abs=1e-14)
        assert gam[0, 2, 2] == pytest.approx(2.0, abs=1e-14)

    def test_torsion_free(self, mixed_surface, rng):
        chart = s1_extension_of(mixed_surface).metric
        for p in random_points(rng, 5, cone=False):
            gam = christoffel_at(chart, p).data
            assert np.array_equal(gam, np.transpose(gam, (0, 2, 1)))

    def test_metric_compatibility(self, mixed_surface, construction, rng):
        chart = construction(mixed_surface).metric
        for p in random_points(rng, 10, cone=True):
            geo = chart.geometry(p)
            # nabla_k g_ij = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il
            low = np.einsum("lki,lj->kij", geo.gamma, geo.g)
            assert np.max(np.abs(geo.dg - low - np.transpose(low, (0, 2, 1)))) < 1e-9

    def test_degenerate_metric(self):
        chart = MetricChart(2, lambda p: [[p[0], 0.0], [0.0, 1.0]])
        with pytest.raises(DegenerateMetricError):
            christoffel_at(chart, (0.0, 1.0))

    def test_dimension_checked(self):
        with pytest.raises(ValueError):
            CONST.metric((1.0, 2.0, 3.0))
        with pytest.raises(ValueError):
            MetricChart(4, lambda p: np.eye(4))


class TestRiemann:
    def test_constant_metric(self):
        assert not riemann_at(CONST, (0.0, 0.0)).data.any()

    def test_cone_flat_coordinate_value(self):
        r = riemann_at(cone_of(make_flat_surface()).metric, (2.0, 0.0, 0.0)).data
        assert r[1, 2, 1, 2] == pytest.approx(-4.0, abs=1e-12)

    def test_symmetries(self, conformal, construction, rng):
        chart = construction(conformal).metric
        for p in random_points(rng, 5, cone=True):
            r = riemann_at(chart, p).data
            assert np.max(np.abs(r + np.transpose(r, (1, 0, 2, 3)))) < 1e-9
            assert np.max(np.abs(r + np.transpose(r, (0, 1, 3, 2)))) < 1e-9
            assert np.max(np.abs(r - np.transpose(r, (2, 3, 0, 1)))) < 1e-9
            bianchi = r + np.transpose(r, (1, 2, 0, 3)) + np.transpose(r, (2, 0, 1, 3))
            assert np.max(np.abs(bianchi)) < 1e-9

    def test_matches_symbolic_oracle(self):
        from bmetric import make_conformal_surface

        # frozen from a sympy evaluation of the same metric (tests/oracles.py)
        chart = s1_extension_of(make_conformal_surface("0.3*u*v", "0.2*sin(u) + v^2")).metric
        r = riemann_at(chart, (0.7, 0.3, -0.4)).data
        assert r[1, 2, 1, 2] == pytest.approx(-0.8157880093701597, abs=1e-12)
        assert r[1, 2, 1, 0] == pytest.approx(-1.152985883322897, abs=1e-12)
        assert r[0, 1, 1, 0] == pytest.approx(0.5323112620886198, abs=1e-12)
        chart = cone_of(make_conformal_surface("u^2", "0")).metric
        r = riemann_at(chart, (1.0, 0.3, -0.2)).data
        assert r[1, 2, 1, 2] == pytest.approx(-3.8277641408039607, abs=1e-12)


class TestJets:
    def test_hyperdual_vs_finite_differences(self, mixed_surface, construction, rng):
        chart = construction(mixed_surface).metric
        p = np.array(random_points(rng, 1, cone=True)[0])
        g, dg, ddg = chart.jet(p)
        h = 1e-5
        for k in range(3):
            e = np.zeros(3)
            e[k] = h
            fd = (chart.metric(p + e) - chart.metric(p - e)) / (2 * h)
            assert np.allclose(dg[k], fd, rtol=1e-6, atol=1e-8)
            _, dgp, _ = chart.jet(p + e)
            _, dgm, _ = chart.jet(p - e)
            assert np.allclose(ddg[k], (dgp - dgm) / (2 * h), rtol=1e-6, atol=1e-8)
        assert np.array_equal(ddg, np.transpose(ddg, (1, 0, 2, 3)))


class TestCovariantDerivative:
    def test_constant_field_constant_metric(self):
        d = cov_deriv_oneform_at(CONST, lambda q: [1.0, 2.0], (0.1, 0.2))
        assert np.max(np.abs(d.data)) < 1e-12

    def test_t_dt_on_cone(self):
        chart = cone_of(make_flat_surface()).metric
        d = cov_deriv_oneform_at(chart, lambda q: [q[0], 0.0, 0.0], (1.5, 0.2, 0.1))
        assert d.data[0, 0] == pytest.approx(1.0, abs=1e-10)

    def test_gradient_of_function_is_symmetric(self, mixed_surface):
        chart = s1_extension_of(mixed_surface).metric

        def df(q):
            t, u, v = q
            return [np.cos(t) * u * v, np.sin(t) * v, np.sin(t) * u]

        d = cov_deriv_oneform_at(chart, df, (0.4, 0.3, -0.2)).data
        assert np.max(np.abs(d - d.T)) < 1e-8

    def test_step_must_be_positive(self):
        with pytest.raises(ValueError):
            cov_deriv_oneform_at(CONST, lambda q: [0.0, 0.0], (0.0, 0.0), step=0.0)


class TestAlgebra:
    def test_lower_raise_identity(self, mixed_surface):
        chart = cone_of(mixed_surface).metric
        p = (1.2, 0.1, 0.3)
        x = TensorComponents(np.array([0.3, -1.0, 2.0]), ("up",))
        back = raise_lower(chart, p, raise_lower(chart, p, x, 0), 0)
        assert np.max(np.abs(back.data - x.data)) < 1e-12
        assert back.slots == ("up",)

    def test_slot_out_of_range(self):
        x = TensorComponents(np.zeros(2), ("up",))
        with pytest.raises(IndexError):
            raise_lower(CONST, (0.0, 0.0), x, 1)
        with pytest.raises(IndexError):
            contract(TensorComponents(np.zeros((2, 2)), ("up", "down")), 0, 0)

    def test_basis_mismatch(self):
        a = TensorComponents(np.zeros(3), ("down",))
        b = TensorComponents(np.zeros(3), ("down",), basis="phi")
        with pytest.raises(BasisMismatchError):
            a + b
        with pytest.raises(BasisMismatchError):
            raise_lower(CONST, (0.0, 0.0), TensorComponents(np.zeros(2), ("down",), basis="phi"), 0)

    def test_pi1_trace(self, mixed_surface):
        chart = s1_extension_of(mixed_surface).metric
        p = (0.3, 0.2, 0.1)
        g = chart.metric(p)
        pi1 = np.einsum("yz,xw->xyzw", g, g) - np.einsum("xz,yw->xyzw", g, g)
        traced = contract(TensorComponents(pi1, ("down",) * 4), 0, 3, np.linalg.inv(g))
        # direct summation over the coordinate basis
        direct = np.zeros((3, 3))
        ginv = np.linalg.inv(g)
        for i in range(3):
            for j in range(3):
                direct += ginv[i, j] * pi1[i, :, :, j]
        assert np.allclose(traced.data, direct, atol=1e-12)
        assert np.allclose(traced.data, 2 * g, atol=1e-12)

    def test_mixed_trace(self):
        t = TensorComponents(np.arange(9.0).reshape(3, 3), ("up", "down"))
        assert contract(t, 0, 1).data == pytest.approx(12.0)
        with pytest.raises(ValueError):
            contract(TensorComponents(np.eye(3), ("down", "down")), 0, 1)
