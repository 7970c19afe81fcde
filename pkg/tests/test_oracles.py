"""Re-derive a few frozen golden values with the symbolic oracle (2D only, to stay fast)."""

import math

import numpy as np
import pytest

from bmetric import cone_of, make_conformal_surface, make_flat_surface
from bmetric.surface import gaussian_curvature_at
from bmetric.tensor import christoffel_at
from oracles import conformal_h, fd_gaussian_curvature, sympy_geometry, sympy_metric

sympy = pytest.importorskip("sympy")


@pytest.mark.parametrize(
    "a, b, q, frozen",
    [
        ("u^2", "0", (0.0, 0.0), -2.0),
        ("u^2", "0", (0.3, -0.2), -1.6705404228225442),
        ("0.3*u*v", "0.2*sin(u)+v^2", (0.3, -0.4), -1.2960198440820938),
    ],
)
def test_gaussian_curvature_frozen_values(a, b, q, frozen):
    h, coords = sympy_metric("surface", a, b)
    g, _, r = sympy_geometry(h, coords, q)
    k = r[0, 1, 1, 0] / (g[0, 0] * g[1, 1] - g[0, 1] ** 2)
    assert k == pytest.approx(frozen, abs=1e-12)
    assert gaussian_curvature_at(make_conformal_surface(a, b), q) == pytest.approx(k, abs=1e-12)


def test_difference_oracle_agrees_with_symbolic():
    k = fd_gaussian_curvature(conformal_h(lambda u, v: 0.3 * u * v, lambda u, v: 0.2 * math.sin(u) + v * v), (0.3, -0.4))
    assert k == pytest.approx(-1.2960198440820938, abs=1e-4)


def test_cone_christoffel_symbolic():
    g, coords = sympy_metric("cone", "0", "0")
    _, gam, _ = sympy_geometry(g, coords, (2.0, 0.0, 0.0))
    engine = christoffel_at(cone_of(make_flat_surface()).metric, (2.0, 0.0, 0.0)).data
    assert np.max(np.abs(gam - engine)) < 1e-14
    assert gam[0, 1, 1] == -2.0
