"""Two-dimensional Norden surfaces (N, J, h) in coordinates (u, v).

The base model is the flat plane ``h = du^2 - dv^2`` with ``J d_u = d_v``.
Conformal models rescale it by ``e^{2a}(cos 2b h + sin 2b h~)`` for scalar
fields ``a(u, v)``, ``b(u, v)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Union

import numpy as np

from . import hyperdual as hd
from . import kernels
from .expr import ScalarFieldExpr, parse_expr
from .tensor import MetricChart, TensorComponents

__all__ = [
    "FLAT_H",
    "FLAT_H_TILDE",
    "J_MATRIX",
    "NordenSurface",
    "SurfaceFTensor",
    "associated_gaussian_curvature_at",
    "fprime_and_lee_at",
    "gaussian_curvature_at",
    "make_conformal_surface",
    "make_flat_surface",
    "nabla_J_square_norm_at",
    "w1_reconstruction",
]

# J^i_j: column j is J applied to d_j
J_MATRIX = np.array([[0.0, -1.0], [1.0, 0.0]])
FLAT_H = np.array([[1.0, 0.0], [0.0, -1.0]])
FLAT_H_TILDE = FLAT_H @ J_MATRIX  # h~(x, y) = h(x, J y)


@dataclass(frozen=True, eq=False)
class NordenSurface:
    kind: str  # "flat" | "conformal"
    a_expr: ScalarFieldExpr
    b_expr: ScalarFieldExpr
    metric: MetricChart

    def jtensor(self, p=None) -> np.ndarray:
        return J_MATRIX.copy()

    def h(self, p) -> np.ndarray:
        return self.metric.metric(p)

    def h_tilde(self, p) -> np.ndarray:
        return self.h(p) @ J_MATRIX

    def components(self, u, v):
        """``(h, h~)`` as nested lists, evaluable over hyper-duals."""
        return _conformal_components(self.a_expr, self.b_expr, u, v)

    @property
    def is_kahler(self) -> bool:
        return self.kind == "flat"

    @cached_property
    def associated_chart(self) -> MetricChart:
        """Chart of the associated Norden metric ``h~``."""
        return MetricChart(
            2,
            lambda p: self.components(p[0], p[1])[1],
            name=f"associated({self.metric.name})",
        )


def _conformal_components(a_expr, b_expr, u, v):
    a = a_expr(u, v)
    b = b_expr(u, v)
    scale = hd.exp(2 * a)
    c = scale * hd.cos(2 * b)
    s = scale * hd.sin(2 * b)
    # e^{2a}(cos2b h + sin2b h~) over the flat model
    h = [
        [c * FLAT_H[i, j] + s * FLAT_H_TILDE[i, j] for j in range(2)] for i in range(2)
    ]
    # h~ = h J  ->  e^{2a}(cos2b h~ - sin2b h)
    ht = [
        [c * FLAT_H_TILDE[i, j] - s * FLAT_H[i, j] for j in range(2)] for i in range(2)
    ]
    return h, ht


def _as_expr(e: Union[str, ScalarFieldExpr]) -> ScalarFieldExpr:
    return e if isinstance(e, ScalarFieldExpr) else parse_expr(e)


def make_flat_surface() -> NordenSurface:
    """Flat Kaehler-Norden plane ``h = du^2 - dv^2``."""
    zero = parse_expr("0")
    chart = MetricChart(2, lambda p: FLAT_H.tolist(), name="flat")
    return NordenSurface("flat", zero, zero, chart)


def make_conformal_surface(
    a: Union[str, ScalarFieldExpr], b: Union[str, ScalarFieldExpr]
) -> NordenSurface:
    a_expr, b_expr = _as_expr(a), _as_expr(b)

    def components(p):
        return _conformal_components(a_expr, b_expr, p[0], p[1])[0]

    chart = MetricChart(2, components, name=f"conformal(a={a_expr}, b={b_expr})")
    return NordenSurface("conformal", a_expr, b_expr, chart)


def gaussian_curvature_at(surface: NordenSurface, p, basis: Optional[np.ndarray] = None) -> float:
    """Gaussian curvature ``k' = R'(x, y, y, x) / (h(x,x) h(y,y) - h(x,y)^2)``.

    ``basis`` holds two tangent vectors as columns (default: coordinate basis).
    """
    return _sectional(surface.metric, p, basis)


def associated_gaussian_curvature_at(surface: NordenSurface, p) -> float:
    """Gaussian curvature of the associated metric ``h~``."""
    return _sectional(surface.associated_chart, p, None)


def _sectional(chart: MetricChart, p, basis) -> float:
    geo = chart.geometry(p)
    x, y = (np.eye(2) if basis is None else np.asarray(basis, dtype=float)).T
    h = geo.g
    num = np.einsum("ijkl,i,j,k,l->", geo.riemann, x, y, y, x)
    den = (x @ h @ x) * (y @ h @ y) - (x @ h @ y) ** 2
    if abs(den) < kernels.DEGENERACY_TOL:
        raise kernels.DegenerateMetricError("degenerate tangent plane")
    return float(num / den)


@dataclass
class SurfaceFTensor:
    f: TensorComponents  # F'_abc in coordinates
    theta: np.ndarray  # theta'_c in coordinates
    w1_residual: float  # max |F' - reconstruction from theta'|


def _nabla_j(surface: NordenSurface, p) -> tuple:
    geo = surface.metric.geometry(p)
    nabla_j = kernels.nabla_endomorphism(geo.gamma, J_MATRIX, np.zeros((2, 2, 2)))
    return geo, nabla_j


def w1_reconstruction(h: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """F' rebuilt from its Lee form for a W1 structure."""
    hj = h @ J_MATRIX  # hj[a, b] = h(d_a, J d_b)
    tj = theta @ J_MATRIX  # tj[b] = theta(J d_b)
    return 0.5 * (
        np.einsum("ab,c->abc", h, theta)
        + np.einsum("ab,c->abc", hj, tj)
        + np.einsum("ac,b->abc", h, theta)
        + np.einsum("ac,b->abc", hj, tj)
    )


def fprime_and_lee_at(surface: NordenSurface, p) -> SurfaceFTensor:
    """``F'(x, y, z) = h((nabla'_x J) y, z)`` and ``theta'(z) = h^{ij} F'(e_i, e_j, z)``."""
    geo, nabla_j = _nabla_j(surface, p)
    f = np.einsum("dc,adb->abc", geo.g, nabla_j)
    theta = np.einsum("ab,abc->c", geo.ginv, f)
    residual = float(np.max(np.abs(f - w1_reconstruction(geo.g, theta))))
    return SurfaceFTensor(TensorComponents(f, ("down",) * 3), theta, residual)


def nabla_J_square_norm_at(surface: NordenSurface, p, basis: Optional[np.ndarray] = None) -> float:
    """``h^{ij} h^{ks} h((nabla'_i J) e_k, (nabla'_j J) e_s)`` in the given basis."""
    geo, nabla_j = _nabla_j(surface, p)
    h, hinv = geo.g, geo.ginv
    if basis is not None:
        e = np.asarray(basis, dtype=float)
        inv = np.linalg.inv(e)
        nabla_j = np.einsum("abc,ai,bm,cj->imj", nabla_j, e, inv.T, e)
        h = e.T @ h @ e
        hinv = np.linalg.inv(h)
    return float(np.einsum("ij,ks,mn,imk,jns->", hinv, hinv, h, nabla_j, nabla_j))
