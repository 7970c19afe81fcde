"""Three-dimensional almost contact B-metric manifolds over a Norden surface.

Coordinates are ``(t, u, v)``; ``xi = d_t`` and ``eta = dt`` in both
constructions, and ``phi`` acts as ``J`` on ``H = span(d_u, d_v)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import hyperdual as hd
from .surface import J_MATRIX, NordenSurface
from .tensor import MetricChart

__all__ = [
    "AcbManifold",
    "AxiomReport",
    "ConeDomainError",
    "PHI_MATRIX",
    "XI",
    "ETA",
    "associated_metric_at",
    "check_acb_axioms",
    "cone_of",
    "g_star_at",
    "s1_extension_of",
]

XI = np.array([1.0, 0.0, 0.0])
ETA = np.array([1.0, 0.0, 0.0])
PHI_MATRIX = np.zeros((3, 3))
PHI_MATRIX[1:, 1:] = J_MATRIX

AXIOM_TOL = 1e-10


class ConeDomainError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AcbManifold:
    kind: str  # "cone" | "s1_extension"
    base: NordenSurface
    metric: MetricChart
    phi: Callable[[Sequence], Sequence[Sequence]] = field(default=lambda p: PHI_MATRIX)
    xi: np.ndarray = field(default_factory=lambda: XI.copy())
    eta: np.ndarray = field(default_factory=lambda: ETA.copy())

    def g(self, p) -> np.ndarray:
        return self.metric.metric(p)

    def phi_at(self, p) -> np.ndarray:
        return np.array(self.phi(tuple(float(x) for x in p)), dtype=float)

    def phi_jet(self, p):
        """``(phi, dphi)`` with ``dphi[a, b, c] = d_a phi^b_c``."""
        val, grad, _ = hd.jets(self.phi(hd.seed(p)), 3)
        return val, grad

    def base_point(self, p) -> tuple:
        return (float(p[1]), float(p[2]))


def _cone_domain(p):
    if not p[0] > 0:
        raise ConeDomainError(f"cone points need t > 0, got t = {p[0]}")


def _block_metric(hh):
    return [
        [1.0, 0.0, 0.0],
        [0.0, hh[0][0], hh[0][1]],
        [0.0, hh[1][0], hh[1][1]],
    ]


def cone_of(base: NordenSurface) -> AcbManifold:
    """Cone ``R+ x N`` with ``g = dt^2 + t^2 h``."""

    def components(p):
        t = p[0]
        h, _ = base.components(p[1], p[2])
        t2 = t * t
        return _block_metric([[t2 * h[i][j] for j in range(2)] for i in range(2)])

    chart = MetricChart(3, components, domain=_cone_domain, name=f"cone({base.metric.name})")
    return AcbManifold("cone", base, chart)


def s1_extension_of(base: NordenSurface) -> AcbManifold:
    """``R x N`` with ``g = dt^2 + cos 2t h - sin 2t h~``."""

    def components(p):
        t = p[0]
        h, ht = base.components(p[1], p[2])
        c, s = hd.cos(2 * t), hd.sin(2 * t)
        return _block_metric([[c * h[i][j] - s * ht[i][j] for j in range(2)] for i in range(2)])

    chart = MetricChart(3, components, name=f"s1_extension({base.metric.name})")
    return AcbManifold("s1_extension", base, chart)


def g_star_at(m: AcbManifold, p, x, y) -> float:
    """``g*(x, y) = g(x, phi y)``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return float(x @ m.g(p) @ (m.phi_at(p) @ y))


def associated_metric_at(m: AcbManifold, p, x, y) -> float:
    """``g~(x, y) = g(x, phi y) + eta(x) eta(y)``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return g_star_at(m, p, x, y) + float((m.eta @ x) * (m.eta @ y))


@dataclass
class AxiomReport:
    tolerance: float
    points: list = field(default_factory=list)  # [(point, {axiom: residual})]

    @property
    def passed(self) -> bool:
        return all(r < self.tolerance for _, res in self.points for r in res.values())

    def failures(self) -> list:
        return [
            (p, name, r) for p, res in self.points for name, r in res.items() if not r < self.tolerance
        ]

    def max_residuals(self) -> dict:
        out: dict = {}
        for _, res in self.points:
            for k, r in res.items():
                out[k] = max(out.get(k, 0.0), r)
        return out


def axiom_residuals(m: AcbManifold, p) -> dict:
    g = m.g(p)
    phi = m.phi_at(p)
    xi, eta = m.xi, m.eta
    ident = np.eye(3)
    eig = np.linalg.eigvalsh(g)
    signature_ok = int(np.sum(eig > 0)) == 2 and int(np.sum(eig < 0)) == 1
    compat = phi.T @ g @ phi + g - np.outer(eta, eta)
    return {
        "phi_xi": float(np.max(np.abs(phi @ xi))),
        "phi_squared": float(np.max(np.abs(phi @ phi + ident - np.outer(xi, eta)))),
        "eta_phi": float(np.max(np.abs(eta @ phi))),
        "eta_xi": float(abs(eta @ xi - 1.0)),
        "compatibility": float(np.max(np.abs(compat))),
        "signature": 0.0 if signature_ok else float("inf"),
    }


def check_acb_axioms(m: AcbManifold, points: Iterable, tol: float = AXIOM_TOL) -> AxiomReport:
    report = AxiomReport(tol)
    for p in points:
        report.points.append((tuple(float(x) for x in p), axiom_residuals(m, p)))
    return report
