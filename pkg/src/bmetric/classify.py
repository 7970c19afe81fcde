"""phi-bases, the structure tensor F, Lee forms and the F1/F4/F5 split.

Component tables use the labelling ``e1, e2 = phi e1, e3 = xi`` with
``g(e1, e1) = -g(e2, e2) = g(e3, e3) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .acb import AcbManifold
from .tensor import TensorComponents

__all__ = [
    "CLASS_TOL",
    "ClassDecomposition",
    "IsotropicSeedError",
    "LeeForms",
    "PhiBasis",
    "decompose_f",
    "f_coordinates_at",
    "f_tensor_at",
    "lee_forms_at",
    "lee_forms_coordinates",
    "lee_forms_from_table",
    "nabla_phi_at",
    "nabla_phi_square_norm_at",
    "phi_basis_at",
]

CLASS_TOL = 1e-8
BASIS_TOL = 1e-10


class IsotropicSeedError(ValueError):
    pass


@dataclass
class PhiBasis:
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray

    @property
    def frame(self) -> np.ndarray:
        """Frame vectors as columns."""
        return np.column_stack([self.e1, self.e2, self.e3])

    def residuals(self, m: AcbManifold, p) -> dict:
        g, phi = m.g(p), m.phi_at(p)
        e = self.frame
        gram = e.T @ g @ e
        return {
            "phi_e1": float(np.max(np.abs(phi @ self.e1 - self.e2))),
            "phi_e2": float(np.max(np.abs(phi @ self.e2 + self.e1))),
            "e3_xi": float(np.max(np.abs(self.e3 - m.xi))),
            "gram": float(np.max(np.abs(gram - np.diag([1.0, -1.0, 1.0])))),
        }


def _seed_vector(seed) -> np.ndarray:
    s = np.asarray(seed, dtype=float)
    if s.shape == (2,):
        return np.concatenate([[0.0], s])
    if s.shape != (3,):
        raise ValueError("seed must have 2 (u, v) or 3 (t, u, v) components")
    return s


def phi_basis_at(m: AcbManifold, p, seed: Sequence[float] = (1.0, 0.0)) -> PhiBasis:
    """phi-basis generated by a horizontal seed vector.

    The seed is rotated inside its phi-plane, ``e = cos(s) x + sin(s) phi x`` with
    ``2s = atan2(g(x, phi x), g(x, x))``, so that ``g(e, e) > 0`` and
    ``g(e, phi e) = 0``; then ``e1 = e / |e|``, ``e2 = phi e1``, ``e3 = xi``.
    """
    x = _seed_vector(seed)
    if abs(m.eta @ x) > BASIS_TOL:
        raise ValueError("seed must lie in H = ker(eta)")
    g, phi = m.g(p), m.phi_at(p)
    phix = phi @ x
    a = x @ g @ x
    b = x @ g @ phix
    if math.hypot(a, b) < 1e-12:
        raise IsotropicSeedError("isotropic seed (g(x,x) = g(x,phi x) = 0); choose a different seed")
    s = 0.5 * math.atan2(b, a)
    e = math.cos(s) * x + math.sin(s) * phix
    if e @ g @ e < 0:
        e = phi @ e
    e1 = e / math.sqrt(abs(e @ g @ e))
    return PhiBasis(e1, phi @ e1, m.xi.astype(float).copy())


def nabla_phi_at(m: AcbManifold, p) -> np.ndarray:
    """``out[a, b, c] = (nabla_a phi)^b_c`` in coordinates."""
    geo = m.metric.geometry(p)
    phi, dphi = m.phi_jet(geo.point)
    return kernels.nabla_endomorphism(geo.gamma, phi, dphi)


def f_coordinates_at(m: AcbManifold, p) -> TensorComponents:
    """``F_abc = g((nabla_a phi) d_b, d_c)`` in coordinates."""
    g = m.metric.geometry(p).g
    return TensorComponents(np.einsum("dc,adb->abc", g, nabla_phi_at(m, p)), ("down",) * 3)


def f_tensor_at(m: AcbManifold, p, basis: PhiBasis) -> TensorComponents:
    return f_coordinates_at(m, p).to_frame(basis.frame)


@dataclass
class LeeForms:
    theta: np.ndarray
    theta_star: np.ndarray
    omega: np.ndarray
    # max |(table formulas) - (contractions)|
    table_discrepancy: float = 0.0


def lee_forms_coordinates(m: AcbManifold, p) -> tuple:
    """Coordinate components of ``(theta, theta*, omega)``.

    ``theta`` traces F over ``H`` only, i.e. the full ``g^{ab} F_abc`` minus the
    ``xi xi`` term ``omega``.
    """
    geo = m.metric.geometry(p)
    f = f_coordinates_at(m, p).data
    phi = m.phi_at(p)
    xi = m.xi
    omega = np.einsum("a,b,abc->c", xi, xi, f)
    theta = np.einsum("ab,abc->c", geo.ginv, f) - omega
    theta_star = np.einsum("ab,db,adc->c", geo.ginv, phi, f)
    return theta, theta_star, omega


# Table formulas are stated with xi as the first basis vector; map those labels
# (1, 2, 3) onto ours (e3, e1, e2).
_TABLE_INDEX = {1: 2, 2: 0, 3: 1}


def lee_forms_from_table(f: np.ndarray) -> tuple:
    """Lee form components read off the phi-basis components of F."""
    f = np.asarray(f, dtype=float)

    def F(i, j, k):
        return f[_TABLE_INDEX[i], _TABLE_INDEX[j], _TABLE_INDEX[k]]

    table = {
        "theta": (F(2, 2, 1) - F(3, 3, 1), F(2, 2, 2) - F(3, 3, 2), F(2, 2, 3) - F(3, 2, 2)),
        "theta_star": (F(2, 3, 1) + F(3, 2, 1), F(2, 2, 3) + F(3, 2, 2), F(2, 2, 2) + F(3, 3, 2)),
        "omega": (0.0, F(1, 1, 2), F(1, 1, 3)),
    }
    out = []
    for key in ("theta", "theta_star", "omega"):
        comps = np.zeros(3)
        for label, value in zip((1, 2, 3), table[key]):
            comps[_TABLE_INDEX[label]] = value
        out.append(comps)
    return tuple(out)


def lee_forms_at(m: AcbManifold, p, basis: PhiBasis) -> LeeForms:
    frame = basis.frame
    theta, theta_star, omega = (frame.T @ c for c in lee_forms_coordinates(m, p))
    f = f_tensor_at(m, p, basis).data
    table = lee_forms_from_table(f)
    disc = max(
        float(np.max(np.abs(a - b))) for a, b in zip(table, (theta, theta_star, omega))
    )
    return LeeForms(theta, theta_star, omega, disc)


@dataclass
class ClassDecomposition:
    f_components: np.ndarray
    f1_part: np.ndarray
    f4_part: np.ndarray
    f5_part: np.ndarray
    residual: np.ndarray
    residual_norm: float
    label: tuple
    tolerance: float

    @property
    def label_text(self) -> str:
        return "+".join(self.label)

    def part_norm(self, name: str) -> float:
        return float(np.max(np.abs(getattr(self, f"{name}_part"))))


def _f1_pattern(theta) -> np.ndarray:
    # (x1 theta_1 - x2 theta_2)(y1 z1 + y2 z2)
    out = np.zeros((3, 3, 3))
    for i, coef in ((0, theta[0]), (1, -theta[1])):
        out[i, 0, 0] = coef
        out[i, 1, 1] = coef
    return out


def _f4_pattern(theta3) -> np.ndarray:
    # theta_3 / 2 {x1 (y3 z1 + y1 z3) - x2 (y3 z2 + y2 z3)}
    out = np.zeros((3, 3, 3))
    half = 0.5 * theta3
    out[0, 2, 0] = out[0, 0, 2] = half
    out[1, 2, 1] = out[1, 1, 2] = -half
    return out


def _f5_pattern(theta_star3) -> np.ndarray:
    # theta*_3 / 2 {x1 (y3 z2 + y2 z3) + x2 (y3 z1 + y1 z3)}
    out = np.zeros((3, 3, 3))
    half = 0.5 * theta_star3
    out[0, 2, 1] = out[0, 1, 2] = half
    out[1, 2, 0] = out[1, 0, 2] = half
    return out


def decompose_f(f, lee: LeeForms, tol: float = CLASS_TOL) -> ClassDecomposition:
    """Split phi-basis F into its F1, F4 and F5 parts plus an undecomposed residual.

    Norms are max-abs over the 27 components.
    """
    f = np.asarray(getattr(f, "data", f), dtype=float)
    f1 = _f1_pattern(lee.theta)
    f4 = _f4_pattern(lee.theta[2])
    f5 = _f5_pattern(lee.theta_star[2])
    residual = f - f1 - f4 - f5
    res_norm = float(np.max(np.abs(residual)))
    if float(np.max(np.abs(f))) < tol:
        label: tuple = ("F0",)
    else:
        label = tuple(
            name
            for name, part in (("F1", f1), ("F4", f4), ("F5", f5))
            if float(np.max(np.abs(part))) >= tol
        )
        if res_norm >= tol:
            label = label + ("complement",)
    return ClassDecomposition(f, f1, f4, f5, residual, res_norm, label, tol)


def nabla_phi_square_norm_at(m: AcbManifold, p) -> float:
    """``g^{ij} g^{ks} g((nabla_i phi) e_k, (nabla_j phi) e_s)`` in coordinates."""
    geo = m.metric.geometry(p)
    nphi = nabla_phi_at(m, p)
    ginv = geo.ginv
    return float(np.einsum("ij,ks,mn,imk,jns->", ginv, ginv, geo.g, nphi, nphi))
