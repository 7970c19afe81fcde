"""Pseudo-Riemannian machinery on a single chart of dimension 2 or 3.

Metric components are evaluated over hyper-dual coordinates, which gives the
metric together with its first and second partial derivatives in one pass.
Christoffel symbols and the curvature tensor are assembled from those jets by
the kernels in :mod:`bmetric.kernels`.

Index convention: ``R[i, j, k, l] = R(e_i, e_j, e_k, e_l) = g(R(e_i, e_j) e_k, e_l)``
with ``R(x, y) = nabla_x nabla_y - nabla_y nabla_x - nabla_[x, y]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from . import hyperdual as hd
from . import kernels
from .kernels import DegenerateMetricError

__all__ = [
    "BasisMismatchError",
    "DegenerateMetricError",
    "MetricChart",
    "PointGeometry",
    "TensorComponents",
    "christoffel_at",
    "contract",
    "cov_deriv_oneform_at",
    "raise_lower",
    "riemann_at",
]

RICHARDSON_STEPS = (1e-4, 5e-5)


class BasisMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MetricChart:
    """Metric ``g_ij`` on a chart.

    ``components`` maps a coordinate tuple (floats or hyper-duals) to a
    ``dim x dim`` nested sequence.  ``domain`` optionally validates a point
    before evaluation and raises ``ValueError`` outside the chart.
    """

    dim: int
    components: Callable[[Sequence], Sequence[Sequence]]
    domain: Optional[Callable[[Sequence[float]], None]] = None
    name: str = ""

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError("chart dimension must be 2 or 3")

    def check_point(self, p: Sequence[float]) -> tuple:
        p = tuple(float(x) for x in p)
        if len(p) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(p)}")
        if self.domain is not None:
            self.domain(p)
        return p

    def metric(self, p: Sequence[float]) -> np.ndarray:
        p = self.check_point(p)
        return np.array(self.components(p), dtype=float)

    def jet(self, p: Sequence[float]):
        """``(g, dg, ddg)`` at ``p``; ``dg[k, i, j] = d_k g_ij``, ``ddg[m, k, i, j]``."""
        p = self.check_point(p)
        return hd.jets(self.components(hd.seed(p)), self.dim)

    def geometry(self, p: Sequence[float]) -> "PointGeometry":
        return _geometry(self, self.check_point(p))


@lru_cache(maxsize=1024)
def _geometry(chart: MetricChart, p: tuple) -> "PointGeometry":
    return PointGeometry(chart, p)


class PointGeometry:
    """Metric, connection and curvature of ``chart`` at one point (computed lazily)."""

    def __init__(self, chart: MetricChart, p: tuple):
        self.chart = chart
        self.point = p
        self.g, self.dg, self.ddg = chart.jet(p)

    @cached_property
    def _connection(self):
        return kernels.christoffel(self.g, self.dg)

    @property
    def ginv(self) -> np.ndarray:
        return self._connection[0]

    @property
    def gamma(self) -> np.ndarray:
        """``gamma[k, i, j]`` = Gamma^k_ij."""
        return self._connection[2]

    @cached_property
    def riemann(self) -> np.ndarray:
        return kernels.curvature(self.g, self.dg, self.ddg)[2]


@dataclass
class TensorComponents:
    """Dense components with one ``"up"``/``"down"`` flag per slot.

    ``basis`` names the frame the components refer to (``"coordinate"`` or
    ``"phi"``); tensors in different frames are never combined.
    """

    data: np.ndarray
    slots: tuple
    basis: str = "coordinate"

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.ndim != len(self.slots):
            raise ValueError("rank does not match slot flags")
        if len(set(self.data.shape)) > 1:
            raise ValueError("all slots must have the same dimension")

    @property
    def covariant_rank(self) -> int:
        return sum(1 for s in self.slots if s == "down")

    @property
    def contravariant_rank(self) -> int:
        return sum(1 for s in self.slots if s == "up")

    def __getitem__(self, idx):
        return self.data[idx]

    def _check(self, other: "TensorComponents"):
        if other.basis != self.basis:
            raise BasisMismatchError(f"cannot combine {self.basis!r} and {other.basis!r} components")
        if other.slots != self.slots:
            raise ValueError("slot types differ")

    def __add__(self, other: "TensorComponents") -> "TensorComponents":
        self._check(other)
        return TensorComponents(self.data + other.data, self.slots, self.basis)

    def __sub__(self, other: "TensorComponents") -> "TensorComponents":
        self._check(other)
        return TensorComponents(self.data - other.data, self.slots, self.basis)

    def to_frame(self, frame: np.ndarray, basis: str = "phi") -> "TensorComponents":
        """Re-express coordinate components in the frame whose vectors are the columns of ``frame``."""
        if self.basis != "coordinate":
            raise BasisMismatchError("frame change expects coordinate components")
        frame = np.asarray(frame, dtype=float)
        inv = np.linalg.inv(frame)
        out = self.data
        for axis, kind in enumerate(self.slots):
            mat = frame if kind == "down" else inv.T
            out = np.moveaxis(np.tensordot(out, mat, axes=([axis], [0])), -1, axis)
        return TensorComponents(out, self.slots, basis)


def christoffel_at(chart: MetricChart, p: Sequence[float]) -> TensorComponents:
    """Gamma^k_ij at ``p`` (``data[k, i, j]``)."""
    return TensorComponents(chart.geometry(p).gamma, ("up", "down", "down"))


def riemann_at(chart: MetricChart, p: Sequence[float]) -> TensorComponents:
    """Fully covariant curvature tensor ``R_ijkl`` at ``p``."""
    return TensorComponents(chart.geometry(p).riemann, ("down",) * 4)


def _partials(field_fn, p: np.ndarray, step: float) -> np.ndarray:
    """``out[i, ...] = d_i field`` by Richardson-extrapolated central differences."""
    n = len(p)
    rows = []
    for i in range(n):
        est = []
        for h in (step, step / 2.0):
            dp = np.zeros(n)
            dp[i] = h
            est.append((np.asarray(field_fn(p + dp)) - np.asarray(field_fn(p - dp))) / (2.0 * h))
        rows.append((4.0 * est[1] - est[0]) / 3.0)
    return np.array(rows)


def cov_deriv_oneform_at(
    chart: MetricChart,
    field_fn: Callable[[np.ndarray], Sequence[float]],
    p: Sequence[float],
    step: float = RICHARDSON_STEPS[0],
) -> TensorComponents:
    """``(nabla_i omega)_j`` for a covector field given by its coordinate components."""
    if step <= 0:
        raise ValueError("step must be positive")
    p = np.array(chart.check_point(p))
    gamma = chart.geometry(p).gamma
    omega = np.asarray(field_fn(p), dtype=float)
    d_omega = _partials(field_fn, p, step)
    return TensorComponents(d_omega - np.einsum("kij,k->ij", gamma, omega), ("down", "down"))


def _frame_metric(chart: MetricChart, p, tensor: TensorComponents, frame) -> np.ndarray:
    g = chart.geometry(p).g
    if tensor.basis == "coordinate":
        return g
    if frame is None:
        raise BasisMismatchError(f"{tensor.basis!r} components need the frame to build the metric")
    frame = np.asarray(frame, dtype=float)
    return frame.T @ g @ frame


def raise_lower(
    chart: MetricChart, p, tensor: TensorComponents, slot: int, frame=None
) -> TensorComponents:
    """Toggle the variance of ``slot`` with ``g`` (lowering) or ``g^-1`` (raising)."""
    if not 0 <= slot < len(tensor.slots):
        raise IndexError(f"slot {slot} out of range for rank {len(tensor.slots)}")
    g = _frame_metric(chart, p, tensor, frame)
    if tensor.slots[slot] == "up":
        mat, new = g, "down"
    else:
        mat, new = kernels.inverse_metric(g), "up"
    data = np.moveaxis(np.tensordot(tensor.data, mat, axes=([slot], [0])), -1, slot)
    slots = tensor.slots[:slot] + (new,) + tensor.slots[slot + 1 :]
    return TensorComponents(data, slots, tensor.basis)


def contract(
    tensor: TensorComponents, slot_a: int, slot_b: int, metric_inverse=None
) -> TensorComponents:
    """Trace over two slots.

    Mixed slots are traced directly; two covariant slots need ``metric_inverse``
    and two contravariant slots need the metric (passed in the same argument).
    """
    rank = len(tensor.slots)
    if not (0 <= slot_a < rank and 0 <= slot_b < rank) or slot_a == slot_b:
        raise IndexError(f"invalid slots ({slot_a}, {slot_b}) for rank {rank}")
    kinds = {tensor.slots[slot_a], tensor.slots[slot_b]}
    if kinds == {"up", "down"}:
        data = np.trace(tensor.data, axis1=slot_a, axis2=slot_b)
    else:
        if metric_inverse is None:
            raise ValueError("contracting two slots of the same variance needs a metric")
        m = np.asarray(metric_inverse, dtype=float)
        moved = np.moveaxis(tensor.data, (slot_a, slot_b), (0, 1))
        data = np.tensordot(m, moved, axes=([0, 1], [0, 1]))
    slots = tuple(s for i, s in enumerate(tensor.slots) if i not in (slot_a, slot_b))
    return TensorComponents(data, slots, tensor.basis)
