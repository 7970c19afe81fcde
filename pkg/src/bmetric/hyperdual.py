"""Second-order forward-mode scalars.

A :class:`HyperDual` carries a value together with its gradient and Hessian
with respect to ``n`` seed directions, so a single evaluation of a metric
component yields ``g``, ``dg`` and ``ddg`` exactly (up to rounding).
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

Number = Union[int, float]


class HyperDual:
    __slots__ = ("value", "grad", "hess")

    def __init__(self, value: float, grad: np.ndarray, hess: np.ndarray):
        self.value = float(value)
        self.grad = grad
        self.hess = hess

    @classmethod
    def constant(cls, value: float, n: int) -> "HyperDual":
        return cls(value, np.zeros(n), np.zeros((n, n)))

    @classmethod
    def variable(cls, value: float, index: int, n: int) -> "HyperDual":
        grad = np.zeros(n)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((n, n)))

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    def _lift(self, other) -> "HyperDual":
        if isinstance(other, HyperDual):
            return other
        return HyperDual.constant(other, self.dim)

    def _chain(self, f0: float, f1: float, f2: float) -> "HyperDual":
        # f(x) with f' = f1, f'' = f2
        g = self.grad
        return HyperDual(f0, f1 * g, f1 * self.hess + f2 * np.outer(g, g))

    def __add__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        return HyperDual(self.value + other, self.grad, self.hess)

    __radd__ = __add__

    def __neg__(self):
        return HyperDual(-self.value, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        return HyperDual(self.value - other, self.grad, self.hess)

    def __rsub__(self, other):
        return HyperDual(other - self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, HyperDual):
            a, b = self, other
            cross = np.outer(a.grad, b.grad)
            return HyperDual(
                a.value * b.value,
                a.value * b.grad + b.value * a.grad,
                a.value * b.hess + b.value * a.hess + cross + cross.T,
            )
        return HyperDual(self.value * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def reciprocal(self) -> "HyperDual":
        if self.value == 0.0:
            raise ZeroDivisionError("hyper-dual division by zero")
        inv = 1.0 / self.value
        return self._chain(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other):
        if isinstance(other, HyperDual):
            return self * other.reciprocal()
        if other == 0:
            raise ZeroDivisionError("hyper-dual division by zero")
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("hyper-dual power needs a non-negative integer exponent")
        k = int(k)
        if k == 0:
            return HyperDual.constant(1.0, self.dim)
        if k == 1:
            return self
        x = self.value
        return self._chain(x**k, k * x ** (k - 1), k * (k - 1) * x ** (k - 2))

    def sin(self) -> "HyperDual":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._chain(s, c, -s)

    def cos(self) -> "HyperDual":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._chain(c, -s, -c)

    def exp(self) -> "HyperDual":
        e = math.exp(self.value)
        return self._chain(e, e, e)

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"HyperDual({self.value!r}, grad={self.grad.tolist()}, hess={self.hess.tolist()})"


def seed(point: Sequence[float]) -> list[HyperDual]:
    """Independent variables at ``point``, one seed direction per coordinate."""
    n = len(point)
    return [HyperDual.variable(x, i, n) for i, x in enumerate(point)]


def sin(x):
    return x.sin() if isinstance(x, HyperDual) else math.sin(x)


def cos(x):
    return x.cos() if isinstance(x, HyperDual) else math.cos(x)


def exp(x):
    return x.exp() if isinstance(x, HyperDual) else math.exp(x)


def jets(entries, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split an array of hyper-duals (or plain numbers) into value/grad/hess arrays.

    For an input of shape ``S`` returns arrays of shape ``S``, ``(n,) + S`` and
    ``(n, n) + S``; derivative axes come first so ``dg[k, i, j]`` is
    ``d g_ij / dx^k``.
    """
    arr = np.asarray(entries, dtype=object)
    shape = arr.shape
    val = np.zeros(shape)
    grad = np.zeros((n,) + shape)
    hess = np.zeros((n, n) + shape)
    for idx in np.ndindex(*shape):
        x = arr[idx]
        if isinstance(x, HyperDual):
            val[idx] = x.value
            grad[(slice(None),) + idx] = x.grad
            hess[(slice(None), slice(None)) + idx] = x.hess
        else:
            val[idx] = float(x)
    return val, grad, hess
