"""Truncated power series with real coefficients.

A :class:`FracSeries` holds ``a_0, ..., a_K`` and stands for
``sum a_k t^k`` modulo ``t^(K+1)``.  In this package ``t`` is usually the
cube root of the transaction cost, but nothing here depends on that.
Every operation truncates at the smaller order of its operands.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .errors import DomainError


class FracSeries:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[float], order: int | None = None):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=float).ravel()
        if order is not None:
            if order < 0:
                raise DomainError("order must be non-negative")
            if c.size < order + 1:
                c = np.concatenate([c, np.zeros(order + 1 - c.size)])
            c = c[: order + 1]
        if c.size == 0:
            raise DomainError("a series needs at least one coefficient")
        c.setflags(write=False)
        self._c = c

    # construction helpers
    @classmethod
    def constant(cls, value: float, order: int) -> "FracSeries":
        return cls([value], order)

    @classmethod
    def variable(cls, order: int) -> "FracSeries":
        """The series ``t``."""
        return cls([0.0, 1.0], order)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return self._c.size - 1

    def __len__(self):
        return self._c.size

    def __getitem__(self, k):
        return self._c[k]

    def __iter__(self):
        return iter(self._c.tolist())

    def __repr__(self):
        return f"FracSeries({self._c.tolist()!r})"

    def truncate(self, order: int) -> "FracSeries":
        return FracSeries(self._c[: order + 1], order)

    def __call__(self, t):
        """Evaluate the truncated polynomial at ``t`` (Horner)."""
        return np.polynomial.polynomial.polyval(t, self._c)

    def allclose(self, other: "FracSeries", rtol=1e-12, atol=1e-12) -> bool:
        k = min(self.order, other.order)
        return bool(np.allclose(self._c[: k + 1], other._c[: k + 1], rtol=rtol, atol=atol))

    # arithmetic
    def _coerce(self, other) -> "FracSeries":
        if isinstance(other, FracSeries):
            return other
        if np.isscalar(other):
            return FracSeries.constant(float(other), self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        k = min(self.order, other.order)
        return FracSeries(self._c[: k + 1] + other._c[: k + 1])

    __radd__ = __add__

    def __neg__(self):
        return FracSeries(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return FracSeries(self._c * float(other))
        if not isinstance(other, FracSeries):
            return NotImplemented
        k = min(self.order, other.order)
        return FracSeries(np.convolve(self._c[: k + 1], other._c[: k + 1])[: k + 1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return FracSeries(self._c / float(other))
        if not isinstance(other, FracSeries):
            return NotImplemented
        return self * other.recip()

    def __rtruediv__(self, other):
        if np.isscalar(other):
            return self.recip() * float(other)
        return NotImplemented

    def __pow__(self, alpha):
        if isinstance(alpha, int) and alpha >= 0:
            out = FracSeries.constant(1.0, self.order)
            for _ in range(alpha):
                out = out * self
            return out
        return self.pow_real(float(alpha))

    def recip(self) -> "FracSeries":
        a = self._c
        if a[0] == 0.0:
            raise DomainError("reciprocal needs a non-zero constant term")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for n in range(1, a.size):
            b[n] = -np.dot(a[1 : n + 1], b[n - 1 :: -1][:n]) / a[0]
        return FracSeries(b)

    def pow_real(self, alpha: float) -> "FracSeries":
        """``self ** alpha`` for real ``alpha`` via the power recurrence."""
        a = self._c
        if not a[0] > 0.0:
            raise DomainError("real powers need a positive constant term")
        b = np.zeros_like(a)
        b[0] = a[0] ** alpha
        for n in range(1, a.size):
            k = np.arange(1, n + 1)
            b[n] = np.sum(((alpha + 1.0) * k - n) * a[1 : n + 1] * b[n - k]) / (n * a[0])
        return FracSeries(b)

    def exp(self) -> "FracSeries":
        a = self._c
        b = np.zeros_like(a)
        b[0] = math.exp(a[0])
        for n in range(1, a.size):
            k = np.arange(1, n + 1)
            b[n] = np.sum(k * a[1 : n + 1] * b[n - k]) / n
        return FracSeries(b)

    def log(self) -> "FracSeries":
        a = self._c
        if not a[0] > 0.0:
            raise DomainError("log needs a positive constant term")
        b = np.zeros_like(a)
        b[0] = math.log(a[0])
        for n in range(1, a.size):
            k = np.arange(1, n)
            b[n] = (a[n] - np.sum(k * b[1:n] * a[n - k]) / n) / a[0]
        return FracSeries(b)

    def compose(self, inner: "FracSeries") -> "FracSeries":
        """``self(inner(t))``; ``inner`` must have a zero constant term."""
        if inner._c[0] != 0.0:
            raise DomainError("inner series of a composition must vanish at t = 0")
        k = min(self.order, inner.order)
        inner = inner.truncate(k)
        out = FracSeries.constant(0.0, k)
        for coef in self._c[: k + 1][::-1]:
            out = out * inner + float(coef)
        return out

    def shift_down(self, k: int, atol: float = 1e-12) -> "FracSeries":
        """Divide by ``t**k``; the first ``k`` coefficients must be negligible.

        Negligible means below ``atol`` times the largest retained
        coefficient.  The result has order ``self.order - k``.
        """
        if k == 0:
            return self
        head, tail = self._c[:k], self._c[k:]
        if tail.size == 0:
            raise DomainError("not enough coefficients to divide by t**k")
        scale = max(1.0, float(np.max(np.abs(tail))))
        if np.any(np.abs(head) > atol * scale):
            raise DomainError(f"series does not vanish to order {k}: {head.tolist()}")
        return FracSeries(tail)

    def shift_up(self, k: int) -> "FracSeries":
        """Multiply by ``t**k`` keeping the order."""
        return FracSeries(np.concatenate([np.zeros(k), self._c[: self.order + 1 - k]]), self.order)


def series_add(x: FracSeries, y: FracSeries) -> FracSeries:
    return x + y


def series_mul(x: FracSeries, y: FracSeries) -> FracSeries:
    return x * y


def series_recip(x: FracSeries) -> FracSeries:
    return x.recip()


def series_compose(x: FracSeries, y: FracSeries) -> FracSeries:
    return x.compose(y)


def series_pow_real(x: FracSeries, alpha: float) -> FracSeries:
    return x.pow_real(alpha)


def lagrange_invert(phi: FracSeries) -> FracSeries:
    """Compositional inverse of ``phi(z) = phi_1 z + phi_2 z^2 + ...``.

    Uses ``[t^k] z(t) = (1/k) [z^(k-1)] (z/phi(z))^k``.
    """
    a = phi.coeffs
    if a.size < 2:
        raise DomainError("need at least a linear term to invert")
    if a[0] != 0.0:
        raise DomainError("series to invert must vanish at zero")
    if a[1] == 0.0:
        raise DomainError("series to invert needs a non-zero linear term")
    K = phi.order
    h = FracSeries(a[1:], K - 1)          # phi(z) / z
    w = h.recip()
    out = np.zeros(K + 1)
    wk = FracSeries.constant(1.0, K - 1)
    for k in range(1, K + 1):
        wk = wk * w
        out[k] = wk[k - 1] / k
    return FracSeries(out)
