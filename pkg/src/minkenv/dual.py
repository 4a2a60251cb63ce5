"""Forward-mode dual numbers over scalars or numpy arrays."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Evaluation left the domain of a function (or of its derivative)."""


def _check(bad, msg):
    if np.any(bad):
        raise DomainError(msg)


@dataclass(frozen=True)
class Dual:
    val: np.ndarray | float
    der: np.ndarray | float = 0.0

    @staticmethod
    def lift(x) -> "Dual":
        return x if isinstance(x, Dual) else Dual(x, 0.0)

    def __add__(self, other):
        o = Dual.lift(other)
        return Dual(self.val + o.val, self.der + o.der)

    __radd__ = __add__

    def __sub__(self, other):
        o = Dual.lift(other)
        return Dual(self.val - o.val, self.der - o.der)

    def __rsub__(self, other):
        return Dual.lift(other) - self

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __mul__(self, other):
        o = Dual.lift(other)
        return Dual(self.val * o.val, self.val * o.der + self.der * o.val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Dual.lift(other)
        _check(np.asarray(o.val) == 0, "division by zero")
        return Dual(self.val / o.val, (self.der * o.val - self.val * o.der) / (o.val * o.val))

    def __rtruediv__(self, other):
        return Dual.lift(other) / self

    def __pow__(self, n: int):
        """Integer powers only; real exponents go through :func:`rpow`."""
        n = int(n)
        if n == 0:
            return Dual(np.ones_like(self.val, dtype=float), np.zeros_like(self.der, dtype=float))
        if n < 0:
            _check(np.asarray(self.val) == 0, "negative power of zero")
        return Dual(self.val**n if n > 0 else 1.0 / self.val ** (-n),
                    n * _ipow(self.val, n - 1) * self.der)


def _ipow(x, k: int):
    if k >= 0:
        return x**k
    return 1.0 / x ** (-k)


def sqrt(x: Dual) -> Dual:
    _check(np.asarray(x.val) <= 0, "sqrt of non-positive argument (derivative undefined)")
    s = np.sqrt(x.val)
    return Dual(s, x.der / (2.0 * s))


def exp(x: Dual) -> Dual:
    e = np.exp(x.val)
    return Dual(e, e * x.der)


def log(x: Dual) -> Dual:
    _check(np.asarray(x.val) <= 0, "log of non-positive argument")
    return Dual(np.log(x.val), x.der / x.val)


def sinh(x: Dual) -> Dual:
    return Dual(np.sinh(x.val), np.cosh(x.val) * x.der)


def cosh(x: Dual) -> Dual:
    return Dual(np.cosh(x.val), np.sinh(x.val) * x.der)


def tanh(x: Dual) -> Dual:
    th = np.tanh(x.val)
    return Dual(th, (1.0 - th * th) * x.der)


def fabs(x: Dual) -> Dual:
    _check(np.asarray(x.val) == 0, "abs is not differentiable at 0")
    return Dual(np.abs(x.val), np.sign(x.val) * x.der)


def rpow(base: Dual, expo: Dual) -> Dual:
    """base**expo for a real (non-integer) exponent, via exp(expo*log(base))."""
    _check(np.asarray(base.val) <= 0, "real power requires a positive base")
    return exp(expo * log(base))


FUNCTIONS = {
    "sqrt": sqrt,
    "exp": exp,
    "log": log,
    "sinh": sinh,
    "cosh": cosh,
    "tanh": tanh,
    "abs": fabs,
}
