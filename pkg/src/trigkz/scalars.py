"""Dual-mode scalar arithmetic: complex doubles or truncated power series in h.

Every matrix in this package works over one of two scalar modes.  Complex
mode is plain ``complex``.  Series mode is :class:`HSeries`, a power series
in the deformation parameter h truncated modulo h^(N+1); it is used to check
identities order by order (for instance that a quantum R-matrix agrees with
1 + h r through first order).
"""

from __future__ import annotations

import cmath

import numpy as np

DEFAULT_ORDER = 4


class SeriesError(ValueError):
    pass


class HSeries:
    """Truncated power series sum_k c_k h^k modulo h^(N+1).

    ``coeffs[k]`` holds c_k.  Binary operations require matching truncation
    order; products drop all terms beyond degree N.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim != 1 or c.size < 1:
            raise SeriesError("coefficients must be a 1-d array with at least the h^0 term")
        self.coeffs = c

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def h(cls, order=DEFAULT_ORDER):
        """The generator h itself (requires order >= 1)."""
        if order < 1:
            raise SeriesError("order must be >= 1 to represent h")
        c = np.zeros(order + 1, dtype=complex)
        c[1] = 1.0
        return cls(c)

    def _coerce(self, other):
        if isinstance(other, HSeries):
            if other.order != self.order:
                raise SeriesError(
                    f"truncation order mismatch: {self.order} vs {other.order}")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return HSeries.constant(complex(other), self.order)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return HSeries(self.coeffs + o.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return HSeries(self.coeffs - o.coeffs)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return HSeries(o.coeffs - self.coeffs)

    def __neg__(self):
        return HSeries(-self.coeffs)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return HSeries(np.convolve(self.coeffs, o.coeffs)[: self.order + 1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = HSeries.constant(1.0, self.order)
        for _ in range(int(k)):
            out = out * self
        return out

    def inverse(self):
        """Multiplicative inverse; requires an invertible constant term."""
        a = self.coeffs
        if a[0] == 0:
            raise SeriesError("series inversion requires a nonzero constant term")
        n = self.order
        b = np.zeros(n + 1, dtype=complex)
        b[0] = 1.0 / a[0]
        for k in range(1, n + 1):
            b[k] = -b[0] * np.dot(a[1 : k + 1], b[k - 1 :: -1][: k])
        return HSeries(b)

    def exp(self):
        """exp of the series; exact modulo h^(N+1).

        The constant term is exponentiated numerically, the nilpotent rest by
        a Taylor sum that terminates at the truncation order.
        """
        head = cmath.exp(self.coeffs[0])
        nil = HSeries(np.concatenate([[0.0], self.coeffs[1:]]))
        out = HSeries.constant(1.0, self.order)
        term = HSeries.constant(1.0, self.order)
        for k in range(1, self.order + 1):
            term = term * nil
            term = HSeries(term.coeffs / k)
            out = out + term
        return HSeries(out.coeffs * head)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return bool(np.array_equal(self.coeffs, o.coeffs))

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def allclose(self, other, tol=1e-12):
        o = self._coerce(other)
        return bool(np.max(np.abs(self.coeffs - o.coeffs)) <= tol)

    def __repr__(self):
        bits = []
        for k, c in enumerate(self.coeffs):
            if c != 0:
                bits.append(f"{c:.6g}*h^{k}" if k else f"{c:.6g}")
        return "HSeries(" + (" + ".join(bits) if bits else "0") + f" mod h^{self.order + 1})"


def sc_exp(x):
    """exp for either scalar mode."""
    if isinstance(x, HSeries):
        return x.exp()
    return cmath.exp(x)


def series_ops(a, b, op):
    """Ring operations on series scalars: add, mul, invert, exp_h.

    ``invert`` and ``exp_h`` are unary (b is ignored).  ``exp_h`` insists on a
    zero constant term so the exponential is exact at the truncation order.
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "invert":
        return a.inverse()
    if op == "exp_h":
        if a.coeffs[0] != 0:
            raise SeriesError("exp_h requires a zero constant term")
        return a.exp()
    raise ValueError(f"unknown op {op!r}")
