"""Exact truncated formal power series.

A :class:`PowerSeries` of order ``N`` holds the coefficients of ``x^0 .. x^N``
as exact rationals. Internally the coefficients are integer numerators over a
single positive common denominator, kept in lowest terms, so products reduce
to integer convolutions (see :mod:`cactus_split.kernels`).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

from . import kernels
from .errors import OrderMismatchError, SemanticsError

Coefficient = Fraction
Number = Union[int, Fraction]


def _as_fraction(c: Number) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")


class PowerSeries:
    """Immutable power series truncated at a fixed order."""

    __slots__ = ("order", "_num", "_den")

    def __init__(self, coeffs: Iterable[Number], order: int | None = None):
        values = [_as_fraction(c) for c in coeffs]
        if order is None:
            order = len(values) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        if len(values) > order + 1:
            raise ValueError(f"{len(values)} coefficients do not fit in order {order}")
        values.extend([Fraction(0)] * (order + 1 - len(values)))
        den = 1
        for v in values:
            den = den * v.denominator // math.gcd(den, v.denominator)
        nums = [v.numerator * (den // v.denominator) for v in values]
        self.order = order
        self._num, self._den = _reduce(nums, den)

    @classmethod
    def _raw(cls, nums: list[int], den: int, order: int) -> "PowerSeries":
        obj = cls.__new__(cls)
        obj.order = order
        obj._num, obj._den = _reduce(nums, den)
        return obj

    # constructors

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls._raw([0] * (order + 1), 1, order)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, k: int, order: int, c: Number = 1) -> "PowerSeries":
        """``c * x^k`` truncated at ``order`` (zero when ``k > order``)."""
        coeffs: list[Number] = [0] * (order + 1)
        if 0 <= k <= order:
            coeffs[k] = c
        return cls(coeffs, order)

    # access

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        d = self._den
        return tuple(Fraction(n, d) for n in self._num)

    def __getitem__(self, i: int) -> Fraction:
        if not 0 <= i <= self.order:
            raise IndexError(f"index {i} outside 0..{self.order}")
        return Fraction(self._num[i], self._den)

    def __len__(self) -> int:
        return self.order + 1

    @property
    def is_integral(self) -> bool:
        return self._den == 1

    def integers(self) -> list[int]:
        """Coefficients as Python ints; raises if any coefficient is fractional."""
        if self._den != 1:
            bad = next(i for i, n in enumerate(self._num) if n % self._den)
            raise SemanticsError(
                f"coefficient {bad} = {self[bad]} is not an integer"
            )
        return list(self._num)

    def numerators(self) -> tuple[list[int], int]:
        """``(numerators, common_denominator)``; the list is a copy."""
        return list(self._num), self._den

    def valuation(self) -> int | None:
        """Index of the lowest nonzero coefficient, or ``None`` for the zero series."""
        for i, n in enumerate(self._num):
            if n:
                return i
        return None

    @property
    def is_zero(self) -> bool:
        return not any(self._num)

    # arithmetic

    def _check(self, other: "PowerSeries") -> None:
        if not isinstance(other, PowerSeries):
            raise TypeError(f"expected PowerSeries, got {type(other).__name__}")
        if other.order != self.order:
            raise OrderMismatchError(f"orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        da, db = self._den, other._den
        if da == db:
            return PowerSeries._raw([x + y for x, y in zip(self._num, other._num)], da, self.order)
        g = math.gcd(da, db)
        fa, fb = db // g, da // g
        nums = [x * fa + y * fb for x, y in zip(self._num, other._num)]
        return PowerSeries._raw(nums, da * fa, self.order)

    def __neg__(self) -> "PowerSeries":
        return PowerSeries._raw([-x for x in self._num], self._den, self.order)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        return self + (-other)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        nums = kernels.convolve(self._num, other._num, self.order)
        return PowerSeries._raw(nums, self._den * other._den, self.order)

    def pow(self, m: int) -> "PowerSeries":
        if m < 0:
            raise ValueError("exponent must be non-negative")
        result = PowerSeries.one(self.order)
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    def __pow__(self, m: int) -> "PowerSeries":
        return self.pow(m)

    def scale(self, r: Number) -> "PowerSeries":
        r = _as_fraction(r)
        return PowerSeries._raw([x * r.numerator for x in self._num], self._den * r.denominator, self.order)

    def substitute_power(self, k: int) -> "PowerSeries":
        """The series ``A(x^k)``, truncated at the same order."""
        if k < 1:
            raise ValueError("k must be a positive integer")
        if k == 1:
            return self
        nums = [0] * (self.order + 1)
        for i in range(0, self.order // k + 1):
            nums[i * k] = self._num[i]
        return PowerSeries._raw(nums, self._den, self.order)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("truncate cannot raise the order; use extend")
        return PowerSeries._raw(self._num[: order + 1], self._den, order)

    def extend(self, order: int) -> "PowerSeries":
        """Re-express at a higher order, padding with zeros."""
        if order < self.order:
            raise ValueError("extend cannot lower the order; use truncate")
        return PowerSeries._raw(self._num + [0] * (order - self.order), self._den, order)

    # comparison / display

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and self._den == other._den and self._num == other._num

    def __hash__(self) -> int:
        return hash((self.order, self._den, tuple(self._num)))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*x^{i}")
        body = " + ".join(terms) or "0"
        return f"PowerSeries({body}, order={self.order})"


def _reduce(nums: list[int], den: int) -> tuple[list[int], int]:
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    if den != 1:
        g = math.gcd(den, *nums)
        if g > 1:
            nums = [x // g for x in nums]
            den //= g
    return nums, den


def arithmetic(a: PowerSeries, b: PowerSeries, op: str) -> PowerSeries:
    """Apply ``op`` in ``{"add", "sub", "mul"}`` to two series of equal order."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def pow(a: PowerSeries, m: int) -> PowerSeries:  # noqa: A001 - mirrors the series API
    return a.pow(m)


def substitute_power(a: PowerSeries, k: int) -> PowerSeries:
    return a.substitute_power(k)


def scale(a: PowerSeries, r: Number) -> PowerSeries:
    return a.scale(r)
