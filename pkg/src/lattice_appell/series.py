"""Truncated formal power series over Q and the catalog of kappa/lambda series.

Coefficients are stored plainly (``c_k`` of ``t**k``), never as ``a_k/k!``.
A series of order N knows ``c_0 .. c_N`` exactly and nothing beyond; every
binary operation returns the smaller of the two orders.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .clifford import as_rational


class SeriesDomainError(ValueError):
    """A formal-series operation was called outside its domain."""


class TruncatedSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[object], order: int | None = None):
        cs = [as_rational(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("series order must be >= 0")
        cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls([c], order)

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries":
        return cls([0, 1], order)

    def __getitem__(self, k: int) -> Fraction:
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond order {self.order}")
        return self.coeffs[k]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesDomainError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def _common(self, other: "TruncatedSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(other, self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        N = self._common(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[: N + 1], other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(other, self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return TruncatedSeries([q * c for c in self.coeffs])
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        N = self._common(other)
        a, b = self.coeffs, other.coeffs
        return TruncatedSeries([sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0))
                                for k in range(N + 1)])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.order != other.order:
            raise ValueError("comparing series of different orders")
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TruncatedSeries({[str(c) for c in self.coeffs]})"

    def reciprocal(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise SeriesDomainError("reciprocal needs a nonzero constant term")
        out = [1 / c0]
        for k in range(1, self.order + 1):
            s = sum((self.coeffs[i] * out[k - i] for i in range(1, k + 1)), Fraction(0))
            out.append(-s / c0)
        return TruncatedSeries(out)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.reciprocal()

    def derivative(self) -> "TruncatedSeries":
        if self.order == 0:
            raise SeriesDomainError("derivative of an order-0 series carries no information")
        return TruncatedSeries([k * self.coeffs[k] for k in range(1, self.order + 1)])

    def integral(self) -> "TruncatedSeries":
        """Antiderivative with zero constant term; order grows by one."""
        return TruncatedSeries([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(t)); the inner series must have zero constant term."""
        if inner.coeffs[0]:
            raise SeriesDomainError("composition needs an inner series with zero constant term")
        N = self._common(inner)
        acc = [Fraction(0)] * (N + 1)
        power = TruncatedSeries.constant(1, N)
        inner = inner.truncate(N)
        for k in range(N + 1):
            c = self.coeffs[k]
            if c:
                for i, v in enumerate(power.coeffs):
                    acc[i] += c * v
            power = power * inner
        return TruncatedSeries(acc)

    def exp(self) -> "TruncatedSeries":
        if self.coeffs[0]:
            raise SeriesDomainError("exp needs zero constant term for exact coefficients")
        # y' = s' y, solved coefficientwise
        N = self.order
        out = [Fraction(1)]
        for k in range(1, N + 1):
            s = sum((i * self.coeffs[i] * out[k - i] for i in range(1, k + 1)), Fraction(0))
            out.append(s / k)
        return TruncatedSeries(out)

    def log(self) -> "TruncatedSeries":
        if self.coeffs[0] != 1:
            raise SeriesDomainError("log needs constant term exactly 1")
        if self.order == 0:
            return TruncatedSeries([0])
        return (self.derivative() * self.truncate(self.order - 1).reciprocal()).integral()

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by t**k keeping the order."""
        return TruncatedSeries(([Fraction(0)] * k + list(self.coeffs))[: self.order + 1])

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]


def exp_series(order: int) -> TruncatedSeries:
    return TruncatedSeries([Fraction(1, math.factorial(k)) for k in range(order + 1)])


def log1p_series(order: int) -> TruncatedSeries:
    """log(1 + t)."""
    return TruncatedSeries([0] + [Fraction((-1) ** (k + 1), k) for k in range(1, order + 1)])


def binomial_series(exponent, order: int) -> TruncatedSeries:
    """(1 + t) ** exponent for rational exponent."""
    e = as_rational(exponent)
    out = [Fraction(1)]
    for k in range(1, order + 1):
        out.append(out[-1] * (e - k + 1) / k)
    return TruncatedSeries(out)


def _scaled_var(c, order: int) -> TruncatedSeries:
    return TruncatedSeries([0, c], order)


def expm1_scaled(h, order: int) -> TruncatedSeries:
    """(exp(h t) - 1) / h, the forward-difference symbol."""
    h = as_rational(h)
    return TruncatedSeries([0] + [h ** (k - 1) / math.factorial(k) for k in range(1, order + 1)])


def log1p_scaled(h, order: int) -> TruncatedSeries:
    """(1/h) log(1 + h t), the inverse of ``expm1_scaled``."""
    h = as_rational(h)
    return TruncatedSeries([0] + [(-1) ** (k + 1) * h ** (k - 1) / k for k in range(1, order + 1)])


# kappa catalog

@dataclass(frozen=True)
class Falling:
    """kappa = 1: plain falling factorials."""

    name = "falling"


@dataclass(frozen=True)
class Charlier:
    """kappa(t) = exp((a/h)(exp(ht) - 1)): Poisson-Charlier."""

    a: Fraction
    h: Fraction
    name = "charlier"

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "h", as_rational(self.h))


@dataclass(frozen=True)
class Bernoulli2:
    """kappa(t) = h t / (exp(h t) - 1): Bernoulli polynomials of the second kind."""

    h: Fraction
    name = "bernoulli2"

    def __post_init__(self):
        object.__setattr__(self, "h", as_rational(self.h))


@dataclass(frozen=True)
class CliffordHermite2h:
    """Family given through its per-coordinate lambda rather than kappa.

    log lambda_1(y) = (1 + h y)/(2h^2) + 1/((2 + 2hy) h^2).  The constant
    log lambda_1(0) = 1/h^2 is irrational after exponentiation, so it is kept
    apart (``log_lambda_constant``) and the series carry the normalised part
    y^2 / (2(1 + h y)).
    """

    h: Fraction
    name = "chermite2h"

    def __post_init__(self):
        object.__setattr__(self, "h", as_rational(self.h))

    @property
    def log_lambda_constant(self) -> Fraction:
        return 1 / self.h ** 2


@dataclass(frozen=True)
class CustomCoefficients:
    """kappa(t) = sum_k a_k t^k / k! from a finite list of a_k (a_0 != 0)."""

    a: tuple
    name = "custom"

    def __post_init__(self):
        a = tuple(as_rational(v) for v in self.a)
        if not a or not a[0]:
            raise SeriesDomainError("custom kappa needs a nonzero constant coefficient")
        object.__setattr__(self, "a", a)


KappaSpec = Union[Falling, Charlier, Bernoulli2, CliffordHermite2h, CustomCoefficients]


def kappa_constant(spec: KappaSpec) -> Fraction:
    """kappa(0); equals 1 for every catalog entry except custom lists."""
    if isinstance(spec, CustomCoefficients):
        return spec.a[0]
    return Fraction(1)


def _chermite_log_lambda(h: Fraction, order: int) -> TruncatedSeries:
    # y^2 / (2 (1 + h y)) = sum_{k>=2} (-h)^(k-2) y^k / 2
    return TruncatedSeries([0, 0] + [(-h) ** (k - 2) / 2 for k in range(2, order + 1)], order)


def kappa_series(spec: KappaSpec, order: int) -> TruncatedSeries:
    """Maclaurin coefficients of kappa(t) to ``order``."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if isinstance(spec, Falling):
        return TruncatedSeries.constant(1, order)
    if isinstance(spec, Charlier):
        return (expm1_scaled(spec.h, order) * spec.a).exp()
    if isinstance(spec, Bernoulli2):
        # h t / (exp(h t) - 1) = 1 / (sum_k h^k t^k / (k+1)!)
        denom = TruncatedSeries([spec.h ** k / math.factorial(k + 1) for k in range(order + 1)])
        return denom.reciprocal()
    if isinstance(spec, CliffordHermite2h):
        # kappa(t) = lambda_1((exp(ht) - 1)/h), normalised to kappa(0) = 1
        return _chermite_log_lambda(spec.h, order).compose(expm1_scaled(spec.h, order)).exp()
    if isinstance(spec, CustomCoefficients):
        cs = [a / math.factorial(k) for k, a in enumerate(spec.a)]
        return TruncatedSeries(cs[: order + 1], order)
    raise TypeError(f"unknown kappa spec {spec!r}")


def normalized_kappa_series(spec: KappaSpec, order: int) -> TruncatedSeries:
    """kappa / kappa(0), the unit-constant form used to build operators."""
    return kappa_series(spec, order) * (1 / kappa_constant(spec))


def log_kappa_series(spec: KappaSpec, order: int) -> TruncatedSeries:
    """log(kappa / kappa(0))."""
    return normalized_kappa_series(spec, order).log()


def pincherle_series(spec: KappaSpec, order: int) -> TruncatedSeries:
    """kappa'/kappa to ``order``, computed as derivative(kappa) * reciprocal(kappa)."""
    k = kappa_series(spec, order + 1)
    return k.derivative() * k.truncate(order).reciprocal()


def _check_h(spec: KappaSpec, h) -> Fraction:
    h = as_rational(h)
    own = getattr(spec, "h", None)
    if own is not None and own != h:
        raise ValueError(f"family mesh {own} differs from requested h={h}")
    return h


def lambda_series_per_coordinate(spec: KappaSpec, h, order: int) -> TruncatedSeries:
    """The factor t -> kappa((1/h) log(1 + h t)) of lambda, normalised to value 1 at 0."""
    h = _check_h(spec, h)
    if isinstance(spec, CliffordHermite2h):
        return _chermite_log_lambda(h, order).exp()
    return normalized_kappa_series(spec, order).compose(log1p_scaled(h, order))


def log_lambda_series_per_coordinate(spec: KappaSpec, h, order: int) -> TruncatedSeries:
    """log of ``lambda_series_per_coordinate``; zero constant term."""
    h = _check_h(spec, h)
    if isinstance(spec, CliffordHermite2h):
        return _chermite_log_lambda(h, order)
    return lambda_series_per_coordinate(spec, h, order).log()


def central_u_series(h, order: int) -> TruncatedSeries:
    """u(y) = y - 1/h + (1/h) sqrt(1 + h^2 y^2)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    h = as_rational(h)
    root = binomial_series(Fraction(1, 2), order // 2)
    cs = [Fraction(0)] * (order + 1)
    cs[1] = Fraction(1)
    for m in range(1, order // 2 + 1):
        cs[2 * m] += root.coeffs[m] * h ** (2 * m) / h
    return TruncatedSeries(cs)


def cosh_series(h, order: int) -> TruncatedSeries:
    """cosh(h t)."""
    h = as_rational(h)
    return TruncatedSeries([h ** k / math.factorial(k) if k % 2 == 0 else 0
                            for k in range(order + 1)])
