"""Clifford-valued polynomials R[x] (x) Cl(0,n) with exact coefficients.

A polynomial is a sparse map from exponent tuples (multi-indices) to
multivectors.  The Clifford coefficient is stored to the left of the monomial;
monomials are scalar so the placement is a convention only.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .clifford import (
    DimensionError,
    Multivector,
    as_rational,
    blade_product,
    check_dim,
)

MultiIndex = tuple[int, ...]


def graded_lex_key(alpha: MultiIndex) -> tuple:
    return (sum(alpha), alpha)


def multi_indices(n: int, degree: int) -> list[MultiIndex]:
    """All multi-indices of length ``n`` with ``|alpha| == degree``, graded-lex sorted."""
    if n == 0:
        return [()] if degree == 0 else []
    out = []
    for head in range(degree, -1, -1):
        for tail in multi_indices(n - 1, degree - head):
            out.append((head,) + tail)
    return sorted(out)


def multi_indices_upto(n: int, degree: int) -> list[MultiIndex]:
    return [a for d in range(degree + 1) for a in multi_indices(n, d)]


def mi_factorial(alpha: MultiIndex) -> int:
    return math.prod(math.factorial(a) for a in alpha)


def _merge(dst: dict[int, Fraction], src: Mapping[int, Fraction], factor: Fraction) -> None:
    if factor == 1:
        for m, v in src.items():
            s = dst[m] + v if m in dst else v
            if s:
                dst[m] = s
            else:
                del dst[m]
        return
    for m, v in src.items():
        s = dst.get(m, 0) + factor * v
        if s:
            dst[m] = s
        else:
            dst.pop(m, None)


class CliffordPolynomial:
    """Immutable sparse polynomial with multivector coefficients."""

    __slots__ = ("n", "_t", "_hash")

    def __init__(self, n: int, terms: Mapping[Sequence[int], Multivector] | None = None):
        self.n = check_dim(n)
        t: dict[MultiIndex, dict[int, Fraction]] = {}
        for alpha, value in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise DimensionError(f"multi-index {alpha} invalid for n={n}")
            if not isinstance(value, Multivector):
                value = Multivector.scalar(value, n)
            if value.n != n:
                raise DimensionError(f"coefficient dimension {value.n} != {n}")
            inner = t.setdefault(alpha, {})
            _merge(inner, value._c, Fraction(1))
            if not inner:
                del t[alpha]
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, n: int, t: dict[MultiIndex, dict[int, Fraction]]) -> "CliffordPolynomial":
        obj = cls.__new__(cls)
        obj.n = n
        obj._t = {a: c for a, c in t.items() if c}
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, n: int) -> "CliffordPolynomial":
        return cls._raw(check_dim(n), {})

    @classmethod
    def constant(cls, value, n: int) -> "CliffordPolynomial":
        if not isinstance(value, Multivector):
            value = Multivector.scalar(value, n)
        return cls(n, {(0,) * n: value})

    @classmethod
    def monomial(cls, alpha: Sequence[int], coeff=1, n: int | None = None) -> "CliffordPolynomial":
        n = len(alpha) if n is None else n
        return cls(n, {tuple(alpha): coeff if isinstance(coeff, Multivector)
                       else Multivector.scalar(coeff, n)})

    @classmethod
    def coordinate(cls, j: int, n: int) -> "CliffordPolynomial":
        alpha = [0] * n
        alpha[j - 1] = 1
        return cls.monomial(alpha, 1, n)

    @classmethod
    def vector_variable(cls, n: int) -> "CliffordPolynomial":
        """The Clifford vector x = sum_j x_j e_j."""
        t = {}
        for j in range(1, n + 1):
            alpha = [0] * n
            alpha[j - 1] = 1
            t[tuple(alpha)] = {1 << (j - 1): Fraction(1)}
        return cls._raw(n, t)

    # inspection
    @property
    def terms(self) -> dict[MultiIndex, Multivector]:
        return {a: Multivector._raw(self.n, dict(c)) for a, c in self._t.items()}

    def items(self) -> Iterator[tuple[MultiIndex, Multivector]]:
        for a in sorted(self._t, key=graded_lex_key):
            yield a, Multivector._raw(self.n, dict(self._t[a]))

    def coeff(self, alpha: Sequence[int]) -> Multivector:
        return Multivector._raw(self.n, dict(self._t.get(tuple(alpha), {})))

    def degree(self) -> int | None:
        """Total degree, or ``None`` for the zero polynomial."""
        if not self._t:
            return None
        return max(sum(a) for a in self._t)

    def is_scalar(self) -> bool:
        return all(set(c) == {0} for c in self._t.values())

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    # arithmetic
    def _check(self, other: "CliffordPolynomial") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        self._check(other)
        t = {a: dict(c) for a, c in self._t.items()}
        for a, c in other._t.items():
            _merge(t.setdefault(a, {}), c, Fraction(1))
        return CliffordPolynomial._raw(self.n, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        self._check(other)
        t = {a: dict(c) for a, c in self._t.items()}
        for a, c in other._t.items():
            _merge(t.setdefault(a, {}), c, Fraction(-1))
        return CliffordPolynomial._raw(self.n, t)

    def scale(self, factor) -> "CliffordPolynomial":
        q = as_rational(factor)
        if not q:
            return CliffordPolynomial._raw(self.n, {})
        return CliffordPolynomial._raw(
            self.n, {a: {m: q * v for m, v in c.items()} for a, c in self._t.items()})

    def left_mul(self, mv: Multivector) -> "CliffordPolynomial":
        """mv * p, the multivector acting on every coefficient from the left."""
        if mv.n != self.n:
            raise DimensionError(f"dimension mismatch: {mv.n} vs {self.n}")
        t = {}
        for a, c in self._t.items():
            t[a] = (mv * Multivector._raw(self.n, c))._c
        return CliffordPolynomial._raw(self.n, t)

    def right_mul(self, mv: Multivector) -> "CliffordPolynomial":
        if mv.n != self.n:
            raise DimensionError(f"dimension mismatch: {mv.n} vs {self.n}")
        t = {}
        for a, c in self._t.items():
            t[a] = (Multivector._raw(self.n, c) * mv)._c
        return CliffordPolynomial._raw(self.n, t)

    def __mul__(self, other):
        if isinstance(other, CliffordPolynomial):
            self._check(other)
            t: dict[MultiIndex, dict[int, Fraction]] = {}
            for a, ca in self._t.items():
                for b, cb in other._t.items():
                    key = tuple(x + y for x, y in zip(a, b))
                    dst = t.setdefault(key, {})
                    for ma, va in ca.items():
                        for mb, vb in cb.items():
                            sign, m = blade_product(ma, mb)
                            s = dst.get(m, 0) + (va * vb if sign > 0 else -(va * vb))
                            if s:
                                dst[m] = s
                            else:
                                dst.pop(m, None)
            return CliffordPolynomial._raw(self.n, t)
        if isinstance(other, Multivector):
            return self.right_mul(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Multivector):
            return self.left_mul(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = CliffordPolynomial.constant(1, self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, CliffordPolynomial):
            return self.n == other.n and self._t == other._t
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(
                (a, frozenset(c.items())) for a, c in self._t.items())))
        return self._hash

    def __repr__(self):
        if not self._t:
            return "0"
        parts = []
        for a, mv in self.items():
            mono = "*".join(f"x{j + 1}^{e}" if e > 1 else f"x{j + 1}"
                            for j, e in enumerate(a) if e)
            parts.append(f"({mv!r}){'*' + mono if mono else ''}")
        return " + ".join(parts)

    def __call__(self, x: Sequence[object]) -> Multivector:
        return poly_eval(self, x)

    # serialisation
    def to_json(self) -> list[dict]:
        return [{"alpha": list(a), "value": mv.to_json()} for a, mv in self.items()]

    @classmethod
    def from_json(cls, data: list[dict], n: int) -> "CliffordPolynomial":
        out = cls.zero(n)
        for entry in data:
            out = out + cls(n, {tuple(entry["alpha"]): Multivector.from_json(entry["value"], n)})
        return out


def poly_eval(p: CliffordPolynomial, x: Sequence[object]) -> Multivector:
    """Exact value of ``p`` at the point ``x``."""
    if len(x) != p.n:
        raise DimensionError(f"point has {len(x)} coordinates, polynomial has n={p.n}")
    xs = [as_rational(v) for v in x]
    acc: dict[int, Fraction] = {}
    for a, c in p._t.items():
        mono = Fraction(1)
        for v, e in zip(xs, a):
            if e:
                mono *= v ** e
        if mono:
            _merge(acc, c, mono)
    return Multivector._raw(p.n, acc)


def falling_factorial(alpha: Sequence[int], h, n: int | None = None) -> CliffordPolynomial:
    """Expanded multi-index falling factorial prod_j prod_{k<alpha_j} (x_j - k h)."""
    h = as_rational(h)
    if h <= 0:
        raise ValueError("mesh width h must be positive")
    alpha = tuple(alpha)
    n = len(alpha) if n is None else n
    if len(alpha) != n:
        raise DimensionError(f"multi-index {alpha} has wrong length for n={n}")
    out = CliffordPolynomial.constant(1, n)
    for j, aj in enumerate(alpha):
        # univariate coefficients of prod_{k<aj} (t - k h), lowest power first
        coeffs = [Fraction(1)]
        for k in range(aj):
            shifted = [Fraction(0)] + coeffs
            for i, c in enumerate(coeffs):
                shifted[i] -= k * h * c
            coeffs = shifted
        t = {}
        for e, c in enumerate(coeffs):
            if c:
                key = [0] * n
                key[j] = e
                t[tuple(key)] = {0: c}
        out = out * CliffordPolynomial._raw(n, t)
    return out


def l1_level_points(k: int, h, n: int, bound: int) -> list[tuple[Fraction, ...]]:
    """Lattice points of hZ^n on the 1-norm sphere of radius 2*floor(k/2)*h.

    Only points with ``|x_j / h| <= bound`` are returned, lexicographically sorted.
    """
    h = as_rational(h)
    radius = 2 * (k // 2)
    if bound < radius:
        raise ValueError(f"bound {bound} smaller than level radius {radius}")
    pts = []
    for m in itertools.product(range(-bound, bound + 1), repeat=n):
        if sum(abs(v) for v in m) == radius:
            pts.append(tuple(h * v for v in m))
    return sorted(pts)
