"""Exact arithmetic in the Clifford algebra Cl(0,n).

Basis blades e_J are stored as bitmasks: bit ``j-1`` is set when the generator
e_j occurs in J.  Generators square to -1 and anticommute pairwise.
Coefficients are :class:`fractions.Fraction` throughout.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

MAX_DIM = 12


class DimensionError(ValueError):
    """Raised when blade indices or operand dimensions are inconsistent."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to Fraction; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def check_dim(n: int) -> int:
    if not isinstance(n, int) or n < 0 or n > MAX_DIM:
        raise DimensionError(f"dimension must be an integer in [0, {MAX_DIM}], got {n!r}")
    return n


def blade_mask(indices: Iterable[int], n: int | None = None) -> int:
    """Bitmask of a set of generator indices (1-based).  Repeats are rejected."""
    mask = 0
    for j in indices:
        if j < 1 or j > MAX_DIM or (n is not None and j > n):
            raise DimensionError(f"generator index {j} out of range for n={n}")
        bit = 1 << (j - 1)
        if mask & bit:
            raise ValueError(f"repeated generator index {j} in blade")
        mask |= bit
    return mask


def blade_indices(mask: int) -> tuple[int, ...]:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def _reorder_sign(a: int, b: int) -> int:
    # transpositions needed to move every generator of b past the larger ones of a
    swaps = 0
    a >>= 1
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_product(a: int, b: int, n: int | None = None) -> tuple[int, int]:
    """Geometric product of two basis blades given as bitmasks.

    Returns ``(sign, mask)`` with ``e_a e_b = sign * e_mask``.  Every generator
    common to both blades contributes e_j^2 = -1.
    """
    if n is not None and (a | b) >> n:
        raise DimensionError(f"blade index exceeds dimension {n}")
    sign = _reorder_sign(a, b)
    if bin(a & b).count("1") & 1:
        sign = -sign
    return sign, a ^ b


class Multivector:
    """Element of Cl(0,n) with exact rational coefficients.

    Instances are immutable; zero coefficients are never stored.
    """

    __slots__ = ("n", "_c", "_hash")

    def __init__(self, n: int, coeffs: Mapping[int, object] | None = None):
        self.n = check_dim(n)
        c: dict[int, Fraction] = {}
        if coeffs:
            limit = 1 << n
            for mask, value in coeffs.items():
                if not isinstance(mask, int) or mask < 0 or mask >= limit:
                    raise DimensionError(f"blade mask {mask!r} invalid for n={n}")
                q = as_rational(value)
                if q:
                    c[mask] = q
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, n: int, c: dict[int, Fraction]) -> "Multivector":
        obj = cls.__new__(cls)
        obj.n = n
        obj._c = c
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, n: int) -> "Multivector":
        return cls(n)

    @classmethod
    def scalar(cls, value, n: int) -> "Multivector":
        return cls(n, {0: value})

    @classmethod
    def basis(cls, indices: Sequence[int], n: int, coeff=1) -> "Multivector":
        return cls(n, {blade_mask(indices, n): coeff})

    @classmethod
    def generator(cls, j: int, n: int) -> "Multivector":
        return cls.basis((j,), n)

    @classmethod
    def vector(cls, components: Sequence[object]) -> "Multivector":
        n = len(components)
        return cls(n, {1 << i: v for i, v in enumerate(components)})

    # inspection
    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(sorted(self._c.items()))

    def __getitem__(self, blade) -> Fraction:
        mask = blade if isinstance(blade, int) else blade_mask(blade, self.n)
        return self._c.get(mask, Fraction(0))

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_scalar(self) -> bool:
        return not self._c or set(self._c) == {0}

    def scalar_part(self) -> Fraction:
        return self._c.get(0, Fraction(0))

    def grades(self) -> set[int]:
        return {bin(m).count("1") for m in self._c}

    # arithmetic
    def _check(self, other: "Multivector") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check(other)
        c = dict(self._c)
        for m, v in other._c.items():
            s = c.get(m, 0) + v
            if s:
                c[m] = s
            else:
                c.pop(m, None)
        return Multivector._raw(self.n, c)

    def __neg__(self):
        return Multivector._raw(self.n, {m: -v for m, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "Multivector":
        q = as_rational(factor)
        if not q:
            return Multivector._raw(self.n, {})
        return Multivector._raw(self.n, {m: q * v for m, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, Multivector):
            self._check(other)
            c: dict[int, Fraction] = {}
            for ma, va in self._c.items():
                for mb, vb in other._c.items():
                    sign, m = blade_product(ma, mb)
                    s = c.get(m, 0) + (va * vb if sign > 0 else -(va * vb))
                    if s:
                        c[m] = s
                    else:
                        c.pop(m, None)
            return Multivector._raw(self.n, c)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self.n == other.n and self._c == other._c
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._c == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._c.items())))
        return self._hash

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for m, v in self.items():
            label = "e" + "".join(str(j) for j in blade_indices(m)) if m else ""
            coeff = str(v)
            parts.append(f"{coeff}{'*' + label if label else ''}")
        return " + ".join(parts)

    # serialisation
    def to_json(self) -> list[dict]:
        return [{"blade": list(blade_indices(m)), "coeff": format_rational(v)}
                for m, v in self.items()]

    @classmethod
    def from_json(cls, data: list[dict], n: int) -> "Multivector":
        c: dict[int, Fraction] = {}
        for entry in data:
            m = blade_mask(entry["blade"], n)
            c[m] = c.get(m, Fraction(0)) + as_rational(entry["coeff"])
        return cls(n, c)


def mv_add(a: Multivector, b: Multivector) -> Multivector:
    return a + b


def mv_scale(c, a: Multivector) -> Multivector:
    return a.scale(c)


def mv_mul(a: Multivector, b: Multivector) -> Multivector:
    return a * b
