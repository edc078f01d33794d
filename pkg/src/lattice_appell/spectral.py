"""Floating-point momentum-space computations.

Symbols of the lattice Dirac operators on the Brillouin zone, doubler counts,
the discrete Fourier transform of finitely supported lattice data, the
0F1/Bessel identity and a quadrature check of sigma^{-1} = int_0^oo exp(-s sigma) ds.
This is the only module that uses floating point.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.linalg import expm

from .clifford import Multivector, blade_product, blade_mask, check_dim

PRUNE = 1e-15
ZERO_THRESHOLD = 1e-20


class ComplexMultivector:
    """Multivector with complex float coefficients; tiny entries are pruned."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[int, complex] | None = None):
        self.n = check_dim(n)
        coeffs = {m: complex(v) for m, v in (coeffs or {}).items()}
        scale = max((abs(v) for v in coeffs.values()), default=0.0)
        cut = PRUNE * max(scale, 1.0)
        self.coeffs = {m: v for m, v in coeffs.items() if abs(v) > cut}

    @classmethod
    def from_exact(cls, mv: Multivector) -> "ComplexMultivector":
        return cls(mv.n, {m: complex(float(v)) for m, v in mv._c.items()})

    def __add__(self, other: "ComplexMultivector") -> "ComplexMultivector":
        out = dict(self.coeffs)
        for m, v in other.coeffs.items():
            out[m] = out.get(m, 0) + v
        return ComplexMultivector(self.n, out)

    def __sub__(self, other: "ComplexMultivector") -> "ComplexMultivector":
        return self + other.scale(-1)

    def scale(self, c: complex) -> "ComplexMultivector":
        return ComplexMultivector(self.n, {m: c * v for m, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, ComplexMultivector):
            out: dict[int, complex] = {}
            for ma, va in self.coeffs.items():
                for mb, vb in other.coeffs.items():
                    sign, m = blade_product(ma, mb)
                    out[m] = out.get(m, 0) + sign * va * vb
            return ComplexMultivector(self.n, out)
        return self.scale(other)

    __rmul__ = scale

    def __getitem__(self, blade) -> complex:
        mask = blade if isinstance(blade, int) else blade_mask(blade, self.n)
        return self.coeffs.get(mask, 0j)

    def norm_sq(self) -> float:
        return sum(abs(v) ** 2 for v in self.coeffs.values())

    def is_close(self, other: "ComplexMultivector", tol: float) -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self[m] - other[m]) <= tol for m in keys)

    def __repr__(self):
        return f"ComplexMultivector({self.n}, {self.coeffs})"


SCHEMES = ("forward", "backward", "central")


def symbol(scheme: str, h: float, n: int, y: Sequence[float]) -> ComplexMultivector:
    """Fourier symbol of D_h^+ / D_h^- / central difference at momentum y."""
    if len(y) != n:
        raise ValueError(f"momentum has {len(y)} components, expected {n}")
    h = float(h)
    coeffs = {}
    for j, yj in enumerate(y):
        if scheme == "forward":
            v = (cmath.exp(1j * h * yj) - 1) / h
        elif scheme == "backward":
            v = (1 - cmath.exp(-1j * h * yj)) / h
        elif scheme == "central":
            v = 1j * math.sin(h * yj) / h
        else:
            raise ValueError(f"unknown scheme {scheme!r}")
        coeffs[1 << j] = v
    return ComplexMultivector(n, coeffs)


@dataclass(frozen=True)
class ZoneGrid:
    """Half-open grid y_j = -pi/h + 2 pi m / (h N), m = 0..N-1."""

    h: float
    n: int
    N: int

    def axis(self) -> np.ndarray:
        return -math.pi / self.h + 2 * math.pi * np.arange(self.N) / (self.h * self.N)

    def points(self) -> Iterable[tuple[float, ...]]:
        return itertools.product(self.axis(), repeat=self.n)


@dataclass
class ZeroCount:
    scheme: str
    count: int
    locations: list

    def to_json(self) -> dict:
        return {"scheme": self.scheme, "count": self.count,
                "locations": [list(p) for p in self.locations]}


def symbol_magnitudes(scheme: str, h: float, n: int, N: int) -> list[tuple[tuple, float]]:
    grid = ZoneGrid(float(h), n, N)
    return [(p, symbol(scheme, h, n, p).norm_sq()) for p in grid.points()]


def count_symbol_zeros(scheme: str, h: float, n: int, N: int) -> ZeroCount:
    """Grid points of the zone where |symbol|^2 < 1e-20."""
    if N % 2:
        raise ValueError("grid resolution must be even so 0 and -pi/h are grid points")
    locs = sorted(p for p, mag in symbol_magnitudes(scheme, h, n, N) if mag < ZERO_THRESHOLD)
    return ZeroCount(scheme, len(locs), [tuple(float(v) for v in p) for p in locs])


def in_zone(y: Sequence[float], h: float) -> bool:
    bound = math.pi / h
    return all(-bound <= v <= bound for v in y)


def dft_finite(g: Mapping[tuple, Multivector | ComplexMultivector], h: float,
               y: Sequence[float]) -> ComplexMultivector:
    """h^n (2 pi)^{-n/2} sum_x g(x) exp(i x.y) on the zone, zero outside.

    ``g`` maps lattice points (coordinates, already multiplied by h) to values.
    """
    n = len(y)
    h = float(h)
    if not in_zone(y, h):
        return ComplexMultivector(n)
    acc = ComplexMultivector(n)
    pref = h ** n * (2 * math.pi) ** (-n / 2)
    for x, value in sorted(g.items()):
        if len(x) != n:
            raise ValueError("lattice point dimension mismatch")
        if isinstance(value, Multivector):
            value = ComplexMultivector.from_exact(value)
        phase = cmath.exp(1j * sum(float(a) * b for a, b in zip(x, y)))
        acc = acc + value.scale(pref * phase)
    return acc


# Bessel

def hyp0f1(b: float, z: float, tol: float = 1e-17, max_terms: int = 500) -> float:
    """Ascending series of 0F1(; b; z)."""
    term = 1.0
    total = 1.0
    for m in range(max_terms):
        term *= z / ((b + m) * (m + 1))
        total += term
        if abs(term) <= tol * abs(total) and m > 2:
            return total
    raise ArithmeticError("0F1 series did not converge")


def bessel_j_series(s: float, u: float, tol: float = 1e-17, max_terms: int = 500) -> float:
    """J_s(u) = sum_m (-1)^m (u/2)^{2m+s} / (m! Gamma(m+s+1))."""
    half = u / 2
    term = half ** s / math.gamma(s + 1)
    total = term
    for m in range(max_terms):
        term *= -half * half / ((m + 1) * (m + 1 + s))
        total += term
        if abs(term) <= tol * abs(total) and m > 2:
            return total
    raise ArithmeticError("Bessel series did not converge")


def bessel_identity_check(s: float, u: float) -> float:
    """Relative gap between 0F1(s+1; -u^2/4) and Gamma(s+1) (u/2)^{-s} J_s(u)."""
    if s < 0 or u <= 0:
        raise ValueError("need s >= 0 and u > 0")
    lhs = hyp0f1(s + 1, -u * u / 4)
    rhs = math.gamma(s + 1) * (u / 2) ** (-s) * bessel_j_series(s, u)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


# integral representation of sigma^{-1}

@dataclass
class QuadratureResult:
    error: float
    integral: np.ndarray
    exact: np.ndarray


def quadrature_inverse_check(spec, d: int, S: float = 40.0, steps: int = 80,
                             nodes: int = 16) -> QuadratureResult:
    """Compare int_0^S exp(-s sigma) ds with the exact series inverse of sigma.

    Composite Gauss-Legendre over ``steps`` panels with ``nodes`` points each;
    exp(-s M) via scipy's scaling-and-squaring expm.
    """
    from .appell import sigma_inverse_operator, sigma_operator
    from .operators import op_matrix

    sigma = op_matrix(sigma_operator(spec), spec.n, d)
    if not sigma.is_unipotent():
        raise ValueError("sigma is not unipotent on the truncation")
    exact = op_matrix(sigma_inverse_operator(spec), spec.n, d).to_numpy()
    M = sigma.to_numpy()
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(0.0, float(S), steps + 1)
    acc = np.zeros_like(M)
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = (hi - lo) / 2
        mid = (hi + lo) / 2
        for xi, wi in zip(x, w):
            acc += wi * half * expm(-(mid + half * xi) * M)
    return QuadratureResult(float(np.max(np.abs(acc - exact))), acc, exact)
