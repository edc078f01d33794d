"""Symbolic operators on R[x] (x) Cl(0,n).

Operators are small immutable expression trees interpreted on demand by
:func:`op_apply`.  ``A * B`` composes (B acts first), ``A + B`` sums, a
rational times an operator scales it and ``A ** k`` iterates.  Identities
between operators are checked exactly on every basis element x^alpha e_J up to
a chosen degree (:func:`op_equal_truncated`).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Sequence, Union

from .clifford import DimensionError, Multivector, as_rational
from .poly import CliffordPolynomial, MultiIndex, _merge, multi_indices_upto
from .series import TruncatedSeries


class SeriesOrderError(ValueError):
    """A fixed-order series operator was applied to a polynomial of too high degree."""

    def __init__(self, required: int, available: int):
        super().__init__(f"series operator needs order >= {required}, has order {available}")
        self.required = required
        self.available = available


class NotDegreeLoweringError(ValueError):
    def __init__(self, witness: MultiIndex, message: str = "operator not degree-lowering"):
        super().__init__(f"{message}; witness monomial {witness}")
        self.witness = witness


class NotDegreePreservingError(ValueError):
    def __init__(self, witness):
        super().__init__(f"not degree-preserving on truncation; witness {witness}")
        self.witness = witness


class Operator:
    """Base class; subclasses are frozen dataclasses."""

    def __add__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        left = self.terms if isinstance(self, Sum) else (self,)
        right = other.terms if isinstance(other, Sum) else (other,)
        return Sum(left + right)

    def __neg__(self):
        return ScalarMul(Fraction(-1)) * self

    def __sub__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Operator):
            left = self.factors if isinstance(self, Compose) else (self,)
            right = other.factors if isinstance(other, Compose) else (other,)
            return Compose(left + right)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ScalarMul(Fraction(other)) * self
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ScalarMul(Fraction(other)) * self
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative operator powers are not defined")
        return Power(self, k)

    def __call__(self, p: CliffordPolynomial) -> CliffordPolynomial:
        return op_apply(self, p)


@dataclass(frozen=True)
class Identity(Operator):
    pass


@dataclass(frozen=True)
class ScalarMul(Operator):
    c: Fraction


@dataclass(frozen=True)
class PartialDeriv(Operator):
    j: int


@dataclass(frozen=True)
class ForwardDiff(Operator):
    j: int
    h: Fraction


@dataclass(frozen=True)
class BackwardDiff(Operator):
    j: int
    h: Fraction


@dataclass(frozen=True)
class Translate(Operator):
    """p(x) -> p(x + s e_j)."""

    j: int
    s: Fraction


@dataclass(frozen=True)
class CoordMul(Operator):
    j: int


@dataclass(frozen=True)
class BladeMulLeft(Operator):
    m: Multivector


@dataclass(frozen=True)
class Sum(Operator):
    terms: tuple


@dataclass(frozen=True)
class Compose(Operator):
    """Product of factors; the last factor is applied first."""

    factors: tuple


@dataclass(frozen=True)
class Power(Operator):
    op: Operator
    k: int


SeriesSource = Union[TruncatedSeries, Callable[[int], TruncatedSeries]]


@dataclass(frozen=True)
class SeriesOp(Operator):
    """sum_k c_k G^k for a degree-lowering generator G.

    ``series`` is either a fixed :class:`TruncatedSeries` or a callable
    ``order -> TruncatedSeries`` that can be re-derived to any order.
    """

    series: SeriesSource
    generator: Operator


@dataclass(frozen=True)
class ProductOverCoords(Operator):
    """prod_j SeriesOp(series, G_j) over every coordinate of the argument.

    ``kind`` is ``"partial"``, ``"forward"`` or ``"backward"``.
    """

    series: SeriesSource
    kind: str
    h: Fraction = Fraction(1)


ZERO = Sum(())


def _r(v) -> Fraction:
    return as_rational(v)


def partial(j: int) -> PartialDeriv:
    return PartialDeriv(j)


def forward(j: int, h) -> ForwardDiff:
    return ForwardDiff(j, _r(h))


def backward(j: int, h) -> BackwardDiff:
    return BackwardDiff(j, _r(h))


def translate(j: int, s) -> Translate:
    return Translate(j, _r(s))


def raising(j: int, h) -> Operator:
    """x_j T_h^{-j}: f(x) -> x_j f(x - h e_j)."""
    return CoordMul(j) * translate(j, -_r(h))


def blade(indices: Sequence[int], n: int) -> BladeMulLeft:
    return BladeMulLeft(Multivector.basis(indices, n))


def series_op(series: SeriesSource, generator: Operator) -> SeriesOp:
    return SeriesOp(series, generator)


# monomial images of the scalar primitives

@lru_cache(maxsize=None)
def _mono_image(kind: str, j: int, param: Fraction, alpha: MultiIndex) -> tuple:
    i0 = j - 1
    a = alpha[i0]

    def with_exp(e: int) -> MultiIndex:
        return alpha[:i0] + (e,) + alpha[i0 + 1:]

    if kind == "partial":
        return ((with_exp(a - 1), Fraction(a)),) if a else ()
    if kind == "coord":
        return ((with_exp(a + 1), Fraction(1)),)
    if kind == "translate":
        return tuple((with_exp(i), comb(a, i) * param ** (a - i)) for i in range(a + 1)
                     if param or i == a)
    if kind == "forward":
        h = param
        return tuple((with_exp(i), comb(a, i) * h ** (a - i - 1)) for i in range(a))
    if kind == "backward":
        h = param
        return tuple((with_exp(i), -comb(a, i) * (-h) ** (a - i) / h) for i in range(a))
    raise ValueError(kind)


_SCALAR_KINDS = {PartialDeriv: "partial", CoordMul: "coord", Translate: "translate",
                 ForwardDiff: "forward", BackwardDiff: "backward"}


def _scalar_params(op) -> tuple[str, int, Fraction]:
    kind = _SCALAR_KINDS[type(op)]
    if kind == "translate":
        return kind, op.j, op.s
    if kind in ("forward", "backward"):
        return kind, op.j, op.h
    return kind, op.j, Fraction(0)


def _apply_scalar(op, p: CliffordPolynomial) -> CliffordPolynomial:
    kind, j, param = _scalar_params(op)
    if j < 1 or j > p.n:
        raise DimensionError(f"coordinate index {j} out of range for n={p.n}")
    out: dict[MultiIndex, dict[int, Fraction]] = {}
    for alpha, c in p._t.items():
        for beta, w in _mono_image(kind, j, param, alpha):
            _merge(out.setdefault(beta, {}), c, w)
    return CliffordPolynomial._raw(p.n, out)


def _series_at(source: SeriesSource, needed: int) -> TruncatedSeries:
    if isinstance(source, TruncatedSeries):
        if source.order < needed:
            raise SeriesOrderError(needed, source.order)
        return source
    return source(needed)


def _apply_series(series: SeriesSource, gen: Operator, p: CliffordPolynomial) -> CliffordPolynomial:
    d = p.degree()
    if d is None:
        return p
    s = _series_at(series, d)
    acc = CliffordPolynomial.zero(p.n)
    term = p
    for k in range(d + 1):
        if not term:
            break
        if s.coeffs[k]:
            acc = acc + term.scale(s.coeffs[k])
        term = op_apply(gen, term)
    else:
        if term:
            raise NotDegreeLoweringError(max(p._t, key=sum), "series generator does not lower degree")
    return acc


def _coord_generator(kind: str, j: int, h: Fraction) -> Operator:
    if kind == "partial":
        return PartialDeriv(j)
    if kind == "forward":
        return ForwardDiff(j, h)
    if kind == "backward":
        return BackwardDiff(j, h)
    raise ValueError(f"unknown generator kind {kind!r}")


def op_apply(op: Operator, p: CliffordPolynomial) -> CliffordPolynomial:
    """Exact action of ``op`` on ``p``."""
    t = type(op)
    if t in _SCALAR_KINDS:
        return _apply_scalar(op, p)
    if t is Identity:
        return p
    if t is ScalarMul:
        return p.scale(op.c)
    if t is BladeMulLeft:
        return p.left_mul(op.m)
    if t is Sum:
        acc = CliffordPolynomial.zero(p.n)
        for term in op.terms:
            acc = acc + op_apply(term, p)
        return acc
    if t is Compose:
        for f in reversed(op.factors):
            p = op_apply(f, p)
        return p
    if t is Power:
        for _ in range(op.k):
            p = op_apply(op.op, p)
        return p
    if t is SeriesOp:
        return _apply_series(op.series, op.generator, p)
    if t is ProductOverCoords:
        for j in range(1, p.n + 1):
            p = _apply_series(op.series, _coord_generator(op.kind, j, op.h), p)
        return p
    raise TypeError(f"not an operator: {op!r}")


# Dirac-type operators

def dirac_forward(h, n: int) -> Operator:
    """D_h^+ = sum_j e_j forward-difference_j."""
    return Sum(tuple(blade((j,), n) * forward(j, h) for j in range(1, n + 1)))


def dirac_backward(h, n: int) -> Operator:
    return Sum(tuple(blade((j,), n) * backward(j, h) for j in range(1, n + 1)))


def dirac_central(h, n: int) -> Operator:
    return Fraction(1, 2) * (dirac_forward(h, n) + dirac_backward(h, n))


def dirac_continuum(n: int) -> Operator:
    return Sum(tuple(blade((j,), n) * PartialDeriv(j) for j in range(1, n + 1)))


def x_epsilon(eps, n: int) -> Operator:
    """X_eps f(x) = sum_j e_j x_j f(x - eps e_j)."""
    eps = _r(eps)
    return Sum(tuple(blade((j,), n) * CoordMul(j) * translate(j, -eps) for j in range(1, n + 1)))


def discrete_laplacian(h, n: int) -> Operator:
    """sum_j (T_h^{+j} + T_h^{-j} - 2I) / h^2."""
    h = _r(h)
    terms = []
    for j in range(1, n + 1):
        terms.append((1 / h ** 2) * (translate(j, h) + translate(j, -h) - 2 * Identity()))
    return Sum(tuple(terms))


def commutator(a: Operator, b: Operator) -> Operator:
    return a * b - b * a


# truncated equality and matrices

def basis_elements(n: int, d: int) -> list[tuple[MultiIndex, int]]:
    """(alpha, blade mask) pairs, graded-lex in alpha then blade order."""
    return [(alpha, m) for alpha in multi_indices_upto(n, d) for m in range(1 << n)]


def basis_polynomial(alpha: MultiIndex, mask: int, n: int) -> CliffordPolynomial:
    return CliffordPolynomial._raw(n, {alpha: {mask: Fraction(1)}})


@dataclass
class EqualityResult:
    equal: bool
    witness: tuple | None = None
    left: CliffordPolynomial | None = None
    right: CliffordPolynomial | None = None

    def __bool__(self):
        return self.equal


def op_equal_truncated(a: Operator, b: Operator, n: int, d: int) -> EqualityResult:
    """Compare ``a`` and ``b`` on every x^alpha e_J with |alpha| <= d."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    for alpha, mask in basis_elements(n, d):
        p = basis_polynomial(alpha, mask, n)
        left, right = op_apply(a, p), op_apply(b, p)
        if left != right:
            return EqualityResult(False, (alpha, mask), left, right)
    return EqualityResult(True)


class OperatorMatrix:
    """Exact matrix of an operator on the truncated basis (columns = images)."""

    def __init__(self, n: int, d: int, rows: list[list[Fraction]]):
        self.n = n
        self.d = d
        self.basis = basis_elements(n, d)
        self.rows = rows

    @property
    def size(self) -> int:
        return len(self.basis)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        N = self.size
        cols = [[other.rows[k][j] for k in range(N)] for j in range(N)]
        rows = []
        for i in range(N):
            ri = self.rows[i]
            nz = [(k, v) for k, v in enumerate(ri) if v]
            rows.append([sum((v * cols[j][k] for k, v in nz), Fraction(0)) for j in range(N)])
        return OperatorMatrix(self.n, self.d, rows)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.n, self.d, [[a - b for a, b in zip(r, s)]
                                               for r, s in zip(self.rows, other.rows)])

    def is_zero(self) -> bool:
        return not any(v for r in self.rows for v in r)

    def is_identity(self) -> bool:
        return all(v == (1 if i == j else 0) for i, r in enumerate(self.rows)
                   for j, v in enumerate(r))

    def is_nilpotent(self) -> bool:
        power = self
        for _ in range(self.size):
            if power.is_zero():
                return True
            power = power @ self
        return power.is_zero()

    def is_unipotent(self) -> bool:
        return (self - identity_matrix(self.n, self.d)).is_nilpotent()

    def to_numpy(self):
        import numpy as np
        return np.array([[float(v) for v in r] for r in self.rows], dtype=float)


def identity_matrix(n: int, d: int) -> OperatorMatrix:
    size = len(basis_elements(n, d))
    return OperatorMatrix(n, d, [[Fraction(int(i == j)) for j in range(size)] for i in range(size)])


def op_matrix(op: Operator, n: int, d: int) -> OperatorMatrix:
    basis = basis_elements(n, d)
    index = {b: i for i, b in enumerate(basis)}
    size = len(basis)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for col, (alpha, mask) in enumerate(basis):
        image = op_apply(op, basis_polynomial(alpha, mask, n))
        for beta, c in image._t.items():
            for m, v in c.items():
                row = index.get((beta, m))
                if row is None:
                    raise NotDegreePreservingError(((alpha, mask), (beta, m)))
                rows[row][col] = v
    return OperatorMatrix(n, d, rows)


def check_degree_lowering(op: Operator, p: CliffordPolynomial) -> None:
    """Raise unless ``op`` maps every monomial of ``p`` to strictly lower degree."""
    for alpha in p._t:
        image = op_apply(op, basis_polynomial(alpha, 0, p.n))
        deg = image.degree()
        if deg is not None and deg >= sum(alpha):
            raise NotDegreeLoweringError(alpha)


# product rule

@dataclass
class ProductRuleReport:
    checked: int
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures


def _random_poly(rng: random.Random, n: int, d: int, clifford: bool) -> CliffordPolynomial:
    terms = {}
    for alpha in multi_indices_upto(n, d):
        if rng.random() < 0.5:
            if clifford:
                coeffs = {m: Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                          for m in range(1 << n) if rng.random() < 0.4}
                terms[alpha] = Multivector(n, coeffs)
            else:
                terms[alpha] = Multivector.scalar(Fraction(rng.randint(-4, 4), rng.randint(1, 3)), n)
    return CliffordPolynomial(n, terms)


def product_rule_check(h, d: int, n: int = 2, trials: int = 5, seed: int = 0,
                       pairs: Sequence[tuple[CliffordPolynomial, CliffordPolynomial]] = ()
                       ) -> ProductRuleReport:
    """Check both discrete Leibniz rules for scalar g and Clifford f.

    forward:  d+(g f) = (d+ g) T+ f + g d+ f
    backward: d-(g f) = (d- g) T- f + g d- f
    """
    h = _r(h)
    rng = random.Random(seed)
    cases = list(pairs)
    for _ in range(trials):
        cases.append((_random_poly(rng, n, d, False), _random_poly(rng, n, d, True)))
    failures = []
    checked = 0
    for g, f in cases:
        for j in range(1, g.n + 1):
            for sign, diff in ((1, forward(j, h)), (-1, backward(j, h))):
                lhs = op_apply(diff, g * f)
                rhs = op_apply(diff, g) * op_apply(translate(j, sign * h), f) + g * op_apply(diff, f)
                checked += 1
                if lhs != rhs:
                    failures.append({"j": j, "direction": "forward" if sign > 0 else "backward",
                                     "g": g, "f": f, "lhs": lhs, "rhs": rhs})
    return ProductRuleReport(checked, failures)


# Weyl-Heisenberg relations

@dataclass
class RelationCheck:
    name: str
    result: EqualityResult

    def to_json(self) -> dict:
        out = {"relation": self.name, "ok": self.result.equal}
        if not self.result.equal:
            alpha, mask = self.result.witness
            out["witness"] = {"alpha": list(alpha), "blade_mask": mask,
                              "left": self.result.left.to_json(),
                              "right": self.result.right.to_json()}
        return out


@dataclass
class RelationsReport:
    n: int
    h: Fraction
    degree: int
    checks: list

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.result.equal]

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        return f"{len(self.checks) - len(self.failures)}/{len(self.checks)} pass"


def relations_suite(n: int, h, d: int, include_square: bool = True) -> RelationsReport:
    """Weyl-Heisenberg relations and their corollaries on degree <= d.

    [d+_j, x_k T-_k] = delta_jk, [x_j T-_j, x_k T-_k] = 0, T-_j d+_j = d-_j
    and X_h^2 = -sum_j (x_j T-_j)^2.
    """
    h = _r(h)
    if h <= 0:
        raise ValueError("mesh width h must be positive")
    checks = []
    ident = Identity()
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            rhs = ident if j == k else ZERO
            checks.append(RelationCheck(f"[d+_{j}, x_{k}T-_{k}] = {int(j == k)}", op_equal_truncated(
                commutator(forward(j, h), raising(k, h)), rhs, n, d)))
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            checks.append(RelationCheck(f"[x_{j}T-_{j}, x_{k}T-_{k}] = 0", op_equal_truncated(
                commutator(raising(j, h), raising(k, h)), ZERO, n, d)))
    for j in range(1, n + 1):
        checks.append(RelationCheck(f"T-_{j} d+_{j} = d-_{j}", op_equal_truncated(
            translate(j, -h) * forward(j, h), backward(j, h), n, d)))
    if not include_square:
        return RelationsReport(n, h, d, checks)
    square = Sum(tuple(raising(j, h) * raising(j, h) for j in range(1, n + 1)))
    checks.append(RelationCheck("X_h^2 = -sum_j (x_j T-_j)^2", op_equal_truncated(
        x_epsilon(h, n) * x_epsilon(h, n), -1 * square, n, d)))
    return RelationsReport(n, h, d, checks)
