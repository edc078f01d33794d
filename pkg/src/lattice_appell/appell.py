"""Appell sets for the forward finite-difference Dirac operator.

The Appell polynomials are ``w_k = mu_k * Lambda_h**k a`` where ``Lambda_h`` is
the raising operator (Fourier dual of D_h^+) attached to a kappa series and
``mu_k`` is fixed by requiring ``D_h^+ w_k = k w_{k-1}``.  The same polynomials
are reachable through the intertwining operator sigma (Rodrigues-type path),
which the tests use as an independent route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, partial
from typing import Sequence

from .clifford import DimensionError, Multivector, as_rational
from .operators import (
    CoordMul,
    Identity,
    Operator,
    PartialDeriv,
    ProductOverCoords,
    SeriesOp,
    _mono_image,
    Sum,
    backward,
    blade,
    check_degree_lowering,
    commutator,
    dirac_backward,
    dirac_continuum,
    dirac_forward,
    discrete_laplacian,
    forward,
    op_apply,
    op_equal_truncated,
    translate,
    x_epsilon,
)
from .poly import CliffordPolynomial, falling_factorial, mi_factorial, multi_indices
from .series import (
    Bernoulli2,
    Charlier,
    CliffordHermite2h,
    Falling,
    KappaSpec,
    TruncatedSeries,
    central_u_series,
    cosh_series,
    lambda_series_per_coordinate,
    log_kappa_series,
    log_lambda_series_per_coordinate,
    normalized_kappa_series,
    pincherle_series,
)

FAMILIES = ("falling", "charlier", "bernoulli2", "chermite2h")


@dataclass(frozen=True)
class AppellFamilySpec:
    n: int
    h: Fraction
    kappa: KappaSpec = field(default_factory=Falling)
    base: Multivector | None = None

    def __post_init__(self):
        h = as_rational(self.h)
        if h <= 0:
            raise ValueError("mesh width h must be positive")
        if self.n < 1:
            raise DimensionError("n must be >= 1")
        object.__setattr__(self, "h", h)
        own = getattr(self.kappa, "h", None)
        if own is not None and own != h:
            raise ValueError(f"kappa mesh {own} differs from family mesh {h}")
        base = self.base if self.base is not None else Multivector.scalar(1, self.n)
        if base.n != self.n:
            raise DimensionError("base multivector has the wrong dimension")
        if not base:
            raise ValueError("base Clifford constant must be nonzero")
        object.__setattr__(self, "base", base)

    @property
    def name(self) -> str:
        return self.kappa.name

    def with_kappa(self, kappa: KappaSpec) -> "AppellFamilySpec":
        return AppellFamilySpec(self.n, self.h, kappa, self.base)


def family(name: str, n: int, h, a=None, base: Multivector | None = None) -> AppellFamilySpec:
    """Build a catalog family by name."""
    h = as_rational(h)
    if name == "falling":
        kappa = Falling()
    elif name == "charlier":
        if a is None:
            raise ValueError("charlier family needs the parameter a")
        kappa = Charlier(as_rational(a), h)
    elif name == "bernoulli2":
        kappa = Bernoulli2(h)
    elif name == "chermite2h":
        kappa = CliffordHermite2h(h)
    else:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
    return AppellFamilySpec(n, h, kappa, base)


# cached series sources (callables order -> series, re-derivable to any order)

@lru_cache(maxsize=None)
def _kappa_norm(kappa: KappaSpec, order: int) -> TruncatedSeries:
    return normalized_kappa_series(kappa, order)


@lru_cache(maxsize=None)
def _kappa_inv(kappa: KappaSpec, order: int) -> TruncatedSeries:
    return normalized_kappa_series(kappa, order).reciprocal()


@lru_cache(maxsize=None)
def _pincherle(kappa: KappaSpec, order: int) -> TruncatedSeries:
    return pincherle_series(kappa, order)


@lru_cache(maxsize=None)
def _log_kappa(kappa: KappaSpec, order: int) -> TruncatedSeries:
    return log_kappa_series(kappa, order)


@lru_cache(maxsize=None)
def _lambda1(kappa: KappaSpec, h: Fraction, order: int) -> TruncatedSeries:
    return lambda_series_per_coordinate(kappa, h, order)


@lru_cache(maxsize=None)
def _log_lambda1(kappa: KappaSpec, h: Fraction, order: int) -> TruncatedSeries:
    return log_lambda_series_per_coordinate(kappa, h, order)


@lru_cache(maxsize=None)
def _sech(h: Fraction, order: int) -> TruncatedSeries:
    return cosh_series(h, order).reciprocal()


# mu constants

@dataclass(frozen=True)
class MuTable:
    n: int
    values: tuple

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)


@lru_cache(maxsize=None)
def mu_table(n: int, K: int) -> MuTable:
    """mu_0..mu_K from mu_{2m} = -mu_{2m-1}, mu_{2m+1} = -(2m+1)/(2m+n) mu_{2m}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    mu = [Fraction(1)]
    for k in range(1, K + 1):
        if k % 2 == 0:
            mu.append(-mu[k - 1])
        else:
            m = (k - 1) // 2
            mu.append(-Fraction(2 * m + 1, 2 * m + n) * mu[k - 1])
    return MuTable(n, tuple(mu))


def pochhammer(a, m: int) -> Fraction:
    a = as_rational(a)
    out = Fraction(1)
    for i in range(m):
        out *= a + i
    return out


def mu_closed_form(n: int, k: int) -> Fraction:
    """Closed form equivalent to the recursion in :func:`mu_table`."""
    m, odd = divmod(k, 2)
    if odd:
        return -Fraction(1, n) * pochhammer(Fraction(3, 2), m) / pochhammer(Fraction(n, 2) + 1, m)
    return pochhammer(Fraction(1, 2), m) / pochhammer(Fraction(n, 2), m)


def mu_printed_closed_form(n: int, k: int) -> Fraction:
    """The sign-alternating Pochhammer expression kept for the discrepancy report."""
    m, odd = divmod(k, 2)
    if odd:
        return (-1) ** m * pochhammer(Fraction(3, 2), m) / pochhammer(Fraction(n, 2) + 1, m)
    return (-1) ** m * pochhammer(Fraction(1, 2), m) / pochhammer(Fraction(n, 2), m)


# operators attached to a family

def pincherle_operator(kappa: KappaSpec, j: int) -> Operator:
    """kappa'(d_j) / kappa(d_j)."""
    return SeriesOp(partial(_pincherle, kappa), PartialDeriv(j))


def raising_operator(kappa: KappaSpec, j: int, h) -> Operator:
    """M_j = (x_j - kappa'/kappa(d_j)) T_h^{-j}."""
    h = as_rational(h)
    if isinstance(kappa, Falling):
        return CoordMul(j) * translate(j, -h)
    return (CoordMul(j) - pincherle_operator(kappa, j)) * translate(j, -h)


def lambda_h_operator(spec: AppellFamilySpec) -> Operator:
    """Lambda_h = sum_j e_j (x_j - kappa'/kappa(d_j)) T_h^{-j}."""
    return Sum(tuple(blade((j,), spec.n) * raising_operator(spec.kappa, j, spec.h)
                     for j in range(1, spec.n + 1)))


def log_lambda_operator(spec: AppellFamilySpec) -> Operator:
    """log lambda(D_h^+) = sum_j (log lambda_1)(forward difference_j)."""
    return Sum(tuple(SeriesOp(partial(_log_lambda1, spec.kappa, spec.h), forward(j, spec.h))
                     for j in range(1, spec.n + 1)))


def log_sigma_operator(spec: AppellFamilySpec) -> Operator:
    """sum_j log kappa(d_j), the same shift-invariant operator built from derivatives."""
    return Sum(tuple(SeriesOp(partial(_log_kappa, spec.kappa), PartialDeriv(j))
                     for j in range(1, spec.n + 1)))


def lambda_h_from_log_lambda(spec: AppellFamilySpec) -> Operator:
    """X_h - sum_j e_j [log lambda(D_h^+), x_j] T_h^{-j}."""
    L = log_lambda_operator(spec)
    terms = [x_epsilon(spec.h, spec.n)]
    for j in range(1, spec.n + 1):
        terms.append(-(blade((j,), spec.n) * commutator(L, CoordMul(j)) * translate(j, -spec.h)))
    return Sum(tuple(terms))


def lambda_h_literal_commutator(spec: AppellFamilySpec) -> Operator:
    """X_h - [log lambda(D_h^+), x] read literally, x the Clifford vector variable."""
    L = log_lambda_operator(spec)
    x_op = Sum(tuple(blade((j,), spec.n) * CoordMul(j) for j in range(1, spec.n + 1)))
    return x_epsilon(spec.h, spec.n) - commutator(L, x_op)


def sigma_operator(spec: AppellFamilySpec) -> Operator:
    """sigma(D_h^+) = prod_j kappa(d_j), normalised so that sigma(0) = 1."""
    if isinstance(spec.kappa, Falling):
        return Identity()
    return ProductOverCoords(partial(_kappa_norm, spec.kappa), "partial")


def sigma_inverse_operator(spec: AppellFamilySpec) -> Operator:
    if isinstance(spec.kappa, Falling):
        return Identity()
    return ProductOverCoords(partial(_kappa_inv, spec.kappa), "partial")


def sigma_from_lambda(spec: AppellFamilySpec) -> Operator:
    """The same sigma assembled as prod_j lambda_1(forward difference_j)."""
    return ProductOverCoords(partial(_lambda1, spec.kappa, spec.h), "forward", spec.h)


def sigma_inverse_apply(spec: AppellFamilySpec, p: CliffordPolynomial) -> CliffordPolynomial:
    return op_apply(sigma_inverse_operator(spec), p)


# Appell polynomials

@lru_cache(maxsize=256)
def _lambda_powers(spec: AppellFamilySpec, K: int) -> tuple:
    op = lambda_h_operator(spec)
    p = CliffordPolynomial.constant(spec.base, spec.n)
    out = [p]
    for _ in range(K):
        p = op_apply(op, p)
        out.append(p)
    return tuple(out)


def appell_sequence(spec: AppellFamilySpec, K: int,
                    mu: Sequence[Fraction] | None = None) -> list[CliffordPolynomial]:
    """w_0 .. w_K by the operational rule."""
    mu = mu if mu is not None else mu_table(spec.n, K).values
    powers = _lambda_powers(spec, K)
    return [powers[k].scale(mu[k]) for k in range(K + 1)]


def appell_w(spec: AppellFamilySpec, k: int) -> CliffordPolynomial:
    if k < 0:
        raise ValueError("k must be >= 0")
    return _lambda_powers(spec, k)[k].scale(mu_table(spec.n, k)[k])


@dataclass
class AppellReport:
    family: str
    K: int
    checked: int
    passed_count: int
    first_failure: int | None = None
    difference: CliffordPolynomial | None = None

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def summary(self) -> str:
        return f"{self.passed_count}/{self.checked} pass"

    def to_json(self) -> dict:
        out = {"family": self.family, "K": self.K, "checked": self.checked,
               "passed": self.passed_count, "ok": self.passed, "summary": self.summary()}
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure
            out["difference"] = self.difference.to_json()
        return out


def _check_lowering(ws: Sequence[CliffordPolynomial], D: Operator, name: str, K: int) -> AppellReport:
    passed = 0
    first = diff = None
    for k in range(1, K + 1):
        delta = op_apply(D, ws[k]) - ws[k - 1].scale(k)
        if delta:
            if first is None:
                first, diff = k, delta
        else:
            passed += 1
    return AppellReport(name, K, K, passed, first, diff)


def appell_verify(spec: AppellFamilySpec, K: int,
                  mu: Sequence[Fraction] | None = None) -> AppellReport:
    """Check D_h^+ w_k = k w_{k-1} for k = 1..K."""
    if K < 1:
        raise ValueError("K must be >= 1")
    ws = appell_sequence(spec, K, mu)
    return _check_lowering(ws, dirac_forward(spec.h, spec.n), spec.name, K)


def rodrigues_w(spec: AppellFamilySpec, k: int) -> CliffordPolynomial:
    """sigma^{-1} applied to the falling-factorial Appell polynomial of degree k."""
    reference = appell_w(spec.with_kappa(Falling()), k)
    return sigma_inverse_apply(spec, reference)


def intertwining_check(spec: AppellFamilySpec, d: int = 5):
    """Lambda_h == sigma^{-1} X_h sigma on degree <= d."""
    rhs = sigma_inverse_operator(spec) * x_epsilon(spec.h, spec.n) * sigma_operator(spec)
    return op_equal_truncated(lambda_h_operator(spec), rhs, spec.n, d)


# quasi-monomials

def central_raising(j: int, h) -> Operator:
    """x_j cosh(h d_j)^{-1}."""
    return CoordMul(j) * SeriesOp(partial(_sech, as_rational(h)), PartialDeriv(j))


def central_lowering(j: int, h) -> Operator:
    h = as_rational(h)
    return Fraction(1, 2) * (forward(j, h) + backward(j, h))


def quasi_monomial(ladder: str, kappa: KappaSpec, alpha: Sequence[int], h) -> CliffordPolynomial:
    """m_alpha = prod_j M_j^{alpha_j} 1 for the forward or central ladder."""
    h = as_rational(h)
    n = len(alpha)
    if ladder == "forward":
        ops = [raising_operator(kappa, j, h) for j in range(1, n + 1)]
    elif ladder == "central":
        if not isinstance(kappa, Falling):
            raise ValueError("central ladder is only defined for kappa = 1")
        ops = [central_raising(j, h) for j in range(1, n + 1)]
    else:
        raise ValueError(f"unknown ladder {ladder!r}")
    p = CliffordPolynomial.constant(1, n)
    for j, aj in enumerate(alpha):
        for _ in range(aj):
            p = op_apply(ops[j], p)
    return p


def lowering_operator(ladder: str, j: int, h) -> Operator:
    if ladder == "forward":
        return forward(j, h)
    if ladder == "central":
        return central_lowering(j, h)
    raise ValueError(f"unknown ladder {ladder!r}")


def quasi_monomiality_check(ladder: str, kappa: KappaSpec, n: int, h, degree: int) -> list:
    """Failures of L_j m_alpha = alpha_j m_{alpha - e_j} for |alpha| <= degree."""
    failures = []
    cache: dict = {}

    def m(alpha):
        if alpha not in cache:
            cache[alpha] = quasi_monomial(ladder, kappa, alpha, h)
        return cache[alpha]

    for d in range(degree + 1):
        for alpha in multi_indices(n, d):
            for j in range(1, n + 1):
                lhs = op_apply(lowering_operator(ladder, j, h), m(alpha))
                if alpha[j - 1]:
                    lower = alpha[:j - 1] + (alpha[j - 1] - 1,) + alpha[j:]
                    rhs = m(lower).scale(alpha[j - 1])
                else:
                    rhs = CliffordPolynomial.zero(n)
                if lhs != rhs:
                    failures.append((alpha, j))
    return failures


def _univariate_falling(i: int, h: Fraction, n: int, j: int) -> CliffordPolynomial:
    alpha = [0] * n
    alpha[j] = i
    return falling_factorial(alpha, h, n)


def central_egf_quasimonomial(alpha: Sequence[int], h) -> CliffordPolynomial:
    """Taylor coefficient [(d/dy)^alpha G_h(x, u(y))]_{y=0}, G_h the falling-factorial EGF."""
    h = as_rational(h)
    n = len(alpha)
    out = CliffordPolynomial.constant(1, n)
    for j, k in enumerate(alpha):
        if k == 0:
            continue
        u = central_u_series(h, max(k, 1))
        factor = CliffordPolynomial.zero(n)
        power = TruncatedSeries.constant(1, u.order)
        for beta in range(k + 1):
            # k! [y^k] u^beta
            c = power.coeffs[k] * math.factorial(k)
            if c:
                factor = factor + _univariate_falling(beta, h, n, j).scale(c / math.factorial(beta))
            power = power * u
        out = out * factor
    return out


def central_single_term_formula(alpha: Sequence[int], h) -> CliffordPolynomial:
    """(gamma_alpha / alpha!) (x;h)_alpha keeping only the beta = alpha term."""
    h = as_rational(h)
    gamma = Fraction(1)
    for k in alpha:
        if k:
            u = central_u_series(h, k)
            power = TruncatedSeries.constant(1, k)
            for _ in range(k):
                power = power * u
            gamma *= power.coeffs[k] * math.factorial(k)
    return falling_factorial(alpha, h).scale(gamma / mi_factorial(tuple(alpha)))


def forward_egf_quasimonomial(kappa: KappaSpec, alpha: Sequence[int], h,
                              prefactor: str = "reciprocal") -> CliffordPolynomial:
    """Taylor coefficients of prod_j lambda_1(y_j)^{-1} (1 + h y_j)^{x_j / h}.

    ``prefactor="direct"`` multiplies by lambda_1 instead of its reciprocal.
    """
    h = as_rational(h)
    n = len(alpha)
    K = max(alpha) if alpha else 0
    lam = _lambda1(kappa, h, K)
    pre = lam.reciprocal() if prefactor == "reciprocal" else lam
    out = CliffordPolynomial.constant(1, n)
    for j, k in enumerate(alpha):
        factor = CliffordPolynomial.zero(n)
        for i in range(k + 1):
            c = pre.coeffs[k - i] * Fraction(math.factorial(k), math.factorial(i))
            if c:
                factor = factor + _univariate_falling(i, h, n, j).scale(c)
        out = out * factor
    return out


def clear_caches() -> None:
    """Drop memoised series, mu tables, Lambda_h powers and monomial images."""
    for fn in (_kappa_norm, _kappa_inv, _pincherle, _log_kappa, _lambda1, _log_lambda1,
               _sech, mu_table, _lambda_powers, _mono_image):
        fn.cache_clear()


# EGF truncation

@dataclass
class EGFTruncation:
    K: int
    w: list

    def coefficient(self, k: int) -> CliffordPolynomial:
        return self.w[k]


def egf_truncate(spec: AppellFamilySpec, K: int) -> EGFTruncation:
    return EGFTruncation(K, appell_sequence(spec, K))


@dataclass
class EGFReport:
    initial_ok: bool
    evolution: AppellReport

    @property
    def passed(self) -> bool:
        return self.initial_ok and self.evolution.passed

    def to_json(self) -> dict:
        return {"initial_ok": self.initial_ok, "ok": self.passed, **self.evolution.to_json()}


def egf_verify(egf: EGFTruncation, spec: AppellFamilySpec) -> EGFReport:
    """t-coefficients of D_h^+ G = t G, and G(x, 0) = a."""
    initial = egf.w[0] == CliffordPolynomial.constant(spec.base, spec.n)
    D = dirac_forward(spec.h, spec.n)
    if egf.K == 0:
        return EGFReport(initial, AppellReport(spec.name, 0, 0, 0))
    return EGFReport(initial, _check_lowering(egf.w, D, spec.name, egf.K))


def continuum_egf_check(n: int, K: int, mu: Sequence[Fraction] | None = None) -> AppellReport:
    """Order-by-order D G = t G for G = sum_k mu_k x^k t^k / k!, D the Dirac operator."""
    mu = mu if mu is not None else mu_table(n, K).values
    x = CliffordPolynomial.vector_variable(n)
    power = CliffordPolynomial.constant(1, n)
    terms = []
    for k in range(K + 1):
        terms.append(power.scale(Fraction(mu[k], math.factorial(k))))
        power = power * x
    D = dirac_continuum(n)
    failures = []
    for k in range(0, K + 1):
        lhs = op_apply(D, terms[k])
        rhs = terms[k - 1] if k else CliffordPolynomial.zero(n)
        if lhs != rhs:
            failures.append(k)
    first = failures[0] if failures else None
    diff = None
    if first is not None:
        diff = op_apply(D, terms[first]) - (terms[first - 1] if first else CliffordPolynomial.zero(n))
    return AppellReport("continuum", K, K + 1, K + 1 - len(failures), first, diff)


def hypergeometric_coefficients(n: int, K: int, sign: int = 1) -> list[Fraction]:
    """Coefficient of t^k x^k in 0F1(n/2; s t^2 x^2/4) - (t x / n) 0F1(n/2 + 1; s t^2 x^2/4).

    ``sign = +1`` matches the mu recursion.  With ``sign = -1`` and the odd
    part's ``-1/n`` replaced by 1 one gets the printed splitting; see
    :func:`printed_hypergeometric_coefficients`.
    """
    out = []
    for k in range(K + 1):
        m, odd = divmod(k, 2)
        q = Fraction(sign, 4) ** m / math.factorial(m)
        if odd:
            out.append(-Fraction(1, n) * q / pochhammer(Fraction(n, 2) + 1, m))
        else:
            out.append(q / pochhammer(Fraction(n, 2), m))
    return out


def printed_hypergeometric_coefficients(n: int, K: int) -> list[Fraction]:
    """0F1(n/2; -t^2 x^2/4) + t x 0F1(n/2 + 1; -t^2 x^2/4)."""
    out = []
    for k in range(K + 1):
        m, odd = divmod(k, 2)
        q = Fraction(-1, 4) ** m / math.factorial(m)
        out.append(q / pochhammer(Fraction(n, 2) + (1 if odd else 0), m))
    return out


# Weierstrass / Hermite and heat flow

def continuum_laplacian(n: int) -> Operator:
    return Sum(tuple(PartialDeriv(j) * PartialDeriv(j) for j in range(1, n + 1)))


def exp_lowering_apply(op: Operator, t, p: CliffordPolynomial) -> CliffordPolynomial:
    """exp(t op) p as the finite sum over powers of a degree-lowering ``op``."""
    t = as_rational(t)
    check_degree_lowering(op, p)
    acc = CliffordPolynomial.zero(p.n)
    term = p
    m = 0
    while term:
        acc = acc + term.scale(t ** m / math.factorial(m))
        term = op_apply(op, term)
        m += 1
    return acc


def hermite_polynomial(beta: Sequence[int], n: int | None = None) -> CliffordPolynomial:
    """H_beta = exp(-Delta/2) x^beta (D^2 = -Delta in Cl(0,n))."""
    beta = tuple(beta)
    n = len(beta) if n is None else n
    return exp_lowering_apply(continuum_laplacian(n), Fraction(-1, 2),
                              CliffordPolynomial.monomial(beta, 1, n))


def weierstrass(p: CliffordPolynomial) -> CliffordPolynomial:
    """exp(+Delta/2) p, the inverse of the Hermite map."""
    return exp_lowering_apply(continuum_laplacian(p.n), Fraction(1, 2), p)


@dataclass
class HeatSolution:
    """g(x, t) = sum_m t^m coeffs[m]."""

    h: Fraction
    coeffs: list

    def at(self, t) -> CliffordPolynomial:
        t = as_rational(t)
        acc = CliffordPolynomial.zero(self.coeffs[0].n)
        for m, c in enumerate(self.coeffs):
            acc = acc + c.scale(t ** m)
        return acc

    def time_derivative(self) -> list:
        return [c.scale(m) for m, c in enumerate(self.coeffs)][1:]

    def satisfies_heat_equation(self) -> bool:
        """d/dt g == Delta_h g coefficientwise in t."""
        lap = discrete_laplacian(self.h, self.coeffs[0].n)
        dt = self.time_derivative() + [CliffordPolynomial.zero(self.coeffs[0].n)]
        return all(op_apply(lap, c) == d for c, d in zip(self.coeffs, dt))


def heat_solution(p: CliffordPolynomial, h) -> HeatSolution:
    """exp(t Delta_h) p with t left symbolic."""
    h = as_rational(h)
    lap = discrete_laplacian(h, p.n)
    check_degree_lowering(lap, p)
    coeffs = []
    term = p
    m = 0
    while term:
        coeffs.append(term.scale(Fraction(1, math.factorial(m))))
        term = op_apply(lap, term)
        m += 1
    return HeatSolution(h, coeffs or [CliffordPolynomial.zero(p.n)])


def heat_propagate(alpha: Sequence[int], h, t=None, ladder: str = "forward"):
    """Heat flow started at the quasi-monomial m_alpha.

    Returns the symbolic :class:`HeatSolution` or, given ``t``, its value.
    """
    m_alpha = quasi_monomial(ladder, Falling(), alpha, h)
    sol = heat_solution(m_alpha, h)
    return sol if t is None else sol.at(t)


# connection formulas

def charlier_connection_check(h, n: int, d: int, perturb=0):
    """X_h - D_h^- versus sum_j e_j((x_j + 1/h) T_h^{-j} - (1/h) I)."""
    h = as_rational(h)
    lhs = x_epsilon(h, n) - dirac_backward(h, n)
    terms = []
    for j in range(1, n + 1):
        shifted = (CoordMul(j) + (1 / h) * Identity()) * translate(j, -h)
        terms.append(blade((j,), n) * (shifted - (1 / h) * Identity()))
    rhs = Sum(tuple(terms))
    if perturb:
        rhs = rhs + as_rational(perturb) * Identity()
    return op_equal_truncated(lhs, rhs, n, d)


@dataclass
class MultinomialReport:
    m: int
    lhs: CliffordPolynomial
    stratum: CliffordPolynomial
    all_strata: CliffordPolynomial

    @property
    def stratum_matches(self) -> bool:
        return self.lhs == self.stratum

    @property
    def all_strata_matches(self) -> bool:
        return self.lhs == self.all_strata


def multinomial_w2m_check(h, n: int, m: int) -> MultinomialReport:
    """(X_h)^{2m} 1 against the multinomial expansion in falling factorials."""
    h = as_rational(h)
    lhs = op_apply(x_epsilon(h, n) ** (2 * m), CliffordPolynomial.constant(1, n))

    def stratum(s: int) -> CliffordPolynomial:
        acc = CliffordPolynomial.zero(n)
        for alpha in multi_indices(n, s):
            two = tuple(2 * a for a in alpha)
            acc = acc + falling_factorial(two, h, n).scale(Fraction(math.factorial(m), mi_factorial(alpha)))
        return acc

    sign = (-1) ** m
    single = stratum(m).scale(sign)
    total = CliffordPolynomial.zero(n)
    for s in range(m + 1):
        total = total + stratum(s)
    return MultinomialReport(m, lhs, single, total.scale(sign))


@dataclass
class CharlierDerivativeReport:
    k: int
    a_coefficients: list
    initial_ok: bool
    holds: bool

    @property
    def passed(self) -> bool:
        return self.initial_ok and self.holds


def charlier_a_polynomial(n: int, h, k: int) -> list[CliffordPolynomial]:
    """Coefficients c_i with w_k(x;h;lambda_a) = sum_i a^i c_i, exact in a.

    Built by Lagrange interpolation over k + 2 integer values of a; the
    a-degree is at most k so the top coefficient must vanish.
    """
    h = as_rational(h)
    nodes = [Fraction(i) for i in range(k + 2)]
    values = [appell_w(family("charlier", n, h, a), k) if a else
              appell_w(family("falling", n, h), k) for a in nodes]
    coeffs = [CliffordPolynomial.zero(n) for _ in nodes]
    for i, ai in enumerate(nodes):
        # Lagrange basis polynomial prod_{l != i} (a - a_l) / (a_i - a_l), expanded in a
        basis = [Fraction(1)]
        denom = Fraction(1)
        for l, al in enumerate(nodes):
            if l == i:
                continue
            basis = [Fraction(0)] + basis
            for r in range(len(basis) - 1):
                basis[r] -= al * basis[r + 1]
            denom *= ai - al
        for r, b in enumerate(basis):
            if b:
                coeffs[r] = coeffs[r] + values[i].scale(b / denom)
    if coeffs[-1]:
        raise ArithmeticError("interpolated a-degree exceeds k")
    return coeffs[:-1]


def charlier_a_derivative_check(n: int, h, k: int, with_factor: bool = False) -> CharlierDerivativeReport:
    """d/da w = -(sum_j forward_j) w, or with the extra factor a when ``with_factor``."""
    h = as_rational(h)
    cs = charlier_a_polynomial(n, h, k)
    S = Sum(tuple(forward(j, h) for j in range(1, n + 1)))
    images = [-op_apply(S, c) for c in cs]
    zero = CliffordPolynomial.zero(n)
    top = len(cs)
    # d/da sum a^i c_i = sum a^i (i+1) c_{i+1}
    lhs = [cs[i + 1].scale(i + 1) if i + 1 < top else zero for i in range(top + 1)]
    if with_factor:
        rhs = [zero] + images
    else:
        rhs = images + [zero]
    holds = all(l == r for l, r in zip(lhs, rhs))
    initial = cs[0] == appell_w(family("falling", n, h), k)
    return CharlierDerivativeReport(k, cs, initial, holds)
