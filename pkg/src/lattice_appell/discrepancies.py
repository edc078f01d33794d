"""Cross-checks of printed closed forms against the defining relations.

Each check recomputes both sides exactly.  An entry is emitted only when the
printed form and the construction disagree; the construction (Appell property,
D G = t G, operator identities) is what the rest of the library treats as
normative.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .appell import (
    central_egf_quasimonomial,
    central_single_term_formula,
    charlier_a_derivative_check,
    family,
    forward_egf_quasimonomial,
    hypergeometric_coefficients,
    lambda_h_literal_commutator,
    lambda_h_operator,
    mu_closed_form,
    mu_printed_closed_form,
    mu_table,
    multinomial_w2m_check,
    pochhammer,
    printed_hypergeometric_coefficients,
    quasi_monomial,
)
from .clifford import format_rational
from .operators import op_equal_truncated
from .poly import CliffordPolynomial
from .series import Bernoulli2


def _q(v: Fraction) -> str:
    return format_rational(Fraction(v))


@dataclass
class Discrepancy:
    id: str
    summary: str
    normative: object
    printed: object
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return _q(v)
            if isinstance(v, CliffordPolynomial):
                return v.to_json()
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            return v
        return {"id": self.id, "summary": self.summary, "normative": enc(self.normative),
                "printed": enc(self.printed), "details": enc(self.details)}


def mu_closed_form_discrepancy(n: int = 2, K: int = 8) -> Discrepancy | None:
    rec = list(mu_table(n, K).values)
    assert rec == [mu_closed_form(n, k) for k in range(K + 1)]
    printed = [mu_printed_closed_form(n, k) for k in range(K + 1)]
    bad = [k for k in range(K + 1) if rec[k] != printed[k]]
    if not bad:
        return None
    return Discrepancy(
        "mu_closed_form",
        "sign-alternating Pochhammer closed form for mu_k disagrees with the recursion "
        "forced by D G = t G",
        rec, printed, {"n": n, "mismatched_k": bad})


def mu_recursion_index_discrepancy(n: int = 2, K: int = 7) -> Discrepancy | None:
    """Odd-step recursion written with mu_{2m-1} instead of mu_{2m}."""
    rec = list(mu_table(n, K).values)
    alt = [Fraction(1)]
    for k in range(1, K + 1):
        m = k // 2
        if k % 2 == 0:
            alt.append(-alt[k - 1])
        else:
            prev = alt[k - 2] if k >= 2 else Fraction(0)
            alt.append(-Fraction(2 * m + 1, 2 * m + n) * prev)
    bad = [k for k in range(K + 1) if rec[k] != alt[k]]
    if not bad:
        return None
    return Discrepancy(
        "mu_recursion_index",
        "odd recursion step expressed through mu_{2m-1}; the t^{2m+1} coefficient forces mu_{2m}",
        rec, alt, {"n": n, "mismatched_k": bad})


def hypergeometric_sign_discrepancy(n: int = 2, K: int = 8) -> Discrepancy | None:
    from math import factorial
    rec = [mu / factorial(k) for k, mu in enumerate(mu_table(n, K).values)]
    assert rec == hypergeometric_coefficients(n, K, +1)
    printed = printed_hypergeometric_coefficients(n, K)
    bad = [k for k in range(K + 1) if rec[k] != printed[k]]
    if not bad:
        return None
    return Discrepancy(
        "egf_0f1_argument",
        "0F1 splitting with argument -t^2 x^2/4 and odd prefactor t x does not reproduce "
        "mu_k/k!; the recursion gives 0F1(n/2; t^2 x^2/4) - (t x/n) 0F1(n/2+1; t^2 x^2/4)",
        rec, printed, {"n": n, "mismatched_k": bad})


def x2m_normalisation_discrepancy(n: int = 2, m_max: int = 4) -> Discrepancy | None:
    """(X_h)^{2m} a = w_{2m}/mu_{2m}; compare with the printed (-1)^m (n/2)_m/(1/2)_m."""
    rec, printed = [], []
    for m in range(m_max + 1):
        rec.append(1 / mu_table(n, 2 * m)[2 * m])
        printed.append((-1) ** m * pochhammer(Fraction(n, 2), m) / pochhammer(Fraction(1, 2), m))
    bad = [m for m in range(m_max + 1) if rec[m] != printed[m]]
    if not bad:
        return None
    return Discrepancy(
        "x2m_normalisation",
        "factor relating (X_h)^{2m} a to w_{2m} carries a spurious (-1)^m",
        rec, printed, {"n": n, "mismatched_m": bad})


def central_single_term_discrepancy(h=Fraction(1), max_degree: int = 3) -> Discrepancy | None:
    h = Fraction(h)
    for k in range(max_degree + 1):
        alpha = (k,)
        true = central_egf_quasimonomial(alpha, h)
        assert true == quasi_monomial("central", __import__(
            "lattice_appell.series", fromlist=["Falling"]).Falling(), alpha, h)
        single = central_single_term_formula(alpha, h)
        if true != single:
            return Discrepancy(
                "central_single_term",
                "central-difference quasi-monomial keeps only the beta = alpha term of the "
                "EGF expansion; the full expansion and the ladder operators disagree with it",
                true, single, {"alpha": list(alpha), "h": _q(h)})
    return None


def charlier_evolution_discrepancy(n: int = 2, h=Fraction(1), k: int = 3) -> Discrepancy | None:
    free = charlier_a_derivative_check(n, h, k, with_factor=False)
    factored = charlier_a_derivative_check(n, h, k, with_factor=True)
    if free.passed and not factored.passed:
        return Discrepancy(
            "charlier_evolution_factor",
            "Charlier family solves d/da f = -(sum_j forward_j) f; the extra factor a in the "
            "printed evolution equation is not satisfied",
            "d/da f = -sum_j forward_j f", "d/da f = -a sum_j forward_j f",
            {"n": n, "h": _q(Fraction(h)), "k": k,
             "a_coefficients": [c.to_json() for c in free.a_coefficients]})
    return None


def w2m_stratum_discrepancy(n: int = 2, h=Fraction(1), m: int = 2) -> Discrepancy | None:
    rep = multinomial_w2m_check(h, n, m)
    if rep.stratum_matches and not rep.all_strata_matches:
        return Discrepancy(
            "w2m_stratum",
            "multinomial expansion of (X_h)^{2m} 1 needs only |alpha| = m; the printed double "
            "sum over s = 0..m adds lower strata",
            rep.stratum, rep.all_strata, {"n": n, "h": _q(Fraction(h)), "m": m})
    return None


def bernoulli_egf_prefactor_discrepancy(h=Fraction(1), k: int = 2) -> Discrepancy | None:
    kappa = Bernoulli2(Fraction(h))
    alpha = (k,)
    ladder = quasi_monomial("forward", kappa, alpha, kappa.h)
    recip = forward_egf_quasimonomial(kappa, alpha, kappa.h, "reciprocal")
    direct = forward_egf_quasimonomial(kappa, alpha, kappa.h, "direct")
    if ladder == recip and ladder != direct:
        return Discrepancy(
            "bernoulli2_egf_prefactor",
            "Bernoulli (second kind) EGF is printed with log(1+hy)/(hy); the ladder operators "
            "generate the reciprocal prefactor hy/log(1+hy)",
            ladder, direct, {"alpha": list(alpha), "h": _q(Fraction(h))})
    return None


def fourier_dual_commutator_discrepancy(n: int = 2, h=Fraction(1), d: int = 3) -> Discrepancy | None:
    spec = family("bernoulli2", n, h)
    res = op_equal_truncated(lambda_h_operator(spec), lambda_h_literal_commutator(spec), n, d)
    if res.equal:
        return None
    alpha, mask = res.witness
    return Discrepancy(
        "fourier_dual_commutator",
        "X_h - [log lambda(D_h^+), x] read as a literal commutator differs from the raising "
        "operator; the intended term is sum_j e_j [log lambda(D_h^+), x_j] T_h^{-j}",
        res.left, res.right, {"family": "bernoulli2", "n": n, "h": _q(Fraction(h)),
                              "witness": {"alpha": list(alpha), "blade_mask": mask}})


CHECKS = (
    mu_closed_form_discrepancy,
    mu_recursion_index_discrepancy,
    hypergeometric_sign_discrepancy,
    x2m_normalisation_discrepancy,
    central_single_term_discrepancy,
    charlier_evolution_discrepancy,
    w2m_stratum_discrepancy,
    bernoulli_egf_prefactor_discrepancy,
    fourier_dual_commutator_discrepancy,
)


def discrepancy_report() -> list[Discrepancy]:
    return [d for d in (check() for check in CHECKS) if d is not None]
