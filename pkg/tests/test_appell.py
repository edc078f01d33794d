import itertools
import math
from fractions import Fraction

import pytest

from lattice_appell.appell import (
    FAMILIES,
    AppellFamilySpec,
    appell_sequence,
    appell_verify,
    appell_w,
    central_egf_quasimonomial,
    central_single_term_formula,
    charlier_a_derivative_check,
    charlier_a_polynomial,
    charlier_connection_check,
    continuum_egf_check,
    continuum_laplacian,
    egf_truncate,
    egf_verify,
    exp_lowering_apply,
    family,
    forward_egf_quasimonomial,
    heat_propagate,
    heat_solution,
    hermite_polynomial,
    hypergeometric_coefficients,
    intertwining_check,
    lambda_h_from_log_lambda,
    lambda_h_literal_commutator,
    lambda_h_operator,
    log_lambda_operator,
    log_sigma_operator,
    mu_closed_form,
    mu_printed_closed_form,
    mu_table,
    multinomial_w2m_check,
    pochhammer,
    quasi_monomial,
    quasi_monomiality_check,
    rodrigues_w,
    sigma_from_lambda,
    sigma_inverse_apply,
    sigma_inverse_operator,
    sigma_operator,
    weierstrass,
)
from lattice_appell.clifford import Multivector
from lattice_appell.operators import (
    Identity,
    NotDegreeLoweringError,
    Sum,
    blade,
    dirac_backward,
    dirac_continuum,
    op_apply,
    op_equal_truncated,
    raising,
    x_epsilon,
)
from lattice_appell.poly import CliffordPolynomial, falling_factorial, poly_eval
from lattice_appell.series import Bernoulli2, Charlier, CliffordHermite2h, Falling

P = CliffordPolynomial
H = Fraction(1, 2)


def xj(j, n, power=1):
    alpha = [0] * n
    alpha[j - 1] = power
    return P.monomial(alpha, 1, n)


def specs(n, h):
    return [family("falling", n, h), family("charlier", n, h, 2), family("charlier", n, h, 1),
            family("bernoulli2", n, h), family("chermite2h", n, h)]


def lattice_dirac(p, h, point):
    """D_h^+ p at a point, from point values only."""
    n = p.n
    acc = Multivector.zero(n)
    base = poly_eval(p, point)
    for j in range(n):
        shifted = list(point)
        shifted[j] += h
        diff = (poly_eval(p, shifted) - base).scale(1 / h)
        acc = acc + Multivector.generator(j + 1, n) * diff
    return acc


# mu constants

def test_mu_examples():
    for n in (1, 2, 3, 5):
        mu = mu_table(n, 4)
        assert mu[0] == 1
        assert mu[1] == Fraction(-1, n)
        assert mu[2] == Fraction(1, n)
        assert mu[4] == Fraction(3, n * (n + 2))


def test_mu_recursion_forced_by_dirac_powers():
    # D x^{2m} = -2m x^{2m-1}, D x^{2m+1} = -(2m+n) x^{2m}; matching t-coefficients of
    # D G = t G then gives mu_{k+1} c_{k+1} = mu_k / k!, with D x^{k+1} = c_{k+1} (k+1)! x^k / (k+1)!
    for n in (1, 2, 3, 4):
        xv = P.vector_variable(n)
        D = dirac_continuum(n)
        powers = [P.constant(1, n)]
        for _ in range(10):
            powers.append(powers[-1] * xv)
        mu = [Fraction(1)]
        for k in range(10):
            image = op_apply(D, powers[k + 1])
            c = -(k + 1) if (k + 1) % 2 == 0 else -(k + n)
            assert image == powers[k].scale(c)
            mu.append(mu[k] * (k + 1) / c)
        assert list(mu_table(n, 10).values) == mu


def test_mu_closed_form_and_printed_variant():
    for n in (1, 2, 3, 4):
        for k in range(11):
            assert mu_closed_form(n, k) == mu_table(n, 10)[k]
        assert any(mu_printed_closed_form(n, k) != mu_closed_form(n, k) for k in range(11))
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)


def test_continuum_egf_and_hypergeometric_form():
    for n in (1, 2, 3, 4):
        assert continuum_egf_check(n, 10).passed
        mu = mu_table(n, 10).values
        assert hypergeometric_coefficients(n, 10) == [m / math.factorial(k) for k, m in enumerate(mu)]
    bad = list(mu_table(2, 6).values)
    bad[3] = -bad[3]
    assert not continuum_egf_check(2, 6, bad).passed


# Appell sets

def test_appell_w_examples():
    e1 = Multivector.basis((1,), 1)
    for h in (Fraction(1), H):
        spec = family("falling", 1, h)
        assert appell_w(spec, 0) == P.constant(1, 1)
        assert appell_w(spec, 1) == xj(1, 1).left_mul(-e1)
        spec2 = family("falling", 2, h)
        expected = sum((xj(j, 2, 2) - xj(j, 2).scale(h) for j in (1, 2)), P.zero(2)).scale(Fraction(-1, 2))
        assert appell_w(spec2, 2) == expected


def test_appell_verify_examples():
    for n in (1, 2, 3):
        for h in (Fraction(1), H):
            rep = appell_verify(family("falling", n, h), 8)
            assert rep.passed and rep.summary() == "8/8 pass"
    rep = appell_verify(family("charlier", 2, 1, 2), 6)
    assert rep.passed and rep.summary() == "6/6 pass"


def test_appell_negative_control():
    mu = list(mu_table(2, 4).values)
    mu[2] += 1
    rep = appell_verify(family("falling", 2, 1), 4, mu)
    assert not rep.passed
    assert rep.first_failure == 2
    assert rep.difference


@pytest.mark.parametrize("name", FAMILIES)
def test_appell_property_by_lattice_evaluation(name):
    spec = family(name, 2, H, 2 if name == "charlier" else None)
    ws = appell_sequence(spec, 5)
    for k in range(1, 6):
        assert ws[k].degree() == k
        for m in itertools.product(range(-2, 3), repeat=2):
            point = [H * v for v in m]
            assert lattice_dirac(ws[k], H, point) == poly_eval(ws[k - 1], point).scale(k)


def test_clifford_base_constant():
    base = Multivector.basis((1, 2), 2, 3) + Multivector.scalar(1, 2)
    spec = family("charlier", 2, 1, 1, base=base)
    assert appell_w(spec, 0) == P.constant(base, 2)
    assert appell_verify(spec, 5).passed
    with pytest.raises(ValueError):
        family("falling", 2, 1, base=Multivector.zero(2))
    with pytest.raises(ValueError):
        AppellFamilySpec(1, Fraction(1, 2), Charlier(1, 1))


def test_egf_examples():
    assert egf_verify(egf_truncate(family("falling", 2, 1), 6), family("falling", 2, 1)).passed
    spec = family("charlier", 1, H, 3)
    assert egf_verify(egf_truncate(spec, 6), spec).passed
    rep = egf_verify(egf_truncate(spec, 0), spec)
    assert rep.passed and rep.initial_ok
    egf = egf_truncate(spec, 4)
    assert all(egf.coefficient(k).degree() <= k for k in range(5))


# Fourier dual and Rodrigues formula

def test_lambda_h_examples():
    for h in (Fraction(1), H):
        n = 2
        assert op_equal_truncated(lambda_h_operator(family("falling", n, h)), x_epsilon(h, n), n, 5)
        a = Fraction(3, 2)
        charlier = Sum(tuple(blade((j,), n) * (raising(j, h) - a * Identity()) for j in (1, 2)))
        assert op_equal_truncated(lambda_h_operator(family("charlier", n, h, a)), charlier, n, 5)
        ch = x_epsilon(h, n) - dirac_backward(2 * h, n)
        assert op_equal_truncated(lambda_h_operator(family("chermite2h", n, h)), ch, n, 5)


@pytest.mark.parametrize("name", FAMILIES)
def test_fourier_dual_paths(name):
    spec = family(name, 2, H, 1 if name == "charlier" else None)
    assert op_equal_truncated(lambda_h_from_log_lambda(spec), lambda_h_operator(spec), 2, 4)
    assert op_equal_truncated(log_lambda_operator(spec), log_sigma_operator(spec), 2, 4)
    assert op_equal_truncated(sigma_from_lambda(spec), sigma_operator(spec), 2, 4)
    assert op_equal_truncated(sigma_operator(spec) * sigma_inverse_operator(spec), Identity(), 2, 4)
    literal = op_equal_truncated(lambda_h_literal_commutator(spec), lambda_h_operator(spec), 2, 3)
    assert bool(literal) == (name == "falling")


def test_sigma_inverse_examples():
    a = Fraction(5, 3)
    for h in (Fraction(1), H):
        x1 = xj(1, 1)
        assert sigma_inverse_apply(family("falling", 1, h), x1) == x1
        assert sigma_inverse_apply(family("charlier", 1, h, a), x1) == x1 - P.constant(a, 1)
        assert sigma_inverse_apply(family("bernoulli2", 1, h), x1) == x1 + P.constant(h / 2, 1)


@pytest.mark.parametrize("name", FAMILIES)
def test_rodrigues_and_intertwining(name):
    for n in (1, 2):
        spec = family(name, n, H, 2 if name == "charlier" else None)
        for k in range(6):
            assert rodrigues_w(spec, k) == appell_w(spec, k)
        assert intertwining_check(spec, 4)


# quasi-monomials

def test_quasi_monomial_examples():
    a = Fraction(2)
    for h in (Fraction(1), H):
        for alpha in [(3,), (2, 1), (1, 0, 2)]:
            assert quasi_monomial("forward", Falling(), alpha, h) == falling_factorial(alpha, h)
        kappa = Charlier(a, h)
        x1 = xj(1, 1)
        assert quasi_monomial("forward", kappa, (1,), h) == x1 - P.constant(a, 1)
        expected = xj(1, 1, 2) - x1.scale(2 * a + h) + P.constant(a * a, 1)
        assert quasi_monomial("forward", kappa, (2,), h) == expected
        assert quasi_monomial("central", Falling(), (2,), h) == xj(1, 1, 2)
    with pytest.raises(ValueError):
        quasi_monomial("central", Charlier(1, 1), (1,), 1)


def test_quasi_monomiality():
    for h in (Fraction(1), H):
        assert quasi_monomiality_check("forward", Charlier(3, h), 2, h, 4) == []
        assert quasi_monomiality_check("forward", Bernoulli2(h), 1, h, 5) == []
        assert quasi_monomiality_check("central", Falling(), 2, h, 4) == []


def test_central_egf_path():
    for h in (Fraction(1), H):
        assert central_egf_quasimonomial((0,), h) == P.constant(1, 1)
        assert central_egf_quasimonomial((1,), h) == xj(1, 1)
        assert central_egf_quasimonomial((2,), h) == xj(1, 1, 2)
        for alpha in [(3,), (4,), (2, 1), (1, 3)]:
            assert central_egf_quasimonomial(alpha, h) == quasi_monomial("central", Falling(), alpha, h)
    assert central_egf_quasimonomial((3,), H) == xj(1, 1, 3) - xj(1, 1).scale(Fraction(1, 4))
    assert central_single_term_formula((2,), 1) != central_egf_quasimonomial((2,), 1)


def test_forward_egf_prefactor():
    for kappa in (Bernoulli2(H), Charlier(2, H), CliffordHermite2h(H)):
        for alpha in [(1,), (3,), (2, 1)]:
            ladder = quasi_monomial("forward", kappa, alpha, H)
            assert forward_egf_quasimonomial(kappa, alpha, H) == ladder
    assert forward_egf_quasimonomial(Bernoulli2(H), (2,), H, "direct") != \
        quasi_monomial("forward", Bernoulli2(H), (2,), H)


# Hermite and heat flow

def test_hermite_examples():
    assert hermite_polynomial((2,)) == xj(1, 1, 2) - P.constant(1, 1)
    assert hermite_polynomial((1, 1)) == xj(1, 2) * xj(2, 2)
    assert hermite_polynomial((0, 0)) == P.constant(1, 2)
    # probabilists' Hermite He_4 = x^4 - 6x^2 + 3
    assert hermite_polynomial((4,)) == xj(1, 1, 4) - xj(1, 1, 2).scale(6) + P.constant(3, 1)


def test_weierstrass_inverts_hermite():
    for beta in [(8,), (3, 5), (2, 2, 4)]:
        mono = P.monomial(beta, 1)
        assert weierstrass(hermite_polynomial(beta)) == mono
        assert hermite_polynomial(beta) == exp_lowering_apply(continuum_laplacian(len(beta)), Fraction(-1, 2), mono)


def test_heat_examples():
    from lattice_appell.operators import discrete_laplacian
    for h in (Fraction(1), H):
        lap = discrete_laplacian(h, 2)
        one = P.constant(1, 2)
        assert exp_lowering_apply(lap, 5, one) == one
        t = Fraction(3, 7)
        assert exp_lowering_apply(lap, t, xj(1, 2, 2)) == xj(1, 2, 2) + P.constant(2 * t, 2)
    with pytest.raises(NotDegreeLoweringError):
        exp_lowering_apply(Identity(), 1, xj(1, 1))


def test_heat_equation():
    for h in (Fraction(1), H):
        for alpha in [(4,), (2, 2), (1, 3)]:
            sol = heat_propagate(alpha, h)
            assert sol.satisfies_heat_equation()
            assert sol.at(0) == falling_factorial(alpha, h)
    sol = heat_solution(xj(1, 1, 2), 1)
    assert sol.coeffs == [xj(1, 1, 2), P.constant(2, 1)]


# connection formulas and discrepancies

def test_charlier_connection():
    assert charlier_connection_check(1, 2, 5)
    assert charlier_connection_check(H, 1, 6)
    assert not charlier_connection_check(1, 1, 2, perturb=Fraction(1, 3))


def test_multinomial():
    rep = multinomial_w2m_check(1, 2, 1)
    assert rep.stratum_matches
    assert rep.lhs == -(xj(1, 2) * (xj(1, 2) - P.constant(1, 2)) + xj(2, 2) * (xj(2, 2) - P.constant(1, 2)))
    rep0 = multinomial_w2m_check(1, 2, 0)
    assert rep0.stratum_matches and rep0.lhs == P.constant(1, 2)
    rep2 = multinomial_w2m_check(H, 2, 2)
    assert rep2.stratum_matches and not rep2.all_strata_matches


def test_x_square_scalar_identity():
    for n in (1, 2, 3, 4):
        X = x_epsilon(1, n)
        square = Sum(tuple(raising(j, 1) * raising(j, 1) for j in range(1, n + 1)))
        assert op_equal_truncated(X * X + square, Sum(()), n, 3)


def test_charlier_a_derivative():
    for k in range(4):
        assert charlier_a_derivative_check(2, H, k).passed
    assert not charlier_a_derivative_check(1, 1, 2, with_factor=True).passed
    cs = charlier_a_polynomial(1, 1, 2)
    a = Fraction(7, 3)
    direct = appell_w(family("charlier", 1, 1, a), 2)
    assert sum((c.scale(a**i) for i, c in enumerate(cs)), P.zero(1)) == direct


def test_unknown_family():
    with pytest.raises(ValueError):
        family("hermite", 1, 1)
    with pytest.raises(ValueError):
        family("charlier", 1, 1)
    assert isinstance(family("chermite2h", 1, H).kappa, CliffordHermite2h)


def test_custom_kappa_family():
    from lattice_appell.series import CustomCoefficients
    spec = AppellFamilySpec(2, H, CustomCoefficients((2, 1, 3)))
    assert appell_verify(spec, 6).passed
    assert all(rodrigues_w(spec, k) == appell_w(spec, k) for k in range(5))
    assert intertwining_check(spec, 3)
