"""Acceptance suite: one check per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
Runtime limits are measured from cold caches.
"""
import time
from fractions import Fraction

import pytest

from lattice_appell.appell import (
    appell_verify,
    appell_w,
    central_egf_quasimonomial,
    charlier_a_derivative_check,
    clear_caches,
    continuum_egf_check,
    family,
    heat_propagate,
    intertwining_check,
    quasi_monomial,
    rodrigues_w,
)
from lattice_appell.discrepancies import discrepancy_report
from lattice_appell.operators import Sum, op_equal_truncated, raising, relations_suite, x_epsilon
from lattice_appell.poly import CliffordPolynomial, multi_indices_upto
from lattice_appell.series import Falling
from lattice_appell.spectral import bessel_identity_check, count_symbol_zeros, quadrature_inverse_check

HS = (Fraction(1), Fraction(1, 2))
GRID = [("falling", None), ("charlier", 1), ("charlier", 2), ("bernoulli2", None), ("chermite2h", None)]


def grid_specs(ns=(1, 2, 3)):
    for name, a in GRID:
        for n in ns:
            for h in HS:
                yield family(name, n, h, a)


def label(spec):
    a = getattr(spec.kappa, "a", None)
    return f"{spec.name}{'' if a is None else f'(a={a})'} n={spec.n} h={spec.h}"


def timed(fn):
    clear_caches()
    start = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - start


def c1_weyl_heisenberg():
    bad = []
    for n in (1, 2, 3):
        for h in HS:
            rep = relations_suite(n, h, 6, include_square=False)
            bad += [f"n={n} h={h} {c.name}" for c in rep.failures]
    return not bad, f"{len(bad)} counterexamples"


def c2_appell():
    bad = []
    for spec in grid_specs():
        rep = appell_verify(spec, 8)
        if not rep.passed:
            bad.append(f"{label(spec)} k={rep.first_failure}")
    return not bad, "all families pass" if not bad else "; ".join(bad)


def c3_rodrigues():
    bad = []
    for spec in grid_specs():
        for k in range(7):
            if rodrigues_w(spec, k) != appell_w(spec, k):
                bad.append(f"rodrigues {label(spec)} k={k}")
        if not intertwining_check(spec, 5):
            bad.append(f"intertwining {label(spec)}")
    return not bad, "ok" if not bad else "; ".join(bad)


def product_definition(alpha, h):
    n = len(alpha)
    p = CliffordPolynomial.constant(1, n)
    for j, aj in enumerate(alpha):
        for k in range(aj):
            coord = [0] * n
            coord[j] = 1
            p = p * (CliffordPolynomial.monomial(coord, 1, n) - CliffordPolynomial.constant(k * h, n))
    return p


def c4_cross_paths():
    bad = []
    for h in HS:
        for n in (1, 2):
            for alpha in multi_indices_upto(n, 4):
                if central_egf_quasimonomial(alpha, h) != quasi_monomial("central", Falling(), alpha, h):
                    bad.append(f"central {alpha} h={h}")
            for alpha in multi_indices_upto(n, 5):
                if quasi_monomial("forward", Falling(), alpha, h) != product_definition(alpha, h):
                    bad.append(f"falling {alpha} h={h}")
    return not bad, "ok" if not bad else "; ".join(bad)


def c5_mu_consistency():
    bad = [f"n={n}" for n in (1, 2, 3, 4) if not continuum_egf_check(n, 10).passed]
    report = discrepancy_report()
    ids = [d.id for d in report]
    if "mu_closed_form" not in ids:
        bad.append("discrepancy report lacks the mu closed-form entry")
    return not bad, f"{len(report)} discrepancies reported" if not bad else "; ".join(bad)


def c6_x_square():
    bad = []
    for n in (1, 2, 3, 4):
        for h in HS:
            X = x_epsilon(h, n)
            square = Sum(tuple(raising(j, h) * raising(j, h) for j in range(1, n + 1)))
            res = op_equal_truncated(X * X + square, Sum(()), n, 5)
            if not res:
                bad.append(f"n={n} h={h} witness={res.witness}")
    return not bad, "ok" if not bad else "; ".join(bad)


def c7_spectral():
    bad = []
    for n in (1, 2, 3):
        f = count_symbol_zeros("forward", 1.0, n, 32).count
        c = count_symbol_zeros("central", 1.0, n, 32).count
        if f != 1 or c != 2**n:
            bad.append(f"n={n} forward={f} central={c}")
    errs = [bessel_identity_check(s, u) for s, u in [(0.5, 1.0), (1.0, 2.0), (1.5, 0.5)]]
    if max(errs) >= 1e-12:
        bad.append(f"bessel max error {max(errs):.3e}")
    return not bad, f"bessel max rel err {max(errs):.2e}" if not bad else "; ".join(bad)


def c8_quadrature():
    errs = {}
    for n in (1, 2):
        for spec in (family("charlier", n, 1, 1), family("bernoulli2", n, 1)):
            errs[label(spec)] = quadrature_inverse_check(spec, 3, S=40).error
    worst = max(errs.values())
    return worst < 1e-10, f"max error {worst:.2e}"


def c9_heat_and_evolution():
    bad = []
    for h in HS:
        for n in (1, 2):
            for alpha in multi_indices_upto(n, 4):
                if not heat_propagate(alpha, h).satisfies_heat_equation():
                    bad.append(f"heat {alpha} h={h}")
            for k in range(6):
                if not charlier_a_derivative_check(n, h, k).passed:
                    bad.append(f"charlier d/da n={n} h={h} k={k}")
    return not bad, "ok" if not bad else "; ".join(bad)


CRITERIA = [
    (1, "Weyl-Heisenberg relations", c1_weyl_heisenberg, 5.0),
    (2, "Appell property", c2_appell, 20.0),
    (3, "Rodrigues equivalence and intertwining", c3_rodrigues, None),
    (4, "quasi-monomial cross-paths", c4_cross_paths, None),
    (5, "mu consistency and discrepancy report", c5_mu_consistency, None),
    (6, "X_h^2 scalar identity", c6_x_square, None),
    (7, "doublers and Bessel identity", c7_spectral, None),
    (8, "integral representation of sigma^-1", c8_quadrature, None),
    (9, "heat flow and Charlier evolution", c9_heat_and_evolution, None),
]


def evaluate(fn, limit):
    ok, detail, elapsed = timed(fn)
    if limit is not None and elapsed >= limit:
        ok = False
        detail += f"; runtime {elapsed:.2f}s exceeds {limit:.0f}s"
    return ok, detail, elapsed


def line(num, title, ok, detail, elapsed):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} ({detail}; {elapsed:.2f}s)"


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, limit, capsys):
    ok, detail, elapsed = evaluate(fn, limit)
    with capsys.disabled():
        print("\n" + line(num, title, ok, detail, elapsed))
    assert ok, detail


if __name__ == "__main__":
    import sys

    results = []
    for num, title, fn, limit in CRITERIA:
        ok, detail, elapsed = evaluate(fn, limit)
        print(line(num, title, ok, detail, elapsed))
        results.append(ok)
    sys.exit(0 if all(results) else 1)
