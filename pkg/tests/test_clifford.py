import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_appell.clifford import (
    MAX_DIM,
    DimensionError,
    Multivector,
    as_rational,
    blade_indices,
    blade_mask,
    blade_product,
    format_rational,
    mv_add,
    mv_mul,
    mv_scale,
)


def perm_sign(seq):
    """Sign of the permutation sorting ``seq`` (distinct entries), by inversion count."""
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def brute_blade_product(J, K):
    """Reduce the word e_J e_K by bubble sort with e_j e_j = -1."""
    word = list(J) + list(K)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True
            elif word[i] == word[i + 1]:
                del word[i:i + 2]
                sign = -sign
                changed = True
                break
    return sign, tuple(word)


def E(*idx, n=3):
    return Multivector.basis(idx, n)


def test_blade_product_examples():
    n = 3
    assert blade_product(blade_mask([1], n), blade_mask([1], n), n) == (-1, 0)
    assert blade_product(blade_mask([1], n), blade_mask([2], n), n) == (1, blade_mask([1, 2], n))
    assert blade_product(blade_mask([2], n), blade_mask([1], n), n) == (-1, blade_mask([1, 2], n))
    assert blade_product(0, blade_mask([2, 3], n), n) == (1, blade_mask([2, 3], n))


def test_blade_product_matches_brute_force_n4():
    n = 4
    subsets = [c for r in range(n + 1) for c in itertools.combinations(range(1, n + 1), r)]
    for J in subsets:
        for K in subsets:
            sign, mask = blade_product(blade_mask(J, n), blade_mask(K, n), n)
            bsign, word = brute_blade_product(J, K)
            assert (sign, blade_indices(mask)) == (bsign, word)


def test_sign_against_permutation_oracle():
    # for disjoint J, K the sign is the sign of the concatenated permutation
    n = 5
    for J in itertools.combinations(range(1, n + 1), 2):
        rest = [i for i in range(1, n + 1) if i not in J]
        for K in itertools.combinations(rest, 2):
            sign, _ = blade_product(blade_mask(J, n), blade_mask(K, n), n)
            assert sign == perm_sign(list(J) + list(K))


def test_blade_index_out_of_range():
    with pytest.raises(DimensionError):
        blade_mask([3], 2)
    with pytest.raises(DimensionError):
        blade_product(blade_mask([1, 3], 3), 1, 2)
    with pytest.raises(DimensionError):
        Multivector.basis([MAX_DIM + 1], MAX_DIM + 1)


def test_anticommutation_exhaustive():
    for n in range(1, 6):
        one = Multivector.scalar(1, n)
        for j in range(1, n + 1):
            ej = Multivector.generator(j, n)
            assert ej * ej == -one
            for k in range(1, n + 1):
                if j != k:
                    ek = Multivector.generator(k, n)
                    assert not (ej * ek + ek * ej)


def test_vector_products():
    x = Multivector.vector([1, 2, Fraction(1, 3)])
    y = Multivector.vector([-2, 5, 3])
    inner = sum(a * b for a, b in zip([1, 2, Fraction(1, 3)], [-2, 5, 3]))
    assert x * y + y * x == Multivector.scalar(-2 * inner, 3)
    assert (x * x).is_scalar()
    assert (x * x).scalar_part() == -(1 + 4 + Fraction(1, 9))
    s = E(1, n=2) + E(2, n=2)
    assert s * s == Multivector.scalar(-2, 2)


def test_identity_and_add_scale():
    a = E(1) + E(2, 3).scale(Fraction(5, 2))
    assert a * Multivector.scalar(1, 3) == a
    assert Multivector.scalar(1, 3) * a == a
    assert not (E(1) + (-1) * E(1))
    assert not mv_scale(0, a)
    assert mv_add(E(1) + E(2), E(2)) == E(1) + E(2).scale(2)
    assert list((E(1) + E(1) - E(1) * 2).items()) == []


def test_no_stored_zeros():
    m = Multivector(2, {0: 0, 1: Fraction(1, 2), 3: 0})
    assert len(m) == 1
    assert list(m.items()) == [(1, Fraction(1, 2))]


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        mv_add(E(1, n=2), E(1, n=3))
    with pytest.raises(DimensionError):
        mv_mul(E(1, n=2), E(1, n=3))


def test_rational_parsing_and_format():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational("-4") == -4
    assert as_rational(Fraction(2, 3)) == Fraction(2, 3)
    for bad in ("0.5", 0.5, True, "1/0", "x"):
        with pytest.raises((TypeError, ValueError, ZeroDivisionError)):
            as_rational(bad)
    assert format_rational(Fraction(3)) == "3/1"
    assert format_rational(Fraction(-2, 4)) == "-1/2"


def test_json_round_trip_and_ordering():
    m = E(2, 3).scale(Fraction(-1, 3)) + E(1) + Multivector.scalar(2, 3)
    data = m.to_json()
    assert [d["blade"] for d in data] == [[], [1], [2, 3]]
    assert data[2]["coeff"] == "-1/3"
    assert Multivector.from_json(data, 3) == m


def test_grades():
    assert (E(1) + E(1, 2) + Multivector.scalar(3, 3)).grades() == {0, 1, 2}


fractions_st = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def multivectors(draw, n):
    coeffs = draw(st.dictionaries(st.integers(0, (1 << n) - 1), fractions_st, max_size=1 << n))
    return Multivector(n, coeffs)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(multivectors(n), multivectors(n), multivectors(n))))
def test_associativity(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(multivectors(n), multivectors(n), multivectors(n))))
def test_distributivity(abc):
    a, b, c = abc
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@settings(max_examples=40, deadline=None)
@given(st.lists(fractions_st, min_size=1, max_size=5))
def test_vector_square_is_scalar(components):
    x = Multivector.vector(components)
    assert x * x == Multivector.scalar(-sum(c * c for c in components), len(components))
