import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jetjac import (
    DivisionByZero,
    FieldSpec,
    MixedFields,
    binomial,
    is_prime,
)

Q = FieldSpec.rationals()
GF2 = FieldSpec.prime_field(2)
GF5 = FieldSpec.prime_field(5)


def rationals():
    return st.builds(
        lambda a, b: Q.element(Fraction(a, b)),
        st.integers(-50, 50),
        st.integers(1, 20),
    )


def gf5_elements():
    return st.integers(0, 4).map(GF5.element)


class TestFieldSpec:
    def test_parse(self):
        assert FieldSpec.parse("Q") == Q
        assert FieldSpec.parse("Fp:7") == FieldSpec.prime_field(7)

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            FieldSpec.parse("R")
        with pytest.raises(ValueError):
            FieldSpec.parse("Fp:abc")

    def test_characteristic_must_be_prime(self):
        with pytest.raises(ValueError):
            FieldSpec(4)
        with pytest.raises(ValueError):
            FieldSpec(1)
        FieldSpec(101)  # fine

    def test_kind(self):
        assert Q.kind == "rationals"
        assert GF5.kind == "prime-field"

    def test_str_round_trip(self):
        for spec in (Q, GF2, FieldSpec.prime_field(10007)):
            assert FieldSpec.parse(str(spec)) == spec


def test_is_prime_small_table():
    primes = {2, 3, 5, 7, 11, 13, 10007, 1000003}
    for n in range(-3, 30):
        assert is_prime(n) == (n in primes or n in (17, 19, 23, 29))
    assert is_prime(10007)
    assert not is_prime(10007 * 10009)


class TestArithmetic:
    def test_rational_addition(self):
        assert Q.element(Fraction(1, 2)) + Q.element(Fraction(1, 3)) == Fraction(5, 6)

    def test_gf5_multiplication(self):
        assert GF5.element(2) * GF5.element(3) == GF5.element(1)

    @given(a=rationals())
    def test_additive_identity(self, a):
        assert a + Q.zero == a

    def test_canonical_forms(self):
        assert Q.element("4/6").value == Fraction(2, 3)
        assert GF5.element(-3).value == 2
        assert GF5.element(Fraction(1, 2)).value == 3  # 1/2 = 3 in GF(5)

    def test_mixed_fields(self):
        with pytest.raises(MixedFields):
            Q.element(1) + GF5.element(1)

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            Q.element(1) / Q.element(0)
        with pytest.raises(DivisionByZero):
            GF5.element(2) / GF5.element(0)
        with pytest.raises(DivisionByZero):
            GF2.element(Fraction(1, 2))  # denominator vanishes mod 2

    @given(a=rationals(), b=rationals(), c=rationals())
    def test_rational_field_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == Q.zero
        if not a.is_zero:
            assert a * a.inverse() == Q.one

    @given(a=gf5_elements(), b=gf5_elements(), c=gf5_elements())
    def test_prime_field_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + (-a) == GF5.zero
        if not a.is_zero:
            assert a * a.inverse() == GF5.one

    def test_pow(self):
        assert GF5.element(2) ** 4 == GF5.element(1)
        assert Q.element(Fraction(2, 3)) ** 2 == Fraction(4, 9)
        assert GF5.element(2) ** -1 == GF5.element(3)


class TestBinomial:
    def test_examples(self):
        assert binomial(3, 2, Q) == Q.element(3)
        assert binomial(2, 2, GF2) == GF2.one
        # C(4,2) = 6 vanishes mod 2; oracle via factorials over Z
        expected = math.factorial(4) // (math.factorial(2) * math.factorial(2))
        assert expected % 2 == 0
        assert binomial(4, 2, GF2) == GF2.zero

    def test_k_above_n_is_zero(self):
        assert binomial(3, 5, Q) == Q.zero

    @given(n=st.integers(1, 30), k=st.integers(1, 30))
    def test_pascal_rule_before_reduction(self, n, k):
        assert math.comb(n, k) == math.comb(n - 1, k - 1) + math.comb(n - 1, k)

    @given(n=st.integers(0, 30), k=st.integers(0, 30))
    def test_reduction_commutes_with_mod(self, n, k):
        assert binomial(n, k, GF5).value == math.comb(n, k) % 5
