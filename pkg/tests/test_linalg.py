import random
from fractions import Fraction

import pytest

from jetjac import (
    FieldSpec,
    Point,
    PolyMatrix,
    Polynomial,
    ScalarMatrix,
    TooManyMinors,
    dn_matrix,
    eval_matrix,
    generic_rank,
    jac_m,
    minors,
    parse_poly,
    poly_det,
    rank,
)
from jetjac.linalg import random_point, trial_rng

from _corpus import GF5, Q, random_base_polynomial

CUSP = parse_poly("x1^3 - x2^2", 2, Q)


def scalar(rows, spec=Q):
    entries = tuple(spec.element(v) for row in rows for v in row)
    return ScalarMatrix(len(rows), len(rows[0]), entries, spec)


def int_matrix_rank_oracle(rows):
    """Row-reduce over Fraction, independently of the library path."""
    a = [[Fraction(v) for v in row] for row in rows]
    rank_count = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        pivot = next((i for i in range(rank_count, len(a)) if a[i][c]), None)
        if pivot is None:
            continue
        a[rank_count], a[pivot] = a[pivot], a[rank_count]
        pr = a[rank_count]
        for i in range(len(a)):
            if i != rank_count and a[i][c]:
                factor = a[i][c] / pr[c]
                a[i] = [x - factor * y for x, y in zip(a[i], pr)]
        rank_count += 1
    return rank_count


class TestEvalMatrix:
    def test_cusp_at_origin(self):
        mx = jac_m([CUSP], 2)
        got = eval_matrix(mx, Point.from_base([0, 0], Q))
        assert got == scalar([[0, 0, 0, 0, -1], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0]])

    def test_cusp_at_smooth_point(self):
        mx = jac_m([CUSP], 2)
        got = eval_matrix(mx, Point.from_base([1, 1], Q))
        assert got == scalar([[3, -2, 3, 0, -1], [0, 0, 3, -2, 0], [0, 0, 0, 3, -2]])

    def test_zero_matrix(self):
        mx = PolyMatrix(2, 2, tuple(Polynomial.zero(Q) for _ in range(4)))
        got = eval_matrix(mx, Point.from_base([5, 7], Q))
        assert all(e.is_zero for e in got.entries)


class TestRank:
    def test_examples(self):
        mx = jac_m([CUSP], 2)
        assert rank(eval_matrix(mx, Point.from_base([0, 0], Q))) == 1
        assert rank(eval_matrix(mx, Point.from_base([1, 1], Q))) == 3

    def test_identity(self):
        for k in (1, 2, 5):
            eye = scalar([[1 if i == j else 0 for j in range(k)] for i in range(k)])
            assert rank(eye) == k

    def test_transpose_invariance(self):
        rng = random.Random(61)
        for _ in range(20):
            rows = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(3)]
            mx = scalar(rows)
            assert rank(mx) == rank(mx.transpose())

    def test_permutation_invariance(self):
        rng = random.Random(67)
        rows = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(4)]
        mx = scalar(rows)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        assert rank(mx) == rank(scalar(shuffled))

    def test_against_reduction_oracle(self):
        rng = random.Random(71)
        for _ in range(30):
            nrows = rng.randint(1, 5)
            ncols = rng.randint(1, 5)
            rows = [[rng.randint(-6, 6) for _ in range(ncols)] for _ in range(nrows)]
            assert rank(scalar(rows)) == int_matrix_rank_oracle(rows)

    def test_gf_p_rank(self):
        # rows become dependent mod 5: (1, 2) and (6, 12) differ by 5k
        mx = scalar([[1, 2], [6, 12]], GF5)
        assert rank(mx) == 1

    def test_modular_cross_check(self):
        # for a prime not dividing any pivot the rank over Q persists mod p
        big = FieldSpec.prime_field(10007)
        rng = random.Random(73)
        for _ in range(15):
            rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
            over_q = rank(scalar(rows))
            over_p = rank(scalar(rows, big))
            assert over_p == over_q


class TestPolyDet:
    def test_2x2(self):
        entries = tuple(parse_poly(e, 4, Q) for e in ("x1", "x2", "x3", "x4"))
        mx = PolyMatrix(2, 2, entries)
        found = minors(mx, 2)
        assert len(found) == 1
        assert found.values[0] == parse_poly("x1*x4 - x2*x3", 4, Q)

    def test_cofactor_and_bareiss_agree(self):
        rng = random.Random(79)
        entries = []
        for i in range(6):
            for j in range(6):
                if abs(i - j) <= 1:
                    entries.append(random_base_polynomial(rng, 2, 1, 2, Q))
                else:
                    entries.append(Polynomial.zero(Q))
        mx = PolyMatrix(6, 6, tuple(entries))
        rows = [list(mx.row(i)) for i in range(6)]
        from jetjac.linalg import _det_bareiss, _det_cofactor

        assert _det_bareiss(rows) == _det_cofactor(rows)

    def test_singular_matrix(self):
        x = parse_poly("x1", 1, Q)
        mx = PolyMatrix(2, 2, (x, x, x, x))
        assert poly_det(mx).is_zero

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            poly_det(jac_m([CUSP], 2))


class TestMinors:
    def test_maximal_minors_of_the_order2_jacobian(self):
        found = minors(jac_m([CUSP], 2), 3)
        assert len(found) == 10
        origin = Point.from_base([0, 0], Q)
        assert all(v.evaluate(origin).is_zero for v in found.values)
        # but not identically zero: the rank-deficiency locus is proper
        assert any(not v.is_zero for v in found.values)

    def test_all_zero_minors_iff_generic_rank_below_k(self):
        rng = random.Random(83)
        for _ in range(10):
            r1 = [random_base_polynomial(rng, 2, 2, 3, Q) for _ in range(3)]
            r2 = [random_base_polynomial(rng, 2, 2, 3, Q) for _ in range(3)]
            dependent = [a + b for a, b in zip(r1, r2)]
            mx = PolyMatrix(3, 3, tuple(r1 + r2 + dependent))
            found = minors(mx, 3)
            all_zero = all(v.is_zero for v in found.values)
            assert all_zero == (generic_rank(mx, trials=8, seed=3) < 3)

    def test_cap(self):
        zero = Polynomial.zero(Q)
        big = PolyMatrix(20, 20, tuple(zero for _ in range(400)))
        with pytest.raises(TooManyMinors) as err:
            minors(big, 10)
        assert err.value.count == 184756**2

    def test_k_validation(self):
        with pytest.raises(ValueError):
            minors(jac_m([CUSP], 2), 4)


class TestGenericRank:
    def test_cusp_order2(self):
        assert generic_rank(jac_m([CUSP], 2), trials=10, seed=0) == 3

    def test_zero_matrix(self):
        mx = PolyMatrix(2, 3, tuple(Polynomial.zero(Q) for _ in range(6)))
        assert generic_rank(mx, trials=3, seed=0) == 0

    def test_blocked_matrix(self):
        assert generic_rank(dn_matrix(jac_m([CUSP], 2), 1), trials=10, seed=0) == 6

    def test_deterministic_in_seed(self):
        mx = jac_m([CUSP], 2)
        a = generic_rank(mx, trials=7, seed=42)
        b = generic_rank(mx, trials=7, seed=42)
        assert a == b

    def test_lower_bounds_matrix_size(self):
        rng = random.Random(89)
        for _ in range(10):
            f = random_base_polynomial(rng, 2, 3, 4, Q)
            mx = jac_m([f], 2)
            assert generic_rank(mx, trials=5, seed=1) <= min(mx.rows, mx.cols)

    def test_rank_at_point_vs_minors(self):
        # rank >= k at a point iff some k-minor is nonzero there
        rng = random.Random(97)
        for trial in range(8):
            entries = tuple(
                random_base_polynomial(rng, 2, 2, 2, Q) for _ in range(6)
            )
            mx = PolyMatrix(2, 3, entries)
            point = random_point(Q, mx.variables(), trial_rng(5, trial, "minor-check"))
            r = rank(eval_matrix(mx, point))
            for k in (1, 2):
                some_nonzero = any(
                    not v.evaluate(point).is_zero for v in minors(mx, k).values
                )
                assert (r >= k) == some_nonzero

    def test_trials_validation(self):
        with pytest.raises(ValueError):
            generic_rank(jac_m([CUSP], 2), trials=0)
