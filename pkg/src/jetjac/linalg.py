"""Exact linear algebra over the coefficient field.

Rank uses one fraction-free (Bareiss-style) elimination path for both Q
and GF(p); determinants of polynomial matrices use cofactor expansion at
small sizes and fraction-free elimination with exact polynomial division
above that.  Generic rank is probabilistic: the maximum exact rank over
seeded random evaluation points, always reported with its seed.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .field import FieldElement, FieldSpec
from .jacobian import PolyMatrix
from .poly import JetVariable, Point, Polynomial

MINOR_CAP = 100_000
SAMPLE_RANGE = 10  # rational evaluation coordinates are drawn from [-10, 10]


class TooManyMinors(ValueError):
    """The requested minor enumeration exceeds the cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"would generate {count} minors (cap {cap})")
        self.count = count


@dataclass(frozen=True)
class ScalarMatrix:
    """Dense matrix of field elements."""

    rows: int
    cols: int
    entries: tuple[FieldElement, ...]
    spec: FieldSpec

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise ValueError("entry count does not match the shape")

    def at(self, i: int, j: int) -> FieldElement:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[FieldElement, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def transpose(self) -> "ScalarMatrix":
        entries = tuple(
            self.entries[i * self.cols + j]
            for j in range(self.cols)
            for i in range(self.rows)
        )
        return ScalarMatrix(self.cols, self.rows, entries, self.spec)

    def __str__(self) -> str:
        return "\n".join(
            "[" + ", ".join(str(e) for e in self.row(i)) + "]"
            for i in range(self.rows)
        )


def eval_matrix(mx: PolyMatrix, point: Point) -> ScalarMatrix:
    """Entrywise evaluation of a polynomial matrix at a point."""
    entries = tuple(e.evaluate(point) for e in mx.entries)
    return ScalarMatrix(mx.rows, mx.cols, entries, point.spec)


def rank(mx: ScalarMatrix) -> int:
    """Exact rank by fraction-free Gaussian elimination."""
    rows, cols = mx.rows, mx.cols
    if rows == 0 or cols == 0:
        return 0
    p = mx.spec.characteristic
    a = [[mx.entries[i * cols + j].value for j in range(cols)] for i in range(rows)]
    r = 0
    prev = 1
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if a[i][c]), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            a[pivot_row], a[r] = a[r], a[pivot_row]
        pivot = a[r][c]
        for i in range(r + 1, rows):
            head = a[i][c]
            if p:
                inv_prev = pow(prev, -1, p)
                for j in range(c + 1, cols):
                    a[i][j] = (pivot * a[i][j] - head * a[r][j]) * inv_prev % p
            else:
                for j in range(c + 1, cols):
                    a[i][j] = (pivot * a[i][j] - head * a[r][j]) / prev
            a[i][c] = 0
        prev = pivot
        r += 1
        if r == rows:
            break
    return r


def _det_cofactor(rows: list[list[Polynomial]]) -> Polynomial:
    k = len(rows)
    if k == 1:
        return rows[0][0]
    spec = rows[0][0].spec
    total = Polynomial.zero(spec)
    for j in range(k):
        entry = rows[0][j]
        if entry.is_zero:
            continue
        minor = [[row[c] for c in range(k) if c != j] for row in rows[1:]]
        term = entry * _det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _det_bareiss(rows: list[list[Polynomial]]) -> Polynomial:
    # fraction-free elimination; previous-pivot divisions are exact
    k = len(rows)
    spec = rows[0][0].spec
    a = [row[:] for row in rows]
    sign = 1
    prev = Polynomial.constant(spec, 1)
    for c in range(k - 1):
        pivot_row = next((i for i in range(c, k) if not a[i][c].is_zero), None)
        if pivot_row is None:
            return Polynomial.zero(spec)
        if pivot_row != c:
            a[pivot_row], a[c] = a[c], a[pivot_row]
            sign = -sign
        pivot = a[c][c]
        for i in range(c + 1, k):
            for j in range(c + 1, k):
                num = pivot * a[i][j] - a[i][c] * a[c][j]
                a[i][j] = num.exact_div(prev)
            a[i][c] = Polynomial.zero(spec)
        prev = pivot
    det = a[k - 1][k - 1]
    return det if sign == 1 else -det


def poly_det(mx: PolyMatrix) -> Polynomial:
    """Determinant of a square polynomial matrix."""
    if mx.rows != mx.cols:
        raise ValueError("determinant needs a square matrix")
    rows = [list(mx.row(i)) for i in range(mx.rows)]
    if mx.rows < 6:
        return _det_cofactor(rows)
    return _det_bareiss(rows)


@dataclass(frozen=True)
class MinorSet:
    """All k x k minors of a polynomial matrix, with their index tuples."""

    k: int
    selections: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    values: tuple[Polynomial, ...]

    def __len__(self):
        return len(self.values)


def minors(mx: PolyMatrix, k: int, cap: int = MINOR_CAP) -> MinorSet:
    """Every k x k minor of mx as a polynomial (the determinantal
    generators of the rank-deficiency locus)."""
    if k < 0 or k > min(mx.rows, mx.cols):
        raise ValueError(f"k must be between 0 and min({mx.rows}, {mx.cols})")
    count = math.comb(mx.rows, k) * math.comb(mx.cols, k)
    if count > cap:
        raise TooManyMinors(count, cap)
    selections = []
    values = []
    for row_sel in itertools.combinations(range(mx.rows), k):
        for col_sel in itertools.combinations(range(mx.cols), k):
            sub = PolyMatrix(
                k, k, tuple(mx.at(i, j) for i in row_sel for j in col_sel)
            )
            selections.append((row_sel, col_sel))
            values.append(poly_det(sub))
    return MinorSet(k, tuple(selections), tuple(values))


def random_point(spec: FieldSpec, variables, rng: random.Random) -> Point:
    """A point with coordinates drawn from a fixed range: integers in
    [-SAMPLE_RANGE, SAMPLE_RANGE] over Q, uniform residues over GF(p)."""
    p = spec.characteristic
    coords = {}
    for v in variables:
        if p:
            coords[v] = FieldElement(spec, rng.randrange(p))
        else:
            coords[v] = FieldElement(spec, Fraction(rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE)))
    return Point(spec, coords)


def trial_rng(seed: int, trial: int, label: str = "trial") -> random.Random:
    # string seeding is hash-stable across processes
    return random.Random(f"{label}:{seed}:{trial}")


def generic_rank(mx: PolyMatrix, trials: int = 20, seed: int = 0) -> int:
    """Rank at a random point, maximized over seeded trials.

    This is a probabilistic lower bound for the rank over the fraction
    field; it equals it with high probability.  Deterministic in seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    variables = mx.variables()
    best = 0
    limit = min(mx.rows, mx.cols)
    for t in range(trials):
        point = random_point(mx.spec, variables, trial_rng(seed, t, "generic-rank"))
        best = max(best, rank(eval_matrix(mx, point)))
        if best == limit:
            break
    return best
