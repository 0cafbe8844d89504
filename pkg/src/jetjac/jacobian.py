"""Classical and higher-order Jacobian matrices of polynomial tuples.

The order-m Jacobian of f stacks, per polynomial, the block whose rows are
indexed by multi-indices beta with |beta| <= m-1 and whose columns by alpha
with 1 <= |alpha| <= m; the (beta, alpha) entry is the divided-power
derivative of f by alpha - beta, or 0 when alpha does not dominate beta.
Both index families are enumerated by degree and then lexicographically
descending with x1 heaviest, which pins the matrix layout; other sources
may order them differently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .field import FieldSpec, MixedFields
from .poly import JetVariable, MultiIndex, Polynomial


class EmptyInput(ValueError):
    """A matrix builder received no polynomials."""


def exponent_vectors(norm: int, s: int):
    """All multi-indices in N^s of the given norm, lexicographically
    descending with the first coordinate heaviest."""
    if s == 1:
        yield (norm,)
        return
    for first in range(norm, -1, -1):
        for rest in exponent_vectors(norm - first, s - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class IndexFamilies:
    """The row family (norms 0..m-1) and column family (norms 1..m)."""

    s: int
    m: int
    lambda0: tuple[MultiIndex, ...]
    lambda_: tuple[MultiIndex, ...]

    @property
    def M(self) -> int:
        return len(self.lambda0)

    @property
    def N(self) -> int:
        return len(self.lambda_)


def index_families(s: int, m: int) -> IndexFamilies:
    if s < 1 or m < 1:
        raise ValueError("need s >= 1 and m >= 1")
    lambda0 = tuple(
        beta for d in range(m) for beta in exponent_vectors(d, s)
    )
    lambda_ = tuple(
        alpha for d in range(1, m + 1) for alpha in exponent_vectors(d, s)
    )
    fam = IndexFamilies(s, m, lambda0, lambda_)
    assert fam.M == math.comb(m + s - 1, s)
    assert fam.N == math.comb(m + s, s) - 1
    return fam


@dataclass(frozen=True)
class PolyMatrix:
    """Dense matrix of polynomials; provenance is a label, not content."""

    rows: int
    cols: int
    entries: tuple[Polynomial, ...]
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise ValueError("entry count does not match the shape")
        specs = {e.spec for e in self.entries}
        if len(specs) > 1:
            raise MixedFields("matrix entries belong to different fields")

    @property
    def spec(self) -> FieldSpec:
        return self.entries[0].spec if self.entries else FieldSpec.rationals()

    def at(self, i: int, j: int) -> Polynomial:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Polynomial, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[Polynomial, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def map_entries(self, fn, provenance: str = "") -> "PolyMatrix":
        return PolyMatrix(
            self.rows, self.cols, tuple(fn(e) for e in self.entries), provenance
        )

    def transpose(self) -> "PolyMatrix":
        entries = tuple(
            self.entries[i * self.cols + j]
            for j in range(self.cols)
            for i in range(self.rows)
        )
        return PolyMatrix(self.cols, self.rows, entries, self.provenance)

    def variables(self) -> tuple[JetVariable, ...]:
        seen = set()
        for e in self.entries:
            seen.update(e.ambient)
        return tuple(sorted(seen))

    def __str__(self) -> str:
        return "\n".join(
            "[" + ", ".join(str(e) for e in self.row(i)) + "]"
            for i in range(self.rows)
        )


def _common_base_count(fs) -> int:
    return max(f.base_count for f in fs)


def jac(fs: list[Polynomial]) -> PolyMatrix:
    """The r x s Jacobian: entry (l, i) = partial f_l / partial x_i."""
    if not fs:
        raise EmptyInput("no polynomials given")
    s = _common_base_count(fs)
    entries = tuple(
        f.partial(JetVariable(i, 0)) for f in fs for i in range(1, s + 1)
    )
    return PolyMatrix(len(fs), s, entries, provenance="jac")


def jac_m(fs: list[Polynomial], m: int) -> PolyMatrix:
    """The order-m Jacobian: r*M x N divided-power derivative matrix.

    For m = 1 this is the usual Jacobian.
    """
    if not fs:
        raise EmptyInput("no polynomials given")
    if m < 1:
        raise ValueError("m must be >= 1")
    s = _common_base_count(fs)
    fam = index_families(s, m)
    entries = []
    for f in fs:
        for beta in fam.lambda0:
            for alpha in fam.lambda_:
                if all(a >= b for a, b in zip(alpha, beta)):
                    delta = tuple(a - b for a, b in zip(alpha, beta))
                    entries.append(f.divided_partial(delta))
                else:
                    entries.append(Polynomial.zero(f.spec, f.ambient))
    return PolyMatrix(
        len(fs) * fam.M, fam.N, tuple(entries), provenance=f"jac_{m}"
    )
