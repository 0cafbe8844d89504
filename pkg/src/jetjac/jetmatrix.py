"""Block matrices built from Hasse-Schmidt components of matrix entries.

dn_matrix lays out the upper block-triangular matrix whose (i, j) block is
d_{j-i} applied entrywise to L (blocks with j < i vanish); jet_jacobian
differentiates the components d_k(f_l) by every jet variable, which comes
out lower block-triangular.  The two constructions contain the same data:
reversing the block order on both axes of one of them makes them equal
entrywise, and check_fdbd verifies exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hasse import HSExpansion, hs_components
from .jacobian import PolyMatrix, jac
from .poly import JetVariable, Polynomial, jet_grid


@dataclass(frozen=True)
class BlockSpec:
    """Block layout of a (n+1)b x (n+1)a matrix of b x a blocks."""

    n: int
    b: int
    a: int

    def block(self, mx: PolyMatrix, i: int, j: int) -> PolyMatrix:
        if not (0 <= i <= self.n and 0 <= j <= self.n):
            raise IndexError(f"block ({i}, {j}) outside {self.n + 1} blocks per axis")
        entries = tuple(
            mx.at(i * self.b + r, j * self.a + c)
            for r in range(self.b)
            for c in range(self.a)
        )
        return PolyMatrix(self.b, self.a, entries)


def dn_matrix(L: PolyMatrix, n: int) -> PolyMatrix:
    """The (n+1)b x (n+1)a block matrix with block (i, j) = d_{j-i}(L)
    for j >= i and 0 otherwise; d is applied to each entry of L."""
    if n < 0:
        raise ValueError("n must be >= 0")
    s = max((v.base for v in L.variables()), default=0)
    zero = Polynomial.zero(L.spec, jet_grid(s, 0))
    cache: dict[Polynomial, HSExpansion] = {}

    def expansion(entry: Polynomial) -> HSExpansion:
        ex = cache.get(entry)
        if ex is None:
            ex = hs_components(entry, n)
            cache[entry] = ex
        return ex

    b, a = L.rows, L.cols
    entries = []
    for bi in range(n + 1):
        for r in range(b):
            for bj in range(n + 1):
                for c in range(a):
                    if bj < bi:
                        entries.append(zero)
                    else:
                        entries.append(expansion(L.at(r, c))[bj - bi])
    return PolyMatrix(
        (n + 1) * b,
        (n + 1) * a,
        tuple(entries),
        provenance=f"D_{n}({L.provenance or 'L'})",
    )


def jet_jacobian(fs: list[Polynomial], n: int) -> PolyMatrix:
    """The Jacobian of (d_0(f), ..., d_n(f)) with respect to all jet
    variables up to order n: row block k differentiates d_k(f_l), column
    block j differentiates by x_1^(j), ..., x_s^(j)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    expansions = [hs_components(f, n) for f in fs]
    s = max(f.base_count for f in fs)
    entries = []
    for k in range(n + 1):
        for ex in expansions:
            dk = ex[k]
            for j in range(n + 1):
                for i in range(1, s + 1):
                    entries.append(dk.partial(JetVariable(i, j)))
    return PolyMatrix(
        (n + 1) * len(fs), (n + 1) * s, tuple(entries), provenance=f"jetjac_{n}"
    )


def reverse_blocks(mx: PolyMatrix, b: int, a: int) -> PolyMatrix:
    """Reverse the block-row and block-column order of a blocked matrix."""
    if mx.rows % b or mx.cols % a:
        raise ValueError("shape is not a multiple of the block shape")
    nb, na = mx.rows // b, mx.cols // a
    entries = []
    for i in range(mx.rows):
        bi, r = divmod(i, b)
        src_row = (nb - 1 - bi) * b + r
        for j in range(mx.cols):
            bj, c = divmod(j, a)
            entries.append(mx.at(src_row, (na - 1 - bj) * a + c))
    return PolyMatrix(mx.rows, mx.cols, tuple(entries), mx.provenance + " (blocks reversed)")


@dataclass(frozen=True)
class FdbdReport:
    """Outcome of comparing the two constructions of the jet Jacobian data."""

    ok: bool
    n: int
    block_shape: tuple[int, int]
    permutation: str
    first_mismatch: tuple[int, int] | None

    def __str__(self):
        b, a = self.block_shape
        if self.ok:
            return (
                f"PASS: block matrix of the Jacobian equals the jet Jacobian "
                f"after {self.permutation} ({self.n + 1} blocks of {b}x{a} per axis)"
            )
        return f"FAIL: entry mismatch at {self.first_mismatch}"


def check_fdbd(fs: list[Polynomial], n: int) -> FdbdReport:
    """Verify that applying the block construction to the Jacobian of fs
    agrees with the Jacobian of the components d_0(f), ..., d_n(f), after
    reversing block rows and block columns of the former (the two are
    displayed in opposite triangular orientations)."""
    jacobian = jac(fs)
    blocked = dn_matrix(jacobian, n)
    direct = jet_jacobian(fs, n)
    reversed_blocked = reverse_blocks(blocked, jacobian.rows, jacobian.cols)
    permutation = "reversing block row and block column order"
    if reversed_blocked == direct:
        return FdbdReport(True, n, (jacobian.rows, jacobian.cols), permutation, None)
    mismatch = next(
        (i, j)
        for i in range(direct.rows)
        for j in range(direct.cols)
        if reversed_blocked.at(i, j) != direct.at(i, j)
    )
    return FdbdReport(False, n, (jacobian.rows, jacobian.cols), permutation, mismatch)
