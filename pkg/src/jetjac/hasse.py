"""Hasse-Schmidt derivation components d_k(f) of base polynomials.

Two independent algorithms produce the components: truncated-series
substitution (the production route) and structural recursion on terms
with the convolution Leibniz rule (the oracle route).  d_0 renames every
base variable x_i to x_i^(0), which is the identity in this encoding;
d_k(x_i) = x_i^(k); products expand by d_k(fg) = sum_{i+j=k} d_i(f) d_j(g).

check_commutation verifies the derivative interchange rule
partial_{x_i^(j)} (d_k f) = d_{k-j} (partial_{x_i} f) for all admissible
(i, j, k); both matrix identities downstream rest on it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import JetVariable, Polynomial, jet_grid


class NotBasePolynomial(ValueError):
    """Input contains jet variables of positive order."""


@dataclass(frozen=True)
class HSExpansion:
    """The components [d_0(f), ..., d_n(f)] of a base polynomial f."""

    f: Polynomial
    n: int
    components: tuple[Polynomial, ...]

    def __getitem__(self, k: int) -> Polynomial:
        return self.components[k]

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


def _require_base(f: Polynomial):
    if f.max_order > 0:
        raise NotBasePolynomial(
            "expected a polynomial in the base variables only, "
            f"found jet order {f.max_order}"
        )


def _series_mul(a, b, n, zero):
    # product of polynomial t-series, truncated after t^n
    out = [zero] * (n + 1)
    for i, ai in enumerate(a):
        if ai.is_zero:
            continue
        for j in range(n + 1 - i):
            bj = b[j]
            if not bj.is_zero:
                out[i + j] = out[i + j] + ai * bj
    return out


def _series_pow(base, e, n, one, zero):
    result = [one] + [zero] * n
    square = base
    while e:
        if e & 1:
            result = _series_mul(result, square, n, zero)
        e >>= 1
        if e:
            square = _series_mul(square, square, n, zero)
    return result


def hs_components(f: Polynomial, n: int) -> HSExpansion:
    """Components via substitution: d_k(f) is the t^k coefficient of
    f(sum_j x_1^(j) t^j, ..., sum_j x_s^(j) t^j) truncated mod t^(n+1)."""
    _require_base(f)
    if n < 0:
        raise ValueError("n must be >= 0")
    s = f.base_count
    spec = f.spec
    grid = jet_grid(s, n)
    zero = Polynomial.zero(spec, grid)
    one = Polynomial.constant(spec, 1, grid)
    var_series = {
        i: [Polynomial.variable(spec, JetVariable(i, j), grid) for j in range(n + 1)]
        for i in range(1, s + 1)
    }
    pow_cache: dict[tuple[int, int], list] = {}
    acc = [zero] * (n + 1)
    for exps, coeff in f.terms.items():
        prod = [one] + [zero] * n
        for idx, e in enumerate(exps):
            if e:
                i = f.ambient[idx].base
                powed = pow_cache.get((i, e))
                if powed is None:
                    powed = _series_pow(var_series[i], e, n, one, zero)
                    pow_cache[(i, e)] = powed
                prod = _series_mul(prod, powed, n, zero)
        for k in range(n + 1):
            if not prod[k].is_zero:
                acc[k] = acc[k] + prod[k]._scaled(coeff)
    components = tuple(acc[k].restricted(jet_grid(s, k)) for k in range(n + 1))
    return HSExpansion(f, n, components)


def hs_components_leibniz(f: Polynomial, n: int) -> HSExpansion:
    """Same components by structural recursion: the derivation sends
    x_i to x_i^(k), kills constants for k >= 1, is additive over terms
    and expands products one variable factor at a time through the
    convolution rule.  Serves as the independent oracle."""
    _require_base(f)
    if n < 0:
        raise ValueError("n must be >= 0")
    s = f.base_count
    spec = f.spec
    grid = jet_grid(s, n)
    zero = Polynomial.zero(spec, grid)
    dvar = {
        i: [Polynomial.variable(spec, JetVariable(i, k), grid) for k in range(n + 1)]
        for i in range(1, s + 1)
    }
    acc = [zero] * (n + 1)
    for exps, coeff in f.terms.items():
        vec = [Polynomial.constant(spec, coeff, grid)] + [zero] * n
        for idx, e in enumerate(exps):
            base_vec = dvar.get(f.ambient[idx].base)
            for _ in range(e):
                nxt = [zero] * (n + 1)
                for i in range(n + 1):
                    vi = base_vec[i]
                    for j in range(n + 1 - i):
                        if not vec[j].is_zero:
                            nxt[i + j] = nxt[i + j] + vi * vec[j]
                vec = nxt
        for k in range(n + 1):
            if not vec[k].is_zero:
                acc[k] = acc[k] + vec[k]
    components = tuple(acc[k].restricted(jet_grid(s, k)) for k in range(n + 1))
    return HSExpansion(f, n, components)


def jet_partial(g: Polynomial, v: JetVariable) -> Polynomial:
    """Formal partial derivative of a jet polynomial."""
    return g.partial(v)


@dataclass(frozen=True)
class CommutationReport:
    ok: bool
    cases_checked: int
    counterexample: tuple[int, int, int] | None  # (i, j, k)

    def __str__(self):
        if self.ok:
            return f"PASS: derivative interchange holds in all {self.cases_checked} cases"
        i, j, k = self.counterexample
        return (
            f"FAIL: partial_(x{i}^({j})) d_{k} != d_{k - j} partial_(x{i}) "
            f"(after {self.cases_checked} cases)"
        )


def check_commutation(f: Polynomial, n: int) -> CommutationReport:
    """Check partial_{x_i^(j)} d_k(f) == d_{k-j}(partial_{x_i} f) exactly
    for all i = 1..s and 0 <= j <= k <= n; a failure is reported, not raised."""
    _require_base(f)
    expansion = hs_components(f, n)
    cases = 0
    for i in range(1, f.base_count + 1):
        dfi = f.partial(JetVariable(i, 0))
        dfi_expansion = hs_components(dfi, n)
        for k in range(n + 1):
            for j in range(k + 1):
                cases += 1
                lhs = expansion[k].partial(JetVariable(i, j))
                rhs = dfi_expansion[k - j]
                if lhs != rhs:
                    return CommutationReport(False, cases, (i, j, k))
    return CommutationReport(True, cases, None)
