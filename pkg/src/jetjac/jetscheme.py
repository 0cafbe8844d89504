"""Jet schemes of hypersurfaces and their singularity rank criteria.

The order-n jet scheme of V(f) is cut out by f, d_1(f), ..., d_n(f) in the
jet variables.  A point of it is non-singular exactly when the blocked
order-m Jacobian has full rank (n+1)M there, assuming the jet scheme is
irreducible; that hypothesis is never decided here, only recorded.  The
certificate produced by nobile_certificate assembles the desk-scale
evidence that blowing up the higher-differentials module cannot be an
isomorphism over a singular base point: zero-jet membership, rank
deficiency there, the expected generic cokernel rank, and a rank jump
between singular and generic jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .field import FieldElement
from .hasse import hs_components
from .jacobian import PolyMatrix, index_families, jac_m
from .jetmatrix import dn_matrix, jet_jacobian
from .linalg import SAMPLE_RANGE, eval_matrix, rank, trial_rng
from .poly import JetVariable, MissingCoordinate, Point, Polynomial, jet_grid


class ConstantPolynomial(ValueError):
    """A hypersurface equation must be nonconstant."""


class PointNotOnScheme(ValueError):
    """The point does not satisfy the jet-scheme equations."""


class NotSingularBase(ValueError):
    """The base point is not a singular point of the hypersurface."""


class NoSmoothPointFound(RuntimeError):
    """Smooth-point sampling exhausted its budget (the equation may be
    degenerate, e.g. a p-th power in characteristic p)."""


IRREDUCIBILITY_ASSUMPTION = "jet scheme irreducible (user assertion)"
NORMALITY_ASSUMPTION = "jet scheme normal (user assertion)"
HYPERSURFACE_ASSUMPTION = "hypersurface irreducible (user assertion)"


@dataclass(frozen=True)
class JetSchemeDesc:
    """V(f, d_1(f), ..., d_n(f)) inside affine s(n+1)-space."""

    f: Polynomial
    s: int
    n: int
    equations: tuple[Polynomial, ...]

    @property
    def expected_dimension(self) -> int:
        # (s-1)(n+1) when the jet scheme is irreducible
        return (self.s - 1) * (self.n + 1)


def jet_equations(f: Polynomial, n: int) -> JetSchemeDesc:
    """Equations of the order-n jet scheme of the hypersurface V(f)."""
    if f.is_constant:
        raise ConstantPolynomial("the hypersurface equation is constant")
    if f.max_order > 0:
        raise ValueError("the hypersurface equation must use base variables only")
    expansion = hs_components(f, n)
    return JetSchemeDesc(f, f.base_count, n, expansion.components)


def _require_coverage(desc: JetSchemeDesc, point: Point):
    for v in jet_grid(desc.s, desc.n):
        if v not in point.coords:
            raise MissingCoordinate(f"point assigns no value to {v.name}")


def on_jet_scheme(desc: JetSchemeDesc, point: Point) -> bool:
    """Whether every defining equation vanishes at the point."""
    _require_coverage(desc, point)
    return all(eq.evaluate(point).is_zero for eq in desc.equations)


@dataclass(frozen=True)
class RankReport:
    rank: int
    bound: int
    full: bool
    assumptions: tuple[str, ...] = ()

    def __str__(self):
        status = "full" if self.full else "deficient"
        return f"rank {self.rank} of bound {self.bound} ({status})"


def classical_rank_test(desc: JetSchemeDesc, point: Point) -> RankReport:
    """Rank of the Jacobian of (f, d_1 f, ..., d_n f) at a point of the
    jet scheme; full rank n+1 is the usual smoothness criterion."""
    if not on_jet_scheme(desc, point):
        raise PointNotOnScheme("the point does not lie on the jet scheme")
    mx = jet_jacobian([desc.f], desc.n)
    r = rank(eval_matrix(mx, point))
    bound = desc.n + 1
    return RankReport(r, bound, r == bound, (IRREDUCIBILITY_ASSUMPTION,))


def higher_rank_test(desc: JetSchemeDesc, point: Point, m: int) -> RankReport:
    """Rank of the blocked order-m Jacobian at a point of the jet scheme;
    full rank (n+1)M detects smoothness under the irreducibility
    assumption, in any characteristic."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not on_jet_scheme(desc, point):
        raise PointNotOnScheme("the point does not lie on the jet scheme")
    mx = dn_matrix(jac_m([desc.f], m), desc.n)
    r = rank(eval_matrix(mx, point))
    fam = index_families(desc.s, m)
    bound = (desc.n + 1) * fam.M
    return RankReport(r, bound, r == bound, (IRREDUCIBILITY_ASSUMPTION,))


@dataclass(frozen=True)
class Presentation:
    """A module presented as the cokernel of the transpose of `matrix`."""

    name: str
    matrix: PolyMatrix
    gens: int
    rels: int
    module_label: str
    f: Polynomial
    n: int
    m: int


def presentation_of(f: Polynomial, n: int, m: int) -> Presentation:
    """Presentation matrix of the order-m differentials of the hypersurface
    ring, tensored over the order-n jet algebra when n > 0."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    matrix = dn_matrix(jac_m([f], m), n)
    fam = index_families(f.base_count, m)
    if n == 0:
        label = "Omega1" if m == 1 else "OmegaM"
        name = f"order-{m} differentials"
    else:
        label = "Omega1_tensor_Bn" if m == 1 else "OmegaM_tensor_Bn"
        name = f"order-{m} differentials over order-{n} jets"
    return Presentation(
        name=name,
        matrix=matrix,
        gens=(n + 1) * fam.N,
        rels=(n + 1) * fam.M,
        module_label=label,
        f=f,
        n=n,
        m=m,
    )


def zero_jet_over(base: Point, n: int) -> Point:
    """The jet whose base coordinates are `base` and whose positive-order
    coordinates all vanish; it lies on the jet scheme whenever the base
    point lies on the hypersurface."""
    if any(v.order > 0 for v in base.coords):
        raise ValueError("expected a base point (order-0 coordinates only)")
    s = max(v.base for v in base.coords)
    coords = dict(base.coords)
    for k in range(1, n + 1):
        for i in range(1, s + 1):
            coords[JetVariable(i, k)] = base.spec.zero
    return Point(base.spec, coords)


# -- smooth point and smooth jet sampling -----------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """All rational roots of a univariate polynomial with rational
    coefficients (ascending order), by the rational root bound."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return [Fraction(0)]  # identically zero: pick the origin
    if len(coeffs) == 1:
        return []
    roots = []
    low = 0
    while coeffs[low] == 0:
        low += 1
    if low:
        roots.append(Fraction(0))
        coeffs = coeffs[low:]
        if len(coeffs) == 1:
            return roots
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    seen = set(roots)
    for num in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for sign in (1, -1):
                cand = Fraction(sign * num, q)
                if cand in seen:
                    continue
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    seen.add(cand)
                    roots.append(cand)
    return roots


def _residue_roots(coeffs: list[int], p: int) -> list[int]:
    if all(c % p == 0 for c in coeffs):
        return list(range(p))
    roots = []
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            roots.append(x)
    return roots


def _univariate_in(f: Polynomial, target: JetVariable, fixed: dict[JetVariable, object]):
    """Coefficients (ascending) of f as a univariate polynomial in
    `target`, the other variables frozen at raw values `fixed`."""
    p = f.spec.characteristic
    target_idx = f.ambient.index(target)
    vals = [fixed.get(v) for v in f.ambient]
    coeffs: dict[int, object] = {}
    for exps, c in f.terms.items():
        t = c
        for idx, e in enumerate(exps):
            if e and idx != target_idx:
                t = t * pow(vals[idx], e, p) if p else t * vals[idx] ** e
        k = exps[target_idx]
        acc = coeffs.get(k, 0) + t
        coeffs[k] = acc % p if p else acc
    top = max(coeffs, default=0)
    return [coeffs.get(k, Fraction(0) if p == 0 else 0) for k in range(top + 1)]


def find_smooth_point(f: Polynomial, seed=0, attempts: int = 200) -> Point:
    """A point of V(f) where some first partial is nonzero.

    Freezes all but one coordinate at seeded random values and solves the
    remaining univariate equation: by rational root search over Q, by
    scanning residues over GF(p).  Deterministic in seed.
    """
    s = f.base_count
    spec = f.spec
    p = spec.characteristic
    if s < 1 or f.is_constant:
        raise NoSmoothPointFound("the equation has no variables to solve for")
    partials = [f.partial(JetVariable(i, 0)) for i in range(1, s + 1)]
    for t in range(attempts):
        rng = trial_rng(seed, t, "smooth-point")
        solve_base = t % s + 1
        fixed = {}
        for i in range(1, s + 1):
            if i != solve_base:
                if p:
                    fixed[JetVariable(i, 0)] = rng.randrange(p)
                else:
                    fixed[JetVariable(i, 0)] = Fraction(rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE))
        target = JetVariable(solve_base, 0)
        coeffs = _univariate_in(f, target, fixed)
        roots = _residue_roots(coeffs, p) if p else _rational_roots(coeffs)
        for root in roots:
            coords = {v: FieldElement(spec, val) for v, val in fixed.items()}
            coords[target] = FieldElement(spec, root)
            point = Point(spec, coords)
            if any(not g.evaluate(point).is_zero for g in partials):
                return point
    raise NoSmoothPointFound(
        f"no smooth point of V(f) found in {attempts} attempts; "
        "the equation may be degenerate (e.g. a p-th power in characteristic p)"
    )


def extend_to_jet(f: Polynomial, base, n: int, seed=0, fill=None) -> Point:
    """Extend coordinates over a smooth base point to a jet on the scheme.

    `base` is a Point (or coordinate mapping) that must assign all base
    variables; it may also fix some higher-order coordinates.  At each
    order k the missing coordinates are filled with seeded random values
    except one at a nonzero gradient position, which is solved from the
    order-k equation (the equation is affine in the order-k coordinates
    with the first partials of f as coefficients).
    """
    spec = f.spec
    p = spec.characteristic
    coords = dict(base.coords) if isinstance(base, Point) else dict(base)
    s = f.base_count
    for i in range(1, s + 1):
        if JetVariable(i, 0) not in coords:
            raise MissingCoordinate(f"base coordinate x{i} is not assigned")
    base_point = Point(spec, {JetVariable(i, 0): coords[JetVariable(i, 0)] for i in range(1, s + 1)})
    if not f.evaluate(base_point).is_zero:
        raise PointNotOnScheme("the base point is not on the hypersurface")
    grad = {
        i: f.partial(JetVariable(i, 0)).evaluate(base_point) for i in range(1, s + 1)
    }
    if fill is None:
        rng = trial_rng(seed, n, "jet-fill")

        def fill(i, k):
            if p:
                return spec.element(rng.randrange(p))
            return spec.element(rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE))

    expansion = hs_components(f, n)
    for k in range(1, n + 1):
        unknown = [i for i in range(1, s + 1) if JetVariable(i, k) not in coords]
        solvable = [i for i in unknown if not grad[i].is_zero]
        if unknown and solvable:
            solve_i = solvable[0]
            for i in unknown:
                if i != solve_i:
                    coords[JetVariable(i, k)] = spec.element(fill(i, k))
            coords[JetVariable(solve_i, k)] = spec.zero
            offset = expansion[k].evaluate(Point(spec, coords))
            coords[JetVariable(solve_i, k)] = -offset / grad[solve_i]
        else:
            for i in unknown:
                coords[JetVariable(i, k)] = spec.element(fill(i, k))
            if not expansion[k].evaluate(Point(spec, coords)).is_zero:
                raise PointNotOnScheme(
                    f"the order-{k} coordinates violate the jet equation"
                )
    return Point(spec, coords)


@dataclass(frozen=True)
class CokernelReport:
    """Cokernel rank of a presentation at sampled smooth jets."""

    expected: int
    samples: tuple[int, ...]
    cokernel_rank: int
    all_match: bool
    trials: int
    seed: object

    def __str__(self):
        verdict = "matches" if self.all_match else "DIFFERS from"
        return (
            f"generic cokernel rank {self.cokernel_rank} {verdict} the expected "
            f"{self.expected} (probabilistic; trials={self.trials}, seed={self.seed})"
        )


def generic_cokernel_rank(pres: Presentation, trials: int = 20, seed=0) -> CokernelReport:
    """Sample jets over smooth base points of V(f), evaluate the
    presentation matrix there and report generators minus rank, compared
    against the free rank expected away from the singular locus."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    expected = pres.gens - pres.rels
    samples = []
    for t in range(trials):
        base = find_smooth_point(pres.f, seed=f"{seed}:{t}")
        jet = extend_to_jet(pres.f, base, pres.n, seed=f"{seed}:{t}")
        sm = eval_matrix(pres.matrix, jet)
        samples.append(sm.cols - rank(sm))
    observed = min(samples)
    return CokernelReport(
        expected=expected,
        samples=tuple(samples),
        cokernel_rank=observed,
        all_match=all(x == expected for x in samples),
        trials=trials,
        seed=seed,
    )


@dataclass(frozen=True)
class FreeRankComparison:
    """Free ranks of the two order-m differential modules attached to the
    affine line: over the jet-variable polynomial ring, and the base
    module tensored with the truncation.  They differ for m > 1."""

    n: int
    m: int
    jet_ring_rank: int
    tensor_rank: int
    isomorphic: bool

    def __str__(self):
        verdict = "consistent with an isomorphism" if self.isomorphic else "not isomorphic"
        return (
            f"free rank over the jet polynomial ring: {self.jet_ring_rank}; "
            f"free rank of the tensored module: {self.tensor_rank}; {verdict}"
        )


def rank_counterexample_check(n: int = 1, m: int = 2) -> FreeRankComparison:
    """Compare the two ranks for the affine line from first principles:
    the order-m differentials of a polynomial ring in v variables form a
    free module of rank C(m+v, v) - 1 (no relations), and the jet algebra
    of one base variable is a polynomial ring in n+1 variables."""

    def free_rank(v: int) -> int:
        return index_families(v, m).N

    jet_ring_rank = free_rank(n + 1)
    tensor_rank = (n + 1) * free_rank(1)
    return FreeRankComparison(
        n, m, jet_ring_rank, tensor_rank, jet_ring_rank == tensor_rank
    )


@dataclass(frozen=True)
class NobileCertificate:
    """Desk-scale evidence that the blowup of the order-m differentials
    module over the order-n jet scheme is not an isomorphism when the base
    hypersurface point is singular.

    The four facts, each recomputed exactly: (i) the zero jet over the
    singular base lies on the jet scheme; (ii) the blocked order-m
    Jacobian is rank-deficient there, so all its maximal minors vanish;
    (iii) the generic cokernel rank matches the free rank, identifying the
    module blowup with the blowup of the minors ideal; (iv) the minors do
    not vanish at sampled smooth jets, witnessing the rank jump behind
    non-principality.  Irreducibility and normality remain user
    assertions, restated in `assumptions`.
    """

    f: Polynomial
    n: int
    m: int
    base: Point
    membership: bool
    rank: int
    bound: int
    full: bool
    cokernel: CokernelReport
    rank_jump: bool
    witness_jet: Point | None
    witness_rank: int | None
    assumptions: tuple[str, ...]
    verdict: str
    trials: int
    seed: object

    @property
    def all_facts_hold(self) -> bool:
        return (
            self.membership
            and self.rank < self.bound
            and self.cokernel.all_match
            and self.rank_jump
        )

    def __str__(self):
        lines = [
            f"singularity certificate for f = {self.f}, n = {self.n}, m = {self.m}",
            f"base point: {self.base}",
            f"(i)   zero jet on the jet scheme: {self.membership}",
            f"(ii)  rank at the zero jet: {self.rank} < bound {self.bound}: {self.rank < self.bound}",
            f"(iii) {self.cokernel}",
            f"(iv)  rank jump at a smooth jet (rank {self.witness_rank}): {self.rank_jump}",
            "assumptions: " + "; ".join(self.assumptions),
            f"verdict: {self.verdict}",
        ]
        return "\n".join(lines)


def nobile_certificate(
    f: Polynomial,
    n: int,
    m: int,
    singular_base: Point,
    trials: int = 20,
    seed=0,
) -> NobileCertificate:
    """Assemble the four-fact singularity certificate at a singular base
    point (all first partials of f vanish there); raises NotSingularBase
    otherwise."""
    if m < 1:
        raise ValueError("m must be >= 1")
    s = f.base_count
    for i in range(1, s + 1):
        if JetVariable(i, 0) not in singular_base.coords:
            raise MissingCoordinate(f"base point assigns no value to x{i}")
    if not f.evaluate(singular_base).is_zero:
        raise NotSingularBase("the base point is not on the hypersurface")
    for i in range(1, s + 1):
        g = f.partial(JetVariable(i, 0)).evaluate(singular_base)
        if not g.is_zero:
            raise NotSingularBase(
                f"partial derivative by x{i} is {g} != 0 at the base point"
            )
    desc = jet_equations(f, n)
    zjet = zero_jet_over(singular_base, n)
    membership = on_jet_scheme(desc, zjet)
    report = higher_rank_test(desc, zjet, m)
    pres = presentation_of(f, n, m)
    cokernel = generic_cokernel_rank(pres, trials=trials, seed=seed)
    witness_jet = None
    witness_rank = None
    try:
        wbase = find_smooth_point(f, seed=f"{seed}:witness")
        witness_jet = extend_to_jet(f, wbase, n, seed=f"{seed}:witness")
        witness_rank = rank(eval_matrix(pres.matrix, witness_jet))
    except NoSmoothPointFound:
        pass
    rank_jump = (
        witness_rank is not None
        and witness_rank == report.bound
        and report.rank < report.bound
    )
    assumptions = (
        HYPERSURFACE_ASSUMPTION,
        IRREDUCIBILITY_ASSUMPTION,
        NORMALITY_ASSUMPTION,
    )
    all_facts = (
        membership
        and report.rank < report.bound
        and cokernel.all_match
        and rank_jump
    )
    verdict = (
        "blowup not an isomorphism (under stated assumptions)"
        if all_facts
        else "inconclusive: some certificate fact failed"
    )
    return NobileCertificate(
        f=f,
        n=n,
        m=m,
        base=singular_base,
        membership=membership,
        rank=report.rank,
        bound=report.bound,
        full=report.full,
        cokernel=cokernel,
        rank_jump=rank_jump,
        witness_jet=witness_jet,
        witness_rank=witness_rank,
        assumptions=assumptions,
        verdict=verdict,
        trials=trials,
        seed=seed,
    )
