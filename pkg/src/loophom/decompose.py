# Loop space decompositions, the rank-one reduction plan, factor Hilbert
# series with the product identity, and the loop-equivalence classifiers
# (p-local and integral).

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import FpMatrix, TruncatedSeries, series_inv
from .complexes import ManifoldSpec, PDComplexSpec, validate_integral, validate_pd
from .quotient import quotient_dims


def _require_valid_even(spec: PDComplexSpec, who):
    report = validate_pd(spec)
    if not report.ok:
        raise ValueError(f"{who} needs a valid spec: {report.violations[0]}")
    if spec.n % 2:
        raise ValueError(f"{who} needs n even (n = 2m); got n={spec.n}")
    if spec.n // 2 <= 2:
        raise ValueError(f"{who} needs m > 2; got m={spec.n // 2}")


# ---------------------------------------------------------------------------
# Rank-one reduction plan


@dataclass(frozen=True)
class QuotientPlan:
    """How the complex maps onto a rank-one complex.

    perm is the reordering of the k generator-pair indices (new position ->
    original index, 0-based); x_change and y_change are the full homology
    basis-change matrices (rows = new basis in original coordinates),
    permutation included. target is ("moore", r1) or ("spheres", n-1, n),
    and c is the resulting unit cup coefficient of the new first pair.
    """

    case: str
    perm: tuple
    target: tuple
    c: int
    x_change: FpMatrix
    y_change: FpMatrix


def _perm_matrix(p, perm):
    k = len(perm)
    m = [[0] * k for _ in range(k)]
    for new, old in enumerate(perm):
        m[new][old] = 1
    return FpMatrix(p, m)


def quotient_plan(spec: PDComplexSpec) -> QuotientPlan:
    """Select the reduction case and basis change onto a rank-one target.

    Torsion indices are reordered to put a maximal exponent first (ties:
    lowest original index). With a11 != 0 the first pair maps off directly
    (Case1). Otherwise some a_i1 != 0 with i <= k1 because the free-torsion
    block vanishes; that pair is moved to position 2 and the equal/unequal
    exponent subcases pick the fold: Case2a swaps the pairs, Case2b mixes
    them with a division by 2 (a unit, p odd), Case2c folds unequal
    exponents. With no torsion at all a nonzero entry of the first column
    is promoted by reordering the degree n-1 generators alone.
    """
    _require_valid_even(spec, "quotient_plan")
    p, k, k1 = spec.p, spec.k, spec.k1
    a = spec.A.array()

    if k1 == 0:
        col = [int(a[i, 0]) for i in range(k)]
        i = next(i for i, v in enumerate(col) if v)  # exists: A nonsingular
        perm = list(range(k))
        perm[0], perm[i] = perm[i], perm[0]
        x_change = _perm_matrix(p, perm)
        return QuotientPlan(
            case="TorsionFree",
            perm=tuple(perm),
            target=("spheres", spec.n - 1, spec.n),
            c=col[i],
            x_change=x_change,
            y_change=FpMatrix.identity(p, k),
        )

    r_max = max(spec.r)
    first = spec.r.index(r_max)
    perm = list(range(k))
    perm[0], perm[first] = perm[first], perm[0]

    def entry(i, j):
        return int(a[perm[i], perm[j]])

    if entry(0, 0):
        change = _perm_matrix(p, perm)
        return QuotientPlan(
            case="Case1",
            perm=tuple(perm),
            target=("moore", r_max),
            c=entry(0, 0),
            x_change=change,
            y_change=change,
        )

    i = next(i for i in range(1, k) if entry(i, 0))  # <= k1-1: free rows vanish
    perm[1], perm[i] = perm[i], perm[1]
    r1 = r_max
    r2 = spec.r[perm[1]]
    pmat = _perm_matrix(p, perm)

    def mix(rows):
        m = np.eye(k, dtype=np.int64)
        m[0, 0], m[0, 1] = rows[0]
        m[1, 0], m[1, 1] = rows[1]
        return FpMatrix(p, m).matmul(pmat)

    if r1 == r2 and entry(1, 1):
        swap = mix([(0, 1), (1, 0)])
        return QuotientPlan(
            case="Case2a",
            perm=tuple(perm),
            target=("moore", r1),
            c=entry(1, 1),
            x_change=swap,
            y_change=swap,
        )
    if r1 == r2:
        inv2 = pow(2, -1, p)
        change = mix([(inv2, inv2), (1, -1)])
        return QuotientPlan(
            case="Case2b",
            perm=tuple(perm),
            target=("moore", r1),
            c=(2 * entry(1, 0)) % p,
            x_change=change,
            y_change=change,
        )
    return QuotientPlan(
        case="Case2c",
        perm=tuple(perm),
        target=("moore", r1),
        c=entry(1, 0),
        x_change=mix([(1, 0), (1, -1)]),
        y_change=mix([(1, 1), (0, -1)]),
    )


# ---------------------------------------------------------------------------
# Decomposition factors


@dataclass(frozen=True)
class SphereFiber:
    """Homotopy fiber S^{dim}{p^exponent} of the degree p^exponent self-map."""

    dim: int
    exponent: int

    def render(self, prime="p"):
        e = prime if self.exponent == 1 else f"{prime}^{self.exponent}"
        return f"S^{self.dim}{{{e}}}"

    def series(self, cap):
        num = TruncatedSeries.from_terms({0: 1, self.dim: 1}, cap)
        den = TruncatedSeries.from_terms({0: 1, self.dim - 1: -1}, cap)
        return num * series_inv(den)


@dataclass(frozen=True)
class LoopSphere:
    """Loop space of S^{dim}; its homology is free on one degree dim-1 class."""

    dim: int

    def render(self, prime="p"):
        return f"Loops(S^{self.dim})"

    def series(self, cap):
        return series_inv(TruncatedSeries.from_terms({0: 1, self.dim - 1: -1}, cap))


@dataclass(frozen=True)
class MooreCell:
    """Wedge summand P^{degree}(p^exponent): classes in degrees degree-1, degree."""

    degree: int
    exponent: int

    def render(self, prime="p"):
        e = prime if self.exponent == 1 else f"{prime}^{self.exponent}"
        return f"P^{self.degree}({e})"


@dataclass(frozen=True)
class SphereCell:
    """Wedge summand S^{degree}: one class."""

    degree: int

    def render(self, prime="p"):
        return f"S^{self.degree}"


@dataclass(frozen=True)
class LoopWedge:
    """Loops on J v (J ^ X) where X is the product of the inner factors.

    The wedge is a suspension, so its loop homology is the tensor algebra
    on its reduced homology pushed down one degree; Moore cells contribute
    two classes, sphere cells one, and the smash contributes the product of
    J's classes with the reduced homology of X.
    """

    j_cells: tuple
    inner: tuple

    def render(self, prime="p"):
        inner = " x ".join(f.render(prime) for f in self.inner)
        return f"Loops(J v (J ^ ({inner})))"

    def render_j(self, prime="p"):
        return " v ".join(c.render(prime) for c in self.j_cells)

    def series(self, cap):
        work = cap + 1
        j = TruncatedSeries.zero(work)
        for cell in self.j_cells:
            if isinstance(cell, MooreCell):
                j = j + TruncatedSeries.from_terms(
                    {cell.degree - 1: 1, cell.degree: 1}, work
                )
            else:
                j = j + TruncatedSeries.from_terms({cell.degree: 1}, work)
        x = TruncatedSeries.one(work)
        for f in self.inner:
            x = x * f.series(work)
        gens = (j * x).shift_down(1)  # reduced homology of the wedge, desuspended
        one = TruncatedSeries.one(gens.cap)
        return series_inv(one - gens).truncate(cap)


@dataclass(frozen=True)
class Decomposition:
    """Ordered factor list of the loop space, up to weak product."""

    factors: tuple

    def render(self, prime="p"):
        body = " x ".join(f.render(prime) for f in self.factors)
        wedges = [f for f in self.factors if isinstance(f, LoopWedge)]
        if wedges:
            body += f", J = {wedges[0].render_j(prime)}"
        return body

    def series(self, cap):
        out = TruncatedSeries.one(cap)
        for f in self.factors:
            out = out * f.series(cap)
        return out


def factor_series(factor, cap) -> TruncatedSeries:
    """Mod-p homology dimension series of one decomposition factor."""
    return factor.series(cap)


def decompose(spec: PDComplexSpec) -> Decomposition:
    """Loop space decomposition read off the skeleton data.

    Rank one gives the sphere-fiber times loop-sphere pair (torsion) or two
    loop spheres (torsion free). Higher rank appends the loops on
    J v (J ^ X) where J is the skeleton minus the target summand and X the
    rank-one loop space.
    """
    _require_valid_even(spec, "decompose")
    m = spec.n // 2
    if spec.k1 >= 1:
        r1 = max(spec.r)
        inner = (SphereFiber(2 * m - 1, r1), LoopSphere(4 * m - 1))
    else:
        inner = (LoopSphere(2 * m - 1), LoopSphere(2 * m))
    if spec.k == 1:
        return Decomposition(inner)
    cells = []
    if spec.k1 >= 1:
        rest = list(spec.r)
        rest.remove(max(rest))
        cells.extend(MooreCell(2 * m, ri) for ri in rest)
        free_pairs = spec.k2
    else:
        free_pairs = spec.k2 - 1
    for _ in range(free_pairs):
        cells.append(SphereCell(2 * m - 1))
        cells.append(SphereCell(2 * m))
    return Decomposition(inner + (LoopWedge(tuple(cells), inner),))


def decomposition_series_check(spec: PDComplexSpec, cap) -> bool:
    """Product of the factor series must equal the quotient dimensions."""
    dec = decompose(spec)
    return dec.series(cap) == quotient_dims(spec, cap)


def fiber_series(spec: PDComplexSpec, cap) -> TruncatedSeries:
    """Homology series of the fiber of the rank-one reduction, k >= 2 only.

    The fiber is a half-smash of the rank-one loop space with the reduced
    skeleton J, so its series is 1 + (k-1)(t^{2m-1} + t^{2m}) Q(t) with Q
    the rank-one loop series. The product identity
    quotient = Q * (loops-on-fiber series) is asserted before returning.
    """
    _require_valid_even(spec, "fiber_series")
    if spec.k < 2:
        raise ValueError("rank-one complexes have no fiber model: the quotient is the target")
    m = spec.n // 2
    dec = decompose(spec)
    inner, wedge = dec.factors[:2], dec.factors[2]
    q = TruncatedSeries.one(cap)
    for f in inner:
        q = q * f.series(cap)
    jt = TruncatedSeries.from_terms({2 * m - 1: spec.k - 1, 2 * m: spec.k - 1}, cap)
    result = TruncatedSeries.one(cap) + jt * q
    if q * wedge.series(cap) != quotient_dims(spec, cap):
        raise AssertionError("fiber product identity failed")
    return result


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class ClassInvariant:
    """Complete p-local loop-equivalence invariant: m, rational rank and the
    multiset of Bockstein exponents on the middle cohomology."""

    m: int
    rational_rank: int
    torsion: tuple

    @classmethod
    def of(cls, spec: PDComplexSpec):
        _require_valid_even(spec, "classification")
        return cls(m=spec.n // 2, rational_rank=spec.k2, torsion=tuple(sorted(spec.r)))

    def to_json_dict(self):
        return {
            "m": self.m,
            "rational_rank": self.rational_rank,
            "torsion": list(self.torsion),
        }


@dataclass(frozen=True)
class Verdict:
    verdict: str  # equivalent | not_equivalent | incomparable
    invariant_a: object
    invariant_b: object

    @property
    def equivalent(self):
        if self.verdict == "incomparable":
            return None
        return self.verdict == "equivalent"


def classify(a: PDComplexSpec, b: PDComplexSpec) -> Verdict:
    """Loop spaces are equivalent iff rational ranks and exponent multisets agree.

    Complexes at different primes or of different dimension are
    incomparable: the theorem says nothing about them.
    """
    inv_a, inv_b = ClassInvariant.of(a), ClassInvariant.of(b)
    if a.p != b.p or inv_a.m != inv_b.m:
        return Verdict("incomparable", inv_a, inv_b)
    same = (
        inv_a.rational_rank == inv_b.rational_rank and inv_a.torsion == inv_b.torsion
    )
    return Verdict("equivalent" if same else "not_equivalent", inv_a, inv_b)


@dataclass(frozen=True)
class IntegralInvariant:
    """Integral loop-equivalence invariant: m and the per-odd-prime multisets."""

    m: int
    torsion: tuple

    @classmethod
    def of(cls, man: ManifoldSpec):
        return cls(m=man.m, torsion=man.torsion)

    def to_json_dict(self):
        return {"m": self.m, "torsion": {str(q): list(e) for q, e in self.torsion}}


def classify_integral(a: ManifoldSpec, b: ManifoldSpec) -> Verdict:
    """Integral loop equivalence: the exponent multisets agree at every odd prime."""
    for name, man in (("first", a), ("second", b)):
        report = validate_integral(man)
        if not report.ok:
            raise ValueError(f"{name} manifold fails validation: {report.violations[0]}")
    inv_a, inv_b = IntegralInvariant.of(a), IntegralInvariant.of(b)
    if a.m != b.m:
        return Verdict("incomparable", inv_a, inv_b)
    same = inv_a.torsion == inv_b.torsion
    return Verdict("equivalent" if same else "not_equivalent", inv_a, inv_b)


@dataclass(frozen=True)
class IntegralDecomposition:
    """Integral decomposition report: Omega M = Omega G x Q x Omega S^{4m-1}.

    q_factors lists the sphere fibers of Q, one per torsion prime with the
    maximal exponent there; complement_cells lists the Moore cells of
    I = (skeleton of M)/(skeleton of N), the wedge G is built from; local
    holds the p-local decomposition at each torsion prime.
    """

    m: int
    q_factors: tuple  # ((prime, exponent), ...) sorted by prime
    loop_sphere_dim: int
    complement_cells: tuple  # ((prime, exponent), ...) with one max removed per prime
    local: tuple  # ((prime, Decomposition), ...)

    def render(self):
        lines = []
        factors = [
            SphereFiber(2 * self.m - 1, e).render(prime=str(q)) for q, e in self.q_factors
        ]
        factors.append(f"Loops(S^{self.loop_sphere_dim})")
        if self.complement_cells:
            factors.append("Loops(G)")
        lines.append("Loops(M) = " + " x ".join(factors))
        if self.complement_cells:
            cells = " v ".join(
                MooreCell(2 * self.m, e).render(prime=str(q))
                for q, e in self.complement_cells
            )
            lines.append(f"G = Loops(N) |x I, I = {cells}")
        for q, dec in self.local:
            lines.append(f"at p={q}: {dec.render(prime=str(q))}")
        return "\n".join(lines)


def induced_local_spec(man: ManifoldSpec, q, A=None) -> PDComplexSpec:
    """The mod-q Poincare complex a valid manifold spec localizes to at q.

    All middle cohomology at q is torsion, so k = k1 = the number of
    exponents there; any valid cup matrix represents the localization and
    the identity is used unless one is supplied.
    """
    exps = man.exponents(q)
    if not exps:
        raise ValueError(f"no torsion at prime {q}")
    k = len(exps)
    if A is None:
        A = FpMatrix.identity(q, k)
    return PDComplexSpec(p=q, n=2 * man.m, k=k, k1=k, r=exps, A=A)


def integral_decompose(man: ManifoldSpec, cap=None) -> IntegralDecomposition:
    """Integral loop decomposition of a validated manifold spec.

    Q takes one sphere fiber per torsion prime at the maximal exponent;
    the complement I drops exactly that maximal Moore cell per prime. The
    per-prime localizations are recomputed through the p-local route and
    must reproduce the same Q factor, which is asserted; when a cap is
    given the factor-series product identity is checked at each prime too.
    """
    report = validate_integral(man)
    if not report.ok:
        raise ValueError(f"manifold fails validation: {report.violations[0]}")
    m = man.m
    q_factors = []
    complement = []
    local = []
    for q, exps in man.torsion:
        s = max(exps)
        q_factors.append((q, s))
        rest = list(exps)
        rest.remove(s)
        complement.extend((q, e) for e in rest)
        local_spec = induced_local_spec(man, q)
        dec = decompose(local_spec)
        fiber = dec.factors[0]
        if not (isinstance(fiber, SphereFiber) and fiber.exponent == s):
            raise AssertionError("local decomposition disagrees with the Q factor")
        if cap is not None and dec.series(cap) != quotient_dims(local_spec, cap):
            raise AssertionError(f"series product identity failed at p={q}")
        local.append((q, dec))
    return IntegralDecomposition(
        m=m,
        q_factors=tuple(q_factors),
        loop_sphere_dim=4 * m - 1,
        complement_cells=tuple(complement),
        local=tuple(local),
    )
