# Data model and validators for the complexes the calculator accepts:
# highly connected torsion Poincare complexes localized at an odd prime,
# the more general single-top-cell complexes they reduce to, and the
# integral manifold data used for the whole-space classification.

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import FpMatrix, is_odd_prime, matrix_rank


class StructuralError(ValueError):
    """A spec is malformed (wrong shapes/ranges), as opposed to failing validation."""


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validator: every violated constraint, not just the first."""

    violations: tuple = ()
    advisories: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class PDComplexSpec:
    """A rank-k mod-p Poincare complex of dimension 2n-1, (n-2)-connected.

    The skeleton carries k generator pairs: in cohomology x_i* in degree n-1
    and y_i* in degree n. Pairs 1..k1 are torsion pairs tied by a Bockstein
    of exponent r_i; the remaining k-k1 pairs are rationally free. The k x k
    cup matrix A records y_j* x_i* = A[i][j] z* against the top class z*.
    """

    p: int
    n: int
    k: int
    k1: int
    r: tuple
    A: FpMatrix

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if not is_odd_prime(self.p):
            raise StructuralError(f"p={self.p} must be an odd prime >= 3")
        if self.n < 3:
            raise StructuralError(f"n={self.n} must be >= 3")
        if self.k < 1:
            raise StructuralError(f"k={self.k} must be >= 1")
        if not 0 <= self.k1 <= self.k:
            raise StructuralError(f"k1={self.k1} must satisfy 0 <= k1 <= k={self.k}")
        if len(self.r) != self.k1:
            raise StructuralError(f"r has {len(self.r)} entries, expected k1={self.k1}")
        if any(ri < 1 for ri in self.r):
            raise StructuralError("all Bockstein exponents must be >= 1")
        if not isinstance(self.A, FpMatrix):
            raise StructuralError("A must be an FpMatrix")
        if self.A.p != self.p:
            raise StructuralError(f"A has modulus {self.A.p}, spec has p={self.p}")
        if (self.A.rows, self.A.cols) != (self.k, self.k):
            raise StructuralError(f"A must be {self.k}x{self.k}")

    @property
    def k2(self):
        return self.k - self.k1

    @property
    def dimension(self):
        return 2 * self.n - 1

    @property
    def m(self):
        """Half of n when n is even (the parameter the decomposition theorems use)."""
        if self.n % 2:
            raise ValueError(f"n={self.n} is odd; no integer m with n = 2m")
        return self.n // 2

    @classmethod
    def from_json_dict(cls, data):
        try:
            p = int(data["p"])
            n = int(data["n"])
            k = int(data["k"])
            k1 = int(data["k1"])
            r = [int(x) for x in data["r"]]
            rows = [[int(x) for x in row] for row in data["A"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad complex JSON: {exc}") from exc
        if not is_odd_prime(p):
            raise StructuralError(f"p={p} must be an odd prime >= 3")
        if len(rows) != k or any(len(row) != k for row in rows):
            raise StructuralError(f"A must be a {k}x{k} integer matrix")
        return cls(p=p, n=n, k=k, k1=k1, r=tuple(r), A=FpMatrix(p, rows))

    def to_json_dict(self):
        return {
            "p": self.p,
            "n": self.n,
            "k": self.k,
            "k1": self.k1,
            "r": list(self.r),
            "A": self.A.tolist(),
        }


def validate_pd(spec: PDComplexSpec) -> ValidationReport:
    """Check the cup-matrix constraints forced by duality and the Bocksteins.

    Accepts exactly when A is nonsingular mod p, the lower-left block
    (free rows against torsion columns) vanishes, and the torsion block is
    symmetric for even n and skew symmetric for odd n. The odd-n all-torsion
    case with k odd can never pass: a nonsingular skew matrix has even rank,
    so its rejection surfaces through the nonsingularity check, with an
    advisory explaining why no such complex exists.
    """
    violations = []
    advisories = []
    a = spec.A.array()
    k, k1 = spec.k, spec.k1

    if matrix_rank(spec.A) != k:
        violations.append(f"cup matrix A is singular mod {spec.p} (rank < k={k})")

    for i in range(k1, k):
        for j in range(k1):
            if a[i, j]:
                violations.append(
                    f"free-torsion block must vanish: A[{i + 1}][{j + 1}] = {int(a[i, j])} != 0"
                )

    b = a[:k1, :k1]
    if spec.n % 2 == 0:
        for i in range(k1):
            for j in range(i + 1, k1):
                if b[i, j] != b[j, i]:
                    violations.append(
                        f"torsion block must be symmetric for even n: "
                        f"A[{i + 1}][{j + 1}] != A[{j + 1}][{i + 1}]"
                    )
    else:
        for i in range(k1):
            if b[i, i]:
                violations.append(
                    f"torsion block must be skew symmetric for odd n: A[{i + 1}][{i + 1}] != 0"
                )
            for j in range(i + 1, k1):
                if (b[i, j] + b[j, i]) % spec.p:
                    violations.append(
                        f"torsion block must be skew symmetric for odd n: "
                        f"A[{i + 1}][{j + 1}] != -A[{j + 1}][{i + 1}]"
                    )
        if k1 == k and k % 2 == 1:
            advisories.append(
                "no complex exists with odd n, all-torsion cohomology and odd rank: "
                "a skew symmetric matrix of odd size is singular"
            )

    return ValidationReport(tuple(violations), tuple(advisories))


@dataclass(frozen=True)
class MooreSummand:
    """Moore space summand P^n(p^exponent) of the skeleton splitting."""

    exponent: int


@dataclass(frozen=True)
class SphereSummand:
    """Sphere summand S^dim of the skeleton splitting."""

    dim: int


@dataclass(frozen=True)
class WedgeSummands:
    """Wedge decomposition of the (2n-2)-skeleton: Moore spaces then sphere pairs."""

    p: int
    n: int
    summands: tuple

    def render(self):
        parts = []
        for s in self.summands:
            if isinstance(s, MooreSummand):
                e = "p" if s.exponent == 1 else f"p^{s.exponent}"
                parts.append(f"P^{self.n}({e})")
            else:
                parts.append(f"S^{s.dim}")
        return " v ".join(parts) if parts else "*"


def skeleton_splitting(spec: PDComplexSpec) -> WedgeSummands:
    """Split the skeleton: one Moore space per torsion pair, sphere pairs for the rest."""
    report = validate_pd(spec)
    if not report.ok:
        raise ValueError(f"spec fails validation: {report.violations[0]}")
    summands = [MooreSummand(ri) for ri in spec.r]
    for _ in range(spec.k2):
        summands.append(SphereSummand(spec.n - 1))
        summands.append(SphereSummand(spec.n))
    return WedgeSummands(spec.p, spec.n, tuple(summands))


@dataclass(frozen=True)
class GeneralComplexSpec:
    """A single-top-cell complex: generators a_1..a_l below one class in odd degree N.

    Degrees are sorted ascending, m = |a_1|, and 3(m-1) > N-2 keeps the
    skeleton a double suspension. The cup matrix c records a_j* a_i* =
    c[i][j] z*, nonzero only in complementary degrees, graded commutative.
    """

    p: int
    N: int
    gen_degrees: tuple
    c: FpMatrix
    names: tuple = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gen_degrees", tuple(int(d) for d in self.gen_degrees))
        if not is_odd_prime(self.p):
            raise StructuralError(f"p={self.p} must be an odd prime >= 3")
        if self.N % 2 == 0 or self.N <= 3:
            raise StructuralError(f"total dimension N={self.N} must be odd and > 3")
        ell = len(self.gen_degrees)
        if ell == 0:
            raise StructuralError("at least one generator required")
        if list(self.gen_degrees) != sorted(self.gen_degrees):
            raise StructuralError("generator degrees must be sorted ascending")
        m = self.gen_degrees[0]
        if not 3 * (m - 1) > self.N - 2:
            raise StructuralError(f"connectivity bound fails: 3({m}-1) <= {self.N}-2")
        if any(not m <= d <= self.N - 1 for d in self.gen_degrees):
            raise StructuralError("generator degrees must lie in [m, N-1]")
        if self.c.p != self.p or (self.c.rows, self.c.cols) != (ell, ell):
            raise StructuralError(f"c must be {ell}x{ell} over p={self.p}")
        a = self.c.array()
        for i in range(ell):
            for j in range(ell):
                di, dj = self.gen_degrees[i], self.gen_degrees[j]
                if a[i, j] and di + dj != self.N:
                    raise StructuralError(
                        f"c[{i + 1}][{j + 1}] nonzero but |a_{i + 1}|+|a_{j + 1}| != N"
                    )
                sign = -1 if (di * dj) % 2 else 1
                if (a[i, j] - sign * a[j, i]) % self.p:
                    raise StructuralError(
                        f"graded commutativity fails at c[{i + 1}][{j + 1}]"
                    )
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"g{i + 1}" for i in range(ell)))
        elif len(self.names) != ell:
            raise StructuralError("one name per generator required")

    @property
    def ell(self):
        return len(self.gen_degrees)

    @property
    def m(self):
        return self.gen_degrees[0]

    def m_prime(self):
        """Smallest degree carrying a unit cup product; N when there is none."""
        a = self.c.array()
        best = self.N
        for i in range(self.ell):
            for j in range(i, self.ell):
                if a[i, j] % self.p:
                    best = min(best, self.gen_degrees[i])
        return best

    def has_unit_cup_pair(self):
        """Condition for the quotient description: some cup product is a unit."""
        return self.m_prime() < self.N


def to_general(spec: PDComplexSpec) -> GeneralComplexSpec:
    """View a Poincare complex as a general complex with 2k generators.

    The x generators sit in degree n-1, the y generators in degree n, and
    the cup matrix is populated from A with its graded-commutative mirror.
    Requires n > 3 so the connectivity bound holds.
    """
    report = validate_pd(spec)
    if not report.ok:
        raise ValueError(f"spec fails validation: {report.violations[0]}")
    if spec.n <= 3:
        raise ValueError(f"n={spec.n} unsupported: the reduction needs n > 3")
    k, n, p = spec.k, spec.n, spec.p
    degrees = tuple([n - 1] * k + [n] * k)
    ell = 2 * k
    c = [[0] * ell for _ in range(ell)]
    a = spec.A.array()
    # (n-1)*n is even, so the mirrored entries carry no sign.
    for i in range(k):
        for j in range(k):
            c[i][k + j] = int(a[i, j])
            c[k + j][i] = int(a[i, j])
    names = tuple(f"x{i + 1}" for i in range(k)) + tuple(f"y{j + 1}" for j in range(k))
    return GeneralComplexSpec(p=p, N=2 * n - 1, gen_degrees=degrees, c=FpMatrix(p, c), names=names)


@dataclass(frozen=True)
class ManifoldSpec:
    """Integral data of a (2m-2)-connected (4m-1)-dimensional Poincare complex.

    Only what the integral classification consumes is kept: the skeleton's
    torsion (a multiset of exponents per odd prime), the rational rank of
    the middle cohomology, and whether 2-torsion is present.
    """

    m: int
    torsion: tuple  # sorted tuple of (prime, sorted tuple of exponents)
    rational_rank: int
    two_torsion: bool

    def __post_init__(self):
        if self.m < 1:
            raise StructuralError(f"m={self.m} must be >= 1")
        if self.rational_rank < 0:
            raise StructuralError("rational_rank must be >= 0")
        norm = []
        seen = set()
        for q, exps in self.torsion:
            q = int(q)
            exps = tuple(sorted(int(e) for e in exps))
            if not exps:
                continue
            if not is_odd_prime(q):
                raise StructuralError(f"torsion prime {q} must be an odd prime")
            if q in seen:
                raise StructuralError(f"duplicate torsion prime {q}")
            if any(e < 1 for e in exps):
                raise StructuralError("torsion exponents must be >= 1")
            seen.add(q)
            norm.append((q, exps))
        object.__setattr__(self, "torsion", tuple(sorted(norm)))

    def primes(self):
        return tuple(q for q, _ in self.torsion)

    def exponents(self, q):
        for prime, exps in self.torsion:
            if prime == q:
                return exps
        return ()

    @classmethod
    def from_json_dict(cls, data):
        try:
            m = int(data["m"])
            rational_rank = int(data["rational_rank"])
            two_torsion = bool(data["two_torsion"])
            torsion_raw = data["torsion"]
            torsion = tuple(
                (int(q), tuple(int(e) for e in exps)) for q, exps in torsion_raw.items()
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise StructuralError(f"bad manifold JSON: {exc}") from exc
        return cls(m=m, torsion=torsion, rational_rank=rational_rank, two_torsion=two_torsion)

    def to_json_dict(self):
        return {
            "m": self.m,
            "torsion": {str(q): list(exps) for q, exps in self.torsion},
            "rational_rank": self.rational_rank,
            "two_torsion": self.two_torsion,
        }


def validate_integral(man: ManifoldSpec) -> ValidationReport:
    """Check the hypotheses of the integral classification: no rational or
    2-torsion middle cohomology, and m > 2."""
    violations = []
    if man.rational_rank != 0:
        violations.append(
            f"middle rational cohomology must vanish: rational_rank={man.rational_rank}"
        )
    if man.two_torsion:
        violations.append("middle mod-2 cohomology must vanish: two_torsion=true")
    if man.m <= 2:
        violations.append(f"m={man.m} must exceed 2")
    return ValidationReport(tuple(violations))
