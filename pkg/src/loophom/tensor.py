# Free graded tensor algebras over Z/p, graded Lie brackets, Bockstein
# derivations, and the attaching element of the top cell in loop homology.

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .complexes import GeneralComplexSpec, PDComplexSpec


@dataclass(frozen=True)
class FreeGradedAlgebra:
    """Generator table of a free graded tensor algebra over Z/p.

    Generator i has the listed (positive) degree; words are tuples of
    generator indices and multiply by concatenation. Degrees here are loop
    degrees: a space class in degree d transgresses to a generator in
    degree d-1.
    """

    p: int
    degrees: tuple
    names: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if any(d < 1 for d in self.degrees):
            raise ValueError("generator degrees must be >= 1")
        if self.names is None:
            object.__setattr__(
                self, "names", tuple(f"g{i + 1}" for i in range(len(self.degrees)))
            )
        elif len(self.names) != len(self.degrees):
            raise ValueError("one name per generator required")

    @property
    def ngens(self):
        return len(self.degrees)

    def word_degree(self, word):
        return sum(self.degrees[i] for i in word)

    def words(self, d):
        """All words of total degree d, lexicographic by index sequence."""
        return _words(self.p, self.degrees, d)

    def zero(self):
        return TensorElement(self, None, {})

    def one(self):
        return TensorElement(self, 0, {(): 1})

    def generator(self, i):
        return TensorElement(self, self.degrees[i], {(i,): 1})

    def element(self, terms, degree=None):
        """Element from a {word: coefficient} mapping; must be homogeneous."""
        clean = {}
        deg = degree
        for word, coeff in terms.items():
            word = tuple(word)
            coeff = int(coeff) % self.p
            if coeff == 0:
                continue
            d = self.word_degree(word)
            if deg is None:
                deg = d
            elif d != deg:
                raise ValueError("terms of mixed degree")
            clean[word] = coeff
        if not clean:
            return self.zero()
        return TensorElement(self, deg, clean)


@lru_cache(maxsize=None)
def _words(p, degrees, d):
    if d == 0:
        return ((),)
    out = []
    for i, di in enumerate(degrees):
        if di <= d:
            for suffix in _words(p, degrees, d - di):
                out.append((i,) + suffix)
    return tuple(out)


class TensorElement:
    """Homogeneous Z/p-linear combination of words in a free tensor algebra.

    Immutable; zero is represented with degree None and no terms. Stored
    coefficients are always nonzero residues in [1, p).
    """

    __slots__ = ("algebra", "degree", "terms")

    def __init__(self, algebra, degree, terms):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", dict(terms))

    def __setattr__(self, name, value):
        raise AttributeError("TensorElement is immutable")

    def is_zero(self):
        return not self.terms

    def _check_compatible(self, other):
        if not isinstance(other, TensorElement):
            raise TypeError(f"expected TensorElement, got {type(other).__name__}")
        a, b = self.algebra, other.algebra
        if a.p != b.p or a.degrees != b.degrees:
            raise ValueError("mismatched generator tables")

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (
            self.algebra.p == other.algebra.p
            and self.algebra.degrees == other.algebra.degrees
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(
            (self.algebra.p, self.algebra.degrees, tuple(sorted(self.terms.items())))
        )

    def __add__(self, other):
        self._check_compatible(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add elements of different degrees")
        terms = dict(self.terms)
        p = self.algebra.p
        for word, coeff in other.terms.items():
            c = (terms.get(word, 0) + coeff) % p
            if c:
                terms[word] = c
            else:
                terms.pop(word, None)
        if not terms:
            return self.algebra.zero()
        return TensorElement(self.algebra, self.degree, terms)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = int(c) % self.algebra.p
        if c == 0 or self.is_zero():
            return self.algebra.zero()
        return TensorElement(
            self.algebra,
            self.degree,
            {w: (c * coeff) % self.algebra.p for w, coeff in self.terms.items()},
        )

    def __mul__(self, other):
        self._check_compatible(other)
        if self.is_zero() or other.is_zero():
            return self.algebra.zero()
        p = self.algebra.p
        terms = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = (terms.get(w, 0) + c1 * c2) % p
                if c:
                    terms[w] = c
                else:
                    terms.pop(w, None)
        if not terms:
            return self.algebra.zero()
        return TensorElement(self.algebra, self.degree + other.degree, terms)

    def sorted_terms(self):
        return tuple(sorted(self.terms.items()))

    def render(self):
        """Sum of terms "c*name1,name2,..." in lexicographic word order."""
        if self.is_zero():
            return "0"
        names = self.algebra.names
        parts = []
        for word, coeff in self.sorted_terms():
            body = "".join(names[i] for i in word) if word else "1"
            parts.append(f"{coeff}*{body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"TensorElement({self.render()})"


def lie_bracket(x: TensorElement, y: TensorElement) -> TensorElement:
    """Graded Lie bracket xy - (-1)^{|x||y|} yx of homogeneous elements."""
    x._check_compatible(y)
    if x.is_zero() or y.is_zero():
        return x.algebra.zero()
    sign = -1 if (x.degree * y.degree) % 2 else 1
    return x * y - (y * x).scale(sign)


@dataclass(frozen=True)
class BocksteinTable:
    """Which generators the Bockstein derivations act on.

    images maps a generator index v to (r, u): beta_r(v) = u, every other
    beta_t kills v, and all Bocksteins kill u (it is a permanent class).
    """

    images: tuple  # sorted tuple of (v_index, exponent, u_index)

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(sorted(tuple(t) for t in self.images)))
        vs = [v for v, _, _ in self.images]
        if len(vs) != len(set(vs)):
            raise ValueError("a generator can carry at most one Bockstein exponent")
        targets = {u for _, _, u in self.images}
        if targets & set(vs):
            raise ValueError("Bockstein images must be permanent generators")

    def image_of(self, gen, r):
        for v, exp, u in self.images:
            if v == gen and exp == r:
                return u
        return None

    def exponents(self):
        return tuple(sorted({exp for _, exp, _ in self.images}))


def bockstein_apply(x: TensorElement, r: int, table: BocksteinTable) -> TensorElement:
    """Extend beta_r over words by the signed Leibniz rule.

    beta_r(ab) = beta_r(a) b + (-1)^{|a|} a beta_r(b), letter by letter.
    """
    alg = x.algebra
    if x.is_zero():
        return alg.zero()
    p = alg.p
    out = {}
    for word, coeff in x.terms.items():
        prefix_degree = 0
        for pos, gen in enumerate(word):
            u = table.image_of(gen, r)
            if u is not None:
                new_word = word[:pos] + (u,) + word[pos + 1 :]
                sign = -1 if prefix_degree % 2 else 1
                c = (out.get(new_word, 0) + sign * coeff) % p
                if c:
                    out[new_word] = c
                else:
                    out.pop(new_word, None)
            prefix_degree += alg.degrees[gen]
    if not out:
        return alg.zero()
    return TensorElement(alg, x.degree - 1, out)


def substitute_generators(x: TensorElement, matrix) -> TensorElement:
    """Apply the algebra map sending generator g to sum_h matrix[g][h] * h.

    The substitution must preserve degrees (matrix[g][h] = 0 unless the
    degrees of g and h agree), so homogeneity is kept.
    """
    alg = x.algebra
    if x.is_zero():
        return alg.zero()
    images = []
    for g in range(alg.ngens):
        img = {}
        for h in range(alg.ngens):
            c = int(matrix[g][h]) % alg.p
            if c:
                if alg.degrees[h] != alg.degrees[g]:
                    raise ValueError("substitution must preserve degrees")
                img[(h,)] = c
        images.append(alg.element(img, degree=alg.degrees[g]))
    total = alg.zero()
    for word, coeff in x.terms.items():
        term = alg.one().scale(coeff)
        for gen in word:
            term = term * images[gen]
        total = total + term
    return total


def loop_algebra_for_general(spec: GeneralComplexSpec) -> FreeGradedAlgebra:
    """Tensor algebra on the transgressed generators, one degree below the cells."""
    names = tuple(f"u{i + 1}" for i in range(spec.ell)) if spec.names is None else spec.names
    return FreeGradedAlgebra(
        p=spec.p, degrees=tuple(d - 1 for d in spec.gen_degrees), names=names
    )


def loop_algebra_for_pd(spec: PDComplexSpec) -> FreeGradedAlgebra:
    """Generators u_1..u_k in degree n-2 and v_1..v_k in degree n-1."""
    k, n = spec.k, spec.n
    names = tuple(f"u{i + 1}" for i in range(k)) + tuple(f"v{j + 1}" for j in range(k))
    return FreeGradedAlgebra(p=spec.p, degrees=tuple([n - 2] * k + [n - 1] * k), names=names)


def bockstein_table_for_pd(spec: PDComplexSpec) -> BocksteinTable:
    """beta_{r_i}(v_i) = u_i for each torsion pair; free generators are untouched."""
    k = spec.k
    return BocksteinTable(tuple((k + i, spec.r[i], i) for i in range(spec.k1)))


def build_chi_pd(spec: PDComplexSpec) -> TensorElement:
    """Attaching element of the top cell: chi = sum_{i,j} A[i][j] [u_i, v_j].

    The global unit sign on the attaching map is dropped: the two-sided
    ideal (chi) is unchanged under unit scaling. This applies the formula
    to the given cup matrix whether or not the spec validates, so the
    Bockstein obstruction check can run on invalid data.
    """
    alg = loop_algebra_for_pd(spec)
    k = spec.k
    a = spec.A.array()
    chi = alg.zero()
    for i in range(k):
        for j in range(k):
            if a[i, j]:
                chi = chi + lie_bracket(alg.generator(i), alg.generator(k + j)).scale(
                    int(a[i, j])
                )
    return chi


def build_chi_general(spec: GeneralComplexSpec, units=None) -> TensorElement:
    """Attaching element chi = sum_s (-1)^s b_s kappa_s of degree N-2.

    kappa_s collects c_ij [u_i, u_j] over pairs i < j with |a_i| = s and
    |a_j| = N - s. The units b_s (one per degree s from m to ceil(N/2),
    default 1) must be prime to p.
    """
    alg = loop_algebra_for_general(spec)
    m, N = spec.m, spec.N
    eta = (N + 1) // 2  # ceil(N/2) for odd N
    if units is None:
        units = [1] * (eta - m + 1)
    units = [int(b) for b in units]
    if len(units) != eta - m + 1:
        raise ValueError(f"need {eta - m + 1} units for degrees {m}..{eta}")
    if any(b % spec.p == 0 for b in units):
        raise ValueError("every unit must be prime to p")
    c = spec.c.array()
    chi = alg.zero()
    for s in range(m, eta + 1):
        sign = -1 if s % 2 else 1
        b_s = units[s - m]
        kappa = alg.zero()
        for i in range(spec.ell):
            if spec.gen_degrees[i] != s:
                continue
            for j in range(i + 1, spec.ell):
                if spec.gen_degrees[j] == N - s and c[i, j]:
                    kappa = kappa + lie_bracket(
                        alg.generator(i), alg.generator(j)
                    ).scale(int(c[i, j]))
        chi = chi + kappa.scale(sign * b_s)
    return chi


def bockstein_chi_check(spec: PDComplexSpec) -> bool:
    """True when the summed Bocksteins annihilate the attaching element.

    The sum runs over the distinct exponents among the r_i. Its vanishing
    is exactly the symmetry/zero-block obstruction on the cup matrix, so
    this may be run on structurally well-formed but invalid specs to watch
    the obstruction fire.
    """
    chi = build_chi_pd(spec)
    table = bockstein_table_for_pd(spec)
    total = chi.algebra.zero()
    for s in table.exponents():
        total = total + bockstein_apply(chi, s, table)
    return total.is_zero()
