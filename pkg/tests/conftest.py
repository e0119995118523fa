import itertools
import random

import numpy as np
import pytest

from loophom import FpMatrix, PDComplexSpec, matrix_rank


def det_mod(rows, p):
    """Determinant mod p by permutation expansion; independent of elimination."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total % p


def rank_minors(rows, p):
    """Rank as the largest size of a nonzero minor; independent oracle."""
    n = len(rows)
    m = len(rows[0]) if n else 0
    for size in range(min(n, m), 0, -1):
        for rsel in itertools.combinations(range(n), size):
            for csel in itertools.combinations(range(m), size):
                sub = [[rows[i][j] for j in csel] for i in rsel]
                if det_mod(sub, p):
                    return size
    return 0


def rank_reverse_pivot(mat, p):
    """Gaussian elimination rank choosing the HIGHEST available row as pivot.

    A deliberately different pivot order from the library's, for
    cross-checking membership and rank decisions.
    """
    a = np.array(mat, dtype=np.int64) % p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pivot = None
        for i in range(nrows - 1, r - 1, -1):
            if a[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        for i in range(r + 1, nrows):
            if a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
    return r


def membership_reverse_pivot(span_rows, vec, p):
    """vec in rowspace(span_rows), decided by the reverse-pivot rank oracle."""
    if not np.any(np.asarray(vec) % p):
        return True
    if len(span_rows) == 0:
        return False
    base = np.array(span_rows, dtype=np.int64)
    stacked = np.concatenate([base, np.asarray(vec, dtype=np.int64)[None, :]], axis=0)
    return rank_reverse_pivot(stacked, p) == rank_reverse_pivot(base, p)


def random_valid_matrix(rng, p, k, k1, n):
    """Random cup matrix satisfying the duality constraints.

    Block upper-triangular: a symmetric (n even) or skew (n odd) nonsingular
    torsion block, a zero free-torsion block, arbitrary coupling block and a
    nonsingular free block. Nonsingularity of the blocks makes the whole
    matrix nonsingular.
    """
    if n % 2 and k1 % 2:
        raise ValueError("no valid matrix exists: odd n with odd torsion rank")
    while True:
        a = [[0] * k for _ in range(k)]
        for i in range(k1):
            for j in range(i, k1):
                v = rng.randrange(p)
                if n % 2 == 0:
                    a[i][j] = v
                    a[j][i] = v
                else:
                    if i == j:
                        a[i][i] = 0
                    else:
                        a[i][j] = v
                        a[j][i] = (-v) % p
        for i in range(k1):
            for j in range(k1, k):
                a[i][j] = rng.randrange(p)
        for i in range(k1, k):
            for j in range(k1, k):
                a[i][j] = rng.randrange(p)
        mat = FpMatrix(p, a)
        if matrix_rank(mat) == k:
            return mat


def exponent_multisets(k1, values=(1, 2, 3)):
    """All multisets of size k1 drawn from values, as sorted tuples."""
    if k1 == 0:
        return [()]
    return sorted(set(itertools.combinations_with_replacement(values, k1)))


def sweep_specs(ms=(3, 4, 5), ks=(1, 2, 3, 4), primes=(3, 5), mats_per=3, seed=20240816):
    """The acceptance sweep: every (m, k, k1, exponent multiset, p) with
    mats_per random valid cup matrices each."""
    rng = random.Random(seed)
    out = []
    for m in ms:
        n = 2 * m
        for k in ks:
            for k1 in range(k + 1):
                for r in exponent_multisets(k1):
                    for p in primes:
                        for _ in range(mats_per):
                            A = random_valid_matrix(rng, p, k, k1, n)
                            out.append(
                                PDComplexSpec(p=p, n=n, k=k, k1=k1, r=r, A=A)
                            )
    return out


@pytest.fixture(scope="session")
def rng():
    return random.Random(987654321)
