import itertools
import json
import random

import pytest

from loophom import (
    FpMatrix,
    ManifoldSpec,
    MooreSummand,
    PDComplexSpec,
    SphereSummand,
    StructuralError,
    matrix_rank,
    skeleton_splitting,
    to_general,
    validate_integral,
    validate_pd,
)

from conftest import random_valid_matrix


def spec(p=5, n=6, k=1, k1=1, r=(2,), A=((1,),)):
    return PDComplexSpec(p=p, n=n, k=k, k1=k1, r=tuple(r), A=FpMatrix(p, [list(row) for row in A]))


# --- validate_pd -----------------------------------------------------------


def test_validate_rank_one_ok():
    assert validate_pd(spec()).ok


def test_validate_rejects_antisymmetric_for_even_n():
    # [[0,1],[-1,0]] is skew, not symmetric, so n = 6 must reject it
    report = validate_pd(spec(n=6, k=2, k1=2, r=(1, 1), A=((0, 1), (4, 0))))
    assert not report.ok
    assert any("symmetric" in v for v in report.violations)


@pytest.mark.parametrize("c", [0, 1, 2])
def test_validate_no_odd_all_torsion_rank_one(c):
    # n odd, k = k1 = 1: a 1x1 skew matrix is zero hence singular
    report = validate_pd(spec(p=3, n=7, k=1, k1=1, r=(1,), A=((c,),)))
    assert not report.ok
    assert report.advisories


def test_validate_c_block():
    # free row pairing against a torsion column must vanish
    report = validate_pd(spec(n=6, k=2, k1=1, r=(1,), A=((1, 1), (1, 1))))
    assert not report.ok
    assert any("free-torsion" in v for v in report.violations)


def test_validate_singular():
    report = validate_pd(spec(n=6, k=2, k1=0, r=(), A=((1, 2), (2, 4))))
    assert not report.ok
    assert any("singular" in v for v in report.violations)


def test_validate_odd_n_skew_ok():
    report = validate_pd(spec(p=5, n=7, k=2, k1=2, r=(1, 2), A=((0, 1), (4, 0))))
    assert report.ok


def test_structural_errors_are_distinct():
    with pytest.raises(StructuralError):
        spec(k1=2, r=(1, 1))  # k1 > k
    with pytest.raises(StructuralError):
        spec(r=(0,))  # exponent < 1
    with pytest.raises(StructuralError):
        spec(A=((1, 0),))  # not k x k
    with pytest.raises(StructuralError):
        PDComplexSpec.from_json_dict(
            {"p": 4, "n": 6, "k": 1, "k1": 1, "r": [2], "A": [[1]]}
        )
    with pytest.raises(StructuralError):
        spec(n=2)


def test_validate_permutation_equivariance():
    rng = random.Random(5)
    for _ in range(60):
        k = rng.randrange(2, 4)
        k1 = rng.randrange(2, k + 1)
        n = rng.choice([6, 7])
        p = rng.choice([3, 5])
        rows = [[rng.randrange(p) for _ in range(k)] for _ in range(k)]
        r = tuple(rng.randrange(1, 4) for _ in range(k1))
        base = PDComplexSpec(p=p, n=n, k=k, k1=k1, r=r, A=FpMatrix(p, rows))
        perm = list(range(k1))
        rng.shuffle(perm)
        perm = perm + list(range(k1, k))
        prows = [[rows[perm[i]][perm[j]] for j in range(k)] for i in range(k)]
        permuted = PDComplexSpec(
            p=p, n=n, k=k, k1=k1,
            r=tuple(r[perm[i]] for i in range(k1)),
            A=FpMatrix(p, prows),
        )
        assert validate_pd(base).ok == validate_pd(permuted).ok


def test_odd_n_all_torsion_valid_implies_even_rank():
    # exhaust k <= 3 over p = 3: any accepted all-torsion odd-n spec has even k
    for k in (1, 2, 3):
        for entries in itertools.product(range(3), repeat=k * k):
            rows = [list(entries[i * k : (i + 1) * k]) for i in range(k)]
            s = PDComplexSpec(p=3, n=7, k=k, k1=k, r=(1,) * k, A=FpMatrix(3, rows))
            if validate_pd(s).ok:
                assert k % 2 == 0


# --- skeleton_splitting ----------------------------------------------------


def test_splitting_single_moore():
    w = skeleton_splitting(spec(k=1, k1=1, r=(2,), n=6))
    assert w.summands == (MooreSummand(2),)


def test_splitting_torsion_free():
    w = skeleton_splitting(spec(n=6, k=2, k1=0, r=(), A=((1, 0), (0, 1))))
    assert w.summands == (
        SphereSummand(5),
        SphereSummand(6),
        SphereSummand(5),
        SphereSummand(6),
    )


def test_splitting_mixed():
    w = skeleton_splitting(
        spec(n=8, k=3, k1=2, r=(1, 3), A=((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    )
    assert w.summands == (
        MooreSummand(1),
        MooreSummand(3),
        SphereSummand(7),
        SphereSummand(8),
    )
    assert w.render() == "P^8(p) v P^8(p^3) v S^7 v S^8"


def test_splitting_requires_valid():
    with pytest.raises(ValueError):
        skeleton_splitting(spec(A=((0,),)))


# --- to_general ------------------------------------------------------------


def test_to_general_rank_one():
    g = to_general(spec())
    assert g.gen_degrees == (5, 6)
    assert g.N == 11
    assert g.m == 5
    # cup entries mirror with sign (-1)^{5*6} = +1
    assert g.c.entry(0, 1) == 1
    assert g.c.entry(1, 0) == 1


def test_to_general_identity_k2():
    g = to_general(spec(n=6, k=2, k1=0, r=(), A=((1, 0), (0, 1))))
    assert g.gen_degrees == (5, 5, 6, 6)
    nz = [(i, j) for i in range(4) for j in range(4) if g.c.entry(i, j)]
    assert nz == [(0, 2), (1, 3), (2, 0), (3, 1)]


def test_to_general_rejects_singular():
    with pytest.raises(ValueError):
        to_general(spec(A=((0,),)))


def test_to_general_rejects_small_n():
    with pytest.raises(ValueError):
        to_general(spec(p=3, n=3, k=2, k1=2, r=(1, 1), A=((0, 1), (2, 0))))


def test_to_general_output_invariants_hold():
    rng = random.Random(9)
    for _ in range(40):
        k = rng.randrange(1, 4)
        k1 = rng.randrange(0, k + 1)
        n = rng.choice([6, 7, 8])
        if n % 2 and k1 % 2:
            k1 -= 1
        p = rng.choice([3, 5])
        A = random_valid_matrix(rng, p, k, k1, n)
        s = PDComplexSpec(p=p, n=n, k=k, k1=k1, r=(1,) * k1, A=A)
        if not validate_pd(s).ok:
            continue
        g = to_general(s)  # constructor re-checks every invariant
        assert g.m_prime() == n - 1
        assert g.has_unit_cup_pair()


# --- manifolds -------------------------------------------------------------


def test_validate_integral_ok():
    man = ManifoldSpec(m=3, torsion=((3, (1,)),), rational_rank=0, two_torsion=False)
    assert validate_integral(man).ok


def test_validate_integral_rational():
    man = ManifoldSpec(m=3, torsion=((3, (1,)),), rational_rank=1, two_torsion=False)
    report = validate_integral(man)
    assert not report.ok
    assert any("rational" in v for v in report.violations)


def test_validate_integral_two_torsion():
    man = ManifoldSpec(m=3, torsion=(), rational_rank=0, two_torsion=True)
    report = validate_integral(man)
    assert not report.ok
    assert any("mod-2" in v for v in report.violations)


def test_manifold_structural():
    with pytest.raises(StructuralError):
        ManifoldSpec(m=3, torsion=((2, (1,)),), rational_rank=0, two_torsion=False)
    with pytest.raises(StructuralError):
        ManifoldSpec(m=3, torsion=((3, (0,)),), rational_rank=0, two_torsion=False)


def test_manifold_exponents_sorted_multiset():
    man = ManifoldSpec(m=3, torsion=((5, (3, 1, 2)),), rational_rank=0, two_torsion=False)
    assert man.exponents(5) == (1, 2, 3)
    assert man.exponents(7) == ()


# --- JSON round trips ------------------------------------------------------


def test_pd_json_round_trip():
    s = spec(n=6, k=2, k1=1, r=(2,), A=((1, 3), (0, 4)))
    data = json.loads(json.dumps(s.to_json_dict()))
    assert PDComplexSpec.from_json_dict(data) == s


def test_pd_json_reduces_mod_p():
    s = PDComplexSpec.from_json_dict(
        {"p": 5, "n": 6, "k": 1, "k1": 1, "r": [2], "A": [[-4]]}
    )
    assert s.A.entry(0, 0) == 1


def test_manifold_json_round_trip():
    man = ManifoldSpec(
        m=4, torsion=((3, (1, 2)), (7, (1,))), rational_rank=0, two_torsion=False
    )
    data = json.loads(json.dumps(man.to_json_dict()))
    assert ManifoldSpec.from_json_dict(data) == man


def test_bad_json_raises_structural():
    with pytest.raises(StructuralError):
        PDComplexSpec.from_json_dict({"p": 5, "n": 6, "k": 1, "k1": 1, "r": [2]})
    with pytest.raises(StructuralError):
        ManifoldSpec.from_json_dict({"m": 3, "torsion": [], "rational_rank": 0})
