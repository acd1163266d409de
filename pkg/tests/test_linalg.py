import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schurq.exact import QContext, RationalFn
from schurq.linalg import (
    SingularConfigurationError,
    SkewMatrix,
    check_spa_spb,
    det,
    det_expansion,
    lms_general_sides,
    minor_summation_check,
    minor_summation_sides,
    pfaffian,
    pfaffian_expansion,
    schlosser_det,
    spa_sides,
    spb_sides,
)

from conftest import S

SAMPLES = 25


def rng(seed):
    return random.Random(seed)


def rat(r, lo=-9, hi=9, den=7):
    while True:
        v = Fraction(r.randint(lo, hi), r.randint(1, den))
        if v != 0:
            return v


def distinct_points(r, n, ok):
    pts = []
    while len(pts) < n:
        v = rat(r)
        if all(ok(v, p) for p in pts) and ok(v, v):
            pts.append(v)
    return pts


def random_skew(r, n):
    return SkewMatrix.from_upper(n, lambda i, j: rat(r)).rows


def test_det_examples():
    assert det([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert det([[x**j for j in range(3)] for x in (1, 2, 3)]) == 2
    assert det([]) == 1


def test_sdd_two_by_two_by_hand():
    q = QContext(1).q
    x1, x2 = S + 2, 3 * S
    lhs, rhs = schlosser_det("sdd", 2, q, RationalFn(1), q, [x1, x2])
    # rows (1 - q x, 1 - x); det = (x1 - x2)(1 - q)
    assert lhs == (1 - q * x1) * (1 - x2) - (1 - x1) * (1 - q * x2)
    assert lhs == rhs == (x1 - x2) * (1 - q)


def test_pfaffian_examples():
    a = Fraction(7, 3)
    assert pfaffian([[0, a], [-a, 0]]) == a
    r = rng(1)
    M = random_skew(r, 4)
    assert pfaffian(M) == M[0][1] * M[2][3] - M[0][2] * M[1][3] + M[0][3] * M[1][2]
    schur = SkewMatrix.from_upper(4, lambda i, j: Fraction(j - i, i + j + 2)).rows
    assert pfaffian(schur) == Fraction(1, 1050)
    assert pfaffian([]) == 1


def test_odd_pfaffian_rejected():
    with pytest.raises(ValueError):
        pfaffian([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])


def test_skew_matrix_enforced():
    with pytest.raises(ValueError):
        SkewMatrix([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        SkewMatrix([[1, 1], [-1, 0]])


@given(st.integers(0, 4), st.integers(0, 10**6))
def test_pfaffian_squared_is_det(half, seed):
    M = random_skew(rng(seed), 2 * half)
    assert pfaffian(M) ** 2 == det(M)


@pytest.mark.parametrize("n", [0, 2, 4, 6])
def test_pfaffian_and_det_have_independent_oracles(n):
    for seed in range(5):
        M = random_skew(rng(100 * n + seed), n)
        assert pfaffian(M) == pfaffian_expansion(M)
        assert det(M) == det_expansion(M)


@given(st.integers(1, 3), st.integers(0, 10**6), st.data())
def test_pfaffian_permutation_covariance(half, seed, data):
    n = 2 * half
    M = random_skew(rng(seed), n)
    perm = data.draw(st.permutations(range(n)))
    P = [[M[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    sign = det([[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)])
    assert pfaffian(P) == sign * pfaffian(M)


def test_pfaffian_symbolic_entries():
    pts = [S, S + 1, 2 * S + 3, RationalFn(5)]
    lhs, rhs = spa_sides(pts)
    assert lhs == rhs


@pytest.mark.parametrize("k", range(SAMPLES))
def test_spa_spb_samples(k):
    r = rng(1000 + k)
    n = (2, 4, 6)[k % 3]
    t = rat(r, -3, 3, 4)
    pts = distinct_points(r, n, lambda a, b: a + b != 0 and 1 - t * a * b != 0)
    assert check_spa_spb(pts, t)


def test_spa_spb_small_cases():
    x, y = Fraction(2), Fraction(5)
    assert spa_sides([x, y]) == ((y - x) / (y + x),) * 2
    t = Fraction(1, 2)
    lhs, rhs = spb_sides([Fraction(1), Fraction(3), Fraction(-2), Fraction(7)], t)
    assert lhs == rhs


def test_spa_singular_configuration_named():
    with pytest.raises(SingularConfigurationError, match="x_1 \\+ x_3"):
        spa_sides([Fraction(1), Fraction(2), Fraction(-1), Fraction(4)])


@pytest.mark.parametrize("k", range(SAMPLES))
def test_sd_samples(k):
    r = rng(2000 + k)
    m = 1 + k % 3
    q = rat(r, 2, 5, 3)
    A, B, C = rat(r), rat(r), rat(r)
    X = distinct_points(r, m, lambda a, b: a != 0)
    try:
        lhs, rhs = schlosser_det("sd", m, q, A, B, X, C)
    except (SingularConfigurationError, ZeroDivisionError):
        pytest.skip("degenerate draw")
    assert lhs == rhs


@pytest.mark.parametrize("k", range(SAMPLES))
def test_sdd_samples(k):
    r = rng(3000 + k)
    m = 1 + k % 4
    q = rat(r, 2, 5, 3)
    A, B = rat(r), rat(r)
    X = distinct_points(r, m, lambda a, b: True)
    lhs, rhs = schlosser_det("sdd", m, q, A, B, X)
    assert lhs == rhs


def test_schlosser_examples():
    q = QContext(1).q
    for kind in ("sd", "sdd"):
        lhs, rhs = schlosser_det(kind, 1, q, S**2, S**3, [S + 1], C=S**5)
        assert lhs == rhs == 1
    lhs, rhs = schlosser_det("sd", 3, q, S**2, S**3, [S, S**4 + 1, 2 * S], C=S**5)
    assert lhs == rhs
    lhs, rhs = schlosser_det("sdd", 3, q, S**2, S**3, [S, S**4 + 1, 2 * S])
    assert lhs == rhs


def test_minor_summation_examples():
    r = rng(7)
    B = random_skew(r, 4)
    I = [[int(i == j) for j in range(4)] for i in range(4)]
    lhs, rhs = minor_summation_sides(I, B)
    assert lhs == rhs == pfaffian(B)
    for rows, n in ((2, 3), (4, 4), (2, 5), (4, 6)):
        A = [[rat(r) for _ in range(n)] for _ in range(rows)]
        assert minor_summation_check(A, random_skew(r, n))


@pytest.mark.parametrize("k", range(SAMPLES))
def test_minor_summation_samples(k):
    r = rng(4000 + k)
    rows = (2, 4)[k % 2]
    n = rows + r.randint(0, 3)
    A = [[rat(r) for _ in range(n)] for _ in range(rows)]
    assert minor_summation_check(A, random_skew(r, n))


def test_index_dependent_summation_lemma():
    r = rng(11)
    rows, n = 4, 3
    A = [[rat(r) for _ in range(n)] for _ in range(rows)]
    table = {}
    for i in range(rows):
        for j in range(rows):
            for x in range(n):
                for y in range(n):
                    if (j, i, y, x) in table:
                        table[i, j, x, y] = -table[j, i, y, x]
                    elif (i, j) == (j, i) and x == y:
                        table[i, j, x, y] = 0
                    else:
                        table[i, j, x, y] = rat(r)
    lhs, rhs = lms_general_sides(A, lambda i, j, x, y: table[i, j, x, y])
    assert lhs == rhs
