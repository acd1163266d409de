import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schurq.exact import LaurentPoly, QContext, truncate_series
from schurq.formulas import lambda_points, p_multisum, q_direct, q_staircase
from schurq.tableaux import (
    Partition,
    StrictPartition,
    column_strict_product,
    count_marked,
    count_marked_enumerated,
    enumerate_column_strict,
    enumerate_marked,
    gf_column_strict,
    gf_column_strict_enumerated,
    gf_marked,
    gf_marked_enumerated,
    hook_content_products,
    hooks,
    schur_poly,
    strict_partitions,
    tableau_sum,
)

R1 = QContext(1)
SMALL = [lam for lam in strict_partitions(6, 3) if sum(lam.parts) <= 8]
POINTS = [Fraction(1, 2), Fraction(2, 3), Fraction(-3), Fraction(5, 7)]


def test_enumeration_examples():
    ts = list(enumerate_marked((1,), 1))
    assert [str(t) for t in ts] == ["1'", "1"]
    assert len(list(enumerate_marked((2, 1), 2))) == 8
    assert len(list(enumerate_marked((1,), 3))) == 6
    assert len(list(enumerate_marked((), 3))) == 1


def test_gf_examples():
    assert gf_marked((1,), 2) == LaurentPoly({0: 2, 1: 2})
    assert gf_marked((2,), 1) == LaurentPoly({0: 2})
    assert gf_marked((), 4) == LaurentPoly({0: 1})


def test_enumeration_order_is_deterministic():
    a = [t.codes for t in enumerate_marked((3, 1), 3)]
    assert a == sorted(a)
    assert a == [t.codes for t in enumerate_marked((3, 1), 3)]


@pytest.mark.parametrize("lam", SMALL, ids=str)
def test_transfer_matches_enumeration(lam):
    for n in range(4):
        assert gf_marked(lam, n) == gf_marked_enumerated(lam, n)
        stream = sum(1 for _ in enumerate_marked(lam, n))
        assert count_marked(lam, n) == stream == count_marked_enumerated(lam, n)


@pytest.mark.parametrize("lam", [l for l in SMALL if l.length], ids=str)
def test_gf_is_principal_specialization(lam):
    ctx = QContext(2)
    for n in range(lam.length - 1, 4):
        assert gf_marked(lam, n + 1).in_context(ctx) == 2**lam.length * p_multisum(
            list(lambda_points(lam.parts, ctx)), n, ctx)


@pytest.mark.parametrize("lam", [l for l in strict_partitions(8, 4) if sum(l.parts) <= 8], ids=str)
def test_tableau_sum_equals_direct_definition(lam):
    for n in range(1, 5):
        xs = POINTS[:n]
        assert tableau_sum(lam, xs) == q_direct(lam.parts, xs)


def test_q_direct_two_one():
    x1, x2 = Fraction(3, 4), Fraction(-2, 5)
    assert q_direct((2, 1), [x1, x2]) == 4 * x1 * x2 * (x1 + x2)


def test_column_strict_examples():
    assert gf_column_strict((1,), 5) == LaurentPoly({k: 1 for k in range(5)})
    assert gf_column_strict((), 5) == LaurentPoly({0: 1})
    # the minimal filling of S(2,1) is 1 1 / 2, so the series starts at q^1
    g = gf_column_strict((2, 1), 3)
    assert g.coefficient(0) == 0 and g.coefficient(1) == 1
    assert [list(t) for t in enumerate_column_strict((2, 1), 2)] == [[1, 1, 2]]


@pytest.mark.parametrize("lam", [l for l in strict_partitions(8, 3) if sum(l.parts) <= 8], ids=str)
def test_column_strict_stabilizes_to_product(lam):
    deg = 10
    series = gf_column_strict(lam, deg + 1, degree=deg)
    assert series == truncate_series(column_strict_product(lam, R1), deg)


@pytest.mark.parametrize("lam", [(1,), (2, 1), (3, 1)])
def test_column_strict_transfer_matches_enumeration(lam):
    for bound in range(5):
        assert gf_column_strict(lam, bound) == gf_column_strict_enumerated(lam, bound)


def test_hook_content_examples():
    ctx = QContext(1)
    q = ctx.q
    assert hook_content_products((), 4, 2, ctx) == (1, 1)
    hp, cp = hook_content_products((1,), 4, 2, ctx)
    assert hp == (1 + q) / (1 - q)
    assert cp == (1 - q ** (2 - 4 - 1)) / (1 + q ** (2 - 4 - 1))
    hp, _ = hook_content_products((2,), 4, 2, ctx)
    assert hp == (1 + q) * (1 + q**2) / ((1 - q) * (1 - q**2))
    assert sorted(hooks(Partition((3, 1)))) == [1, 1, 2, 4]


def test_schur_examples():
    x1, x2 = Fraction(2), Fraction(5, 3)
    assert schur_poly((), [x1, x2]) == 1
    assert schur_poly((1,), [x1, x2]) == x1 + x2


@pytest.mark.parametrize("m", range(1, 4))
def test_staircase_schur_vandermonde_quotient(m):
    ctx = QContext(1)
    q = ctx.q
    mu = tuple(range(m, 0, -1))
    for n in range(m, m + 3):
        xs = [q**i for i in range(n)]
        assert 2**m * schur_poly(mu, xs) == q_staircase("plain_sfs", m, n - 1, ctx)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=3, unique=True),
       st.lists(st.fractions(-3, 3, max_denominator=4), min_size=3, max_size=3, unique=True))
def test_schur_bialternant_matches_combinatorial(parts, xs):
    mu = tuple(sorted(parts, reverse=True))
    assert schur_poly(mu, xs, mode="bialternant") == schur_poly(mu, xs, mode="combinatorial")


def test_schur_coincident_points_fall_back():
    assert schur_poly((2, 1), [1, 1, 2]) == schur_poly((2, 1), [1, 1, 2], mode="combinatorial")


def test_json_export():
    t = list(enumerate_marked((2, 1), 2))[0]
    rec = json.loads(t.to_json())
    assert rec == t.to_records()
    assert all(len(r) == 4 and isinstance(r[3], bool) for r in rec)


def test_strict_partition_parse():
    assert StrictPartition.parse("3,1").parts == (3, 1)
    assert StrictPartition.parse("").parts == ()
    with pytest.raises(ValueError):
        StrictPartition.parse("2,2")
    with pytest.raises(ValueError):
        StrictPartition.parse("1,3")
