"""Acceptance criteria 1-7. Each test prints one PASS/FAIL line."""

from fractions import Fraction
from math import factorial

import pytest

from schurq.crosscheck import grand_crosscheck, grid
from schurq.exact import QContext, RationalFn
from schurq.formulas import (
    Q_ONE_METHODS,
    hyperoctahedral_check,
    kawanaka_truncation_check,
    kbf_check,
    lambda_points,
    osc_count,
    p_multisum,
    q_one,
    q_staircase,
    staircase_shape,
)
from schurq.kernels import (
    OrthoSystem,
    admissible_sqrt_points,
    admissible_tilde_points,
    kif_check,
    ktk_check,
    mu_functional,
    multikernel,
    multikernel_tilde,
    pkt_points,
    theorem_pkt_check,
)
from schurq.linalg import (
    SingularConfigurationError,
    check_spa_spb,
    det,
    minor_summation_check,
    pfaffian,
    schlosser_det,
)
from schurq.qseries import abel_orthogonality, c_monic, cn_norm
from schurq.tableaux import count_marked_enumerated, gf_marked, strict_partitions

from test_kernels import TS, ZS, windows
from test_linalg import distinct_points, random_skew, rat, rng

R2 = QContext(2)
SAMPLES = 25


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_grand_crosscheck(report):
    records = grand_crosscheck(6, 3, 5, workers=1)
    cases = grid(6, 3, 5)
    bad = [r for r in records if not r.passed]
    # every method of a case agrees with every other (they all equal the oracle)
    by_case = {}
    for r in records:
        if r.passed:
            by_case.setdefault((r.lam, r.n), set()).add(r.value)
    split = [k for k, v in by_case.items() if len(v) != 1]
    ok = not bad and not split and len(by_case) == len(cases)
    detail = f"{len(cases)} cases, {len(records)} evaluations, {len(bad)} mismatches"
    if bad:
        detail += f"; first: {bad[0].lam} n={bad[0].n} {bad[0].method} {bad[0].error}"
    report(1, ok, detail)


def test_criterion_2_counting(report):
    bad = []
    evaluations = 0
    for lam, n in grid(6, 3, 5):
        N = n + 1
        expect = count_marked_enumerated(lam, N)
        for method in Q_ONE_METHODS:
            if method.startswith("row") and len(lam) != 1:
                continue
            evaluations += 1
            if q_one(lam, N, method) != expect:
                bad.append((lam, N, method))
    spots = [q_one((1,), 1) == 2, q_one((2, 1), 2) == 8, q_one((3, 1), 4) == 320,
             osc_count(2, 4) == 320, count_marked_enumerated((3, 1), 4) == 320]
    ok = not bad and all(spots)
    report(2, ok, f"{evaluations} q=1 evaluations against enumeration, {len(bad)} mismatches, "
                  f"spot values {'ok' if all(spots) else spots}")


def test_criterion_3_staircases(report):
    bad = []
    checks = 0
    for m in range(1, 4):
        for n in range(m - 1, 7):
            for kind in ("odd", "even", "plain"):
                lam = staircase_shape(kind, m)
                general = 2**m * p_multisum(list(lambda_points(lam, R2)), n, R2)
                oracle = gf_marked(lam, n + 1).in_context(R2)
                closed = q_staircase(kind, m, n, R2)
                checks += 1
                if not closed == general == oracle:
                    bad.append((kind, m, n))
                if kind == "plain":
                    checks += 1
                    if q_staircase("plain_sfs", m, n, R2) != oracle:
                        bad.append(("plain_sfs", m, n))
            half = [R2.qpow(Fraction(2 * i - 1, 2)) for i in range(1, m + 1)]
            checks += 1
            if q_staircase("half", m, n, R2) != 2**m * p_multisum(half, n, R2):
                bad.append(("half", m, n))
            checks += 1
            if osc_count(m, n + 1) != count_marked_enumerated(staircase_shape("odd", m), n + 1):
                bad.append(("osc", m, n))
    report(3, not bad, f"{checks} closed-form checks, {len(bad)} mismatches {bad[:3]}")


def test_criterion_4_kawanaka(report):
    shapes = [lam for lam in strict_partitions(8, 4) if sum(lam.parts) <= 8]
    bad = [(lam.parts, n) for lam in shapes for n in range(6)
           if not kawanaka_truncation_check(lam.parts, n)]
    kbf = [(m, kbf_check(m, 8)) for m in (1, 2)]
    ok = not bad and all(v for _, v in kbf)
    report(4, ok, f"{len(shapes)} shapes x n<=5 truncations, {len(bad)} mismatches; "
                  f"kbf to degree 8 for m=1,2: {[v for _, v in kbf]}")


def test_criterion_5_kernels(report):
    failures = []
    mu = mu_functional(R2)
    for i in range(6):
        for j in range(6):
            a, b = c_monic(i, R2), c_monic(j, R2)
            prod = [R2.zero] * (i + j + 1)
            for u, x in enumerate(a):
                for v, y in enumerate(b):
                    prod[u + v] = prod[u + v] + x * y
            if mu.apply(prod) != (cn_norm(i, R2) if i == j else 0):
                failures.append(("orthogonality", i, j))
    C = OrthoSystem.ultraspherical(R2)
    s = RationalFn.s_power(1)
    for n in range(6):
        if not ktk_check(n, s + 2, RationalFn(Fraction(-3, 7)), C):
            failures.append(("ktk", n))
    num = OrthoSystem.ultraspherical(R2.at(Fraction(1, 2)))
    cd_checks = 0
    for two_m in (2, 4):
        m = two_m // 2
        for k, ts in enumerate(windows(TS, two_m, SAMPLES)):
            sq = admissible_sqrt_points(ts)
            xs = [p[0] for p in sq]
            tl = admissible_tilde_points(ts)
            ys = [p[0] for p in tl]
            for n in range(m, 6):
                vals = [multikernel(n, m, xs, num, "kd"), multikernel(n, m, xs, num, "mk"),
                        multikernel(n, m, xs, num, "pfaff_sqrt", [p[1] for p in sq]),
                        multikernel(n, m, xs, num, "pfaff_xi", [p[2] for p in sq])]
                cd_checks += 1
                if any(v != vals[0] for v in vals):
                    failures.append(("cdl", two_m, k, n))
            for n in range(2 * m - 1, 6):
                vals = [multikernel_tilde(n, m, ys, num, "det"),
                        multikernel_tilde(n, m, ys, num, "kpa", [p[1] for p in tl]),
                        multikernel_tilde(n, m, ys, num, "kpb", [p[2] for p in tl])]
                cd_checks += 1
                if any(v != vals[0] for v in vals):
                    failures.append(("cdc", two_m, k, n))
    pkt_checks = 0
    at = R2.at(Fraction(2, 3))
    for zs in windows(ZS, 3, SAMPLES):
        zs = [p[1] for p in pkt_points(zs)]
        for m in (1, 2, 3):
            for n in range(m - 1, 6):
                pkt_checks += 1
                if not theorem_pkt_check(zs[:m], n, at):
                    failures.append(("pkt", m, n))
    kif_checks = 0
    pts = [s + 2, RationalFn(Fraction(1, 3))]
    for l in (0, 1, 2):
        for m in (1, 2):
            for odd in (False, True):
                kif_checks += 1
                if not kif_check(l, m, pts[:m], R2, odd):
                    failures.append(("kif", l, m, odd))
    report(5, not failures,
           f"orthogonality 36, ktk 6, cdl/cdc {cd_checks}, pkt {pkt_checks}, kif {kif_checks} "
           f"(l<=2); {len(failures)} failures {failures[:3]}")


def test_criterion_6_structural(report):
    failures = []
    for k in range(SAMPLES):
        r = rng(1000 + k)
        t = rat(r, -3, 3, 4)
        pts = distinct_points(r, (2, 4, 6)[k % 3], lambda a, b: a + b != 0 and 1 - t * a * b != 0)
        if not check_spa_spb(pts, t):
            failures.append(("spa/spb", k))
    sd_done = 0
    k = 0
    while sd_done < SAMPLES:
        r = rng(2000 + k)
        k += 1
        m = 1 + k % 3
        q = rat(r, 2, 5, 3)
        A, B, Cc = rat(r), rat(r), rat(r)
        X = distinct_points(r, m, lambda a, b: a != 0)
        try:
            lhs, rhs = schlosser_det("sd", m, q, A, B, X, Cc)
        except (SingularConfigurationError, ZeroDivisionError):
            continue
        sd_done += 1
        if lhs != rhs:
            failures.append(("sd", k))
    for k in range(SAMPLES):
        r = rng(3000 + k)
        m = 1 + k % 4
        lhs, rhs = schlosser_det("sdd", m, rat(r, 2, 5, 3), rat(r), rat(r),
                                 distinct_points(r, m, lambda a, b: True))
        if lhs != rhs:
            failures.append(("sdd", k))
    for k in range(SAMPLES):
        r = rng(4000 + k)
        rows = (2, 4)[k % 2]
        n = rows + r.randint(0, 3)
        A = [[rat(r) for _ in range(n)] for _ in range(rows)]
        if not minor_summation_check(A, random_skew(r, n)):
            failures.append(("minor summation", k))
    for dim in range(0, 9, 2):
        for seed in range(5):
            M = random_skew(rng(5000 + 10 * dim + seed), dim)
            if pfaffian(M) ** 2 != det(M):
                failures.append(("pf^2", dim, seed))
    cases = grid(6, 3, 5)
    for lam, n in cases:
        if not hyperoctahedral_check(list(lambda_points(lam, R2)), n, R2):
            failures.append(("hoc", lam, n))
    report(6, not failures, f"spa/spb, sd, sdd, minor summation x{SAMPLES} each; pf^2=det to dim 8; "
                            f"hoc on {len(cases)} grid cases; {len(failures)} failures {failures[:3]}")


def test_criterion_7_abel(report):
    bad = []
    for m in range(6):
        for n in range(6):
            expect = Fraction((-1) ** n * factorial(n + 1) * factorial(n), 4 ** (n + 1)) if m == n else 0
            if abel_orthogonality(m, n) != expect:
                bad.append((m, n))
    report(7, not bad, f"36 Abel sums, {len(bad)} mismatches")
