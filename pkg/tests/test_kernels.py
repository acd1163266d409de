from fractions import Fraction

import pytest

from schurq.exact import LaurentPoly, QContext, RationalFn
from schurq.formulas import MethodNotApplicable, p_multisum
from schurq.kernels import (
    APPENDIX_MAX_L,
    KernelValue,
    OrthoSystem,
    WitnessError,
    admissible_sqrt_points,
    admissible_tilde_points,
    appendix_p,
    gen_schur,
    kernel_K,
    kernel_Ktilde,
    kif_check,
    kif_sides,
    ktk_check,
    lambda_apply,
    mu_functional,
    mu_moments,
    multikernel,
    multikernel_tilde,
    pkt_points,
    pkt_sides,
    sfl_check,
    theorem_pkt_check,
    two_row_kernel,
)
from schurq.qseries import c_monic, cn_norm, p1_direct, qp

from conftest import S

R2 = QContext(2)
q = R2.q
C = OrthoSystem.ultraspherical(R2)
NUM = OrthoSystem.ultraspherical(R2.at(Fraction(1, 2)))
CLASSICAL = [OrthoSystem.classical(0), OrthoSystem.classical(1)]

# 25 parameters t giving admissible rational points
TS = [Fraction(a, b) for a, b in [(1, 3), (3, 1), (2, 5), (5, 3), (3, 7), (7, 2), (4, 9), (9, 5),
                                  (5, 11), (11, 4), (6, 13), (13, 3), (7, 5), (1, 5), (5, 1),
                                  (3, 11), (11, 6), (8, 3), (3, 8), (9, 2), (2, 9), (10, 7),
                                  (7, 10), (12, 5), (5, 12)]]


# distinct z > 1, so the xi = z + 1/z are distinct and nonzero
ZS = [Fraction(2 * k + 3, k + 1) for k in range(25)]


def windows(seq, size, count):
    return [[seq[(k + j) % len(seq)] for j in range(size)] for k in range(count)]


# -- moments --------------------------------------------------------------

def test_moment_examples():
    assert mu_moments(0, R2) == (1 - q) / (1 + q)
    assert mu_moments(0, R2) == cn_norm(0, R2)
    assert mu_moments(1, R2) == 0 and mu_moments(3, R2) == 0
    mu = mu_functional(R2)
    c1 = c_monic(1, R2)
    coeffs = [R2.zero] * 3
    for i, a in enumerate(c1):
        for j, b in enumerate(c1):
            coeffs[i + j] = coeffs[i + j] + a * b
    assert mu.apply(coeffs) == cn_norm(1, R2)


def _poly_mul(a, b, zero):
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


@pytest.mark.parametrize("i", range(6))
def test_ultraspherical_orthogonality(i):
    mu = mu_functional(R2)
    for j in range(6):
        val = mu.apply(_poly_mul(c_monic(i, R2), c_monic(j, R2), R2.zero))
        assert val == (cn_norm(i, R2) if i == j else 0), (i, j)


def test_lambda_functional_examples():
    assert lambda_apply({0: 1}, R2) == 0
    assert lambda_apply({1: 1}, R2) == (1 - q) / (1 + q)
    assert lambda_apply({-1: 1}, R2) == -(1 - q) / (1 + q)
    f = LaurentPoly({-2: 3, 1: Fraction(1, 2), 4: -1})
    g = LaurentPoly({2: 3, -1: Fraction(1, 2), -4: -1})
    assert lambda_apply(f, R2) == -lambda_apply(g, R2)


# -- two-point kernels -----------------------------------------------------

def test_kernel_examples():
    x, y = S + 2, 3 * S - 1
    assert kernel_K(1, x, y, C) == 1 / C.norm(0)
    assert kernel_K(2, x, y, C) == kernel_K(2, x, y, C, "quotient")
    assert kernel_K(4, x, y, C) == kernel_K(4, y, x, C)
    assert kernel_Ktilde(1, x, y, C) == C(0, x) * C(0, y) / C.norm(0)
    assert ktk_check(3, x, y, C)
    assert kernel_Ktilde(2, x, y, C) == kernel_K(2, x, y, C) - kernel_Ktilde(1, x, y, C)


@pytest.mark.parametrize("n", range(6))
def test_kernel_forms_symbolic(n):
    x, y = S + 2, RationalFn(Fraction(-3, 7))
    if n:
        assert kernel_K(n, x, y, C) == kernel_K(n, x, y, C, "quotient")
    assert ktk_check(n, x, y, C)
    for sys in CLASSICAL:
        a, b = Fraction(5, 2), Fraction(-1, 3)
        if n:
            assert kernel_K(n, a, b, sys) == kernel_K(n, a, b, sys, "quotient")


def test_kernel_value_record():
    v = KernelValue(kernel_K(2, S, S + 1, C), 2, 1, (S, S + 1), "sum")
    assert v.n == 2 and v.form == "sum"


# -- generalized Schur functions and the multivariable kernels --------------

def test_gen_schur_examples():
    pts = [S, S + 1, RationalFn(3)]
    assert gen_schur(0, 3, pts, C) == 1
    for n in range(4):
        assert gen_schur(n, 1, [S + 2], C) == C(n, S + 2)
    assert sfl_check(2, 2, [RationalFn(Fraction(1, 3)), S + 1], C)
    assert gen_schur(3, 0, [], C) == 1


@pytest.mark.parametrize("n,m", [(n, m) for n in range(4) for m in range(1, 3)])
def test_sfl(n, m):
    pts = [RationalFn(Fraction(1, 3)), S + 1][:m]
    assert sfl_check(n, m, pts, C)


def test_multikernel_small_cases():
    x, y = Fraction(9, 4), Fraction(1, 9)
    for n in range(1, 5):
        K = kernel_K(n, x, y, C)
        assert multikernel(n, 1, [x, y], C, "kd") == K
        assert multikernel(n, 1, [x, y], C, "mk") == K
        assert multikernel(n, 1, [x, y], C, "pfaff_sqrt", [Fraction(3, 2), Fraction(1, 3)]) == K
        assert multikernel_tilde(n, 1, [x, y], C, "det") == kernel_Ktilde(n, x, y, C)


def _four_forms(n, m, pts, sys):
    xs = [p[0] for p in pts]
    vals = [multikernel(n, m, xs, sys, "kd"), multikernel(n, m, xs, sys, "mk"),
            multikernel(n, m, xs, sys, "mk_sum"),
            multikernel(n, m, xs, sys, "pfaff_sqrt", [p[1] for p in pts]),
            multikernel(n, m, xs, sys, "pfaff_xi", [p[2] for p in pts])]
    return vals


@pytest.mark.parametrize("k", range(25))
def test_multikernel_forms_at_admissible_points(k):
    two_m = (2, 4)[k % 2]
    m = two_m // 2
    pts = admissible_sqrt_points(windows(TS, two_m, 25)[k])
    for n in range(m, 6):
        vals = _four_forms(n, m, pts, NUM)
        assert all(v == vals[0] for v in vals), (n, vals)


def test_multikernel_forms_symbolic_q():
    pts = admissible_sqrt_points([Fraction(1, 3), Fraction(5, 2), Fraction(7, 4), Fraction(2, 9)])
    vals = _four_forms(3, 2, pts, C)
    assert all(v == vals[0] for v in vals)


@pytest.mark.parametrize("eps", [0, 1])
def test_classical_multikernel_forms(eps):
    pts = admissible_sqrt_points([Fraction(1, 3), Fraction(5, 2), Fraction(7, 4), Fraction(2, 9)])
    for n in range(2, 5):
        vals = _four_forms(n, 2, pts, CLASSICAL[eps])
        assert all(v == vals[0] for v in vals)


@pytest.mark.parametrize("k", range(25))
def test_multikernel_tilde_forms_at_admissible_points(k):
    two_m = (2, 4)[k % 2]
    m = two_m // 2
    pts = admissible_tilde_points(windows(TS, two_m, 25)[k])
    xs = [p[0] for p in pts]
    for n in range(2 * m - 1, 6):
        a = multikernel_tilde(n, m, xs, NUM, "det")
        b = multikernel_tilde(n, m, xs, NUM, "kpa", [p[1] for p in pts])
        c = multikernel_tilde(n, m, xs, NUM, "kpb", [p[2] for p in pts])
        assert a == b == c, n


def test_multikernel_tilde_symbolic_one_variable():
    x, y = S + 2, S**2 + Fraction(1, 3)
    assert multikernel_tilde(3, 1, [x, y], C, "det") == kernel_Ktilde(3, x, y, C)


def test_unsolvable_witness_is_rejected():
    with pytest.raises(WitnessError, match="admissible"):
        multikernel(2, 1, [Fraction(2), Fraction(3)], NUM, "pfaff_xi")
    with pytest.raises(WitnessError):
        multikernel(2, 1, [Fraction(9), Fraction(4)], NUM, "pfaff_sqrt", [Fraction(3), Fraction(3)])


# -- the kernel route to P_n ------------------------------------------------

def test_pkt_one_variable():
    # P_n(x) = (-q;q)_n/(q;q)_n z^n c_n(z + 1/z) with x = -z^2
    z = S + Fraction(1, 2)
    for n in range(5):
        cn = sum((c * (z + 1 / z) ** j for j, c in enumerate(c_monic(n, R2))), R2.zero)
        assert p1_direct(-z * z, n, R2) == qp(R2, 1, n, -1) / qp(R2, 1, n) * z**n * cn
        assert theorem_pkt_check([z], n, R2)


def test_pkt_examples():
    num = R2.at(Fraction(1, 2))
    assert theorem_pkt_check([Fraction(2), Fraction(3)], 3, num)
    assert theorem_pkt_check([Fraction(2), Fraction(3), Fraction(5, 2)], 4, num)
    assert theorem_pkt_check([Fraction(2), Fraction(3)], 3, num, "kernel")


@pytest.mark.parametrize("k", range(25))
def test_pkt_grid(k):
    num = R2.at(Fraction(2, 3))
    zs = [p[1] for p in pkt_points(windows(ZS, 3, 25)[k])]
    for m in (1, 2, 3):
        for n in range(m - 1, 6):
            assert theorem_pkt_check(zs[:m], n, num), (m, n)
            if m % 2 == 0:
                assert theorem_pkt_check(zs[:m], n, num, "kernel"), (m, n)


def test_two_row_kernel():
    num = R2.at(Fraction(1, 3))
    z, u = Fraction(2), Fraction(-5, 3)
    for n in range(5):
        assert two_row_kernel(z, u, n, num) == p_multisum([-z * z, -u * u], n, num)


def test_pkt_shape_guard():
    with pytest.raises(MethodNotApplicable):
        pkt_sides([Fraction(2), Fraction(3), Fraction(5)], 1, R2.at(Fraction(1, 2)))


# -- the appendix ------------------------------------------------------------

def test_appendix_examples():
    x = S + 2
    assert appendix_p([x], 1, R2) == p_multisum([x], 1, R2)
    assert appendix_p([x], 3, R2) == p1_direct(x, 3, R2)
    xs = [S + 2, 3 * S]
    assert appendix_p(xs, 3, R2) == p_multisum(xs, 3, R2)


@pytest.mark.parametrize("m", [1, 2])
def test_appendix_routes_on_grid(m):
    xs = [S + 2, RationalFn(Fraction(-1, 3))][:m]
    for n in range(m - 1, 6):
        ref = p_multisum(xs, n, R2)
        assert appendix_p(xs, n, R2, "lambda") == ref, n
        assert appendix_p(xs, n, R2, "moments") == ref, n


def test_appendix_guard():
    x = S + 2
    n = 2 * (APPENDIX_MAX_L + 1)
    with pytest.raises(ValueError, match="cost guard"):
        appendix_p([x], n, R2)


# -- the moment integral for tilde functions ----------------------------------

def test_kif_examples():
    xs = [S + 2, RationalFn(Fraction(1, 3))]
    lhs, rhs = kif_sides(0, 2, xs, R2, odd=False)
    assert lhs == rhs == 1
    assert kif_check(1, 1, xs[:1], R2, odd=False)
    assert kif_check(1, 2, xs, R2, odd=True)


@pytest.mark.parametrize("l,m,odd", [(l, m, odd) for l in (0, 1, 2) for m in (1, 2)
                                     for odd in (False, True)])
def test_kif(l, m, odd):
    xs = [S + 2, RationalFn(Fraction(1, 3))][:m]
    assert kif_check(l, m, xs, R2, odd)


def test_kif_guard():
    with pytest.raises(ValueError):
        kif_sides(3, 1, [S], R2, False)
