from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from schurq.exact import RationalFn

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

S = RationalFn.s_power(1)


def poly(coeffs):
    out = RationalFn(0)
    for e, c in enumerate(coeffs):
        out = out + RationalFn.s_power(e, c)
    return out


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
coeff_lists = st.lists(st.integers(-4, 4), min_size=1, max_size=4)


@st.composite
def rational_fns(draw):
    num = poly(draw(coeff_lists))
    den_coeffs = draw(coeff_lists)
    den = poly(den_coeffs)
    if den == 0:
        den = RationalFn(1)
    return num / den


@st.composite
def nonzero_fractions(draw):
    x = draw(small_fractions)
    return x if x != 0 else Fraction(1, 3)
