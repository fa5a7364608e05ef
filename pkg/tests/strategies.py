from hypothesis import strategies as st

from mixmult.monomial import minimalize


def exponents(d, max_exp=4):
    return st.tuples(*[st.integers(0, max_exp)] * d)


@st.composite
def ideals(draw, d=None, max_exp=4, max_gens=4, nonzero=True, proper=True):
    if d is None:
        d = draw(st.integers(1, 3))
    gens = draw(st.lists(exponents(d, max_exp), min_size=1 if nonzero else 0,
                         max_size=max_gens))
    if proper:
        gens = [g if any(g) else tuple(int(i == 0) for i in range(d)) for g in gens]
    return minimalize(gens, d)


@st.composite
def m_primary_ideals(draw, d=None, max_exp=4, max_extra=3):
    if d is None:
        d = draw(st.integers(1, 3))
    pure = [tuple(draw(st.integers(1, max_exp)) if j == i else 0 for j in range(d))
            for i in range(d)]
    extra = draw(st.lists(exponents(d, max_exp), max_size=max_extra))
    extra = [g for g in extra if any(g)]
    return minimalize(pure + extra, d)


def same_dim_pair(max_exp=4):
    return st.integers(1, 3).flatmap(
        lambda d: st.tuples(ideals(d=d, max_exp=max_exp), ideals(d=d, max_exp=max_exp)))
