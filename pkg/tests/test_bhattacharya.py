import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from mixmult.bhattacharya import (BhattacharyaFunction, Config, GridSample,
                                  certified_base, degree_check, detect_degree,
                                  mixed_multiplicity, mixed_table, mixed_types,
                                  sample_grid, table_at_base)
from mixmult.errors import (InfiniteLength, InputError, InvalidWindow,
                            NotMPrimary, UndefinedMultiplicity)
from mixmult.filtration import adic, integral_closure
from mixmult.module import ModuleModel
from mixmult.monomial import MonomialIdeal, maximal_ideal
from strategies import ideals, m_primary_ideals


def I2(*gens):
    return MonomialIdeal.of(2, gens)


m2 = maximal_ideal(2)
A2 = ModuleModel.free(2)
X2Y3 = I2((2, 0), (0, 3))
X3Y3 = I2((3, 0), (0, 3))


def grid_of(fn, base, w, nd):
    vals = np.empty((w,) * nd, dtype=object)
    for off in itertools.product(range(w), repeat=nd):
        vals[off] = fn(*[b + o for b, o in zip(base, off)])
    return GridSample(tuple(base), w, vals)


def test_sample_grid_examples():
    G = sample_grid(adic(m2), [adic(m2)], A2, (2, 2), 3)
    for i, j in itertools.product(range(3), repeat=2):
        assert G.values[i, j] == (2 + i) + (2 + j) + 1
    G = sample_grid(adic(m2), [adic(m2)], A2, (0, 0), 1)
    assert G.values[0, 0] == 1  # l(A/m)
    with pytest.raises(InvalidWindow):
        sample_grid(adic(m2), [adic(m2)], A2, (0, 0), 0)


def test_sample_grid_threads_match_serial():
    F, Fs = adic(I2((2, 0), (1, 1), (0, 2))), [integral_closure(X3Y3)]
    a = sample_grid(F, Fs, A2, (1, 1), 4)
    b = sample_grid(F, Fs, A2, (1, 1), 4, workers=4)
    assert (a.values == b.values).all()


def test_detect_degree_examples():
    lin = grid_of(lambda a, b: a + b + 1, (2, 2), 4, 2)
    assert detect_degree(lin, 2)
    assert not detect_degree(grid_of(lambda a, b: a + b + 1, (2, 2), 5, 2), 3)
    assert detect_degree(grid_of(lambda a: 1, (0,), 3, 1), 1)
    with pytest.raises(InvalidWindow):
        detect_degree(lin, 3)


def test_detect_degree_rejects_zero_form():
    assert not detect_degree(grid_of(lambda a, b: 0, (0, 0), 3, 2), 1)


@given(st.integers(1, 3), st.integers(1, 2), st.data())
def test_detect_degree_on_random_polynomials(q, s, data):
    """Integer-valued polynomials sum c_alpha binom(n, alpha) of exact degree q-1."""
    nd = s + 1
    alphas = [a for a in itertools.product(range(q), repeat=nd) if sum(a) <= q - 1]
    coef = {a: data.draw(st.integers(-3, 3)) for a in alphas}
    top = [a for a in alphas if sum(a) == q - 1]
    coef[top[0]] = data.draw(st.integers(1, 4))

    def f(*n):
        return sum(c * np.prod([comb(x, k) for x, k in zip(n, a)]) for a, c in coef.items())
    G = grid_of(f, (0,) * nd, q + 2, nd)
    assert detect_degree(G, q)
    if q >= 2:
        assert not detect_degree(G, q - 1)
    assert not detect_degree(grid_of(f, (0,) * nd, q + 3, nd), q + 1)


def test_mixed_types():
    assert mixed_types(2, 1) == [(1, 0), (0, 1)]
    assert mixed_types(1, 2) == [(0, 0, 0)]
    assert len(mixed_types(3, 2)) == 6


def test_mixed_table_examples():
    assert mixed_table(adic(m2), [adic(m2)], A2).entries == {(1, 0): 1, (0, 1): 1}
    assert mixed_table(adic(m2), [adic(X2Y3)], A2).entries == {(1, 0): 1, (0, 1): 2}
    with pytest.raises(UndefinedMultiplicity, match="mixed multiplicity undefined"):
        mixed_table(adic(m2), [adic(X2Y3)], ModuleModel.cyclic(m2))


def test_mixed_multiplicity_examples():
    assert mixed_multiplicity(adic(m2), [adic(m2)], A2, 1, (0,)) == 1
    assert mixed_multiplicity(adic(m2), [adic(m2)], A2, 0, (1,)) == 1
    assert mixed_multiplicity(adic(m2), [adic(X2Y3)], A2, 0, (1,)) == 2
    assert mixed_multiplicity(adic(X2Y3), [adic(X2Y3)], A2, 1, (0,)) == 6
    with pytest.raises(InputError):
        mixed_multiplicity(adic(m2), [adic(m2)], A2, 1, (1,))
    with pytest.raises(InputError):
        mixed_multiplicity(adic(m2), [adic(m2)], A2, 1, (0, 0))


def test_frozen_oracle_values():
    # values from the staircase-area and enumeration oracles
    assert oracles.mixed_covolume_2d([(1, 0), (0, 1)], [(2, 0), (0, 3)]) == 2
    assert oracles.mixed_covolume_2d([(1, 0), (0, 1)], [(3, 0), (0, 3)]) == 3
    assert oracles.samuel_2d([(2, 0), (0, 3)]) == 6
    assert mixed_table(adic(m2), [adic(X3Y3)], A2).entries[(0, 1)] == 3
    assert mixed_table(adic(m2), [integral_closure(X3Y3)], A2).entries[(0, 1)] == 3


def test_distinguished_filtration_must_be_m_primary():
    with pytest.raises(NotMPrimary):
        mixed_table(adic(I2((1, 0))), [adic(m2)], A2)


def test_t_max_guard():
    with pytest.raises(InfiniteLength):
        mixed_table(adic(X3Y3), [adic(m2)], A2, Config(t_max=2))


@settings(max_examples=25)
@given(m_primary_ideals(d=2, max_exp=4), m_primary_ideals(d=2, max_exp=4),
       st.booleans())
def test_table_matches_covolume_oracle(J, I, closure):
    F = integral_closure(J) if closure else adic(J)
    G = integral_closure(I) if closure else adic(I)
    T = mixed_table(F, [G], A2).entries
    assert T[(1, 0)] == oracles.samuel_2d(J.gens)
    assert T[(0, 1)] == oracles.mixed_covolume_2d(J.gens, I.gens)


def module_length_oracle(J_gens, Q_gens, n, bound):
    """l(A/(Q + J^n)) by enumeration over a box."""
    d = len(J_gens[0])
    return sum(1 for a in itertools.product(range(bound), repeat=d)
               if not oracles.member(Q_gens, a) and not oracles.power_member(J_gens, n, a))


@pytest.mark.parametrize("J,Q,q", [
    ([(1, 0), (0, 1)], [(2, 0)], 1),
    ([(2, 0), (1, 1), (0, 2)], [(1, 0)], 1),
    ([(2, 0), (0, 3)], [(1, 2)], 1),
    ([(1, 0), (0, 1)], [], 2),
])
def test_single_filtration_reduction(J, Q, q):
    """e(F^[q], FF^[0]; M) is the Samuel multiplicity of (F)_1 on M."""
    d = 2
    JI = MonomialIdeal.of(d, J)
    M = ModuleModel.cyclic(MonomialIdeal.of(d, Q))
    T = mixed_table(adic(JI), [adic(m2)], M)
    assert T.q == q
    lengths = [module_length_oracle(J, Q, n, 16) for n in range(6)]
    samuel = oracles.forward_difference(lengths, q)
    assert samuel[-1] == samuel[-2]
    assert T.entries[(q - 1, 0)] == samuel[-1]


@settings(max_examples=20)
@given(st.integers(1, 2).flatmap(lambda d: st.tuples(
    m_primary_ideals(d=d, max_exp=3), ideals(d=d, max_exp=3, max_gens=2),
    ideals(d=d, max_exp=2, max_gens=2))), st.booleans())
def test_degree_law_and_base_invariance(args, closure):
    J, I, Q = args
    M = ModuleModel.free(J.dim).direct_sum(ModuleModel.cyclic(Q))
    G = integral_closure(I) if closure else adic(I)
    ok, q, _ = degree_check(adic(J), [G], M)
    assert ok
    B = BhattacharyaFunction(adic(J), [G], M)
    base, _, _, first = certified_base(B, 16)
    assert table_at_base(B, base + 2) == first
    assert all(v >= 0 for v in first.values()) and any(first.values())


@settings(max_examples=15)
@given(st.integers(1, 2).flatmap(lambda d: st.tuples(
    m_primary_ideals(d=d, max_exp=3), m_primary_ideals(d=d, max_exp=3),
    ideals(d=d, max_exp=2, max_gens=2), ideals(d=d, max_exp=2, max_gens=2))))
def test_table_additive_on_equal_dimensions(args):
    J, I, Q1, Q2 = args
    M1, M2 = ModuleModel.cyclic(Q1), ModuleModel.cyclic(Q2)
    F, Fs = adic(J), [adic(I)]
    try:
        t1, t2 = mixed_table(F, Fs, M1), mixed_table(F, Fs, M2)
    except UndefinedMultiplicity:
        return
    if t1.q != t2.q:
        return
    t3 = mixed_table(F, Fs, M1.direct_sum(M2))
    assert t3.entries == {k: t1.entries[k] + t2.entries[k] for k in t1.entries}


def test_three_variable_two_filtration_table():
    m3 = maximal_ideal(3)
    A3 = ModuleModel.free(3)
    T = mixed_table(adic(m3), [adic(m3), adic(m3)], A3)
    # B = binom(n0 + n1 + n2 + 2, 2); every type of degree two has coefficient 1
    assert T.entries == {t: 1 for t in mixed_types(3, 2)}


@pytest.mark.parametrize("gens", [
    [(3, 0, 0), (1, 2, 1), (0, 5, 0), (0, 0, 4)],
    [(0, 0, 5), (0, 3, 0), (1, 1, 2), (3, 1, 0), (5, 0, 0)],
    [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 1)],
])
def test_samuel_entry_matches_newton_covolume_3d(gens):
    """The first example has Hilbert-Samuel third differences 58 for n = 2..8
    before settling on 59, so short confirmation runs report the wrong value."""
    J = MonomialIdeal.of(3, gens)
    want = 6 * oracles.newton_covolume_3d(gens)
    T = mixed_table(adic(J), [adic(maximal_ideal(3))], ModuleModel.free(3))
    assert T.entries[(2, 0)] == want
    assert T.provenance["confirm_run"] == 5


def test_plateau_oracle_value():
    assert 6 * oracles.newton_covolume_3d([(3, 0, 0), (1, 2, 1), (0, 5, 0), (0, 0, 4)]) == 59
