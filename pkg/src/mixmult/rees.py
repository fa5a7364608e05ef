"""Multiplicities of multi-Rees modules, by two independent routes.

With U = (J, R(I;A)_+) the maximal-type homogeneous ideal of the multi-Rees
algebra and R = R(I;M) = sum_k I^k M T^k, the route by summation adds the
mixed multiplicities e(J^[k0+1], FF^[k]; M) over k0 + |k| = dim M - 1.
The direct route counts l(R / U^n R) piece by piece.  In multidegree k,

    (R_+)^j R  has piece  I^k M   if |k| >= j,  and 0 otherwise,

because I^k = I^(e_1) ... I^(e_j) I^(k - sum e) for any split of k into j
nonzero parts plus a remainder; U^n = sum_j J^(n-j) (R_+)^j then gives the
piece J^max(n-|k|, 0) I^k M.  Only |k| <= n-1 contributes to the quotient.

For genuine filtrations the same bookkeeping goes through the recursion
P_0(k) = F_k, P_j(k) = sum_{0 < e <= k} F_e P_{j-1}(k - e), whose pieces
vanish once |k| >= n + s*c (c the stabilization index).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .bhattacharya import Config, mixed_table
from .errors import (DegenerateProfile, DimensionMismatch, HeightCondition,
                     InputError, NotMPrimary, ProfileTooShort)
from .filtration import (Filtration, adic, first_term_product, product_term,
                         stabilization_index)
from .module import ModuleModel, ht_positive, module_dim
from .monomial import (MonomialIdeal, count_ideal_difference, ideal_sum,
                       is_m_primary, m_primary_index, power, product,
                       zero_ideal)

TAIL = 3  # trailing zeros of the next difference demanded by degree detection


def _check_rees_inputs(J: MonomialIdeal, I: MonomialIdeal, M: ModuleModel) -> None:
    if J.dim != M.dim or I.dim != M.dim:
        raise DimensionMismatch("ideals and module live in different dimensions")
    if not is_m_primary(J):
        raise NotMPrimary(f"{J} is not m-primary")
    if M.is_zero:
        raise InputError("Rees multiplicity of the zero module")
    if not ht_positive(I, M):
        raise HeightCondition(f"ht ({I} + Ann M)/Ann M = 0 for M = {M}")


def rees_via_sum(J: MonomialIdeal, Fs: Sequence[Filtration], M: ModuleModel,
                 config: Config = Config()) -> int:
    """Sum of e(J^[k0+1], FF^[k]; M) over k0 + |k| = dim M - 1."""
    return rees_via_sum_detail(J, Fs, M, config)[0]


def rees_via_sum_detail(J, Fs, M, config: Config = Config()) -> tuple:
    """(value, table) for the summation route."""
    _check_rees_inputs(J, first_term_product(Fs), M)
    table = mixed_table(adic(J), Fs, M, config)
    # ht > 0 forces dim M/0_M:I^oo = dim M
    assert table.q == module_dim(M)
    return table.total(), table


@dataclass(frozen=True)
class ReesLengthProfile:
    n_max: int
    lengths: tuple  # lengths[n-1] = l(R / U^n R)
    Is: tuple
    J: MonomialIdeal
    M: ModuleModel
    expected_degree: int
    route: str = "ideals"
    extra: dict = field(default_factory=dict, compare=False)


def default_n_max(M: ModuleModel, s: int) -> int:
    return 3 * (module_dim(M) + s) + 6


def _adic_length(Is: tuple, J: MonomialIdeal, M: ModuleModel, n: int, tJ: int) -> int:
    s = len(Is)
    Fs = tuple(adic(I) for I in Is)
    total = 0
    for k in itertools.product(range(n), repeat=s):
        r = n - sum(k)
        if r <= 0:
            continue
        Ik = product_term(Fs, k)
        low = product(_jpow(J, r), Ik)
        total += sum(count_ideal_difference(Ik, low, Q, t=tJ * r) for Q in M.summands)
    return total


@lru_cache(maxsize=256)
def _jpow(J: MonomialIdeal, r: int) -> MonomialIdeal:
    return power(J, r)


def rees_direct_profile(Is: Sequence[MonomialIdeal], J: MonomialIdeal, M: ModuleModel,
                        n_max: int | None = None) -> ReesLengthProfile:
    """l(R(I;M) / U^n R(I;M)) for n = 1..n_max from the piece formula."""
    Is = tuple(Is)
    if not Is:
        raise InputError("at least one ideal is required")
    if any(I.is_zero for I in Is):
        raise InputError("Rees profile needs nonzero ideals")
    I = Is[0]
    for other in Is[1:]:
        I = product(I, other)
    _check_rees_inputs(J, I, M)
    if n_max is None:
        n_max = default_n_max(M, len(Is))
    if n_max < 1:
        raise InputError("n_max must be positive")
    tJ = m_primary_index(J)
    lengths = tuple(_adic_length(Is, J, M, n, tJ) for n in range(1, n_max + 1))
    return ReesLengthProfile(n_max, lengths, Is, J, M, module_dim(M) + len(Is))


def filtration_direct_profile(Fs: Sequence[Filtration], J: MonomialIdeal, M: ModuleModel,
                              n_max: int | None = None,
                              config: Config = Config()) -> ReesLengthProfile:
    """l(R(FF;M) / U^n R(FF;M)) with U = (J, R(FF;A)_+), pieces by recursion."""
    Fs = tuple(Fs)
    if not Fs:
        raise InputError("at least one filtration is required")
    _check_rees_inputs(J, first_term_product(Fs), M)
    s = len(Fs)
    if n_max is None:
        n_max = default_n_max(M, s)
    c = max(stabilization_index(F, config.stabilization_bound) for F in Fs)
    tJ = m_primary_index(J)
    d = M.dim
    zero = zero_ideal(d)
    memo: dict = {}

    def P(j: int, k: tuple) -> MonomialIdeal:
        key = (j, k)
        if key in memo:
            return memo[key]
        if j == 0:
            out = product_term(Fs, k)
        elif j > sum(k):
            out = zero
        else:
            out = zero
            for e in itertools.product(*[range(x + 1) for x in k]):
                if not any(e):
                    continue
                rest = tuple(a - b for a, b in zip(k, e))
                if j - 1 > sum(rest):
                    continue
                out = ideal_sum(out, product(product_term(Fs, e), P(j - 1, rest)))
        memo[key] = out
        return out

    lengths = []
    for n in range(1, n_max + 1):
        total = 0
        for k in itertools.product(range(n + s * c), repeat=s):
            if sum(k) >= n + s * c:
                continue
            top = product_term(Fs, k)
            low = zero
            for j in range(min(n, sum(k)) + 1):
                low = ideal_sum(low, product(_jpow(J, n - j), P(j, k)))
            total += sum(count_ideal_difference(top, low, Q, t=tJ * n) for Q in M.summands)
        lengths.append(total)
    return ReesLengthProfile(n_max, tuple(lengths), tuple(F.base for F in Fs), J, M,
                             module_dim(M) + s, route="filtrations",
                             extra={"stabilization_index": c})


def _differences(seq: Sequence[int], order: int) -> list:
    out = list(seq)
    for _ in range(order):
        out = [b - a for a, b in zip(out, out[1:])]
    return out


def detect_profile_degree(lengths: Sequence[int]) -> tuple | None:
    """(degree, leading difference) or None when the tail is not yet polynomial.

    The degree is the least D whose D-th differences are a nonzero constant
    on the tail while the (D+1)-th ones vanish on the last TAIL entries.
    """
    for D in range(len(lengths)):
        nxt = _differences(lengths, D + 1)
        if len(nxt) < TAIL:
            return None
        if all(v == 0 for v in nxt[-TAIL:]):
            lead = _differences(lengths, D)[-1]
            return D, lead
    return None


@dataclass(frozen=True)
class ReesMultiplicity:
    value: int
    detected_degree: int
    expected_degree: int
    n_max: int

    @property
    def degree_flag(self) -> bool:
        return self.detected_degree != self.expected_degree


def rees_direct_multiplicity(profile: ReesLengthProfile) -> int:
    """The constant (dim M + s)-th difference of the profile."""
    return rees_direct_detail(profile).value


def rees_direct_detail(profile: ReesLengthProfile) -> ReesMultiplicity:
    if not any(profile.lengths):
        raise DegenerateProfile("length profile is identically zero")
    found = detect_profile_degree(profile.lengths)
    if found is None:
        raise ProfileTooShort(
            f"differences not constant within n_max = {profile.n_max}")
    D, lead = found
    if lead <= 0:
        raise DegenerateProfile(f"leading difference {lead} is not positive")
    return ReesMultiplicity(lead, D, profile.expected_degree, profile.n_max)


def rees_direct(Is: Sequence[MonomialIdeal], J: MonomialIdeal, M: ModuleModel,
                n_max: int | None = None) -> ReesMultiplicity:
    """Direct route with escalation: retry once at twice n_max."""
    n0 = n_max if n_max is not None else default_n_max(M, len(Is))
    try:
        return rees_direct_detail(rees_direct_profile(Is, J, M, n0))
    except ProfileTooShort:
        return rees_direct_detail(rees_direct_profile(Is, J, M, 2 * n0))


def rees_filtration_direct(Fs: Sequence[Filtration], J: MonomialIdeal, M: ModuleModel,
                           n_max: int | None = None,
                           config: Config = Config()) -> ReesMultiplicity:
    n0 = n_max if n_max is not None else default_n_max(M, len(Fs))
    try:
        return rees_direct_detail(filtration_direct_profile(Fs, J, M, n0, config))
    except ProfileTooShort:
        return rees_direct_detail(filtration_direct_profile(Fs, J, M, 2 * n0, config))
