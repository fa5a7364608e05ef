"""Good filtrations of monomial ideals.

Two kinds are built in: the I-adic filtration {I^n} and the integral-closure
filtration {closure(I^n)}.  In both cases ``base`` is a reduction, i.e.
I * F_n is inside F_{n+1} with equality for large n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import InputError, StabilizationError
from .monomial import (MonomialIdeal, contains_ideal, is_m_primary,
                       m_primary_index, power, product, unit_ideal)
from .newton import integral_closure_power

ADIC = "adic"
INTEGRAL_CLOSURE = "integral_closure"
KINDS = (ADIC, INTEGRAL_CLOSURE)

DEFAULT_STABILIZATION_BOUND = 16


@dataclass(frozen=True)
class Filtration:
    kind: str
    base: MonomialIdeal

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown filtration kind {self.kind!r}")
        if self.base.is_unit:
            raise InputError("the first term of a filtration must be a proper ideal")
        if self.kind == INTEGRAL_CLOSURE and self.base.is_zero:
            raise InputError("integral closure filtration of the zero ideal")

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def reduction(self) -> MonomialIdeal:
        return self.base

    def adic_reduction(self) -> "Filtration":
        return Filtration(ADIC, self.base)

    def __str__(self):
        if self.kind == ADIC:
            return f"adic{self.base}"
        return f"intcl{self.base}"


def adic(I: MonomialIdeal) -> Filtration:
    return Filtration(ADIC, I)


def integral_closure(I: MonomialIdeal) -> Filtration:
    return Filtration(INTEGRAL_CLOSURE, I)


@lru_cache(maxsize=8192)
def _term(kind: str, base: MonomialIdeal, n: int) -> MonomialIdeal:
    if n == 0:
        return unit_ideal(base.dim)
    if kind == ADIC:
        if n == 1:
            return base
        # build from the previous power so the cache fills incrementally
        return product(base, _term(kind, base, n - 1))
    return integral_closure_power(base, n)


def term(F: Filtration, n: int) -> MonomialIdeal:
    if n < 0:
        raise InputError("filtration index must be nonnegative")
    if F.kind == ADIC and n > 64:
        return power(F.base, n)
    return _term(F.kind, F.base, n)


def is_m_primary_filtration(F: Filtration) -> bool:
    return is_m_primary(term(F, 1))


def m_index(F: Filtration) -> int:
    """Smallest t with m^t inside the first term (raises unless m-primary)."""
    return m_primary_index(term(F, 1))


@lru_cache(maxsize=1024)
def _stabilization(kind: str, base: MonomialIdeal, bound: int) -> int:
    if kind == ADIC:
        return 0
    F = Filtration(kind, base)
    ok = [term(F, n + 1) == product(base, term(F, n)) for n in range(bound)]
    if not ok[-1]:
        raise StabilizationError(
            f"{F}: F_(n+1) != I F_n at n = {bound - 1}; not certified within bound {bound}")
    c = bound - 1
    while c > 0 and ok[c - 1]:
        c -= 1
    return c


def stabilization_index(F: Filtration, bound: int = DEFAULT_STABILIZATION_BOUND) -> int:
    """Least c with F_{n+1} = base * F_n for every c <= n < bound."""
    if bound < 1:
        raise InputError("stabilization bound must be at least 1")
    return _stabilization(F.kind, F.base, bound)


def reduction_holds(F: Filtration, upto: int) -> bool:
    """base * F_n inside F_{n+1} for n < upto (the reduction containment)."""
    return all(contains_ideal(term(F, n + 1), product(F.base, term(F, n)))
               for n in range(upto))


@lru_cache(maxsize=8192)
def _product_term(Fs: tuple, n: tuple) -> MonomialIdeal:
    if not Fs:
        raise InputError("empty filtration list")
    if len(Fs) == 1:
        return term(Fs[0], n[0])
    return product(_product_term(Fs[:-1], n[:-1]), term(Fs[-1], n[-1]))


def product_term(Fs: Sequence[Filtration], n: Sequence[int]) -> MonomialIdeal:
    """(F_1)_{n_1} ... (F_s)_{n_s}."""
    Fs, n = tuple(Fs), tuple(int(x) for x in n)
    if len(Fs) != len(n):
        raise InputError(f"{len(Fs)} filtrations but index of length {len(n)}")
    if any(x < 0 for x in n):
        raise InputError("filtration index must be nonnegative")
    dims = {F.dim for F in Fs}
    if len(dims) > 1:
        raise InputError("filtrations live in different dimensions")
    return _product_term(Fs, n)


def first_term_product(Fs: Sequence[Filtration]) -> MonomialIdeal:
    """I = (F_1)_1 ... (F_s)_1."""
    return product_term(Fs, (1,) * len(Fs))
