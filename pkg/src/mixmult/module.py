"""Modules that are finite direct sums of cyclic monomial quotients A/Q_i."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import (DimensionMismatch, InputError, NotMinimalPrime,
                     UndefinedMultiplicity, ZeroModuleError)
from .filtration import Filtration, m_index, product_term, term
from .monomial import (MonomialIdeal, PrimeSupport, colength,
                       count_ideal_difference, dim_quotient, ideal_in_prime,
                       intersect, minimal_primes, product, project, saturate,
                       zero_ideal)


@dataclass(frozen=True)
class ModuleModel:
    """M = A/Q_1 + ... + A/Q_r.  Unit-ideal summands are dropped."""

    dim: int
    summands: tuple

    def __post_init__(self):
        kept = []
        for Q in self.summands:
            if Q.dim != self.dim:
                raise DimensionMismatch(f"summand {Q} is not in dimension {self.dim}")
            if not Q.is_unit:
                kept.append(Q)
        object.__setattr__(self, "summands", tuple(kept))

    @classmethod
    def free(cls, d: int, rank: int = 1) -> "ModuleModel":
        return cls(d, (zero_ideal(d),) * rank)

    @classmethod
    def cyclic(cls, Q: MonomialIdeal) -> "ModuleModel":
        return cls(Q.dim, (Q,))

    @property
    def is_zero(self) -> bool:
        return not self.summands

    def direct_sum(self, other: "ModuleModel") -> "ModuleModel":
        if other.dim != self.dim:
            raise DimensionMismatch("direct sum of modules in different dimensions")
        return ModuleModel(self.dim, self.summands + other.summands)

    @cached_property
    def annihilator(self) -> MonomialIdeal:
        if self.is_zero:
            raise ZeroModuleError("annihilator of the zero module is the unit ideal")
        ann = self.summands[0]
        for Q in self.summands[1:]:
            ann = intersect(ann, Q)
        return ann

    @cached_property
    def min_primes(self) -> tuple:
        """Minimal primes of A/Ann M, read off the summands."""
        if self.is_zero:
            raise ZeroModuleError("the zero module has no minimal primes")
        allp = {p for Q in self.summands for p in minimal_primes(Q)}
        return tuple(sorted((p for p in allp if not any(o.vars < p.vars for o in allp)),
                            key=PrimeSupport.sort_key))

    def __str__(self):
        if self.is_zero:
            return "0"
        return " + ".join("A" if Q.is_zero else f"A/{Q}" for Q in self.summands)


def module_dim(M: ModuleModel) -> int:
    if M.is_zero:
        raise ZeroModuleError("dimension of the zero module is undefined")
    return max(dim_quotient(Q) for Q in M.summands)


def saturate_module(M: ModuleModel, I: MonomialIdeal) -> ModuleModel:
    """M / 0_M : I^infinity, computed summand by summand."""
    if I.is_zero:
        raise InputError("saturation by the zero ideal")
    return ModuleModel(M.dim, tuple(saturate(Q, I) for Q in M.summands))


def q_value(M: ModuleModel, I: MonomialIdeal) -> int:
    """dim M / 0_M : I^infinity; undefined when I is inside sqrt(Ann M)."""
    Mbar = saturate_module(M, I)
    if Mbar.is_zero:
        raise UndefinedMultiplicity(
            f"mixed multiplicity undefined: {I} is contained in sqrt(Ann M) for M = {M}")
    return module_dim(Mbar)


def bhatt_length(F: Filtration, Fs: Sequence[Filtration], n0: int, n: Sequence[int],
                 M: ModuleModel, t: int | None = None) -> int:
    """l(F_{n0} FF_n M / F_{n0+1} FF_n M).

    ``t`` is the m-primary index of F_1; since m^t F_{n0} is inside F_{n0+1}
    it certifies finiteness of every summand count.
    """
    if F.dim != M.dim or any(G.dim != M.dim for G in Fs):
        raise DimensionMismatch("filtrations and module live in different dimensions")
    if t is None:
        t = m_index(F)
    if M.is_zero:
        return 0
    G = product_term(Fs, n)
    P1 = product(term(F, n0), G)
    P2 = product(term(F, n0 + 1), G)
    return sum(count_ideal_difference(P1, P2, Q, t=t) for Q in M.summands)


def local_length_at_min_prime(M: ModuleModel, p: PrimeSupport) -> int:
    """l(M_p) for a minimal prime p of Ann M."""
    if p not in M.min_primes:
        raise NotMinimalPrime(f"{p} is not a minimal prime of Ann M for M = {M}")
    total = 0
    for Q in M.summands:
        if not ideal_in_prime(Q, p):
            continue  # some generator becomes a unit in A_p
        if not p.vars:
            total += 1  # Q = 0 and A localized at (0) is a field
            continue
        total += colength(project(Q, sorted(p.vars)))
    return total


def rank(M: ModuleModel) -> int:
    return sum(1 for Q in M.summands if Q.is_zero)


def ht_positive(I: MonomialIdeal, M: ModuleModel) -> bool:
    """ht (I + Ann M)/Ann M > 0, i.e. I avoids every minimal prime of Ann M."""
    if M.is_zero:
        raise ZeroModuleError("height condition on the zero module")
    return not any(ideal_in_prime(I, p) for p in M.min_primes)
