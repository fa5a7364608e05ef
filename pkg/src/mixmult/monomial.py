"""Monomial ideals in k[x_1, ..., x_d] localized at the maximal ideal.

An ideal is stored by its minimal generators.  Heavy operations (products,
intersections, quotient-length counts) go through the *height grid* of an
ideal: for every a' = (a_1, ..., a_{d-1}) the least a_d with x^a in the
ideal.  The grid is nonincreasing along every axis and constant past the
largest generator coordinate, so a finite box describes the whole ideal.

All exponents live in int64 arrays; anything at or above ``EXP_LIMIT`` is
rejected rather than risk wraparound.  Counts are returned as Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (DimensionMismatch, InfiniteLength, InputError,
                     NotMPrimary, OverflowGuard, UnitIdealError)

INF = np.int64(1 << 60)
EXP_LIMIT = 1 << 40
MAX_GRID_CELLS = 1 << 24

Exponent = tuple  # tuple[int, ...]

_VAR_NAMES = "xyz"


def _var_name(i: int, d: int) -> str:
    return _VAR_NAMES[i] if d <= 3 else f"x{i + 1}"


def format_monomial(a: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(a):
        if e == 1:
            parts.append(_var_name(i, len(a)))
        elif e > 1:
            parts.append(f"{_var_name(i, len(a))}^{e}")
    return "".join(parts) or "1"


def _as_exponent(a, d: int) -> Exponent:
    t = tuple(int(x) for x in a)
    if len(t) != d:
        raise DimensionMismatch(f"exponent {t} has length {len(t)}, expected {d}")
    for x in t:
        if x < 0:
            raise InputError(f"negative exponent in {t}")
        if x >= EXP_LIMIT:
            raise OverflowGuard(f"exponent {x} exceeds {EXP_LIMIT}")
    return t


@dataclass(frozen=True)
class PrimeSupport:
    """The monomial prime generated by the variables with the given 0-based indices."""

    vars: frozenset

    def __str__(self):
        if not self.vars:
            return "(0)"
        return "(" + ",".join(f"x{i + 1}" for i in sorted(self.vars)) + ")"

    def sort_key(self):
        return (len(self.vars), tuple(sorted(self.vars)))


@dataclass(frozen=True)
class MonomialIdeal:
    """Ideal generated by the monomials x^g, g in ``gens``.

    ``gens`` is kept sorted and divisibility-minimal; build instances through
    :func:`minimalize` or :meth:`of` rather than the raw constructor.  An
    empty ``gens`` is the zero ideal, ``((0,)*dim,)`` the unit ideal.
    """

    dim: int
    gens: tuple
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @classmethod
    def of(cls, d: int, gens: Iterable[Sequence[int]]) -> "MonomialIdeal":
        return minimalize(gens, d)

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return self.gens == ((0,) * self.dim,)

    def max_coords(self) -> tuple:
        if not self.gens:
            return (0,) * self.dim
        return tuple(max(col) for col in zip(*self.gens))

    def max_degree(self) -> int:
        return max((sum(g) for g in self.gens), default=0)

    def array(self) -> np.ndarray:
        arr = self._cache.get("array")
        if arr is None:
            arr = np.array(self.gens, dtype=np.int64).reshape(len(self.gens), self.dim)
            self._cache["array"] = arr
        return arr

    def __str__(self):
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(format_monomial(g) for g in reversed(self.gens)) + ")"

    def to_list(self) -> list:
        return [list(g) for g in self.gens]


def zero_ideal(d: int) -> MonomialIdeal:
    return MonomialIdeal(d, ())


def unit_ideal(d: int) -> MonomialIdeal:
    return MonomialIdeal(d, ((0,) * d,))


def maximal_ideal(d: int) -> MonomialIdeal:
    return MonomialIdeal(d, tuple(sorted(tuple(int(i == j) for j in range(d)) for i in range(d))))


def _same_dim(*ideals: MonomialIdeal) -> int:
    d = ideals[0].dim
    for I in ideals[1:]:
        if I.dim != d:
            raise DimensionMismatch(f"ideals live in dimensions {d} and {I.dim}")
    return d


# ---------------------------------------------------------------------------
# height grids

def _natural_shape(I: MonomialIdeal) -> tuple:
    return tuple(c + 1 for c in I.max_coords()[:-1])


def _grid(I: MonomialIdeal) -> np.ndarray:
    h = I._cache.get("grid")
    if h is not None:
        return h
    shape = _natural_shape(I)
    _check_cells(shape)
    h = np.full(shape, INF, dtype=np.int64)
    if I.gens:
        arr = I.array()
        if I.dim == 1:
            h[()] = arr[:, 0].min()
        else:
            np.minimum.at(h, tuple(arr[:, :-1].T), arr[:, -1])
            for ax in range(I.dim - 1):
                np.minimum.accumulate(h, axis=ax, out=h)
    h.setflags(write=False)
    I._cache["grid"] = h
    return h


def _check_cells(shape) -> None:
    cells = 1
    for s in shape:
        cells *= s
    if cells > MAX_GRID_CELLS:
        raise OverflowGuard(f"height grid of shape {shape} exceeds {MAX_GRID_CELLS} cells")


def _grid_on(I: MonomialIdeal, shape: tuple) -> np.ndarray:
    """Height grid of I on the box ``shape`` (cropped or edge-extended)."""
    nat = _grid(I)
    if I.dim == 1:
        return np.array(nat, dtype=np.int64)
    if nat.shape == tuple(shape):
        return nat.copy()
    idx = np.ix_(*[np.minimum(np.arange(s), n - 1) for s, n in zip(shape, nat.shape)])
    return nat[idx]


def _from_grid(d: int, h: np.ndarray) -> MonomialIdeal:
    h = np.minimum(h, INF)
    if d == 1:
        v = int(h[()])
        return MonomialIdeal(1, ((v,),)) if v < INF else zero_ideal(1)
    is_gen = h < INF
    for ax in range(d - 1):
        pred = np.full_like(h, INF)
        src = [slice(None)] * (d - 1)
        dst = [slice(None)] * (d - 1)
        src[ax] = slice(0, -1)
        dst[ax] = slice(1, None)
        pred[tuple(dst)] = h[tuple(src)]
        is_gen &= h < pred
    coords = np.nonzero(is_gen)
    last = h[coords]
    gens = tuple(tuple(int(c) for c in row)
                 for row in zip(*[c.tolist() for c in coords], last.tolist()))
    return MonomialIdeal(d, gens)


# ---------------------------------------------------------------------------
# operations

def _minimalize_pairwise(vecs: list, d: int) -> MonomialIdeal:
    vecs = sorted(set(vecs), key=lambda v: (sum(v), v))
    kept = []
    for v in vecs:
        if not any(all(x <= y for x, y in zip(g, v)) for g in kept):
            kept.append(v)
    return MonomialIdeal(d, tuple(sorted(kept)))


def minimalize(gens: Iterable[Sequence[int]], d: int) -> MonomialIdeal:
    """Divisibility-minimal generating set of the ideal spanned by ``gens``."""
    if d < 1:
        raise InputError("ambient dimension must be at least 1")
    vecs = [_as_exponent(g, d) for g in gens]
    if not vecs:
        return zero_ideal(d)
    if d == 1:
        return MonomialIdeal(1, ((min(v[0] for v in vecs),),))
    if len(vecs) <= 32:
        return _minimalize_pairwise(vecs, d)
    raw = MonomialIdeal(d, tuple(vecs))
    shape = _natural_shape(raw)
    if int(np.prod(shape)) > MAX_GRID_CELLS:
        return _minimalize_pairwise(vecs, d)
    return _from_grid(d, _grid(raw))


def contains_monomial(I: MonomialIdeal, a: Sequence[int]) -> bool:
    a = _as_exponent(a, I.dim)
    return any(all(x <= y for x, y in zip(g, a)) for g in I.gens)


def contains_ideal(big: MonomialIdeal, small: MonomialIdeal) -> bool:
    """Whether ``small`` is a subset of ``big``."""
    _same_dim(big, small)
    if small.is_zero:
        return True
    if big.is_zero:
        return False
    h = _grid(big)
    arr = small.array()
    if big.dim == 1:
        return bool((arr[:, 0] >= h[()]).all())
    idx = tuple(np.minimum(arr[:, i], h.shape[i] - 1) for i in range(big.dim - 1))
    return bool((arr[:, -1] >= h[idx]).all())


def product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(I, J)
    if I.is_zero or J.is_zero:
        return zero_ideal(d)
    if I.is_unit:
        return J
    if J.is_unit:
        return I
    if d == 1:
        return MonomialIdeal(1, ((I.gens[0][0] + J.gens[0][0],),))
    small, big = (I, J) if len(I.gens) <= len(J.gens) else (J, I)
    shape = tuple(a + b + 1 for a, b in zip(I.max_coords()[:-1], J.max_coords()[:-1]))
    if int(np.prod(shape)) > MAX_GRID_CELLS:
        return _minimalize_pairwise(
            [tuple(x + y for x, y in zip(g, h)) for g in I.gens for h in J.gens], d)
    hb = _grid_on(big, shape)
    out = np.full(shape, INF, dtype=np.int64)
    for g in small.gens:
        dst = tuple(slice(gi, None) for gi in g[:-1])
        src = tuple(slice(0, s - gi) for s, gi in zip(shape, g[:-1]))
        np.minimum(out[dst], hb[src] + g[-1], out=out[dst])
    return _from_grid(d, out)


def power(I: MonomialIdeal, n: int) -> MonomialIdeal:
    if n < 0:
        raise InputError("negative power")
    result = unit_ideal(I.dim)
    base = I
    while n:
        if n & 1:
            result = product(result, base)
        n >>= 1
        if n:
            base = product(base, base)
    return result


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(I, J)
    return minimalize(I.gens + J.gens, d)


def _common_shape(*ideals: MonomialIdeal) -> tuple:
    return tuple(max(s) for s in zip(*[_natural_shape(I) for I in ideals]))


def intersect(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(I, J)
    if I.is_zero or J.is_zero:
        return zero_ideal(d)
    if d == 1:
        return MonomialIdeal(1, ((max(I.gens[0][0], J.gens[0][0]),),))
    shape = _common_shape(I, J)
    _check_cells(shape)
    return _from_grid(d, np.maximum(_grid_on(I, shape), _grid_on(J, shape)))


def colon_monomial(Q: MonomialIdeal, g: Sequence[int]) -> MonomialIdeal:
    g = _as_exponent(g, Q.dim)
    return minimalize([tuple(max(hi - gi, 0) for hi, gi in zip(h, g)) for h in Q.gens], Q.dim)


def colon(Q: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """Q : J as the intersection of Q : x^g over generators g of J."""
    _same_dim(Q, J)
    if J.is_zero:
        raise InputError("colon by the zero ideal is undefined here")
    result = None
    for g in J.gens:
        part = colon_monomial(Q, g)
        result = part if result is None else intersect(result, part)
    return result


def saturate(Q: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """Q : J^infinity."""
    cur = Q
    while True:
        nxt = colon(cur, J)
        if nxt == cur:
            return cur
        cur = nxt


def support(g: Sequence[int]) -> frozenset:
    return frozenset(i for i, e in enumerate(g) if e > 0)


def ideal_in_prime(I: MonomialIdeal, p: PrimeSupport) -> bool:
    """I is inside the monomial prime p iff every generator involves a variable of p."""
    return all(support(g) & p.vars for g in I.gens)


def minimal_primes(Q: MonomialIdeal) -> list:
    """Minimal primes of A/Q: the minimal vertex covers of the generator supports."""
    if Q.is_unit:
        raise UnitIdealError("the unit ideal has no minimal primes")
    if Q.is_zero:
        return [PrimeSupport(frozenset())]
    sups = sorted({support(g) for g in Q.gens}, key=len)
    sups = [s for s in sups if not any(t < s for t in sups)]
    found: list = []

    def branch(chosen: frozenset):
        if any(c <= chosen for c in found):
            return
        open_ = [s for s in sups if not (s & chosen)]
        if not open_:
            found[:] = [c for c in found if not chosen <= c]
            found.append(chosen)
            return
        s = min(open_, key=len)
        for v in sorted(s):
            branch(chosen | {v})

    branch(frozenset())
    found = [c for c in found if not any(o < c for o in found)]
    return sorted((PrimeSupport(c) for c in set(found)), key=PrimeSupport.sort_key)


def dim_quotient(Q: MonomialIdeal) -> int:
    """Krull dimension of A/Q."""
    if Q.is_unit:
        raise UnitIdealError("A/Q is the zero module; its dimension is undefined")
    return Q.dim - min(len(p.vars) for p in minimal_primes(Q))


def is_m_primary(I: MonomialIdeal) -> bool:
    if I.is_zero or I.is_unit:
        return False
    pure = set()
    for g in I.gens:
        s = support(g)
        if len(s) == 1:
            pure |= s
    return len(pure) == I.dim


def m_primary_index(I: MonomialIdeal) -> int:
    """Smallest t >= 1 with m^t contained in I."""
    if I.is_zero or I.is_unit:
        raise InputError(f"m_primary_index needs a proper nonzero ideal, got {I}")
    if not is_m_primary(I):
        raise NotMPrimary(f"{I} is not m-primary")
    h = _grid(I)
    if I.dim == 1:
        return int(h[()])
    # socle degree + 1: the top standard monomial of each column is a' + (h-1) e_d
    idx = np.indices(h.shape).sum(axis=0)
    mask = h > 0
    return int((idx[mask] + h[mask] - 1).max()) + 1


def colength(Q: MonomialIdeal) -> int:
    """Number of standard monomials of an m-primary (or unit) ideal."""
    if Q.is_unit:
        return 0
    if not is_m_primary(Q):
        raise NotMPrimary(f"{Q} has infinite colength")
    return _exact_sum(_grid(Q))


def _exact_sum(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    top = int(arr.max())
    if top * arr.size < (1 << 62):
        return int(arr.sum(dtype=np.int64))
    return sum(int(v) for v in arr.ravel())


def default_t_max(*ideals: MonomialIdeal) -> int:
    d = ideals[0].dim
    return max(1, 4 * d * max(I.max_degree() for I in ideals))


def finiteness_certificate(P1: MonomialIdeal, R: MonomialIdeal, t_max: int) -> int:
    """Smallest t <= t_max with m^t * P1 inside R."""
    d = _same_dim(P1, R)
    m = maximal_ideal(d)
    cur = P1
    for t in range(t_max + 1):
        if contains_ideal(R, cur):
            return t
        cur = product(cur, m)
    raise InfiniteLength(f"no t <= {t_max} with m^t {P1} inside {R}")


def count_ideal_difference(P1: MonomialIdeal, P2: MonomialIdeal, Q: MonomialIdeal,
                           t: int | None = None, t_max: int | None = None) -> int:
    """Number of monomials in P1 but in neither P2 nor Q.

    This is the length of P1 M / P2 M for M = A/Q.  ``t`` may be supplied as
    a known certificate (m^t P1 inside P2 + Q); otherwise it is searched up to
    ``t_max``.  Every counted monomial is within distance t-1 of a generator
    of P1, which bounds the box that is scanned.
    """
    d = _same_dim(P1, P2, Q)
    if not contains_ideal(P1, P2):
        raise InputError(f"{P2} is not contained in {P1}")
    if P1.is_zero:
        return 0
    R = ideal_sum(P2, Q)
    if t is None:
        t = finiteness_certificate(P1, R, default_t_max(P1, P2, Q) if t_max is None else t_max)
    if t == 0:
        return 0
    if d == 1:
        h1 = P1.gens[0][0]
        upper = R.gens[0][0] if R.gens else int(INF)
        if upper >= INF:
            raise InfiniteLength(f"{P1} / {P2} + {Q} has infinite length")
        return max(0, upper - h1)
    shape = tuple(c + t for c in P1.max_coords()[:-1])
    _check_cells(shape)
    h1 = _grid_on(P1, shape)
    upper = np.minimum(_grid_on(P2, shape), _grid_on(Q, shape))
    valid = h1 < INF
    if (upper[valid] >= INF).any():
        raise InfiniteLength(f"{P1} / {P2} + {Q} has infinite length")
    diff = np.where(valid, np.maximum(upper - h1, 0), 0)
    return _exact_sum(diff)


def project(Q: MonomialIdeal, variables: Sequence[int]) -> MonomialIdeal:
    """Image of Q after setting the variables outside ``variables`` to 1."""
    variables = sorted(variables)
    if not variables:
        raise InputError("projection onto no variables")
    return minimalize([tuple(g[i] for i in variables) for g in Q.gens], len(variables))

