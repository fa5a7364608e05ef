"""Bhattacharya functions and mixed multiplicities.

For an m-primary good filtration F, good filtrations FF = F_1..F_s and a
module M, B(n0, n) = l(F_{n0} FF_n M / F_{n0+1} FF_n M) agrees with a
polynomial of total degree q-1 for all large (n0, n), where
q = dim M/0_M:I^infinity and I = (F_1)_1 ... (F_s)_1.  Writing its top form
as sum e_(k0,k) n0^k0 n^k / (k0! k!), the mixed multiplicity e_(k0,k) is the
forward difference Delta_{n0}^{k0} Delta_n^k B on the polynomial range: a
difference of total order q-1 kills every other monomial of degree <= q-1.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .errors import (InfiniteLength, InputError, InvalidWindow, NotMPrimary,
                     StabilizationError)
from .filtration import (DEFAULT_STABILIZATION_BOUND, Filtration,
                         first_term_product, is_m_primary_filtration, m_index,
                         stabilization_index)
from .module import ModuleModel, bhatt_length, q_value


class BhattacharyaFunction:
    """Memoized B(n0, n; F, FF; M) with the data needed to read it."""

    def __init__(self, F: Filtration, Fs: Sequence[Filtration], M: ModuleModel,
                 t_max: int | None = None):
        if not Fs:
            raise InputError("at least one filtration FF is required")
        if not is_m_primary_filtration(F):
            raise NotMPrimary(f"distinguished filtration {F} is not m-primary")
        self.F = F
        self.Fs = tuple(Fs)
        self.M = M
        self.s = len(self.Fs)
        self.t = m_index(F)
        if t_max is not None and self.t > t_max:
            raise InfiniteLength(f"finiteness certificate m^{self.t} exceeds t_max = {t_max}")
        self.I = first_term_product(self.Fs)
        self.q = q_value(M, self.I)
        self._values: dict = {}

    def __call__(self, point: Sequence[int]) -> int:
        point = tuple(int(x) for x in point)
        v = self._values.get(point)
        if v is None:
            v = bhatt_length(self.F, self.Fs, point[0], point[1:], self.M, t=self.t)
            self._values[point] = v
        return v

    def fill(self, points, workers: int = 1) -> None:
        todo = [p for p in points if tuple(p) not in self._values]
        if workers > 1 and len(todo) > 1:
            with ThreadPoolExecutor(workers) as pool:
                vals = list(pool.map(self, todo))
        else:
            vals = [self(p) for p in todo]
        for p, v in zip(todo, vals):
            self._values[tuple(p)] = v

    def difference(self, base: Sequence[int], orders: Sequence[int]) -> int:
        """Delta^orders B evaluated at base (iterated forward differences)."""
        total = 0
        top = sum(orders)
        for j in itertools.product(*[range(o + 1) for o in orders]):
            coef = 1
            for o, ji in zip(orders, j):
                coef *= comb(o, ji)
            sign = -1 if (top - sum(j)) % 2 else 1
            total += sign * coef * self(tuple(b + ji for b, ji in zip(base, j)))
        return total


def mixed_types(q: int, s: int) -> list:
    """All (k0, k_1, ..., k_s) with k0 + |k| = q - 1, largest k0 first."""
    return sorted((t for t in itertools.product(range(q), repeat=s + 1) if sum(t) == q - 1),
                  reverse=True)


@dataclass(frozen=True)
class GridSample:
    base: tuple
    window: int
    values: np.ndarray  # object array of Python ints, shape (window,)*(s+1)


def sample_grid(F: Filtration, Fs: Sequence[Filtration], M: ModuleModel,
                base: Sequence[int], w: int, workers: int = 1,
                func: BhattacharyaFunction | None = None) -> GridSample:
    base = tuple(int(b) for b in base)
    if w < 1:
        raise InvalidWindow(f"window edge must be positive, got {w}")
    B = func if func is not None else BhattacharyaFunction(F, Fs, M)
    if len(base) != B.s + 1:
        raise InputError(f"base point needs {B.s + 1} coordinates")
    offsets = list(itertools.product(range(w), repeat=B.s + 1))
    points = [tuple(b + o for b, o in zip(base, off)) for off in offsets]
    B.fill(points, workers=workers)
    values = np.empty((w,) * (B.s + 1), dtype=object)
    for off, p in zip(offsets, points):
        values[off] = B(p)
    return GridSample(base, w, values)


def _diff(values: np.ndarray, orders: Sequence[int]) -> np.ndarray:
    out = values
    for axis, o in enumerate(orders):
        if o:
            out = np.diff(out, n=o, axis=axis)
    return out


def detect_degree(G: GridSample, q: int) -> bool:
    """True iff G is exactly a polynomial of total degree q-1 on the window."""
    if G.window < q + 2:
        raise InvalidWindow(f"window {G.window} too small for degree check with q={q}")
    nd = G.values.ndim
    for alpha in itertools.product(range(q + 1), repeat=nd):
        if sum(alpha) == q and any(v != 0 for v in _diff(G.values, alpha).flat):
            return False
    nonzero = False
    for alpha in itertools.product(range(q), repeat=nd):
        if sum(alpha) != q - 1:
            continue
        flat = list(_diff(G.values, alpha).flat)
        if any(v != flat[0] for v in flat):
            return False
        nonzero = nonzero or flat[0] != 0
    return nonzero


@dataclass(frozen=True)
class MixedMultiplicityTable:
    q: int
    entries: dict
    provenance: dict = field(default_factory=dict, compare=False)

    def __getitem__(self, key):
        return self.entries[tuple(key)]

    def total(self) -> int:
        return sum(self.entries.values())

    def to_dict(self) -> dict:
        return {"q": self.q,
                "entries": [{"type": list(k), "value": v} for k, v in self.entries.items()],
                "provenance": self.provenance}


@dataclass(frozen=True)
class Config:
    stabilization_bound: int = DEFAULT_STABILIZATION_BOUND
    window: int | None = None
    workers: int = 1
    t_max: int | None = None
    n_max: int | None = None

    def to_dict(self) -> dict:
        return {"stabilization_bound": self.stabilization_bound, "window": self.window,
                "workers": self.workers, "t_max": self.t_max, "n_max": self.n_max}


def stabilization_data(F: Filtration, Fs: Sequence[Filtration], bound: int) -> list:
    return [stabilization_index(G, bound) for G in (F, *Fs)]


def differences_at(B: BhattacharyaFunction, base: int, types: list) -> dict:
    point = (base,) * (B.s + 1)
    pts = {tuple(base + j for j in off)
           for t in types for off in itertools.product(*[range(o + 1) for o in t])}
    B.fill(sorted(pts))
    return {t: B.difference(point, t) for t in types}


def confirm_run(q: int) -> int:
    """Number of consecutive uniform bases that must agree.

    Two agreeing bases are not enough: a Hilbert-Samuel function of a
    non-normal ideal can sit on a plateau one below its final top
    difference for several steps.
    """
    return q + 2


def certify_from(B: BhattacharyaFunction, start: int, cap: int, run: int) -> tuple:
    """First b in [start, cap] whose differences agree on b, ..., b+run-1."""
    types = mixed_types(B.q, B.s)
    b = start
    vals = [differences_at(B, b, types)]
    while True:
        if len(vals) == run:
            return b, vals[0]
        nxt = differences_at(B, b + len(vals), types)
        if nxt == vals[0]:
            vals.append(nxt)
            continue
        # restart the run at the first disagreeing base
        b += len(vals)
        if b > cap:
            raise StabilizationError(
                f"differences did not stabilize for a base between {start} and {cap}")
        vals = [nxt]


def certified_base(B: BhattacharyaFunction, bound: int) -> tuple:
    """(base, c_star, indices, diffs) for the first certified uniform base."""
    indices = stabilization_data(B.F, B.Fs, bound)
    c_star = max(indices)
    q = B.q
    base, diffs = certify_from(B, c_star + q + 1, c_star + 4 * q + 8, confirm_run(q))
    return base, c_star, indices, diffs


def mixed_table(F: Filtration, Fs: Sequence[Filtration], M: ModuleModel,
                config: Config = Config(), func: BhattacharyaFunction | None = None
                ) -> MixedMultiplicityTable:
    """Every mixed multiplicity e(F^[k0+1], FF^[k]; M) with k0 + |k| = q - 1."""
    B = func if func is not None else BhattacharyaFunction(F, Fs, M, config.t_max)
    base, c_star, indices, diffs = certified_base(B, config.stabilization_bound)
    if any(v < 0 for v in diffs.values()) or not any(diffs.values()):
        raise AssertionError(f"extracted mixed multiplicities {diffs} violate positivity")
    prov = {
        "base": base,
        "confirm_run": confirm_run(B.q),
        "c_star": c_star,
        "stabilization_indices": indices,
        "stabilization_bound": config.stabilization_bound,
        "m_primary_index": B.t,
        "q": B.q,
    }
    return MixedMultiplicityTable(B.q, dict(diffs), prov)


def table_at_base(B: BhattacharyaFunction, base: int) -> dict:
    """Raw top-order differences at a uniform base (no certification)."""
    return differences_at(B, base, mixed_types(B.q, B.s))


def mixed_multiplicity(F: Filtration, Fs: Sequence[Filtration], M: ModuleModel,
                       k0: int, k: Sequence[int], config: Config = Config()) -> int:
    table = mixed_table(F, Fs, M, config)
    key = (int(k0), *[int(x) for x in k])
    if len(key) != len(Fs) + 1:
        raise InputError(f"type {key} does not match {len(Fs)} filtrations")
    if sum(key) != table.q - 1:
        raise InputError(f"type {key} must have total degree q-1 = {table.q - 1}")
    return table[key]


def degree_check(F: Filtration, Fs: Sequence[Filtration], M: ModuleModel,
                 config: Config = Config()) -> tuple:
    """Sample a window at the certified base and test the degree law.

    Returns (passed, q, grid).
    """
    B = BhattacharyaFunction(F, Fs, M, config.t_max)
    base, *_ = certified_base(B, config.stabilization_bound)
    w = config.window or B.q + 2
    G = sample_grid(F, Fs, M, (base,) * (B.s + 1), w, workers=config.workers, func=B)
    return detect_degree(G, B.q), B.q, G
