"""Newton polyhedra of monomial ideals and integral closures of their powers.

NP(I) = conv(exponents of generators) + R^d_{>=0}.  A monomial x^a lies in
the integral closure of I^n exactly when a lies in n * NP(I), so one facet
description serves every power.

The facets come from Fourier-Motzkin elimination of the convex weights in

    a = sum_j lam_j v_j + r,   sum_j lam_j = 1,   lam >= 0,  r >= 0

carried out over the integers (every combination step is an integer linear
combination, so gcd normalization keeps rows exact and canonical).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import InputError
from .monomial import INF, MonomialIdeal, _as_exponent, _from_grid, unit_ideal


@dataclass(frozen=True)
class FacetSystem:
    """Inequalities <w, a> >= c with primitive nonnegative integer w and c > 0.

    The coordinate constraints a_i >= 0 are implicit.
    """

    dim: int
    inequalities: tuple

    def __str__(self):
        rows = []
        for w, c in self.inequalities:
            lhs = " + ".join(f"{wi}*a{i + 1}" if wi != 1 else f"a{i + 1}"
                             for i, wi in enumerate(w) if wi)
            rows.append(f"{lhs} >= {c}")
        return "{" + "; ".join(rows) + "}"


def _normalize(row: tuple) -> tuple:
    g = 0
    for v in row:
        g = gcd(g, v)
    if g > 1:
        row = tuple(v // g for v in row)
    return row


def _rank(rows: list) -> int:
    """Exact rank of an integer matrix by fraction-free elimination."""
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [p[col] * x - f * y for x, y in zip(mat[i], p)]
        rank += 1
    return rank


def _fourier_motzkin(vertices: list, d: int) -> set:
    """Valid inequalities (w, c) for NP after eliminating the convex weights."""
    k = len(vertices)
    last = vertices[-1]
    nlam = k - 1
    # row layout: (alpha_1..alpha_d, beta_1..beta_nlam, gamma) for
    # alpha.a + beta.lam + gamma >= 0
    rows = []
    for j in range(nlam):
        rows.append(((0,) * d + tuple(int(i == j) for i in range(nlam)) + (0,), frozenset([j])))
    rows.append(((0,) * d + (-1,) * nlam + (1,), frozenset([nlam])))
    for i in range(d):
        alpha = tuple(int(t == i) for t in range(d))
        beta = tuple(-(vertices[j][i] - last[i]) for j in range(nlam))
        rows.append((alpha + beta + (-last[i],), frozenset([k + i])))

    for step in range(nlam):
        col = d + step
        pos, neg, keep = [], [], {}
        for r, hist in rows:
            if r[col] > 0:
                pos.append((r, hist))
            elif r[col] < 0:
                neg.append((r, hist))
            else:
                keep.setdefault(_normalize(r), hist)
        for rp, hp in pos:
            for rn, hn in neg:
                hist = hp | hn
                # Chernikov: a non-redundant row combines at most step+2 originals
                if len(hist) > step + 2:
                    continue
                a, b = rp[col], -rn[col]
                r = _normalize(tuple(b * x + a * y for x, y in zip(rp, rn)))
                if r not in keep or len(hist) < len(keep[r]):
                    keep[r] = hist
        rows = list(keep.items())

    out = set()
    for r, _ in rows:
        w, gamma = r[:d], r[-1]
        if not any(w):
            if gamma < 0:
                raise AssertionError("Fourier-Motzkin produced an infeasible system")
            continue
        if min(w) < 0:
            raise AssertionError(f"unexpected negative normal {w}")
        out.add((w, -gamma))
    return out


def _is_facet(w: tuple, c: int, vertices: list, d: int) -> bool:
    tight = [v for v in vertices if sum(x * y for x, y in zip(w, v)) == c]
    if not tight:
        return False
    v0 = tight[0]
    dirs = [tuple(x - y for x, y in zip(v, v0)) for v in tight[1:]]
    dirs += [tuple(int(t == i) for t in range(d)) for i in range(d) if w[i] == 0]
    if not dirs:
        return d == 1
    return _rank(dirs) == d - 1


@lru_cache(maxsize=512)
def facet_system(I: MonomialIdeal) -> FacetSystem:
    """Irredundant inequality description of the Newton polyhedron of I."""
    if I.is_zero or I.is_unit:
        raise InputError(f"Newton polyhedron needs a proper nonzero ideal, got {I}")
    d = I.dim
    vertices = [tuple(g) for g in I.gens]
    if len(vertices) == 1:
        v = vertices[0]
        ineqs = [(tuple(int(t == i) for t in range(d)), v[i]) for i in range(d) if v[i] > 0]
        return FacetSystem(d, tuple(sorted(ineqs)))
    candidates = _fourier_motzkin(vertices, d)
    facets = [(w, c) for w, c in candidates if c > 0 and _is_facet(w, c, vertices, d)]
    return FacetSystem(d, tuple(sorted(set(facets))))


def member_scaled(fs: FacetSystem, n: int, a) -> bool:
    """Whether a lies in n * NP, i.e. x^a is integral over I^n."""
    a = _as_exponent(a, fs.dim)
    if n < 1:
        raise InputError("scale must be positive")
    return all(sum(x * y for x, y in zip(w, a)) >= n * c for w, c in fs.inequalities)


def integral_closure_power(I: MonomialIdeal, n: int) -> MonomialIdeal:
    """Minimal generators of the integral closure of I^n.

    Candidates are restricted to a_i <= n * max_i(I): if a_i exceeds that, a
    dominates n*p + e_i for some p in the convex hull, so a - e_i is still in
    n * NP and a is not minimal.  The height grid over the first d-1
    coordinates is computed directly from the facets.
    """
    if n == 0:
        return unit_ideal(I.dim)
    if n < 0:
        raise InputError("negative power")
    fs = facet_system(I)
    d = I.dim
    shape = tuple(n * c + 1 for c in I.max_coords()[:-1])
    coords = np.indices(shape, dtype=np.int64) if d > 1 else np.zeros((0,), dtype=np.int64)
    h = np.zeros(shape, dtype=np.int64)
    for w, c in fs.inequalities:
        rhs = np.full(shape, n * c, dtype=np.int64)
        for i in range(d - 1):
            if w[i]:
                rhs = rhs - w[i] * coords[i]
        if w[-1] > 0:
            h = np.maximum(h, -((-rhs) // w[-1]))
        else:
            h = np.where(rhs > 0, INF, h)
    return _from_grid(d, h)


def is_integrally_closed(I: MonomialIdeal) -> bool:
    return integral_closure_power(I, 1) == I

