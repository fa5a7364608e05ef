"""Brute-force reference routines used to freeze expected values.

Nothing here imports the package under test.  Ideals are plain lists of
exponent tuples and every quantity is obtained by direct enumeration of
monomials in a box, so the routines are slow but easy to audit.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache


def divides(g, a):
    return all(x <= y for x, y in zip(g, a))


def member(gens, a):
    return any(divides(g, a) for g in gens)


def box(bound, d):
    return itertools.product(range(bound + 1), repeat=d)


def power_member(gens, n, a):
    """Whether x^a lies in I^n, by recursive splitting over generators."""
    gens = tuple(tuple(g) for g in gens)

    @lru_cache(maxsize=None)
    def rec(a, n):
        if n == 0:
            return True
        for g in gens:
            if divides(g, a):
                if rec(tuple(x - y for x, y in zip(a, g)), n - 1):
                    return True
        return False

    return rec(tuple(a), n)


def product_member(ideal_powers, a):
    """x^a in I_1^{n_1} ... I_r^{n_r}; ideal_powers is a list of (gens, n)."""
    flat = []
    for gens, n in ideal_powers:
        flat.extend([tuple(tuple(g) for g in gens)] * n)
    flat = tuple(flat)

    @lru_cache(maxsize=None)
    def rec(a, i):
        if i == len(flat):
            return True
        for g in flat[i]:
            if divides(g, a):
                if rec(tuple(x - y for x, y in zip(a, g)), i + 1):
                    return True
        return False

    return rec(tuple(a), 0)


def colength(member_fn, d, bound):
    """Number of monomials in the box [0, bound]^d failing member_fn."""
    return sum(1 for a in box(bound, d) if not member_fn(a))


def hilbert_samuel_differences(gens, d, nmax, bound):
    """l(A/I^n) for n=0..nmax by enumeration, and its d-th differences."""
    lengths = [colength(lambda a, n=n: power_member(gens, n, a), d, bound)
               for n in range(nmax + 1)]
    diffs = lengths
    for _ in range(d):
        diffs = [y - x for x, y in zip(diffs, diffs[1:])]
    return lengths, diffs


def lower_hull_2d(points):
    """Vertices of the Newton polygon boundary of points in N^2."""
    pts = sorted(set(tuple(p) for p in points))
    # keep only points not dominated
    nd = [p for p in pts if not any(q != p and divides(q, p) for q in pts)]
    nd.sort()
    hull = []
    for p in nd:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            cross = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_covolume_2d(points):
    """Area of the orthant minus the Newton polygon, for an m-primary ideal."""
    hull = lower_hull_2d(points)
    assert hull[0][0] == 0 and hull[-1][1] == 0, "not m-primary"
    area = Fraction(0)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        area += Fraction((x2 - x1) * (y1 + y2), 2)
    return area


def samuel_2d(points):
    return 2 * newton_covolume_2d(points)


def product_gens(a, b):
    return [tuple(x + y for x, y in zip(g, h)) for g in a for h in b]


def mixed_covolume_2d(i_gens, j_gens):
    """e(I|J) = (e(IJ) - e(I) - e(J)) / 2 from Newton covolumes."""
    e_ij = samuel_2d(product_gens(i_gens, j_gens))
    return (e_ij - samuel_2d(i_gens) - samuel_2d(j_gens)) / 2


def forward_difference(values, order):
    for _ in range(order):
        values = [y - x for x, y in zip(values, values[1:])]
    return values


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def newton_covolume_3d(points):
    """Covolume of the Newton polyhedron of an m-primary ideal in three variables.

    Brute force over generator triples: every compact facet lies on a plane
    with positive normal supporting all generators.  The complement is the
    union of cones from the origin over those facets.
    """
    pts = sorted(set(map(tuple, points)))
    sub = lambda a, b: tuple(x - y for x, y in zip(a, b))
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    seen, total = set(), Fraction(0)
    for a, b, c in itertools.combinations(pts, 3):
        nrm = _cross(sub(b, a), sub(c, a))
        if nrm == (0, 0, 0):
            continue
        if sum(nrm) < 0:
            nrm = tuple(-x for x in nrm)
        if min(nrm) <= 0:
            continue
        h = dot(nrm, a)
        if any(dot(nrm, p) < h for p in pts):
            continue
        face = tuple(p for p in pts if dot(nrm, p) == h)
        if face in seen:
            continue
        seen.add(face)
        # order the face polygon by angle around its centroid in the plane
        u = sub(face[1], face[0])
        w = _cross(nrm, u)
        cen = [Fraction(sum(p[i] for p in face), len(face)) for i in range(3)]
        ang = lambda p: math.atan2(float(dot(w, [x - y for x, y in zip(p, cen)])),
                                   float(dot(u, [x - y for x, y in zip(p, cen)])))
        ring = sorted(face, key=ang)
        for i in range(1, len(ring) - 1):
            p, q, r = ring[0], ring[i], ring[i + 1]
            total += Fraction(abs(dot(p, _cross(q, r))), 6)
    return total
