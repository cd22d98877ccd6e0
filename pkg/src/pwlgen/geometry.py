"""Exact rational polyhedral primitives.

Everything here works on :class:`fractions.Fraction` and never touches floating
point.  Vertex enumeration uses the double description method on the
homogenized cone with integer ray arithmetic, which keeps the entries small and
the adjacency tests cheap (zero sets are stored as int bitmasks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from pwlgen.errors import (
    DegeneratePoint,
    DimensionMismatch,
    EmptyDomain,
    EmptyPolytope,
    UnboundedPolytope,
)

Rational = Fraction
Vector = tuple[Fraction, ...]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction, int or decimal string")
    return Fraction(value)


def _vec(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


# --------------------------------------------------------------------------
# Linear algebra over the rationals


def rref(matrix: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [[as_fraction(x) for x in row] for row in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix: Sequence[Sequence]) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : Mx = 0}; basis vector j has free variable j set to one."""
    if not matrix:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    rows, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def primitive(vector: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector in its direction."""
    fr = [as_fraction(x) for x in vector]
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def canonical_normal(vector: Sequence) -> tuple[int, ...]:
    """Primitive integer vector with a positive leading nonzero entry."""
    v = primitive(vector)
    lead = next((x for x in v if x != 0), 0)
    return tuple(-x for x in v) if lead < 0 else v


def _affine_solution(equalities, n: int) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Return (x0, N) with {x : Ax = b} = {x0 + N t}; raises EmptyPolytope."""
    if not equalities:
        return [Fraction(0)] * n, nullspace([], n)
    aug = [list(a) + [b] for a, b in equalities]
    rows, pivots = rref(aug)
    if n in pivots:
        raise EmptyPolytope("equality system is inconsistent")
    x0 = [Fraction(0)] * n
    for row, p in zip(rows, pivots):
        x0[p] = row[n]
    return x0, nullspace([row[:n] for row in rows], n)


# --------------------------------------------------------------------------
# Polytopes


@dataclass(frozen=True)
class HPolytope:
    """{x : A_eq x = b_eq, A x <= b} over the rationals."""

    dimension: int
    equalities: tuple[tuple[Vector, Fraction], ...] = ()
    inequalities: tuple[tuple[Vector, Fraction], ...] = ()

    def __post_init__(self):
        for name in ("equalities", "inequalities"):
            rows = tuple((_vec(a), as_fraction(b)) for a, b in getattr(self, name))
            for a, _ in rows:
                if len(a) != self.dimension:
                    raise DimensionMismatch(
                        f"row of length {len(a)} in a polytope of dimension {self.dimension}"
                    )
            object.__setattr__(self, name, rows)

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) == b for a, b in self.equalities) and all(
            dot(a, x) <= b for a, b in self.inequalities
        )

    def with_rows(self, equalities=(), inequalities=()) -> "HPolytope":
        return HPolytope(
            self.dimension,
            self.equalities + tuple(equalities),
            self.inequalities + tuple(inequalities),
        )


class _Lineality(Exception):
    def __init__(self, directions):
        self.directions = directions


def _extreme_rays(rows: list[tuple[int, ...]], m: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {x in R^m : row . x <= 0 for all rows}.

    Raises _Lineality when the rows do not have rank m.
    """
    # pick a row basis greedily
    basis_idx: list[int] = []
    echelon: list[list[Fraction]] = []
    pivcols: list[int] = []
    for i, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for e, pc in zip(echelon, pivcols):
            if v[pc] != 0:
                f = v[pc] / e[pc]
                v = [x - f * y for x, y in zip(v, e)]
        pc = next((c for c in range(m) if v[c] != 0), None)
        if pc is None:
            continue
        echelon.append(v)
        pivcols.append(pc)
        basis_idx.append(i)
        if len(basis_idx) == m:
            break
    if len(basis_idx) < m:
        raise _Lineality(nullspace(rows, m))

    # columns of -B^{-1} generate {x : Bx <= 0}
    B = [[Fraction(x) for x in rows[i]] for i in basis_idx]
    aug = [B[i] + [Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    red, _ = rref(aug)
    inv = [row[m:] for row in red]
    rays: list[tuple[int, ...]] = []
    masks: list[int] = []
    full = 0
    for i in basis_idx:
        full |= 1 << i
    for j in range(m):
        rays.append(primitive([-inv[i][j] for i in range(m)]))
        masks.append(full & ~(1 << basis_idx[j]))

    chosen = set(basis_idx)
    remaining = sorted((i for i in range(len(rows)) if i not in chosen), key=lambda i: rows[i])
    need = m - 2
    for i in remaining:
        a = rows[i]
        bit = 1 << i
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        if not pos:
            masks = [mk | bit if v == 0 else mk for mk, v in zip(masks, vals)]
            continue
        neg = [k for k, v in enumerate(vals) if v < 0]
        new_rays: list[tuple[int, ...]] = []
        new_masks: list[int] = []
        for p in pos:
            mp = masks[p]
            for q in neg:
                z = mp & masks[q]
                if z.bit_count() < need:
                    continue
                hits = 0
                for mk in masks:
                    if mk & z == z:
                        hits += 1
                        if hits > 2:
                            break
                if hits > 2:
                    continue
                vp, vq = vals[p], vals[q]
                rp, rq = rays[p], rays[q]
                new = [vp * y - vq * x for x, y in zip(rp, rq)]
                g = 0
                for x in new:
                    g = math.gcd(g, x)
                new_rays.append(tuple(x // g for x in new))
                new_masks.append(z | bit)
        keep_rays, keep_masks = [], []
        for k, v in enumerate(vals):
            if v < 0:
                keep_rays.append(rays[k])
                keep_masks.append(masks[k])
            elif v == 0:
                keep_rays.append(rays[k])
                keep_masks.append(masks[k] | bit)
        rays = keep_rays + new_rays
        masks = keep_masks + new_masks
    return rays


def enumerate_vertices(P: HPolytope) -> set[Vector]:
    """All extreme points of a bounded, nonempty polytope, exactly."""
    n = P.dimension
    x0, N = _affine_solution(P.equalities, n)
    k = len(N)
    reduced: list[tuple[list[Fraction], Fraction]] = []
    for a, b in P.inequalities:
        coef = [dot(a, col) for col in N]
        rhs = b - dot(a, x0)
        if all(c == 0 for c in coef):
            if rhs < 0:
                raise EmptyPolytope("constant inequality violated")
            continue
        reduced.append((coef, rhs))
    if k == 0:
        return {tuple(x0)}

    cone_rows = sorted({primitive(coef + [-rhs]) for coef, rhs in reduced})
    cone_rows.append(tuple([0] * k + [-1]))
    try:
        rays = _extreme_rays(cone_rows, k + 1)
    except _Lineality as lin:
        dirs = [d[:k] for d in lin.directions]
        sub = HPolytope(k, tuple((d, 0) for d in dirs), tuple(reduced))
        enumerate_vertices(sub)  # raises EmptyPolytope if the slice is empty
        raise UnboundedPolytope("polytope contains a line") from None

    points = [r for r in rays if r[-1] > 0]
    if not points:
        raise EmptyPolytope("no feasible point")
    if any(r[-1] == 0 for r in rays):
        raise UnboundedPolytope("recession direction found")
    out = set()
    for r in points:
        s = r[-1]
        t = [Fraction(x, s) for x in r[:-1]]
        out.add(tuple(x0[i] + sum(t[j] * N[j][i] for j in range(k)) for i in range(n)))
    return out


# --------------------------------------------------------------------------
# Feasibility and hulls


def _phase_one_feasible(A: list[list[Fraction]], b: list[Fraction]) -> bool:
    """Is {x >= 0 : Ax = b} nonempty?  Exact simplex with Bland's rule."""
    m = len(A)
    if m == 0:
        return True
    n = len(A[0])
    rows = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        rows.append([sign * x for x in A[i]] + [Fraction(int(i == j)) for j in range(m)] + [sign * b[i]])
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimize sum of artificials, expressed in reduced costs
    cost = [Fraction(0)] * (width + 1)
    for row in rows:
        for j in range(n):
            cost[j] -= row[j]
        cost[width] -= row[width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[width] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            break  # cannot happen for phase one; objective is bounded below
        piv = rows[leave][enter]
        rows[leave] = [x / piv for x in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[leave])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, rows[leave])]
        basis[leave] = enter
    return cost[width] == 0


def point_in_hull(points: Sequence[Sequence], p: Sequence) -> bool:
    """True iff p is a convex combination of the given points."""
    if not points:
        raise DimensionMismatch("point set is empty")
    dim = len(p)
    if any(len(q) != dim for q in points):
        raise DimensionMismatch("points and query have different dimensions")
    pts = [_vec(q) for q in points]
    A = [[q[i] for q in pts] for i in range(dim)] + [[Fraction(1)] * len(pts)]
    b = list(_vec(p)) + [Fraction(1)]
    return _phase_one_feasible(A, b)


def hull_description(points: Sequence[Sequence]):
    """Equalities and facet inequalities of Conv(points), as integer rows.

    Returns (equalities, facets) where each entry is (normal, rhs) with
    normal . x == rhs or normal . x <= rhs respectively.
    """
    pts = [_vec(q) for q in points]
    dim = len(pts[0])
    origin = pts[0]
    diffs = [[a - b for a, b in zip(q, origin)] for q in pts[1:]]
    lin_rows, _ = rref(diffs) if diffs else ([], [])
    lin = [row for row in lin_rows]
    equalities = []
    for w in nullspace(lin, dim) if lin else nullspace([], dim):
        w = primitive(w)
        equalities.append((w, dot(w, origin)))
    k = len(lin)
    if k == 0:
        return equalities, []
    # a = sum alpha_j lin_j ; cone rows: (lin_j . p)_j alpha - beta <= 0
    cone = sorted({primitive([dot(l, q) for l in lin] + [-1]) for q in pts})
    facets = []
    for ray in _extreme_rays(cone, k + 1):
        alpha, beta = ray[:k], ray[k]
        if all(x == 0 for x in alpha):
            continue
        normal = [sum(alpha[j] * lin[j][i] for j in range(k)) for i in range(dim)]
        scaled = primitive(list(normal) + [-beta])
        facets.append((scaled[:dim], Fraction(-scaled[dim])))
    return equalities, facets


# --------------------------------------------------------------------------
# Plane geometry


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class Polygon2D:
    """Convex polygon in canonical form: counter-clockwise, starting at the
    lexicographically smallest vertex, no collinear vertices.  One or two
    vertices denote a degenerate point or segment."""

    vertices: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def hull(cls, points: Iterable[Sequence]) -> "Polygon2D":
        pts = sorted({(as_fraction(p[0]), as_fraction(p[1])) for p in points})
        if not pts:
            raise EmptyPolytope("no points to take the hull of")
        if len(pts) <= 2:
            return cls(tuple(pts))
        lower: list = []
        for p in pts:
            while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
                lower.pop()
            lower.append(p)
        upper: list = []
        for p in reversed(pts):
            while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
                upper.pop()
            upper.append(p)
        ring = lower[:-1] + upper[:-1]
        if len(ring) == 2 and ring[0] == ring[1]:
            ring = ring[:1]
        return cls(tuple(ring))

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    @property
    def x_range(self) -> tuple[Fraction, Fraction]:
        xs = [v[0] for v in self.vertices]
        return min(xs), max(xs)


def project_to_plane(P: HPolytope, rows: Sequence[Sequence], offset: Sequence = (0, 0)) -> Polygon2D:
    """Image of P under x -> (rows[0] . x + offset[0], rows[1] . x + offset[1])."""
    if len(rows) != 2 or any(len(r) != P.dimension for r in rows):
        raise DimensionMismatch("projection map must be 2 x dimension")
    rx, rz = _vec(rows[0]), _vec(rows[1])
    ox, oz = _vec(offset)
    verts = enumerate_vertices(P)
    return Polygon2D.hull((dot(rx, v) + ox, dot(rz, v) + oz) for v in verts)


def polygon_area(poly: Polygon2D) -> Fraction:
    if poly.degenerate:
        return Fraction(0)
    vs = poly.vertices
    twice = sum(vs[i][0] * vs[i - 1][1] - vs[i - 1][0] * vs[i][1] for i in range(len(vs)))
    return abs(Fraction(twice, 2))


@dataclass(frozen=True)
class LowerEnvelope:
    """Continuous piecewise linear function given by its values at breakpoints."""

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    pieces: tuple[tuple[Fraction, Fraction], ...] = field(init=False)

    def __post_init__(self):
        pieces = []
        for (x0, z0), (x1, z1) in zip(
            zip(self.breakpoints, self.values), zip(self.breakpoints[1:], self.values[1:])
        ):
            slope = (z1 - z0) / (x1 - x0)
            pieces.append((slope, z0 - slope * x0))
        object.__setattr__(self, "pieces", tuple(pieces))

    def __call__(self, x) -> Fraction:
        bps = self.breakpoints
        if not bps[0] <= x <= bps[-1]:
            raise ValueError(f"{x} outside [{bps[0]}, {bps[-1]}]")
        for i, (slope, icpt) in enumerate(self.pieces):
            if x <= bps[i + 1]:
                return slope * x + icpt
        return self.values[-1]


def lower_envelope(poly: Polygon2D) -> LowerEnvelope:
    vs = poly.vertices
    if len(vs) == 1:
        raise DegeneratePoint("envelope of a single point")
    # walking counter-clockwise from the lexicographic minimum traces the lower chain
    chain = [vs[0]]
    for v in vs[1:]:
        if v[0] <= chain[-1][0]:
            break
        chain.append(v)
    if len(chain) == 1:
        # vertical segment: zero-width domain
        return LowerEnvelope((vs[0][0],), (min(v[1] for v in vs),))
    return LowerEnvelope(tuple(v[0] for v in chain), tuple(v[1] for v in chain))


def strengthened_proportion(original: Polygon2D, branched: Polygon2D | None, domain) -> Fraction:
    """Share of the domain where the branched lower bound beats the original.

    Where the branched region has no point above x, its bound counts as
    infinite and therefore stronger.
    """
    lo, hi = as_fraction(domain[0]), as_fraction(domain[1])
    if hi <= lo:
        raise EmptyDomain(f"domain [{lo}, {hi}] is empty")
    if branched is None:
        return Fraction(1)
    bx0, bx1 = branched.x_range
    a, b = max(lo, bx0), min(hi, bx1)
    if b <= a:
        return Fraction(1)
    env_o = lower_envelope(original)
    env_b = lower_envelope(branched)
    cuts = sorted({a, b} | {x for x in env_o.breakpoints + env_b.breakpoints if a < x < b})
    stronger = Fraction(0)
    for x0, x1 in zip(cuts, cuts[1:]):
        d0 = env_b(x0) - env_o(x0)
        d1 = env_b(x1) - env_o(x1)
        if d0 > 0 and d1 > 0:
            stronger += x1 - x0
        elif d0 > 0 >= d1:
            stronger += (x1 - x0) * d0 / (d0 - d1)
        elif d1 > 0 >= d0:
            stronger += (x1 - x0) * d1 / (d1 - d0)
    outside = (hi - lo) - (b - a)
    return (stronger + outside) / (hi - lo)


def vertices_by_bases(P: HPolytope) -> set[Vector]:
    """Brute-force vertex enumeration over all row bases.

    Exponential; kept as an independent cross-check for small instances.
    """
    n = P.dimension
    eq = [list(a) for a, _ in P.equalities]
    eq_rhs = [b for _, b in P.equalities]
    base_rank = rank(eq) if eq else 0
    need = n - base_rank
    out = set()
    for combo in combinations(range(len(P.inequalities)), need):
        rows = eq + [list(P.inequalities[i][0]) for i in combo]
        rhs = eq_rhs + [P.inequalities[i][1] for i in combo]
        if rank(rows) != n:
            continue
        red, piv = rref([r + [c] for r, c in zip(rows, rhs)])
        if n in piv:
            continue
        x = [Fraction(0)] * n
        for row, p in zip(red, piv):
            x[p] = row[n]
        if P.contains(x):
            out.add(tuple(x))
    return out
