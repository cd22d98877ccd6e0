"""Grid triangulations and their independent-branching formulations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from pwlgen.errors import InvalidTriangleCover, UnknownMethod
from pwlgen.formulations import (
    LAMBDA_METHODS,
    BicliqueCover,
    Fragment,
    assemble_ib,
    build_sos2,
    lambda_name,
)
from pwlgen.geometry import as_fraction
from pwlgen.model import Constraint, Variable

SWNE = "swne"
SENW = "senw"

Point = tuple[int, int]


@dataclass(frozen=True)
class GridTriangulation:
    """Values on the gridpoints of a d1 x d2 grid plus one diagonal per cell.

    Gridpoints and cells are 1-based: ``values[(i, j)]`` for
    ``1 <= i <= d1 + 1``, ``diag[(i, j)]`` for ``1 <= i <= d1``.
    """

    xbreaks: tuple[Fraction, ...]
    ybreaks: tuple[Fraction, ...]
    values: Mapping[Point, Fraction]
    diag: Mapping[Point, str]

    def __post_init__(self):
        xb = tuple(as_fraction(t) for t in self.xbreaks)
        yb = tuple(as_fraction(t) for t in self.ybreaks)
        for name, seq in (("xbreaks", xb), ("ybreaks", yb)):
            if len(seq) < 2 or any(a >= b for a, b in zip(seq, seq[1:])):
                raise ValueError(f"{name} must be strictly increasing with at least two entries")
        object.__setattr__(self, "xbreaks", xb)
        object.__setattr__(self, "ybreaks", yb)
        d1, d2 = len(xb) - 1, len(yb) - 1
        points = {(i, j) for i in range(1, d1 + 2) for j in range(1, d2 + 2)}
        cells = {(i, j) for i in range(1, d1 + 1) for j in range(1, d2 + 1)}
        if set(self.values) != points:
            raise ValueError("values must be given at every gridpoint")
        if set(self.diag) != cells:
            raise ValueError("every cell needs a diagonal")
        if any(v not in (SWNE, SENW) for v in self.diag.values()):
            raise ValueError("diagonals must be 'swne' or 'senw'")
        object.__setattr__(self, "values", {k: as_fraction(v) for k, v in sorted(self.values.items())})
        object.__setattr__(self, "diag", dict(sorted(self.diag.items())))

    @classmethod
    def uniform(cls, d1: int, d2: int, diag: str | Mapping[Point, str] = SENW, values=None) -> "GridTriangulation":
        """Unit-spaced grid; values default to zero."""
        points = [(i, j) for i in range(1, d1 + 2) for j in range(1, d2 + 2)]
        if isinstance(diag, str):
            diag = {(i, j): diag for i in range(1, d1 + 1) for j in range(1, d2 + 1)}
        vals = values if values is not None else {p: 0 for p in points}
        return cls(tuple(range(d1 + 1)), tuple(range(d2 + 1)), vals, diag)

    @property
    def d1(self) -> int:
        return len(self.xbreaks) - 1

    @property
    def d2(self) -> int:
        return len(self.ybreaks) - 1

    @property
    def points(self) -> list[Point]:
        return [(i, j) for i in range(1, self.d1 + 2) for j in range(1, self.d2 + 2)]

    def coordinates(self, p: Point) -> tuple[Fraction, Fraction, Fraction]:
        i, j = p
        return self.xbreaks[i - 1], self.ybreaks[j - 1], self.values[p]


def cell_triangles(i: int, j: int, diag: str) -> tuple[frozenset, frozenset]:
    if diag == SWNE:
        return (
            frozenset({(i, j), (i + 1, j), (i + 1, j + 1)}),
            frozenset({(i, j), (i, j + 1), (i + 1, j + 1)}),
        )
    return (
        frozenset({(i, j), (i + 1, j), (i, j + 1)}),
        frozenset({(i + 1, j), (i, j + 1), (i + 1, j + 1)}),
    )


def triangles(gt: GridTriangulation) -> list[frozenset]:
    out = []
    for j in range(1, gt.d2 + 1):
        for i in range(1, gt.d1 + 1):
            out.extend(cell_triangles(i, j, gt.diag[(i, j)]))
    return out


def forbidden_pairs(gt: GridTriangulation) -> list[frozenset]:
    """The diagonal of each cell that is not an edge of the triangulation."""
    out = []
    for (i, j), diag in gt.diag.items():
        if diag == SWNE:
            out.append(frozenset({(i + 1, j), (i, j + 1)}))
        else:
            out.append(frozenset({(i, j), (i + 1, j + 1)}))
    return out


def aggregated_sos2_cover(axis: int, base: BicliqueCover, d_other: int) -> BicliqueCover:
    """Lift a cover of one axis to the grid by taking products with the
    full index range of the other axis."""
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    other = range(1, d_other + 2)

    def lift(side):
        if axis == 1:
            return {(u, w) for u in side for w in other}
        return {(w, u) for u in side for w in other}

    ground = lift(base.ground)
    return BicliqueCover(tuple(sorted(ground)), tuple((lift(a), lift(b)) for a, b in base.levels))


def _line_sides(line: list[Point], bad: set[frozenset]) -> tuple[set, set]:
    adj = [p for k, p in enumerate(line)
           if (k > 0 and frozenset({p, line[k - 1]}) in bad)
           or (k + 1 < len(line) and frozenset({p, line[k + 1]}) in bad)]
    a, b = set(), set()
    side = 0
    for k, p in enumerate(adj):
        if k and frozenset({adj[k - 1], p}) in bad:
            side ^= 1
        (a if side == 0 else b).add(p)
    return a, b


def six_stencil_cover(gt: GridTriangulation) -> BicliqueCover:
    """Triangle-selection cover from diagonal and anti-diagonal lines grouped
    by offset mod 3."""
    d1, d2 = gt.d1, gt.d2
    bad = set(forbidden_pairs(gt))
    points = gt.points
    diag_levels = [(set(), set()) for _ in range(3)]
    anti_levels = [(set(), set()) for _ in range(3)]
    for k in range(-d1, d2 + 1):
        line = sorted(p for p in points if p[1] - p[0] == k)
        a, b = _line_sides(line, bad)
        diag_levels[k % 3][0].update(a)
        diag_levels[k % 3][1].update(b)
    for k in range(-d2, d1 + 1):
        line = sorted(p for p in points if d1 + 2 - p[0] - p[1] == k)
        a, b = _line_sides(line, bad)
        anti_levels[k % 3][0].update(a)
        anti_levels[k % 3][1].update(b)
    levels = [lv for lv in diag_levels + anti_levels if lv[0] or lv[1]]
    return BicliqueCover(tuple(points), tuple(levels))


def _aggregate(frag: Fragment, axis: int, gt: GridTriangulation, prefix: str) -> tuple[list, list]:
    """Rewrite an SOS2 fragment over grid multipliers: lam_u becomes the sum
    of the grid multipliers in slice u; other variables get ``prefix``."""
    other = range(1, (gt.d2 if axis == 1 else gt.d1) + 2)
    lam_index = {name: v for name, v in zip(frag.lambdas, frag.ground)}
    mapping = {v.name: prefix + v.name for v in frag.variables if v.name not in lam_index}
    variables = [v.renamed(mapping[v.name]) for v in frag.variables if v.name in mapping]
    rows = []
    for con in frag.constraints:
        if con.name == "simplex":
            continue
        coeffs: dict[str, Fraction] = {}
        for name, c in con.coeffs.items():
            if name in lam_index:
                u = lam_index[name]
                for w in other:
                    point = (u, w) if axis == 1 else (w, u)
                    key = lambda_name(point)
                    coeffs[key] = coeffs.get(key, 0) + c
            else:
                coeffs[mapping[name]] = c
        rows.append(Constraint(coeffs, con.sense, con.rhs, prefix + con.name))
    return variables, rows


def build_bivariate(
    gt: GridTriangulation,
    method_x: str | None,
    method_y: str | None,
    triangle_cover: BicliqueCover,
) -> Fragment:
    """SOS2 formulations on both aggregated axes intersected with an
    independent-branching triangle selection.

    Passing ``None`` for an axis leaves it to ``triangle_cover``, which must
    then be a complete biclique representation of the triangle family.
    """
    from pwlgen.verification import check_biclique_representation

    for m in (method_x, method_y):
        if m is not None and m.lower() not in LAMBDA_METHODS:
            raise UnknownMethod(f"{m!r} is not a multiplier-space SOS2 method")
    tris = triangles(gt)
    relaxed = (method_x is not None or gt.d1 == 1) and (method_y is not None or gt.d2 == 1)
    report = check_biclique_representation(gt.points, tris, triangle_cover, relaxed=relaxed)
    if not report.ok:
        raise InvalidTriangleCover(f"triangle cover rejected: {report.witness}")
    base = assemble_ib(triangle_cover, ground=gt.points)
    variables: list[Variable] = list(base.variables)
    rows: list[Constraint] = list(base.constraints)
    aux = list(base.aux)
    for axis, method, d, prefix in ((1, method_x, gt.d1, "a1_"), (2, method_y, gt.d2, "a2_")):
        if method is None or d == 1:
            continue
        frag = build_sos2(method, d)
        new_vars, new_rows = _aggregate(frag, axis, gt, prefix)
        variables += new_vars
        rows += new_rows
        aux += [prefix + a for a in frag.aux]
    name = "+".join(str(m) for m in (method_x, method_y))
    return Fragment(name, tuple(variables), tuple(rows), base.lambdas, tuple(aux), ground=tuple(gt.points))
