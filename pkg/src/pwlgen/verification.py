"""Exact certificates for formulations: covers, faces, idealness, sharpness,
and relaxation strength after a single branching decision."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Hashable, Iterable, Mapping, Sequence

from pwlgen.errors import EmptyPolytope, ScaleLimit, UnknownMethod
from pwlgen.formulations import (
    METHODS,
    BicliqueCover,
    Fragment,
    UnivariatePWL,
    build_inc,
    build_mc,
    build_sos2,
)
from pwlgen.geometry import (
    Polygon2D,
    enumerate_vertices,
    polygon_area,
    project_to_plane,
    strengthened_proportion,
)
from pwlgen.model import Constraint

MAX_RELAXATION_DIM = 40
MAX_REDUNDANT_L = 12


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    witness: Any = None
    data: Mapping[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class VerificationReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def add(self, result: CheckResult) -> CheckResult:
        self.results.append(result)
        return result

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            line = f"{r.name}: {'pass' if r.ok else 'FAIL'}"
            if not r.ok and r.witness is not None:
                line += f" (witness {_show(r.witness)})"
            out.append(line)
        return out


def _show(obj) -> str:
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{k}: {_show(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "(" + ", ".join(_show(v) for v in obj) + ")"
    return str(obj)


def _chebyshev(u, v) -> int:
    if isinstance(u, tuple):
        return max(abs(a - b) for a, b in zip(u, v))
    return abs(u - v)


def check_biclique_representation(
    V: Sequence[Hashable], family: Iterable[Iterable], cover: BicliqueCover, relaxed: bool = False
) -> CheckResult:
    """Does the cover separate exactly the pairs that share no member of the
    family?  ``relaxed`` demands coverage only for pairs at distance one."""
    points = list(V)
    inside = set(points)
    family = [frozenset(t) for t in family]
    stray = [v for v in cover.ground if v not in inside]
    if stray:
        return CheckResult("cover", False, ("outside ground set", stray[0]))
    for k, (a, b) in enumerate(cover.levels, 1):
        if a & b:
            return CheckResult("cover", False, ("sides intersect", k, min(a & b)))
    together = set()
    for t in family:
        for u, v in combinations(sorted(t), 2):
            together.add(frozenset({u, v}))
    for u, v in combinations(points, 2):
        pair = frozenset({u, v})
        level = cover.separated(u, v)
        if pair in together:
            if level is not None:
                return CheckResult("cover", False, ("separates a joint pair", (u, v), level))
        elif level is None and (not relaxed or _chebyshev(u, v) == 1):
            return CheckResult("cover", False, ("uncovered pair", (u, v)))
    return CheckResult("cover", True, data={"levels": len(cover.levels)})


# faces


def _aux_box(frag: Fragment) -> list[range]:
    out = []
    for var in frag.aux_vars:
        if var.lower is None or var.upper is None:
            raise ValueError(f"aux variable {var.name} needs finite bounds")
        out.append(range(int(var.lower), int(var.upper) + 1))
    return out


def _lambda_vertices(frag: Fragment, fix: Mapping[str, Fraction], extra=()) -> set[tuple[Fraction, ...]]:
    names = frag.names
    pos = [names.index(n) for n in frag.lambdas]
    verts = enumerate_vertices(frag.relaxation(fix, extra))
    return {tuple(v[i] for i in pos) for v in verts}


def faces_by_code(frag: Fragment, code: Sequence[int] | Mapping[str, int]) -> set[tuple[Fraction, ...]]:
    """Vertices (in multiplier coordinates) of the face cut out by fixing the
    aux variables; raises EmptyPolytope when the face is empty."""
    if not isinstance(code, Mapping):
        code = dict(zip(frag.aux, code))
    return _lambda_vertices(frag, code)


def support(point: Sequence[Fraction], ground: Sequence) -> frozenset:
    return frozenset(v for v, x in zip(ground, point) if x != 0)


def _face_support(frag: Fragment, code) -> frozenset | None:
    """Union of vertex supports, or None for an empty face."""
    try:
        verts = faces_by_code(frag, code)
    except EmptyPolytope:
        return None
    out = frozenset()
    for p in verts:
        out |= support(p, frag.ground)
    return out


def _units_in_face(frag: Fragment, code) -> set:
    try:
        verts = faces_by_code(frag, code)
    except EmptyPolytope:
        return set()
    out = set()
    for p in verts:
        s = support(p, frag.ground)
        if len(s) == 1:
            out |= s
    return out


def check_face_union(frag: Fragment, family: Iterable[Iterable]) -> CheckResult:
    """Union over integer aux assignments of the faces equals the union of
    the simplex faces indexed by ``family``."""
    family = [frozenset(t) for t in family]
    covered = [False] * len(family)
    for code in product(*_aux_box(frag)):
        sup = _face_support(frag, code)
        if sup is None:
            continue
        if not any(sup <= t for t in family):
            return CheckResult("faces", False, ("face outside the family", code, sorted(sup)))
        units = _units_in_face(frag, code)
        for j, t in enumerate(family):
            if not covered[j] and t <= units:
                covered[j] = True
    missing = [sorted(t) for t, c in zip(family, covered) if not c]
    if missing:
        return CheckResult("faces", False, ("member never realised", missing[0]))
    return CheckResult("faces", True)


def check_face_union_xz(frag: Fragment, pwl: UnivariatePWL) -> CheckResult:
    """Same check for formulations living in (x, z) space: each integer face
    projects into one piece and each piece is realised whole."""
    names = frag.names
    ix, iz = names.index(frag.x_name), names.index(frag.z_name)
    t, f = pwl.breakpoints, pwl.values
    pieces = [((t[i], f[i]), (t[i + 1], f[i + 1])) for i in range(pwl.d)]
    realised = [False] * pwl.d
    for code in product(*_aux_box(frag)):
        try:
            verts = enumerate_vertices(frag.relaxation(dict(zip(frag.aux, code))))
        except EmptyPolytope:
            continue
        pts = {(v[ix], v[iz]) for v in verts}
        home = [
            i for i, (p, q) in enumerate(pieces)
            if all(p[0] <= x <= q[0] and (z - p[1]) * (q[0] - p[0]) == (q[1] - p[1]) * (x - p[0]) for x, z in pts)
        ]
        if not home:
            return CheckResult("faces", False, ("face outside the graph", code, sorted(pts)))
        for i in home:
            if set(pieces[i]) <= pts:
                realised[i] = True
    if not all(realised):
        return CheckResult("faces", False, ("piece never realised", realised.index(False) + 1))
    return CheckResult("faces", True)


def _relaxation_vertices(frag: Fragment):
    if len(frag.variables) > MAX_RELAXATION_DIM:
        raise ScaleLimit(f"relaxation has {len(frag.variables)} variables, limit {MAX_RELAXATION_DIM}")
    return enumerate_vertices(frag.relaxation())


def check_ideal(frag: Fragment) -> CheckResult:
    names = frag.names
    pos = [names.index(a) for a in frag.aux]
    verts = _relaxation_vertices(frag)
    for v in sorted(verts):
        if any(v[i].denominator != 1 for i in pos):
            witness = {names[i]: v[i] for i in range(len(names)) if v[i] != 0}
            return CheckResult("ideal", False, witness, {"vertices": len(verts)})
    return CheckResult("ideal", True, data={"vertices": len(verts)})


def check_sharp_lambda(frag: Fragment) -> CheckResult:
    names = frag.names
    pos = [names.index(n) for n in frag.lambdas]
    seen = set()
    for v in _relaxation_vertices(frag):
        lam = [v[i] for i in pos]
        nz = [k for k, x in enumerate(lam) if x != 0]
        if len(nz) == 1:
            seen.add(nz[0])
    for k, g in enumerate(frag.ground):
        if k not in seen:
            return CheckResult("lambda-sharp", False, g)
    return CheckResult("lambda-sharp", True)


def check_redundant_embedding(
    frag: Fragment, family: Sequence[Iterable], codes: Sequence[Sequence[int]]
) -> CheckResult:
    """Faces of a binary formulation over all of {0,1}^L against a family
    indexed by ``codes``; every face must sit inside some member and code j
    must cut out exactly member j."""
    L = len(frag.aux)
    if L > MAX_REDUNDANT_L:
        raise ScaleLimit(f"{L} binaries exceeds the limit of {MAX_REDUNDANT_L}")
    family = [frozenset(t) for t in family]
    faces: dict[tuple[int, ...], frozenset | None] = {}
    exact: dict[tuple[int, ...], frozenset] = {}
    for code in product((0, 1), repeat=L):
        try:
            verts = faces_by_code(frag, code)
        except EmptyPolytope:
            faces[code] = None
            continue
        sup = frozenset()
        units = set()
        for p in verts:
            s = support(p, frag.ground)
            sup |= s
            if len(s) == 1:
                units |= s
        faces[code] = sup
        # a face over the simplex equals P(S) iff its vertices are the units of S
        if all(len(support(p, frag.ground)) == 1 for p in verts):
            exact[code] = frozenset(units)
    proj_y = {c for c, s in faces.items() if s is not None}
    stray = [c for c in sorted(proj_y) if not any(faces[c] <= t for t in family)]
    mismatched = [
        (j + 1, tuple(c)) for j, (c, t) in enumerate(zip(codes, family))
        if exact.get(tuple(c)) != t
    ]
    ok = not stray and not mismatched
    witness = None
    if stray:
        witness = ("face outside the family", stray[0], sorted(faces[stray[0]]))
    elif mismatched:
        j, c = mismatched[0]
        witness = ("code does not cut out its member", j, c, sorted(exact.get(c) or faces.get(c) or ()))
    return CheckResult(
        "redundant-embedding",
        ok,
        witness,
        {"faces": faces, "exact": exact, "proj_y": proj_y, "mismatched": mismatched},
    )


# branching


Branch = tuple[int, str, int]

_BRANCH = re.compile(r"^\s*y_?(\d+)\s*(<=|>=)\s*(-?\d+)\s*$")


def parse_branch(text: str) -> Branch:
    """'y1<=0' -> (1, '<=', 0).  Only single-variable bounds are accepted."""
    m = _BRANCH.match(text)
    if not m:
        raise ValueError(f"cannot parse branch {text!r}; expected e.g. 'y1<=0'")
    return int(m.group(1)), m.group(2), int(m.group(3))


@dataclass(frozen=True)
class BranchMetrics:
    volume: Fraction
    strengthened_proportion: Fraction
    polygon: Polygon2D | None


def _formulation(pwl: UnivariatePWL, method: str) -> Fragment:
    method = method.lower()
    if method == "mc":
        return build_mc(pwl)
    if method == "inc":
        return build_inc(pwl)
    if method not in METHODS:
        raise UnknownMethod(f"unknown method {method!r}")
    return build_sos2(method, pwl.d)


def _xz_map(frag: Fragment, pwl: UnivariatePWL) -> list[list[Fraction]]:
    names = frag.names
    rx = [Fraction(0)] * len(names)
    rz = [Fraction(0)] * len(names)
    if frag.x_name:
        rx[names.index(frag.x_name)] = Fraction(1)
        rz[names.index(frag.z_name)] = Fraction(1)
    else:
        for name, t, f in zip(frag.lambdas, pwl.breakpoints, pwl.values):
            rx[names.index(name)] = t
            rz[names.index(name)] = f
    return [rx, rz]


def relaxation_polygon(pwl: UnivariatePWL, method: str, branch: Branch | str | None = None) -> Polygon2D | None:
    frag = _formulation(pwl, method)
    extra = []
    if branch is not None:
        if isinstance(branch, str):
            branch = parse_branch(branch)
        k, sense, bound = branch
        if not 1 <= k <= len(frag.aux):
            raise ValueError(f"{method} has {len(frag.aux)} aux variables, no y{k}")
        extra.append(Constraint({frag.aux[k - 1]: 1}, sense, bound, "branch"))
    try:
        return project_to_plane(frag.relaxation(extra=extra), _xz_map(frag, pwl))
    except EmptyPolytope:
        return None


def branching_metrics(pwl: UnivariatePWL, method: str, branch: Branch | str | None) -> BranchMetrics:
    """Area of the (x, z) projection after the branch, and the share of the
    domain where its lower bound improves on the unbranched one."""
    base = relaxation_polygon(pwl, method)
    poly = relaxation_polygon(pwl, method, branch) if branch is not None else base
    if poly is None:
        return BranchMetrics(Fraction(0), Fraction(1), None)
    return BranchMetrics(polygon_area(poly), strengthened_proportion(base, poly, pwl.domain), poly)


def branch_list(pwl: UnivariatePWL, method: str, aux_index: int = 1) -> list[tuple[str, Branch]]:
    """Every down/up pair on one aux variable, labelled '0↓', '1↑', ..."""
    frag = _formulation(pwl, method)
    var = frag.aux_vars[aux_index - 1]
    out = []
    for c in range(int(var.lower), int(var.upper)):
        out.append((f"{c}↓", (aux_index, "<=", c)))
        out.append((f"{c + 1}↑", (aux_index, ">=", c + 1)))
    return out


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    text = f"{q.numerator}/{q.denominator}"
    den = q.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den == 1:
        from decimal import Decimal

        text += f" ({Decimal(q.numerator) / Decimal(q.denominator)})"
    return text


def branching_table(pwl: UnivariatePWL, methods: Sequence[str], aux_index: int = 1) -> str:
    header = ["Statistic", "LP relaxation"]
    vol = ["Volume"]
    prop = ["Strengthened prop."]
    base = branching_metrics(pwl, methods[0], None)
    vol.append(format_rational(base.volume))
    prop.append(format_rational(base.strengthened_proportion))
    for m in methods:
        for label, br in branch_list(pwl, m, aux_index):
            header.append(f"{m.upper()} {label}")
            res = branching_metrics(pwl, m, br)
            vol.append(format_rational(res.volume))
            prop.append(format_rational(res.strengthened_proportion))
    widths = [max(len(r[i]) for r in (header, vol, prop)) for i in range(len(header))]
    return "\n".join(" | ".join(c.ljust(w) for c, w in zip(row, widths)) for row in (header, vol, prop))


def verify_univariate(pwl: UnivariatePWL, method: str, checks: Iterable[str]) -> VerificationReport:
    frag = _formulation(pwl, method)
    report = VerificationReport()
    family = [frozenset({i, i + 1}) for i in range(1, pwl.d + 1)]
    for check in checks:
        if check == "ideal":
            report.add(check_ideal(frag))
        elif check == "sharp":
            if frag.x_name:
                poly = relaxation_polygon(pwl, method)
                hull = Polygon2D.hull(zip(pwl.breakpoints, pwl.values))
                report.add(CheckResult("xz-sharp", poly == hull, None if poly == hull else poly))
            else:
                report.add(check_sharp_lambda(frag))
        elif check == "faces":
            report.add(check_face_union_xz(frag, pwl) if frag.x_name else check_face_union(frag, family))
        elif check == "cover":
            if method == "logib" and pwl.d >= 2:
                from pwlgen.formulations import build_logib_cover

                cover = build_logib_cover(pwl.d)
                report.add(check_biclique_representation(range(1, pwl.d + 2), family, cover))
        else:
            raise ValueError(f"unknown check {check!r}")
    return report
