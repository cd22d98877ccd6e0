"""MIP formulations of the SOS2 constraint and of univariate PWL graphs.

Every builder returns a :class:`Fragment`: variables plus linear rows, where
``lambdas`` are the convex multipliers on the breakpoints (``lam_1`` ...) and
``aux`` are the integer variables (``y_1`` ...).  MC and Inc work directly in
the (x, z) space and have no multipliers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from pwlgen.encodings import CodeKind, CodeMatrix, brgc, code_for, log2_ceil, zigzag_inverse
from pwlgen.errors import (
    DegenerateDirections,
    GroundSetMismatch,
    TooSmall,
    UnknownMethod,
    Unsupported,
)
from pwlgen.geometry import HPolytope, as_fraction, canonical_normal, dot, nullspace, rref
from pwlgen.model import Constraint, Variable, eq, le, to_polytope

LAMBDA_METHODS = ("cc", "log", "logib", "zzi", "zzb", "dlog")
METHODS = LAMBDA_METHODS + ("mc", "inc")

# hyperplane enumeration guard for user-supplied codes
MAX_EMBEDDING_R = 6
MAX_SUBSETS = 200_000


@dataclass(frozen=True)
class UnivariatePWL:
    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        bps = tuple(as_fraction(t) for t in self.breakpoints)
        vals = tuple(as_fraction(f) for f in self.values)
        if len(bps) < 2 or len(bps) != len(vals):
            raise ValueError("need at least two breakpoints and one value per breakpoint")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    def pieces(self) -> list[tuple[Fraction, Fraction]]:
        """(slope, intercept) of each piece."""
        out = []
        for (t0, t1), (f0, f1) in zip(
            zip(self.breakpoints, self.breakpoints[1:]), zip(self.values, self.values[1:])
        ):
            slope = (f1 - f0) / (t1 - t0)
            out.append((slope, f0 - slope * t0))
        return out

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise ValueError(f"{x} is outside the domain [{lo}, {hi}]")
        for i, (slope, icpt) in enumerate(self.pieces()):
            if x <= self.breakpoints[i + 1]:
                return slope * x + icpt
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class BicliqueCover:
    ground: tuple[Hashable, ...]
    levels: tuple[tuple[frozenset, frozenset], ...]

    def __post_init__(self):
        levels = tuple((frozenset(a), frozenset(b)) for a, b in self.levels)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "ground", tuple(self.ground))
        for k, (a, b) in enumerate(levels, 1):
            if a & b:
                raise ValueError(f"level {k} sides intersect in {sorted(a & b)}")

    def separated(self, u, v) -> int | None:
        """1-based index of the first level that separates u from v."""
        for k, (a, b) in enumerate(self.levels, 1):
            if (u in a and v in b) or (u in b and v in a):
                return k
        return None

    def without_level(self, k: int) -> "BicliqueCover":
        return BicliqueCover(self.ground, self.levels[: k - 1] + self.levels[k:])


def lambda_name(v) -> str:
    if isinstance(v, tuple):
        return "lam_" + "_".join(str(x) for x in v)
    return f"lam_{v}"


@dataclass(frozen=True)
class Fragment:
    method: str
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    lambdas: tuple[str, ...] = ()
    aux: tuple[str, ...] = ()
    x_name: str | None = None
    z_name: str | None = None
    ground: tuple = field(default=())

    @property
    def lambda_count(self) -> int:
        return len(self.lambdas)

    @property
    def aux_vars(self) -> tuple[Variable, ...]:
        lookup = {v.name: v for v in self.variables}
        return tuple(lookup[a] for a in self.aux)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def relaxation(self, fix: Mapping[str, Fraction] | None = None, extra: Iterable[Constraint] = ()) -> HPolytope:
        return to_polytope(list(self.variables), list(self.constraints) + list(extra), fix)

    def with_constraints(self, extra: Iterable[Constraint]) -> "Fragment":
        return Fragment(
            self.method,
            self.variables,
            self.constraints + tuple(extra),
            self.lambdas,
            self.aux,
            self.x_name,
            self.z_name,
            self.ground,
        )


def _simplex(ground: Sequence) -> tuple[list[Variable], Constraint]:
    lams = [Variable(lambda_name(v), "continuous", 0, None) for v in ground]
    return lams, eq({v.name: 1 for v in lams}, 1, "simplex")


def build_cc(d: int) -> Fragment:
    if d < 1:
        raise TooSmall("need at least one piece")
    ground = list(range(1, d + 2))
    lams, simplex = _simplex(ground)
    ys = [Variable(f"y_{i}", "binary") for i in range(1, d + 1)]
    rows = [simplex]
    for v in ground:
        near = [i for i in (v - 1, v) if 1 <= i <= d]
        coeffs = {f"lam_{v}": 1}
        for i in near:
            coeffs[f"y_{i}"] = -1
        rows.append(le(coeffs, 0, f"cc_{v}"))
    rows.append(eq({y.name: 1 for y in ys}, 1, "cc_choice"))
    return Fragment(
        "cc", tuple(lams + ys), tuple(rows), tuple(v.name for v in lams), tuple(y.name for y in ys),
        ground=tuple(ground),
    )


def build_logib_cover(d: int) -> BicliqueCover:
    """Gray-code biclique cover of SOS2 on d pieces.

    Breakpoint v touches segments v-1 and v; when d is not a power of two the
    segments past d keep their codes from the full-length Gray code, so the
    last breakpoint still sees a second code.
    """
    if d < 2:
        raise TooSmall("the Gray-code cover needs d >= 2")
    r = log2_ceil(d)
    codes = brgc(r).rows
    dbar = len(codes)
    levels = []
    for k in range(r):
        a, b = set(), set()
        for v in range(1, d + 2):
            bits = {codes[i - 1][k] for i in (v - 1, v) if 1 <= i <= dbar}
            if bits == {1}:
                a.add(v)
            elif bits == {0}:
                b.add(v)
        levels.append((a, b))
    return BicliqueCover(tuple(range(1, d + 2)), tuple(levels))


def assemble_ib(
    cover: BicliqueCover,
    lambda_count: int | None = None,
    aux_prefix: str = "y",
    ground: Sequence | None = None,
) -> Fragment:
    """Independent-branching rows sum_A lam <= y_k, sum_B lam <= 1 - y_k."""
    if ground is None:
        if lambda_count is None:
            raise ValueError("give lambda_count or an explicit ground set")
        ground = list(range(1, lambda_count + 1))
    allowed = set(ground)
    stray = [v for v in cover.ground if v not in allowed]
    if stray:
        raise GroundSetMismatch(f"cover mentions points outside the ground set: {stray[:5]}")
    lams, simplex = _simplex(ground)
    ys, rows = [], [simplex]
    order = {v: i for i, v in enumerate(ground)}
    for k, (a, b) in enumerate(cover.levels, 1):
        y = f"{aux_prefix}_{k}"
        ys.append(Variable(y, "binary"))
        if a:
            coeffs = {lambda_name(v): 1 for v in sorted(a, key=order.get)}
            coeffs[y] = -1
            rows.append(le(coeffs, 0, f"ib{k}_a"))
        if b:
            coeffs = {lambda_name(v): 1 for v in sorted(b, key=order.get)}
            coeffs[y] = 1
            rows.append(le(coeffs, 1, f"ib{k}_b"))
    return Fragment(
        "logib", tuple(lams + ys), tuple(rows), tuple(v.name for v in lams), tuple(y.name for y in ys),
        ground=tuple(ground),
    )


def embedding_normals(code: CodeMatrix) -> tuple[list[tuple[int, ...]], list[list[Fraction]]]:
    """Normals of the hyperplanes spanned by consecutive code differences
    inside their linear span, plus a basis of that span."""
    H = code.rows
    diffs = [tuple(b - a for a, b in zip(p, q)) for p, q in zip(H, H[1:])]
    directions = sorted({canonical_normal(c) for c in diffs})
    span, _ = rref(directions) if directions else ([], [])
    k = len(span)
    if k == 0:
        raise DegenerateDirections("consecutive code differences span nothing")
    if code.r > MAX_EMBEDDING_R:
        raise Unsupported(f"hyperplane enumeration supports r <= {MAX_EMBEDDING_R}")
    from math import comb

    if comb(len(directions), k - 1) > MAX_SUBSETS:
        raise Unsupported("too many direction subsets to enumerate")
    normals = set()
    for subset in combinations(directions, k - 1):
        m = [[dot(basis, s) for basis in span] for s in subset]
        sol = nullspace(m, k)
        if len(sol) != 1:
            continue
        b = [sum(sol[0][j] * span[j][i] for j in range(k)) for i in range(code.r)]
        normals.add(canonical_normal(b))

    def key(n):
        lead = next(i for i, x in enumerate(n) if x != 0)
        return (lead, tuple(-x for x in n))

    return sorted(normals, key=key), span


def build_embedding_sos2(d: int, code: CodeMatrix, aux_prefix: str = "y") -> Fragment:
    """Embedding formulation of SOS2 on d pieces for a code with d rows in
    convex position."""
    if code.d != d:
        raise ValueError(f"code has {code.d} rows but there are {d} pieces")
    normals, span = embedding_normals(code)
    H = code.rows
    padded = [H[0]] + list(H) + [H[-1]]
    ground = list(range(1, d + 2))
    lams, simplex = _simplex(ground)
    r = code.r
    ynames = [f"{aux_prefix}_{i}" for i in range(1, r + 1)]
    if code.is_binary():
        ys = [Variable(n, "binary") for n in ynames]
    else:
        ys = [Variable(n, "integer", min(col), max(col)) for n, col in zip(ynames, zip(*H))]
    rows = [simplex]
    for j, b in enumerate(normals, 1):
        lo, hi = {}, {}
        for v in ground:
            pair = (dot(b, padded[v]), dot(b, padded[v - 1]))
            lo[f"lam_{v}"] = min(pair)
            hi[f"lam_{v}"] = max(pair)
        by = {y: c for y, c in zip(ynames, b) if c != 0}
        lower = dict(lo)
        for y, c in by.items():
            lower[y] = lower.get(y, 0) - c
        upper = {y: c for y, c in by.items()}
        for name, c in hi.items():
            upper[name] = upper.get(name, 0) - c
        rows.append(le(lower, 0, f"emb{j}_lo"))
        rows.append(le(upper, 0, f"emb{j}_hi"))
    if len(span) < r:
        for j, w in enumerate(nullspace(span, r), 1):
            w = canonical_normal(w)
            rows.append(eq({y: c for y, c in zip(ynames, w)}, dot(w, H[0]), f"aff{j}"))
    method = {CodeKind.BRGC: "log", CodeKind.ZZ_INTEGER: "zzi", CodeKind.ZZ_BINARY: "embedding"}.get(
        code.kind, "embedding"
    )
    return Fragment(method, tuple(lams + ys), tuple(rows), tuple(v.name for v in lams), tuple(ynames),
                    ground=tuple(ground))


def build_zzb(d: int, aux_prefix: str = "y") -> Fragment:
    """Binary zig-zag: the integer zig-zag rows with y replaced by the
    unimodular inverse image of a binary vector."""
    if d < 2:
        raise TooSmall("binary zig-zag needs d >= 2")
    alpha = code_for(CodeKind.ZZ_INTEGER, d).rows
    r = len(alpha[0])
    padded = [alpha[0]] + list(alpha) + [alpha[-1]]
    ground = list(range(1, d + 2))
    lams, simplex = _simplex(ground)
    ynames = [f"{aux_prefix}_{i}" for i in range(1, r + 1)]
    ys = [Variable(n, "binary") for n in ynames]
    rows = [simplex]
    for i in range(r):
        # coefficients of A^{-1}(y)_i, read off by pushing unit vectors through the map
        inv = {ynames[k]: zigzag_inverse([int(j == k) for j in range(r)])[i] for k in range(r)}
        lower = {f"lam_{v}": padded[v - 1][i] for v in ground}
        upper = {f"lam_{v}": -padded[v][i] for v in ground}
        for y, c in inv.items():
            if c:
                lower[y] = -c
                upper[y] = c
        rows.append(le(lower, 0, f"zzb{i + 1}_lo"))
        rows.append(le(upper, 0, f"zzb{i + 1}_hi"))
    return Fragment("zzb", tuple(lams + ys), tuple(rows), tuple(v.name for v in lams), tuple(ynames),
                    ground=tuple(ground))


def build_dlog(d: int, aux_prefix: str = "y") -> Fragment:
    """Disaggregated logarithmic formulation: one multiplier pair per piece."""
    if d < 1:
        raise TooSmall("need at least one piece")
    ground = list(range(1, d + 2))
    lams, simplex = _simplex(ground)
    gammas = []
    for i in range(1, d + 1):
        for v in (i, i + 1):
            gammas.append(Variable(f"gam_{i}_{v}", "continuous", 0, None))
    rows = [simplex]
    for v in ground:
        coeffs = {f"lam_{v}": 1}
        for i in (v - 1, v):
            if 1 <= i <= d:
                coeffs[f"gam_{i}_{v}"] = -1
        rows.append(eq(coeffs, 0, f"dlog_link_{v}"))
    rows.append(eq({g.name: 1 for g in gammas}, 1, "dlog_simplex"))
    r = log2_ceil(d)
    codes = code_for(CodeKind.BRGC, d).rows if r else []
    ys = [Variable(f"{aux_prefix}_{k}", "binary") for k in range(1, r + 1)]
    for k in range(r):
        ones = {f"gam_{i}_{v}": 1 for i in range(1, d + 1) if codes[i - 1][k] == 1 for v in (i, i + 1)}
        zeros = {f"gam_{i}_{v}": 1 for i in range(1, d + 1) if codes[i - 1][k] == 0 for v in (i, i + 1)}
        y = ys[k].name
        rows.append(le({**ones, y: -1}, 0, f"dlog{k + 1}_one"))
        rows.append(le({**zeros, y: 1}, 1, f"dlog{k + 1}_zero"))
    return Fragment(
        "dlog", tuple(lams + gammas + ys), tuple(rows), tuple(v.name for v in lams), tuple(y.name for y in ys),
        ground=tuple(ground),
    )


def build_mc(pwl: UnivariatePWL) -> Fragment:
    """Multiple choice: one copy of x per piece, switched on by its binary."""
    d = pwl.d
    t = pwl.breakpoints
    x = Variable("x", "continuous", t[0], t[-1])
    z = Variable("z", "continuous", None, None)
    xs = [Variable(f"xs_{i}", "continuous", None, None) for i in range(1, d + 1)]
    ys = [Variable(f"y_{i}", "binary") for i in range(1, d + 1)]
    rows = [eq({"x": 1, **{v.name: -1 for v in xs}}, 0, "mc_x")]
    zrow = {"z": 1}
    for i, (slope, icpt) in enumerate(pwl.pieces(), 1):
        zrow[f"xs_{i}"] = -slope
        zrow[f"y_{i}"] = -icpt
    rows.append(eq(zrow, 0, "mc_z"))
    for i in range(1, d + 1):
        rows.append(le({f"y_{i}": t[i - 1], f"xs_{i}": -1}, 0, f"mc_lo_{i}"))
        rows.append(le({f"xs_{i}": 1, f"y_{i}": -t[i]}, 0, f"mc_hi_{i}"))
    rows.append(eq({y.name: 1 for y in ys}, 1, "mc_choice"))
    return Fragment("mc", tuple([x, z] + xs + ys), tuple(rows), (), tuple(y.name for y in ys), "x", "z")


def build_inc(pwl: UnivariatePWL) -> Fragment:
    """Incremental formulation: fill the pieces left to right."""
    d = pwl.d
    t, f = pwl.breakpoints, pwl.values
    x = Variable("x", "continuous", t[0], t[-1])
    z = Variable("z", "continuous", None, None)
    deltas = [Variable(f"delta_{i}", "continuous", 0, 1) for i in range(1, d + 1)]
    ys = [Variable(f"y_{i}", "binary") for i in range(1, d)]
    rows = [
        eq({"x": 1, **{f"delta_{i}": -(t[i] - t[i - 1]) for i in range(1, d + 1)}}, t[0], "inc_x"),
        eq({"z": 1, **{f"delta_{i}": -(f[i] - f[i - 1]) for i in range(1, d + 1)}}, f[0], "inc_z"),
    ]
    for i in range(1, d):
        rows.append(le({f"delta_{i + 1}": 1, f"y_{i}": -1}, 0, f"inc_fill_{i}"))
        rows.append(le({f"y_{i}": 1, f"delta_{i}": -1}, 0, f"inc_order_{i}"))
    return Fragment("inc", tuple([x, z] + deltas + ys), tuple(rows), (), tuple(y.name for y in ys), "x", "z")


def build_sos2(method: str, d: int, aux_prefix: str = "y") -> Fragment:
    """Any multiplier-space SOS2 formulation by name."""
    method = method.lower()
    if method not in LAMBDA_METHODS:
        raise UnknownMethod(f"{method!r} is not one of {', '.join(LAMBDA_METHODS)}")
    if d == 1:
        lams, simplex = _simplex([1, 2])
        return Fragment(method, tuple(lams), (simplex,), tuple(v.name for v in lams), (), ground=(1, 2))
    if method == "cc":
        frag = build_cc(d)
        if aux_prefix != "y":
            frag = rename_aux(frag, aux_prefix)
        return frag
    if method == "log":
        frag = build_embedding_sos2(d, code_for(CodeKind.BRGC, d), aux_prefix)
    elif method == "zzi":
        frag = build_embedding_sos2(d, code_for(CodeKind.ZZ_INTEGER, d), aux_prefix)
    elif method == "zzb":
        frag = build_zzb(d, aux_prefix)
    elif method == "logib":
        frag = assemble_ib(build_logib_cover(d), d + 1, aux_prefix)
    else:
        frag = build_dlog(d, aux_prefix)
    return Fragment(method, frag.variables, frag.constraints, frag.lambdas, frag.aux, ground=frag.ground)


def rename_aux(frag: Fragment, prefix: str) -> Fragment:
    mapping = {a: f"{prefix}_{i}" for i, a in enumerate(frag.aux, 1)}
    return Fragment(
        frag.method,
        tuple(v.renamed(mapping.get(v.name, v.name)) for v in frag.variables),
        tuple(c.renamed(mapping) for c in frag.constraints),
        frag.lambdas,
        tuple(mapping[a] for a in frag.aux),
        frag.x_name,
        frag.z_name,
        frag.ground,
    )


def sos2_family(d: int) -> list[frozenset[int]]:
    return [frozenset({i, i + 1}) for i in range(1, d + 1)]
