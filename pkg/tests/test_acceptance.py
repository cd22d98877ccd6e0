"""Acceptance suite, one test per criterion (parametrised where a criterion
lists several independent values).

Tolerances: every numeric comparison is exact rational equality.  Runtime
limits are asserted on wall-clock time measured inside the tests.
"""

import time
from fractions import Fraction as F

import pytest

from pwlgen.bivariate import build_bivariate, six_stencil_cover, triangles
from pwlgen.cli import main
from pwlgen.encodings import (
    brgc,
    code_for,
    validate_encoding,
    zigzag_binary,
    zigzag_integer,
    zigzag_inverse,
    zigzag_map,
)
from pwlgen.formulations import (
    METHODS,
    assemble_ib,
    build_embedding_sos2,
    build_inc,
    build_logib_cover,
    build_mc,
    build_sos2,
    sos2_family,
)
from pwlgen.formulations import UnivariatePWL
from pwlgen.instances import gen_random_triangulation, instance_to_dict
from pwlgen.verification import (
    branching_metrics,
    check_biclique_representation,
    check_face_union,
    check_face_union_xz,
    check_ideal,
    check_redundant_embedding,
    check_sharp_lambda,
)

from tests.cases import (
    EXAMPLE_4,
    EXAMPLE_8,
    K1_CODES,
    K1_COVER,
    K1_EXTRA_CODES,
    K1_GRID,
    K1_LISTED_SINGLETONS,
    K1_TRIANGLES,
)

EXACT = 0  # tolerance on every rational comparison
TIME_LIMIT = {1: 5.0, 2: 60.0, 5: 300.0, 7: 180.0}
_elapsed = {k: 0.0 for k in TIME_LIMIT}


def timed(criterion, fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    _elapsed[criterion] += time.perf_counter() - start
    return out


def close(a, b):
    return abs(F(a) - F(b)) <= EXACT


# 1. four-piece branching metrics

FOUR_PIECE = [
    ("LP relaxation", "log", None, F(6), F(0)),
    ("Log 0 down", "log", "y1<=0", F(11, 2), F(0)),
    ("Log 1 up", "log", "y1>=1", F(1, 2), F(1)),
    ("ZZI 0 down", "zzi", "y1<=0", F(0), F(1)),
    ("ZZI 1 up", "zzi", "y1>=1", F(7, 2), F(1, 2)),
    ("ZZI 1 down", "zzi", "y1<=1", F(7, 2), F(1, 2)),
    ("ZZI 2 up", "zzi", "y1>=2", F(0), F(1)),
]


@pytest.mark.parametrize("column,method,branch,volume,proportion", FOUR_PIECE, ids=[c[0] for c in FOUR_PIECE])
def test_criterion_1_four_piece_branching(column, method, branch, volume, proportion):
    res = timed(1, branching_metrics, EXAMPLE_4, method, branch)
    assert close(res.volume, volume), f"volume {res.volume} != {volume}"
    assert close(res.strengthened_proportion, proportion)


def test_criterion_1_runtime():
    assert _elapsed[1] < TIME_LIMIT[1]


# 2. eight-piece branching metrics

EIGHT_PIECE = [("log", "y1<=0", 41, 0), ("log", "y1>=1", 17, 1)]
_zzi_vol = [0, F(77, 2), F(23, 2), 27, 27, F(23, 2), F(77, 2), 0]
_zzi_prop = [1, F(1, 4), F(3, 4), F(1, 2), F(1, 2), F(3, 4), F(1, 4), 1]
for c in range(4):
    EIGHT_PIECE.append(("zzi", f"y1<={c}", _zzi_vol[2 * c], _zzi_prop[2 * c]))
    EIGHT_PIECE.append(("zzi", f"y1>={c + 1}", _zzi_vol[2 * c + 1], _zzi_prop[2 * c + 1]))


@pytest.mark.parametrize("method,branch,volume,proportion", EIGHT_PIECE, ids=[f"{m} {b}" for m, b, _, _ in EIGHT_PIECE])
def test_criterion_2_eight_piece_branching(method, branch, volume, proportion):
    res = timed(2, branching_metrics, EXAMPLE_8, method, branch)
    assert close(res.volume, volume) and close(res.strengthened_proportion, proportion)


def test_criterion_2_runtime():
    assert _elapsed[2] < TIME_LIMIT[2]


# 3. displayed formulations


def lam(*vs, coef=None):
    coef = coef or [1] * len(vs)
    return {f"lam_{v}": F(c) for v, c in zip(vs, coef)}


def _two_sided(frag):
    """Embedding rows as {k: (lower lambda coeffs, upper lambda coeffs)}."""
    out = {}
    for c in frag.constraints:
        if not c.name.startswith("emb"):
            continue
        k, side = c.name[3:].split("_")
        y = f"y_{k}"
        sign = -1 if side == "lo" else 1
        assert c.coeffs[y] == sign and c.rhs == 0 and c.sense == "<="
        row = {n: sign * -v for n, v in c.coeffs.items() if n != y}
        out.setdefault(int(k), {})[side] = row
    return {k: (v["lo"], v["hi"]) for k, v in out.items()}


def _ib(frag):
    out = []
    for c in frag.constraints:
        if c.name.startswith("ib"):
            out.append((c.name, {n: v for n, v in c.coeffs.items() if n.startswith("lam")}, c.coeffs, c.rhs))
    return out


DISPLAYS = {
    "log d=4": (4, "brgc", {
        1: (lam(3), lam(2, 3, 4)),
        2: (lam(4, 5), lam(3, 4, 5)),
    }),
    "zzi d=4": (4, "zzi", {
        1: (lam(3, 4, 5, coef=[1, 1, 2]), lam(2, 3, 4, 5, coef=[1, 1, 2, 2])),
        2: (lam(4, 5), lam(3, 4, 5)),
    }),
    "log d=3": (3, "brgc", {
        1: (lam(3, 4), lam(2, 3, 4)),
        2: (lam(4), lam(3, 4)),
    }),
}


@pytest.mark.parametrize("name", list(DISPLAYS))
def test_criterion_3_embedding_displays(name):
    d, kind, rows = DISPLAYS[name]
    assert _two_sided(build_embedding_sos2(d, code_for(kind, d))) == rows


def test_criterion_3_logib_d4_display():
    frag = assemble_ib(build_logib_cover(4), 5)
    y1, y2 = "y_1", "y_2"
    assert [(n, dict(c), r) for n, _, c, r in _ib(frag)] == [
        ("ib1_a", {"lam_3": 1, y1: -1}, 0),
        ("ib1_b", {"lam_1": 1, "lam_5": 1, y1: 1}, 1),
        ("ib2_a", {"lam_4": 1, "lam_5": 1, y2: -1}, 0),
        ("ib2_b", {"lam_1": 1, "lam_2": 1, y2: 1}, 1),
    ]


def test_criterion_3_logib_d3_display():
    """The d=3 independent-branching form: the Log lower bound on y_1 loses
    its lambda_4 term, everything else agrees once 1 - sum(B) is rewritten
    over the simplex."""
    ib = assemble_ib(build_logib_cover(3), 4)
    rows = {n: lams for n, lams, _, _ in _ib(ib)}
    every = set(lam(1, 2, 3, 4))
    complement = lambda b: {k: F(1) for k in every - set(b)}
    assert rows["ib1_a"] == lam(3)
    assert complement(rows["ib1_b"]) == lam(2, 3, 4)
    assert rows["ib2_a"] == lam(4)
    assert complement(rows["ib2_b"]) == lam(3, 4)
    log = _two_sided(build_embedding_sos2(3, code_for("brgc", 3)))
    assert set(log[1][0]) - set(rows["ib1_a"]) == {"lam_4"}


# 4. encodings

K3 = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 1, 1), (1, 1, 1), (1, 0, 1), (0, 0, 1)]
C3 = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 1, 0), (2, 1, 1), (3, 1, 1), (3, 2, 1), (4, 2, 1)]


def test_criterion_4_three_bit_paths():
    assert list(brgc(3).rows) == K3
    assert list(zigzag_integer(3).rows) == C3


@pytest.mark.parametrize("r", range(1, 11))
def test_criterion_4_gray_steps(r):
    K = brgc(r).rows
    assert all(sum(abs(a - b) for a, b in zip(p, q)) == 1 for p, q in zip(K, K[1:]))


@pytest.mark.parametrize("r", range(1, 7))
def test_criterion_4_unimodular_maps(r):
    for z, c in zip(zigzag_binary(r).rows, zigzag_integer(r).rows):
        assert zigzag_inverse(z) == c
        assert zigzag_map(zigzag_inverse(z)) == z
    for c in zigzag_integer(r).rows:
        assert zigzag_map(zigzag_inverse(c)) == c


@pytest.mark.parametrize("r", range(1, 5))
def test_criterion_4_validate(r):
    for make in (brgc, zigzag_integer, zigzag_binary):
        assert validate_encoding(make(r)).ok


# 5. idealness and sharpness

SWEEP = range(2, 10)


@pytest.mark.parametrize("method", ["log", "logib", "zzb", "zzi", "dlog"])
def test_criterion_5_ideal_and_sharp(method):
    for d in SWEEP:
        frag = build_sos2(method, d)
        assert timed(5, check_ideal, frag).ok, (method, d)
        assert timed(5, check_sharp_lambda, frag).ok, (method, d)


def test_criterion_5_cc():
    for d in SWEEP:
        frag = build_sos2("cc", d)
        assert timed(5, check_sharp_lambda, frag).ok
        ideal = timed(5, check_ideal, frag)
        if d >= 3:
            assert not ideal.ok
            assert any(F(v).denominator != 1 for k, v in ideal.witness.items() if k.startswith("y"))


def test_criterion_5_runtime():
    assert _elapsed[5] < TIME_LIMIT[5]


# 6. validity


def _concave(d):
    slopes = list(range(d, 0, -1))
    values = [0]
    for s in slopes:
        values.append(values[-1] + s)
    return UnivariatePWL(tuple(range(d + 1)), tuple(values))


@pytest.mark.slow
@pytest.mark.parametrize("method", METHODS)
def test_criterion_6_face_union(method):
    for d in SWEEP:
        if method in ("mc", "inc"):
            pwl = _concave(d)
            frag = build_mc(pwl) if method == "mc" else build_inc(pwl)
            assert check_face_union_xz(frag, pwl).ok, d
        else:
            assert check_face_union(build_sos2(method, d), sos2_family(d)).ok, d


# 7. redundancy example


@pytest.fixture(scope="module")
def k1_frag():
    frag = build_bivariate(K1_GRID, None, None, K1_COVER)
    return frag


def test_criterion_7_cover(k1_frag):
    res = timed(7, check_biclique_representation, K1_GRID.points, K1_TRIANGLES, K1_COVER)
    assert res.ok and len(K1_COVER.levels) == 4 and len(k1_frag.aux) == 4


def _redundant(frag):
    family = K1_TRIANGLES + [{p} for p in K1_LISTED_SINGLETONS]
    return timed(7, check_redundant_embedding, frag, family, K1_CODES + K1_EXTRA_CODES)


def test_criterion_7_triangle_faces(k1_frag):
    res = _redundant(k1_frag)
    assert all(j > 8 for j, _ in res.data["mismatched"])


def test_criterion_7_singleton_faces_as_printed(k1_frag):
    res = _redundant(k1_frag)
    assert res.data["mismatched"] == [], res.witness


def test_criterion_7_projection(k1_frag):
    res = _redundant(k1_frag)
    assert len(res.data["proj_y"]) == 16


def test_criterion_7_ideal(k1_frag):
    res = timed(7, check_ideal, k1_frag)
    assert res.ok and len(k1_frag.variables) == 13


def test_criterion_7_runtime():
    assert _elapsed[7] < TIME_LIMIT[7]


# 8. 6-stencil


@pytest.mark.parametrize("size", [4, 8])
def test_criterion_8_stencil_levels(size):
    for seed in range(25):
        gt = gen_random_triangulation(size, size, seed, values=False)
        cover = six_stencil_cover(gt)
        assert len(cover.levels) <= 6
        assert check_biclique_representation(gt.points, triangles(gt), cover, relaxed=True).ok


@pytest.mark.slow
@pytest.mark.parametrize("d1,d2,seed", [(2, 2, 0), (2, 2, 1), (3, 2, 0)])
def test_criterion_8_face_union(d1, d2, seed):
    gt = gen_random_triangulation(d1, d2, seed, values=False)
    frag = build_bivariate(gt, "logib", "zzi", six_stencil_cover(gt))
    assert check_face_union(frag, triangles(gt)).ok


def test_criterion_8_ideal_zzi():
    gt = gen_random_triangulation(2, 2, 0, values=False)
    frag = build_bivariate(gt, "zzi", "zzi", six_stencil_cover(gt))
    assert check_ideal(frag).ok


# 9. determinism


@pytest.mark.slow
def test_criterion_9_emit_and_gen(tmp_path):
    import json

    src = tmp_path / "ex.json"
    src.write_text(json.dumps(instance_to_dict(EXAMPLE_8)))
    gen_args = [
        ["--family", "transport-univariate", "--segments", "8", "--seed", "1"],
        ["--family", "bivariate-grid", "--segments", "2", "--seed", "1"],
    ]
    for run in (1, 2):
        for fmt in ("lp", "mps"):
            for m in METHODS:
                out = tmp_path / f"run{run}" / f"{m}.{fmt}"
                out.parent.mkdir(exist_ok=True)
                assert main(["emit", "--input", str(src), "--method", m, "--format", fmt, "--out", str(out)]) == 0
        for k, args in enumerate(gen_args):
            assert main(["gen", *args, "--out", str(tmp_path / f"gen{run}_{k}")]) == 0
    for f in sorted((tmp_path / "run1").iterdir()):
        assert f.read_bytes() == (tmp_path / "run2" / f.name).read_bytes(), f.name
    for k in range(len(gen_args)):
        files = sorted((tmp_path / f"gen1_{k}").iterdir())
        assert files
        for f in files:
            assert f.read_bytes() == (tmp_path / f"gen2_{k}" / f.name).read_bytes(), f.name
