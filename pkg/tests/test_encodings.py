import pytest
from hypothesis import given, strategies as st

from pwlgen.encodings import (
    CodeKind,
    CodeMatrix,
    brgc,
    code_for,
    truncate,
    validate_encoding,
    zigzag_binary,
    zigzag_integer,
    zigzag_inverse,
    zigzag_map,
)
from pwlgen.errors import OutOfRange, ScaleLimit, TooLarge


def test_brgc_small():
    assert brgc(1).rows == ((0,), (1,))
    assert brgc(2).rows == ((0, 0), (1, 0), (1, 1), (0, 1))


def test_zigzag_small():
    assert zigzag_integer(1).rows == ((0,), (1,))
    assert zigzag_integer(2).rows == ((0, 0), (1, 0), (1, 1), (2, 1))
    assert zigzag_binary(1).rows == ((0,), (1,))
    assert zigzag_binary(2).rows == ((0, 0), (1, 0), (0, 1), (1, 1))
    assert zigzag_binary(3).rows[4] == (0, 0, 1)


@pytest.mark.parametrize("make", [brgc, zigzag_integer, zigzag_binary])
@pytest.mark.parametrize("r", [0, 21])
def test_r_out_of_range(make, r):
    with pytest.raises(OutOfRange):
        make(r)


@pytest.mark.parametrize("r", range(1, 11))
def test_zigzag_columns(r):
    C = zigzag_integer(r).rows
    for col in zip(*C):
        assert all(a <= b for a, b in zip(col, col[1:]))
    assert C[-1] == tuple(2 ** (r - 1 - i) for i in range(r))
    steps = {tuple(b - a for a, b in zip(p, q)) for p, q in zip(C, C[1:])}
    assert steps == {tuple(int(i == k) for i in range(r)) for k in range(r)}


@pytest.mark.parametrize("r", range(1, 9))
def test_binary_zigzag_is_binary_counting(r):
    rows = zigzag_binary(r).rows
    assert rows == tuple(tuple((j >> i) & 1 for i in range(r)) for j in range(2**r))


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=8))
def test_map_and_inverse_compose_to_identity(y):
    assert zigzag_map(zigzag_inverse(y)) == tuple(y)
    assert zigzag_inverse(zigzag_map(y)) == tuple(y)


def test_inverse_small_case():
    assert zigzag_inverse((0, 0)) == (0, 0)
    assert zigzag_inverse((1, 1)) == (2, 1)


def test_truncate():
    assert truncate(brgc(2), 3).rows == ((0, 0), (1, 0), (1, 1))
    assert truncate(brgc(3), 8) == brgc(3)
    six = truncate(zigzag_integer(3), 6)
    assert six.rows == zigzag_integer(3).rows[:6] and six.kind is CodeKind.ZZ_INTEGER
    with pytest.raises(TooLarge):
        truncate(brgc(2), 5)


def test_code_for_uses_the_next_power_of_two():
    assert code_for("brgc", 3).rows == ((0, 0), (1, 0), (1, 1))
    assert code_for("zzi", 6).r == 3
    assert code_for("brgc", 1).rows == ((0,),)


def test_code_matrix_invariants():
    with pytest.raises(ValueError):
        CodeMatrix(((0,), (0,)))
    with pytest.raises(ValueError):
        CodeMatrix(((0,), (2,)), CodeKind.BRGC)
    assert str(zigzag_integer(2)) == "0\t0\n1\t0\n1\t1\n2\t1"


def test_validate_encoding_reports():
    report = validate_encoding([(0,), (2,)])
    assert report.distinct_rows and report.in_convex_position
    assert not report.lattice_empty and report.witness == (1,)
    dup = validate_encoding([(0, 0), (1, 0), (0, 0)])
    assert not dup.distinct_rows
    inner = validate_encoding([(0, 0), (2, 0), (0, 2), (1, 1)])
    assert not inner.in_convex_position
    with pytest.raises(ScaleLimit):
        validate_encoding(brgc(7))


@pytest.mark.parametrize("d", range(2, 9))
def test_truncated_codes_stay_valid(d):
    for kind in ("brgc", "zzi", "zzb"):
        assert validate_encoding(code_for(kind, d)).ok
