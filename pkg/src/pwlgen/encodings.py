"""Code matrices for embedding formulations: reflected Gray codes and zig-zags."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from pwlgen.errors import OutOfRange, ScaleLimit, TooLarge
from pwlgen.geometry import hull_description, point_in_hull

MAX_R = 20
MAX_LATTICE_R = 6
MAX_LATTICE_D = 64


class CodeKind(enum.Enum):
    BRGC = "brgc"
    ZZ_INTEGER = "zzi"
    ZZ_BINARY = "zzb"
    USER = "user"


@dataclass(frozen=True)
class CodeMatrix:
    rows: tuple[tuple[int, ...], ...]
    kind: CodeKind = CodeKind.USER

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if len({len(row) for row in rows}) > 1:
            raise ValueError("code rows have different lengths")
        if len(set(rows)) != len(rows):
            raise ValueError("code rows must be pairwise distinct")
        if self.kind in (CodeKind.BRGC, CodeKind.ZZ_BINARY) and any(
            x not in (0, 1) for row in rows for x in row
        ):
            raise ValueError(f"{self.kind.value} codes must be binary")

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def r(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(row[i] for row in self.rows)

    def is_binary(self) -> bool:
        return all(x in (0, 1) for row in self.rows for x in row)

    def __str__(self) -> str:
        return "\n".join("\t".join(str(x) for x in row) for row in self.rows)


def _check_r(r: int) -> None:
    if not 1 <= r <= MAX_R:
        raise OutOfRange(f"r must lie in [1, {MAX_R}], got {r}")


def brgc(r: int) -> CodeMatrix:
    """Binary reflected Gray code on 2^r rows; column i is bit i."""
    _check_r(r)
    rows = [(0,), (1,)]
    for _ in range(r - 1):
        rows = [row + (0,) for row in rows] + [row + (1,) for row in reversed(rows)]
    return CodeMatrix(tuple(rows), CodeKind.BRGC)


def _zigzag_integer_by_recursion(r: int) -> list[tuple[int, ...]]:
    rows = [(0,), (1,)]
    for _ in range(r - 1):
        last = rows[-1]
        rows = [row + (0,) for row in rows] + [
            tuple(a + b for a, b in zip(row, last)) + (1,) for row in rows
        ]
    return rows


def zigzag_integer(r: int) -> CodeMatrix:
    """Integer zig-zag code: entry (k, i) counts value changes in BRGC column i
    up to row k."""
    _check_r(r)
    gray = brgc(r).rows
    rows = [tuple([0] * r)]
    for prev, cur in zip(gray, gray[1:]):
        rows.append(tuple(c + abs(a - b) for c, a, b in zip(rows[-1], cur, prev)))
    assert rows == _zigzag_integer_by_recursion(r)
    return CodeMatrix(tuple(rows), CodeKind.ZZ_INTEGER)


def zigzag_map(y: Sequence[int]) -> tuple[int, ...]:
    """The unimodular map taking integer zig-zag rows to binary zig-zag rows:
    component i becomes y_i minus the sum of the later components."""
    return tuple(y[i] - sum(y[i + 1:]) for i in range(len(y)))


def zigzag_inverse(y: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`zigzag_map`: y_i + sum_{k>i} 2^(k-i-1) y_k."""
    n = len(y)
    return tuple(y[i] + sum(2 ** (k - i - 1) * y[k] for k in range(i + 1, n)) for i in range(n))


def zigzag_binary(r: int) -> CodeMatrix:
    _check_r(r)
    rows = [zigzag_map(row) for row in zigzag_integer(r).rows]
    # the recursion [[Z, 0], [Z, 1]] lists binary expansions, least significant first
    assert rows == [tuple((j >> i) & 1 for i in range(r)) for j in range(2**r)]
    return CodeMatrix(tuple(rows), CodeKind.ZZ_BINARY)


def truncate(code: CodeMatrix, d: int) -> CodeMatrix:
    if d > code.d:
        raise TooLarge(f"cannot keep {d} rows of a {code.d}-row code")
    if d < 1:
        raise ValueError("need at least one row")
    return CodeMatrix(code.rows[:d], code.kind)


def log2_ceil(d: int) -> int:
    return max(0, (d - 1).bit_length())


def code_for(kind: str | CodeKind, d: int) -> CodeMatrix:
    """The first d rows of the 2^ceil(log2 d)-row code of the given family."""
    kind = CodeKind(kind)
    r = max(1, log2_ceil(d))
    make = {CodeKind.BRGC: brgc, CodeKind.ZZ_INTEGER: zigzag_integer, CodeKind.ZZ_BINARY: zigzag_binary}
    return truncate(make[kind](r), d)


@dataclass(frozen=True)
class EncodingReport:
    distinct_rows: bool
    in_convex_position: bool
    lattice_empty: bool
    witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.distinct_rows and self.in_convex_position and self.lattice_empty


def validate_encoding(code: CodeMatrix | Sequence[Sequence[int]]) -> EncodingReport:
    rows = [tuple(row) for row in (code.rows if isinstance(code, CodeMatrix) else code)]
    r = len(rows[0])
    if r > MAX_LATTICE_R or len(rows) > MAX_LATTICE_D:
        raise ScaleLimit(f"lattice validation supports r <= {MAX_LATTICE_R}, d <= {MAX_LATTICE_D}")
    distinct = len(set(rows)) == len(rows)
    uniq = list(dict.fromkeys(rows))
    witness = None
    convex = True
    if len(uniq) > 1:
        for i, row in enumerate(uniq):
            if point_in_hull(uniq[:i] + uniq[i + 1:], row):
                convex, witness = False, row
                break
    equalities, facets = hull_description(uniq)
    present = set(uniq)
    lattice = True
    box = [range(min(col), max(col) + 1) for col in zip(*uniq)]
    for q in product(*box):
        if q in present:
            continue
        if all(sum(w * x for w, x in zip(n, q)) == c for n, c in equalities) and all(
            sum(a * x for a, x in zip(n, q)) <= b for n, b in facets
        ):
            lattice = False
            witness = witness or q
            break
    return EncodingReport(distinct, convex, lattice, witness)
