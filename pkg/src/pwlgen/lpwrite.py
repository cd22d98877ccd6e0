"""CPLEX LP and free MPS writers.

Numbers are written exactly when the reduced fraction has a short
terminating decimal expansion; anything else is rounded to 17 significant
digits and reported through the ``pwlgen.emit`` logger.
"""

from __future__ import annotations

import logging
from decimal import Context, Decimal
from fractions import Fraction

from pwlgen.errors import EmptyModel, NameTooLong
from pwlgen.model import Model

log = logging.getLogger("pwlgen.emit")

MAX_NAME = 255
MAX_EXACT_DIGITS = 18
ROUND_DIGITS = 17
LINE_WIDTH = 200


def _decimal_places(den: int) -> int | None:
    """k with den | 10^k, or None when the expansion does not terminate."""
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    return max(twos, fives) if den == 1 else None


def render(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    k = _decimal_places(q.denominator)
    if k is not None:
        text = format(Decimal(q.numerator * 10**k // q.denominator).scaleb(-k), "f")
        if len(text.replace("-", "").replace(".", "").lstrip("0")) <= MAX_EXACT_DIGITS:
            return text
    approx = Context(prec=ROUND_DIGITS).divide(Decimal(q.numerator), Decimal(q.denominator))
    text = format(approx, "f")
    log.warning("coefficient %s written inexactly as %s", q, text)
    return text


def _check(model: Model) -> None:
    if not model.variables:
        raise EmptyModel("model has no variables")
    for name in list(model.variables) + [c.name for c in model.constraints] + [model.name]:
        if len(name) > MAX_NAME:
            raise NameTooLong(f"name of length {len(name)} exceeds {MAX_NAME}: {name[:40]}...")


def _expr(coeffs) -> list[str]:
    terms = []
    for name, c in coeffs.items():
        body = name if abs(c) == 1 else f"{render(abs(c))} {name}"
        if terms:
            terms.append(f"{'-' if c < 0 else '+'} {body}")
        else:
            terms.append(f"-{body}" if c < 0 else body)
    return terms


def _wrap(head: str, terms: list[str], tail: str = "") -> list[str]:
    lines, cur = [], head
    for t in terms + ([tail] if tail else []):
        if len(cur) + 1 + len(t) > LINE_WIDTH and cur.strip():
            lines.append(cur)
            cur = "   "
        cur += " " + t
    lines.append(cur)
    return lines


def emit_lp(model: Model) -> str:
    _check(model)
    sense = {"<=": "<=", "=": "=", ">=": ">="}
    out = [f"\\ Problem: {model.name}", "Minimize" if model.objective_sense == "min" else "Maximize"]
    first = next(iter(model.variables))
    out += _wrap(" obj:", _expr(model.objective) or [f"0 {first}"])
    out.append("Subject To")
    for con in model.constraints:
        terms = _expr(con.coeffs) or [f"0 {first}"]
        out += _wrap(f" {con.name}:", terms, f"{sense[con.sense]} {render(con.rhs)}")
    out.append("Bounds")
    for v in model.variables.values():
        if v.kind == "binary":
            continue
        lo, hi = v.lower, v.upper
        if lo is None and hi is None:
            out.append(f" {v.name} free")
        elif lo is not None and hi is not None and lo == hi:
            out.append(f" {v.name} = {render(lo)}")
        elif lo is None:
            out.append(f" -inf <= {v.name} <= {render(hi)}")
        elif hi is None:
            if lo != 0:
                out.append(f" {v.name} >= {render(lo)}")
        elif lo == 0:
            out.append(f" {v.name} <= {render(hi)}")
        else:
            out.append(f" {render(lo)} <= {v.name} <= {render(hi)}")
    generals = [v.name for v in model.variables.values() if v.kind == "integer"]
    binaries = [v.name for v in model.variables.values() if v.kind == "binary"]
    if generals:
        out.append("Generals")
        out += _wrap("", generals)
    if binaries:
        out.append("Binaries")
        out += _wrap("", binaries)
    out.append("End")
    return "\n".join(out) + "\n"


def emit_mps(model: Model) -> str:
    _check(model)
    out = [f"NAME {model.name}", "OBJSENSE", "    MIN" if model.objective_sense == "min" else "    MAX", "ROWS", " N obj"]
    kind = {"<=": "L", "=": "E", ">=": "G"}
    for con in model.constraints:
        out.append(f" {kind[con.sense]} {con.name}")
    columns: dict[str, list[tuple[str, Fraction]]] = {name: [] for name in model.variables}
    for name, c in model.objective.items():
        columns[name].append(("obj", c))
    for con in model.constraints:
        for name, c in con.coeffs.items():
            columns[name].append((con.name, c))
    out.append("COLUMNS")
    in_int = False
    marker = 0
    for v in model.variables.values():
        if v.is_integer and not in_int:
            out.append(f"    MARKER{marker} 'MARKER' 'INTORG'")
            in_int = True
        elif not v.is_integer and in_int:
            out.append(f"    MARKER{marker} 'MARKER' 'INTEND'")
            marker += 1
            in_int = False
        entries = columns[v.name] or [("obj", Fraction(0))]
        for row, c in entries:
            out.append(f"    {v.name} {row} {render(c)}")
    if in_int:
        out.append(f"    MARKER{marker} 'MARKER' 'INTEND'")
    out.append("RHS")
    for con in model.constraints:
        if con.rhs != 0:
            out.append(f"    RHS {con.name} {render(con.rhs)}")
    out.append("BOUNDS")
    for v in model.variables.values():
        lo, hi = v.lower, v.upper
        if v.kind == "binary":
            out.append(f" BV BND {v.name}")
            continue
        low_tag, up_tag = ("LI", "UI") if v.kind == "integer" else ("LO", "UP")
        if lo is not None and hi is not None and lo == hi:
            out.append(f" FX BND {v.name} {render(lo)}")
            continue
        if lo is None and hi is None:
            out.append(f" FR BND {v.name}")
            continue
        if lo is None:
            out.append(f" MI BND {v.name}")
        elif lo != 0 or v.kind == "integer":
            out.append(f" {low_tag} BND {v.name} {render(lo)}")
        if hi is not None:
            out.append(f" {up_tag} BND {v.name} {render(hi)}")
        elif v.kind == "integer":
            out.append(f" PL BND {v.name}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"
