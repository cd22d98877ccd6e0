"""JSON instance files and seeded benchmark generators.

Random draws come from numpy's PCG64 bit generator seeded through
``SeedSequence``; integers are produced from raw 64-bit outputs by rejection
sampling written here, so the streams do not depend on numpy's
distribution code.  This scheme is tagged ``pcg64-v1`` in generated files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from pwlgen.api import add_bivariate_pwl, add_univariate_pwl
from pwlgen.bivariate import SENW, SWNE, GridTriangulation
from pwlgen.formulations import UnivariatePWL
from pwlgen.lpwrite import render
from pwlgen.model import Model

RNG_TAG = "pcg64-v1"


# parsing


def parse_number(value) -> Fraction:
    """Exact value of a JSON number or a decimal/fraction string."""
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"cannot read {value!r} as an exact number")


def loads(text: str) -> dict:
    # float literals reach us as their source text, never as binary doubles
    return json.loads(text, parse_float=Fraction)


def instance_from_dict(data: dict) -> UnivariatePWL | GridTriangulation:
    kind = data.get("type")
    if kind == "univariate":
        return UnivariatePWL(
            tuple(parse_number(t) for t in data["breakpoints"]),
            tuple(parse_number(f) for f in data["values"]),
        )
    if kind == "bivariate":
        xb = [parse_number(t) for t in data["xbreaks"]]
        yb = [parse_number(t) for t in data["ybreaks"]]
        vals = data["values"]
        diags = data["diagonals"]
        values = {(i + 1, j + 1): parse_number(vals[i][j]) for i in range(len(xb)) for j in range(len(yb))}
        diag = {
            (i + 1, j + 1): str(diags[i][j]).lower() for i in range(len(xb) - 1) for j in range(len(yb) - 1)
        }
        return GridTriangulation(tuple(xb), tuple(yb), values, diag)
    raise ValueError(f"instance type must be 'univariate' or 'bivariate', got {kind!r}")


def load_instance(path: str | Path) -> UnivariatePWL | GridTriangulation:
    return instance_from_dict(loads(Path(path).read_text()))


def instance_to_dict(obj: UnivariatePWL | GridTriangulation) -> dict:
    if isinstance(obj, UnivariatePWL):
        return {
            "type": "univariate",
            "breakpoints": [render(t) for t in obj.breakpoints],
            "values": [render(f) for f in obj.values],
        }
    return {
        "type": "bivariate",
        "xbreaks": [render(t) for t in obj.xbreaks],
        "ybreaks": [render(t) for t in obj.ybreaks],
        "values": [[render(obj.values[(i, j)]) for j in range(1, obj.d2 + 2)] for i in range(1, obj.d1 + 2)],
        "diagonals": [[obj.diag[(i, j)] for j in range(1, obj.d2 + 1)] for i in range(1, obj.d1 + 1)],
    }


def single_model(obj: UnivariatePWL | GridTriangulation, method: str, method_y: str | None = None) -> Model:
    """min z subject to z = f(x) over the whole domain."""
    model = Model("pwl")
    if isinstance(obj, UnivariatePWL):
        lo, hi = obj.domain
        x = model.add_variable("x", "continuous", lo, hi)
        z = add_univariate_pwl(model, x, obj, method)
    else:
        x1 = model.add_variable("x1", "continuous", obj.xbreaks[0], obj.xbreaks[-1])
        x2 = model.add_variable("x2", "continuous", obj.ybreaks[0], obj.ybreaks[-1])
        z = add_bivariate_pwl(model, x1, x2, obj, method, method_y)
    model.set_objective({z: 1})
    return model


# random streams


class Stream:
    """Uniform integers from raw PCG64 output."""

    def __init__(self, seed_seq: np.random.SeedSequence):
        self._bits = np.random.PCG64(seed_seq)

    def raw(self) -> int:
        return int(self._bits.random_raw())

    def integer(self, lo: int, hi: int) -> int:
        """Uniform on [lo, hi]."""
        span = hi - lo + 1
        if span <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - (1 << 64) % span
        while True:
            r = self.raw()
            if r < limit:
                return lo + r % span

    def sample(self, lo: int, hi: int, k: int) -> list[int]:
        """k distinct integers from [lo, hi], in increasing order."""
        if hi - lo + 1 < k:
            raise ValueError("range too small for a sample without replacement")
        pool = list(range(lo, hi + 1))
        for i in range(k):
            j = self.integer(i, len(pool) - 1)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])


def streams(seed: int, count: int) -> list[Stream]:
    return [Stream(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _concave_pwl(stream: Stream, upper: int, pieces: int, drop: bool) -> UnivariatePWL:
    """Nondecreasing concave function on [0, upper] with integer breakpoints
    and strictly decreasing positive integer slopes."""
    inner = stream.sample(1, upper - 1, pieces - 1)
    slopes = sorted(stream.sample(1, 20 * pieces, pieces), reverse=True)
    bps = [0] + inner + [upper]
    vals = [stream.integer(0, 10 * pieces)]
    for (a, b), s in zip(zip(bps, bps[1:]), slopes):
        vals.append(vals[-1] + s * (b - a))
    if drop:
        k = pieces.bit_length() - 2  # log2(N) - 1
        gone = set(stream.sample(1, pieces - 1, k)) if k > 0 else set()
        keep = [i for i in range(len(bps)) if i not in gone]
        bps = [bps[i] for i in keep]
        vals = [vals[i] for i in keep]
    return UnivariatePWL(tuple(bps), tuple(vals))


def _balanced(stream: Stream, m: int, n: int, lo: int, hi: int) -> tuple[list[int], list[int]]:
    supply = [stream.integer(lo, hi) for _ in range(m)]
    demand = [stream.integer(lo, hi) for _ in range(n)]
    gap = sum(supply) - sum(demand)
    # top up the short side one unit at a time
    side = demand if gap > 0 else supply
    for _ in range(abs(gap)):
        side[stream.integer(0, len(side) - 1)] += 1
    return supply, demand


@dataclass
class TransportInstance:
    """Balanced transportation problem with a PWL cost on every arc."""

    supplies: list[int]
    demands: list[int]
    costs: dict[tuple[int, int], UnivariatePWL]
    seed: int
    family: str = "transport-univariate"
    meta: dict[str, Any] = field(default_factory=dict)

    def model(self, method: str) -> Model:
        model = Model(f"transport_{self.seed}")
        zs = {}
        for (i, j), pwl in sorted(self.costs.items()):
            x = model.add_variable(f"x_{i}_{j}", "continuous", 0, pwl.domain[1])
            zs[(i, j)] = add_univariate_pwl(model, x, pwl, method)
        for i, s in enumerate(self.supplies, 1):
            model.add_constraint({f"x_{i}_{j}": 1 for j in range(1, len(self.demands) + 1)}, "=", s, f"supply_{i}")
        for j, d in enumerate(self.demands, 1):
            model.add_constraint({f"x_{i}_{j}": 1 for i in range(1, len(self.supplies) + 1)}, "=", d, f"demand_{j}")
        model.set_objective({z: 1 for z in zs.values()})
        return model

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "seed": self.seed,
            "rng": RNG_TAG,
            **self.meta,
            "supplies": self.supplies,
            "demands": self.demands,
            "arcs": [
                {"source": i, "sink": j, **instance_to_dict(pwl)} for (i, j), pwl in sorted(self.costs.items())
            ],
        }


def gen_transport_univariate(m: int, n: int, segments: int, seed: int, drop: bool = False) -> TransportInstance:
    if m * n < 1:
        raise ValueError("need at least one arc")
    if segments < 2 or segments & (segments - 1):
        raise ValueError("segments must be a power of two >= 2")
    first, *arcs = streams(seed, 1 + m * n)
    supplies, demands = _balanced(first, m, n, 10 * segments, 20 * segments)
    costs = {}
    for k, st in enumerate(arcs):
        i, j = divmod(k, n)
        upper = min(supplies[i], demands[j])
        costs[(i + 1, j + 1)] = _concave_pwl(st, upper, segments, drop)
    meta = {"m": m, "n": n, "segments": segments, "drop": drop}
    return TransportInstance(supplies, demands, costs, seed, meta=meta)


def gen_random_triangulation(
    d1: int, d2: int, seed: int, force: str | None = None, values: bool = True
) -> GridTriangulation:
    """Uniformly random diagonals; ``force`` pins every cell to one
    orientation.  Values, when requested, are a seeded minimum of increasing
    affine functions, hence concave and nondecreasing."""
    if force is not None and force not in (SWNE, SENW):
        raise ValueError("force must be 'swne' or 'senw'")
    diag_stream, value_stream = streams(seed, 2)
    diag = {}
    for j in range(1, d2 + 1):
        for i in range(1, d1 + 1):
            diag[(i, j)] = force or (SWNE if diag_stream.integer(0, 1) else SENW)
    points = [(i, j) for i in range(1, d1 + 2) for j in range(1, d2 + 2)]
    if values:
        planes = [
            (value_stream.integer(1, 20), value_stream.integer(1, 20), value_stream.integer(0, 50))
            for _ in range(4)
        ]
        vals = {(i, j): min(a * (i - 1) + b * (j - 1) + c for a, b, c in planes) for i, j in points}
    else:
        vals = {p: 0 for p in points}
    return GridTriangulation(tuple(range(d1 + 1)), tuple(range(d2 + 1)), vals, diag)


@dataclass
class BivariateTransportInstance:
    """Two commodities share each arc; the arc cost is a bivariate PWL of the
    two flows."""

    supplies: list[list[int]]
    demands: list[list[int]]
    costs: dict[tuple[int, int], GridTriangulation]
    seed: int
    family: str = "bivariate-grid"
    meta: dict[str, Any] = field(default_factory=dict)

    def model(self, method: str, method_y: str | None = None) -> Model:
        model = Model(f"bivariate_{self.seed}")
        m, n = len(self.supplies[0]), len(self.demands[0])
        zs = []
        for (i, j), gt in sorted(self.costs.items()):
            x1 = model.add_variable(f"x1_{i}_{j}", "continuous", 0, gt.xbreaks[-1])
            x2 = model.add_variable(f"x2_{i}_{j}", "continuous", 0, gt.ybreaks[-1])
            zs.append(add_bivariate_pwl(model, x1, x2, gt, method, method_y))
        for c in (1, 2):
            for i, s in enumerate(self.supplies[c - 1], 1):
                model.add_constraint({f"x{c}_{i}_{j}": 1 for j in range(1, n + 1)}, "=", s, f"supply{c}_{i}")
            for j, d in enumerate(self.demands[c - 1], 1):
                model.add_constraint({f"x{c}_{i}_{j}": 1 for i in range(1, m + 1)}, "=", d, f"demand{c}_{j}")
        model.set_objective({z: 1 for z in zs})
        return model

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "seed": self.seed,
            "rng": RNG_TAG,
            **self.meta,
            "supplies": self.supplies,
            "demands": self.demands,
            "arcs": [
                {"source": i, "sink": j, **instance_to_dict(gt)} for (i, j), gt in sorted(self.costs.items())
            ],
        }


def gen_bivariate_transport(m: int, n: int, segments: int, seed: int) -> BivariateTransportInstance:
    """Default shape: 5 x 5 arcs, so 25 bivariate cost terms."""
    first, *arcs = streams(seed, 1 + m * n)
    sup1, dem1 = _balanced(first, m, n, 10 * segments, 20 * segments)
    sup2, dem2 = _balanced(first, m, n, 10 * segments, 20 * segments)
    costs = {}
    for k, st in enumerate(arcs):
        i, j = divmod(k, n)
        u1 = min(sup1[i], dem1[j])
        u2 = min(sup2[i], dem2[j])
        unit = gen_random_triangulation(segments, segments, st.integer(0, 2**63 - 1))
        # integer breakpoints spanning [0, u1] x [0, u2]
        xb = [0] + st.sample(1, u1 - 1, segments - 1) + [u1]
        yb = [0] + st.sample(1, u2 - 1, segments - 1) + [u2]
        costs[(i + 1, j + 1)] = GridTriangulation(tuple(xb), tuple(yb), unit.values, unit.diag)
    meta = {"m": m, "n": n, "segments": segments}
    return BivariateTransportInstance([sup1, sup2], [dem1, dem2], costs, seed, meta=meta)
