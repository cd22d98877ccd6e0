"""Print branching tables for the four- and eight-piece concave examples."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from pwlgen.formulations import UnivariatePWL
from pwlgen.verification import branching_table


@dataclass
class TableConfig:
    pieces: int = 4
    methods: tuple[str, ...] = ("log", "zzi")


def concave_example(pieces: int) -> UnivariatePWL:
    """Slopes pieces, pieces-1, ..., 1 on unit breakpoints."""
    values = [0]
    for s in range(pieces, 0, -1):
        values.append(values[-1] + s)
    return UnivariatePWL(tuple(range(pieces + 1)), tuple(values))


def run(cfg: TableConfig) -> str:
    return branching_table(concave_example(cfg.pieces), list(cfg.methods))


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--pieces", type=int, nargs="+", default=[4, 8])
    p.add_argument("--methods", default="log,zzi")
    args = p.parse_args()
    for n in args.pieces:
        cfg = TableConfig(n, tuple(args.methods.split(",")))
        print(f"# {n} pieces")
        print(run(cfg))
        print()


if __name__ == "__main__":
    main()
