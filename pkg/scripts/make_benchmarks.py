"""Write a directory of seeded transportation benchmarks, one subdirectory
per (family, segments, seed)."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from pwlgen.cli import main as pwlgen


@dataclass
class BenchConfig:
    out: Path = Path("benchmarks")
    seeds: range = field(default_factory=lambda: range(1, 4))
    univariate_segments: tuple[int, ...] = (4, 8, 16, 32)
    bivariate_segments: tuple[int, ...] = (2, 4, 8)
    drop: bool = False


def jobs(cfg: BenchConfig):
    for n in cfg.univariate_segments:
        for seed in cfg.seeds:
            args = ["--family", "transport-univariate", "--segments", str(n), "--seed", str(seed)]
            if cfg.drop:
                args.append("--drop")
            yield f"univariate_N{n}_s{seed}", args
    for n in cfg.bivariate_segments:
        for seed in cfg.seeds:
            yield f"bivariate_N{n}_s{seed}", ["--family", "bivariate-grid", "--segments", str(n), "--seed", str(seed)]


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=BenchConfig.out)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--drop", action="store_true")
    p.add_argument("--quick", action="store_true", help="smallest sizes only")
    args = p.parse_args()
    cfg = BenchConfig(args.out, range(1, args.seeds + 1), drop=args.drop)
    if args.quick:
        cfg.univariate_segments, cfg.bivariate_segments = (4,), (2,)
    for name, argv in jobs(cfg):
        status = pwlgen(["gen", *argv, "--out", str(cfg.out / name)])
        print(f"{name}: {'ok' if status == 0 else f'exit {status}'}")


if __name__ == "__main__":
    main()
