"""Level counts of the 6-stencil cover over seeded random triangulations."""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

from pwlgen.bivariate import six_stencil_cover, triangles
from pwlgen.instances import gen_random_triangulation
from pwlgen.verification import check_biclique_representation


@dataclass
class StencilConfig:
    sizes: tuple[int, ...] = (2, 4, 8, 16)
    seeds: int = 25
    check: bool = True


def run(cfg: StencilConfig) -> dict[int, Counter]:
    out = {}
    for n in cfg.sizes:
        counts = Counter()
        for seed in range(cfg.seeds):
            gt = gen_random_triangulation(n, n, seed, values=False)
            cover = six_stencil_cover(gt)
            if cfg.check and not check_biclique_representation(gt.points, triangles(gt), cover, relaxed=True):
                raise SystemExit(f"cover check failed at size {n}, seed {seed}")
            counts[len(cover.levels)] += 1
        out[n] = counts
    return out


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=list(StencilConfig.sizes))
    p.add_argument("--seeds", type=int, default=StencilConfig.seeds)
    p.add_argument("--no-check", action="store_true")
    args = p.parse_args()
    cfg = StencilConfig(tuple(args.sizes), args.seeds, not args.no_check)
    for n, counts in run(cfg).items():
        hist = ", ".join(f"{k} levels: {v}" for k, v in sorted(counts.items()))
        print(f"{n}x{n}: {hist}")


if __name__ == "__main__":
    main()
