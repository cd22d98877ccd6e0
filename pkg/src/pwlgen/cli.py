"""``pwlgen`` command line.

Exit status: 0 on success, 1 when a requested check fails, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pwlgen.bivariate import GridTriangulation, build_bivariate, six_stencil_cover, triangles
from pwlgen.encodings import CodeKind, brgc, truncate, zigzag_binary, zigzag_integer
from pwlgen.errors import PWLError
from pwlgen.formulations import METHODS
from pwlgen.instances import gen_bivariate_transport, gen_transport_univariate, load_instance, single_model
from pwlgen.lpwrite import emit_lp, emit_mps
from pwlgen.verification import (
    VerificationReport,
    branching_metrics,
    branching_table,
    check_biclique_representation,
    check_face_union,
    check_ideal,
    check_sharp_lambda,
    format_rational,
    verify_univariate,
)

CHECKS = ("ideal", "sharp", "faces", "cover")
BIVARIATE_METHODS = tuple(m for m in METHODS if m not in ("mc", "inc"))


class UsageError(Exception):
    pass


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_emit(args) -> int:
    inst = load_instance(args.input)
    model = single_model(inst, args.method, args.method_y)
    _write(emit_lp(model) if args.format == "lp" else emit_mps(model), args.out)
    return 0


def _verify_bivariate(gt: GridTriangulation, mx: str, my: str, checks) -> VerificationReport:
    cover = six_stencil_cover(gt)
    frag = build_bivariate(gt, mx, my, cover)
    tris = triangles(gt)
    report = VerificationReport()
    for check in checks:
        if check == "ideal":
            report.add(check_ideal(frag))
        elif check == "sharp":
            report.add(check_sharp_lambda(frag))
        elif check == "faces":
            report.add(check_face_union(frag, tris))
        elif check == "cover":
            report.add(check_biclique_representation(gt.points, tris, cover, relaxed=True))
    return report


def cmd_verify(args) -> int:
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(unknown)}")
    inst = load_instance(args.input)
    if isinstance(inst, GridTriangulation):
        report = _verify_bivariate(inst, args.method, args.method_y or args.method, checks)
    else:
        report = verify_univariate(inst, args.method, checks)
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


def cmd_analyze(args) -> int:
    inst = load_instance(args.input)
    if isinstance(inst, GridTriangulation):
        raise UsageError("branching analysis needs a univariate instance")
    methods = [m.strip() for m in args.method.split(",")]
    if args.table:
        print(branching_table(inst, methods))
        return 0
    for m in methods:
        res = branching_metrics(inst, m, args.branch)
        print(f"{m} {args.branch or 'unbranched'}")
        print(f"  volume: {format_rational(res.volume)}")
        print(f"  strengthened proportion: {format_rational(res.strengthened_proportion)}")
    return 0


def cmd_encode(args) -> int:
    make = {CodeKind.BRGC: brgc, CodeKind.ZZ_INTEGER: zigzag_integer, CodeKind.ZZ_BINARY: zigzag_binary}
    code = make[CodeKind(args.code)](args.r)
    if args.d is not None:
        code = truncate(code, args.d)
    print(code)
    return 0


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.family == "transport-univariate":
        inst = gen_transport_univariate(args.m, args.n, args.segments, args.seed, args.drop)
        methods = METHODS
    else:
        if args.drop:
            raise UsageError("--drop applies to the univariate family only")
        inst = gen_bivariate_transport(args.m, args.n, args.segments, args.seed)
        methods = BIVARIATE_METHODS
    (out / "instance.json").write_text(json.dumps(inst.to_dict(), indent=1, sort_keys=True) + "\n")
    for m in methods:
        (out / f"{m}.mps").write_text(emit_mps(inst.model(m)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pwlgen", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("emit", help="write a model as LP or MPS")
    e.add_argument("--input", required=True)
    e.add_argument("--method", required=True, choices=METHODS)
    e.add_argument("--method-y", choices=BIVARIATE_METHODS)
    e.add_argument("--format", choices=("lp", "mps"), default="lp")
    e.add_argument("--out")
    e.set_defaults(func=cmd_emit)

    v = sub.add_parser("verify", help="certify structural properties")
    v.add_argument("--input", required=True)
    v.add_argument("--method", required=True, choices=METHODS)
    v.add_argument("--method-y", choices=BIVARIATE_METHODS)
    v.add_argument("--checks", default=",".join(CHECKS))
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="relaxation metrics after one branch")
    a.add_argument("--input", required=True)
    a.add_argument("--method", required=True, help="method, or comma-separated methods with --table")
    a.add_argument("--branch", help='single bound such as "y1<=0"')
    a.add_argument("--table", action="store_true", help="every branch on y1, side by side")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("encode", help="print a code matrix")
    c.add_argument("--code", required=True, choices=("brgc", "zzi", "zzb"))
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--d", type=int)
    c.set_defaults(func=cmd_encode)

    g = sub.add_parser("gen", help="seeded benchmark instances")
    g.add_argument("--family", required=True, choices=("transport-univariate", "bivariate-grid"))
    g.add_argument("--segments", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--drop", action="store_true")
    g.add_argument("--out", required=True)
    g.add_argument("--m", type=int, default=None, help="sources (default 10, or 5 for bivariate)")
    g.add_argument("--n", type=int, default=None, help="sinks (default 10, or 5 for bivariate)")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "family", None):
        default = 10 if args.family == "transport-univariate" else 5
        args.m = args.m or default
        args.n = args.n or default
    try:
        return args.func(args)
    except (UsageError, PWLError, ValueError, KeyError, OSError) as exc:
        code = getattr(exc, "code", "USAGE")
        print(f"pwlgen: {code}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
