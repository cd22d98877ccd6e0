"""High-level entry points: add z = f(x) or z = f(x1, x2) to a model."""

from __future__ import annotations

from fractions import Fraction

from pwlgen.bivariate import GridTriangulation, build_bivariate, six_stencil_cover
from pwlgen.errors import DomainMismatch, UnknownMethod
from pwlgen.formulations import METHODS, Fragment, UnivariatePWL, build_inc, build_mc, build_sos2
from pwlgen.model import Model


def _block_prefix(model: Model) -> str:
    k = 1
    while any(name.startswith(f"f{k}_") for name in model.variables):
        k += 1
    return f"f{k}_"


def _check_domain(model: Model, x: str, lo: Fraction, hi: Fraction) -> None:
    if x not in model.variables:
        raise ValueError(f"unknown variable {x!r}")
    var = model.variables[x]
    if var.lower is None or var.upper is None or var.lower < lo or var.upper > hi:
        raise DomainMismatch(f"bounds of {x} [{var.lower}, {var.upper}] are not inside [{lo}, {hi}]")


def _splice(model: Model, frag: Fragment, prefix: str, keep: dict[str, str]) -> dict[str, str]:
    """Copy a fragment into the model; ``keep`` maps fragment names onto
    existing model variables, everything else gets ``prefix``."""
    names = {v.name: keep.get(v.name, prefix + v.name) for v in frag.variables}
    for v in frag.variables:
        if v.name not in keep:
            model.add_variable(names[v.name], v.kind, v.lower, v.upper)
    for con in frag.constraints:
        model.add_constraint({names[k]: c for k, c in con.coeffs.items()}, con.sense, con.rhs, prefix + con.name)
    return names


def add_univariate_pwl(model: Model, x: str, pwl: UnivariatePWL, method: str) -> str:
    """Model z = pwl(x) with the named formulation and return z's name."""
    method = method.lower()
    if method not in METHODS:
        raise UnknownMethod(f"{method!r} is not one of {', '.join(METHODS)}")
    lo, hi = pwl.domain
    _check_domain(model, x, lo, hi)
    prefix = _block_prefix(model)
    z = model.add_variable(prefix + "z", "continuous", None, None)
    if pwl.d == 1:
        (slope, icpt), = pwl.pieces()
        model.add_constraint({z: 1, x: -slope}, "=", icpt, prefix + "affine")
        return z
    if method in ("mc", "inc"):
        frag = build_mc(pwl) if method == "mc" else build_inc(pwl)
        _splice(model, frag, prefix, {frag.x_name: x, frag.z_name: z})
        return z
    frag = build_sos2(method, pwl.d)
    names = _splice(model, frag, prefix, {})
    lams = [names[n] for n in frag.lambdas]
    model.add_constraint({x: 1, **{lam: -t for lam, t in zip(lams, pwl.breakpoints)}}, "=", 0, prefix + "link_x")
    model.add_constraint({z: 1, **{lam: -f for lam, f in zip(lams, pwl.values)}}, "=", 0, prefix + "link_z")
    return z


def add_bivariate_pwl(
    model: Model, x1: str, x2: str, gt: GridTriangulation, method_x: str, method_y: str | None = None
) -> str:
    """Model z = f(x1, x2) over a grid triangulation with SOS2 formulations on
    each axis and the 6-stencil triangle selection."""
    method_y = method_y or method_x
    _check_domain(model, x1, gt.xbreaks[0], gt.xbreaks[-1])
    _check_domain(model, x2, gt.ybreaks[0], gt.ybreaks[-1])
    frag = build_bivariate(gt, method_x, method_y, six_stencil_cover(gt))
    prefix = _block_prefix(model)
    z = model.add_variable(prefix + "z", "continuous", None, None)
    names = _splice(model, frag, prefix, {})
    rows = {x1: {x1: 1}, x2: {x2: 1}, z: {z: 1}}
    for lam, p in zip(frag.lambdas, frag.ground):
        tx, ty, f = gt.coordinates(p)
        for var, coef in ((x1, tx), (x2, ty), (z, f)):
            rows[var][names[lam]] = -coef
    model.add_constraint(rows[x1], "=", 0, prefix + "link_x1")
    model.add_constraint(rows[x2], "=", 0, prefix + "link_x2")
    model.add_constraint(rows[z], "=", 0, prefix + "link_z")
    return z
