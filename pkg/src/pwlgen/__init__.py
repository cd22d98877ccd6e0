"""Exact MIP formulations for piecewise linear functions."""

from pwlgen.encodings import CodeKind, CodeMatrix, brgc, zigzag_binary, zigzag_integer
from pwlgen.formulations import BicliqueCover, Fragment, UnivariatePWL, build_sos2
from pwlgen.model import Model

__all__ = [
    "BicliqueCover",
    "CodeKind",
    "CodeMatrix",
    "Fragment",
    "Model",
    "UnivariatePWL",
    "brgc",
    "build_sos2",
    "zigzag_binary",
    "zigzag_integer",
]
