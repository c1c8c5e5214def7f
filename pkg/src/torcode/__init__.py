"""Exact arithmetic codings of hyperbolic automorphisms of the 2-torus.

Modules: qfield (quadratic field arithmetic), binforms (indefinite binary
quadratic forms), glz (GL(2,Z) conjugacy and kernels), betasym (symbolic
compacta and word arithmetic), coding (the coding map and its inversion),
cli (command-line front end).
"""

from .qfield import QuadExt, UnitGroupDesc, pell_fundamental_unit, unit_group_of_order
from .intmat import Mat2
from .binforms import BinForm, ReductionCycle, associated_form
from .glz import KernelGroup, companion, is_conjugate, kernel_group
from .betasym import Compactum, SymWord, make_word
from .coding import CodingSpec, HomoclinicPoint, TorusPoint, decode, enumerate_bac, enumerate_mac, phi_eval

__all__ = [
    "QuadExt",
    "UnitGroupDesc",
    "pell_fundamental_unit",
    "unit_group_of_order",
    "Mat2",
    "BinForm",
    "ReductionCycle",
    "associated_form",
    "KernelGroup",
    "companion",
    "is_conjugate",
    "kernel_group",
    "Compactum",
    "SymWord",
    "make_word",
    "CodingSpec",
    "HomoclinicPoint",
    "TorusPoint",
    "decode",
    "enumerate_bac",
    "enumerate_mac",
    "phi_eval",
]

__version__ = "0.1.0"
