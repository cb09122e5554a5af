"""Finite embedding problems for surface groups: solvers, Reidemeister-Schreier
checks, twisted wreath products and diamond obstructions."""

__version__ = "0.1.0"

from .fingroup import (CapExceeded, FiniteGroup, GroupAction, GroupError, GroupHom, Perm,
                       SemidirectProduct, Subgroup, cyclic, dihedral, direct_product, symmetric)
from .supernatural import Supernatural
from .surface import SurfaceAssignment, SurfacePresentation, enumerate_representations
from .cosetenum import reidemeister_schreier, todd_coxeter
from .embedding import FSEP, brute_solve, pigeonhole_solve, split_problem
from .wreath import TwistedWreath, induce_problem
from .diamond import DiamondInstance, fj_scan, obstruction_scan
from .groupexpr import elaborate, parse_group

__all__ = [
    "CapExceeded", "FiniteGroup", "GroupAction", "GroupError", "GroupHom", "Perm",
    "SemidirectProduct", "Subgroup", "cyclic", "dihedral", "direct_product", "symmetric",
    "Supernatural", "SurfaceAssignment", "SurfacePresentation", "enumerate_representations",
    "reidemeister_schreier", "todd_coxeter", "FSEP", "brute_solve", "pigeonhole_solve",
    "split_problem", "TwistedWreath", "induce_problem", "DiamondInstance", "fj_scan",
    "obstruction_scan", "elaborate", "parse_group",
]
