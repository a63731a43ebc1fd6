"""Exact algebra for surgery bimodules of two-component L-space links."""

from .coefficients import R0Elt, R1Elt, UPrecision
from .dd_calculus import (DDModule, Generator, Module, TypeDModule, cancel_arrow, check_structure,
                          check_u_equivariance, module_from_json, module_to_json, reduce_module, to_dot)
from .lspace_surgery_bimodule import LinkData, build_bimodule
from .staircase import HFunction, KnotH, Staircase, staircase_from_exponents, staircase_from_h_row
from .surgery_algebra import GradingVector, KElt
from .trace_pairing import dual_action, iso_check, knot_surgery_module, pair

__all__ = [
    "R0Elt", "R1Elt", "UPrecision", "DDModule", "Generator", "Module", "TypeDModule",
    "cancel_arrow", "check_structure", "check_u_equivariance", "module_from_json",
    "module_to_json", "reduce_module", "to_dot", "LinkData", "build_bimodule", "HFunction",
    "KnotH", "Staircase", "staircase_from_exponents", "staircase_from_h_row", "GradingVector",
    "KElt", "dual_action", "iso_check", "knot_surgery_module", "pair",
]
