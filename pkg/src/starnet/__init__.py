"""Free star-autonomous categories as linkings modulo rewiring."""

from __future__ import annotations

from .base import BaseCategoryError, BaseGraph, PathMorphism, compose_path, identity_path
from .criterion import BACKEND, InternalFault
from .goi import Endpoint, Leaf, PartialLeafFun, Sign, SignedSet, compose_plf, src, tgt
from .linking import (
    Linking,
    LinkingError,
    SwitchingReport,
    assoc,
    assoc_inv,
    check_linking,
    check_switching_bruteforce,
    compatibility_check,
    compose,
    curry,
    dual_mor,
    gen,
    identity,
    sym,
    tensor_mor,
    uncurry,
    unit_l,
    unit_l_inv,
    unit_r,
    unit_r_inv,
)
from .shape import CutSequent, Sequent, Shape, leaves, parse_shape, print_shape, sign_at

__version__ = "0.1.0"

__all__ = [
    "BaseCategoryError",
    "BaseGraph",
    "PathMorphism",
    "compose_path",
    "identity_path",
    "BACKEND",
    "InternalFault",
    "Endpoint",
    "Leaf",
    "PartialLeafFun",
    "Sign",
    "SignedSet",
    "compose_plf",
    "src",
    "tgt",
    "Linking",
    "LinkingError",
    "SwitchingReport",
    "assoc",
    "assoc_inv",
    "check_linking",
    "check_switching_bruteforce",
    "compatibility_check",
    "compose",
    "curry",
    "dual_mor",
    "gen",
    "identity",
    "sym",
    "tensor_mor",
    "uncurry",
    "unit_l",
    "unit_l_inv",
    "unit_r",
    "unit_r_inv",
    "CutSequent",
    "Sequent",
    "Shape",
    "leaves",
    "parse_shape",
    "print_shape",
    "sign_at",
    "__version__",
]
