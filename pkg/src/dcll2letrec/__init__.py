"""Dual-context linear lambda calculus: type checker, translation into a
lambda calculus with cyclic sharing, rewriting, CPS comparison and
wiring-diagram semantics for the purely linear fragment."""

from . import cps, dcll, gen, kernel, ltr, rewrite, translate, wiring
from .kernel import alpha_eq, fv, subst
from .names import FreshSupply, Name
from .rewrite import (Equal, EqVerdict, NormResult, NotEqualWitness,
                      RewriteConfig, Unknown, check_equal, normalize_dcll,
                      normalize_ltr)
from .translate import (BaseTypeEnv, MissingBaseType, PolarType,
                        TranslationOutput, translate as translate_term,
                        translate_ctx, translate_judgement, translate_type)
from .wiring import Port, Wiring, atoms_of, compose_wirings, to_dot, wiring_of

__all__ = [
    "BaseTypeEnv", "Equal", "EqVerdict", "FreshSupply", "MissingBaseType",
    "Name", "NormResult", "NotEqualWitness", "PolarType", "Port",
    "RewriteConfig", "TranslationOutput", "Unknown", "Wiring", "alpha_eq",
    "atoms_of", "check_equal", "compose_wirings", "cps", "dcll", "fv", "gen",
    "kernel", "ltr", "normalize_dcll", "normalize_ltr", "rewrite", "subst",
    "to_dot", "translate", "translate_ctx", "translate_judgement",
    "translate_term", "translate_type", "wiring", "wiring_of",
]

__version__ = "0.1.0"
