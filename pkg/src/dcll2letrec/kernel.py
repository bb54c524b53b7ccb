"""Calculus-independent entry points for the binding operations.

Both calculi implement free variables, capture-avoiding substitution and
alpha equivalence over their own syntax; these wrappers dispatch on the term
class so generic tooling (tests, CLI) does not care which calculus a term
belongs to.
"""

from __future__ import annotations

from . import dcll, ltr
from .names import FreshSupply, Name


def fv(term):
    if isinstance(term, dcll.DcllTerm):
        return dcll.fv(term)
    if isinstance(term, ltr.LtrTerm):
        return ltr.fv(term)
    raise TypeError(f"not a term: {term!r}")


def subst(term, var: Name, replacement, supply: FreshSupply | None = None):
    if supply is None:
        supply = FreshSupply()
        if isinstance(term, dcll.DcllTerm):
            supply.reserve_above(max(dcll.max_uid(term), dcll.max_uid(replacement)))
        else:
            supply.reserve_above(max(ltr.max_uid(term), ltr.max_uid(replacement)))
    if isinstance(term, dcll.DcllTerm):
        return dcll.subst(term, var, replacement, supply)
    if isinstance(term, ltr.LtrTerm):
        return ltr.subst(term, var, replacement, supply)
    raise TypeError(f"not a term: {term!r}")


def alpha_eq(a, b) -> bool:
    if isinstance(a, dcll.DcllTerm) and isinstance(b, dcll.DcllTerm):
        return dcll.alpha_eq(a, b)
    if isinstance(a, ltr.LtrTerm) and isinstance(b, ltr.LtrTerm):
        return ltr.alpha_eq(a, b)
    if isinstance(a, (dcll.DcllTerm, ltr.LtrTerm)) and isinstance(b, (dcll.DcllTerm, ltr.LtrTerm)):
        return False
    raise TypeError(f"not terms: {a!r}, {b!r}")
