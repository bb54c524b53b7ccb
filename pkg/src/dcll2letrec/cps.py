"""Independent call-by-name CPS translation for the pure non-linear fragment.

A pure term uses only non-linear variables, non-linear lambdas and non-linear
applications.  On that fragment the continuation-passing translation

    x        =>  \\k. x k
    \\\\x. m  =>  \\(x, k). m' k
    m @ n    =>  \\k. m' (n', k)

is implemented directly here (it never calls the main translator), and the
comparator asserts that the main translation coincides with it literally, up
to renaming of bound variables -- no equational reasoning involved.
"""

from __future__ import annotations

from typing import Optional, Sequence

from . import dcll
from .ltr import (
    App, Lam, Letrec, LtrTerm, PTuple, PVar, Proj, TFun, Tup, Var,
    alpha_eq as ltr_alpha_eq, desugar, elaborate,
)
from .names import FreshSupply, Name
from .translate import BaseTypeEnv, translate, translate_type


class NotPure(Exception):
    pass


def require_pure(term: dcll.DcllTerm) -> None:
    """Reject any construct outside the non-linear fragment."""
    match term:
        case dcll.Var(_):
            return
        case dcll.NonLinLam(_, _, b):
            require_pure(b)
        case dcll.NonLinApp(f, a):
            require_pure(f)
            require_pure(a)
        case dcll.LinLam(_, _, _) | dcll.LinApp(_, _) | dcll.CElim(_, _):
            raise NotPure(f"not in the non-linear fragment: {term}")
        case _:
            raise TypeError(term)


def cbn_cps(term: dcll.DcllTerm, env: BaseTypeEnv,
            gamma: Sequence[tuple[Name, dcll.DcllType]] = (),
            supply: Optional[FreshSupply] = None) -> LtrTerm:
    """The three-clause translation, with binder annotations recovered from
    the typing derivation over ``gamma``."""
    require_pure(term)
    if supply is None:
        supply = FreshSupply()
        supply.reserve_above(dcll.max_uid(term))
        for n, _ in gamma:
            supply.reserve_above(n.uid)
    typed = dcll.typecheck(dcll.DualContext(tuple(gamma), ()), term)

    def pol(t: dcll.DcllType):
        return translate_type(t, env)

    def go(d: dcll.Deriv) -> LtrTerm:
        pt = pol(d.type)
        match d.rule:
            case "ax_nonlinear":
                k = supply.fresh("k")
                return Lam(PVar(k, pt.neg), App(Var(d.term.name), Var(k)))
            case "arrow_intro":
                arg_pt = pol(d.term.type)
                res_pt = pol(d.children[0].type)
                k = supply.fresh("k")
                pat = PTuple((PVar(d.term.name, TFun(arg_pt.neg, arg_pt.pos)),
                              PVar(k, res_pt.neg)))
                return Lam(pat, App(go(d.children[0]), Var(k)))
            case "arrow_elim":
                k = supply.fresh("k")
                return Lam(PVar(k, pt.neg),
                           App(go(d.children[0]), Tup((go(d.children[1]), Var(k)))))
            case _:
                raise NotPure(f"rule {d.rule} outside the non-linear fragment")

    core = desugar(go(typed.deriv), supply)
    gamma_ctx = [(n, TFun(pol(t).neg, pol(t).pos)) for n, t in gamma]
    core, ty = elaborate(gamma_ctx, core)
    want = TFun(pol(typed.type).neg, pol(typed.type).pos)
    assert ty == want, (ty, want)
    return core


def check_cps_coincidence(term: dcll.DcllTerm, env: BaseTypeEnv,
                          gamma: Sequence[tuple[Name, dcll.DcllType]] = ()) -> bool:
    """True iff the main translation and the CPS translation agree literally."""
    require_pure(term)
    typed = dcll.typecheck(dcll.DualContext(tuple(gamma), ()), term)
    main = translate(typed, env)
    independent = cbn_cps(term, env, gamma)
    return ltr_alpha_eq(main.term, independent)


def first_mismatch(term: dcll.DcllTerm, env: BaseTypeEnv,
                   gamma: Sequence[tuple[Name, dcll.DcllType]] = ()
                   ) -> Optional[tuple[LtrTerm, LtrTerm]]:
    """On failure, the first differing subterm pair (None on coincidence)."""
    typed = dcll.typecheck(dcll.DualContext(tuple(gamma), ()), term)
    main = translate(typed, env).term
    independent = cbn_cps(term, env, gamma)
    return _first_mismatch(main, independent)


def _first_mismatch(a: LtrTerm, b: LtrTerm) -> Optional[tuple[LtrTerm, LtrTerm]]:
    if ltr_alpha_eq(a, b):
        return None
    if type(a) is type(b):
        kids_a = _children(a)
        kids_b = _children(b)
        if len(kids_a) == len(kids_b):
            for ka, kb in zip(kids_a, kids_b):
                m = _first_mismatch(ka, kb)
                if m is not None:
                    return m
    return a, b


def _children(t: LtrTerm) -> list[LtrTerm]:
    match t:
        case Lam(_, b) | Proj(_, _, b):
            return [b]
        case App(f, a):
            return [f, a]
        case Tup(items):
            return list(items)
        case Letrec(ds, b):
            return [r for _, r in ds] + [b]
        case _:
            return []
