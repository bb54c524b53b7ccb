"""Translation from the dual-context linear calculus into letrec terms.

Every source type is assigned a pair of target types: a positive component
(what a term of that type produces) and a negative component (what it
consumes).  A judgement with non-linear zone Gamma, linear zone Delta and
result sigma becomes a function

    Gamma^(neg=>pos), Delta^pos  |-  term : sigma^neg => (sigma^pos * Delta^neg)

where Delta^neg is the product of the negative components of the linear zone
in order.  Non-linear constructs translate exactly as the call-by-name CPS
clauses; linear application wires its two halves together with a letrec whose
declarations feed each side's outputs into the other's inputs (the cyclic
sharing plays the role of the feedback in a traced composition); double
negation elimination is the identity because the positive and negative
components of ``(t -o bot) -o bot`` and ``t`` coincide under canonical
products.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from . import dcll
from .errors import InternalError
from .ltr import (
    App, Lam, LtrTerm, LtrType, Letrec, PTuple, Pattern, PVar, TFun, Tup,
    UNIT, Var, desugar, elaborate, is_canonical_type, mk_tuple,
    product, term_to_json, type_to_json,
)
from .names import FreshSupply, Name


class MissingBaseType(Exception):
    pass


class InternalTypeError(InternalError):
    """The translated term failed its own re-typecheck: a translator bug."""


@dataclass(frozen=True)
class PolarType:
    pos: LtrType
    neg: LtrType


class BaseTypeEnv:
    """Assignment of a positive/negative target type to each base type.

    With ``auto=True`` unknown base types are mapped to fresh base types
    ``<b>_p`` / ``<b>_m``; otherwise lookups outside the table raise
    :class:`MissingBaseType`.
    """

    def __init__(self, table: Optional[Mapping[str, PolarType]] = None,
                 auto: bool = False):
        self.table = dict(table or {})
        self.auto = auto

    def lookup(self, name: str) -> PolarType:
        if name in self.table:
            return self.table[name]
        if self.auto:
            from .ltr import TBase
            pt = PolarType(TBase(f"{name}_p"), TBase(f"{name}_m"))
            self.table[name] = pt
            return pt
        raise MissingBaseType(f"no interface declared for base type {name!r}")


def translate_type(t: dcll.DcllType, env: BaseTypeEnv) -> PolarType:
    """pos/neg interface of a source type, canonicalized.

    bot has the empty interface; ``s -o t`` produces t's output plus s's
    input and consumes s's output plus t's input; ``s -> t`` consumes a
    reusable function ``s^neg => s^pos`` alongside t's input.
    """
    match t:
        case dcll.TBase(name):
            return env.lookup(name)
        case dcll.TBottom():
            return PolarType(UNIT, UNIT)
        case dcll.TLolli(a, r):
            pa, pr = translate_type(a, env), translate_type(r, env)
            return PolarType(product((pr.pos, pa.neg)), product((pa.pos, pr.neg)))
        case dcll.TArrow(a, r):
            pa, pr = translate_type(a, env), translate_type(r, env)
            return PolarType(pr.pos, product((TFun(pa.neg, pa.pos), pr.neg)))
        case _:
            raise TypeError(t)


def translate_ctx(ctx: dcll.DualContext, env: BaseTypeEnv
                  ) -> tuple[list[tuple[Name, LtrType]], list[tuple[Name, LtrType]], LtrType]:
    """Target bindings for both zones plus the linear zone's negative product."""
    gamma_out = []
    for n, ty in ctx.gamma:
        pt = translate_type(ty, env)
        gamma_out.append((n, TFun(pt.neg, pt.pos)))
    delta_out = []
    negs = []
    for n, ty in ctx.delta:
        pt = translate_type(ty, env)
        delta_out.append((n, pt.pos))
        negs.append(pt.neg)
    return gamma_out, delta_out, product(negs)


@dataclass
class TranslationOutput:
    term: LtrTerm
    gamma_ctx: list[tuple[Name, LtrType]]
    delta_ctx: list[tuple[Name, LtrType]]
    type: LtrType
    sigma: PolarType
    delta_neg: LtrType

    @property
    def ctx(self) -> list[tuple[Name, LtrType]]:
        return list(self.gamma_ctx) + list(self.delta_ctx)

    def to_json_dict(self) -> dict:
        from .ltr import type_str
        return {
            "schema_version": 1,
            "context": [
                {"name": str(n), "uid": n.uid, "zone": zone,
                 "type": type_to_json(t), "type_text": type_str(t)}
                for zone, part in (("nonlinear", self.gamma_ctx),
                                   ("linear", self.delta_ctx))
                for n, t in part
            ],
            "term": term_to_json(self.term),
            "term_text": str(self.term),
            "type": type_to_json(self.type),
            "type_text": type_str(self.type),
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)


def _mk_pattern(parts: Sequence[PVar]) -> Pattern:
    if len(parts) == 1:
        return parts[0]
    return PTuple(tuple(parts))


def translate(typed: dcll.TypedDcll, env: BaseTypeEnv,
              supply: Optional[FreshSupply] = None) -> TranslationOutput:
    """Translate a typing derivation; the output is re-typechecked."""
    if supply is None:
        supply = FreshSupply()
        supply.reserve_above(dcll.max_uid(typed.term))
        for n, _ in typed.ctx.gamma + typed.ctx.delta:
            supply.reserve_above(n.uid)

    def pol(t: dcll.DcllType) -> PolarType:
        return translate_type(t, env)

    def go(d: dcll.Deriv) -> LtrTerm:
        pt = pol(d.type)
        match d.rule:
            case "ax_nonlinear":
                x = d.term.name
                k = supply.fresh("k")
                return Lam(PVar(k, pt.neg), App(Var(x), Var(k)))
            case "ax_linear":
                y = d.term.name
                k = supply.fresh("k")
                return Lam(PVar(k, pt.neg), Tup((Var(y), Var(k))))
            case "arrow_intro":
                x = d.term.name
                arg_pt = pol(d.term.type)
                body = go(d.children[0])
                res_pt = pol(d.children[0].type)
                k = supply.fresh("k")
                pat = PTuple((PVar(x, TFun(arg_pt.neg, arg_pt.pos)),
                              PVar(k, res_pt.neg)))
                return Lam(pat, App(body, Var(k)))
            case "arrow_elim":
                fun = go(d.children[0])
                arg = go(d.children[1])
                k = supply.fresh("k")
                res_pt = pt
                return Lam(PVar(k, res_pt.neg), App(fun, Tup((arg, Var(k)))))
            case "lolli_intro":
                y = d.term.name
                arg_pt = pol(d.term.type)
                body = go(d.children[0])
                res_pt = pol(d.children[0].type)
                k = supply.fresh("k")
                pat = PTuple((PVar(y, arg_pt.pos), PVar(k, res_pt.neg)))
                return Lam(pat, App(body, Var(k)))
            case "lolli_elim":
                dm, dn = d.children
                assert isinstance(dm.type, dcll.TLolli)
                arg_pt = pol(dm.type.arg)
                res_pt = pol(dm.type.res)
                tm = go(dm)
                tn = go(dn)
                d1, d2 = d.split
                k = supply.fresh("k")
                u = supply.fresh("u")
                v = supply.fresh("v")
                h = supply.fresh("h")
                zvar: dict[Name, PVar] = {}
                for i, (n, ty) in enumerate(d.delta, start=1):
                    zvar[n] = PVar(supply.fresh(f"z{i}"), pol(ty).neg)
                first = _mk_pattern(
                    [PVar(u, arg_pt.pos)] + [zvar[n] for n, _ in d2])
                second = _mk_pattern(
                    [PVar(v, res_pt.pos), PVar(h, arg_pt.neg)]
                    + [zvar[n] for n, _ in d1])
                decls = (
                    (first, App(tn, Var(h))),
                    (second, App(tm, Tup((Var(u), Var(k))))),
                )
                body = mk_tuple(
                    [Var(v)] + [Var(zvar[n].name) for n, _ in d.delta])
                return Lam(PVar(k, res_pt.neg), Letrec(decls, body))
            case "duality":
                inner = go(d.children[0])
                inner_pt = pol(d.children[0].type)
                if inner_pt != pt:
                    raise InternalTypeError(
                        "duality elimination changed the interface: "
                        f"{inner_pt} vs {pt}")
                return inner
            case _:
                raise InternalError(f"unknown rule {d.rule}")

    sugared = go(typed.deriv)
    core = desugar(sugared, supply)

    gamma_ctx, delta_ctx, delta_neg = translate_ctx(typed.ctx, env)
    sigma = pol(typed.type)
    expected = TFun(sigma.neg, product((sigma.pos, delta_neg)))

    try:
        term, actual = elaborate(gamma_ctx + delta_ctx, core)
    except Exception as e:  # noqa: BLE001 - surfaced as a translator bug
        raise InternalTypeError(f"translated term does not typecheck: {e}") from e
    if actual != expected:
        raise InternalTypeError(
            f"translated term has type {actual}, expected {expected}")
    if not (is_canonical_type(actual) and is_canonical_type(delta_neg)):
        raise InternalTypeError("non-canonical type escaped the translation")

    return TranslationOutput(term, gamma_ctx, delta_ctx, expected, sigma, delta_neg)


def translate_judgement(src_text: str, env: Optional[BaseTypeEnv] = None,
                        supply: Optional[FreshSupply] = None) -> TranslationOutput:
    """Parse, typecheck and translate a judgement ``gamma ; delta |- term``."""
    env = env if env is not None else BaseTypeEnv(auto=True)
    supply = supply or FreshSupply()
    ctx, term = dcll.parse_judgement(src_text, supply)
    typed = dcll.typecheck(ctx, term)
    return translate(typed, env, supply)
