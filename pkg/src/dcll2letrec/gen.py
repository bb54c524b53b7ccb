"""Random well-typed source terms, built bottom-up so generation never fails.

Terms are produced together with their typing contexts: linear variables are
invented at the leaves and threaded outward (any interleaving of two linear
zones is a legal merge), non-linear variables live in a mutable ambient pool.
Target-directed generation (needed for redex arguments) falls back to a fresh
linear variable of the target type, which is always well-typed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from . import dcll
from .names import FreshSupply

Binding = tuple


@dataclass
class GenConfig:
    base_types: tuple[str, ...] = ("b",)
    max_depth: int = 6
    max_fuel: int = 5


def random_type(rng: random.Random, cfg: GenConfig, depth: int = 2,
                linear_only: bool = False) -> dcll.DcllType:
    roll = rng.random()
    if depth <= 0 or roll < 0.45:
        if roll < 0.08:
            return dcll.BOT
        return dcll.TBase(rng.choice(cfg.base_types))
    a = random_type(rng, cfg, depth - 1, linear_only)
    r = random_type(rng, cfg, depth - 1, linear_only)
    if linear_only or rng.random() < 0.7:
        return dcll.TLolli(a, r)
    return dcll.TArrow(a, r)


class _Gen:
    def __init__(self, rng: random.Random, cfg: GenConfig,
                 pure: bool = False, linear_only: bool = False):
        self.rng = rng
        self.cfg = cfg
        self.pure = pure
        self.linear_only = linear_only
        self.supply = FreshSupply()
        self.counter = 0
        self.gamma: list[Binding] = []

    def name(self, stem: str):
        self.counter += 1
        return self.supply.named(f"{stem}{self.counter}")

    def ty(self, depth: int = 2) -> dcll.DcllType:
        return random_type(self.rng, self.cfg, depth, self.linear_only)

    def fresh_gamma(self, ty: Optional[dcll.DcllType] = None):
        n = self.name("g")
        b = (n, ty if ty is not None else self.ty())
        self.gamma.append(b)
        return b

    def interleave(self, d1: list, d2: list) -> list:
        out = []
        i = j = 0
        while i < len(d1) or j < len(d2):
            if i < len(d1) and (j >= len(d2) or self.rng.random() < 0.5):
                out.append(d1[i])
                i += 1
            else:
                out.append(d2[j])
                j += 1
        return out

    # -- target-directed generation with fresh variables only

    def at_type(self, ty: dcll.DcllType, fuel: int) -> tuple[dcll.DcllTerm, list]:
        if fuel > 0 and isinstance(ty, dcll.TLolli) and self.rng.random() < 0.6:
            z = self.name("z")
            body, d = self.use_at(z, ty.arg, ty.res, fuel - 1)
            return dcll.LinLam(z, ty.arg, body), d
        if (fuel > 0 and not self.linear_only
                and isinstance(ty, dcll.TArrow) and self.rng.random() < 0.6):
            x = self.name("x")
            self.gamma.append((x, ty.arg))
            body, d = self.at_type(ty.res, fuel - 1)
            return dcll.NonLinLam(x, ty.arg, body), d
        if not self.pure:
            v = self.name("y")
            return dcll.Var(v), [(v, ty)]
        b = self.fresh_gamma(ty)
        return dcll.Var(b[0]), []

    def use_at(self, z, have: dcll.DcllType, want: dcll.DcllType, fuel: int
               ) -> tuple[dcll.DcllTerm, list]:
        """A term of type ``want`` whose linear zone is [z: have] ++ fresh."""
        if have == want:
            return dcll.Var(z), []
        k = self.name("y")
        return dcll.LinApp(dcll.Var(k), dcll.Var(z)), [(k, dcll.TLolli(have, want))]

    # -- free-form generation

    def gen(self, fuel: int) -> tuple[dcll.DcllTerm, dcll.DcllType, list]:
        rng = self.rng
        choices: list[str] = []
        if not self.pure:
            choices += ["lin_var"] * 2
        if self.gamma and not self.linear_only:
            choices += ["gamma_var"] * 2
        if not self.linear_only:
            choices += ["fresh_gamma_var"]
        if fuel > 0:
            if not self.pure:
                choices += ["lin_lam"] * 2 + ["lin_app"] * 3 + ["celim"]
            if not self.linear_only:
                choices += ["nonlin_lam"] * 2 + ["nonlin_app"] * 2
        while True:
            case = rng.choice(choices)
            match case:
                case "lin_var":
                    n = self.name("y")
                    ty = self.ty()
                    return dcll.Var(n), ty, [(n, ty)]
                case "gamma_var":
                    n, ty = rng.choice(self.gamma)
                    return dcll.Var(n), ty, []
                case "fresh_gamma_var":
                    n, ty = self.fresh_gamma()
                    return dcll.Var(n), ty, []
                case "lin_lam":
                    body, ty, d = self.gen(fuel - 1)
                    if not d:
                        continue
                    (y, yty), rest = d[0], d[1:]
                    return dcll.LinLam(y, yty, body), dcll.TLolli(yty, ty), rest
                case "nonlin_lam":
                    x = self.name("x")
                    xty = self.ty()
                    self.gamma.append((x, xty))
                    body, ty, d = self.gen(fuel - 1)
                    return dcll.NonLinLam(x, xty, body), dcll.TArrow(xty, ty), d
                case "lin_app":
                    if rng.random() < 0.55:
                        # fresh head applied to a generated argument
                        arg, aty, d2 = self.gen(fuel - 1)
                        f = self.name("y")
                        fty = dcll.TLolli(aty, self.ty(1))
                        return (dcll.LinApp(dcll.Var(f), arg), fty.res,
                                self.interleave([(f, fty)], d2))
                    # redex: abstract the first linear variable of a body
                    body, bty, d = self.gen(fuel - 1)
                    if not d:
                        continue
                    (y, yty), rest = d[0], d[1:]
                    fun = dcll.LinLam(y, yty, body)
                    arg, d2 = self.at_type(yty, fuel - 1)
                    return (dcll.LinApp(fun, arg), bty,
                            self.interleave(rest, d2))
                case "nonlin_app":
                    sub = _Gen(rng, self.cfg, pure=True, linear_only=False)
                    sub.supply = self.supply
                    sub.counter = self.counter
                    sub.gamma = self.gamma
                    arg, aty, _ = sub.gen(fuel - 1)
                    self.counter = sub.counter
                    if rng.random() < 0.5:
                        x = self.name("x")
                        self.gamma.append((x, aty))
                        body, bty, d = self.gen(fuel - 1)
                        fun = dcll.NonLinLam(x, aty, body)
                        return dcll.NonLinApp(fun, arg), bty, d
                    f, fty = self.fresh_gamma(dcll.TArrow(aty, self.ty(1)))
                    return dcll.NonLinApp(dcll.Var(f), arg), fty.res, []
                case "celim":
                    inner, ity, d = self.gen(fuel - 1)
                    h = self.name("h")
                    hty = dcll.TLolli(ity, dcll.BOT)
                    wrapped = dcll.LinLam(h, hty, dcll.LinApp(dcll.Var(h), inner))
                    return dcll.CElim(ity, wrapped), ity, d


def term_depth(t: dcll.DcllTerm) -> int:
    match t:
        case dcll.Var(_):
            return 1
        case dcll.LinLam(_, _, b) | dcll.NonLinLam(_, _, b) | dcll.CElim(_, b):
            return 1 + term_depth(b)
        case dcll.LinApp(f, a) | dcll.NonLinApp(f, a):
            return 1 + max(term_depth(f), term_depth(a))
        case _:
            raise TypeError(t)


def random_typed(rng: random.Random, cfg: Optional[GenConfig] = None,
                 pure: bool = False, linear_only: bool = False,
                 app_root: bool = False) -> dcll.TypedDcll:
    """One random well-typed judgement (typechecked before returning)."""
    cfg = cfg or GenConfig()
    while True:
        g = _Gen(rng, cfg, pure=pure, linear_only=linear_only)
        fuel = rng.randint(1, cfg.max_fuel)
        if app_root:
            arg, aty, d2 = g.gen(fuel - 1)
            f = g.name("y")
            fty = dcll.TLolli(aty, g.ty(1))
            term = dcll.LinApp(dcll.Var(f), arg)
            delta = g.interleave([(f, fty)], d2)
            ty = fty.res
        else:
            term, ty, delta = g.gen(fuel)
        if term_depth(term) > cfg.max_depth:
            continue
        ctx = dcll.DualContext(tuple(g.gamma), tuple(delta))
        typed = dcll.typecheck(ctx, term)
        assert typed.type == ty, (typed.type, ty)
        return typed


def corpus(rng: random.Random, count: int, cfg: Optional[GenConfig] = None,
           **kw) -> list[dcll.TypedDcll]:
    return [random_typed(rng, cfg, **kw) for _ in range(count)]


def rule_coverage(terms) -> dict[str, int]:
    out: dict[str, int] = {}
    for t in terms:
        for rule, n in t.rules_used().items():
            out[rule] = out.get(rule, 0) + n
    return out
