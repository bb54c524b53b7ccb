"""Directed rewriting and bounded equivalence checking for both calculi.

Orientation for the letrec calculus: value-beta for functions, tuples and
unit; eta as contractions (a complete ascending run ``pi1 v .. pin v`` inside
a tuple collapses to ``v``); nested tuples are flattened and unit-typed value
components dropped (strict associativity of products); letrec declarations
are hoisted out of application/tuple positions and merged; declarations whose
side is a non-self-referential value are substituted away and collected.
Unused declarations that are not values are never discarded: that is not an
equation of the theory (feedback has observable content).

Normal forms carry their letrec declarations in a canonical order computed
from an alpha-invariant structural key, so declaration permutations compare
equal.  Equivalence checking normalizes both sides and falls back to a
size-capped bidirectional search over single steps plus eta-expansions; it
answers Unknown rather than guessing when the budget runs out.

Trace format: one ``<rule> @ <path>`` line per step, where the path is the
root-to-redex chain of child labels (fun/arg/body/item<i>/decl<i>) joined
with dots.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import dcll, ltr
from .errors import InternalError
from .names import FreshSupply, Name


@dataclass
class RewriteConfig:
    max_steps: int = 10_000
    trace: bool = False


@dataclass
class NormResult:
    term: object
    steps: int
    completed: bool
    trace: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Equal:
    normal_form: object


@dataclass(frozen=True)
class NotEqualWitness:
    left: object
    right: object


@dataclass(frozen=True)
class Unknown:
    reason: str


EqVerdict = Union[Equal, NotEqualWitness, Unknown]


# --------------------------------------------------------------------------
# letrec-side engine


def _infer(t: ltr.LtrTerm, env: dict[Name, ltr.LtrType]) -> ltr.LtrType:
    """Local type reconstruction; assumes the term is well-typed."""
    match t:
        case ltr.Var(n):
            return env[n]
        case ltr.Lam(ltr.PVar(x, ty), b):
            return ltr.TFun(ty, _infer(b, {**env, x: ty}))
        case ltr.App(f, _):
            ft = _infer(f, env)
            assert isinstance(ft, ltr.TFun), ft
            return ft.res
        case ltr.Tup(items):
            return ltr.product(_infer(i, env) for i in items)
        case ltr.Proj(i, _, a):
            return ltr.components(_infer(a, env))[i - 1]
        case ltr.Letrec(ds, b):
            env2 = dict(env)
            for p, _ in ds:
                env2[p.name] = p.type
            return _infer(b, env2)
        case _:
            raise TypeError(t)


def _width(t: ltr.LtrTerm, env) -> int:
    return len(ltr.components(_infer(t, env)))


def _extract_component(items: Sequence[ltr.LtrTerm], widths: Sequence[int],
                       index: int) -> ltr.LtrTerm:
    """Component ``index`` (1-based) of a tuple with the given item widths."""
    at = 0
    for item, w in zip(items, widths):
        if at < index <= at + w:
            if w == 1:
                return item
            return ltr.Proj(index - at, w, item)
        at += w
    raise InternalError("projection index outside tuple")


def _proj_run(items: Sequence[ltr.LtrTerm]) -> Optional[tuple[int, int, ltr.LtrTerm]]:
    """Find a complete ascending run pi1 v .. pin v of some value v."""
    i = 0
    n = len(items)
    while i < n:
        it = items[i]
        if isinstance(it, ltr.Proj) and it.index == 1 and it.arity and ltr.is_value(it.arg):
            arity, v = it.arity, it.arg
            if i + arity <= n and all(
                isinstance(items[i + j], ltr.Proj)
                and items[i + j].index == j + 1
                and items[i + j].arity == arity
                and items[i + j].arg == v
                for j in range(arity)
            ):
                return i, arity, v
        i += 1
    return None


def _ltr_rules(t: ltr.LtrTerm, env: dict, supply: FreshSupply
               ) -> Optional[tuple[ltr.LtrTerm, str]]:
    match t:
        case ltr.Tup(items):
            if any(isinstance(i, ltr.Tup) for i in items):
                flat: list[ltr.LtrTerm] = []
                for i in items:
                    if isinstance(i, ltr.Tup):
                        flat.extend(i.items)
                    else:
                        flat.append(i)
                return ltr.mk_tuple(flat), "tuple_flatten"
            run = _proj_run(items)
            if run is not None:
                i, arity, v = run
                return ltr.mk_tuple(list(items[:i]) + [v] + list(items[i + arity:])), "eta_tuple"
            for i, item in enumerate(items):
                if isinstance(item, ltr.Letrec):
                    rest = list(items)
                    rest[i] = item.body
                    return ltr.Letrec(item.decls, ltr.Tup(tuple(rest))), "hoist_letrec"
        case ltr.App(ltr.Letrec(ds, m), a):
            return ltr.Letrec(ds, ltr.App(m, a)), "hoist_letrec"
        case ltr.App(f, ltr.Letrec(ds, m)):
            return ltr.Letrec(ds, ltr.App(f, m)), "hoist_letrec"
        case ltr.App(ltr.Lam(ltr.PVar(x, _), b), a) if ltr.is_value(a):
            return ltr.subst(b, x, a, supply), "beta_fun"
        case ltr.Proj(i, _, ltr.Tup(items)) if all(ltr.is_value(x) for x in items):
            widths = [_width(x, env) for x in items]
            return _extract_component(items, widths, i), "beta_tuple"
        case ltr.Lam(ltr.PVar(x, _), ltr.App(f, ltr.Var(x2))) if (
            x2 == x and ltr.is_value(f) and x not in ltr.fv(f)
        ):
            return f, "eta_fun"
        case ltr.Letrec(ds, b):
            for i, (p, rhs) in enumerate(ds):
                if isinstance(rhs, ltr.Letrec):
                    merged = ds[:i] + rhs.decls + ((p, rhs.body),) + ds[i + 1:]
                    return ltr.Letrec(merged, b), "assoc_decl"
            if isinstance(b, ltr.Letrec):
                return ltr.Letrec(ds + b.decls, b.body), "assoc_body"
            for i, (p, rhs) in enumerate(ds):
                x = p.name
                if not ltr.is_value(rhs) or x in ltr.fv(rhs):
                    continue
                used = any(x in ltr.fv(r) for j, (_, r) in enumerate(ds) if j != i)
                used = used or x in ltr.fv(b)
                if used:
                    new_ds = tuple(
                        (q, r if j == i else ltr.subst(r, x, rhs, supply))
                        for j, (q, r) in enumerate(ds)
                    )
                    return ltr.Letrec(new_ds, ltr.subst(b, x, rhs, supply)), "subst_decl"
                rest = ds[:i] + ds[i + 1:]
                if rest:
                    return ltr.Letrec(rest, b), "gc_decl"
                return b, "gc_decl"
            if len(ds) == 1 and isinstance(b, ltr.Var):
                (p, rhs), = ds
                if b.name == p.name and p.name not in ltr.fv(rhs):
                    return rhs, "letrec_body"
    if ltr.is_value(t) and t != ltr.UNIT_VAL and _infer(t, env) == ltr.UNIT:
        return ltr.UNIT_VAL, "beta_unit"
    return None


def _ltr_step(t: ltr.LtrTerm, env: dict, supply: FreshSupply
              ) -> Optional[tuple[ltr.LtrTerm, str, str]]:
    """Leftmost-outermost single step; returns (term', rule, path)."""
    here = _ltr_rules(t, env, supply)
    if here is not None:
        return here[0], here[1], ""

    def prefix(seg: str, r):
        if r is None:
            return None
        t2, rule, path = r
        return t2, rule, f"{seg}.{path}" if path else seg

    match t:
        case ltr.Lam(ltr.PVar(x, ty) as p, b):
            r = prefix("body", _ltr_step(b, {**env, x: ty}, supply))
            if r:
                return ltr.Lam(p, r[0]), r[1], r[2]
        case ltr.App(f, a):
            r = prefix("fun", _ltr_step(f, env, supply))
            if r:
                return ltr.App(r[0], a), r[1], r[2]
            r = prefix("arg", _ltr_step(a, env, supply))
            if r:
                return ltr.App(f, r[0]), r[1], r[2]
        case ltr.Tup(items):
            for i, item in enumerate(items):
                r = prefix(f"item{i + 1}", _ltr_step(item, env, supply))
                if r:
                    out = list(items)
                    out[i] = r[0]
                    return ltr.Tup(tuple(out)), r[1], r[2]
        case ltr.Proj(i, n, a):
            r = prefix("arg", _ltr_step(a, env, supply))
            if r:
                return ltr.Proj(i, n, r[0]), r[1], r[2]
        case ltr.Letrec(ds, b):
            env2 = dict(env)
            for p, _ in ds:
                env2[p.name] = p.type
            for i, (p, rhs) in enumerate(ds):
                r = prefix(f"decl{i + 1}", _ltr_step(rhs, env2, supply))
                if r:
                    out = list(ds)
                    out[i] = (p, r[0])
                    return ltr.Letrec(tuple(out), b), r[1], r[2]
            r = prefix("body", _ltr_step(b, env2, supply))
            if r:
                return ltr.Letrec(ds, r[0]), r[1], r[2]
    return None


# ---- canonical declaration order


def _alpha_key(t, special: Optional[dict[Name, str]] = None) -> str:
    """Alpha-invariant serialization; free names render by display text
    unless overridden through ``special``."""
    special = special or {}
    out: list[str] = []
    level = [0]

    def pat(p: ltr.Pattern, env: dict[Name, str]):
        if isinstance(p, ltr.PVar):
            level[0] += 1
            env[p.name] = f"b{level[0]}"
            out.append(f"pv[{ltr.type_str(p.type)}]")
        elif isinstance(p, ltr.PWild):
            out.append(f"pw[{ltr.type_str(p.type)}]")
        else:
            out.append("pt(")
            for q in p.parts:
                pat(q, env)
            out.append(")")

    def go_ltr(t, env: dict[Name, str]):
        match t:
            case ltr.Var(n):
                out.append(env.get(n) or special.get(n) or f"fv:{n.display}")
            case ltr.Lam(p, b):
                env2 = dict(env)
                out.append("lam(")
                pat(p, env2)
                go_ltr(b, env2)
                out.append(")")
            case ltr.App(f, a):
                out.append("app(")
                go_ltr(f, env)
                go_ltr(a, env)
                out.append(")")
            case ltr.Tup(items):
                out.append("tup(")
                for i in items:
                    go_ltr(i, env)
                out.append(")")
            case ltr.Proj(i, n, a):
                out.append(f"proj{i}/{n}(")
                go_ltr(a, env)
                out.append(")")
            case ltr.Letrec(ds, b):
                env2 = dict(env)
                out.append("letrec(")
                for p, _ in ds:
                    pat(p, env2)
                for _, r in ds:
                    go_ltr(r, env2)
                go_ltr(b, env2)
                out.append(")")
            case ltr.Let(p, v, b):
                out.append("let(")
                go_ltr(v, env)
                env2 = dict(env)
                pat(p, env2)
                go_ltr(b, env2)
                out.append(")")
            case _:
                raise TypeError(t)

    def go_dcll(t, env: dict[Name, str]):
        match t:
            case dcll.Var(n):
                out.append(env.get(n) or special.get(n) or f"fv:{n.display}")
            case dcll.LinLam(n, ty, b) | dcll.NonLinLam(n, ty, b):
                tag = "ll" if isinstance(t, dcll.LinLam) else "nl"
                level[0] += 1
                out.append(f"{tag}[{dcll.type_str(ty)}](")
                go_dcll(b, {**env, n: f"b{level[0]}"})
                out.append(")")
            case dcll.LinApp(f, a) | dcll.NonLinApp(f, a):
                tag = "la" if isinstance(t, dcll.LinApp) else "na"
                out.append(f"{tag}(")
                go_dcll(f, env)
                go_dcll(a, env)
                out.append(")")
            case dcll.CElim(ty, b):
                out.append(f"c[{dcll.type_str(ty)}](")
                go_dcll(b, env)
                out.append(")")
            case _:
                raise TypeError(t)

    if isinstance(t, ltr.LtrTerm):
        go_ltr(t, {})
    else:
        go_dcll(t, {})
    return "".join(out)


def _sort_decls(t: ltr.LtrTerm) -> ltr.LtrTerm:
    """Order every letrec's declarations by a refined structural key."""
    match t:
        case ltr.Var(_):
            return t
        case ltr.Lam(p, b):
            return ltr.Lam(p, _sort_decls(b))
        case ltr.App(f, a):
            return ltr.App(_sort_decls(f), _sort_decls(a))
        case ltr.Tup(items):
            return ltr.Tup(tuple(_sort_decls(i) for i in items))
        case ltr.Proj(i, n, a):
            return ltr.Proj(i, n, _sort_decls(a))
        case ltr.Letrec(ds, b):
            ds = tuple((p, _sort_decls(r)) for p, r in ds)
            body = _sort_decls(b)
            locals_ = {p.name: i for i, (p, _) in enumerate(ds)}
            colors = {i: "0" for i in range(len(ds))}
            for _ in range(3):
                nxt = {}
                for i, (p, r) in enumerate(ds):
                    special = {n: f"local:{colors[locals_[n]]}" for n in locals_}
                    key = f"{ltr.type_str(p.type)}|{_alpha_key(r, special)}"
                    nxt[i] = hashlib.sha1(key.encode()).hexdigest()
                colors = nxt
            order = sorted(range(len(ds)), key=lambda i: (colors[i], i))
            return ltr.Letrec(tuple(ds[i] for i in order), body)
        case _:
            raise TypeError(t)


def normalize_ltr(term: ltr.LtrTerm, ctx: Sequence[tuple[Name, ltr.LtrType]] = (),
                  cfg: Optional[RewriteConfig] = None) -> NormResult:
    """Rewrite to a fixpoint (or until the step budget runs out).

    The input must be a well-typed core term over ``ctx``.  In trace mode
    every step is re-typechecked against the judgement.
    """
    cfg = cfg or RewriteConfig()
    if not ltr.is_core(term):
        raise ValueError("normalize_ltr expects a desugared term")
    supply = FreshSupply()
    supply.reserve_above(ltr.max_uid(term))
    for n, _ in ctx:
        supply.reserve_above(n.uid)
    env0 = dict(ctx)
    expected = ltr.typecheck(ctx, term) if cfg.trace else None

    steps = 0
    trace: list[str] = []
    completed = False
    while True:
        if steps >= cfg.max_steps:
            break
        r = _ltr_step(term, env0, supply)
        if r is None:
            completed = True
            break
        term, rule, path = r
        steps += 1
        if cfg.trace:
            trace.append(f"{rule} @ {path or '<root>'}")
            got = ltr.typecheck(ctx, term)
            if got != expected:
                raise InternalError(
                    f"step {rule} changed the type: {expected} -> {got}")
    term = _sort_decls(term)
    return NormResult(term, steps, completed, trace)


# --------------------------------------------------------------------------
# dcll-side engine


def _dcll_infer(t: dcll.DcllTerm, env: dict[Name, dcll.DcllType]) -> dcll.DcllType:
    match t:
        case dcll.Var(n):
            return env[n]
        case dcll.LinLam(x, ty, b):
            return dcll.TLolli(ty, _dcll_infer(b, {**env, x: ty}))
        case dcll.NonLinLam(x, ty, b):
            return dcll.TArrow(ty, _dcll_infer(b, {**env, x: ty}))
        case dcll.LinApp(f, _):
            ft = _dcll_infer(f, env)
            assert isinstance(ft, dcll.TLolli)
            return ft.res
        case dcll.NonLinApp(f, _):
            ft = _dcll_infer(f, env)
            assert isinstance(ft, dcll.TArrow)
            return ft.res
        case dcll.CElim(ty, _):
            return ty
        case _:
            raise TypeError(t)


def _dcll_rules(t, env, supply) -> Optional[tuple[dcll.DcllTerm, str]]:
    match t:
        case dcll.LinApp(dcll.LinLam(x, _, b), a):
            return dcll.subst(b, x, a, supply), "beta_lolli"
        case dcll.NonLinApp(dcll.NonLinLam(x, _, b), a):
            return dcll.subst(b, x, a, supply), "beta_arrow"
        case dcll.LinLam(x, _, dcll.LinApp(m, dcll.Var(x2))) if (
            x2 == x and x not in dcll.fv(m)
        ):
            return m, "eta_lolli"
        case dcll.NonLinLam(x, _, dcll.NonLinApp(m, dcll.Var(x2))) if (
            x2 == x and x not in dcll.fv(m)
        ):
            return m, "eta_arrow"
        case dcll.CElim(_, dcll.LinLam(k, _, dcll.LinApp(dcll.Var(k2), m))) if (
            k2 == k and k not in dcll.fv(m)
        ):
            return m, "c_two"
        case dcll.LinApp(f, dcll.CElim(ty, m)):
            if _dcll_infer(f, env) == dcll.TLolli(ty, dcll.BOT):
                return dcll.LinApp(m, f), "c_one"
    return None


def _dcll_step(t, env, supply) -> Optional[tuple[dcll.DcllTerm, str, str]]:
    here = _dcll_rules(t, env, supply)
    if here is not None:
        return here[0], here[1], ""

    def prefix(seg, r):
        if r is None:
            return None
        t2, rule, path = r
        return t2, rule, f"{seg}.{path}" if path else seg

    match t:
        case dcll.LinLam(x, ty, b) | dcll.NonLinLam(x, ty, b):
            cls = dcll.LinLam if isinstance(t, dcll.LinLam) else dcll.NonLinLam
            r = prefix("body", _dcll_step(b, {**env, x: ty}, supply))
            if r:
                return cls(x, ty, r[0]), r[1], r[2]
        case dcll.LinApp(f, a) | dcll.NonLinApp(f, a):
            cls = dcll.LinApp if isinstance(t, dcll.LinApp) else dcll.NonLinApp
            r = prefix("fun", _dcll_step(f, env, supply))
            if r:
                return cls(r[0], a), r[1], r[2]
            r = prefix("arg", _dcll_step(a, env, supply))
            if r:
                return cls(f, r[0]), r[1], r[2]
        case dcll.CElim(ty, b):
            r = prefix("body", _dcll_step(b, env, supply))
            if r:
                return dcll.CElim(ty, r[0]), r[1], r[2]
    return None


def normalize_dcll(term: dcll.DcllTerm, ctx: Optional[dcll.DualContext] = None,
                   cfg: Optional[RewriteConfig] = None) -> NormResult:
    cfg = cfg or RewriteConfig()
    ctx = ctx or dcll.DualContext()
    supply = FreshSupply()
    supply.reserve_above(dcll.max_uid(term))
    env0 = dict(ctx.gamma) | dict(ctx.delta)
    expected = dcll.typecheck(ctx, term).type if cfg.trace else None

    steps = 0
    trace: list[str] = []
    completed = False
    while True:
        if steps >= cfg.max_steps:
            break
        r = _dcll_step(term, env0, supply)
        if r is None:
            completed = True
            break
        term, rule, path = r
        steps += 1
        if cfg.trace:
            trace.append(f"{rule} @ {path or '<root>'}")
            got = dcll.typecheck(ctx, term).type
            if got != expected:
                raise InternalError(
                    f"step {rule} changed the type: {expected} -> {got}")
    return NormResult(term, steps, completed, trace)


# --------------------------------------------------------------------------
# bounded equivalence checking


def _ltr_nodes(t) -> int:
    match t:
        case ltr.Var(_):
            return 1
        case ltr.Lam(_, b) | ltr.Proj(_, _, b):
            return 1 + _ltr_nodes(b)
        case ltr.App(f, a):
            return 1 + _ltr_nodes(f) + _ltr_nodes(a)
        case ltr.Tup(items):
            return 1 + sum(_ltr_nodes(i) for i in items)
        case ltr.Letrec(ds, b):
            return 1 + sum(_ltr_nodes(r) for _, r in ds) + _ltr_nodes(b)
        case _:
            return 1


def _dcll_nodes(t) -> int:
    match t:
        case dcll.Var(_):
            return 1
        case dcll.LinLam(_, _, b) | dcll.NonLinLam(_, _, b) | dcll.CElim(_, b):
            return 1 + _dcll_nodes(b)
        case dcll.LinApp(f, a) | dcll.NonLinApp(f, a):
            return 1 + _dcll_nodes(f) + _dcll_nodes(a)
        case _:
            return 1


def _ltr_successors(t, env, supply) -> list[ltr.LtrTerm]:
    """All single contraction steps anywhere, plus eta-expansions of values."""
    out = []

    def all_steps(t, env):
        r = _ltr_rules(t, env, supply)
        if r is not None:
            yield r[0]
        match t:
            case ltr.Lam(ltr.PVar(x, ty) as p, b):
                for b2 in all_steps(b, {**env, x: ty}):
                    yield ltr.Lam(p, b2)
            case ltr.App(f, a):
                for f2 in all_steps(f, env):
                    yield ltr.App(f2, a)
                for a2 in all_steps(a, env):
                    yield ltr.App(f, a2)
            case ltr.Tup(items):
                for i in range(len(items)):
                    for x2 in all_steps(items[i], env):
                        xs = list(items)
                        xs[i] = x2
                        yield ltr.Tup(tuple(xs))
                # expansion: shatter a multi-component value item into its
                # projections so windows can re-associate differently
                for i, item in enumerate(items):
                    if ltr.is_value(item) and not isinstance(item, ltr.Tup):
                        try:
                            w = _width(item, env)
                        except (KeyError, AssertionError):
                            continue
                        if w >= 2:
                            xs = list(items)
                            xs[i] = ltr.Tup(tuple(
                                ltr.Proj(j, w, item) for j in range(1, w + 1)))
                            yield ltr.Tup(tuple(xs))
            case ltr.Proj(i, n, a):
                for a2 in all_steps(a, env):
                    yield ltr.Proj(i, n, a2)
            case ltr.Letrec(ds, b):
                env2 = dict(env)
                for p, _ in ds:
                    env2[p.name] = p.type
                for i, (p, r) in enumerate(ds):
                    for r2 in all_steps(r, env2):
                        out_ds = list(ds)
                        out_ds[i] = (p, r2)
                        yield ltr.Letrec(tuple(out_ds), b)
                for b2 in all_steps(b, env2):
                    yield ltr.Letrec(ds, b2)

    out.extend(all_steps(t, env))
    ty = _infer(t, env) if isinstance(t, (ltr.Var, ltr.Lam, ltr.App, ltr.Tup,
                                          ltr.Proj, ltr.Letrec)) else None
    if isinstance(ty, ltr.TFun) and ltr.is_value(t):
        x = supply.fresh("e")
        out.append(ltr.Lam(ltr.PVar(x, ty.arg), ltr.App(t, ltr.Var(x))))
    return out


def _dcll_successors(t, env, supply) -> list[dcll.DcllTerm]:
    out = []

    def all_steps(t, env):
        r = _dcll_rules(t, env, supply)
        if r is not None:
            yield r[0]
        match t:
            case dcll.LinLam(x, ty, b) | dcll.NonLinLam(x, ty, b):
                cls = dcll.LinLam if isinstance(t, dcll.LinLam) else dcll.NonLinLam
                for b2 in all_steps(b, {**env, x: ty}):
                    yield cls(x, ty, b2)
            case dcll.LinApp(f, a) | dcll.NonLinApp(f, a):
                cls = dcll.LinApp if isinstance(t, dcll.LinApp) else dcll.NonLinApp
                for f2 in all_steps(f, env):
                    yield cls(f2, a)
                for a2 in all_steps(a, env):
                    yield cls(f, a2)
            case dcll.CElim(ty, b):
                for b2 in all_steps(b, env):
                    yield dcll.CElim(ty, b2)

    out.extend(all_steps(t, env))
    try:
        ty = _dcll_infer(t, env)
    except (KeyError, AssertionError):
        return out
    if isinstance(ty, dcll.TLolli):
        x = supply.fresh("e")
        out.append(dcll.LinLam(x, ty.arg, dcll.LinApp(t, dcll.Var(x))))
    elif isinstance(ty, dcll.TArrow):
        x = supply.fresh("e")
        out.append(dcll.NonLinLam(x, ty.arg, dcll.NonLinApp(t, dcll.Var(x))))
    return out


def check_equal(a, b, calculus: str = "letrec", ctx=None,
                cfg: Optional[RewriteConfig] = None) -> EqVerdict:
    """Decide a = b by normalization, then by bounded bidirectional search.

    ``Equal`` is definitive; ``NotEqualWitness`` means the size-capped search
    space was exhausted without meeting (witnessed by the two normal forms);
    ``Unknown`` means the budget ran out first.
    """
    cfg = cfg or RewriteConfig()
    if calculus in ("letrec", "ltr"):
        ctx = ctx or ()
        na = normalize_ltr(a, ctx, cfg)
        nb = normalize_ltr(b, ctx, cfg)
        aeq, nodes, succ = ltr.alpha_eq, _ltr_nodes, _ltr_successors
        env = dict(ctx)
        sup_seed = max(ltr.max_uid(na.term), ltr.max_uid(nb.term))
        canon = _sort_decls
    elif calculus == "dcll":
        ctx = ctx or dcll.DualContext()
        na = normalize_dcll(a, ctx, cfg)
        nb = normalize_dcll(b, ctx, cfg)
        aeq, nodes, succ = dcll.alpha_eq, _dcll_nodes, _dcll_successors
        env = dict(ctx.gamma) | dict(ctx.delta)
        sup_seed = max(dcll.max_uid(na.term), dcll.max_uid(nb.term))
        canon = lambda t: t  # noqa: E731
    else:
        raise ValueError(f"unknown calculus {calculus!r}")

    if aeq(na.term, nb.term):
        return Equal(na.term)
    if not (na.completed and nb.completed):
        return Unknown("normalization budget exhausted")

    supply = FreshSupply()
    supply.reserve_above(sup_seed)
    cap = max(nodes(na.term), nodes(nb.term)) + 16
    budget = cfg.max_steps

    seen: dict[str, str] = {}
    frontier = {"L": [na.term], "R": [nb.term]}
    seen[_alpha_key(na.term)] = "L"
    seen[_alpha_key(nb.term)] = "R"
    expansions = 0
    while frontier["L"] or frontier["R"]:
        side = "L" if (frontier["L"] and (len(frontier["L"]) <= len(frontier["R"])
                                          or not frontier["R"])) else "R"
        other = "R" if side == "L" else "L"
        nxt = []
        for t in frontier[side]:
            for s in succ(t, env, supply):
                if nodes(s) > cap:
                    continue
                s = canon(s)
                key = _alpha_key(s)
                if seen.get(key) == other:
                    return Equal(s)
                if key in seen:
                    continue
                seen[key] = side
                nxt.append(s)
                expansions += 1
                if expansions >= budget:
                    return Unknown("search budget exhausted")
        frontier[side] = nxt
    return NotEqualWitness(na.term, nb.term)
