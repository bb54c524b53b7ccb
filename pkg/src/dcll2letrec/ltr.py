"""The target calculus: simply typed lambda terms with tuples and letrec.

Product types are kept in a canonical strictly-associative form: nested
products are flattened, unit components are stripped, the empty product is
the unit type and one-component products collapse to the component.  Tuples
and projections are n-ary; ``Proj(i, n, t)`` selects the i-th of the n
canonical components of t's type.  Tuple patterns in lambdas and letrec
declarations are sugar and are compiled to indexed projections by
:func:`desugar`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ParseError
from .names import Name, FreshSupply

# --------------------------------------------------------------------------
# types


class LtrType:
    __slots__ = ()

    def __str__(self) -> str:
        return type_str(self)


@dataclass(frozen=True)
class TBase(LtrType):
    name: str


@dataclass(frozen=True)
class TFun(LtrType):
    arg: LtrType
    res: LtrType


@dataclass(frozen=True)
class TProd(LtrType):
    parts: tuple[LtrType, ...]


UNIT = TProd(())


def product(parts: Iterable[LtrType]) -> LtrType:
    """Canonical product: flatten, strip units, collapse singletons."""
    flat: list[LtrType] = []
    for p in parts:
        if isinstance(p, TProd):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if not flat:
        return UNIT
    if len(flat) == 1:
        return flat[0]
    return TProd(tuple(flat))


def components(t: LtrType) -> tuple[LtrType, ...]:
    """The canonical components of a type (empty for unit)."""
    if isinstance(t, TProd):
        return t.parts
    return (t,)


def is_canonical_type(t: LtrType) -> bool:
    if isinstance(t, TBase):
        return True
    if isinstance(t, TFun):
        return is_canonical_type(t.arg) and is_canonical_type(t.res)
    if isinstance(t, TProd):
        if len(t.parts) == 1:
            return False
        return all(not isinstance(p, TProd) and is_canonical_type(p) for p in t.parts)
    return False


def type_str(t: LtrType) -> str:
    if isinstance(t, TBase):
        return t.name
    if isinstance(t, TFun):
        arg = type_str(t.arg)
        if isinstance(t.arg, TFun):
            arg = f"({arg})"
        return f"{arg} => {type_str(t.res)}"
    if isinstance(t, TProd):
        if not t.parts:
            return "1"
        pieces = []
        for p in t.parts:
            s = type_str(p)
            if isinstance(p, TFun):
                s = f"({s})"
            pieces.append(s)
        return " * ".join(pieces)
    raise TypeError(t)


# --------------------------------------------------------------------------
# patterns


class Pattern:
    __slots__ = ()

    def __str__(self) -> str:
        return pattern_str(self)


@dataclass(frozen=True)
class PVar(Pattern):
    name: Name
    type: LtrType


@dataclass(frozen=True)
class PWild(Pattern):
    type: LtrType


@dataclass(frozen=True)
class PTuple(Pattern):
    parts: tuple[Pattern, ...]


def pattern_type(p: Pattern) -> LtrType:
    if isinstance(p, (PVar, PWild)):
        return p.type
    return product(pattern_type(q) for q in p.parts)


def pattern_names(p: Pattern) -> tuple[Name, ...]:
    if isinstance(p, PVar):
        return (p.name,)
    if isinstance(p, PWild):
        return ()
    out: tuple[Name, ...] = ()
    for q in p.parts:
        out += pattern_names(q)
    return out


def pattern_str(p: Pattern) -> str:
    if isinstance(p, PVar):
        return f"{p.name}:{type_str(p.type)}"
    if isinstance(p, PWild):
        return f"_:{type_str(p.type)}"
    return "(" + ", ".join(pattern_str(q) for q in p.parts) + ")"


# --------------------------------------------------------------------------
# terms


class LtrTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return term_str(self)


@dataclass(frozen=True)
class Var(LtrTerm):
    name: Name


@dataclass(frozen=True)
class Lam(LtrTerm):
    param: Pattern
    body: LtrTerm


@dataclass(frozen=True)
class App(LtrTerm):
    fun: LtrTerm
    arg: LtrTerm


@dataclass(frozen=True)
class Tup(LtrTerm):
    items: tuple[LtrTerm, ...]


@dataclass(frozen=True)
class Proj(LtrTerm):
    index: int
    arity: Optional[int]  # filled in by elaboration; 1-based index
    arg: LtrTerm


@dataclass(frozen=True)
class Letrec(LtrTerm):
    decls: tuple[tuple[Pattern, LtrTerm], ...]
    body: LtrTerm


@dataclass(frozen=True)
class Let(LtrTerm):
    """Sugar; removed by desugar()."""

    param: Pattern
    value: LtrTerm
    body: LtrTerm


UNIT_VAL = Tup(())


def mk_tuple(items: Sequence[LtrTerm]) -> LtrTerm:
    """Tuple smart constructor: no one-tuples."""
    if len(items) == 1:
        return items[0]
    return Tup(tuple(items))


def is_core(t: LtrTerm) -> bool:
    """True when all sugar is gone: only PVar binders, no let."""
    match t:
        case Var(_):
            return True
        case Lam(p, b):
            return isinstance(p, PVar) and is_core(b)
        case App(f, a):
            return is_core(f) and is_core(a)
        case Tup(items):
            return all(is_core(i) for i in items)
        case Proj(_, _, a):
            return is_core(a)
        case Letrec(ds, b):
            return all(isinstance(p, PVar) and is_core(r) for p, r in ds) and is_core(b)
        case _:
            return False


def is_value(t: LtrTerm) -> bool:
    match t:
        case Var(_) | Lam(_, _):
            return True
        case Tup(items):
            return all(is_value(i) for i in items)
        case Proj(_, _, a):
            return is_value(a)
        case _:
            return False


# --------------------------------------------------------------------------
# free variables / substitution / alpha equivalence


def fv(t: LtrTerm) -> frozenset[Name]:
    match t:
        case Var(n):
            return frozenset((n,))
        case Lam(p, b):
            return fv(b) - frozenset(pattern_names(p))
        case App(f, a):
            return fv(f) | fv(a)
        case Tup(items):
            out: frozenset[Name] = frozenset()
            for i in items:
                out |= fv(i)
            return out
        case Proj(_, _, a):
            return fv(a)
        case Letrec(ds, b):
            bound = frozenset(n for p, _ in ds for n in pattern_names(p))
            out = fv(b)
            for _, r in ds:
                out |= fv(r)
            return out - bound
        case Let(p, v, b):
            return fv(v) | (fv(b) - frozenset(pattern_names(p)))
        case _:
            raise TypeError(t)


def _rename_pattern(p: Pattern, ren: Mapping[Name, Name]) -> Pattern:
    if isinstance(p, PVar):
        return PVar(ren.get(p.name, p.name), p.type)
    if isinstance(p, PWild):
        return p
    return PTuple(tuple(_rename_pattern(q, ren) for q in p.parts))


def subst_many(t: LtrTerm, sub: Mapping[Name, LtrTerm], supply: FreshSupply) -> LtrTerm:
    """Capture-avoiding parallel substitution."""
    if not sub:
        return t

    def clashes(names: Sequence[Name], live: Mapping[Name, LtrTerm]) -> bool:
        free = frozenset()
        for v in live.values():
            free |= fv(v)
        return any(n in free for n in names)

    def under(names: Sequence[Name], live: dict[Name, LtrTerm]):
        """Drop shadowed entries; rename binders that would capture."""
        live = {k: v for k, v in live.items() if k not in names}
        ren: dict[Name, Name] = {}
        if live and clashes(names, live):
            for n in names:
                ren[n] = supply.rename(n)
            live = dict(live)
            live.update({n: Var(m) for n, m in ren.items()})
        return live, ren

    def go(t: LtrTerm, live: dict[Name, LtrTerm]) -> LtrTerm:
        if not live:
            return t
        match t:
            case Var(n):
                return live.get(n, t)
            case Lam(p, b):
                names = pattern_names(p)
                inner, ren = under(names, live)
                return Lam(_rename_pattern(p, ren), go(b, inner))
            case App(f, a):
                return App(go(f, live), go(a, live))
            case Tup(items):
                return Tup(tuple(go(i, live) for i in items))
            case Proj(i, n, a):
                return Proj(i, n, go(a, live))
            case Letrec(ds, b):
                names = tuple(n for p, _ in ds for n in pattern_names(p))
                inner, ren = under(names, live)
                new_ds = tuple(
                    (_rename_pattern(p, ren), go(r, inner)) for p, r in ds
                )
                return Letrec(new_ds, go(b, inner))
            case Let(p, v, b):
                names = pattern_names(p)
                inner, ren = under(names, live)
                return Let(_rename_pattern(p, ren), go(v, live), go(b, inner))
            case _:
                raise TypeError(t)

    return go(t, dict(sub))


def subst(t: LtrTerm, var: Name, replacement: LtrTerm, supply: FreshSupply) -> LtrTerm:
    return subst_many(t, {var: replacement}, supply)


def _pattern_alpha(p: Pattern, q: Pattern, enva: dict, envb: dict, counter: list[int]) -> bool:
    if isinstance(p, PVar) and isinstance(q, PVar):
        if p.type != q.type:
            return False
        counter[0] += 1
        enva[p.name] = counter[0]
        envb[q.name] = counter[0]
        return True
    if isinstance(p, PWild) and isinstance(q, PWild):
        return p.type == q.type
    if isinstance(p, PTuple) and isinstance(q, PTuple):
        if len(p.parts) != len(q.parts):
            return False
        return all(
            _pattern_alpha(x, y, enva, envb, counter)
            for x, y in zip(p.parts, q.parts)
        )
    return False


def alpha_eq(a: LtrTerm, b: LtrTerm) -> bool:
    """Equality up to consistent renaming of bound variables.

    Free variables are compared by display text so terms from independent
    parses of the same source agree.
    """
    counter = [0]

    def go(a: LtrTerm, b: LtrTerm, enva: dict, envb: dict) -> bool:
        match a, b:
            case Var(n), Var(m):
                ia, ib = enva.get(n), envb.get(m)
                if ia is None and ib is None:
                    return n.display == m.display
                return ia == ib
            case Lam(p, ba), Lam(q, bb):
                ea, eb = dict(enva), dict(envb)
                return _pattern_alpha(p, q, ea, eb, counter) and go(ba, bb, ea, eb)
            case App(f, x), App(g, y):
                return go(f, g, enva, envb) and go(x, y, enva, envb)
            case Tup(xs), Tup(ys):
                return len(xs) == len(ys) and all(
                    go(x, y, enva, envb) for x, y in zip(xs, ys)
                )
            case Proj(i, n, x), Proj(j, m, y):
                return i == j and n == m and go(x, y, enva, envb)
            case Letrec(dsa, ba), Letrec(dsb, bb):
                if len(dsa) != len(dsb):
                    return False
                ea, eb = dict(enva), dict(envb)
                for (p, _), (q, _) in zip(dsa, dsb):
                    if not _pattern_alpha(p, q, ea, eb, counter):
                        return False
                return all(
                    go(ra, rb, ea, eb) for (_, ra), (_, rb) in zip(dsa, dsb)
                ) and go(ba, bb, ea, eb)
            case Let(p, va, ba), Let(q, vb, bb):
                if not go(va, vb, enva, envb):
                    return False
                ea, eb = dict(enva), dict(envb)
                return _pattern_alpha(p, q, ea, eb, counter) and go(ba, bb, ea, eb)
            case _:
                return False

    return go(a, b, {}, {})


def max_uid(t: LtrTerm) -> int:
    """Largest uid occurring in t (0 if none); used to seed supplies."""
    best = 0

    def pat(p: Pattern):
        nonlocal best
        for n in pattern_names(p):
            best = max(best, n.uid)

    def go(t: LtrTerm):
        nonlocal best
        match t:
            case Var(n):
                best = max(best, n.uid)
            case Lam(p, b):
                pat(p)
                go(b)
            case App(f, a):
                go(f)
                go(a)
            case Tup(items):
                for i in items:
                    go(i)
            case Proj(_, _, a):
                go(a)
            case Letrec(ds, b):
                for p, r in ds:
                    pat(p)
                    go(r)
                go(b)
            case Let(p, v, b):
                pat(p)
                go(v)
                go(b)

    go(t)
    return best


# --------------------------------------------------------------------------
# desugaring


def _slice_of(scrut: LtrTerm, scrut_arity: int, offset: int, count: int) -> LtrTerm:
    """The term selecting components [offset, offset+count) of scrut."""
    if count == 0:
        return UNIT_VAL
    if count == scrut_arity:
        return scrut
    if scrut_arity == 1:
        return scrut
    if count == 1:
        return Proj(offset + 1, scrut_arity, scrut)
    return Tup(tuple(Proj(j, scrut_arity, scrut) for j in range(offset + 1, offset + count + 1)))


def _bind_pattern(p: Pattern, scrut: LtrTerm, scrut_arity: int, offset: int,
                  out: dict[Name, LtrTerm]) -> int:
    width = len(components(pattern_type(p)))
    if isinstance(p, PVar):
        out[p.name] = _slice_of(scrut, scrut_arity, offset, width)
    elif isinstance(p, PTuple):
        off = offset
        for q in p.parts:
            off = _bind_pattern(q, scrut, scrut_arity, off, out)
        assert off == offset + width
    return offset + width


def desugar(t: LtrTerm, supply: FreshSupply) -> LtrTerm:
    """Expand let, tuple patterns and wildcards into the core calculus."""
    match t:
        case Var(_):
            return t
        case Lam(p, b):
            body = desugar(b, supply)
            if isinstance(p, PVar):
                return Lam(p, body)
            ty = pattern_type(p)
            z = supply.fresh("z")
            binds: dict[Name, LtrTerm] = {}
            _bind_pattern(p, Var(z), len(components(ty)), 0, binds)
            return Lam(PVar(z, ty), subst_many(body, binds, supply))
        case App(f, a):
            return App(desugar(f, supply), desugar(a, supply))
        case Tup(items):
            return Tup(tuple(desugar(i, supply) for i in items))
        case Proj(i, n, a):
            return Proj(i, n, desugar(a, supply))
        case Let(p, v, b):
            return desugar(App(Lam(p, b), v), supply)
        case Letrec(ds, b):
            new_ds: list[tuple[Pattern, LtrTerm]] = []
            for p, rhs in ds:
                rhs = desugar(rhs, supply)
                if isinstance(p, PVar):
                    new_ds.append((p, rhs))
                elif isinstance(p, PWild):
                    new_ds.append((PVar(supply.fresh("w"), p.type), rhs))
                else:
                    ty = pattern_type(p)
                    z = supply.fresh("z")
                    arity = len(components(ty))
                    new_ds.append((PVar(z, ty), rhs))
                    binds: dict[Name, LtrTerm] = {}
                    _bind_pattern(p, Var(z), arity, 0, binds)
                    for q in _pattern_leaves(p):
                        new_ds.append((PVar(q.name, q.type), binds[q.name]))
            return Letrec(tuple(new_ds), desugar(b, supply))
        case _:
            raise TypeError(t)


def _pattern_leaves(p: Pattern) -> list[PVar]:
    if isinstance(p, PVar):
        return [p]
    if isinstance(p, PWild):
        return []
    out: list[PVar] = []
    for q in p.parts:
        out.extend(_pattern_leaves(q))
    return out


# --------------------------------------------------------------------------
# type checking (core terms)


class LtrTypeError(Exception):
    pass


class UnboundVariable(LtrTypeError):
    pass


class TypeMismatch(LtrTypeError):
    pass


class ProjectionOutOfRange(LtrTypeError):
    pass


class EmptyLetrec(LtrTypeError):
    pass


def elaborate(ctx: Sequence[tuple[Name, LtrType]], term: LtrTerm) -> tuple[LtrTerm, LtrType]:
    """Type check a core term, filling in projection arities.

    All declared variables of a letrec are in scope in every declaration and
    in the body.
    """
    names = [n for n, _ in ctx]
    if len(set(names)) != len(names):
        raise LtrTypeError("duplicate variable in context")

    def go(env: dict[Name, LtrType], t: LtrTerm) -> tuple[LtrTerm, LtrType]:
        match t:
            case Var(n):
                if n not in env:
                    raise UnboundVariable(f"unbound variable {n}")
                return t, env[n]
            case Lam(PVar(x, ty) as p, b):
                b2, bt = go({**env, x: ty}, b)
                return Lam(p, b2), TFun(ty, bt)
            case Lam(_, _):
                raise LtrTypeError("tuple pattern in core term; desugar first")
            case App(f, a):
                f2, ft = go(env, f)
                a2, at = go(env, a)
                if not isinstance(ft, TFun):
                    raise TypeMismatch(f"applied non-function of type {ft}")
                if at != ft.arg:
                    raise TypeMismatch(f"argument type {at}, expected {ft.arg}")
                return App(f2, a2), ft.res
            case Tup(items):
                pairs = [go(env, i) for i in items]
                return Tup(tuple(x for x, _ in pairs)), product(ty for _, ty in pairs)
            case Proj(i, arity, a):
                a2, at = go(env, a)
                comps = components(at)
                if len(comps) < 2:
                    raise TypeMismatch(f"projection from non-product type {at}")
                if arity is not None and arity != len(comps):
                    raise ProjectionOutOfRange(
                        f"projection arity {arity} but type has {len(comps)} components")
                if not 1 <= i <= len(comps):
                    raise ProjectionOutOfRange(
                        f"pi{i} out of range for {len(comps)} components")
                return Proj(i, len(comps), a2), comps[i - 1]
            case Letrec(ds, b):
                if not ds:
                    raise EmptyLetrec("letrec needs at least one declaration")
                binders: list[tuple[Name, LtrType]] = []
                for p, _ in ds:
                    if not isinstance(p, PVar):
                        raise LtrTypeError("tuple pattern in core term; desugar first")
                    binders.append((p.name, p.type))
                if len({n for n, _ in binders}) != len(binders):
                    raise LtrTypeError("duplicate letrec binder")
                env2 = {**env, **dict(binders)}
                new_ds = []
                for p, rhs in ds:
                    rhs2, rt = go(env2, rhs)
                    if rt != p.type:
                        raise TypeMismatch(
                            f"declaration {p.name} annotated {p.type} but has type {rt}")
                    new_ds.append((p, rhs2))
                b2, bt = go(env2, b)
                return Letrec(tuple(new_ds), b2), bt
            case Let(_, _, _):
                raise LtrTypeError("let in core term; desugar first")
            case _:
                raise TypeError(t)

    return go(dict(ctx), term)


def typecheck(ctx: Sequence[tuple[Name, LtrType]], term: LtrTerm) -> LtrType:
    return elaborate(ctx, term)[1]


# --------------------------------------------------------------------------
# lexer / parser


_KEYWORDS = {"let", "letrec", "in", "be"}
_SYMBOLS = ("=>", "|-", "(", ")", ",", ":", "*", ".", "\\", "=", "_")


def _lex(text: str) -> list[tuple[str, str, int, int]]:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            if word == "_":
                toks.append(("_", word, line, col))
            elif word in _KEYWORDS:
                toks.append((word, word, line, col))
            elif word.startswith("pi") and word[2:].isdigit():
                toks.append(("proj", word[2:], line, col))
            else:
                toks.append(("ident", word, line, col))
            col += j - i
            i = j
            continue
        if c == "1":
            toks.append(("one", "1", line, col))
            i += 1
            col += 1
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append((sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str, supply: FreshSupply,
                 scope: Optional[dict[str, Name]] = None):
        self.toks = _lex(text)
        self.pos = 0
        self.supply = supply
        self.scope: dict[str, Name] = dict(scope or {})

    # -- token plumbing

    def peek(self) -> tuple[str, str, int, int]:
        return self.toks[self.pos]

    def next(self) -> tuple[str, str, int, int]:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> tuple[str, str, int, int]:
        t = self.peek()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", t[2], t[3])
        return self.next()

    def at(self, kind: str) -> bool:
        return self.peek()[0] == kind

    # -- types

    def type_(self) -> LtrType:
        t = self.type_prod()
        if self.at("=>"):
            self.next()
            return TFun(t, self.type_())
        return t

    def type_prod(self) -> LtrType:
        parts = [self.type_atom()]
        while self.at("*"):
            self.next()
            parts.append(self.type_atom())
        return product(parts)

    def type_atom(self) -> LtrType:
        k, v, line, col = self.peek()
        if k == "one":
            self.next()
            return UNIT
        if k == "ident":
            self.next()
            return TBase(v)
        if k == "(":
            self.next()
            t = self.type_()
            self.expect(")")
            return t
        raise ParseError(f"expected a type, found {v!r}", line, col)

    # -- patterns

    def pattern(self) -> Pattern:
        k, v, line, col = self.peek()
        if k == "ident":
            self.next()
            self.expect(":")
            ty = self.type_()
            return PVar(self.supply.named(v), ty)
        if k == "_":
            self.next()
            self.expect(":")
            return PWild(self.type_())
        if k == "(":
            self.next()
            if self.at(")"):
                self.next()
                return PTuple(())
            parts = [self.pattern()]
            while self.at(","):
                self.next()
                parts.append(self.pattern())
            self.expect(")")
            if len(parts) == 1:
                return parts[0]
            return PTuple(tuple(parts))
        raise ParseError(f"expected a pattern, found {v!r}", line, col)

    def _bind(self, p: Pattern) -> dict[str, Name]:
        saved = {}
        for n in pattern_names(p):
            saved[n.display] = self.scope.get(n.display)
            self.scope[n.display] = n
        return saved

    def _unbind(self, saved: dict[str, Optional[Name]]):
        for text, old in saved.items():
            if old is None:
                self.scope.pop(text, None)
            else:
                self.scope[text] = old

    # -- terms

    def term(self) -> LtrTerm:
        k, _, _, _ = self.peek()
        if k == "\\":
            self.next()
            p = self.pattern()
            self.expect(".")
            saved = self._bind(p)
            body = self.term()
            self._unbind(saved)
            return Lam(p, body)
        if k == "let":
            self.next()
            p = self.pattern()
            self.expect("=")
            value = self.term()
            self.expect("in")
            saved = self._bind(p)
            body = self.term()
            self._unbind(saved)
            return Let(p, value, body)
        if k == "letrec":
            # all declared names scope over every right-hand side and the
            # body, so collect the patterns first and re-parse the sides
            self.next()
            pending: list[tuple[Pattern, int]] = []
            while True:
                p = self.pattern()
                self.expect("be")
                pending.append((p, self.pos))
                self._skip_decl_rhs()
                if not self.at(","):
                    break
                self.next()
            end = self.pos
            texts = [n.display for p, _ in pending for n in pattern_names(p)]
            if len(set(texts)) != len(texts):
                t = self.peek()
                raise ParseError("duplicate letrec binder", t[2], t[3])
            saved: dict[str, Optional[Name]] = {}
            for p, _ in pending:
                for text, old in self._bind(p).items():
                    saved.setdefault(text, old)
            decls: list[tuple[Pattern, LtrTerm]] = []
            for p, start in pending:
                self.pos = start
                decls.append((p, self.term()))
            self.pos = end
            self.expect("in")
            body = self.term()
            self._unbind(saved)
            return Letrec(tuple(decls), body)
        return self.app()

    def _skip_decl_rhs(self):
        """Advance past one declaration side: stops at the ',' or 'in' that
        belongs to the enclosing letrec, tracking let/letrec...in nesting."""
        parens = 0
        letins = 0
        while True:
            k = self.peek()[0]
            if k == "eof":
                return
            if parens == 0 and letins == 0 and k in (",", "in"):
                return
            if k == "(":
                parens += 1
            elif k == ")":
                if parens == 0:
                    return
                parens -= 1
            elif k in ("let", "letrec"):
                letins += 1
            elif k == "in" and letins > 0:
                letins -= 1
            self.next()

    def app(self) -> LtrTerm:
        t = self.atom()
        while self.peek()[0] in ("ident", "(", "proj", "\\"):
            t = App(t, self.atom())
        return t

    def atom(self) -> LtrTerm:
        k, v, line, col = self.peek()
        if k == "proj":
            self.next()
            return Proj(int(v), None, self.atom())
        if k == "ident":
            self.next()
            if v in self.scope:
                return Var(self.scope[v])
            free = self.supply.named(v)
            self.scope[v] = free
            return Var(free)
        if k == "\\":
            return self.term()
        if k == "(":
            self.next()
            if self.at(")"):
                self.next()
                return UNIT_VAL
            t = self.term()
            if self.at(","):
                items = [t]
                while self.at(","):
                    self.next()
                    items.append(self.term())
                self.expect(")")
                return Tup(tuple(items))
            self.expect(")")
            return t
        raise ParseError(f"expected a term, found {v!r}", line, col)

    def bindings(self) -> list[tuple[Name, LtrType]]:
        out: list[tuple[Name, LtrType]] = []
        if self.peek()[0] != "ident":
            return out
        while True:
            _, v, line, col = self.expect("ident")
            if v in self.scope:
                raise ParseError(f"duplicate context variable {v!r}", line, col)
            self.expect(":")
            ty = self.type_()
            name = self.supply.named(v)
            self.scope[v] = name
            out.append((name, ty))
            if not self.at(","):
                return out
            self.next()

    def done(self):
        t = self.peek()
        if t[0] != "eof":
            raise ParseError(f"unexpected trailing input {t[1]!r}", t[2], t[3])


def parse_type(text: str) -> LtrType:
    p = _Parser(text, FreshSupply())
    t = p.type_()
    p.done()
    return t


def parse_term(text: str, ctx: Sequence[tuple[Name, LtrType]] = (),
               supply: Optional[FreshSupply] = None) -> LtrTerm:
    supply = supply or FreshSupply()
    p = _Parser(text, supply, {n.display: n for n, _ in ctx})
    t = p.term()
    p.done()
    return t


def parse_judgement(text: str, supply: Optional[FreshSupply] = None
                    ) -> tuple[list[tuple[Name, LtrType]], LtrTerm]:
    """``x:T, y:U |- term`` (context optional when there is no ``|-``)."""
    supply = supply or FreshSupply()
    if "|-" in text:
        p = _Parser(text, supply)
        ctx = p.bindings()
        p.expect("|-")
        t = p.term()
        p.done()
        return ctx, t
    return [], parse_term(text, supply=supply)


# --------------------------------------------------------------------------
# printing


def term_str(t: LtrTerm) -> str:
    taken: set[str] = {n.display for n in fv(t)}

    def pick(n: Name, used: set[str]) -> str:
        base = n.display
        cand = base
        k = 1
        while cand in used:
            cand = f"{base}_{k}"
            k += 1
        return cand

    def pat_str(p: Pattern, env: dict[Name, str], used: set[str]) -> str:
        if isinstance(p, PVar):
            s = pick(p.name, used)
            env[p.name] = s
            used.add(s)
            return f"{s}:{type_str(p.type)}"
        if isinstance(p, PWild):
            return f"_:{type_str(p.type)}"
        return "(" + ", ".join(pat_str(q, env, used) for q in p.parts) + ")"

    def go(t: LtrTerm, env: dict[Name, str], used: set[str], prec: int) -> str:
        # prec 0: anywhere; 1: application position; 2: atom position
        match t:
            case Var(n):
                return env.get(n, n.display)
            case Lam(p, b):
                env2, used2 = dict(env), set(used)
                ps = pat_str(p, env2, used2)
                s = f"\\{ps}. {go(b, env2, used2, 0)}"
                return f"({s})" if prec > 0 else s
            case App(f, a):
                s = f"{go(f, env, used, 1)} {go(a, env, used, 2)}"
                return f"({s})" if prec > 1 else s
            case Tup(items):
                return "(" + ", ".join(go(i, env, used, 0) for i in items) + ")"
            case Proj(i, _, a):
                s = f"pi{i} {go(a, env, used, 2)}"
                return f"({s})" if prec > 1 else s
            case Letrec(ds, b):
                env2, used2 = dict(env), set(used)
                pats = []
                for p, _ in ds:
                    pats.append(pat_str(p, env2, used2))
                decls = ", ".join(
                    f"{ps} be {go(r, env2, used2, 1) if isinstance(r, (Lam, Let, Letrec)) else go(r, env2, used2, 0)}"
                    for ps, (_, r) in zip(pats, ds)
                )
                s = f"letrec {decls} in {go(b, env2, used2, 0)}"
                return f"({s})" if prec > 0 else s
            case Let(p, v, b):
                vs = go(v, env, used, 0)
                env2, used2 = dict(env), set(used)
                ps = pat_str(p, env2, used2)
                s = f"let {ps} = {vs} in {go(b, env2, used2, 0)}"
                return f"({s})" if prec > 0 else s
            case _:
                raise TypeError(t)

    return go(t, {}, taken, 0)


# --------------------------------------------------------------------------
# JSON export


def type_to_json(t: LtrType):
    if isinstance(t, TBase):
        return {"type": "base", "name": t.name}
    if isinstance(t, TFun):
        return {"type": "fun", "arg": type_to_json(t.arg), "res": type_to_json(t.res)}
    if isinstance(t, TProd):
        return {"type": "prod", "parts": [type_to_json(p) for p in t.parts]}
    raise TypeError(t)


def term_to_json(t: LtrTerm):
    match t:
        case Var(n):
            return {"node": "var", "name": str(n), "uid": n.uid}
        case Lam(PVar(x, ty), b):
            return {"node": "lam", "param": str(x), "uid": x.uid,
                    "param_type": type_to_json(ty), "body": term_to_json(b)}
        case App(f, a):
            return {"node": "app", "fun": term_to_json(f), "arg": term_to_json(a)}
        case Tup(items):
            return {"node": "tuple", "items": [term_to_json(i) for i in items]}
        case Proj(i, n, a):
            return {"node": "proj", "index": i, "arity": n, "arg": term_to_json(a)}
        case Letrec(ds, b):
            return {
                "node": "letrec",
                "decls": [
                    {"name": str(p.name), "uid": p.name.uid,
                     "decl_type": type_to_json(p.type), "rhs": term_to_json(r)}
                    for p, r in ds
                ],
                "body": term_to_json(b),
            }
        case _:
            raise TypeError(f"cannot export sugared term {t!r}")
