"""The source calculus: a dual-context linear lambda calculus.

Types are ``b | bot | s -o t | s -> t``; terms have a linear lambda ``\\x:T.``
and application by juxtaposition, a non-linear lambda ``\\\\x:T.`` and
application ``M @ N``, and double-negation elimination ``C[T] M``.  A typing
judgement splits the context into a non-linear zone (unrestricted use) and a
linear zone (each variable used exactly once); the split of the linear zone
at each linear application is inferred from variable usage and recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ParseError
from .names import Name, FreshSupply

# --------------------------------------------------------------------------
# types


class DcllType:
    __slots__ = ()

    def __str__(self) -> str:
        return type_str(self)


@dataclass(frozen=True)
class TBase(DcllType):
    name: str


@dataclass(frozen=True)
class TBottom(DcllType):
    pass


@dataclass(frozen=True)
class TLolli(DcllType):
    arg: DcllType
    res: DcllType


@dataclass(frozen=True)
class TArrow(DcllType):
    arg: DcllType
    res: DcllType


BOT = TBottom()


def type_str(t: DcllType) -> str:
    if isinstance(t, TBase):
        return t.name
    if isinstance(t, TBottom):
        return "bot"
    if isinstance(t, (TLolli, TArrow)):
        op = "-o" if isinstance(t, TLolli) else "->"
        arg = type_str(t.arg)
        if isinstance(t.arg, (TLolli, TArrow)):
            arg = f"({arg})"
        return f"{arg} {op} {type_str(t.res)}"
    raise TypeError(t)


# --------------------------------------------------------------------------
# terms


class DcllTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return term_str(self)


@dataclass(frozen=True)
class Var(DcllTerm):
    name: Name


@dataclass(frozen=True)
class LinLam(DcllTerm):
    name: Name
    type: DcllType
    body: DcllTerm


@dataclass(frozen=True)
class LinApp(DcllTerm):
    fun: DcllTerm
    arg: DcllTerm


@dataclass(frozen=True)
class NonLinLam(DcllTerm):
    name: Name
    type: DcllType
    body: DcllTerm


@dataclass(frozen=True)
class NonLinApp(DcllTerm):
    fun: DcllTerm
    arg: DcllTerm


@dataclass(frozen=True)
class CElim(DcllTerm):
    type: DcllType
    body: DcllTerm


def fv(t: DcllTerm) -> frozenset[Name]:
    match t:
        case Var(n):
            return frozenset((n,))
        case LinLam(n, _, b) | NonLinLam(n, _, b):
            return fv(b) - {n}
        case LinApp(f, a) | NonLinApp(f, a):
            return fv(f) | fv(a)
        case CElim(_, b):
            return fv(b)
        case _:
            raise TypeError(t)


def subst_many(t: DcllTerm, sub: dict[Name, DcllTerm], supply: FreshSupply) -> DcllTerm:
    """Capture-avoiding parallel substitution."""
    if not sub:
        return t

    def go(t: DcllTerm, live: dict[Name, DcllTerm]) -> DcllTerm:
        if not live:
            return t
        match t:
            case Var(n):
                return live.get(n, t)
            case LinLam(n, ty, b) | NonLinLam(n, ty, b):
                cls = LinLam if isinstance(t, LinLam) else NonLinLam
                inner = {k: v for k, v in live.items() if k != n}
                if inner and any(n in fv(v) for v in inner.values()):
                    m = supply.rename(n)
                    inner = dict(inner)
                    inner[n] = Var(m)
                    return cls(m, ty, go(b, inner))
                return cls(n, ty, go(b, inner))
            case LinApp(f, a):
                return LinApp(go(f, live), go(a, live))
            case NonLinApp(f, a):
                return NonLinApp(go(f, live), go(a, live))
            case CElim(ty, b):
                return CElim(ty, go(b, live))
            case _:
                raise TypeError(t)

    return go(t, dict(sub))


def subst(t: DcllTerm, var: Name, replacement: DcllTerm, supply: FreshSupply) -> DcllTerm:
    return subst_many(t, {var: replacement}, supply)


def alpha_eq(a: DcllTerm, b: DcllTerm) -> bool:
    counter = [0]

    def go(a: DcllTerm, b: DcllTerm, enva: dict, envb: dict) -> bool:
        match a, b:
            case Var(n), Var(m):
                ia, ib = enva.get(n), envb.get(m)
                if ia is None and ib is None:
                    return n.display == m.display
                return ia == ib
            case (LinLam(n, ta, ba), LinLam(m, tb, bb)) | (
                NonLinLam(n, ta, ba), NonLinLam(m, tb, bb)
            ):
                if ta != tb:
                    return False
                counter[0] += 1
                return go(ba, bb, {**enva, n: counter[0]}, {**envb, m: counter[0]})
            case (LinApp(f, x), LinApp(g, y)) | (NonLinApp(f, x), NonLinApp(g, y)):
                return go(f, g, enva, envb) and go(x, y, enva, envb)
            case CElim(ta, ba), CElim(tb, bb):
                return ta == tb and go(ba, bb, enva, envb)
            case _:
                return False

    return go(a, b, {}, {})


def max_uid(t: DcllTerm) -> int:
    best = 0

    def go(t: DcllTerm):
        nonlocal best
        match t:
            case Var(n):
                best = max(best, n.uid)
            case LinLam(n, _, b) | NonLinLam(n, _, b):
                best = max(best, n.uid)
                go(b)
            case LinApp(f, a) | NonLinApp(f, a):
                go(f)
                go(a)
            case CElim(_, b):
                go(b)

    go(t)
    return best


# --------------------------------------------------------------------------
# typing


Binding = tuple[Name, DcllType]


@dataclass(frozen=True)
class DualContext:
    gamma: tuple[Binding, ...] = ()
    delta: tuple[Binding, ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.gamma] + [n for n, _ in self.delta]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable across dual context")

    def __str__(self) -> str:
        g = ", ".join(f"{n}:{type_str(t)}" for n, t in self.gamma)
        d = ", ".join(f"{n}:{type_str(t)}" for n, t in self.delta)
        return f"{g} ; {d}"


class DcllTypeError(Exception):
    pass


class UnboundVariable(DcllTypeError):
    pass


class LinearVariableUnused(DcllTypeError):
    pass


class LinearVariableDuplicated(DcllTypeError):
    pass


class SharedLinearVariable(DcllTypeError):
    pass


class TypeMismatch(DcllTypeError):
    pass


class NonEmptyLinearContextInNonLinArg(DcllTypeError):
    pass


class DualityTypeMismatch(DcllTypeError):
    pass


@dataclass
class Deriv:
    """One node of a typing derivation.

    ``rule`` is one of ax_nonlinear, ax_linear, lolli_intro, lolli_elim,
    arrow_intro, arrow_elim, duality.  ``delta`` is the node's own linear
    context; for lolli_elim ``split`` records its order-preserving partition
    between function and argument.
    """

    rule: str
    term: DcllTerm
    gamma: tuple[Binding, ...]
    delta: tuple[Binding, ...]
    type: DcllType
    children: tuple["Deriv", ...] = ()
    split: Optional[tuple[tuple[Binding, ...], tuple[Binding, ...]]] = None


@dataclass
class TypedDcll:
    term: DcllTerm
    ctx: DualContext
    type: DcllType
    deriv: Deriv

    @property
    def splits(self) -> dict[tuple[int, ...], tuple[tuple[Binding, ...], tuple[Binding, ...]]]:
        """Per linear application, keyed by root-to-node child-index path."""
        out: dict[tuple[int, ...], tuple] = {}

        def walk(d: Deriv, path: tuple[int, ...]):
            if d.rule == "lolli_elim":
                out[path] = d.split
            for i, c in enumerate(d.children):
                walk(c, path + (i,))

        walk(self.deriv, ())
        return out

    def rules_used(self) -> dict[str, int]:
        out: dict[str, int] = {}

        def walk(d: Deriv):
            out[d.rule] = out.get(d.rule, 0) + 1
            for c in d.children:
                walk(c)

        walk(self.deriv)
        return out


def linear_split(delta: Sequence[Binding], used_left: frozenset[Name] | set[Name],
                 used_right: frozenset[Name] | set[Name]
                 ) -> tuple[tuple[Binding, ...], tuple[Binding, ...]]:
    """Partition an ordered linear context by usage, preserving relative order."""
    shared = set(used_left) & set(used_right)
    if shared:
        raise SharedLinearVariable(
            "linear variable used on both sides: " + ", ".join(sorted(str(n) for n in shared)))
    left = tuple(b for b in delta if b[0] in used_left)
    right = tuple(b for b in delta if b[0] in used_right)
    leftover = [b for b in delta if b[0] not in used_left and b[0] not in used_right]
    if leftover:
        raise LinearVariableUnused(
            "linear variable never used: " + ", ".join(str(n) for n, _ in leftover))
    return left, right


def typecheck(ctx: DualContext, term: DcllTerm) -> TypedDcll:
    """Check a term against a dual context, inferring all linear splits.

    The linear zone must be consumed exactly; the bound variable of a linear
    lambda is tracked at the front of the zone, so its interface component
    sits next to the function's own in the translation.
    """

    def go(gamma: dict[Name, DcllType], gamma_order: tuple[Binding, ...],
           delta: tuple[Binding, ...], t: DcllTerm) -> Deriv:
        match t:
            case Var(n):
                for dn, dt in delta:
                    if dn == n:
                        if len(delta) > 1:
                            rest = ", ".join(str(m) for m, _ in delta if m != n)
                            raise LinearVariableUnused(
                                f"linear variable never used: {rest}")
                        return Deriv("ax_linear", t, gamma_order, delta, dt)
                if n in gamma:
                    if delta:
                        rest = ", ".join(str(m) for m, _ in delta)
                        raise LinearVariableUnused(
                            f"linear variable never used: {rest}")
                    return Deriv("ax_nonlinear", t, gamma_order, delta, gamma[n])
                raise UnboundVariable(f"unbound variable {n}")
            case LinLam(x, ty, b):
                d = go(gamma, gamma_order, ((x, ty),) + delta, b)
                return Deriv("lolli_intro", t, gamma_order, delta,
                             TLolli(ty, d.type), (d,))
            case LinApp(f, a):
                here = {n for n, _ in delta}
                used_f = fv(f) & here
                used_a = fv(a) & here
                dup = used_f & used_a
                if dup:
                    raise LinearVariableDuplicated(
                        "linear variable used twice: "
                        + ", ".join(sorted(str(n) for n in dup)))
                d1, d2 = linear_split(delta, used_f, used_a)
                df = go(gamma, gamma_order, d1, f)
                if not isinstance(df.type, TLolli):
                    raise TypeMismatch(
                        f"linear application of non -o type {df.type} in {t}")
                da = go(gamma, gamma_order, d2, a)
                if da.type != df.type.arg:
                    raise TypeMismatch(
                        f"argument has type {da.type}, expected {df.type.arg} in {t}")
                return Deriv("lolli_elim", t, gamma_order, delta, df.type.res,
                             (df, da), split=(d1, d2))
            case NonLinLam(x, ty, b):
                d = go({**gamma, x: ty}, gamma_order + ((x, ty),), delta, b)
                return Deriv("arrow_intro", t, gamma_order, delta,
                             TArrow(ty, d.type), (d,))
            case NonLinApp(f, a):
                spill = fv(a) & {n for n, _ in delta}
                if spill:
                    raise NonEmptyLinearContextInNonLinArg(
                        "non-linear argument uses linear variable: "
                        + ", ".join(sorted(str(n) for n in spill)))
                df = go(gamma, gamma_order, delta, f)
                if not isinstance(df.type, TArrow):
                    raise TypeMismatch(
                        f"non-linear application of non -> type {df.type} in {t}")
                da = go(gamma, gamma_order, (), a)
                if da.type != df.type.arg:
                    raise TypeMismatch(
                        f"argument has type {da.type}, expected {df.type.arg} in {t}")
                return Deriv("arrow_elim", t, gamma_order, delta, df.type.res, (df, da))
            case CElim(ty, b):
                d = go(gamma, gamma_order, delta, b)
                want = TLolli(TLolli(ty, BOT), BOT)
                if d.type != want:
                    raise DualityTypeMismatch(
                        f"C[{type_str(ty)}] body has type {d.type}, expected {want}")
                return Deriv("duality", t, gamma_order, delta, ty, (d,))
            case _:
                raise TypeError(t)

    deriv = go(dict(ctx.gamma), ctx.gamma, ctx.delta, term)
    return TypedDcll(term, ctx, deriv.type, deriv)


# --------------------------------------------------------------------------
# lexer / parser


_SYMBOLS = ("\\\\", "\\", "->", "-o", "|-", "@", "(", ")", "[", "]", ",", ":", ".", ";")


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
            if word == "bot":
                toks.append(("bot", word, line, col))
            elif word == "C":
                toks.append(("C", word, line, col))
            else:
                toks.append(("ident", word, line, col))
            col += j - i
            i = j
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

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str):
        t = self.peek()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", t[2], t[3])
        return self.next()

    def at(self, kind: str) -> bool:
        return self.peek()[0] == kind

    # -- types: -o and -> are right associative at equal precedence

    def type_(self) -> DcllType:
        t = self.type_atom()
        if self.at("-o"):
            self.next()
            return TLolli(t, self.type_())
        if self.at("->"):
            self.next()
            return TArrow(t, self.type_())
        return t

    def type_atom(self) -> DcllType:
        k, v, line, col = self.peek()
        if k == "bot":
            self.next()
            return BOT
        if k == "ident":
            self.next()
            return TBase(v)
        if k == "(":
            self.next()
            t = self.type_()
            self.expect(")")
            return t
        raise ParseError(f"expected a type, found {v!r}", line, col)

    # -- terms

    def term(self) -> DcllTerm:
        k, _, _, _ = self.peek()
        if k in ("\\", "\\\\"):
            self.next()
            _, v, _, _ = self.expect("ident")
            self.expect(":")
            ty = self.type_()
            self.expect(".")
            name = self.supply.named(v)
            old = self.scope.get(v)
            self.scope[v] = name
            body = self.term()
            if old is None:
                self.scope.pop(v, None)
            else:
                self.scope[v] = old
            cls = LinLam if k == "\\" else NonLinLam
            return cls(name, ty, body)
        return self.app()

    def app(self) -> DcllTerm:
        t = self.atom()
        while True:
            k = self.peek()[0]
            if k in ("ident", "(", "C", "\\", "\\\\"):
                t = LinApp(t, self.atom())
            elif k == "@":
                self.next()
                t = NonLinApp(t, self.atom())
            else:
                return t

    def atom(self) -> DcllTerm:
        k, v, line, col = self.peek()
        if k == "ident":
            self.next()
            if v in self.scope:
                return Var(self.scope[v])
            free = self.supply.named(v)
            self.scope[v] = free
            return Var(free)
        if k == "C":
            self.next()
            self.expect("[")
            ty = self.type_()
            self.expect("]")
            return CElim(ty, self.atom())
        if k in ("\\", "\\\\"):
            return self.term()
        if k == "(":
            self.next()
            t = self.term()
            self.expect(")")
            return t
        raise ParseError(f"expected a term, found {v!r}", line, col)

    def bindings(self) -> tuple[Binding, ...]:
        out: list[Binding] = []
        if self.peek()[0] != "ident":
            return ()
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
                return tuple(out)
            self.next()

    def done(self):
        t = self.peek()
        if t[0] != "eof":
            raise ParseError(f"unexpected trailing input {t[1]!r}", t[2], t[3])


def parse_type(text: str) -> DcllType:
    p = _Parser(text, FreshSupply())
    t = p.type_()
    p.done()
    return t


def parse_term(text: str, ctx: Optional[DualContext] = None,
               supply: Optional[FreshSupply] = None) -> DcllTerm:
    supply = supply or FreshSupply()
    scope = {}
    if ctx is not None:
        for n, _ in ctx.gamma + ctx.delta:
            scope[n.display] = n
    p = _Parser(text, supply, scope)
    t = p.term()
    p.done()
    return t


def parse_judgement(text: str, supply: Optional[FreshSupply] = None
                    ) -> tuple[DualContext, DcllTerm]:
    """``gamma ; delta |- term`` with comma-separated ``x:type`` bindings."""
    supply = supply or FreshSupply()
    p = _Parser(text, supply)
    gamma = p.bindings()
    p.expect(";")
    delta = p.bindings()
    p.expect("|-")
    t = p.term()
    p.done()
    return DualContext(gamma, delta), t


# --------------------------------------------------------------------------
# printing


def term_str(t: DcllTerm) -> str:
    taken = {n.display for n in fv(t)}

    def pick(n: Name, used: set[str]) -> str:
        base = n.display
        cand = base
        k = 1
        while cand in used:
            cand = f"{base}_{k}"
            k += 1
        return cand

    def go(t: DcllTerm, env: dict[Name, str], used: set[str], prec: int) -> str:
        # prec 0: anywhere; 1: application head; 2: atom position
        match t:
            case Var(n):
                return env.get(n, n.display)
            case LinLam(n, ty, b) | NonLinLam(n, ty, b):
                lam = "\\" if isinstance(t, LinLam) else "\\\\"
                s = pick(n, used)
                body = go(b, {**env, n: s}, used | {s}, 0)
                out = f"{lam}{s}:{type_str(ty)}. {body}"
                return f"({out})" if prec > 0 else out
            case LinApp(f, a):
                s = f"{go(f, env, used, 1)} {go(a, env, used, 2)}"
                return f"({s})" if prec > 1 else s
            case NonLinApp(f, a):
                s = f"{go(f, env, used, 1)} @ {go(a, env, used, 2)}"
                return f"({s})" if prec > 1 else s
            case CElim(ty, b):
                s = f"C[{type_str(ty)}] {go(b, env, used, 2)}"
                return f"({s})" if prec > 1 else s
            case _:
                raise TypeError(t)

    return go(t, {}, taken, 0)
