"""Wirings: purely linear translated terms as port permutations.

A translated judgement whose source uses only linear variables, linear
lambdas and linear applications denotes a bijection between atomic ports:
one input port per atom of the continuation interface and of each linear
context entry, one output port per atom of the result.  The bijection is
computed by pushing a distinct token through the term symbolically; letrec
declarations act as feedback and are resolved by chasing references until
every output holds an input token.

Port names are ``<var>.<i>`` over the canonical components of the variable's
interface (``k`` for the continuation, ``out`` for results), so goldens are
stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from . import ltr
from .errors import InternalError
from .names import Name
from .translate import TranslationOutput


class WiringError(Exception):
    pass


class HigherOrderAtom(WiringError):
    pass


class NotLinear(WiringError):
    pass


class CyclicWire(WiringError):
    pass


class InterfaceMismatch(WiringError):
    pass


class LiveLoop(WiringError):
    pass


@dataclass(frozen=True)
class Port:
    name: str
    side: str  # "in" | "out"


@dataclass
class Wiring:
    inputs: tuple[Port, ...]
    outputs: tuple[Port, ...]
    mapping: dict[str, str]  # input name -> output name

    def validate(self) -> None:
        ins = [p.name for p in self.inputs]
        outs = [p.name for p in self.outputs]
        if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
            raise WiringError("duplicate port name")
        if len(ins) != len(outs):
            raise WiringError("port count mismatch")
        if set(self.mapping.keys()) != set(ins):
            raise WiringError("mapping not total on inputs")
        if set(self.mapping.values()) != set(outs):
            raise WiringError("mapping not onto outputs")

    def renamed(self, in_map: Mapping[str, str] = {}, out_map: Mapping[str, str] = {}
                ) -> "Wiring":
        return Wiring(
            tuple(Port(in_map.get(p.name, p.name), "in") for p in self.inputs),
            tuple(Port(out_map.get(p.name, p.name), "out") for p in self.outputs),
            {in_map.get(i, i): out_map.get(o, o) for i, o in self.mapping.items()},
        )

    def permutation(self) -> list[int]:
        """Output position (1-based) fed by each input, in input order."""
        pos = {p.name: i + 1 for i, p in enumerate(self.outputs)}
        return [pos[self.mapping[p.name]] for p in self.inputs]


def atoms_of(t: ltr.LtrType) -> list[str]:
    """Left-to-right base-type leaves of a canonical product; unit is empty."""
    out: list[str] = []
    for c in ltr.components(t):
        if isinstance(c, ltr.TBase):
            out.append(c.name)
        elif isinstance(c, ltr.TFun):
            raise HigherOrderAtom(f"function type {ltr.type_str(c)} has no atoms")
        else:
            raise InternalError(f"non-canonical component {c}")
    return out


# --------------------------------------------------------------------------
# symbolic evaluation

# a flat value is a tuple of leaves; a leaf is a token (input port name) or a
# reference to component j of a letrec declaration


@dataclass(frozen=True)
class _Tok:
    port: str


@dataclass(frozen=True)
class _Ref:
    decl: Name
    comp: int


@dataclass(frozen=True)
class _Flat:
    leaves: tuple


@dataclass(frozen=True)
class _Clos:
    param: Name
    body: ltr.LtrTerm
    env: tuple


def _eval(t: ltr.LtrTerm, env: dict):
    match t:
        case ltr.Var(n):
            if n not in env:
                raise InternalError(f"unbound {n} during wiring evaluation")
            return env[n]
        case ltr.Lam(ltr.PVar(x, _), b):
            return _Clos(x, b, tuple(env.items()))
        case ltr.App(f, a):
            cf = _eval(f, env)
            if not isinstance(cf, _Clos):
                raise NotLinear("application head is not a wiring-level function")
            va = _eval(a, env)
            return _eval(cf.body, {**dict(cf.env), cf.param: va})
        case ltr.Tup(items):
            leaves = []
            for i in items:
                v = _eval(i, env)
                if isinstance(v, _Clos):
                    raise HigherOrderAtom("function inside a wiring tuple")
                leaves.extend(v.leaves)
            return _Flat(tuple(leaves))
        case ltr.Proj(i, _, a):
            v = _eval(a, env)
            if not isinstance(v, _Flat):
                raise NotLinear("projection from a non-wire value")
            return _Flat((v.leaves[i - 1],))
        case ltr.Letrec(ds, b):
            env2 = dict(env)
            widths = {}
            for p, _ in ds:
                w = len(ltr.components(p.type))
                widths[p.name] = w
                env2[p.name] = _Flat(tuple(_Ref(p.name, j) for j in range(w)))
            rhs_val: dict[Name, _Flat] = {}
            for p, rhs in ds:
                v = _eval(rhs, env2)
                if not isinstance(v, _Flat) or len(v.leaves) != widths[p.name]:
                    raise InternalError("declaration did not evaluate to its width")
                rhs_val[p.name] = v
            body = _eval(b, env2)
            if not isinstance(body, _Flat):
                raise HigherOrderAtom("letrec body is not a wire bundle")
            return _Flat(tuple(_chase(leaf, rhs_val) for leaf in body.leaves))
        case _:
            raise TypeError(t)


def _chase(leaf, rhs_val: dict):
    # references to declarations of an enclosing letrec stay put; the
    # enclosing resolution step chases them in turn
    seen = set()
    while isinstance(leaf, _Ref) and leaf.decl in rhs_val:
        key = (leaf.decl, leaf.comp)
        if key in seen:
            raise CyclicWire(f"token loops through {leaf.decl}")
        seen.add(key)
        leaf = rhs_val[leaf.decl].leaves[leaf.comp]
    return leaf


def _var_ports(name_text: str, ty: ltr.LtrType) -> list[str]:
    return [f"{name_text}.{i}" for i, _ in enumerate(atoms_of(ty), start=1)]


def wiring_of(out: TranslationOutput) -> Wiring:
    """The permutation computed by a purely linear translated term.

    Inputs are the continuation atoms (``k.i``) followed by the atoms of each
    linear context entry; outputs ``out.i`` run over the result atoms.
    """
    if out.gamma_ctx:
        raise NotLinear("non-linear context entries present")
    term = out.term
    if not isinstance(term, ltr.Lam) or not isinstance(term.param, ltr.PVar):
        raise NotLinear("translated term is not an interface function")

    try:
        in_ports: list[str] = _var_ports("k", out.sigma.neg)
        k_flat = tuple(_Tok(p) for p in in_ports)
        texts: dict[str, int] = {}
        delta_flats = []
        for n, ty in out.delta_ctx:
            text = n.display
            if text in texts or text in ("k", "out"):
                text = f"{text}#{n.uid}"
            texts[text] = n.uid
            ports = _var_ports(text, ty)
            in_ports.extend(ports)
            delta_flats.append((n, _Flat(tuple(_Tok(p) for p in ports))))
    except HigherOrderAtom as e:
        raise NotLinear(str(e)) from e

    env: dict[Name, object] = {n: v for n, v in delta_flats}
    env[term.param.name] = _Flat(k_flat)
    try:
        result = _eval(term.body, env)
    except HigherOrderAtom as e:
        raise NotLinear(str(e)) from e
    if not isinstance(result, _Flat):
        raise NotLinear("result is not a wire bundle")
    leaves = result.leaves
    if len(leaves) != len(in_ports):
        raise InternalError(
            f"{len(in_ports)} input ports but {len(leaves)} outputs")
    mapping: dict[str, str] = {}
    outputs = []
    for i, leaf in enumerate(leaves, start=1):
        if not isinstance(leaf, _Tok):
            raise CyclicWire("output component never reached an input token")
        oname = f"out.{i}"
        outputs.append(Port(oname, "out"))
        if leaf.port in mapping:
            raise InternalError(f"input {leaf.port} used twice")
        mapping[leaf.port] = oname
    w = Wiring(tuple(Port(p, "in") for p in in_ports), tuple(outputs), mapping)
    w.validate()
    return w


def identity_wiring(names: Sequence[str]) -> Wiring:
    return Wiring(
        tuple(Port(n, "in") for n in names),
        tuple(Port(n, "out") for n in names),
        {n: n for n in names},
    )


def compose_wirings(f: Wiring, g: Wiring, interface: Sequence[str]) -> Wiring:
    """Traced composition: ``interface`` ports flow from f's outputs into g's
    inputs; any port name shared by g's outputs and f's inputs flows back as
    feedback.  Remaining ports form the composite boundary (f's then g's)."""
    f.validate()
    g.validate()
    iface = list(interface)
    f_out = {p.name for p in f.outputs}
    g_in = {p.name for p in g.inputs}
    for n in iface:
        if n not in f_out or n not in g_in:
            raise InterfaceMismatch(f"interface port {n!r} missing on one side")
    feedback = [p.name for p in g.outputs
                if p.name in {q.name for q in f.inputs} and p.name not in iface]
    fb = set(feedback)
    iface_set = set(iface)

    starts = [("f", p) for p in f.inputs if p.name not in fb] + \
             [("g", p) for p in g.inputs if p.name not in iface_set]
    outs = [p for p in g.outputs if p.name not in fb] + \
           [p for p in f.outputs if p.name not in iface_set]

    limit = len(f.inputs) + len(g.inputs) + len(iface) + len(feedback) + 2
    mapping = {}
    for side, start in starts:
        port = start.name
        hops = 0
        while True:
            hops += 1
            if hops > limit:
                raise LiveLoop(f"token from {start.name!r} never exits")
            port = (f if side == "f" else g).mapping[port]
            if side == "f" and port in iface_set:
                side = "g"
                continue
            if side == "g" and port in fb:
                side = "f"
                continue
            break
        mapping[start.name] = port
    w = Wiring(tuple(p for _, p in starts), tuple(outs), mapping)
    w.validate()
    return w


# --------------------------------------------------------------------------
# DOT export


def to_dot(w: Union[Wiring, TranslationOutput], name: str = "wiring") -> str:
    """A deterministic DOT digraph: inputs ranked left, outputs right."""
    if isinstance(w, TranslationOutput):
        w = wiring_of(w)
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=plaintext];"]
    lines.append("  { rank=source;")
    for p in w.inputs:
        lines.append(f'    "in:{p.name}" [label="{p.name}"];')
    lines.append("  }")
    lines.append("  { rank=sink;")
    for p in w.outputs:
        lines.append(f'    "out:{p.name}" [label="{p.name}"];')
    lines.append("  }")
    for p in w.inputs:
        lines.append(f'  "in:{p.name}" -> "out:{w.mapping[p.name]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
