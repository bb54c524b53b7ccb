"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from dcll2letrec import dcll, gen, ltr, rewrite, translate, wiring
from dcll2letrec.names import FreshSupply


@pytest.fixture
def std_env():
    """Explicit interfaces for the base types used in the worked examples."""
    return translate.BaseTypeEnv({
        "s": translate.PolarType(ltr.TBase("sp"), ltr.TBase("sm")),
        "t": translate.PolarType(ltr.TBase("tp"), ltr.TBase("tm")),
        "d": translate.PolarType(ltr.TBase("dp"), ltr.TBase("dm")),
        "b": translate.PolarType(ltr.TBase("bp"), ltr.TBase("bm")),
    })


@pytest.fixture
def auto_env():
    return translate.BaseTypeEnv(auto=True)


def check_dcll(src: str):
    """Parse and typecheck a dcll judgement."""
    sup = FreshSupply()
    ctx, term = dcll.parse_judgement(src, sup)
    return dcll.typecheck(ctx, term), sup


def elab_ltr(src: str):
    """Parse, desugar and elaborate a letrec judgement; returns ctx, term, type."""
    sup = FreshSupply()
    ctx, term = ltr.parse_judgement(src, sup)
    core = ltr.desugar(term, sup)
    core, ty = ltr.elaborate(ctx, core)
    return ctx, core, ty


def translate_pair(lhs_judgement: str, rhs_term: str, env):
    """Translate two sides sharing the left judgement's context."""
    sup = FreshSupply()
    ctx, tl = dcll.parse_judgement(lhs_judgement, sup)
    tr = dcll.parse_term(rhs_term, ctx, sup)
    a = translate.translate(dcll.typecheck(ctx, tl), env, sup)
    b = translate.translate(dcll.typecheck(ctx, tr), env, sup)
    assert a.type == b.type
    return a, b


def _atom_count(t: ltr.LtrType) -> int:
    return len(wiring.atoms_of(t))


def app_composite_matches(typed: dcll.TypedDcll, env) -> bool:
    """Check the traced-composition recipe for one linear application.

    Wire the argument's wiring into the function's through the shared
    interface (forward: the argument type's positive atoms; feedback: its
    negative atoms) and compare the composite link-by-link against the
    wiring of the whole application.
    """
    d = typed.deriv
    assert d.rule == "lolli_elim"
    dm, dn = d.children
    sigma = dm.type.arg
    d1, d2 = d.split

    out_mn = translate.translate(typed, env)
    out_m = translate.translate(
        dcll.typecheck(dcll.DualContext((), d1), dm.term), env)
    out_n = translate.translate(
        dcll.typecheck(dcll.DualContext((), d2), dn.term), env)
    w_mn = wiring.wiring_of(out_mn)
    w_m = wiring.wiring_of(out_m)
    w_n = wiring.wiring_of(out_n)

    sp = translate.translate_type(sigma, env)
    n_pos, n_neg = _atom_count(sp.pos), _atom_count(sp.neg)
    tau_pos = _atom_count(translate.translate_type(dm.type.res, env).pos)

    n_out_ren = {f"out.{i}": (f"iface.{i}" if i <= n_pos else f"n.out.{i}")
                 for i in range(1, len(w_n.outputs) + 1)}
    n_in_ren = {f"k.{i}": f"fb.{i}" for i in range(1, n_neg + 1)}
    f_w = w_n.renamed(n_in_ren, n_out_ren)

    m_k_ports = sum(1 for p in w_m.inputs if p.name.startswith("k."))
    m_in_ren = {}
    for i in range(1, m_k_ports + 1):
        m_in_ren[f"k.{i}"] = f"iface.{i}" if i <= n_pos else f"k.{i - n_pos}"
    m_out_ren = {}
    for i in range(1, len(w_m.outputs) + 1):
        if i <= tau_pos:
            m_out_ren[f"out.{i}"] = f"m.out.{i}"
        elif i <= tau_pos + n_neg:
            m_out_ren[f"out.{i}"] = f"fb.{i - tau_pos}"
        else:
            m_out_ren[f"out.{i}"] = f"m.out.{i}"
    g_w = w_m.renamed(m_in_ren, m_out_ren)

    comp = wiring.compose_wirings(
        f_w, g_w, [f"iface.{i}" for i in range(1, n_pos + 1)])

    # map composite output names back to the whole application's out.<i>
    def neg_width(ty):
        return _atom_count(translate.translate_type(ty, env).neg)

    out_map = {f"m.out.{i}": f"out.{i}" for i in range(1, tau_pos + 1)}
    at = tau_pos
    off_m = tau_pos + n_neg
    off_n = n_pos
    pos_m = {nm: idx for idx, (nm, _) in enumerate(d1)}
    pos_n = {nm: idx for idx, (nm, _) in enumerate(d2)}
    for nm, ty in d.delta:
        w_entry = neg_width(ty)
        if nm in pos_m:
            before = sum(neg_width(t2) for _, t2 in d1[:pos_m[nm]])
            for j in range(1, w_entry + 1):
                out_map[f"m.out.{off_m + before + j}"] = f"out.{at + j}"
        else:
            before = sum(neg_width(t2) for _, t2 in d2[:pos_n[nm]])
            for j in range(1, w_entry + 1):
                out_map[f"n.out.{off_n + before + j}"] = f"out.{at + j}"
        at += w_entry

    got = {i: out_map[o] for i, o in comp.mapping.items()}
    return got == w_mn.mapping


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)
