"""Command-line front end.

Inputs are judgements given inline, via ``@path``, or ``-`` for stdin.
Exit codes: 0 success (or Equal), 1 user error (syntax/typing), 2 budget
exhausted / Unknown verdict, 3 broken internal invariant.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from . import cps, dcll, ltr, rewrite, translate, wiring
from .errors import InternalError, ParseError
from .names import FreshSupply

CONFIG_ENV = "DCLL2LETREC_CONFIG"


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _read_input(s: str) -> str:
    if s == "-":
        return sys.stdin.read()
    if s.startswith("@"):
        try:
            with open(s[1:], "r", encoding="utf-8") as f:
                return f.read()
        except OSError as e:
            raise CliError(f"cannot read {s[1:]!r}: {e}") from e
    return s


def load_config(path: Optional[str]) -> dict:
    """``key = value`` lines; ``base.<b> = <pos>, <neg>`` declares interfaces."""
    cfg = {"budget": 10_000, "format": "text", "base": {}}
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if not path:
        return cfg
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as e:
        raise CliError(f"cannot read config {path!r}: {e}") from e
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "budget":
            try:
                cfg["budget"] = int(value)
            except ValueError as e:
                raise CliError(f"{path}:{lineno}: budget must be an integer") from e
            if cfg["budget"] <= 0:
                raise CliError(f"{path}:{lineno}: budget must be positive")
        elif key == "format":
            if value not in ("text", "json", "dot"):
                raise CliError(f"{path}:{lineno}: unknown format {value!r}")
            cfg["format"] = value
        elif key.startswith("base."):
            name = key[len("base."):]
            if not name.isidentifier():
                raise CliError(f"{path}:{lineno}: bad base type name {name!r}")
            if "," not in value:
                raise CliError(f"{path}:{lineno}: expected '<pos>, <neg>'")
            pos_s, _, neg_s = value.partition(",")
            cfg["base"][name] = translate.PolarType(
                ltr.parse_type(pos_s.strip()), ltr.parse_type(neg_s.strip()))
        else:
            raise CliError(f"{path}:{lineno}: unknown key {key!r}")
    return cfg


def _env_from(cfg: dict) -> translate.BaseTypeEnv:
    return translate.BaseTypeEnv(cfg["base"], auto=True)


def _rewrite_cfg(cfg: dict, args) -> rewrite.RewriteConfig:
    budget = args.budget if getattr(args, "budget", None) else cfg["budget"]
    return rewrite.RewriteConfig(max_steps=budget, trace=getattr(args, "trace", False))


def _fmt(cfg: dict, args) -> str:
    return args.format if getattr(args, "format", None) else cfg["format"]


# -- subcommands


def cmd_check(args, cfg) -> int:
    src = _read_input(args.input)
    supply = FreshSupply()
    if args.calculus == "dcll":
        ctx, term = dcll.parse_judgement(src, supply)
        typed = dcll.typecheck(ctx, term)
        print(f"type: {dcll.type_str(typed.type)}")
    else:
        ctx, term = ltr.parse_judgement(src, supply)
        core = ltr.desugar(term, supply)
        _, ty = ltr.elaborate(ctx, core)
        print(f"type: {ltr.type_str(ty)}")
    return 0


def cmd_translate(args, cfg) -> int:
    src = _read_input(args.input)
    out = translate.translate_judgement(src, _env_from(cfg))
    fmt = _fmt(cfg, args)
    term = out.term
    if args.normalize:
        res = rewrite.normalize_ltr(term, out.ctx, _rewrite_cfg(cfg, args))
        for line in res.trace:
            print(line, file=sys.stderr)
        term = res.term
        if not res.completed:
            print("warning: rewrite budget exhausted", file=sys.stderr)
    if fmt == "json":
        shown = translate.TranslationOutput(
            term, out.gamma_ctx, out.delta_ctx, out.type, out.sigma, out.delta_neg)
        print(shown.to_json())
    elif fmt == "dot":
        shown = translate.TranslationOutput(
            term, out.gamma_ctx, out.delta_ctx, out.type, out.sigma, out.delta_neg)
        sys.stdout.write(wiring.to_dot(shown))
    else:
        for n, t in out.gamma_ctx:
            print(f"context: {n} : {ltr.type_str(t)}")
        for n, t in out.delta_ctx:
            print(f"context: {n} : {ltr.type_str(t)}")
        print(f"term: {term}")
        print(f"type: {ltr.type_str(out.type)}")
    return 0


def cmd_normalize(args, cfg) -> int:
    src = _read_input(args.input)
    supply = FreshSupply()
    rcfg = _rewrite_cfg(cfg, args)
    if args.calculus == "dcll":
        ctx, term = dcll.parse_judgement(src, supply)
        dcll.typecheck(ctx, term)
        res = rewrite.normalize_dcll(term, ctx, rcfg)
    else:
        ctx, term = ltr.parse_judgement(src, supply)
        core = ltr.desugar(term, supply)
        core, _ = ltr.elaborate(ctx, core)
        res = rewrite.normalize_ltr(core, ctx, rcfg)
    for line in res.trace:
        print(line, file=sys.stderr)
    print(res.term)
    if not res.completed:
        print("warning: rewrite budget exhausted", file=sys.stderr)
        return 2
    return 0


def _match_contexts(sub, names_l, names_r, kinds: str):
    if len(names_l) != len(names_r):
        raise CliError(f"{kinds} contexts differ in length")
    for (nl, tl), (nr, tr) in zip(names_l, names_r):
        if tl != tr:
            raise CliError(
                f"context mismatch: {nl}:{tl} vs {nr}:{tr}")
        sub[nr] = nl
    return sub


def cmd_eq(args, cfg) -> int:
    lhs_src = _read_input(args.lhs)
    rhs_src = _read_input(args.rhs)
    rcfg = _rewrite_cfg(cfg, args)
    if args.calculus == "dcll":
        ctx_l, lhs = dcll.parse_judgement(lhs_src, FreshSupply())
        ctx_r, rhs = dcll.parse_judgement(rhs_src, FreshSupply(10_000_000))
        ren: dict = {}
        _match_contexts(ren, ctx_l.gamma, ctx_r.gamma, "non-linear")
        _match_contexts(ren, ctx_l.delta, ctx_r.delta, "linear")
        supply = FreshSupply(20_000_000)
        rhs = dcll.subst_many(rhs, {o: dcll.Var(n) for o, n in ren.items()}, supply)
        tl = dcll.typecheck(ctx_l, lhs).type
        tr = dcll.typecheck(ctx_l, rhs).type
        if tl != tr:
            raise CliError(f"sides have different types: {tl} vs {tr}")
        verdict = rewrite.check_equal(lhs, rhs, "dcll", ctx_l, rcfg)
    else:
        ctx_l, lhs = ltr.parse_judgement(lhs_src, FreshSupply())
        ctx_r, rhs = ltr.parse_judgement(rhs_src, FreshSupply(10_000_000))
        ren = {}
        _match_contexts(ren, ctx_l, ctx_r, "letrec")
        supply = FreshSupply(20_000_000)
        lhs = ltr.desugar(lhs, supply)
        rhs = ltr.desugar(rhs, supply)
        rhs = ltr.subst_many(rhs, {o: ltr.Var(n) for o, n in ren.items()}, supply)
        lhs, tl = ltr.elaborate(ctx_l, lhs)
        rhs, tr = ltr.elaborate(ctx_l, rhs)
        if tl != tr:
            raise CliError(f"sides have different types: {tl} vs {tr}")
        verdict = rewrite.check_equal(lhs, rhs, "letrec", ctx_l, rcfg)
    match verdict:
        case rewrite.Equal(nf):
            print("Equal")
            print(f"normal form: {nf}")
            return 0
        case rewrite.NotEqualWitness(l, r):
            print("NotEqual")
            print(f"left normal form:  {l}")
            print(f"right normal form: {r}")
            return 1
        case rewrite.Unknown(reason):
            print(f"Unknown ({reason})")
            return 2
    raise InternalError("unreachable verdict")


def cmd_cps(args, cfg) -> int:
    src = _read_input(args.input)
    supply = FreshSupply()
    ctx, term = dcll.parse_judgement(src, supply)
    if ctx.delta:
        raise cps.NotPure("the linear context must be empty for the CPS check")
    env = _env_from(cfg)
    main_out = translate.translate(dcll.typecheck(ctx, term), env)
    independent = cps.cbn_cps(term, env, ctx.gamma)
    print(f"translation: {main_out.term}")
    print(f"cps:         {independent}")
    if ltr.alpha_eq(main_out.term, independent):
        print("verdict: coincide")
        return 0
    mismatch = cps.first_mismatch(term, env, ctx.gamma)
    print("verdict: differ")
    if mismatch:
        print(f"first mismatch: {mismatch[0]}  vs  {mismatch[1]}")
    return 1


def cmd_wiring(args, cfg) -> int:
    src = _read_input(args.input)
    out = translate.translate_judgement(src, _env_from(cfg))
    w = wiring.wiring_of(out)
    fmt = _fmt(cfg, args)
    if fmt == "dot":
        sys.stdout.write(wiring.to_dot(w))
    elif fmt == "json":
        import json
        print(json.dumps({
            "schema_version": 1,
            "inputs": [p.name for p in w.inputs],
            "outputs": [p.name for p in w.outputs],
            "mapping": w.mapping,
        }, indent=2))
    else:
        for p in w.inputs:
            print(f"{p.name} -> {w.mapping[p.name]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dcll2letrec",
        description="Check, translate, normalize and compare terms of a "
                    "dual-context linear calculus and a letrec calculus.")
    ap.add_argument("--config", help="path to a key=value config file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and typecheck a judgement")
    p.add_argument("calculus", choices=["dcll", "letrec"])
    p.add_argument("input")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("translate", help="translate a dcll judgement")
    p.add_argument("input")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--format", choices=["text", "json", "dot"])
    p.add_argument("--budget", type=int)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("normalize", help="rewrite a term to normal form")
    p.add_argument("calculus", choices=["dcll", "letrec"])
    p.add_argument("input")
    p.add_argument("--budget", type=int)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("eq", help="bounded equality of two judgements")
    p.add_argument("calculus", choices=["dcll", "letrec"])
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--budget", type=int)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=cmd_eq)

    p = sub.add_parser("cps", help="compare against the call-by-name CPS translation")
    p.add_argument("input")
    p.set_defaults(fn=cmd_cps)

    p = sub.add_parser("wiring", help="port permutation of a purely linear judgement")
    p.add_argument("input")
    p.add_argument("--format", choices=["dot", "text", "json"])
    p.set_defaults(fn=cmd_wiring)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.fn(args, cfg)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (ParseError, dcll.DcllTypeError, ltr.LtrTypeError,
            cps.NotPure, wiring.NotLinear, wiring.InterfaceMismatch,
            wiring.LiveLoop, translate.MissingBaseType) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except InternalError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
