"""Command-line front end: ``partcat <subcommand> ...``.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import acceptance
from .closure import (
    LINEAR,
    PRODUCT_KINDS,
    SET,
    closure,
    contains,
    diagnostics,
    dump,
    product_generators,
)
from .errors import PartcatError
from .functors import (
    degree_of_reflection,
    functor_f,
    preimage_normalize,
    shortest_preimage,
    u_functor,
    verify_theorem_u,
)
from .invariants import certify_exclusion
from .linear import (
    LinearCombination,
    dotted,
    format_lc,
    lin_compose,
    lin_involute,
    lin_tensor,
    parse_dotted_word,
    parse_lc,
    sandwich,
)
from .partition import (
    REGIMES,
    TWOCOL,
    compose,
    generator_from_spec,
    involute,
    nc_pairings,
    parse,
    parse_signature,
    rotate,
    serialize,
    tensor,
)
from .relations import (
    emit_presentation,
    emit_relation,
    emit_separated_relation,
    product_relations,
    render,
)
from .tensor_maps import dump_matrix, mor_dim, t_matrix

SIGN_CHOICES = ("plus", "minus")
_SIGN = {"plus": "+", "minus": "-"}
NC_KEYWORDS = ("nc-pairs", "nc-pairings")


class UsageError(Exception):
    """Raised for argument problems found after argparse accepted the input."""


# ------------------------------------------------------------------- inputs


def _partition(text: str):
    return parse(text) if text.strip().startswith("P(") else generator_from_spec(text)


def _combination(text: str, N: int | None):
    """A partition, or a linear combination when N is given."""
    if N is None:
        return _partition(text)
    s = text.strip()
    if "*" in s or "+" in s or s == "0":
        return parse_lc(s, N)
    return LinearCombination.of(_partition(s), N)


def read_generator_file(path: str) -> tuple[list, int | None]:
    gens, N = [], None
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("N="):
                N = int(line[2:])
                continue
            gens.append(_partition(line))
    return gens, N


def _generators(args, sig=None) -> list:
    """Resolve ``--gens`` values: keywords, generator files, names or inline partitions."""
    out = []
    for spec in args.gens or ():
        if spec in NC_KEYWORDS:
            if sig is None:
                raise UsageError(f"--gens {spec} needs --sig")
            out += list(nc_pairings(*sig))
        elif os.path.isfile(spec):
            gens, N = read_generator_file(spec)
            out += gens
            if N is not None and getattr(args, "N", None) is None:
                args.N = N
        else:
            out.append(_partition(spec))
    return out


def _need_N(args) -> int:
    if args.N is None:
        raise UsageError("this command needs --N")
    if args.N < 1:
        raise UsageError("--N must be positive")
    return args.N


# ----------------------------------------------------------------- commands


def cmd_compose(args):
    if args.linear:
        N = _need_N(args)
        return format_lc(lin_compose(_combination(args.q, N), _combination(args.p, N), N))
    r, loops = compose(_partition(args.q), _partition(args.p))
    return f"{serialize(r)}\nloops={loops}"


def cmd_tensor(args):
    if args.linear:
        N = _need_N(args)
        return format_lc(lin_tensor(_combination(args.p, N), _combination(args.q, N), N))
    return serialize(tensor(_partition(args.p), _partition(args.q)))


def cmd_involute(args):
    if args.linear:
        return format_lc(lin_involute(_combination(args.p, _need_N(args))))
    return serialize(involute(_partition(args.p)))


def cmd_rotate(args):
    p = _partition(args.p)
    for _ in range(args.times):
        p = rotate(p, args.side, args.direction)
    return serialize(p)


def cmd_tp(args):
    N = _need_N(args)
    x = _combination(args.p, N if args.linear else None)
    sig = x.sig if isinstance(x, LinearCombination) else x.signature
    return dump_matrix(t_matrix(x, N), sig, N)


def cmd_mordim(args):
    sig = parse_signature(args.sig)
    gens = _generators(args, sig)  # a generator file may supply N
    return str(mor_dim(gens, sig, _need_N(args)))


def _closure_from(args, gens):
    mode = LINEAR if args.linear else SET
    N = _need_N(args) if args.linear else args.N
    return closure(gens, args.regime, args.points, args.slack, mode, N, args.jobs)


def cmd_closure(args):
    c = _closure_from(args, _generators(args))
    print(diagnostics(c), file=sys.stderr)
    return dump(c).rstrip("\n")


def cmd_contains(args):
    c = _closure_from(args, _generators(args))
    x = _combination(args.p, c.N if args.linear else None)
    verdict = contains(c, x)
    return f"{verdict}\n{diagnostics(c)}" if verdict != "CertifiedIn" else verdict


def cmd_certify(args):
    cert = certify_exclusion(_partition(args.p), _generators(args), args.regime,
                             trials=args.trials, seed=args.seed)
    return cert if cert is not None else "none"


def cmd_functor_f(args):
    return serialize(functor_f(_partition(args.p)))


def cmd_preimage(args):
    p = _partition(args.p)
    return serialize(preimage_normalize(p) if args.normalize else shortest_preimage(p))


def cmd_functor_u(args):
    N = _need_N(args)
    return str(u_functor(_combination(args.p, N), N, _SIGN[args.sign]))


def cmd_verify_u(args):
    N = _need_N(args)
    rep = verify_theorem_u(_combination(args.p, N), N, _SIGN[args.sign])
    if rep.ok is None:
        return "unavailable (blocks of size ≥ 3 have no symbolic image)"
    if rep.ok:
        return "ok"
    raise PartcatError(f"mismatch at index {rep.witness[0]}: {rep.witness[1]} vs {rep.witness[2]}")


def cmd_degree(args):
    c = closure(_generators(args), TWOCOL, args.points, args.slack, jobs=args.jobs)
    print(diagnostics(c), file=sys.stderr)
    return str(degree_of_reflection(c.elements()))


def cmd_dotted(args):
    return format_lc(dotted(_partition(args.p), _need_N(args)))


def cmd_sandwich(args):
    N = _need_N(args)
    x = _combination(args.p, N)
    return format_lc(sandwich(x, parse_dotted_word(args.w1), parse_dotted_word(args.w2)))


def cmd_relations(args):
    p = _partition(args.p)
    if (args.w1 is None) != (args.w2 is None):
        raise UsageError("--w1 and --w2 go together")
    if args.w1 is not None:
        rel = emit_separated_relation(p, args.w1, args.w2)
    else:
        rel = emit_relation(p)
    return render(rel, args.format)


def cmd_presentation(args):
    gens = _generators(args)
    return emit_presentation(gens, args.regime, _need_N(args), fmt=args.format).rstrip("\n")


def cmd_products(args):
    base = _generators(args)
    gens = product_generators(args.kind, base, args.k)
    lines = [f"# {args.kind}" + (f" k={args.k}" if args.k else "")]
    lines += [serialize(g) for g in gens]
    for rel in product_relations(args.kind, args.k):
        lines.append(f"# {rel}")
    return "\n".join(lines)


def cmd_selftest(args):
    only = set(args.only) if args.only else None
    results = acceptance.run_all(seed=args.seed, only=only, echo=print)
    failed = [r for r in results if not r.ok]
    total = sum(r.seconds for r in results)
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed in {total:.1f}s")
    return None if not failed else 1


# ------------------------------------------------------------------- parser


def _add_common(sp, *, N=False, linear=False, gens=False, regime=False, bounds=False,
                sign=False, fmt=False, jobs=False):
    if N:
        sp.add_argument("--N", type=int, default=None, help="loop parameter")
    if linear:
        sp.add_argument("--linear", action="store_true", help="work with linear combinations")
    if gens:
        sp.add_argument("--gens", nargs="*", default=[],
                        help="generator names, inline partitions, files, or nc-pairs")
    if regime:
        sp.add_argument("--regime", choices=REGIMES, default="plain")
    if bounds:
        sp.add_argument("--points", type=int, default=6, help="budget P")
        sp.add_argument("--slack", type=int, default=2, help="slack s")
    if sign:
        sp.add_argument("--sign", choices=SIGN_CHOICES, default="plus")
    if fmt:
        sp.add_argument("--format", choices=("human", "machine"), default="human")
    if jobs:
        sp.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="partcat", description="Categories of partitions toolkit.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="<command>")

    def add(name, fn, help_, *pos, **common):
        sp = sub.add_parser(name, help=help_, description=help_)
        for p in pos:
            sp.add_argument(p)
        _add_common(sp, **common)
        sp.set_defaults(func=fn, usage=sp.format_usage())
        return sp

    add("compose", cmd_compose, "q∘p with q stacked below p", "q", "p", N=True, linear=True)
    add("tensor", cmd_tensor, "p⊗q", "p", "q", N=True, linear=True)
    add("involute", cmd_involute, "p*", "p", N=True, linear=True)
    sp = add("rotate", cmd_rotate, "move an end point between the rows", "p")
    sp.add_argument("--side", choices=("left", "right"), required=True)
    sp.add_argument("--direction", choices=("up", "down"), required=True)
    sp.add_argument("--times", type=int, default=1)
    add("tp", cmd_tp, "dump the matrix T_p", "p", N=True, linear=True)
    sp = add("mordim", cmd_mordim, "dimension of span{T_p}", N=True, gens=True)
    sp.add_argument("--sig", required=True, help="signature <upper>;<lower> over - t w b")
    add("closure", cmd_closure, "bounded closure ⟨S⟩", N=True, linear=True, gens=True,
        regime=True, bounds=True, jobs=True)
    add("contains", cmd_contains, "membership in a bounded closure", "p", N=True, linear=True,
        gens=True, regime=True, bounds=True, jobs=True)
    sp = add("certify", cmd_certify, "invariant certificate for p ∉ ⟨S⟩", "p", gens=True,
             regime=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    add("functor-f", cmd_functor_f, "the functor F", "p")
    sp = add("preimage", cmd_preimage, "shortest F-preimage", "p")
    sp.add_argument("--normalize", action="store_true", help="normalize a ▲-partition instead")
    add("functor-u", cmd_functor_u, "the functor U", "p", N=True, sign=True)
    add("verify-u", cmd_verify_u, "check T_{Up} = U T_p U*", "p", N=True, sign=True)
    add("degree", cmd_degree, "degree of reflection of a two-colored closure", gens=True,
        bounds=True, jobs=True)
    add("dotted", cmd_dotted, "dotted partition", "p", N=True)
    sp = add("sandwich", cmd_sandwich, "π^{w2} p π^{w1}", "p", N=True)
    sp.add_argument("--w1", required=True, help="upper word over • ↓ (or . s)")
    sp.add_argument("--w2", required=True, help="lower word over • ↓ (or . s)")
    sp = add("relations", cmd_relations, "quantum group relation of p", "p", fmt=True)
    sp.add_argument("--w1", default=None)
    sp.add_argument("--w2", default=None)
    add("presentation", cmd_presentation, "universal presentation", N=True, gens=True,
        regime=True, fmt=True)
    sp = add("products", cmd_products, "generators and relations of a product", gens=True)
    sp.add_argument("kind", choices=PRODUCT_KINDS)
    sp.add_argument("--k", type=int, default=None)
    sp = add("selftest", cmd_selftest, "run the acceptance suite", jobs=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--only", type=int, nargs="*", default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        out = args.func(args)
    except UsageError as e:
        print(args.usage.rstrip(), file=sys.stderr)
        print(f"partcat {args.command}: {e}", file=sys.stderr)
        return 2
    except PartcatError as e:
        print(f"error: {e.kind}: {e}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    if isinstance(out, int):
        return out
    if out is not None:
        print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
