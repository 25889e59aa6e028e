"""Quantum-group relations T_p u^{⊗w1} = u^{⊗w2} T_p as structured data.

For p with k upper and l lower points the relation reads

    Σ_t δ_p(t, s) u_{t₁i₁} ⋯ u_{tₖiₖ} = Σ_j δ_p(i, j) u_{s₁j₁} ⋯ u_{sₗjₗ}

with free variables i (upper) and s (lower). ▲ points carry the
one-dimensional generator r and no indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import ArityMismatch, BadParam, MissingName, SignatureMismatch
from .linear import DOT, DOWN, parse_dotted_word
from .partition import (
    BLACK,
    EXTRA,
    EXTRA_REGIME,
    LINE,
    PLAIN,
    REGIMES,
    TWOCOL,
    WHITE,
    Partition,
)

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_SUB_LETTER = {"j": "ⱼ", "t": "ₜ"}

DEFAULT_NAMES = {
    PLAIN: {LINE: "u"},
    EXTRA_REGIME: {LINE: "v", EXTRA: "r"},
    TWOCOL: {WHITE: "u", BLACK: "ū"},
}

RESOLVED_VARS = "ijklmnopqabcdefgh"


@dataclass(frozen=True)
class Factor:
    symbol: str
    row: str | None = None
    col: str | None = None
    dot: str | None = None  # dotted letter substituted into this factor

    @property
    def indexed(self) -> bool:
        return self.row is not None


@dataclass(frozen=True)
class Monomial:
    factors: tuple = ()
    coefficient: object = 1
    summed: tuple = ()  # variables summed over 1..N
    deltas: tuple = ()  # tuples of variables forced equal


@dataclass
class Relation:
    lhs: list
    rhs: list
    free_vars: tuple = ()
    ranges: dict = field(default_factory=dict)
    partition: Partition | None = None
    words: tuple | None = None  # (w1, w2) for separated relations

    def variables(self) -> set:
        out = set()
        for m in self.lhs + self.rhs:
            for f in m.factors:
                if f.indexed:
                    out.update((f.row, f.col))
        return out

    def well_formed(self) -> bool:
        """Every index variable is free or summed and deltas use declared names."""
        for side in (self.lhs, self.rhs):
            for m in side:
                declared = set(self.free_vars) | set(m.summed)
                used = {v for f in m.factors if f.indexed for v in (f.row, f.col)}
                used |= {v for d in m.deltas for v in d}
                if not used <= declared:
                    return False
        return True


# ----------------------------------------------------------------- emitting


def _check_names(p: Partition, names: dict) -> None:
    for c in set(p.colors):
        if c not in names:
            raise MissingName(f"no generator symbol for color {c.value!r}")


def _side(p: Partition, names: dict, points: range, other: range, own: str, free: str, summed: str):
    """One side of the relation: factors for ``points`` with the first index summed."""
    labels = p.labels
    var = {}
    for i in other:
        var[i] = f"{free}{i - other.start + 1}"
    blocks: dict = {}
    for i in points:
        if p.colors[i] is not EXTRA:
            blocks.setdefault(labels[i], []).append(i)
    for i in other:
        if p.colors[i] is not EXTRA:
            blocks.setdefault(labels[i], [])
    sums = []
    deltas = []
    row = {}
    own_blocks = [b for b in blocks.values() if b and not any(labels[o] == labels[b[0]] for o in other)]
    single = len(own_blocks) == 1
    for lab, pts in blocks.items():
        partners = [o for o in other if p.colors[o] is not EXTRA and labels[o] == lab]
        if partners:
            target = var[partners[0]]
            if len(partners) > 1:
                deltas.append(tuple(var[o] for o in partners))
        elif pts:
            target = summed if single else f"{summed}{pts[0] - points.start + 1}"
            sums.append(target)
        else:
            continue
        for i in pts:
            row[i] = target
    factors = []
    for i in points:
        sym = names[p.colors[i]]
        if p.colors[i] is EXTRA:
            factors.append(Factor(sym))
        else:
            factors.append(Factor(sym, row[i], f"{own}{i - points.start + 1}"))
    return Monomial(tuple(factors), 1, tuple(sums), tuple(deltas))


def emit_relation(p: Partition, names: dict | None = None) -> Relation:
    if names is None:
        names = DEFAULT_NAMES[p.regime if p.regime in DEFAULT_NAMES else EXTRA_REGIME]
    _check_names(p, names)
    up = range(0, p.k)
    low = range(p.k, p.k + p.l)
    # LHS: u_{t_a i_a} over upper points, constrained by δ_p(t, s)
    lhs = _side(p, names, up, low, "i", "s", "t")
    # RHS: u_{s_b j_b} over lower points, constrained by δ_p(i, j)
    rhs_raw = _side(p, names, low, up, "j", "i", "j")
    # on the RHS the first index is the free s and the second the summed j
    rhs = Monomial(
        tuple(
            Factor(f.symbol, f"s{n + 1}", f.row) if f.indexed else f
            for n, f in enumerate(rhs_raw.factors)
        ),
        1,
        rhs_raw.summed,
        rhs_raw.deltas,
    )
    free = tuple(f"i{a + 1}" for a in up if p.colors[a] is not EXTRA) + tuple(
        f"s{b + 1}" for b in range(p.l) if p.colors[p.k + b] is not EXTRA
    )
    rel = Relation([lhs], [rhs], free, {v: "1..N" for v in free}, p)
    return rel


def adjoint(rel: Relation) -> Relation:
    """Sides swapped, factors transposed, i ↔ s and t ↔ j exchanged."""
    swap = {"i": "s", "s": "i", "t": "j", "j": "t"}

    def ren(v):
        return None if v is None else swap[v[0]] + v[1:]

    def mono(m: Monomial) -> Monomial:
        return Monomial(
            tuple(Factor(f.symbol, ren(f.col), ren(f.row), f.dot) for f in m.factors),
            m.coefficient,
            tuple(ren(v) for v in m.summed),
            tuple(tuple(ren(v) for v in d) for d in m.deltas),
        )

    free = tuple(ren(v) for v in rel.free_vars)
    return Relation([mono(m) for m in rel.rhs], [mono(m) for m in rel.lhs], free,
                    {v: "1..N" for v in free})


def normal_form(rel: Relation) -> tuple:
    """Variables renamed by first appearance; used for structural comparison."""
    order: dict = {}

    def name(v):
        if v is None:
            return None
        return order.setdefault(v, f"x{len(order)}")

    out = []
    for side in (rel.lhs, rel.rhs):
        ms = []
        for m in side:
            fs = tuple((f.symbol, name(f.row), name(f.col), f.dot) for f in m.factors)
            ms.append((
                fs,
                str(m.coefficient),
                tuple(sorted(name(v) for v in m.summed)),
                tuple(sorted(tuple(sorted(name(v) for v in d)) for d in m.deltas)),
            ))
        out.append(tuple(ms))
    return tuple(out)


def drop_symbol(rel: Relation, symbol: str) -> Relation:
    """Image of the relation after setting a one-dimensional generator to 1."""

    def mono(m):
        return replace(m, factors=tuple(f for f in m.factors if f.symbol != symbol))

    return Relation([mono(m) for m in rel.lhs], [mono(m) for m in rel.rhs], rel.free_vars,
                    dict(rel.ranges), rel.partition)


def substitute_glued(rel: Relation, glued: str, conj: str, base: str, one_dim: str) -> Relation:
    """Replace ṽ_{ij} by v_{ij} r and ṽ*_{ij} by r v_{ij}."""

    def mono(m):
        fs = []
        for f in m.factors:
            if f.symbol == glued:
                fs += [Factor(base, f.row, f.col), Factor(one_dim)]
            elif f.symbol == conj:
                fs += [Factor(one_dim), Factor(base, f.row, f.col)]
            else:
                fs.append(f)
        return replace(m, factors=tuple(fs))

    return Relation([mono(m) for m in rel.lhs], [mono(m) for m in rel.rhs], rel.free_vars,
                    dict(rel.ranges), rel.partition)


# ------------------------------------------------------------ separated form


def _word(w) -> tuple:
    return parse_dotted_word(w) if isinstance(w, str) else tuple(w)


def emit_separated_relation(p: Partition, w1, w2, names: dict | None = None) -> Relation:
    """Relation of π^{⊗w2} p π^{⊗w1}: each factor carries its dotted letter."""
    w1, w2 = _word(w1), _word(w2)
    if len(w1) != p.k or len(w2) != p.l:
        raise ArityMismatch(
            f"words of lengths ({len(w1)},{len(w2)}) do not fit signature ({p.k},{p.l})"
        )
    if any(c is not LINE for c in p.colors):
        raise SignatureMismatch("separated relations are defined for uncolored partitions")
    base = emit_relation(p, names or {LINE: "u"})
    lhs = base.lhs[0]
    rhs = base.rhs[0]
    lhs = replace(lhs, factors=tuple(replace(f, dot=w1[a]) for a, f in enumerate(lhs.factors)))
    rhs = replace(rhs, factors=tuple(replace(f, dot=w2[b]) for b, f in enumerate(rhs.factors)))
    return Relation([lhs], [rhs], base.free_vars, dict(base.ranges), p, (w1, w2))


def _simple_words(rel: Relation):
    """Letter words for singletons-and-through-pairs partitions, or None.

    A through pair gets the letter of its upper position when dotted and r
    when marked ↓; a ↓-singleton sums (1/N)r over N values and becomes r.
    """
    p = rel.partition
    w1, w2 = rel.words
    lab = p.labels
    up_tokens: list = []
    low_tokens: list = [None] * p.l
    for a in range(p.k):
        blk = [i for i in range(len(p)) if lab[i] == lab[a]]
        if len(blk) == 1:
            if w1[a] != DOWN:
                return None
            up_tokens.append(("r", False))
            continue
        if len(blk) != 2 or blk[1] < p.k:
            return None
        b = blk[1] - p.k
        if w1[a] != w2[b]:
            return None
        tok = ("r", True) if w1[a] == DOWN else (chr(ord("a") + a), False)
        up_tokens.append(tok)
        low_tokens[b] = tok
    for b in range(p.l):
        if low_tokens[b] is not None:
            continue
        blk = [i for i in range(len(p)) if lab[i] == lab[p.k + b]]
        if len(blk) != 1 or w2[b] != DOWN:
            return None
        low_tokens[b] = ("r", False)
    return up_tokens, low_tokens


def _render_simple(rel: Relation) -> str | None:
    words = _simple_words(rel)
    if words is None:
        return None
    up, low = words
    letters = sorted({t for t, _ in up + low if t != "r"})
    # both sides carry the same number of (1/N)r factors; with a dotted letter
    # present the common power of N is cancelled
    cancel = bool(letters)

    def tok(t):
        name, scaled = t
        return "(1/N)r" if scaled and not cancel else name

    lhs = " ".join(tok(t) for t in up) or "1"
    rhs = " ".join(tok(t) for t in low) or "1"
    out = f"{lhs} = {rhs}"
    if letters:
        span = "{" if any(t == "r" for t, _ in up + low) else "span{"
        out += f" with {','.join(letters)} ∈ {span}u_{{ij}} − (1/N)r}}"
    return out


# ---------------------------------------------------------------- rendering


def _sub(v: str) -> str:
    return v[0] + v[1:].translate(_SUB)


def _resolvable(rel: Relation) -> bool:
    return all(not m.summed and not m.deltas for m in rel.lhs + rel.rhs)


def _resolved_names(rel: Relation) -> dict:
    order: dict = {}
    for m in rel.lhs + rel.rhs:
        for f in m.factors:
            if f.indexed:
                for v in (f.row, f.col):
                    if v not in order:
                        order[v] = RESOLVED_VARS[len(order) % len(RESOLVED_VARS)]
    return order


def _render_factor(f: Factor, nm) -> str:
    if not f.indexed:
        return f.symbol
    idx = f"{{{nm(f.row)}{nm(f.col)}}}"
    if f.dot == DOT:
        return f"[P^•{f.symbol}P^•]_{idx}"
    if f.dot == DOWN:
        return f"[P^↓{f.symbol}P^↓]_{idx}"
    return f"{f.symbol}_{idx}"


def _render_sum(vars_, nm) -> str:
    if len(vars_) == 1 and vars_[0] in _SUB_LETTER:
        return "Σ" + _SUB_LETTER[vars_[0]]
    return "Σ_{" + ",".join(nm(v) for v in vars_) + "}"


def _render_monomial(m: Monomial, nm) -> str:
    parts = []
    if m.coefficient != 1:
        parts.append(str(m.coefficient))
    if m.summed:
        parts.append(_render_sum(m.summed, nm))
    for d in m.deltas:
        parts.append("δ_{" + "".join(nm(v) for v in d) + "}")
    parts += [_render_factor(f, nm) for f in m.factors]
    return " ".join(parts) if parts else "1"


def render_human(rel: Relation) -> str:
    if rel.words is not None:
        simple = _render_simple(rel)
        if simple is not None:
            return simple
    if _resolvable(rel):
        table = _resolved_names(rel)
        nm = table.__getitem__
    else:
        nm = _sub
    lhs = " + ".join(_render_monomial(m, nm) for m in rel.lhs) or "0"
    rhs = " + ".join(_render_monomial(m, nm) for m in rel.rhs) or "0"
    return f"{lhs} = {rhs}"


def _sexp_factor(f: Factor) -> str:
    if not f.indexed:
        return f"({f.symbol})"
    sym = f.symbol if f.dot is None else f"{f.symbol}{'.dot' if f.dot == DOT else '.down'}"
    return f"({sym} {f.row} {f.col})"


def _sexp_monomial(m: Monomial) -> str:
    body = " ".join(_sexp_factor(f) for f in m.factors)
    for d in m.deltas:
        body = f"(delta {' '.join(d)}) " + body
    body = f"(* {m.coefficient} {body})".replace("  ", " ").replace(" )", ")")
    if m.summed:
        body = f"(sum ({' '.join(m.summed)}) {body})"
    return body


def render_machine(rel: Relation) -> str:
    lhs = " ".join(_sexp_monomial(m) for m in rel.lhs)
    rhs = " ".join(_sexp_monomial(m) for m in rel.rhs)
    free = " ".join(rel.free_vars)
    return f"(rel (free {free}) (+ {lhs}) (+ {rhs}))".replace("(free )", "(free)")


_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _is_cap(m: Monomial, other: Monomial) -> bool:
    """δ_{s₁s₂} = Σⱼ x_{s₁j} x_{s₂j}: the pair partition on two equal symbols."""
    if m.factors or len(m.deltas) != 1 or len(m.deltas[0]) != 2 or m.summed:
        return False
    fs = other.factors
    return (len(fs) == 2 and len(other.summed) == 1 and not other.deltas
            and fs[0].symbol == fs[1].symbol and fs[0].col == fs[1].col == other.summed[0]
            and (fs[0].row, fs[1].row) == m.deltas[0])


def dictionary_form(rel: Relation) -> str:
    """Matrix shorthand where one exists (xxᵗ = 1, rⁿ = 1), else the human form."""
    if len(rel.lhs) == 1 and len(rel.rhs) == 1 and rel.words is None:
        lhs, rhs = rel.lhs[0], rel.rhs[0]
        if _is_cap(lhs, rhs):
            x = rhs.factors[0].symbol
            return f"{x}{x}ᵗ = 1"
        for a, b in ((lhs, rhs), (rhs, lhs)):
            if (not a.factors and not a.deltas and not b.summed and b.factors
                    and len({f.symbol for f in b.factors}) == 1
                    and all(not f.indexed for f in b.factors)):
                n = len(b.factors)
                power = "" if n == 1 else str(n).translate(_SUP)
                return f"{b.factors[0].symbol}{power} = 1"
    return render_human(rel)


def render(rel: Relation, fmt: str = "human") -> str:
    if fmt == "human":
        return render_human(rel)
    if fmt == "machine":
        return render_machine(rel)
    raise BadParam(f"unknown format {fmt!r}")


def normalize_ws(s: str) -> str:
    return "".join(s.split())


# ------------------------------------------------------------- presentations

_BASE_LINES = {
    PLAIN: ("u = ū", "uuᵗ = uᵗu = 1"),
    EXTRA_REGIME: ("v = v̄", "vvᵗ = vᵗv = 1", "r = r*", "r² = 1"),
    TWOCOL: ("uu* = u*u = ūuᵗ = uᵗū = 1",),
}

_BASE_MACHINE = {
    PLAIN: ("(selfadjoint u)", "(orthogonal u)"),
    EXTRA_REGIME: ("(selfadjoint v)", "(orthogonal v)", "(selfadjoint r)", "(= (* r r) 1)"),
    TWOCOL: ("(unitary u)", "(unitary (conj u))"),
}


def emit_presentation(gens: Sequence[Partition], regime: str, N: int,
                      names: dict | None = None, fmt: str = "human") -> str:
    if regime not in REGIMES:
        raise BadParam(f"unknown regime {regime!r}")
    names = names or DEFAULT_NAMES[regime]
    lines = [f"PRESENTATION N={N} regime={regime}"]
    lines += _BASE_MACHINE[regime] if fmt == "machine" else _BASE_LINES[regime]
    for g in gens:
        rel = emit_relation(g, names)
        lines.append(render(rel, fmt))
    return "\n".join(lines) + "\n"


def _times2k(k: int) -> str:
    def idx(n):
        return str(n).translate(_SUB)

    lhs = "".join(f"a{idx(n)}x{idx(n)}" for n in range(1, k + 1))
    rhs = "".join(f"x{idx(n)}a{idx(n)}" for n in range(1, k + 1))
    return f"{lhs} = {rhs}"


def product_relations(kind: str, k: int | None = None) -> list[str]:
    """Letter relations of the products of G (letters a, b) with H (letters x, y)."""
    if kind == "free":
        return []
    if kind == "tensor":
        return ["ax = xa"]
    if kind == "trivial":
        return ["x = 1"]
    if kind == "times0":
        return ["ab*x = xab*", "a*bx = xa*b"]
    if kind in ("times2k", "star_k", "ctimes_k"):
        if k is None or int(k) < 1:
            raise BadParam(f"{kind} needs a parameter k >= 1")
        k = int(k)
    if kind == "times2k":
        return [_times2k(k)]
    if kind == "star_k":
        return [f"(sx)^{k} = 1 with s = Σⱼ a_{{ij}}"]
    if kind == "ctimes_k":
        return ["ab*x = xab*", "a*bx = xa*b", f"(sx)^{k} = 1 with s = Σⱼ a_{{ij}}"]
    raise BadParam(f"unknown product kind {kind!r}")
