"""Bounded closure ⟨S⟩ of a generator set under ⊗, ∘, * and rotation.

Every category is closed under rotation, so an element of C(k,l) is determined
by its one-row form in C(0,k+l), and rotating that row cyclically or reflecting
it (reverse plus color inversion) stays inside C. The search therefore works
on dihedral classes of one-row partitions:

* contraction of two neighbouring points that admit a pair partition
  (| with |, ▲ with ▲, ○ with ●) realizes composition with a cap;
* gluing two elements side by side and contracting j nested pairs at the
  junction realizes tensor products followed by composition.

Intermediate elements may have up to P+s points; the store keeps elements
with at most P points.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import ceil
from typing import Sequence

from .errors import BoundMismatch, BudgetTooSmall, MixedRegime
from .linear import LinearCombination, as_lc, format_lc
from .partition import (
    BLACK,
    EXTRA,
    LINE,
    REGIMES,
    WHITE,
    Partition,
    format_signature,
    from_one_row,
    generator,
    one_row,
    regime_admits,
    serialize,
    tensor_all,
)
from .scalar import Scalar, coerce

SET = "set"
LINEAR = "linear"

_CODE = {LINE: "l", EXTRA: "t", WHITE: "w", BLACK: "b"}
_COLOR = {v: k for k, v in _CODE.items()}
_INVERT = {"l": "l", "t": "t", "w": "b", "b": "w"}

CERTIFIED_IN = "CertifiedIn"
NOT_FOUND = "NotFound"


def _rgs(raw):
    seen = {}
    return tuple(seen.setdefault(x, len(seen)) for x in raw)


# ------------------------------------------------------------ one-row words

def to_row(p: Partition) -> tuple[tuple[str, ...], tuple[int, ...]]:
    q = one_row(p)
    return tuple(_CODE[c] for c in q.lower), q.labels


def from_row(cols, labs, k: int = 0) -> Partition:
    low = tuple(_COLOR[c] for c in cols)
    return from_one_row(Partition._trusted((), low, tuple(labs)), k) if k else Partition._trusted((), low, tuple(labs))


def variants(cols, labs):
    """All rotations of the row and of its reflection."""
    n = len(cols)
    rcols = tuple(_INVERT[c] for c in reversed(cols))
    rlabs = tuple(reversed(labs))
    out = []
    for cs, ls in ((cols, labs), (rcols, rlabs)):
        for r in range(max(n, 1)):
            out.append((cs[r:] + cs[:r], _rgs(ls[r:] + ls[:r])))
    return out


def rotations(cols, labs):
    n = len(cols)
    return [(cols[r:] + cols[:r], _rgs(labs[r:] + labs[:r])) for r in range(max(n, 1))]


def canon(cols, labs):
    n = len(cols)
    if n == 0:
        return cols, _rgs(labs)
    rcols = tuple(_INVERT[c] for c in reversed(cols))
    rlabs = tuple(reversed(labs))
    cands = []
    for cs, ls in ((cols, labs), (rcols, rlabs)):
        for r in range(n):
            cands.append((cs[r:] + cs[:r], ls, r))
    best = min(c[0] for c in cands)
    # only rotations with the smallest color word need relabelling
    return min((c, _rgs(ls[r:] + ls[:r])) for c, ls, r in cands if c == best)


def compatible(a: str, b: str) -> bool:
    if a == "l":
        return b == "l"
    if a == "t":
        return b == "t"
    return b == _INVERT[a]


def contract(cols, labs, i: int):
    """Join points i and i+1 (cyclically) by a cap. Returns (cols, labs, loops) or None."""
    n = len(cols)
    if n < 2:
        return None
    j = (i + 1) % n
    if not compatible(cols[i], cols[j]):
        return None
    a, b = labs[i], labs[j]
    merged = [a if x == b else x for x in labs]
    keep = [t for t in range(n) if t != i and t != j]
    new_labs = [merged[t] for t in keep]
    loops = 0
    if cols[i] != "t" and a not in new_labs:
        loops = 1
    return tuple(cols[t] for t in keep), _rgs(new_labs), loops


def glue(e, g, j: int):
    """e·g with j nested pairs contracted at the junction e|g."""
    cols = e[0] + g[0]
    labs = e[1] + tuple(x + len(e[1]) + 1 for x in g[1])
    n = len(e[0])
    loops = 0
    for t in range(j):
        pos = n - 1 - t
        if pos < 0 or pos + 1 >= len(cols):
            return None
        r = contract(cols, labs, pos)
        if r is None:
            return None
        cols, labs, lp = r
        loops += lp
    return cols, _rgs(labs), loops


def _glue_depth(n: int, m: int, limit: int) -> int:
    return max(0, ceil((n + m - limit) / 2))


# -------------------------------------------------------------- set mode


def _expand_chunk(args):
    chunk, gvars, limit = args
    out = set()
    for e in chunk:
        cols, labs = e
        n = len(cols)
        for i in range(n):
            r = contract(cols, labs, i)
            if r is not None:
                out.add(canon(r[0], r[1]))
        erots = rotations(cols, labs)
        for g in gvars:
            m = len(g[0])
            j = _glue_depth(n, m, limit)
            if j > min(n, m):
                continue
            for er in erots:
                # with nothing contracted both junctions give the same cyclic word
                for a, b in ((er, g), (g, er)) if j else ((er, g),):
                    r = glue(a, b, j)
                    if r is not None:
                        out.add(canon(r[0], r[1]))
    return out


@dataclass
class CategoryClosure:
    regime: str
    generators: list
    P: int
    s: int
    mode: str = SET
    N: int | None = None
    classes: set = field(default_factory=set)
    spaces: dict = field(default_factory=dict)
    saturated: bool = False
    growth: list = field(default_factory=list)

    @property
    def limit(self) -> int:
        return self.P + self.s

    # set mode --------------------------------------------------------
    def store(self) -> dict:
        """Signature -> sorted list of partitions with at most P points."""
        if self.mode == LINEAR:
            return self.linear_store()
        out: dict = {}
        for cols, labs in self.classes:
            if len(cols) > self.P:
                continue
            seen = set()
            for vc, vl in variants(cols, labs):
                if (vc, vl) in seen:
                    continue
                seen.add((vc, vl))
                for k in range(len(vc) + 1):
                    p = from_row(vc, vl, k)
                    out.setdefault(p.signature, set()).add(p)
        return {sig: sorted(v) for sig, v in sorted(out.items(), key=lambda kv: _sig_key(kv[0]))}

    def stored_classes(self):
        return sorted(c for c in self.classes if len(c[0]) <= self.P)

    def elements(self):
        for ps in self.store().values():
            yield from ps

    # linear mode -----------------------------------------------------
    def linear_store(self) -> dict:
        out = {}
        for cols, basis in self.spaces.items():
            if len(cols) > self.P:
                continue
            for k in range(len(cols) + 1):
                vecs = []
                sig = None
                for row in basis.values():
                    terms = {}
                    for (pc, pl), c in row.items():
                        p = from_row(pc, pl, k)
                        terms[p] = c
                        sig = p.signature
                    vecs.append(terms)
                if sig is None:
                    continue
                lcs = [LinearCombination(sig, t, self.N) for t in _rref(vecs)]
                out[sig] = lcs
        return {sig: v for sig, v in sorted(out.items(), key=lambda kv: _sig_key(kv[0]))}

    def dimension(self, sig) -> int:
        up, low = sig
        if self.mode == LINEAR:
            word = tuple(_CODE[c.inverse()] for c in reversed(up)) + tuple(_CODE[c] for c in low)
            return len(self.spaces.get(word, {}))
        return len(self.store().get((tuple(up), tuple(low)), []))


def _sig_key(sig):
    up, low = sig
    return (len(up) + len(low), len(up), tuple(c.value for c in up), tuple(c.value for c in low))


def base_partitions(regime: str) -> list[Partition]:
    from .invariants import base_partitions as _base

    return _base(regime)


def _validate(gens, regime: str, P: int):
    if regime not in REGIMES:
        raise MixedRegime(f"unknown regime {regime!r}")
    for g in gens:
        parts = [g] if isinstance(g, Partition) else list(g)
        for p in parts:
            if not regime_admits(regime, p.colors):
                raise MixedRegime(f"{p} is not a partition of the {regime} regime")
            if len(p) > P:
                raise BudgetTooSmall(f"generator {p} has {len(p)} points, budget is {P}")


def closure(gens: Sequence, regime: str, P: int, s: int = 4, mode: str = SET,
            N: int | None = None, jobs: int = 1) -> CategoryClosure:
    gens = list(gens)
    _validate(gens, regime, P)
    if mode == LINEAR:
        if N is None:
            raise BudgetTooSmall("linear mode needs N")
        return _linear_closure(gens, regime, P, s, N)
    c = CategoryClosure(regime, gens, P, s, SET, N)
    seeds = {canon(*to_row(p)) for p in base_partitions(regime) + gens}
    gvars = sorted({v for g in seeds for v in variants(*g)})
    limit = c.limit
    known = set(seeds)
    frontier = sorted(seeds)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while frontier:
            if pool is None:
                cands = _expand_chunk((frontier, gvars, limit))
            else:
                size = max(1, ceil(len(frontier) / (jobs * 4)))
                chunks = [frontier[i:i + size] for i in range(0, len(frontier), size)]
                cands = set()
                for part in pool.map(_expand_chunk, [(ch, gvars, limit) for ch in chunks]):
                    cands |= part
            new = sorted(x for x in cands if x not in known and len(x[0]) <= limit)
            known.update(new)
            c.growth.append(len(new))
            frontier = new
    finally:
        if pool is not None:
            pool.shutdown()
    c.classes = known
    c.saturated = True
    return c


def contains(c: CategoryClosure, p) -> str:
    if isinstance(p, Partition):
        if not regime_admits(c.regime, p.colors):
            raise MixedRegime(f"{p} is not in the {c.regime} regime")
        if c.mode == SET:
            if len(p) > c.P:
                return NOT_FOUND
            return CERTIFIED_IN if canon(*to_row(p)) in c.classes else NOT_FOUND
        p = as_lc(p, c.N)
    row_vec, word = _lc_to_row(p)
    if len(word) > c.P:
        return NOT_FOUND
    basis = c.spaces.get(word, {})
    rem = _reduce(dict(row_vec), basis)
    return CERTIFIED_IN if not rem else NOT_FOUND


# ------------------------------------------------------------ linear mode


def _lc_to_row(lc: LinearCombination):
    vec = {}
    word = None
    for p, coeff in lc.items():
        key = to_row(p)
        word = key[0]
        vec[key] = vec.get(key, 0) + coeff
    if word is None:
        up, low = lc.sig
        word = tuple(_CODE[c.inverse()] for c in reversed(up)) + tuple(_CODE[c] for c in low)
    return {k: v for k, v in vec.items() if v}, word


def _reduce(vec: dict, basis: dict) -> dict:
    while vec:
        lead = min(vec)
        row = basis.get(lead)
        if row is None:
            return vec
        f = vec[lead]
        for k, v in row.items():
            nv = vec.get(k, 0) - f * v
            if nv:
                vec[k] = nv
            else:
                vec.pop(k, None)
    return vec


def _normalize(vec: dict) -> dict:
    lead = min(vec)
    inv = vec[lead].inverse() if isinstance(vec[lead], Scalar) else 1 / vec[lead]
    return {k: v * inv for k, v in vec.items()}


def _rref(vectors: list[dict]) -> list[dict]:
    """Reduced row echelon form with pivots ordered by the key order."""
    basis: dict = {}
    for v in vectors:
        r = _reduce(dict(v), basis)
        if r:
            r = _normalize(r)
            lead = min(r)
            for k, row in list(basis.items()):
                if lead in row:
                    f = row[lead]
                    new = dict(row)
                    for kk, vv in r.items():
                        nv = new.get(kk, 0) - f * vv
                        if nv:
                            new[kk] = nv
                        else:
                            new.pop(kk, None)
                    basis[k] = new
            basis[lead] = r
    return [basis[k] for k in sorted(basis)]


def _row_rotate(vec: dict) -> dict:
    out = {}
    for (cols, labs), c in vec.items():
        key = (cols[1:] + cols[:1], _rgs(labs[1:] + labs[:1]))
        out[key] = c
    return out


def _row_reflect(vec: dict) -> dict:
    out = {}
    for (cols, labs), c in vec.items():
        key = (tuple(_INVERT[x] for x in reversed(cols)), _rgs(tuple(reversed(labs))))
        out[key] = c
    return out


def _row_contract(vec: dict, i: int, N: int):
    out = {}
    for (cols, labs), c in vec.items():
        r = contract(cols, labs, i)
        if r is None:
            return None
        key = (r[0], r[1])
        out[key] = out.get(key, 0) + c * (N ** r[2])
    return {k: v for k, v in out.items() if v}


def _row_glue(a: dict, b: dict, j: int, N: int):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            r = glue(ka, kb, j)
            if r is None:
                return None
            key = (r[0], r[1])
            out[key] = out.get(key, 0) + ca * cb * (N ** r[2])
    return {k: v for k, v in out.items() if v}


def _word_of(vec: dict):
    return next(iter(vec))[0]


def _linear_closure(gens, regime, P, s, N) -> CategoryClosure:
    c = CategoryClosure(regime, gens, P, s, LINEAR, N)
    limit = c.limit
    seeds = []
    for g in base_partitions(regime) + gens:
        lc = as_lc(g, N)
        vec, _ = _lc_to_row(lc)
        if vec:
            seeds.append({k: coerce(v, N) for k, v in vec.items()})
    gvars = []
    for v in seeds:
        for vv in (v, _row_reflect(v)):
            cur = vv
            for _ in range(len(_word_of(vv))):
                gvars.append(cur)
                cur = _row_rotate(cur)
    spaces: dict = {}
    queue: list = []

    def insert(vec):
        if not vec:
            return
        word = _word_of(vec)
        if len(word) > limit:
            return
        basis = spaces.setdefault(word, {})
        r = _reduce(dict(vec), basis)
        if r:
            r = _normalize(r)
            basis[min(r)] = r
            queue.append(r)

    for v in seeds:
        insert(v)
    head = 0
    rounds_mark = len(queue)
    added_this_round = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        before = len(queue)
        word = _word_of(v)
        n = len(word)
        insert(_row_rotate(v))
        insert(_row_reflect(v))
        for i in range(n):
            r = _row_contract(v, i, N)
            if r is not None:
                insert(r)
        for g in gvars:
            m = len(_word_of(g))
            j = _glue_depth(n, m, limit)
            if j > min(n, m):
                continue
            for a, b in ((v, g), (g, v)) if j else ((v, g),):
                r = _row_glue(a, b, j, N)
                if r is not None:
                    insert(r)
        added_this_round += len(queue) - before
        if head == rounds_mark:
            c.growth.append(added_this_round)
            added_this_round = 0
            rounds_mark = len(queue)
    c.spaces = spaces
    c.saturated = True
    return c


# --------------------------------------------------------- comparisons


def compare_stores(a: dict, b: dict):
    """('Equal', None) or ('Differ', witness) for signature -> partitions maps."""
    sa = {p for ps in a.values() for p in ps}
    sb = {p for ps in b.values() for p in ps}
    diff = sa ^ sb
    if not diff:
        return ("Equal", None)
    return ("Differ", min(diff))


def equal_bounded(c1: CategoryClosure, c2: CategoryClosure):
    if (c1.P, c1.s) != (c2.P, c2.s):
        raise BoundMismatch(f"bounds differ: P={c1.P},s={c1.s} vs P={c2.P},s={c2.s}")
    if c1.regime != c2.regime:
        raise BoundMismatch(f"regimes differ: {c1.regime} vs {c2.regime}")
    verdict, witness = compare_stores(c1.store(), c2.store())
    if verdict == "Equal":
        return (f"Equal@{c1.P}", None)
    return ("Differ", witness)


# ------------------------------------------------------------------ dumps


def dump(c: CategoryClosure) -> str:
    head = f"CLOSURE regime={c.regime} P={c.P} s={c.s} mode={c.mode}"
    if c.mode == LINEAR:
        head += f" N={c.N}"
    lines = [head]
    for sig, items in c.store().items():
        lines.append(f"SIG {format_signature(sig)}")
        for x in items:
            lines.append(format_lc(x) if c.mode == LINEAR else serialize(x))
    return "\n".join(lines) + "\n"


def diagnostics(c: CategoryClosure) -> str:
    rounds = " ".join(str(g) for g in c.growth)
    total = len(c.classes) if c.mode == SET else sum(len(b) for b in c.spaces.values())
    return f"rounds={len(c.growth)} growth=[{rounds}] total={total} saturated={c.saturated}"


# ------------------------------------------------------------- products

PRODUCT_KINDS = ("free", "tensor", "trivial", "times0", "times2k", "star_k", "ctimes_k")


def product_generators(kind: str, base_gens: Sequence[Partition] = (), k: int | None = None) -> list[Partition]:
    """Generators of the ▲-category for the named product with Ẑ₂."""
    from .errors import BadParam

    base = list(base_gens)
    for g in base:
        if any(c is not LINE for c in g.colors):
            raise BadParam(f"base generator {g} must be uncolored")
    pos = generator("positionerext")
    glob = generator("globcolext")
    if kind == "free":
        return base
    if kind == "tensor":
        return base + [pos]
    if kind == "trivial":
        return base + [generator("extra_singleton")]
    if any(len(g) % 2 for g in base):
        raise BadParam("this product needs a base category without the singleton")
    if kind == "times0":
        return base + [glob]
    if k is None or int(k) < 1:
        raise BadParam(f"{kind} needs a parameter k >= 1")
    k = int(k)
    if kind == "times2k":
        return base + [tensor_all([pos] * k)]
    alt = generator("alt_tensor", k=k)
    if kind == "star_k":
        return base + [alt]
    if kind == "ctimes_k":
        return base + [glob, alt]
    raise BadParam(f"unknown product kind {kind!r}")
