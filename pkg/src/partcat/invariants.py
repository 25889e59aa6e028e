"""Separating invariants: properties kept by ⊗, ∘ and * that certify p ∉ ⟨S⟩.

Each invariant maps a partition (and a parameter derived from the generator
pool) to True, False, or None when it does not apply to that partition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Callable, Sequence

from .functors import color_sum, functor_f
from .partition import (
    BLACK,
    EXTRA,
    EXTRA_REGIME,
    LINE,
    PLAIN,
    TWOCOL,
    WHITE,
    Partition,
    compose,
    involute,
    is_noncrossing,
    one_row,
    tensor,
)

MAX_EXTRA_POINTS = 12


def c_value(p: Partition) -> int | None:
    """Color sum in the two-colored regime, or of F(p) for ▲-partitions of even length."""
    colors = set(p.colors)
    if not colors:
        return 0
    if colors <= {WHITE, BLACK}:
        return color_sum(p)
    if colors <= {LINE, EXTRA}:
        if EXTRA not in colors:
            return None
        if len(p) % 2:
            return None
        return color_sum(functor_f(p))
    return None


def c_value_in(p: Partition, regime: str) -> int | None:
    # Plain partitions count as ▲-partitions inside the extra regime.
    if regime == EXTRA_REGIME and p.colors and set(p.colors) <= {LINE, EXTRA}:
        if len(p) % 2:
            return None
        return color_sum(functor_f(p))
    if regime == PLAIN:
        return None
    return c_value(p)


def has_noncrossing_extra_pairing(p: Partition) -> bool | None:
    """Is there a non-crossing perfect matching of the ▲ points (in cyclic
    one-row order) whose arcs never separate two points of one block?"""
    q = one_row(p)
    n = len(q)
    extras = [i for i, c in enumerate(q.lower) if c is EXTRA]
    if len(extras) > MAX_EXTRA_POINTS:
        return None
    if len(extras) % 2:
        return False
    blocks = [b for b, c in _blocks_with_color(q) if c is not EXTRA]

    def arc_ok(a: int, b: int) -> bool:
        for blk in blocks:
            inside = [a < x < b for x in blk]
            if any(inside) and not all(inside):
                return False
        return True

    def rec(rest: list[int]) -> bool:
        if not rest:
            return True
        a = rest[0]
        # partners leaving an even number of ▲ inside keep the pairing non-crossing
        for idx in range(1, len(rest), 2):
            b = rest[idx]
            if arc_ok(a, b) and rec(rest[1:idx]) and rec(rest[idx + 1:]):
                return True
        return False

    return rec(extras) if n else True


def _blocks_with_color(q: Partition):
    out = []
    for blk in q.blocks:
        out.append((blk, q.lower[blk[0]]))
    return out


@dataclass(frozen=True)
class Invariant:
    name: str
    check: Callable[[Partition, object], bool | None]
    parameter: Callable[[Sequence[Partition], str], object] = lambda pool, regime: None
    regimes: tuple = (PLAIN, EXTRA_REGIME, TWOCOL)


def _lattice_parameter(pool: Sequence[Partition], regime: str):
    g = 0
    for p in pool:
        v = c_value_in(p, regime)
        if v is None:
            return None
        g = gcd(g, v)
    return g


def _in_lattice(p: Partition, k) -> bool | None:
    if k is None:
        return None
    v = c_value_in(p, _regime_hint(p))
    if v is None:
        return None
    return v == 0 if k == 0 else v % k == 0


def _regime_hint(p: Partition) -> str:
    cs = set(p.colors)
    if cs & {WHITE, BLACK}:
        return TWOCOL
    return EXTRA_REGIME


def _even_blocks(p: Partition, _=None) -> bool:
    for blk in p.blocks:
        if p.colors[blk[0]] is not EXTRA and len(blk) % 2:
            return False
    return True


INVARIANTS = (
    Invariant("c-sum-lattice", _in_lattice, _lattice_parameter, (EXTRA_REGIME, TWOCOL)),
    Invariant("even-length", lambda p, _=None: len(p) % 2 == 0),
    Invariant("even-extra-count", lambda p, _=None: p.colors.count(EXTRA) % 2 == 0, regimes=(EXTRA_REGIME,)),
    Invariant("noncrossing", lambda p, _=None: is_noncrossing(p)),
    Invariant("even-block-sizes", _even_blocks),
    Invariant(
        "noncrossing-extra-pairing",
        lambda p, _=None: has_noncrossing_extra_pairing(p),
        regimes=(EXTRA_REGIME,),
    ),
)

INVARIANT_NAMES = tuple(inv.name for inv in INVARIANTS)


def get_invariant(name: str) -> Invariant:
    for inv in INVARIANTS:
        if inv.name == name:
            return inv
    raise KeyError(name)


# --------------------------------------------------------- preservation


def _random_word(rng, regime: str, n: int):
    if regime == PLAIN:
        return [LINE] * n
    if regime == EXTRA_REGIME:
        return [EXTRA if rng.random() < 0.35 else LINE for _ in range(n)]
    return [rng.choice((WHITE, BLACK)) for _ in range(n)]


def _random_with_upper(rng, regime: str, upper, l: int) -> Partition:
    lower = _random_word(rng, regime, l)
    colors = list(upper) + lower
    nb = rng.randint(1, max(1, len(colors)))
    labels = [("t", i) if c is EXTRA else rng.randrange(nb) for i, c in enumerate(colors)]
    return Partition(upper, lower, labels)


def _satisfying(rng, inv: Invariant, param, regime: str, upper=None, tries: int = 400):
    for _ in range(tries):
        if upper is None:
            k = rng.randint(0, 3)
            up = _random_word(rng, regime, k)
        else:
            up = list(upper)
        p = _random_with_upper(rng, regime, up, rng.randint(0, 3))
        if inv.check(p, param) is True:
            return p
    return None


def _pool_parameter(inv: Invariant, regime: str):
    # lattice invariants are exercised with the sublattice 2Z
    return 2 if inv.name == "c-sum-lattice" else None


@lru_cache(maxsize=None)
def verify_preserved(name: str, regime: str, trials: int = 1000, seed: int = 0) -> tuple[bool, object]:
    """Check on random satisfying instances that ⊗, ∘ and * keep the invariant.

    Returns (ok, counterexample).
    """
    inv = get_invariant(name)
    param = _pool_parameter(inv, regime)
    rng = random.Random(seed)
    done = 0
    attempts = 0
    while done < trials and attempts < trials * 50:
        attempts += 1
        p = _satisfying(rng, inv, param, regime)
        if p is None:
            continue
        op = rng.randrange(3)
        if op == 0:
            r = involute(p)
        elif op == 1:
            q = _satisfying(rng, inv, param, regime)
            if q is None:
                continue
            r = tensor(p, q)
        else:
            q = _satisfying(rng, inv, param, regime, upper=p.lower)
            if q is None:
                continue
            r, _ = compose(q, p)
        verdict = inv.check(r, param)
        if verdict is False:
            return False, (op, p, r)
        done += 1
    return done >= trials, None


def base_partitions(regime: str) -> list[Partition]:
    from .partition import generator, identity

    out = [identity((LINE,)), generator("pairpart")]
    if regime == EXTRA_REGIME:
        out += [generator("extra_id"), generator("extra_pair")]
    if regime == TWOCOL:
        out = [
            identity((WHITE,)),
            identity((BLACK,)),
            generator("pairpart", colors="wb"),
            generator("pairpart", colors="bw"),
        ]
    return out


def certify_exclusion(p: Partition, gens: Sequence[Partition], regime: str,
                      invariants: Sequence[str] | None = None, trials: int = 1000,
                      seed: int = 0):
    """Name of the first invariant that every generator and base partition
    satisfies, that survives the preservation check, and that p violates."""
    pool = list(base_partitions(regime)) + list(gens)
    names = INVARIANT_NAMES if invariants is None else tuple(invariants)
    for name in names:
        inv = get_invariant(name)
        if regime not in inv.regimes:
            continue
        param = inv.parameter(pool, regime)
        if inv.name == "c-sum-lattice" and param is None:
            continue
        if not all(inv.check(g, param) is True for g in pool):
            continue
        if inv.check(p, param) is not False:
            continue
        ok, _ = verify_preserved(inv.name, regime, trials, seed)
        if ok:
            return inv.name
    return None
