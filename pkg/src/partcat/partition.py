"""Colored set partitions of k upper and l lower points.

A partition is stored as two color words and a restricted growth string:
``labels[i]`` is the block number of point ``i`` in reading order (upper row
left to right, then lower row left to right), with blocks numbered by first
occurrence. That string is the canonical form, so equality and hashing are
plain tuple comparisons.
"""

from __future__ import annotations

import re
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    BadParam,
    ExtraSingletonInBlock,
    InvalidBlocks,
    MixedRegime,
    ParseError,
    SignatureMismatch,
    UnknownGenerator,
    WrongRegime,
)


class Color(str, Enum):
    LINE = "|"
    EXTRA = "▲"
    WHITE = "○"
    BLACK = "●"

    @property
    def code(self) -> str:
        return _CODE[self]

    def inverse(self) -> "Color":
        if self is Color.WHITE:
            return Color.BLACK
        if self is Color.BLACK:
            return Color.WHITE
        return self


_CODE = {Color.LINE: "", Color.EXTRA: "t", Color.WHITE: "w", Color.BLACK: "b"}
_FROM_CODE = {"": Color.LINE, "t": Color.EXTRA, "w": Color.WHITE, "b": Color.BLACK}

LINE, EXTRA, WHITE, BLACK = Color.LINE, Color.EXTRA, Color.WHITE, Color.BLACK

PLAIN = "plain"
EXTRA_REGIME = "extra"
TWOCOL = "twocol"
REGIMES = (PLAIN, EXTRA_REGIME, TWOCOL)


def regime_of_colors(colors: Iterable[Color]) -> str | None:
    """Smallest regime containing the colors; None for the empty word."""
    cs = set(colors)
    if not cs:
        return None
    if cs <= {LINE}:
        return PLAIN
    if cs <= {LINE, EXTRA}:
        return EXTRA_REGIME
    if cs <= {WHITE, BLACK}:
        return TWOCOL
    raise MixedRegime(f"colors {sorted(c.value for c in cs)} span more than one regime")


def regime_admits(regime: str, colors: Iterable[Color]) -> bool:
    r = regime_of_colors(colors)
    if r is None:
        return True
    if regime == EXTRA_REGIME:
        return r in (PLAIN, EXTRA_REGIME)
    return r == regime


def _rgs(raw: Sequence) -> tuple[int, ...]:
    seen: dict = {}
    out = []
    for x in raw:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


class Partition:
    __slots__ = ("upper", "lower", "labels", "_hash")

    def __init__(self, upper: Sequence[Color], lower: Sequence[Color], labels: Sequence):
        # Internal constructor: relabels to canonical form and checks invariants.
        self.upper = tuple(upper)
        self.lower = tuple(lower)
        if len(labels) != len(self.upper) + len(self.lower):
            raise InvalidBlocks("label count does not match the number of points")
        self.labels = _rgs(labels)
        self._hash = hash((self.upper, self.lower, self.labels))
        regime_of_colors(self.upper + self.lower)
        colors = self.colors
        counts = [0] * (max(self.labels) + 1 if self.labels else 0)
        for lab in self.labels:
            counts[lab] += 1
        for c, lab in zip(colors, self.labels):
            if c is EXTRA and counts[lab] > 1:
                raise ExtraSingletonInBlock("a ▲ point must be a singleton block")

    @classmethod
    def _trusted(cls, upper, lower, labels) -> "Partition":
        p = object.__new__(cls)
        p.upper = upper
        p.lower = lower
        p.labels = labels
        p._hash = hash((upper, lower, labels))
        return p

    # basic shape
    @property
    def k(self) -> int:
        return len(self.upper)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.lower)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def colors(self) -> tuple[Color, ...]:
        return self.upper + self.lower

    @property
    def signature(self) -> tuple[tuple[Color, ...], tuple[Color, ...]]:
        return (self.upper, self.lower)

    @property
    def num_blocks(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Blocks as sorted 0-based index tuples, ordered by minimal index."""
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for i, lab in enumerate(self.labels):
            out[lab].append(i)
        return tuple(tuple(b) for b in out)

    @property
    def regime(self) -> str | None:
        return regime_of_colors(self.colors)

    def is_singleton(self, i: int) -> bool:
        return self.labels.count(self.labels[i]) == 1

    def sort_key(self):
        return (len(self.labels), self.k, tuple(c.value for c in self.colors), self.labels)

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.labels == other.labels
            and self.upper == other.upper
            and self.lower == other.lower
        )

    def __lt__(self, other: "Partition") -> bool:
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Partition({serialize(self)!r})"

    def __str__(self):
        return serialize(self)

    # category operations as methods for convenience
    def __matmul__(self, other):
        return tensor(self, other)

    def star(self) -> "Partition":
        return involute(self)


def make_partition(upper: Sequence, lower: Sequence, blocks: Iterable[Iterable[int]]) -> Partition:
    """Build a partition from 1-based point indices in reading order."""
    upper = tuple(Color(c) for c in upper)
    lower = tuple(Color(c) for c in lower)
    n = len(upper) + len(lower)
    labels: list[int | None] = [None] * n
    for bi, block in enumerate(blocks):
        block = list(block)
        if not block:
            raise InvalidBlocks("empty block")
        for idx in block:
            if not 1 <= idx <= n:
                raise InvalidBlocks(f"index {idx} out of range 1..{n}")
            if labels[idx - 1] is not None:
                raise InvalidBlocks(f"index {idx} appears in two blocks")
            labels[idx - 1] = bi
    missing = [i + 1 for i, lab in enumerate(labels) if lab is None]
    if missing:
        raise InvalidBlocks(f"points {missing} are not covered by any block")
    return Partition(upper, lower, labels)


def empty() -> Partition:
    return Partition((), (), ())


def same_regime(*ps: Partition) -> str | None:
    return regime_of_colors(c for p in ps for c in p.colors)


def tensor(p: Partition, q: Partition) -> Partition:
    same_regime(p, q)
    off = p.num_blocks
    pu = p.labels[: p.k]
    pl = p.labels[p.k:]
    qu = tuple(x + off for x in q.labels[: q.k])
    ql = tuple(x + off for x in q.labels[q.k:])
    return Partition(p.upper + q.upper, p.lower + q.lower, pu + qu + pl + ql)


def tensor_all(ps: Iterable[Partition]) -> Partition:
    out = empty()
    for p in ps:
        out = tensor(out, p)
    return out


def compose_raw(q: Partition, p: Partition) -> tuple[Partition, int, int]:
    """Stack q below p. Returns (result, counted loops, dropped ▲ loops)."""
    if p.lower != q.upper:
        raise SignatureMismatch(
            f"lower word {_word(p.lower)} of the upper factor does not match "
            f"upper word {_word(q.upper)} of the lower factor"
        )
    same_regime(p, q)
    nb_p = p.num_blocks
    parent = list(range(nb_p + q.num_blocks))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in range(p.l):
        a = find(p.labels[p.k + m])
        b = find(q.labels[m] + nb_p)
        if a != b:
            parent[b] = a
    top = [find(x) for x in p.labels[: p.k]]
    bottom = [find(x + nb_p) for x in q.labels[q.k:]]
    touching = set(top) | set(bottom)
    loops = 0
    extra_loops = 0
    seen = set()
    for m in range(p.l):
        r = find(p.labels[p.k + m])
        if r in touching or r in seen:
            continue
        seen.add(r)
        if p.lower[m] is EXTRA:
            extra_loops += 1
        else:
            loops += 1
    result = Partition(p.upper, q.lower, top + bottom)
    return result, loops, extra_loops


def compose(q: Partition, p: Partition) -> tuple[Partition, int]:
    """q∘p with q drawn below p, and the loop count rl(p, q).

    Loops made only of ▲ points are removed without being counted since the
    ▲ color is one-dimensional.
    """
    r, loops, _ = compose_raw(q, p)
    return r, loops


def involute(p: Partition) -> Partition:
    labels = p.labels[p.k:] + p.labels[: p.k]
    return Partition(p.lower, p.upper, labels)


def color_invert(p: Partition) -> Partition:
    if p.regime not in (TWOCOL, None):
        raise MixedRegime("color inversion needs a two-colored partition")
    return Partition._trusted(
        tuple(c.inverse() for c in p.upper), tuple(c.inverse() for c in p.lower), p.labels
    )


def rotate(p: Partition, side: str, direction: str) -> Partition:
    """Move one end point between the rows. Moved ○/● points switch color."""
    up, low = list(p.upper), list(p.lower)
    ul, ll = list(p.labels[: p.k]), list(p.labels[p.k:])
    if direction == "up":
        if not low:
            raise SignatureMismatch("no lower point to rotate up")
        if side == "left":
            c, lab = low.pop(0), ll.pop(0)
            up.insert(0, c.inverse())
            ul.insert(0, lab)
        elif side == "right":
            c, lab = low.pop(), ll.pop()
            up.append(c.inverse())
            ul.append(lab)
        else:
            raise BadParam(f"side must be left or right, got {side!r}")
    elif direction == "down":
        if not up:
            raise SignatureMismatch("no upper point to rotate down")
        if side == "left":
            c, lab = up.pop(0), ul.pop(0)
            low.insert(0, c.inverse())
            ll.insert(0, lab)
        elif side == "right":
            c, lab = up.pop(), ul.pop()
            low.append(c.inverse())
            ll.append(lab)
        else:
            raise BadParam(f"side must be left or right, got {side!r}")
    else:
        raise BadParam(f"direction must be up or down, got {direction!r}")
    return Partition(up, low, ul + ll)


def dual_color(c: Color) -> Color:
    return c.inverse()


def pair_for(c: Color) -> Partition:
    """The (0,2) pair partition x x̄ starting with color c.

    For ▲ this is ▲⊗▲, two separate singletons.
    """
    if c is EXTRA:
        return Partition((), (EXTRA, EXTRA), (0, 1))
    return Partition((), (c, c.inverse()), (0, 0))


def identity(colors: Sequence[Color]) -> Partition:
    colors = tuple(colors)
    n = len(colors)
    labels = list(range(n)) * 2
    for i, c in enumerate(colors):
        if c is EXTRA:
            labels[n + i] = n + i
    return Partition(colors, colors, labels)


def one_row(p: Partition) -> Partition:
    """Rotate every upper point to the front of the lower row (left-down moves)."""
    up = tuple(c.inverse() for c in reversed(p.upper))
    labels = tuple(reversed(p.labels[: p.k])) + p.labels[p.k:]
    return Partition((), up + p.lower, labels)


def from_one_row(p: Partition, k: int) -> Partition:
    """Inverse of ``one_row``: lift the first k lower points to the upper row."""
    if p.k:
        raise SignatureMismatch("expected a partition without upper points")
    low = p.lower
    up = tuple(c.inverse() for c in reversed(low[:k]))
    labels = tuple(reversed(p.labels[:k])) + p.labels[k:]
    return Partition(up, low[k:], labels)


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(r"([A-Za-z0-9_]+)(?::([A-Za-z]*))?")


def parse(text: str) -> Partition:
    s = text
    i = 0

    def skip_ws():
        nonlocal i
        while i < len(s) and s[i].isspace():
            i += 1

    skip_ws()
    if not s.startswith("P(", i):
        raise ParseError("expected 'P('", i)
    i += 2
    rows: list[list[tuple[str, Color]]] = [[], []]
    row = 0
    while True:
        skip_ws()
        if i >= len(s):
            raise ParseError("unexpected end of input", i)
        ch = s[i]
        if ch == ";":
            if row == 1:
                raise ParseError("second ';'", i)
            row = 1
            i += 1
            continue
        if ch == ")":
            if row == 0:
                raise ParseError("missing ';' between the rows", i)
            i += 1
            break
        m = _TOKEN.match(s, i)
        if not m:
            raise ParseError(f"unexpected character {ch!r}", i)
        label, code = m.group(1), m.group(2)
        if code is None:
            code = ""
        elif code not in ("t", "w", "b"):
            raise ParseError(f"unknown color {code!r}", m.start(2))
        rows[row].append((label, _FROM_CODE[code]))
        i = m.end()
        if i < len(s) and not (s[i].isspace() or s[i] in ";)"):
            raise ParseError(f"unexpected character {s[i]!r}", i)
    skip_ws()
    if i != len(s):
        raise ParseError("trailing characters", i)
    upper = [c for _, c in rows[0]]
    lower = [c for _, c in rows[1]]
    labels = [lab for lab, _ in rows[0]] + [lab for lab, _ in rows[1]]
    return Partition(upper, lower, labels)


_BLOCK_LETTERS = "abcdefghijklmnopqrstuvw"
_SINGLE_LETTERS = "xyz"


def _label(seq: str, n: int) -> str:
    q, r = divmod(n, len(seq))
    return seq[r] + (str(q) if q else "")


def serialize(p: Partition) -> str:
    """Canonical text. Blocks with several points get a, b, c, ... and
    singletons get x, y, z, ... each in order of first occurrence."""
    counts = [0] * p.num_blocks
    for lab in p.labels:
        counts[lab] += 1
    names: dict[int, str] = {}
    nb = ns = 0
    tokens = []
    for c, lab in zip(p.colors, p.labels):
        if lab not in names:
            if counts[lab] > 1:
                names[lab] = _label(_BLOCK_LETTERS, nb)
                nb += 1
            else:
                names[lab] = _label(_SINGLE_LETTERS, ns)
                ns += 1
        tok = names[lab]
        if c.code:
            tok += ":" + c.code
        tokens.append(tok)
    left = " ".join(tokens[: p.k])
    right = " ".join(tokens[p.k:])
    return "P(" + left + (" " if left else "") + ";" + (" " if right else "") + right + ")"


def _word(w: Sequence[Color]) -> str:
    return "".join(c.value for c in w) or "∅"


_SIG_CHARS = {"-": LINE, "|": LINE, "t": EXTRA, "w": WHITE, "b": BLACK}


def parse_word(text: str) -> tuple[Color, ...]:
    out = []
    for i, ch in enumerate(text):
        if ch not in _SIG_CHARS:
            raise ParseError(f"unknown color letter {ch!r} in word", i)
        out.append(_SIG_CHARS[ch])
    return tuple(out)


def parse_signature(text: str) -> tuple[tuple[Color, ...], tuple[Color, ...]]:
    """Signature text ``<upper>;<lower>`` with letters - (line), t, w, b."""
    if text.count(";") != 1:
        raise ParseError("signature needs exactly one ';'", 0)
    a, b = text.split(";")
    return parse_word(a.strip()), parse_word(b.strip())


def format_word(w: Sequence[Color]) -> str:
    return "".join("-" if c is LINE else c.code for c in w)


def format_signature(sig) -> str:
    return format_word(sig[0]) + ";" + format_word(sig[1])


# ----------------------------------------------------------- generator catalog

def _colors_param(params: dict, n: int, default: Color) -> tuple[Color, ...]:
    spec = params.get("colors")
    if spec is None:
        return (default,) * n
    word = parse_word(spec)
    if len(word) != n:
        raise BadParam(f"expected {n} colors, got {spec!r}")
    return word


def _int_param(params: dict, name: str, minimum: int = 1) -> int:
    if name not in params:
        raise BadParam(f"missing parameter {name}")
    try:
        v = int(params[name])
    except (TypeError, ValueError):
        raise BadParam(f"parameter {name} must be an integer") from None
    if v < minimum:
        raise BadParam(f"parameter {name} must be >= {minimum}")
    return v


def _b_k_ext(k: int) -> Partition:
    lower = []
    labels = []
    for i in range(k):
        lower += [LINE, EXTRA]
        labels += ["blk", f"t{i}"]
    return Partition((), lower, labels)


def _alt_tensor(k: int) -> Partition:
    unit = parse("P(; x y:t)")
    return tensor_all([unit] * k)


def generator(name: str, **params) -> Partition:
    """Named partition from the standard catalog.

    ``colors`` may recolor pairpart, idpart and singleton with a word such as
    "wb"; ``k`` parametrizes b_k_ext, alt_tensor and positionerext_power.
    """
    if name == "pairpart":
        c = _colors_param(params, 2, LINE)
        return Partition((), c, (0, 0))
    if name == "idpart":
        spec = params.get("colors")
        if spec is None:
            return Partition((LINE,), (LINE,), (0, 0))
        word = parse_word(spec)
        if len(word) != 2:
            raise BadParam("idpart colors are given as <upper><lower>")
        return Partition((word[0],), (word[1],), (0, 0))
    if name == "singleton":
        c = _colors_param(params, 1, LINE)
        return Partition((), c, (0,))
    if name == "extra_singleton":
        return Partition((), (EXTRA,), (0,))
    if name == "extra_id":
        return Partition((EXTRA,), (EXTRA,), (0, 1))
    if name == "extra_pair":
        return Partition((), (EXTRA, EXTRA), (0, 1))
    if name == "crosspart":
        c = _colors_param(params, 2, LINE)
        return Partition(c, (c[1], c[0]), (0, 1, 1, 0))
    if name == "fourpart":
        c = _colors_param(params, 4, LINE)
        return Partition((), c, (0, 0, 0, 0))
    if name == "halflibpart":
        return parse("P(a b c ; c b a)")
    if name == "disconnecter":
        return parse("P(x ; y)")
    if name == "positionerext":
        return parse("P(a x:t ; y:t a)")
    if name == "globcolext":
        return parse("P(a b x:t ; y:t a b)")
    if name == "b_k_ext":
        return _b_k_ext(_int_param(params, "k"))
    if name == "alt_tensor":
        return _alt_tensor(_int_param(params, "k"))
    if name == "positionerext_power":
        k = _int_param(params, "k")
        return tensor_all([generator("positionerext")] * k)
    raise UnknownGenerator(f"unknown generator {name!r}")


GENERATOR_NAMES = (
    "pairpart", "idpart", "singleton", "extra_singleton", "extra_id", "extra_pair",
    "crosspart", "fourpart", "halflibpart", "disconnecter", "positionerext",
    "globcolext", "b_k_ext", "alt_tensor", "positionerext_power",
)


def generator_from_spec(spec: str) -> Partition:
    """``name`` or ``name(key=value,...)``, or an inline partition."""
    spec = spec.strip()
    if spec.startswith("P("):
        return parse(spec)
    m = re.fullmatch(r"([A-Za-z_]+)(?:\((.*)\))?", spec)
    if not m:
        raise UnknownGenerator(f"cannot read generator {spec!r}")
    params = {}
    if m.group(2):
        for item in m.group(2).split(","):
            if "=" not in item:
                raise BadParam(f"parameter {item!r} needs key=value")
            key, val = item.split("=", 1)
            params[key.strip()] = val.strip()
    return generator(m.group(1), **params)


# ------------------------------------------------------------- enumerations

def set_partitions(n: int):
    """All restricted growth strings of length n."""
    if n == 0:
        yield ()
        return

    def rec(prefix, mx):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(mx + 2):
            prefix.append(v)
            yield from rec(prefix, max(mx, v))
            prefix.pop()

    yield from rec([0], 0)


def all_partitions(upper: Sequence[Color], lower: Sequence[Color]):
    """Every partition of the given signature (▲ points kept singleton)."""
    upper, lower = tuple(upper), tuple(lower)
    colors = upper + lower
    free = [i for i, c in enumerate(colors) if c is not EXTRA]
    for rgs in set_partitions(len(free)):
        labels = [None] * len(colors)
        for i, v in zip(free, rgs):
            labels[i] = v
        for i, c in enumerate(colors):
            if c is EXTRA:
                labels[i] = ("t", i)
        yield Partition(upper, lower, labels)


def is_noncrossing(p: Partition) -> bool:
    """Non-crossing in the cyclic order around the diagram. ▲ points are ignored."""
    q = one_row(p)
    seq = [(lab, c) for lab, c in zip(q.labels, q.lower) if c is not EXTRA]
    # a stack scan: blocks must nest like parentheses
    last = {}
    for i, (lab, _) in enumerate(seq):
        last[lab] = i
    stack: list[int] = []
    opened = set()
    for i, (lab, _) in enumerate(seq):
        if lab in opened:
            if stack[-1] != lab:
                return False
        else:
            opened.add(lab)
            stack.append(lab)
        if last[lab] == i:
            if stack[-1] != lab:
                return False
            stack.pop()
    return True


def pairings(n: int, noncrossing: bool = False):
    """Pair partitions of n points as label tuples."""
    if n % 2:
        return
    for rgs in set_partitions(n):
        counts = [0] * (max(rgs) + 1 if rgs else 0)
        for v in rgs:
            counts[v] += 1
        if all(c == 2 for c in counts):
            p = Partition((), (LINE,) * n, rgs)
            if not noncrossing or is_noncrossing(p):
                yield rgs


def nc_pairings(upper: Sequence[Color], lower: Sequence[Color]):
    upper, lower = tuple(upper), tuple(lower)
    for rgs in pairings(len(upper) + len(lower), noncrossing=False):
        p = Partition(upper, lower, rgs)
        if is_noncrossing(p):
            yield p


def random_partition(rng, regime: str, k: int, l: int, max_blocks: int | None = None,
                     upper: Sequence[Color] | None = None) -> Partition:
    """Random partition with k upper and l lower points in the given regime.

    A given ``upper`` word fixes the upper colors (and k).
    """
    if upper is not None:
        k = len(upper)
    n = k + l
    if regime == PLAIN:
        colors = [LINE] * n
    elif regime == EXTRA_REGIME:
        colors = [EXTRA if rng.random() < 0.3 else LINE for _ in range(n)]
    elif regime == TWOCOL:
        colors = [rng.choice((WHITE, BLACK)) for _ in range(n)]
    else:
        raise WrongRegime(f"unknown regime {regime!r}")
    if upper is not None:
        colors[:k] = upper
    nb = max_blocks or max(1, n)
    labels = []
    for i, c in enumerate(colors):
        if c is EXTRA:
            labels.append(("t", i))
        else:
            labels.append(rng.randrange(nb))
    return Partition(colors[:k], colors[k:], labels)
