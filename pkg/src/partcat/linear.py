"""Formal linear combinations of partitions with the N-scaled composition.

Coefficients are Scalars in Q(sqrt F), where the field parameter F normally
equals the loop parameter N. The U functor produces combinations whose loop
parameter is N-1 while the coefficients still live in Q(sqrt N), so the two
are stored separately.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import ArityMismatch, ContextMismatch, ParseError, SignatureMismatch
from .partition import (
    LINE,
    Partition,
    compose,
    empty,
    format_signature,
    involute,
    parse,
    tensor,
)
from .scalar import Scalar, coerce, format_rational

DOT = "•"
DOWN = "↓"
LETTERS = (DOT, DOWN)

_LETTER_ALIASES = {"•": DOT, ".": DOT, "d": DOT, "↓": DOWN, "s": DOWN, "v": DOWN}


def parse_dotted_word(text: str) -> tuple[str, ...]:
    """Words over {•, ↓}; '.' or 'd' also mean •, 's' or 'v' mean ↓."""
    out = []
    for i, ch in enumerate(text.strip()):
        if ch in ", ":
            continue
        if ch not in _LETTER_ALIASES:
            raise ParseError(f"unknown dotted letter {ch!r}", i)
        out.append(_LETTER_ALIASES[ch])
    return tuple(out)


def format_dotted_word(w: Sequence[str]) -> str:
    return "".join(w)


class LinearCombination:
    __slots__ = ("sig", "N", "field", "terms")

    def __init__(self, sig, terms=None, N: int = 1, field: int | None = None):
        self.sig = (tuple(sig[0]), tuple(sig[1]))
        self.N = N
        self.field = N if field is None else field
        self.terms: dict[Partition, Scalar] = {}
        for p, c in (terms.items() if isinstance(terms, dict) else (terms or ())):
            self._add_term(p, c)

    def _add_term(self, p: Partition, c) -> None:
        if (p.upper, p.lower) != self.sig:
            raise SignatureMismatch(
                f"term {p} does not have signature {format_signature(self.sig)}"
            )
        c = coerce(c, self.field)
        total = self.terms.get(p, 0) + c
        if total:
            self.terms[p] = total
        else:
            self.terms.pop(p, None)

    @classmethod
    def of(cls, p: Partition, N: int, coeff=1, field: int | None = None) -> "LinearCombination":
        return cls(p.signature, {p: coeff}, N, field)

    @classmethod
    def zero(cls, sig, N: int, field: int | None = None) -> "LinearCombination":
        return cls(sig, None, N, field)

    def items(self):
        return self.terms.items()

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, p: Partition):
        return self.terms.get(p, Scalar(0, 0, self.field))

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0].num_blocks, kv[0].sort_key()))

    def _check_context(self, other: "LinearCombination") -> None:
        if self.N != other.N or self.field != other.field:
            raise ContextMismatch(
                f"combinations live in different contexts (N={self.N} vs N={other.N})"
            )

    def __add__(self, other: "LinearCombination") -> "LinearCombination":
        self._check_context(other)
        if self.sig != other.sig:
            raise SignatureMismatch("cannot add combinations of different signatures")
        out = self.copy()
        for p, c in other.items():
            out._add_term(p, c)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s) -> "LinearCombination":
        s = coerce(s, self.field)
        if not s:
            return LinearCombination.zero(self.sig, self.N, self.field)
        return LinearCombination(self.sig, {p: c * s for p, c in self.items()}, self.N, self.field)

    def copy(self) -> "LinearCombination":
        out = LinearCombination.zero(self.sig, self.N, self.field)
        out.terms = dict(self.terms)
        return out

    def __eq__(self, other):
        if not isinstance(other, LinearCombination):
            return NotImplemented
        return self.sig == other.sig and self.N == other.N and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"LinearCombination(N={self.N}, {format_lc(self)!r})"

    def __str__(self):
        return format_lc(self)


def as_lc(x, N: int, field: int | None = None) -> LinearCombination:
    if isinstance(x, LinearCombination):
        return x
    if isinstance(x, Partition):
        return LinearCombination.of(x, N, 1, field)
    raise TypeError(f"expected a partition or linear combination, got {type(x).__name__}")


def add(a: LinearCombination, b: LinearCombination) -> LinearCombination:
    return a + b


def scale(s, a: LinearCombination) -> LinearCombination:
    return a.scale(s)


def lin_compose(q, p, N: int | None = None) -> LinearCombination:
    """q∘p (q below p), each pair of terms weighted by N^rl."""
    if N is None:
        N = q.N if isinstance(q, LinearCombination) else p.N
    q = as_lc(q, N)
    p = as_lc(p, N, q.field)
    q._check_context(p)
    if p.sig[1] != q.sig[0]:
        raise SignatureMismatch(
            f"cannot compose {format_signature(q.sig)} after {format_signature(p.sig)}"
        )
    out = LinearCombination.zero((p.sig[0], q.sig[1]), q.N, q.field)
    for pp, cp in p.items():
        for qq, cq in q.items():
            r, loops = compose(qq, pp)
            out._add_term(r, cp * cq * (q.N ** loops))
    return out


def lin_tensor(a, b, N: int | None = None) -> LinearCombination:
    if N is None:
        N = a.N if isinstance(a, LinearCombination) else b.N
    a = as_lc(a, N)
    b = as_lc(b, N, a.field)
    a._check_context(b)
    out = LinearCombination.zero((a.sig[0] + b.sig[0], a.sig[1] + b.sig[1]), a.N, a.field)
    for pa, ca in a.items():
        for pb, cb in b.items():
            out._add_term(tensor(pa, pb), ca * cb)
    return out


def lin_involute(a: LinearCombination) -> LinearCombination:
    # Coefficients are real, so the antilinear extension is linear here.
    return LinearCombination(
        (a.sig[1], a.sig[0]), {involute(p): c for p, c in a.items()}, a.N, a.field
    )


# -------------------------------------------------------------- projections

DISCONNECTER = Partition((LINE,), (LINE,), (0, 1))
ID = Partition((LINE,), (LINE,), (0, 0))


def pi(letter: str, N: int, field: int | None = None) -> LinearCombination:
    letter = _LETTER_ALIASES.get(letter, letter)
    inv = Fraction(1, N)
    if letter == DOWN:
        return LinearCombination(ID.signature, {DISCONNECTER: inv}, N, field)
    if letter == DOT:
        return LinearCombination(ID.signature, {ID: 1, DISCONNECTER: -inv}, N, field)
    raise ArityMismatch(f"unknown dotted letter {letter!r}")


def pi_word(w: Sequence[str], N: int, field: int | None = None) -> LinearCombination:
    out = LinearCombination.of(empty(), N, 1, field)
    for letter in w:
        out = lin_tensor(out, pi(letter, N, field))
    return out


def sandwich(p, w1: Sequence[str], w2: Sequence[str], N: int | None = None) -> LinearCombination:
    """π^{⊗w2} p π^{⊗w1}."""
    if N is None:
        N = p.N
    p = as_lc(p, N)
    k, l = len(p.sig[0]), len(p.sig[1])
    if len(w1) != k or len(w2) != l:
        raise ArityMismatch(
            f"words of lengths ({len(w1)},{len(w2)}) do not fit signature ({k},{l})"
        )
    if any(c is not LINE for c in p.sig[0] + p.sig[1]):
        raise SignatureMismatch("projections act on uncolored points only")
    inner = lin_compose(p, pi_word(w1, p.N, p.field))
    return lin_compose(pi_word(w2, p.N, p.field), inner)


def all_words(n: int):
    return product(LETTERS, repeat=n)


def canonical_words(p: Partition) -> tuple[tuple[str, ...], tuple[str, ...]]:
    w = [DOWN if p.is_singleton(i) else DOT for i in range(len(p))]
    return tuple(w[: p.k]), tuple(w[p.k:])


def dotted(p: Partition, N: int) -> LinearCombination:
    w1, w2 = canonical_words(p)
    return sandwich(LinearCombination.of(p, N), w1, w2)


def to_dotted_basis(lc: LinearCombination) -> dict[Partition, Scalar]:
    """Coefficients c_p with lc = Σ c_p dotted(p).

    dotted(p) is p plus terms with strictly more blocks, so peeling off the
    term with fewest blocks first always terminates.
    """
    rest = lc.copy()
    out: dict[Partition, Scalar] = {}
    while rest:
        p = min(rest.terms, key=lambda q: (q.num_blocks, q.sort_key()))
        c = rest.terms[p]
        out[p] = c
        rest = rest - dotted(p, lc.N).scale(c)
    return out


def from_dotted_basis(coeffs: dict, sig, N: int, field: int | None = None) -> LinearCombination:
    out = LinearCombination.zero(sig, N, field)
    for p, c in coeffs.items():
        out = out + _refield(dotted(p, N), out.field).scale(c)
    return out


def _refield(lc: LinearCombination, field: int) -> LinearCombination:
    return LinearCombination(lc.sig, dict(lc.terms), lc.N, field)


def is_separated(lc, w1, w2, N: int | None = None) -> bool:
    if N is None:
        N = lc.N
    lc = as_lc(lc, N)
    return sandwich(lc, w1, w2) == lc


# ---------------------------------------------------------------- text form

def format_coefficient(c) -> str:
    if isinstance(c, Scalar) and c.b:
        sign = "-" if c.b < 0 else "+"
        return f"({format_rational(c.a)}{sign}{format_rational(abs(c.b))}*sqrtN)"
    v = c.a if isinstance(c, Scalar) else Fraction(c)
    return format_rational(v)


def format_lc(lc: LinearCombination) -> str:
    if not lc:
        return "0"
    return " + ".join(f"{format_coefficient(c)} * {p}" for p, c in lc.sorted_items())


_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR = re.compile(
    rf"\s*(?:(?P<rat>{_RAT})|\(\s*(?P<a>{_RAT})\s*(?P<sign>[+-])\s*(?P<b>\d+(?:/\d+)?)\s*\*\s*sqrtN\s*\))\s*\*\s*"
)


def parse_lc(text: str, N: int, sig=None) -> LinearCombination:
    """Parse ``coef * P(...) + coef * P(...)``. "0" needs an explicit signature."""
    s = text.strip()
    if s == "0":
        if sig is None:
            raise ParseError("the zero combination needs a signature", 0)
        return LinearCombination.zero(sig, N)
    terms = []
    i = 0
    while True:
        m = _SCALAR.match(s, i)
        if m:
            if m.group("rat") is not None:
                coeff = Scalar(Fraction(m.group("rat")), 0, N)
            else:
                b = Fraction(m.group("b"))
                coeff = Scalar(Fraction(m.group("a")), b if m.group("sign") == "+" else -b, N)
            i = m.end()
        else:
            coeff = Scalar(1, 0, N)
            while i < len(s) and s[i].isspace():
                i += 1
        if not s.startswith("P(", i):
            raise ParseError("expected a partition", i)
        j = s.find(")", i)
        if j < 0:
            raise ParseError("unterminated partition", i)
        try:
            part = parse(s[i: j + 1])
        except ParseError as e:
            raise ParseError(str(e).rsplit(" at position", 1)[0], i + e.pos) from None
        terms.append((part, coeff))
        i = j + 1
        while i < len(s) and s[i].isspace():
            i += 1
        if i == len(s):
            break
        if s[i] != "+":
            raise ParseError("expected '+' between terms", i)
        i += 1
    if sig is None:
        sig = terms[0][0].signature
    return LinearCombination(sig, terms, N)
