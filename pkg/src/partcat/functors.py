"""The functor F to two-colored partitions, its preimages, color sums and the
functor U from pair-block linear categories to extra-singleton categories."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Iterable, Sequence

from .errors import BadParam, BlockTooLarge, OddLength, SignatureMismatch, WrongRegime
from .linear import (
    LinearCombination,
    as_lc,
    from_dotted_basis,
    lin_compose,
    lin_involute,
    lin_tensor,
    to_dotted_basis,
)
from .partition import (
    BLACK,
    EXTRA,
    LINE,
    WHITE,
    Color,
    Partition,
    generator,
    tensor,
)
from .scalar import Scalar
from .tensor_maps import ExactMatrix

# ------------------------------------------------------------------ F


def _check_extra(p: Partition) -> None:
    if any(c not in (LINE, EXTRA) for c in p.colors):
        raise WrongRegime("expected a partition with colors | and ▲")


def f_word(word: Sequence[Color]) -> tuple[Color, ...]:
    """Color position i white when i is odd (1-based), black otherwise; drop ▲."""
    out = []
    for i, c in enumerate(word):
        if c is EXTRA:
            continue
        if c is not LINE:
            raise WrongRegime("expected a word over | and ▲")
        out.append(WHITE if i % 2 == 0 else BLACK)
    return tuple(out)


def functor_f(p: Partition) -> Partition:
    _check_extra(p)
    if len(p) % 2:
        raise OddLength(f"F is only defined on even length, got {len(p)} points")
    keep = [i for i, c in enumerate(p.colors) if c is not EXTRA]
    labels = [p.labels[i] for i in keep]
    return Partition(f_word(p.upper), f_word(p.lower), labels)


def _minimal_row(colors: Sequence[Color]) -> list[Color]:
    # Insert a ▲ whenever the next colored point would land on the wrong parity.
    out: list[Color] = []
    for c in colors:
        want_odd = c is WHITE
        if (len(out) % 2 == 0) != want_odd:
            out.append(EXTRA)
        out.append(LINE)
    return out


def _lift(upper: Sequence[Color], lower: Sequence[Color], line_labels: Sequence,
          pad_to_even: bool) -> Partition:
    up = _minimal_row(upper)
    low = _minimal_row(lower)
    if pad_to_even and (len(up) + len(low)) % 2:
        up.append(EXTRA)
    it = iter(line_labels)
    labels = []
    for n, c in enumerate(up + low):
        labels.append(("t", n) if c is EXTRA else next(it))
    return Partition(up, low, labels)


def shortest_preimage(pt: Partition) -> Partition:
    """The shortest even-length p with F(p) = pt.

    Each row gets the minimal ▲ pattern. If the total length is then odd, one
    trailing ▲ is added to the upper row.
    """
    if any(c not in (WHITE, BLACK) for c in pt.colors):
        raise WrongRegime("expected a two-colored partition")
    return _lift(pt.upper, pt.lower, pt.labels, pad_to_even=True)


def preimage_normalize(p: Partition) -> Partition:
    """Remove adjacent ▲▲ pairs and trailing ▲ while keeping the length parity."""
    _check_extra(p)
    keep = [i for i, c in enumerate(p.colors) if c is not EXTRA]
    labels = [p.labels[i] for i in keep]
    q = _lift(f_word(p.upper), f_word(p.lower), labels, pad_to_even=False)
    if len(q) % 2 != len(p) % 2:
        q = Partition(q.upper + (EXTRA,), q.lower, q.labels[: q.k] + (("t", -1),) + q.labels[q.k:])
    return q


def psi_forget(p: Partition) -> Partition:
    if any(c not in (WHITE, BLACK) for c in p.colors):
        raise WrongRegime("expected a two-colored partition")
    return Partition((LINE,) * p.k, (LINE,) * p.l, p.labels)


def _alternating(n: int, start: Color) -> tuple[Color, ...]:
    return tuple(start if i % 2 == 0 else start.inverse() for i in range(n))


def alt_colorings(p: Partition) -> list[Partition]:
    """Alternating colorings: each row alternates, first points agree and last
    points agree. Sorted, at most two."""
    if any(c is not LINE for c in p.colors):
        raise WrongRegime("expected an uncolored partition")
    if len(p) % 2:
        return []
    out = set()
    for start in (WHITE, BLACK):
        up, low = _alternating(p.k, start), _alternating(p.l, start)
        if up and low and up[-1] != low[-1]:
            continue
        out.add(Partition(up, low, p.labels))
    return sorted(out)


def color_sum_word(word: Sequence[Color]) -> int:
    s = 0
    for c in word:
        if c is WHITE:
            s += 1
        elif c is BLACK:
            s -= 1
        else:
            raise WrongRegime("color sums need a two-colored word")
    return s


def color_sum(x) -> int:
    """c(w) = #○ − #● on a word; c(p) = c(lower) − c(upper) on a partition."""
    if isinstance(x, Partition):
        return color_sum_word(x.lower) - color_sum_word(x.upper)
    return color_sum_word(x)


def degree_of_reflection(sample: Iterable[Partition]) -> int:
    """gcd of the color sums over a sample; gcd of nothing is 0.

    A finite sample only yields a multiple of the true degree.
    """
    g = 0
    for p in sample:
        g = gcd(g, color_sum(p))
    return g


def split_singleton(gens: Sequence[Partition]) -> tuple[list[Partition], bool]:
    """Replace each odd-length p by p⊗↓.

    Returns the even-length generators and whether ↓ must be added back, so
    that ⟨gens⟩ = ⟨even, ↓⟩ when the flag is set.
    """
    down = generator("singleton")
    out, odd = [], False
    for p in gens:
        if len(p) % 2:
            out.append(tensor(p, down))
            odd = True
        else:
            out.append(p)
    return out, odd


# ------------------------------------------------------------------ U


@lru_cache(maxsize=None)
def u_matrix(N: int, sign: str = "+") -> ExactMatrix:
    """Orthogonal N×N matrix with last row ξᵀ/√N.

    Householder reflection with w = e_N − s·ξ/√N (s = ±1), then the last row
    is negated when s = −1.
    """
    if N < 2:
        raise BadParam("u_matrix needs N >= 2")
    s = _sign_value(sign)
    inv_root = Scalar(0, Fraction(1, N), N)  # 1/sqrt(N)
    w = [inv_root * (-s) for _ in range(N - 1)] + [Scalar(1, 0, N) - inv_root * s]
    ww = sum((x * x for x in w), Scalar(0, 0, N))
    two_over = Scalar(2, 0, N) / ww
    entries = {}
    for i in range(N):
        for j in range(N):
            v = (Scalar(1, 0, N) if i == j else Scalar(0, 0, N)) - two_over * w[i] * w[j]
            if i == N - 1 and s < 0:
                v = -v
            if v:
                entries[(i, j)] = v
    return ExactMatrix(N, N, entries)


def _sign_value(sign) -> int:
    if sign in ("+", "plus", 1):
        return 1
    if sign in ("-", "−", "minus", -1):
        return -1
    raise BadParam(f"sign must be plus or minus, got {sign!r}")


class DirectSum:
    """Morphisms whose components live in several extra-singleton signatures."""

    def __init__(self, parts: dict | None = None, N: int = 1, field_: int | None = None):
        self.N = N
        self.field = N if field_ is None else field_
        self.parts: dict = {}
        for sig, lc in (parts or {}).items():
            if lc:
                self.parts[sig] = lc

    def add(self, lc: LinearCombination) -> None:
        cur = self.parts.get(lc.sig)
        new = lc if cur is None else cur + lc
        if new:
            self.parts[lc.sig] = new
        else:
            self.parts.pop(lc.sig, None)

    def terms(self):
        for sig in sorted(self.parts, key=_sig_key):
            yield from self.parts[sig].sorted_items()

    def __eq__(self, other):
        if not isinstance(other, DirectSum):
            return NotImplemented
        return self.parts == other.parts

    __hash__ = None

    def __bool__(self):
        return bool(self.parts)

    def __str__(self):
        from .linear import format_coefficient

        items = list(self.terms())
        if not items:
            return "0"
        return " + ".join(f"{format_coefficient(c)} * {p}" for p, c in items)

    def __repr__(self):
        return f"DirectSum({self})"


def _sig_key(sig):
    return (len(sig[0]) + len(sig[1]), len(sig[0]), tuple(c.value for c in sig[0] + sig[1]))


def ds_tensor(a: DirectSum, b: DirectSum) -> DirectSum:
    out = DirectSum(N=a.N, field_=a.field)
    for x in a.parts.values():
        for y in b.parts.values():
            out.add(lin_tensor(x, y))
    return out


def ds_compose(q: DirectSum, p: DirectSum) -> DirectSum:
    out = DirectSum(N=q.N, field_=q.field)
    for x in p.parts.values():
        for y in q.parts.values():
            if x.sig[1] == y.sig[0]:
                out.add(lin_compose(y, x))
    return out


def ds_involute(a: DirectSum) -> DirectSum:
    out = DirectSum(N=a.N, field_=a.field)
    for x in a.parts.values():
        out.add(lin_involute(x))
    return out


def _check_u_domain(lc: LinearCombination) -> None:
    if any(c is not LINE for c in lc.sig[0] + lc.sig[1]):
        raise WrongRegime("U acts on uncolored linear combinations")
    for p in lc:
        if any(len(b) > 2 for b in p.blocks):
            raise BlockTooLarge(f"{p} has a block with more than two points")


def _u_image_dotted(p: Partition, N: int) -> tuple[Partition, Scalar]:
    # dotted pair -> pair, singleton -> sqrt(N)·▲
    colors = [EXTRA if p.is_singleton(i) else LINE for i in range(len(p))]
    labels = [("t", i) if c is EXTRA else lab for i, (c, lab) in enumerate(zip(colors, p.labels))]
    q = Partition(colors[: p.k], colors[p.k:], labels)
    n_single = colors.count(EXTRA)
    return q, Scalar(0, 1, N) ** n_single


def u_functor(lc, N: int, sign: str = "+") -> DirectSum:
    """U_{(N,±)} on combinations with blocks of size ≤ 2; output at N−1.

    On pair blocks U does not depend on the sign.
    """
    _sign_value(sign)
    lc = as_lc(lc, N)
    if lc.N != N:
        raise SignatureMismatch(f"combination lives at N={lc.N}, not N={N}")
    _check_u_domain(lc)
    out = DirectSum(N=N - 1, field_=N)
    for p, c in to_dotted_basis(lc).items():
        q, s = _u_image_dotted(p, N)
        out.add(LinearCombination(q.signature, {q: c * s}, N - 1, N))
    return out


def u_inverse(x, N: int) -> LinearCombination:
    """Pair ↦ dotted pair, ▲ ↦ (1/√N)·↓. Input lives at N−1."""
    parts = x.parts.values() if isinstance(x, DirectSum) else [x]
    result = None
    for lc in parts:
        for p, c in lc.items():
            coeffs = {}
            if any(len(b) > 2 for b in p.blocks):
                raise BlockTooLarge(f"{p} has a block with more than two points")
            for i, col in enumerate(p.colors):
                if col is LINE and p.is_singleton(i):
                    raise WrongRegime(f"{p} has a line singleton, which is not in the image of U")
            q = Partition((LINE,) * p.k, (LINE,) * p.l, p.labels)
            n_extra = sum(1 for col in p.colors if col is EXTRA)
            coeffs[q] = Scalar(c.a, c.b, N) * Scalar(0, 1, N).inverse() ** n_extra
            piece = from_dotted_basis(coeffs, q.signature, N)
            result = piece if result is None else result + piece
    if result is None:
        raise SignatureMismatch("u_inverse of an empty sum needs a signature")
    return result


# ------------------------------------------------------- Theorem U check


def _leg_tensor_lhs(ds: DirectSum, N: int) -> dict:
    # Embed C^{N-1} ⊕ C as C^N with ▲ ↦ e_N; index tuples over all points.
    out: dict = {}
    for lc in ds.parts.values():
        for q, c in lc.items():
            line_blocks = sorted({q.labels[i] for i, col in enumerate(q.colors) if col is LINE})
            pos = {b: n for n, b in enumerate(line_blocks)}
            for assign in product(range(N - 1), repeat=len(line_blocks)):
                key = tuple(
                    N - 1 if col is EXTRA else assign[pos[lab]]
                    for col, lab in zip(q.colors, q.labels)
                )
                out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def _leg_tensor_plain(lc: LinearCombination, N: int) -> dict:
    out: dict = {}
    for q, c in lc.items():
        nb = q.num_blocks
        for assign in product(range(N), repeat=nb):
            key = tuple(assign[lab] for lab in q.labels)
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def _apply_leg(t: dict, leg: int, U: ExactMatrix, N: int) -> dict:
    cols: dict[int, list] = {}
    for (a, b), v in U.entries.items():
        cols.setdefault(b, []).append((a, v))
    out: dict = {}
    for key, v in t.items():
        for a, u in cols.get(key[leg], ()):
            nk = key[:leg] + (a,) + key[leg + 1:]
            out[nk] = out.get(nk, 0) + u * v
    return {k: x for k, x in out.items() if x}


def conjugate_by_u(lc: LinearCombination, N: int, sign: str = "+") -> dict:
    """U^{⊗l} T_p U^{*⊗k} as a tensor over all k+l legs (index tuples).

    With real orthogonal U both rows transform by U on every leg.
    """
    U = u_matrix(N, sign)
    t = _leg_tensor_plain(lc, N)
    for leg in range(len(lc.sig[0]) + len(lc.sig[1])):
        t = _apply_leg(t, leg, U, N)
    return t


@dataclass
class TheoremUReport:
    ok: bool | None
    lhs_available: bool
    rhs: dict = field(default_factory=dict)
    witness: object = None

    def __bool__(self):
        return bool(self.ok)


def verify_theorem_u(p, N: int, sign: str = "+") -> TheoremUReport:
    """Check T_{U p} = U^{⊗l} T_p U^{*⊗k} exactly.

    Blocks of size ≥ 3 have no symbolic image here, so only the right-hand
    side is returned for them (ok is None).
    """
    lc = as_lc(p, N)
    rhs = conjugate_by_u(lc, N, sign)
    try:
        _check_u_domain(lc)
    except BlockTooLarge:
        return TheoremUReport(None, False, rhs)
    lhs = _leg_tensor_lhs(u_functor(lc, N, sign), N)
    keys = set(lhs) | set(rhs)
    for k in sorted(keys):
        if lhs.get(k, 0) != rhs.get(k, 0):
            return TheoremUReport(False, True, rhs, (k, lhs.get(k, 0), rhs.get(k, 0)))
    return TheoremUReport(True, True, rhs)


def pair_block_partitions(k: int, l: int):
    """Plain partitions of (k,l) whose blocks have at most two points."""
    from .partition import set_partitions

    for rgs in set_partitions(k + l):
        counts: dict = {}
        for v in rgs:
            counts[v] = counts.get(v, 0) + 1
        if all(c <= 2 for c in counts.values()):
            yield Partition((LINE,) * k, (LINE,) * l, rgs)
