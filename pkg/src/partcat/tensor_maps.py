"""Exact matrices T_p on tensor powers of C^N, ranks and functoriality checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterable, Sequence

from .errors import ArityMismatch, SignatureMismatch
from .partition import EXTRA, LINE, Color, Partition, compose, format_signature, involute, tensor
from .scalar import Scalar, format_rational

STANDARD = "standard"
U_TARGET = "u_target"


def color_dim(c: Color, N: int, context: str = STANDARD) -> int:
    if c is EXTRA:
        return 1
    if c is LINE and context == U_TARGET:
        return N - 1
    return N


def word_dim(word: Sequence[Color], N: int, context: str = STANDARD) -> int:
    d = 1
    for c in word:
        d *= color_dim(c, N, context)
    return d



class ExactMatrix:
    """Sparse matrix with exact entries (int, Fraction or Scalar)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ArityMismatch(f"cannot multiply {self.shape} by {other.shape}")
        by_row: dict[int, list] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict = {}
        for (r, m), v in self.entries.items():
            for c, w in by_row.get(m, ()):
                key = (r, c)
                out[key] = out.get(key, 0) + v * w
        return ExactMatrix(self.rows, other.cols, out)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        out = {}
        for (r1, c1), v in self.entries.items():
            for (r2, c2), w in other.entries.items():
                out[(r1 * other.rows + r2, c1 * other.cols + c2)] = v * w
        return ExactMatrix(self.rows * other.rows, self.cols * other.cols, out)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    T = property(transpose)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ArityMismatch(f"cannot add {self.shape} and {other.shape}")
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return ExactMatrix(self.rows, self.cols, out)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + other.scale(-1)

    def scale(self, s) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, {k: v * s for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        # entries never store zeros
        return self.entries == other.entries

    __hash__ = None

    def first_difference(self, other: "ExactMatrix"):
        if self.shape != other.shape:
            return ("shape", self.shape, other.shape)
        for k in sorted(set(self.entries) | set(other.entries)):
            if self[k] != other[k]:
                return k
        return None

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"



def _check_indices(word: Sequence[Color], idx: Sequence[int], N: int) -> list[int | None]:
    """Spread a multi-index over the points of a row.

    ``idx`` either lists one value per point or one value per non-▲ point.
    ▲ points get None.
    """
    idx = list(idx)
    n_line = sum(1 for c in word if c is not EXTRA)
    if len(idx) == len(word):
        return [None if c is EXTRA else v for c, v in zip(word, idx)]
    if len(idx) == n_line:
        it = iter(idx)
        return [None if c is EXTRA else next(it) for c in word]
    raise ArityMismatch(f"multi-index of length {len(idx)} does not fit a row of {len(word)} points")


def delta_p(p: Partition, i: Sequence[int], j: Sequence[int]) -> int:
    """1 iff points in a common block carry equal indices."""
    vals = _check_indices(p.upper, i, 0) + _check_indices(p.lower, j, 0)
    seen: dict[int, int] = {}
    for lab, v in zip(p.labels, vals):
        if v is None:
            continue
        if seen.setdefault(lab, v) != v:
            return 0
    return 1



def partition_matrix(p: Partition, N: int, context: str = STANDARD) -> ExactMatrix:
    up_dims = [color_dim(c, N, context) for c in p.upper]
    low_dims = [color_dim(c, N, context) for c in p.lower]
    rows = 1
    for d in low_dims:
        rows *= d
    cols = 1
    for d in up_dims:
        cols *= d
    colors = p.colors
    active = sorted({lab for lab, c in zip(p.labels, colors) if c is not EXTRA})
    block_dim = {}
    for lab, c in zip(p.labels, colors):
        if c is not EXTRA:
            block_dim[lab] = color_dim(c, N, context)
    pos = {lab: n for n, lab in enumerate(active)}
    # place value of each block in the row and column index
    cw = [0] * len(active)
    place = 1
    for lab, d in zip(reversed(p.labels[: p.k]), reversed(up_dims)):
        if lab in pos:
            cw[pos[lab]] += place
        place *= d
    rw = [0] * len(active)
    place = 1
    for lab, d in zip(reversed(p.labels[p.k:]), reversed(low_dims)):
        if lab in pos:
            rw[pos[lab]] += place
        place *= d
    ranges = [range(block_dim[lab]) for lab in active]
    entries = {}
    for assign in product(*ranges):
        r = sum(a * w for a, w in zip(assign, rw))
        c = sum(a * w for a, w in zip(assign, cw))
        entries[(r, c)] = 1
    return ExactMatrix(rows, cols, entries)


def t_matrix(p, N: int, context: str = STANDARD) -> ExactMatrix:
    """T_p for a partition or a linear combination (extended linearly)."""
    if isinstance(p, Partition):
        return partition_matrix(p, N, context)
    # duck-typed LinearCombination
    up, low = p.sig
    out = ExactMatrix(word_dim(low, N, context), word_dim(up, N, context))
    for part, coeff in p.items():
        out = out + partition_matrix(part, N, context).scale(coeff)
    return out


# ------------------------------------------------------------------ rank

def _content_reduce(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def _to_integer_row(row: dict) -> dict | None:
    """Clear denominators if every entry is rational; None otherwise."""
    vals = {}
    den = 1
    for k, v in row.items():
        if isinstance(v, Scalar):
            if not v.is_rational():
                return None
            v = v.a
        v = Fraction(v)
        vals[k] = v
        den = den * v.denominator // gcd(den, v.denominator)
    return _content_reduce({k: int(v * den) for k, v in vals.items() if v})


def rank(vectors: Iterable[dict]) -> int:
    """Exact rank of sparse vectors (dict key -> exact value)."""
    vectors = [dict((k, v) for k, v in vec.items() if v) for vec in vectors]
    int_rows = [_to_integer_row(v) for v in vectors]
    if all(r is not None for r in int_rows):
        return _rank_integer(int_rows)
    return _rank_field(vectors)


def _rank_integer(rows: list[dict]) -> int:
    # Fraction-free elimination: r <- r*pivot - pivot_row*r[lead], then remove content.
    pivots: dict = {}
    for row in rows:
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                pivots[lead] = row
                break
            a, b = prow[lead], row[lead]
            new = {k: v * a for k, v in row.items()}
            for k, v in prow.items():
                new[k] = new.get(k, 0) - v * b
            row = _content_reduce({k: v for k, v in new.items() if v})
    return len(pivots)


def _rank_field(rows: list[dict]) -> int:
    pivots: dict = {}
    for row in rows:
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                inv = 1 / row[lead] if not isinstance(row[lead], Scalar) else row[lead].inverse()
                pivots[lead] = {k: v * inv for k, v in row.items()}
                break
            f = row[lead]
            new = dict(row)
            for k, v in prow.items():
                new[k] = new.get(k, 0) - v * f
            row = {k: v for k, v in new.items() if v}
    return len(pivots)


def matrix_vector(m: ExactMatrix) -> dict:
    return dict(m.entries)


def mor_dim(gens: Sequence, sig, N: int) -> int:
    """dim span{T_p} over Q(sqrt N) for generators sharing the signature."""
    up, low = tuple(sig[0]), tuple(sig[1])
    vecs = []
    for g in gens:
        gsig = (g.upper, g.lower) if isinstance(g, Partition) else tuple(map(tuple, g.sig))
        if gsig != (up, low):
            raise SignatureMismatch(
                f"generator with signature {format_signature(gsig)} in a family for "
                f"{format_signature((up, low))}"
            )
        vecs.append(t_matrix(g, N).entries)
    return rank(vecs)


# ----------------------------------------------------------- verification

@dataclass
class FunctorReport:
    ok: bool
    checks: dict = field(default_factory=dict)
    witness: object = None

    def __bool__(self):
        return self.ok


def verify_t_functor(p: Partition, q: Partition, N: int) -> FunctorReport:
    """T_{p*} = T_p^t, T_{p⊗q} = T_p ⊗ T_q and N^rl T_{qp} = T_q T_p."""
    if p.lower != q.upper:
        raise SignatureMismatch("p and q are not composable (q below p)")
    tp, tq = t_matrix(p, N), t_matrix(q, N)
    checks = {}
    witness = None
    lhs = t_matrix(involute(p), N)
    checks["involution"] = lhs == tp.T
    if not checks["involution"]:
        witness = ("involution", lhs.first_difference(tp.T))
    kr = t_matrix(tensor(p, q), N)
    checks["tensor"] = kr == tp.kron(tq)
    if not checks["tensor"] and witness is None:
        witness = ("tensor", kr.first_difference(tp.kron(tq)))
    r, loops = compose(q, p)
    left = t_matrix(r, N).scale(N ** loops)
    right = tq @ tp
    checks["composition"] = left == right
    if not checks["composition"] and witness is None:
        witness = ("composition", left.first_difference(right))
    return FunctorReport(all(checks.values()), checks, witness)


def _format_entry(v) -> tuple[str, str]:
    if isinstance(v, Scalar):
        return format_rational(v.a), format_rational(v.b)
    return format_rational(Fraction(v)), "0"


def dump_matrix(m: ExactMatrix, sig, N: int) -> str:
    """``T <sig> N=<n>`` followed by ``row col a b`` lines in index order."""
    lines = [f"T {format_signature(sig)} N={N}"]
    for (r, c) in sorted(m.entries):
        a, b = _format_entry(m.entries[(r, c)])
        lines.append(f"{r} {c} {a} {b}")
    return "\n".join(lines)
