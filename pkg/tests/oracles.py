"""Independent reference implementations used to freeze expected values.

They follow the definitions directly (brute force over index tuples or
union-find over diagram points) and share no code with the package beyond
the Partition value type.
"""

from fractions import Fraction
from itertools import product
from math import comb

import sympy

from partcat.partition import EXTRA, Partition


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def bell(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


class _UF:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def compose_oracle(q, p):
    """Stack q below p: returns (blocks as frozensets of ('u', i)/('l', j), loops)."""
    k, m, l = p.k, p.l, q.l
    # nodes: p upper 0..k-1, middle k..k+m-1, q lower k+m..k+m+l-1
    uf = _UF(k + m + l)
    first = {}
    for i, lab in enumerate(p.labels):
        node = i
        if (("p", lab)) in first:
            uf.union(node, first[("p", lab)])
        else:
            first[("p", lab)] = node
    for i, lab in enumerate(q.labels):
        node = k + i  # q's upper row is the middle
        if ("q", lab) in first:
            uf.union(node, first[("q", lab)])
        else:
            first[("q", lab)] = node
    outer = set(range(k)) | set(range(k + m, k + m + l))
    comps = {}
    for x in range(k + m + l):
        comps.setdefault(uf.find(x), []).append(x)
    loops = 0
    blocks = set()
    for members in comps.values():
        ext = [x for x in members if x in outer]
        if ext:
            blocks.add(frozenset(("u", x) if x < k else ("l", x - k - m) for x in ext))
        else:
            colors = [p.lower[x - k] for x in members]
            if any(c is not EXTRA for c in colors):
                loops += 1
    return blocks, loops


def block_set(p):
    out = set()
    for blk in p.blocks:
        out.add(frozenset(("u", i) if i < p.k else ("l", i - p.k) for i in blk))
    return out


def dims(word, N):
    return [1 if c is EXTRA else N for c in word]


def t_entries(p: Partition, N):
    """{(row, col): 1} straight from the δ_p definition over all index tuples."""
    up, low = dims(p.upper, N), dims(p.lower, N)
    out = {}
    for i in product(*[range(d) for d in up]):
        for j in product(*[range(d) for d in low]):
            vals = list(i) + list(j)
            ok = True
            seen = {}
            for v, lab in zip(vals, p.labels):
                if seen.setdefault(lab, v) != v:
                    ok = False
                    break
            if ok:
                r = 0
                for v, d in zip(j, low):
                    r = r * d + v
                c = 0
                for v, d in zip(i, up):
                    c = c * d + v
                out[(r, c)] = 1
    return out


def sympy_rank(vectors):
    keys = sorted({k for v in vectors for k in v})
    if not vectors or not keys:
        return 0
    rows = [[sympy.Rational(Fraction(v.get(k, 0)).numerator, Fraction(v.get(k, 0)).denominator)
             for k in keys] for v in vectors]
    return sympy.Matrix(rows).rank()
