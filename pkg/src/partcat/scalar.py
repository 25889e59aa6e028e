"""Exact arithmetic in the quadratic field Q(sqrt N)."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational


def _square_root(n: int) -> int | None:
    r = isqrt(n)
    return r if r * r == n else None


class Scalar:
    """a + b*sqrt(N) with rational a, b.

    When N is a perfect square the sqrt part is folded into ``a`` so that
    every value has a single representation.
    """

    __slots__ = ("a", "b", "N")

    def __init__(self, a=0, b=0, N: int = 1):
        if N < 1:
            raise ValueError("N must be a positive integer")
        a = Fraction(a)
        b = Fraction(b)
        root = _square_root(N)
        if root is not None and b:
            a += b * root
            b = Fraction(0)
        self.a = a
        self.b = b
        self.N = N

    @classmethod
    def sqrt(cls, N: int) -> "Scalar":
        return cls(0, 1, N)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.N != self.N and (other.b or self.b):
                raise ValueError(f"mixing Q(sqrt {self.N}) with Q(sqrt {other.N})")
            return other
        if isinstance(other, (int, Rational)):
            return Scalar(other, 0, self.N)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.a + o.a, self.b + o.b, self.N)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.N)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar(self.a - o.a, self.b - o.b, self.N)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.b and not o.b:
            return Scalar(self.a * o.a, 0, self.N)
        a = self.a * o.a + self.b * o.b * self.N
        b = self.a * o.b + self.b * o.a
        return Scalar(a, b, self.N)

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        """The Galois conjugate a - b*sqrt(N)."""
        return Scalar(self.a, -self.b, self.N)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.N

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        if not self.b:
            return Scalar(1 / self.a, 0, self.N)
        n = self.norm()
        return Scalar(self.a / n, -self.b / n, self.N)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Scalar(1, 0, self.N)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if self.b or other.b:
                return self.N == other.N and self.a == other.a and self.b == other.b
            return self.a == other.a
        if isinstance(other, (int, Rational)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.N))

    def is_rational(self) -> bool:
        return not self.b

    def __repr__(self):
        return f"Scalar({self.a}, {self.b}, N={self.N})"

    def __str__(self):
        return format_scalar(self)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(s: Scalar) -> str:
    """Plain text form used by the CLI: ``a``, or ``a+b*sqrtN``."""
    if not s.b:
        return format_rational(s.a)
    sign = "-" if s.b < 0 else "+"
    return f"{format_rational(s.a)}{sign}{format_rational(abs(s.b))}*sqrtN"


def coerce(x, N: int) -> Scalar:
    if isinstance(x, Scalar):
        if x.N != N:
            return Scalar(x.a, x.b, N) if not x.b else _mismatch(x, N)
        return x
    return Scalar(x, 0, N)


def _mismatch(x: Scalar, N: int):
    raise ValueError(f"scalar lives in Q(sqrt {x.N}), expected Q(sqrt {N})")
