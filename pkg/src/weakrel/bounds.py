"""Extended bounds: exact rationals plus a single +inf.

Finite bounds are always ``fractions.Fraction``; the unique infinite bound is
the ``INF`` singleton.  Python's number protocol takes care of mixed
arithmetic because ``Fraction`` returns ``NotImplemented`` for foreign types,
which defers to the reflected methods defined here.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class _Infinity:
    __slots__ = ()
    _instance: "_Infinity | None" = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self) -> int:
        return hash("weakrel.INF")

    def __add__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and other > 0:
            return self
        return NotImplemented

    def __neg__(self):
        raise ArithmeticError("-inf is not a bound")

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        if other is self or isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __le__(self, other) -> bool:
        if other is self:
            return True
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __ge__(self, other) -> bool:
        if other is self or isinstance(other, (int, Fraction)):
            return True
        return NotImplemented


INF = _Infinity()

Bound = Union[Fraction, _Infinity]


def bound(value) -> Bound:
    """Coerce ``value`` (int, Fraction, INF, or a token string) to a Bound."""
    if value is INF:
        return INF
    if isinstance(value, bool):
        raise TypeError("bool is not a bound")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_bound(value)
    raise TypeError(f"cannot use {value!r} as a bound (floats are not allowed)")


def parse_bound(token: str) -> Bound:
    """Parse ``inf``, an integer, or a fraction ``p/q``."""
    tok = token.strip()
    if tok.lower() in ("inf", "+inf"):
        return INF
    try:
        if "/" in tok:
            p, q = tok.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad bound token {token!r}") from exc


def format_bound(b: Bound) -> str:
    if b is INF:
        return "inf"
    if b.denominator == 1:
        return str(b.numerator)
    return f"{b.numerator}/{b.denominator}"


def is_finite(b: Bound) -> bool:
    return b is not INF


def half(b: Bound) -> Bound:
    return b / 2
