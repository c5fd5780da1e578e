"""Exact Laurent polynomials and rational functions in v = q^(1/2).

Every invariant in this package lives in Z[v, 1/v] or its fraction field.
Exponents are stored as integers in v, so ``q = v**2`` and ``q^(3/2) = v**3``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Union

__all__ = [
    "HalfLaurent",
    "RatFunc",
    "V",
    "Q",
    "ONE",
    "ZERO",
    "GM",
    "is_laurent_polynomial",
    "has_nonneg_coeffs",
    "eval_at_prime_power",
    "bar_involution",
    "q_power",
    "q_int",
]


# --- dense integer polynomial helpers (coefficient lists, lowest degree first) ---

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _content(a: list[int]) -> int:
    c = 0
    for x in a:
        c = gcd(c, x)
        if c == 1:
            break
    return c


def _primitive(a: list[int]) -> list[int]:
    c = _content(a)
    if a[-1] < 0:
        c = -c
    return [x // c for x in a]


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, bi in enumerate(b):
            r[i + shift] -= lr * bi
        _trim(r)
    return r


def _poly_gcd(a: list[int], b: list[int]) -> list[int]:
    """gcd in Z[v] of two nonzero polynomials, with positive leading coefficient."""
    c = gcd(_content(a), _content(b))
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [c]
        r = _prem(a, b)
        a, b = b, (_primitive(r) if r else r)
    return [c * x for x in a]


def _poly_divexact(a: list[int], b: list[int]) -> Optional[list[int]]:
    """a / b in Z[v] if b divides a exactly, else None."""
    if not a:
        return []
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(r) - 1 < db:
        return None
    quot = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        lead = r[k + db]
        if lead % lb:
            return None
        c = lead // lb
        quot[k] = c
        if c:
            for i, bi in enumerate(b):
                r[i + k] -= c * bi
    if any(r):
        return None
    return quot


# --- HalfLaurent ---------------------------------------------------------------

class HalfLaurent:
    """Sparse element of Z[v, 1/v], stored as {exponent in v: coefficient}."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Union[dict, None] = None):
        if coeffs is None:
            coeffs = {}
        self._c = {int(e): int(c) for e, c in coeffs.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: dict) -> "HalfLaurent":
        obj = cls.__new__(cls)
        obj._c = coeffs
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: int) -> "HalfLaurent":
        return cls._raw({0: c} if c else {})

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "HalfLaurent":
        return cls._raw({e: c} if c else {})

    @classmethod
    def from_dense(cls, coeffs: Iterable[int], low: int = 0) -> "HalfLaurent":
        return cls._raw({low + i: c for i, c in enumerate(coeffs) if c})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._c

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def num_terms(self) -> int:
        return len(self._c)

    def dense(self) -> tuple[int, list[int]]:
        lo, hi = self.min_exp(), self.max_exp()
        out = [0] * (hi - lo + 1)
        for e, c in self._c.items():
            out[e - lo] = c
        return lo, out

    def shift(self, k: int) -> "HalfLaurent":
        if k == 0:
            return self
        return HalfLaurent._raw({e + k: c for e, c in self._c.items()})

    def bar(self) -> "HalfLaurent":
        return HalfLaurent._raw({-e: c for e, c in self._c.items()})

    def __add__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._c)
        for e, c in other._c.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return HalfLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return HalfLaurent._raw({e: -c for e, c in self._c.items()})

    def __sub__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[int, int] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return HalfLaurent._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) == 1:
                (e, c), = self._c.items()
                if c in (1, -1):
                    return HalfLaurent._raw({e * n: c ** (-n)})
            raise ValueError("negative power of a non-unit Laurent polynomial")
        result = ONE_L
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    def __call__(self, v0):
        return sum((Fraction(c) * Fraction(v0) ** e for e, c in self._c.items()), Fraction(0))

    def __repr__(self):
        return f"HalfLaurent({self})"

    def __str__(self):
        return _format_laurent(self)


ONE_L = HalfLaurent._raw({0: 1})
ZERO_L = HalfLaurent._raw({})


def _as_laurent(x):
    if isinstance(x, HalfLaurent):
        return x
    if isinstance(x, int):
        return HalfLaurent.const(x)
    return NotImplemented


def _format_power(e: int) -> str:
    if e % 2 == 0:
        k = e // 2
        if k == 1:
            return "q"
        if k > 1:
            return f"q^{k}"
        return f"q^({k})"
    return f"q^({e}/2)"


def _format_laurent(p: HalfLaurent) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i, (e, c) in enumerate(p.items()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        elif a == 1:
            body = _format_power(e)
        else:
            body = f"{a}*{_format_power(e)}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


# --- RatFunc -------------------------------------------------------------------

Number = Union[int, Fraction]


class RatFunc:
    """Reduced quotient num/den of Laurent polynomials in v.

    Canonical form: gcd(num, den) is a unit, den has lowest v-exponent 0 and a
    positive leading coefficient.  Equality is therefore structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = _coerce_laurent(num)
        den = _coerce_laurent(den)
        if den.is_zero():
            raise ZeroDivisionError("RatFunc with zero denominator")
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: HalfLaurent, den: HalfLaurent) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def from_fraction(cls, x: Number) -> "RatFunc":
        x = Fraction(x)
        return cls._raw(HalfLaurent.const(x.numerator), HalfLaurent.const(x.denominator))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == ONE_L and self.den == ONE_L

    def shift(self, k: int) -> "RatFunc":
        """Multiply by v**k (a unit, so no renormalization needed)."""
        if k == 0 or self.num.is_zero():
            return self
        return RatFunc._raw(self.num.shift(k), self.den)

    def __add__(self, other):
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den == ONE_L and other.den == ONE_L:
            return RatFunc._raw(self.num * other.num, ONE_L)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return ONE / (self ** (-n))
        return RatFunc(self.num ** n, self.den ** n)

    def __eq__(self, other):
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        n = str(self.num)
        if self.den == ONE_L:
            return n
        if self.num.num_terms() > 1:
            n = f"({n})"
        d = str(self.den)
        if self.den.num_terms() > 1:
            d = f"({d})"
        return f"{n}/{d}"

    @classmethod
    def parse(cls, text: str) -> "RatFunc":
        """Inverse of ``str``: reads the canonical text serialization."""
        return _parse_ratfunc(text)


def _coerce_laurent(x) -> HalfLaurent:
    if isinstance(x, HalfLaurent):
        return x
    if isinstance(x, int):
        return HalfLaurent.const(x)
    raise TypeError(f"cannot convert {type(x).__name__} to HalfLaurent")


def _as_ratfunc(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, HalfLaurent):
        return RatFunc._raw(x, ONE_L)
    if isinstance(x, int):
        return RatFunc._raw(HalfLaurent.const(x), ONE_L)
    if isinstance(x, Fraction):
        return RatFunc.from_fraction(x)
    return NotImplemented


def _normalize(num: HalfLaurent, den: HalfLaurent) -> tuple[HalfLaurent, HalfLaurent]:
    if num.is_zero():
        return ZERO_L, ONE_L
    ln, dn = num.dense()
    ld, dd = den.dense()
    g = _poly_gcd(dn, dd)
    if len(g) > 1 or g[0] != 1:
        dn = _poly_divexact(dn, g)
        dd = _poly_divexact(dd, g)
    if dd[-1] < 0:
        dn = [-x for x in dn]
        dd = [-x for x in dd]
    return HalfLaurent.from_dense(dn, ln - ld), HalfLaurent.from_dense(dd, 0)


ONE = RatFunc._raw(ONE_L, ONE_L)
ZERO = RatFunc._raw(ZERO_L, ONE_L)
V = RatFunc._raw(HalfLaurent.monomial(1), ONE_L)
Q = RatFunc._raw(HalfLaurent.monomial(2), ONE_L)
# [G_m]_vir = q^(1/2) - q^(-1/2)
GM = RatFunc._raw(HalfLaurent({1: 1, -1: -1}), ONE_L)


def q_power(half_exp: int) -> RatFunc:
    """v**half_exp, i.e. q^(half_exp/2)."""
    return RatFunc._raw(HalfLaurent.monomial(half_exp), ONE_L)


def q_int(n: int) -> RatFunc:
    """The quantum integer (q^n - 1)/(q - 1) as a Laurent polynomial (any integer n)."""
    if n >= 0:
        return RatFunc._raw(HalfLaurent({2 * k: 1 for k in range(n)}), ONE_L)
    return RatFunc._raw(HalfLaurent({2 * k: -1 for k in range(n, 0)}), ONE_L)


# --- module-level operations -------------------------------------------------------

def is_laurent_polynomial(a) -> Optional[HalfLaurent]:
    """The Laurent polynomial equal to ``a``, or None if the denominator survives."""
    a = _as_ratfunc(a)
    if a.den == ONE_L:
        return a.num
    return None


def has_nonneg_coeffs(p) -> bool:
    if isinstance(p, RatFunc):
        p = is_laurent_polynomial(p)
        if p is None:
            raise ValueError("has_nonneg_coeffs expects a Laurent polynomial")
    return all(c >= 0 for c in p.coeffs.values())


def _eval_half(p: HalfLaurent, q0: Fraction, v0: Optional[Fraction]) -> Fraction:
    if v0 is not None:
        return p(v0)
    total = Fraction(0)
    for e, c in p.coeffs.items():
        if e % 2:
            raise ValueError("odd power of q^(1/2) needs an explicit square root v0")
        total += c * q0 ** (e // 2)
    return total


def eval_at_prime_power(a, q0: Number, v0: Optional[Number] = None) -> Fraction:
    """Exact value of ``a`` at q = q0.

    If ``v0`` is given it must satisfy v0**2 == q0 and is substituted for
    q^(1/2); otherwise every exponent must be an integer power of q.
    """
    a = _as_ratfunc(a)
    q0 = Fraction(q0)
    if v0 is not None:
        v0 = Fraction(v0)
        if v0 * v0 != q0:
            raise ValueError(f"v0={v0} is not a square root of q0={q0}")
    num = _eval_half(a.num, q0, v0)
    den = _eval_half(a.den, q0, v0)
    if den == 0:
        raise ZeroDivisionError(f"denominator vanishes at q={q0}")
    return num / den


def bar_involution(a) -> RatFunc:
    """Substitute v -> 1/v."""
    a = _as_ratfunc(a)
    return RatFunc(a.num.bar(), a.den.bar())


# --- parsing -----------------------------------------------------------------------

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+)(?:\*(?=q))?)?
        (?P<q>q(?:\^(?:(?P<int>\d+)|\((?P<num>-?\d+)(?:/(?P<den>2))?\)))?)?
    """,
    re.VERBOSE,
)


def _parse_laurent(text: str) -> HalfLaurent:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    if text == "0":
        return ZERO_L
    out: dict[int, int] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or not (m.group("coef") or m.group("q")):
            raise ValueError(f"cannot parse Laurent polynomial {text!r} at {pos}")
        c = int(m.group("coef") or 1)
        if m.group("sign") == "-":
            c = -c
        e = 0
        if m.group("q"):
            if m.group("int"):
                e = 2 * int(m.group("int"))
            elif m.group("num"):
                e = int(m.group("num")) * (1 if m.group("den") else 2)
            else:
                e = 2
        out[e] = out.get(e, 0) + c
        pos = m.end()
    return HalfLaurent(out)


def _split_fraction(text: str) -> tuple[str, Optional[str]]:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return text[:i], text[i + 1:]
    return text, None


def _parse_ratfunc(text: str) -> RatFunc:
    num, den = _split_fraction(text.strip())
    n = _parse_laurent(num)
    d = _parse_laurent(den) if den is not None else ONE_L
    return RatFunc(n, d)
