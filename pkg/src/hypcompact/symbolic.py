"""Exact polynomial vector fields on the closed half-space.

A field is a finite sum of terms ``c * x^a * y^b * d/d(component)`` with
rational ``c`` and ``b``; components are numbered ``1..n`` with ``n`` the
``d/dy`` direction.  Text grammar (``*`` optional, ``-`` or U+2212 for
minus, whitespace ignored)::

    field     = "0" | [sign] term { sign term } ;
    term      = factor { ["*"] factor } ;           (exactly one derivation)
    factor    = number | "(" [sign] number ")" | variable [ "^" exponent ]
              | derivation ;
    number    = digits [ "." digits ] [ "/" digits ] ;
    exponent  = [ "-" ] digits | "(" [sign] number ")" ;
    variable  = "x" digits | "y" ;
    derivation = "d/dx" digits | "d/dy" ;
    sign      = "+" | "-" ;

``str(field)`` prints in this grammar and ``parse_field`` reads it back.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "MAX_EXPONENT",
    "ParseError",
    "PolyVectorField",
    "Term",
    "evaluate_poly",
    "format_monomial",
    "format_term",
    "is_analytic",
    "is_boundary_tangent",
    "monomial_family",
    "non_analytic_terms",
    "parse_field",
    "proj_field_poly",
    "pullback_monomial",
]

MAX_EXPONENT = 10**6


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected: str | None = None):
        self.position = position
        self.expected = expected
        detail = f" (expected {expected})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")


@dataclass(frozen=True, order=True)
class Term:
    component: int
    a: tuple[int, ...]
    b: Fraction
    coeff: Fraction

    @property
    def key(self) -> tuple:
        return (self.component, self.a, self.b)


class PolyVectorField:
    """Normalized sum of monomial terms (no duplicate keys, no zero coefficients)."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Iterable[Term | tuple] = ()):
        if n < 2:
            raise ValueError(f"dimension must be >= 2, got {n}")
        acc: dict[tuple, Fraction] = {}
        for t in terms:
            if not isinstance(t, Term):
                component, coeff, a, b = t
                t = Term(int(component), tuple(int(e) for e in a), Fraction(b), Fraction(coeff))
            if not 1 <= t.component <= n:
                raise ValueError(f"component {t.component} out of range 1..{n}")
            if len(t.a) != n - 1 or any(e < 0 for e in t.a):
                raise ValueError(f"x-exponents {t.a} must be {n - 1} non-negative integers")
            acc[t.key] = acc.get(t.key, Fraction(0)) + t.coeff
        self.n = n
        self._terms = tuple(
            Term(k[0], k[1], k[2], c) for k, c in sorted(acc.items()) if c != 0
        )

    @property
    def terms(self) -> tuple[Term, ...]:
        return self._terms

    def __iter__(self) -> Iterator[Term]:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, self._terms))

    def __add__(self, other: PolyVectorField) -> PolyVectorField:
        self._check(other)
        return PolyVectorField(self.n, self._terms + other._terms)

    def __sub__(self, other: PolyVectorField) -> PolyVectorField:
        return self + (-1) * other

    def __mul__(self, c) -> PolyVectorField:
        c = Fraction(c)
        return PolyVectorField(self.n, [Term(t.component, t.a, t.b, c * t.coeff) for t in self])

    __rmul__ = __mul__

    def __neg__(self):
        return (-1) * self

    def _check(self, other):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, t in enumerate(self._terms):
            body = _format_term(t, self.n)
            if t.coeff < 0:
                parts.append(("-" if i == 0 else " - ") + body)
            else:
                parts.append(("" if i == 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"PolyVectorField(n={self.n}, {str(self)!r})"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {
                    "component": t.component,
                    "coeff": [t.coeff.numerator, t.coeff.denominator],
                    "a": list(t.a),
                    "b": [t.b.numerator, t.b.denominator],
                }
                for t in self
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> PolyVectorField:
        return cls(
            int(data["n"]),
            [
                Term(int(t["component"]), tuple(t["a"]), Fraction(*t["b"]), Fraction(*t["coeff"]))
                for t in data["terms"]
            ],
        )

    @classmethod
    def from_json(cls, text: str) -> PolyVectorField:
        return cls.from_dict(json.loads(text))


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"({q})"


def _format_exponent(b: Fraction) -> str:
    if b.denominator == 1:
        return str(b.numerator)
    return f"({b})"


def _format_term(t: Term, n: int) -> str:
    pieces = []
    c = abs(t.coeff)
    if c != 1:
        pieces.append(_format_fraction(c))
    for i, e in enumerate(t.a, start=1):
        if e == 1:
            pieces.append(f"x{i}")
        elif e:
            pieces.append(f"x{i}^{e}")
    if t.b == 1:
        pieces.append("y")
    elif t.b != 0:
        pieces.append(f"y^{_format_exponent(t.b)}")
    pieces.append("d/dy" if t.component == n else f"d/dx{t.component}")
    return " ".join(pieces)


# --- parser -----------------------------------------------------------------


@dataclass
class _Tok:
    kind: str  # num, var, deriv, op, end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    s = text.replace("−", "-")
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
        elif s.startswith("d/d", i):
            j = i + 3
            if j < len(s) and s[j] == "y":
                toks.append(_Tok("deriv", "y", i))
                i = j + 1
            elif j < len(s) and s[j] == "x":
                k = j + 1
                while k < len(s) and s[k].isdigit():
                    k += 1
                if k == j + 1:
                    raise ParseError("derivation without index", k, "digits after 'd/dx'")
                toks.append(_Tok("deriv", s[j:k], i))
                i = k
            else:
                raise ParseError("bad derivation", j, "'x<digits>' or 'y'")
        elif ch.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            if j < len(s) and s[j] == ".":
                j += 1
                if j >= len(s) or not s[j].isdigit():
                    raise ParseError("malformed decimal", j, "digits")
                while j < len(s) and s[j].isdigit():
                    j += 1
            toks.append(_Tok("num", s[i:j], i))
            i = j
        elif ch == "y":
            toks.append(_Tok("var", "y", i))
            i += 1
        elif ch == "x":
            j = i + 1
            while j < len(s) and s[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable without index", j, "digits after 'x'")
            toks.append(_Tok("var", s[i:j], i))
            i = j
        elif ch in "+-*^()/":
            toks.append(_Tok("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("end", "", len(s)))
    return toks


class _Parser:
    def __init__(self, text: str, n: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.n = n

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str) -> _Tok:
        t = self.tok
        if t.kind != "op" or t.text != op:
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos, repr(op))
        return self.take()

    def is_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def field(self) -> list[Term]:
        terms = []
        sign = 1
        if self.is_op("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        terms.append(self.term(sign))
        while self.is_op("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            terms.append(self.term(sign))
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos, "'+', '-' or end of input")
        return terms

    def number(self) -> Fraction:
        t = self.tok
        if t.kind != "num":
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos, "a number")
        self.take()
        value = Fraction(t.text)
        if self.is_op("/"):
            self.take()
            d = self.tok
            if d.kind != "num" or "." in d.text:
                raise ParseError("bad denominator", d.pos, "an integer")
            self.take()
            if int(d.text) == 0:
                raise ParseError("zero denominator", d.pos)
            value /= int(d.text)
        return value

    def signed_number(self) -> Fraction:
        sign = 1
        if self.is_op("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        return sign * self.number()

    def exponent(self) -> Fraction:
        start = self.tok.pos
        if self.is_op("("):
            self.take()
            value = self.signed_number()
            self.expect_op(")")
        else:
            sign = 1
            if self.is_op("-"):
                self.take()
                sign = -1
            t = self.tok
            if t.kind != "num" or "." in t.text:
                raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos, "an integer exponent")
            self.take()
            value = Fraction(sign * int(t.text))
        if abs(value) > MAX_EXPONENT:
            raise ParseError(f"exponent {value} overflows the limit {MAX_EXPONENT}", start)
        return value

    def term(self, sign: int) -> Term:
        coeff = Fraction(sign)
        a = [0] * (self.n - 1)
        b = Fraction(0)
        component = None
        start = self.tok.pos
        seen = False
        while True:
            t = self.tok
            if t.kind == "num":
                coeff *= self.number()
            elif t.kind == "op" and t.text == "(":
                self.take()
                coeff *= self.signed_number()
                self.expect_op(")")
            elif t.kind == "var":
                self.take()
                e = Fraction(1)
                if self.is_op("^"):
                    self.take()
                    e = self.exponent()
                if t.text == "y":
                    b += e
                else:
                    i = int(t.text[1:])
                    if not 1 <= i <= self.n - 1:
                        raise ParseError(f"unknown variable {t.text} for dimension {self.n}", t.pos)
                    if e.denominator != 1 or e < 0:
                        raise ParseError(f"x-exponents must be non-negative integers, got {e}", t.pos)
                    a[i - 1] += int(e)
            elif t.kind == "deriv":
                self.take()
                if component is not None:
                    raise ParseError("term has two derivations", t.pos)
                if t.text == "y":
                    component = self.n
                else:
                    i = int(t.text[1:])
                    if not 1 <= i <= self.n - 1:
                        raise ParseError(f"unknown component d/d{t.text} for dimension {self.n}", t.pos)
                    component = i
            else:
                if not seen:
                    raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos, "a term")
                break
            seen = True
            if self.is_op("*"):
                self.take()
        if component is None:
            raise ParseError("term has no derivation", start, "'d/dx<i>' or 'd/dy'")
        return Term(component, tuple(a), b, coeff)


def parse_field(text: str, n: int) -> PolyVectorField:
    """Parse a polynomial vector field on the ``n``-dimensional half-space."""
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if text.strip() == "0":
        return PolyVectorField(n)
    return PolyVectorField(n, _Parser(text, n).field())


# --- operations --------------------------------------------------------------


def pullback_monomial(x: PolyVectorField, p: int) -> PolyVectorField:
    """Pull back by ``(x, y) -> (x, y^p)``.

    x-components: ``y^b -> y^(p b)``; y-component: ``beta y^b ->
    (beta/p) y^(p b + 1 - p)`` (chain rule).
    """
    if isinstance(p, bool) or int(p) != p or p <= 0:
        raise ValueError(f"p must be a positive integer, got {p!r}")
    p = int(p)
    out = []
    for t in x:
        if t.component == x.n:
            out.append(Term(t.component, t.a, p * t.b + 1 - p, t.coeff / p))
        else:
            out.append(Term(t.component, t.a, p * t.b, t.coeff))
    return PolyVectorField(x.n, out)


def is_boundary_tangent(x: PolyVectorField) -> bool:
    """True iff the y-component vanishes on ``y = 0`` (every y-term has ``b > 0``)."""
    return all(t.b > 0 for t in x if t.component == x.n)


def non_analytic_terms(x: PolyVectorField) -> list[Term]:
    return [t for t in x if t.b < 0 or t.b.denominator != 1]


def is_analytic(x: PolyVectorField) -> bool:
    return not non_analytic_terms(x)


def format_term(t: Term, n: int) -> str:
    """One term in the text grammar, with its sign."""
    return str(PolyVectorField(n, [t]))


def format_monomial(t: Term, n: int) -> str:
    """The monomial and derivation of a term, without its coefficient."""
    return _format_term(Term(t.component, t.a, t.b, Fraction(1)), n)


def evaluate_poly(x: PolyVectorField, point) -> np.ndarray:
    """Evaluate at a point; integer exponents exactly in rationals, then to float."""
    point = [float(c) for c in point]
    if len(point) != x.n:
        raise ValueError(f"point of length {len(point)} for a field of dimension {x.n}")
    exact = [Fraction(c) for c in point]
    y = exact[-1]
    out = [Fraction(0)] * x.n
    inexact = [0.0] * x.n
    for t in x:
        if y == 0 and t.b < 0:
            raise ZeroDivisionError(f"term with y^{t.b} is singular at y = 0")
        if y < 0 and t.b.denominator != 1:
            raise ValueError("fractional power of a negative height")
        mono = t.coeff
        for xi, e in zip(exact, t.a):
            mono *= xi**e
        if t.b.denominator == 1:
            out[t.component - 1] += mono * y ** int(t.b)
        else:
            inexact[t.component - 1] += float(mono) * float(y) ** float(t.b)
    return np.array([float(o) + r for o, r in zip(out, inexact)])


def proj_field_poly(tag: str, n: int) -> PolyVectorField:
    """Closed-form chart field of a tagged generator as a polynomial field."""
    from .lorentz import _parse_kind

    name, idx = _parse_kind(tag)
    zero = (0,) * (n - 1)

    def unit(i: int, power: int = 1) -> tuple[int, ...]:
        a = [0] * (n - 1)
        a[i - 1] += power
        return tuple(a)

    def mixed(i: int, j: int) -> tuple[int, ...]:
        a = [0] * (n - 1)
        a[i - 1] += 1
        a[j - 1] += 1
        return tuple(a)

    terms: list[tuple] = []
    if name == "H":
        terms = [(i, 2, unit(i), 0) for i in range(1, n)] + [(n, 4, zero, 1)]
    elif name == "X":
        (i,) = idx
        if not 1 <= i <= n - 1:
            raise ValueError(f"X index {i} out of range")
        terms = [(i, 1, zero, 0)]
    elif name == "Y":
        (i,) = idx
        if not 1 <= i <= n - 1:
            raise ValueError(f"Y index {i} out of range")
        terms = [(i, 1, zero, 1), (i, -1, unit(i, 2), 0)]
        for j in range(1, n):
            if j != i:
                terms += [(i, 1, unit(j, 2), 0), (j, -2, mixed(i, j), 0)]
        terms.append((n, -4, unit(i), 1))
    else:
        j, k = idx
        if not 1 <= j < k <= n - 1:
            raise ValueError(f"rotation indices ({j}, {k}) out of range")
        terms = [(j, -1, unit(k), 0), (k, 1, unit(j), 0)]
    return PolyVectorField(n, terms)


def monomial_family(n: int, max_degree: int = 2, max_b: int = 2) -> list[PolyVectorField]:
    """Every single-term field ``x^a y^b d/d(component)`` with ``|a| <= max_degree``, ``b <= max_b``."""
    exps = [a for a in itertools.product(range(max_degree + 1), repeat=n - 1) if sum(a) <= max_degree]
    return [
        PolyVectorField(n, [(c, 1, a, b)])
        for c in range(1, n + 1)
        for a in exps
        for b in range(max_b + 1)
    ]
