"""Exact-rational linear combinations of words and of module monomials."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .terms import (Letter, ModuleMonomial, MonomialOrder, ParseError,
                    format_monomial, format_word, parse_monomial, parse_word)


class ZeroElement(ValueError):
    """Raised when an operation needs a nonzero element."""


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    raise TypeError(f"not an exact rational: {c!r}")


class _Linear:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for k, c in items:
            c = as_fraction(c)
            if c:
                c = acc.get(k, 0) + c
                if c:
                    acc[k] = c
                else:
                    acc.pop(k, None)
        self.terms = acc
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict):
        # terms already canonical (no zero coefficients)
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coeff(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        return type(other) is type(self) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return self._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = as_fraction(c)
        if not c:
            return self._raw({})
        return self._raw({k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented


class AlgebraElement(_Linear):
    """Element of the free associative algebra: word -> coefficient."""

    __slots__ = ()

    @classmethod
    def word(cls, *letters: Letter) -> "AlgebraElement":
        return cls._raw({tuple(letters): Fraction(1)})

    @classmethod
    def one(cls) -> "AlgebraElement":
        return cls._raw({(): Fraction(1)})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        if isinstance(other, ModuleElement):
            return act(self, other)
        return NotImplemented

    def __pow__(self, k: int) -> "AlgebraElement":
        out = AlgebraElement.one()
        for _ in range(k):
            out = mul(out, self)
        return out

    def __repr__(self) -> str:
        return f"AlgebraElement({format_element(self)!r})"

    __str__ = lambda self: format_element(self)


class ModuleElement(_Linear):
    """Element of the free module: module monomial -> coefficient."""

    __slots__ = ()

    @classmethod
    def monomial(cls, m: ModuleMonomial) -> "ModuleElement":
        return cls._raw({m: Fraction(1)})

    @classmethod
    def gen(cls, name: str) -> "ModuleElement":
        return cls._raw({ModuleMonomial((), name): Fraction(1)})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"ModuleElement({format_element(self)!r})"

    __str__ = lambda self: format_element(self)


def add(x, y):
    return x + y


def scale(c, x):
    return x.scale(c)


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    out: dict = {}
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            w = u + v
            c = out.get(w, 0) + a * b
            if c:
                out[w] = c
            else:
                out.pop(w, None)
    return AlgebraElement._raw(out)


def act(x: AlgebraElement, m: ModuleElement) -> ModuleElement:
    """Left action by concatenation: ``u . (v x) = (uv) x``."""
    out: dict = {}
    for u, a in x.terms.items():
        for mono, b in m.terms.items():
            k = ModuleMonomial(u + mono.word, mono.gen)
            c = out.get(k, 0) + a * b
            if c:
                out[k] = c
            else:
                out.pop(k, None)
    return ModuleElement._raw(out)


def _sort_key(x, order):
    if order is None:
        if isinstance(x, ModuleElement):
            return lambda m: (len(m.word), format_monomial(m))
        return lambda w: (len(w), format_word(w))
    if isinstance(x, ModuleElement):
        return order.key
    return order.word_key


def sorted_terms(x, order: MonomialOrder | None = None, descending: bool = True):
    return sorted(x.terms.items(), key=lambda kv: _sort_key(x, order)(kv[0]),
                  reverse=descending)


def leading(x, order: MonomialOrder):
    """The order-maximal monomial of ``x`` and its coefficient."""
    if not x.terms:
        raise ZeroElement("leading term of zero")
    key = _sort_key(x, order)
    m = max(x.terms, key=key)
    return m, x.terms[m]


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_element(x, order: MonomialOrder | None = None) -> str:
    """``3/2 * L1[a] D |b - 1 * |e``; terms in descending order."""
    if not x.terms:
        return "0"
    fmt = format_monomial if isinstance(x, ModuleElement) else format_word
    parts = []
    for i, (k, c) in enumerate(sorted_terms(x, order)):
        sign = "-" if c < 0 else "+"
        body = f"{_fmt_coeff(abs(c))} * {fmt(k)}"
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def _split_terms(text: str) -> list[tuple[int, str]]:
    out = []
    depth = 0
    sign = 1
    buf: list[str] = []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if depth == 0 and ch in "+-":
            if "".join(buf).strip():
                out.append((sign, "".join(buf)))
                sign = 1
            buf = []
            sign = sign * (-1 if ch == "-" else 1)
            continue
        buf.append(ch)
    if "".join(buf).strip():
        out.append((sign, "".join(buf)))
    return out


def parse_element(text: str):
    """Parse an element; module element iff the text mentions ``|gen``."""
    text = text.strip()
    module = "|" in text
    cls = ModuleElement if module else AlgebraElement
    if text == "0":
        return cls()
    terms = []
    for sign, body in _split_terms(text):
        body = body.strip()
        coeff = Fraction(1)
        if "*" in body:
            head, _, body = body.partition("*")
            try:
                coeff = Fraction(head.strip())
            except ValueError as exc:
                raise ParseError(f"bad coefficient {head!r}") from exc
        else:
            first = body.split(None, 1)
            if first and _is_number(first[0]):
                coeff = Fraction(first[0])
                body = first[1] if len(first) > 1 else "1"
        key = parse_monomial(body) if module else parse_word(body)
        terms.append((key, sign * coeff))
    return cls(terms)


def _is_number(tok: str) -> bool:
    try:
        Fraction(tok)
    except ValueError:
        return False
    return True
