"""Operator letters, words, module monomials and their monomial orders.

The alphabet consists of the derivation ``D`` and the decorated operators
``L_n^a`` / ``R_n^a`` (``n >= 0``, ``a`` a generator name).  A word is a
tuple of letters; a module monomial is a word acting on a single module
generator.

Text syntax (used by the parser, the printer and the CLI)::

    D            the derivation
    L2[a]        L_2^a
    R0[h]        R_0^h
    L1[a] D D |b the monomial L_1^a D^2 b
    |e           the bare generator e

``D^3`` (or ``L0[a]^2``) is accepted as shorthand on input.

Two orders are provided.  :class:`EnvelopeOrder` is deg-lex with the letter
order ``L_0 < L_1 < D < L_2 < L_3 < ... < R_0 < R_1 < ...`` used for the
universal envelopes.  :class:`ConformalOrder` is the order under which the
rules of the free conformal algebra ``M(X, N)`` are written with ``D`` moved
to the left (``L_n D -> D L_n + n L_{n-1}``); see its docstring.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple, Sequence


class Letter(NamedTuple):
    kind: str  # "D", "L" or "R"
    index: int = 0
    deco: str = ""

    def __str__(self) -> str:
        if self.kind == "D":
            return "D"
        return f"{self.kind}{self.index}[{self.deco}]"


D = Letter("D")


def L(n: int, a: str) -> Letter:
    return Letter("L", n, a)


def R(n: int, a: str) -> Letter:
    return Letter("R", n, a)


Word = tuple  # tuple[Letter, ...]


class ModuleMonomial(NamedTuple):
    word: tuple
    gen: str

    def __str__(self) -> str:
        return format_monomial(self)


def check_letter(p: Letter) -> Letter:
    if p.kind == "D":
        if p.index != 0 or p.deco:
            raise ValueError(f"D carries neither index nor decoration: {p!r}")
    elif p.kind in ("L", "R"):
        if p.index < 0 or not p.deco:
            raise ValueError(f"invalid operator letter {p!r}")
    else:
        raise ValueError(f"unknown letter kind {p.kind!r}")
    return p


def x_degree(m: ModuleMonomial) -> int:
    """Number of generator symbols: decorations plus the module generator."""
    return 1 + sum(1 for p in m.word if p.kind != "D")


def d_count(word: Sequence[Letter]) -> int:
    return sum(1 for p in word if p.kind == "D")


def max_index(word: Sequence[Letter]) -> int:
    return max((p.index for p in word if p.kind != "D"), default=0)


def index_sum(word: Sequence[Letter]) -> int:
    return sum(p.index for p in word if p.kind != "D")


def find_occurrences(pattern: Sequence[Letter], w: Sequence[Letter]) -> list[int]:
    """Start positions of ``pattern`` in ``w`` (overlapping matches allowed)."""
    k = len(pattern)
    if k == 0:
        raise ValueError("pattern must be nonempty")
    pattern = tuple(pattern)
    w = tuple(w)
    return [i for i in range(len(w) - k + 1) if w[i:i + k] == pattern]


# ---------------------------------------------------------------------------
# orders

def _sign(x, y) -> int:
    return (x > y) - (x < y)


class MonomialOrder:
    """Base class; subclasses define flat integer sort keys.

    Keys are tuples of ints so that ``key(u) < key(v)`` iff ``u < v``.  Keys
    of module monomials append the rank of the generator to the word key.
    """

    name = "abstract"

    def __init__(self, names: Iterable[str], central: str | None = None):
        self.names = tuple(names)
        self.central = central
        self.rank = {a: i for i, a in enumerate(self.names)}
        if len(self.rank) != len(self.names):
            raise ValueError("generator names must be distinct")
        if central is not None:
            if central in self.rank:
                raise ValueError(f"central element {central!r} clashes with a basis name")
            self.rank[central] = -1
        self._mkeys: dict = {}

    @property
    def generators(self) -> tuple:
        if self.central is None:
            return self.names
        return (self.central,) + self.names

    def letter_key(self, p: Letter) -> tuple:
        raise NotImplementedError

    def word_key(self, w: Sequence[Letter]) -> tuple:
        raise NotImplementedError

    def key(self, m: ModuleMonomial) -> tuple:
        k = self._mkeys.get(m)
        if k is None:
            k = self.word_key(m.word) + (self.rank[m.gen],)
            self._mkeys[m] = k
        return k

    def compare_letters(self, p: Letter, q: Letter) -> int:
        return _sign(self.letter_key(p), self.letter_key(q))

    def compare_words(self, u: Sequence[Letter], v: Sequence[Letter]) -> int:
        return _sign(self.word_key(u), self.word_key(v))

    def compare(self, m1: ModuleMonomial, m2: ModuleMonomial) -> int:
        return _sign(self.key(m1), self.key(m2))

    def __eq__(self, other) -> bool:
        return (type(self) is type(other) and self.names == other.names
                and self.central == other.central)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.names, self.central))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.names)!r}, central={self.central!r})"


class EnvelopeOrder(MonomialOrder):
    """Deg-lex order with ``L_0^a < L_1^a < D < L_2^a < ... < R_0^a < R_1^a < ...``.

    Letters compare by ``(class, rank, decoration)`` where L-letters and ``D``
    form class 0 (``D`` has rank 2, ``L_n`` rank ``n`` for ``n <= 1`` and
    ``n + 1`` otherwise) and R-letters class 1.  So every L-letter is below
    every R-letter.  Words compare by length first, then letterwise.
    Module monomials compare words first, then generators, with the central
    element below every basis generator.
    """

    name = "envelope"

    def letter_key(self, p: Letter) -> tuple:
        if p.kind == "D":
            return (0, 2, -1)
        if p.kind == "L":
            return (0, p.index if p.index <= 1 else p.index + 1, self.rank[p.deco])
        return (1, p.index, self.rank[p.deco])

    def word_key(self, w: Sequence[Letter]) -> tuple:
        key = [len(w)]
        for p in w:
            key.extend(self.letter_key(p))
        return tuple(key)


class ConformalOrder(MonomialOrder):
    """Order for the free conformal algebra presented as an ``A(X)``-module.

    Words compare by the tuple

        (number of L/R letters, number of R letters, sum of indices,
         length, letters lexicographically)

    with letters ordered ``D < L_n^a < R_n^a`` (L and R letters by index,
    then decoration).  Every component before the lexicographic one is
    additive, so the order is compatible with concatenation, and for fixed
    values of them only finitely many words of each length exist, so it is
    a well-order.  Under it ``L_n D -> D L_n + n L_{n-1}``, ``R_m^a b -> sum
    D^s L_{m+s}^b a`` and the relation ``L_1 a -> D L_0 a`` are all oriented.
    """

    name = "conformal"

    def letter_key(self, p: Letter) -> tuple:
        if p.kind == "D":
            return (0, 0, -1)
        return (1 if p.kind == "L" else 2, p.index, self.rank[p.deco])

    def word_key(self, w: Sequence[Letter]) -> tuple:
        deg = nr = isum = 0
        tail = []
        for p in w:
            if p.kind == "D":
                tail.extend((0, 0, -1))
                continue
            deg += 1
            isum += p.index
            if p.kind == "R":
                nr += 1
                tail.extend((2, p.index, self.rank[p.deco]))
            else:
                tail.extend((1, p.index, self.rank[p.deco]))
        return (deg, nr, isum, len(w), *tail)


ORDERS = {"envelope": EnvelopeOrder, "conformal": ConformalOrder}


def compare_letters(p: Letter, q: Letter, order: MonomialOrder) -> int:
    return order.compare_letters(p, q)


def compare_words(u: Sequence[Letter], v: Sequence[Letter], order: MonomialOrder) -> int:
    return order.compare_words(u, v)


def compare_module_monomials(m1: ModuleMonomial, m2: ModuleMonomial,
                             order: MonomialOrder) -> int:
    return order.compare(m1, m2)


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(?:(D)|([LR])(\d+)\[([^\]\s]+)\])(?:\^(\d+))?")


class ParseError(ValueError):
    pass


def parse_word(text: str) -> tuple:
    text = text.strip()
    if text in ("", "1"):
        return ()
    out: list[Letter] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if mt is None:
            raise ParseError(f"cannot parse word at {text[pos:]!r}")
        if mt.group(1):
            p = D
        else:
            p = Letter(mt.group(2), int(mt.group(3)), mt.group(4))
        out.extend([p] * int(mt.group(5) or 1))
        pos = mt.end()
    return tuple(out)


def parse_monomial(text: str) -> ModuleMonomial:
    if "|" not in text:
        raise ParseError(f"module monomial needs a '|gen' suffix: {text!r}")
    head, _, gen = text.rpartition("|")
    gen = gen.strip()
    if not gen or any(c.isspace() for c in gen):
        raise ParseError(f"bad generator in {text!r}")
    return ModuleMonomial(parse_word(head), gen)


def format_word(w: Sequence[Letter]) -> str:
    return " ".join(str(p) for p in w) if w else "1"


def format_monomial(m: ModuleMonomial) -> str:
    if not m.word:
        return f"|{m.gen}"
    return f"{format_word(m.word)} |{m.gen}"
