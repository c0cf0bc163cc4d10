"""Rewriting rules, rule schemas and rule sets.

A :class:`Rule` is an oriented pair ``lhs -> rhs``.  Algebra rules have a
word on the left and rewrite any occurrence of that word; module rules have
a module monomial ``u x`` on the left and rewrite monomials ``v u x``.

A :class:`RuleSchema` is a family of rules indexed by generator letters and
integers.  A :class:`RuleSet` holds schemas plus explicit rules and
instantiates the schemas lazily: whenever a monomial with a larger letter
index or more ``D`` letters than the current caps is looked up, the caps
grow.  Reduction is therefore never truncated by the caps; only enumeration
(forks, orientation sweeps, listings) is.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .elements import (AlgebraElement, ModuleElement, ZeroElement, as_fraction,
                       format_element, leading, parse_element)
from .lie import LieData
from .terms import (D, Letter, ModuleMonomial, MonomialOrder, ParseError, d_count,
                    format_monomial, format_word, max_index)


class RuleError(ValueError):
    pass


class ConstraintViolated(RuleError):
    pass


class OrientationViolated(RuleError):
    def __init__(self, rule_name: str, detail: str):
        super().__init__(f"{rule_name}: {detail}")
        self.rule_name = rule_name


class DuplicateLhs(RuleError):
    pass


@dataclass(frozen=True)
class Rule:
    lhs: object  # tuple of letters, or ModuleMonomial
    rhs: object  # AlgebraElement or ModuleElement
    name: str = ""

    @property
    def is_module(self) -> bool:
        return isinstance(self.lhs, ModuleMonomial)

    @property
    def lhs_word(self) -> tuple:
        return self.lhs.word if self.is_module else self.lhs

    def lhs_element(self):
        if self.is_module:
            return ModuleElement.monomial(self.lhs)
        return AlgebraElement.word(*self.lhs)

    def relation(self):
        """``lhs - rhs`` as an element."""
        return self.lhs_element() - self.rhs

    def format(self, order: MonomialOrder | None = None) -> str:
        left = format_monomial(self.lhs) if self.is_module else format_word(self.lhs)
        return f"{left} -> {format_element(self.rhs, order)}"

    def __str__(self) -> str:
        return self.format()


def make_rule(lhs, rhs, order: MonomialOrder, name: str = "") -> Rule:
    """Build a rule from a one-term ``lhs`` element, checking orientation."""
    if isinstance(lhs, (ModuleElement, AlgebraElement)):
        if len(lhs) != 1:
            raise OrientationViolated(name, f"lhs must be a single monomial, got {lhs}")
        (key, c), = lhs.terms.items()
        if c != 1:
            rhs = rhs.scale(1 / c)
        lhs = key
    module = isinstance(lhs, ModuleMonomial)
    if module != isinstance(rhs, ModuleElement):
        raise RuleError(f"{name}: lhs and rhs are of different kinds")
    key = order.key if module else order.word_key
    top = key(lhs)
    for m in rhs.terms:
        if not key(m) < top:
            shown = format_monomial(m) if module else format_word(m)
            raise OrientationViolated(name, f"rhs monomial {shown} is not below the lhs")
    return Rule(lhs, rhs, name)


def orient(p, order: MonomialOrder, name: str = "") -> Rule:
    """Turn a nonzero relation into a rule: leading monomial -> -(rest)/lc."""
    if not p:
        raise ZeroElement("cannot orient the zero relation")
    m, c = leading(p, order)
    rest = {k: -v / c for k, v in p.terms.items() if k != m}
    rhs = type(p)(rest)
    return Rule(m, rhs, name)


# ---------------------------------------------------------------------------
# building blocks for schema templates

class Builder:
    """Element constructors bound to a Lie datum (optional) and an order."""

    def __init__(self, order: MonomialOrder, letters: Sequence[str],
                 lie: LieData | None = None):
        self.order = order
        self.letters = tuple(letters)
        self.lie = lie
        self.D = AlgebraElement.word(D)
        self.one = AlgebraElement.one()

    # decorations may be a basis name or a sparse vector {name: coeff}
    @staticmethod
    def _vec(a) -> Mapping:
        return {a: Fraction(1)} if isinstance(a, str) else a

    def L(self, n: int, a, dpow: int = 0) -> AlgebraElement:
        """``L_n`` with decoration ``D^dpow a``; ``L_n^{Dz} = -n L_{n-1}^z``."""
        c = Fraction((-1) ** dpow * math.perm(n, dpow)) if dpow else Fraction(1)
        n -= dpow
        if not c or n < 0:
            return AlgebraElement()
        return AlgebraElement({(Letter("L", n, k),): c * v for k, v in self._vec(a).items()})

    def R(self, n: int, a) -> AlgebraElement:
        if n < 0:
            return AlgebraElement()
        return AlgebraElement({(Letter("R", n, k),): v for k, v in self._vec(a).items()})

    def x(self, a) -> ModuleElement:
        return ModuleElement({ModuleMonomial((), k): v for k, v in self._vec(a).items()})

    @property
    def e(self) -> ModuleElement:
        return ModuleElement.gen(self.lie.central)

    def br(self, a, b) -> dict:
        from .lie import bracket
        return bracket(self.lie, self._vec(a), self._vec(b))

    def ip(self, a, b) -> Fraction:
        from .lie import form_eval
        return form_eval(self.lie, self._vec(a), self._vec(b))

    def rank(self, a: str) -> int:
        return self.order.rank[a]

    def lt(self, a: str, b: str) -> bool:
        return self.order.rank[a] < self.order.rank[b]

    def le(self, a: str, b: str) -> bool:
        return self.order.rank[a] <= self.order.rank[b]


@dataclass(frozen=True)
class IntParam:
    name: str
    low: int = 0
    cap: str = "n"  # "n": bounded by the index cap, "s": by the D cap


@dataclass(frozen=True)
class RuleSchema:
    """A family of rules.

    ``build(builder, **binding)`` returns ``(lhs, rhs)`` elements and
    ``constraint(builder, **binding)`` says whether a binding is admissible.
    Letter parameters range over the builder's letters.
    """

    id: str
    letters: tuple
    ints: tuple
    build: Callable
    constraint: Callable | None = None
    doc: str = ""

    def admissible(self, builder: Builder, binding: Mapping) -> bool:
        for p in self.ints:
            if binding[p.name] < p.low:
                return False
        for a in self.letters:
            if binding[a] not in builder.letters:
                return False
        return self.constraint is None or bool(self.constraint(builder, **binding))

    def bindings(self, builder: Builder, n_max: int, s_max: int) -> Iterable[dict]:
        ranges = [range(p.low, (n_max if p.cap == "n" else s_max) + 1) for p in self.ints]
        for letters in itertools.product(builder.letters, repeat=len(self.letters)):
            for ints in itertools.product(*ranges):
                b = dict(zip(self.letters, letters))
                b.update(zip((p.name for p in self.ints), ints))
                if self.constraint is None or self.constraint(builder, **b):
                    yield b

    def rule_name(self, binding: Mapping) -> str:
        inner = ",".join(f"{k}={binding[k]}" for k in
                         list(self.letters) + [p.name for p in self.ints])
        return f"{self.id}{{{inner}}}"


def instantiate(schema: RuleSchema, binding: Mapping, builder: Builder) -> Rule:
    expected = set(schema.letters) | {p.name for p in schema.ints}
    if set(binding) != expected:
        raise ConstraintViolated(f"{schema.id}: binding keys {sorted(binding)} != {sorted(expected)}")
    if not schema.admissible(builder, binding):
        raise ConstraintViolated(f"{schema.id}: binding {dict(binding)} violates the constraints")
    lhs, rhs = schema.build(builder, **binding)
    return make_rule(lhs, rhs, builder.order, schema.rule_name(binding))


# ---------------------------------------------------------------------------

class RuleSet:
    """Schemas plus explicit rules, indexed by left-hand side.

    ``n_cap`` / ``s_cap`` are the current instantiation caps of the schemas
    (letter index and number of ``D`` letters).  They only ever grow.
    """

    def __init__(self, order: MonomialOrder, builder: Builder | None = None,
                 schemas: Sequence[RuleSchema] = (), rules: Iterable[Rule] = (),
                 name: str = "custom", n_cap: int = 3, s_cap: int = 3):
        self.order = order
        self.builder = builder
        self.schemas = tuple(schemas)
        self.name = name
        self.algebra: dict = {}
        self.module: dict = {}
        self.extra: dict = {}  # lhs -> Rule, rules not coming from schemas
        self.alg_lengths: set = set()
        self.n_cap = -1
        self.s_cap = -1
        self.cache: dict = {}
        if self.schemas:
            self.ensure(n_cap, s_cap)
        for r in rules:
            self.add(r)

    # -- construction ------------------------------------------------------
    def _insert(self, rule: Rule) -> bool:
        table = self.module if rule.is_module else self.algebra
        old = table.get(rule.lhs)
        if old is not None:
            if old.rhs != rule.rhs:
                raise DuplicateLhs(f"{old.name} and {rule.name} share the lhs "
                                   f"{rule.format(self.order).split(' ->')[0]} "
                                   f"with different right-hand sides")
            return False
        table[rule.lhs] = rule
        if not rule.is_module:
            self.alg_lengths.add(len(rule.lhs))
        return True

    def ensure(self, n: int, s: int = 0) -> None:
        """Instantiate every schema up to letter index ``n`` and ``s`` D-letters."""
        if n <= self.n_cap and s <= self.s_cap:
            return
        n = max(n, self.n_cap)
        s = max(s, self.s_cap)
        for schema in self.schemas:
            for b in schema.bindings(self.builder, n, s):
                lhs, rhs = schema.build(self.builder, **b)
                self._insert(make_rule(lhs, rhs, self.order, schema.rule_name(b)))
        self.n_cap, self.s_cap = n, s

    def ensure_for(self, word: Sequence[Letter]) -> None:
        if not self.schemas:
            return
        n = max_index(word)
        s = d_count(word)
        if n > self.n_cap or s > self.s_cap:
            self.ensure(n, s)

    def add(self, rule: Rule) -> bool:
        """Add an explicit rule (orientation is checked)."""
        rule = make_rule(rule.lhs, rule.rhs, self.order, rule.name)
        if rule.is_module:
            self.ensure_for(rule.lhs.word)
        else:
            self.ensure_for(rule.lhs)
        added = self._insert(rule)
        if added:
            self.extra[rule.lhs] = rule
            self.cache.clear()
        return added

    def remove(self, lhs) -> Rule:
        if lhs not in self.extra:
            raise KeyError("only explicit rules can be removed")
        rule = self.extra.pop(lhs)
        table = self.module if rule.is_module else self.algebra
        del table[lhs]
        if not rule.is_module and not any(len(w) == len(lhs) for w in self.algebra):
            self.alg_lengths.discard(len(lhs))
        self.cache.clear()
        return rule

    def copy(self, name: str | None = None) -> "RuleSet":
        new = RuleSet.__new__(RuleSet)
        new.order = self.order
        new.builder = self.builder
        new.schemas = self.schemas
        new.name = name or self.name
        new.algebra = dict(self.algebra)
        new.module = dict(self.module)
        new.extra = dict(self.extra)
        new.alg_lengths = set(self.alg_lengths)
        new.n_cap, new.s_cap = self.n_cap, self.s_cap
        new.cache = {}
        return new

    # -- queries -----------------------------------------------------------
    def __len__(self) -> int:
        return len(self.algebra) + len(self.module)

    def all_rules(self) -> list:
        return list(self.algebra.values()) + list(self.module.values())

    def instances(self, index_cap: int, degree_cap: int) -> list:
        """All rules whose lhs has letter indices <= index_cap and length <= degree_cap."""
        self.ensure(index_cap, degree_cap)
        out = []
        for r in self.all_rules():
            w = r.lhs_word
            if len(w) <= degree_cap and max_index(w) <= index_cap:
                out.append(r)
        out.sort(key=self.rule_sort_key)
        return out

    def rule_sort_key(self, r: Rule) -> tuple:
        if r.is_module:
            return (1, self.order.key(r.lhs), r.name)
        return (0, self.order.word_key(r.lhs), r.name)

    def find_rule(self, name_prefix: str) -> list:
        return [r for r in self.all_rules() if r.name.startswith(name_prefix)]

    def module_matches(self, m: ModuleMonomial) -> list:
        """``(start, rule)`` for module rules matching ``m`` as a suffix."""
        self.ensure_for(m.word)
        w, g = m.word, m.gen
        out = []
        for j in range(len(w) + 1):
            r = self.module.get(ModuleMonomial(w[j:], g))
            if r is not None:
                out.append((j, r))
        return out

    def algebra_matches(self, w: Sequence[Letter]) -> list:
        """``(start, rule)`` for algebra rules occurring in ``w``."""
        self.ensure_for(w)
        out = []
        n = len(w)
        lengths = sorted(self.alg_lengths)
        for i in range(n):
            for k in lengths:
                if i + k > n:
                    break
                r = self.algebra.get(tuple(w[i:i + k]))
                if r is not None:
                    out.append((i, r))
        return out

    def to_text(self) -> str:
        lines = [f"# order: {self.order.name}",
                 f"# generators: {' '.join(self.order.names)}"]
        if self.order.central:
            lines.append(f"# central: {self.order.central}")
        for r in sorted(self.all_rules(), key=self.rule_sort_key):
            lines.append(f"{r.format(self.order)}    # {r.name}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (f"RuleSet({self.name!r}, order={self.order.name}, algebra={len(self.algebra)}, "
                f"module={len(self.module)}, n_cap={self.n_cap}, s_cap={self.s_cap})")


def parse_rules(text: str, order: MonomialOrder, name: str = "file") -> list:
    """Parse ``lhs -> rhs`` lines; ``#`` starts a comment (used as the rule name)."""
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _, comment = raw.partition("#")
        if not body.strip():
            continue
        if "->" not in body:
            raise ParseError(f"line {lineno}: expected 'lhs -> rhs'")
        left, _, right = body.partition("->")
        lhs = parse_element(left)
        rhs = parse_element(right)
        if right.strip() == "0":
            rhs = type(lhs)()
        if type(lhs) is not type(rhs):
            raise ParseError(f"line {lineno}: lhs and rhs are of different kinds")
        rule_name = comment.strip() or f"{name}:{lineno}"
        rules.append(make_rule(lhs, rhs, order, rule_name))
    return rules


def read_header(text: str) -> dict:
    """Order/generator header lines written by :meth:`RuleSet.to_text`."""
    out = {}
    for raw in text.splitlines():
        s = raw.strip()
        if not s.startswith("#"):
            continue
        key, sep, value = s[1:].partition(":")
        if sep and key.strip() in ("order", "generators", "central"):
            out[key.strip()] = value.strip()
    return out


def sweep_orientation(rs: RuleSet, n_max: int, s_max: int | None = None) -> list:
    """Instantiate every schema binding up to the caps; list the violations.

    Each entry is ``(rule name, message)``.
    """
    s_max = n_max if s_max is None else s_max
    bad = []
    for schema in rs.schemas:
        for b in schema.bindings(rs.builder, n_max, s_max):
            try:
                instantiate(schema, b, rs.builder)
            except OrientationViolated as exc:
                bad.append((schema.rule_name(b), str(exc)))
    for r in rs.extra.values():
        try:
            make_rule(r.lhs, r.rhs, rs.order, r.name)
        except OrientationViolated as exc:
            bad.append((r.name, str(exc)))
    return bad
