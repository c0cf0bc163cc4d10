"""Reduction of algebra and module elements to normal form.

The default strategy always rewrites the order-largest reducible monomial at
its leftmost match.  Monomials are kept in a max-heap; once the largest
remaining monomial is terminal it is final, because rewriting smaller
monomials only produces smaller ones.

One-step rewrites are cached per monomial on the rule set (the cache is
cleared whenever a rule is added or removed).
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .elements import AlgebraElement, ModuleElement, act, mul
from .rules import Rule, RuleSet
from .terms import ModuleMonomial

DEFAULT_BUDGET = 10 ** 6
STRATEGIES = ("leftmost-largest", "random")


class NonTermination(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"step budget of {budget} exceeded")
        self.budget = budget


class DescentViolation(AssertionError):
    pass


class ReductionStep(NamedTuple):
    """``before - coeff * left (lhs - rhs) right`` is the element after the step.

    For a module rule ``right`` is empty; for an algebra rule applied to a
    module monomial ``right`` is the word between the match and the generator.
    """

    rule: Rule
    monomial: object
    left: tuple
    right: tuple
    coeff: Fraction

    def relation(self):
        """The element subtracted by this step."""
        rel = self.rule.relation()
        m = self.monomial
        if isinstance(m, ModuleMonomial):
            if self.rule.is_module:
                return act(AlgebraElement.word(*self.left), rel).scale(self.coeff)
            tail = ModuleElement.monomial(ModuleMonomial(self.right, m.gen))
            return act(mul(AlgebraElement.word(*self.left), rel), tail).scale(self.coeff)
        return mul(mul(AlgebraElement.word(*self.left), rel),
                   AlgebraElement.word(*self.right)).scale(self.coeff)

    def format(self, order=None) -> str:
        from .terms import format_monomial, format_word
        m = self.monomial
        shown = format_monomial(m) if isinstance(m, ModuleMonomial) else format_word(m)
        return f"{self.coeff} * [{shown}] by {self.rule.name} at {len(self.left)}"


@dataclass
class Trace:
    steps: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def total(self, kind):
        """Sum of the relations subtracted along the trace."""
        out = kind()
        for s in self.steps:
            out = out + s.relation()
        return out


def _matches(m, rs: RuleSet) -> list:
    """All ``(start, rule)`` matches in a word or module monomial, sorted by start."""
    if isinstance(m, ModuleMonomial):
        found = rs.algebra_matches(m.word) + rs.module_matches(m)
    else:
        found = rs.algebra_matches(m)
    found.sort(key=lambda t: (t[0], t[1].is_module, len(t[1].lhs_word)))
    return found


def _apply(m, start: int, rule: Rule):
    """Result of rewriting monomial ``m`` by ``rule`` at ``start``: (terms, left, right)."""
    if isinstance(m, ModuleMonomial):
        w, g = m.word, m.gen
        left = w[:start]
        if rule.is_module:
            out = {ModuleMonomial(left + r.word, r.gen): c for r, c in rule.rhs.terms.items()}
            return out, left, ()
        right = w[start + len(rule.lhs):]
        out = {ModuleMonomial(left + u + right, g): c for u, c in rule.rhs.terms.items()}
        return out, left, right
    left = m[:start]
    right = m[start + len(rule.lhs):]
    return {left + u + right: c for u, c in rule.rhs.terms.items()}, left, right


def _key_fn(m, rs: RuleSet):
    return rs.order.key if isinstance(m, ModuleMonomial) else rs.order.word_key


def _default_step(m, rs: RuleSet):
    """Cached leftmost rewrite of ``m``: None if terminal, else (rule, terms, left, right)."""
    hit = rs.cache.get(m, False)
    if hit is not False:
        return hit
    found = _matches(m, rs)
    if not found:
        rs.cache[m] = None
        return None
    start, rule = found[0]
    terms, left, right = _apply(m, start, rule)
    key = _key_fn(m, rs)
    top = key(m)
    for k in terms:
        if not key(k) < top:
            raise DescentViolation(f"{rule.name} does not decrease {m}")
    entry = (rule, terms, left, right)
    rs.cache[m] = entry
    return entry


def is_terminal(m, rs: RuleSet) -> bool:
    return not _matches(m, rs)


def reducible_matches(m, rs: RuleSet) -> list:
    return _matches(m, rs)


def _neg(key: tuple) -> tuple:
    return tuple(-k for k in key)


def normal_form(x, rs: RuleSet, strategy: str = "leftmost-largest", seed: int | None = None,
                trace: bool = False, budget: int = DEFAULT_BUDGET):
    """Reduce ``x`` to a terminal element.

    Returns the normal form, or ``(normal_form, Trace)`` when ``trace`` is set.
    """
    if strategy == "leftmost-largest":
        nf, tr = _nf_heap(x, rs, trace, budget)
    elif strategy == "random":
        nf, tr = _nf_random(x, rs, random.Random(seed), trace, budget)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return (nf, tr) if trace else nf


def _nf_heap(x, rs: RuleSet, want_trace: bool, budget: int):
    cls = type(x)
    terms = dict(x.terms)
    if not terms:
        return cls(), Trace()
    key = _key_fn(next(iter(terms)), rs)
    heap = [(_neg(key(m)), m) for m in terms]
    heapq.heapify(heap)
    result = {}
    steps = [] if want_trace else None
    count = 0
    while heap:
        _, m = heapq.heappop(heap)
        c = terms.pop(m, 0)
        if not c:
            continue
        step = _default_step(m, rs)
        if step is None:
            result[m] = c
            continue
        count += 1
        if count > budget:
            raise NonTermination(budget)
        rule, repl, left, right = step
        if steps is not None:
            steps.append(ReductionStep(rule, m, left, right, c))
        for k, v in repl.items():
            old = terms.get(k)
            if old is None:
                terms[k] = c * v
                heapq.heappush(heap, (_neg(key(k)), k))
            else:
                terms[k] = old + c * v
    return cls._raw(result), Trace(steps or [])


def _nf_random(x, rs: RuleSet, rng: random.Random, want_trace: bool, budget: int):
    cls = type(x)
    terms = dict(x.terms)
    steps = []
    count = 0
    terminal = set()
    while True:
        live = [m for m in terms if m not in terminal]
        if not live:
            break
        rng.shuffle(live)
        m = live[0]
        found = _matches(m, rs)
        if not found:
            terminal.add(m)
            continue
        count += 1
        if count > budget:
            raise NonTermination(budget)
        start, rule = rng.choice(found)
        repl, left, right = _apply(m, start, rule)
        key = _key_fn(m, rs)
        top = key(m)
        c = terms.pop(m)
        for k, v in repl.items():
            if not key(k) < top:
                raise DescentViolation(f"{rule.name} does not decrease {m}")
            y = terms.get(k, 0) + c * v
            if y:
                terms[k] = y
            else:
                terms.pop(k, None)
        if want_trace:
            steps.append(ReductionStep(rule, m, left, right, c))
    return cls(terms), Trace(steps)


def reduce_once(x, rs: RuleSet, strategy: str = "leftmost-largest", seed: int | None = None):
    """One rewriting step, or None if ``x`` is terminal."""
    if not x:
        return None
    if strategy == "random":
        rng = random.Random(seed)
        live = [m for m in x.terms if not is_terminal(m, rs)]
        if not live:
            return None
        m = rng.choice(sorted(live, key=_key_fn(live[0], rs)))
        start, rule = rng.choice(_matches(m, rs))
        repl, _, _ = _apply(m, start, rule)
    elif strategy == "leftmost-largest":
        key = _key_fn(next(iter(x.terms)), rs)
        for m in sorted(x.terms, key=key, reverse=True):
            step = _default_step(m, rs)
            if step is not None:
                repl = step[1]
                break
        else:
            return None
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    c = x.terms[m]
    return x - type(x)({m: c}) + type(x)({k: c * v for k, v in repl.items()})


def replay(x, nf, tr: Trace) -> bool:
    """Check ``x - nf`` equals the sum of relations recorded in the trace."""
    return x - nf == tr.total(type(x))


def sample_element(rs: RuleSet, rng: random.Random, max_len: int = 4, terms: int = 3,
                   index_cap: int = 3, coeff_range: int = 5) -> ModuleElement:
    """A random module element over the rule set's letters and generators."""
    from .terms import D, Letter
    decos = rs.builder.letters if rs.builder is not None else rs.order.names
    letters = [D] + [Letter(k, n, a) for k in "LR" for n in range(index_cap + 1) for a in decos]
    gens = rs.order.generators
    out = {}
    for _ in range(terms):
        k = rng.randint(0, max_len)
        m = ModuleMonomial(tuple(rng.choice(letters) for _ in range(k)), rng.choice(gens))
        c = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3))
        out[m] = out.get(m, 0) + c
    return ModuleElement(out)
