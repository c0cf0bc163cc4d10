"""Forks, compositions, Groebner-Shirshov verification and completion.

Fork classes (``w`` is the ambiguity):

* algebra-algebra: one algebra lhs inside another, or a proper suffix of
  one equal to a proper prefix of the other; ``w`` is a word.
* algebra-module: an algebra lhs inside the word of a module lhs, a module
  lhs word that is a suffix of an algebra lhs, or a proper suffix of an
  algebra lhs equal to a proper prefix of a module lhs word; ``w`` is a
  module monomial.
* module-module: the word of one module lhs (same generator) is a suffix of
  the other's.

All checks are relative to a degree cap (length of the ambiguity word) and
an index cap (largest letter index in it).  Overlaps that exceed the degree
cap are counted as skipped.
"""

from __future__ import annotations

import multiprocessing
import time
from dataclasses import dataclass, field
from typing import NamedTuple

from .elements import AlgebraElement, ModuleElement, format_element
from .rewrite import _apply, normal_form
from .rules import Rule, RuleSet, orient
from .terms import ModuleMonomial, format_monomial, format_word, max_index


class Fork(NamedTuple):
    kind: str  # "inclusion" or "overlap"
    cls: str  # "algebra-algebra", "algebra-module" or "module-module"
    r1: Rule
    r2: Rule
    w: object  # word or ModuleMonomial
    p1: int
    p2: int

    @property
    def word(self) -> tuple:
        return self.w.word if isinstance(self.w, ModuleMonomial) else self.w

    def descendants(self):
        cls = ModuleElement if isinstance(self.w, ModuleMonomial) else AlgebraElement
        g1 = cls(_apply(self.w, self.p1, self.r1)[0])
        g2 = cls(_apply(self.w, self.p2, self.r2)[0])
        return g1, g2

    def ident(self) -> str:
        shown = format_monomial(self.w) if isinstance(self.w, ModuleMonomial) else format_word(self.w)
        return f"{self.cls}/{self.kind} {shown} [{self.r1.name}@{self.p1} | {self.r2.name}@{self.p2}]"


@dataclass
class CompositionReport:
    fork: Fork
    composition: object
    normal_form: object
    new_rule: Rule | None = None

    @property
    def confluent(self) -> bool:
        return not self.normal_form

    @property
    def verdict(self) -> str:
        return "confluent" if self.confluent else "new-rule"

    def to_dict(self, order=None) -> dict:
        d = {"fork": self.fork.ident(), "verdict": self.verdict,
             "composition": format_element(self.composition, order),
             "normal_form": format_element(self.normal_form, order)}
        if self.new_rule is not None:
            d["new_rule"] = self.new_rule.format(order)
        return d


def _fork_sort_key(rs: RuleSet):
    order = rs.order

    def key(f: Fork):
        wk = order.key(f.w) if isinstance(f.w, ModuleMonomial) else order.word_key(f.w)
        return (len(f.word), f.cls, f.kind, wk, f.r1.name, f.r2.name, f.p1, f.p2)
    return key


def _enumerate(rs: RuleSet, degree_cap: int, index_cap: int):
    """Yield ``(fork, within_caps)`` for every ambiguity among the capped instances."""
    rules = rs.instances(index_cap, degree_cap)
    alg = [r for r in rules if not r.is_module]
    mod = [r for r in rules if r.is_module]
    alg_by_lhs = {r.lhs: r for r in alg}
    mod_by_lhs = {r.lhs: r for r in mod}
    alg_prefix: dict = {}
    for r in alg:
        for k in range(1, len(r.lhs)):
            alg_prefix.setdefault(r.lhs[:k], []).append(r)
    mod_prefix: dict = {}
    for r in mod:
        u = r.lhs.word
        for k in range(1, len(u) + 1):
            mod_prefix.setdefault(u[:k], []).append(r)

    def ok(word) -> bool:
        return len(word) <= degree_cap and max_index(word) <= index_cap

    for r1 in alg:
        u1 = r1.lhs
        n1 = len(u1)
        # inclusions of algebra lhs in algebra lhs
        for i in range(n1):
            for j in range(i + 1, n1 + 1):
                if (i, j) == (0, n1):
                    continue
                r2 = alg_by_lhs.get(u1[i:j])
                if r2 is not None:
                    yield Fork("inclusion", "algebra-algebra", r1, r2, u1, 0, i), ok(u1)
        for k in range(1, n1):
            v = u1[n1 - k:]
            # algebra-algebra overlaps: suffix v of u1 is a proper prefix of u2
            for r2 in alg_prefix.get(v, ()):
                w = u1 + r2.lhs[k:]
                yield Fork("overlap", "algebra-algebra", r1, r2, w, 0, n1 - k), ok(w)
            # algebra-module overlaps: v is a proper prefix of the module word
            for r2 in mod_prefix.get(v, ()):
                u2 = r2.lhs.word
                if len(u2) > k:
                    w = u1 + u2[k:]
                    yield (Fork("overlap", "algebra-module", r1, r2,
                                ModuleMonomial(w, r2.lhs.gen), 0, n1 - k), ok(w))
        # module lhs word is a (possibly improper) nonempty suffix of u1
        for k in range(1, n1 + 1):
            for g in rs.order.generators:
                r2 = mod_by_lhs.get(ModuleMonomial(u1[n1 - k:], g))
                if r2 is not None:
                    yield (Fork("inclusion", "algebra-module", r1, r2,
                                ModuleMonomial(u1, g), 0, n1 - k), ok(u1))
    for r2 in mod:
        u2 = r2.lhs.word
        # algebra lhs inside a module lhs word
        for i in range(len(u2)):
            for j in range(i + 1, len(u2) + 1):
                r1 = alg_by_lhs.get(u2[i:j])
                if r1 is not None:
                    yield Fork("inclusion", "algebra-module", r1, r2, r2.lhs, i, 0), ok(u2)
        # another module lhs is a proper suffix (same generator)
        for j in range(1, len(u2) + 1):
            r3 = mod_by_lhs.get(ModuleMonomial(u2[j:], r2.lhs.gen))
            if r3 is not None:
                yield Fork("inclusion", "module-module", r2, r3, r2.lhs, 0, j), ok(u2)


def find_forks(rs: RuleSet, degree_cap: int, index_cap: int, with_skipped: bool = False):
    """All forks within the caps, in a deterministic order.

    With ``with_skipped`` also return the number of ambiguities left out
    because their word exceeds the caps.
    """
    if degree_cap < 1 or index_cap < 0:
        raise ValueError("caps must be positive")
    seen = set()
    forks = []
    skipped = 0
    for f, inside in _enumerate(rs, degree_cap, index_cap):
        tag = (f.w, f.r1.lhs, f.r2.lhs, f.p1, f.p2)
        if tag in seen:
            continue
        seen.add(tag)
        if inside:
            forks.append(f)
        else:
            skipped += 1
    forks.sort(key=_fork_sort_key(rs))
    return (forks, skipped) if with_skipped else forks


def composition(fork: Fork, rs: RuleSet, budget: int | None = None) -> CompositionReport:
    g1, g2 = fork.descendants()
    p = g1 - g2
    kw = {} if budget is None else {"budget": budget}
    nf = normal_form(p, rs, **kw)
    new = None
    if nf:
        new = orient(nf, rs.order, name=f"comp[{fork.r1.name}|{fork.r2.name}]")
    return CompositionReport(fork, p, nf, new)


# ---------------------------------------------------------------------------
# verification

@dataclass
class VerificationReport:
    preset: str
    degree_cap: int
    index_cap: int
    total: int
    by_class: dict
    failures: list
    skipped: int
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, order=None, timing: bool = False) -> dict:
        d = {"preset": self.preset,
             "caps": {"degree": self.degree_cap, "index": self.index_cap},
             "forks": self.total, "by_class": dict(sorted(self.by_class.items())),
             "skipped": self.skipped, "failures": len(self.failures),
             "failed": [r.to_dict(order) for r in self.failures],
             "verdict": "pass" if self.ok else "fail"}
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


_WORKER_RS = None


def _worker_check(fork):
    rep = composition(fork, _WORKER_RS)
    return None if rep.confluent else rep


def _check_all(forks: list, rs: RuleSet, jobs: int) -> list:
    if jobs <= 1 or len(forks) < 200:
        out = []
        for f in forks:
            rep = composition(f, rs)
            if not rep.confluent:
                out.append(rep)
        return out
    global _WORKER_RS
    _WORKER_RS = rs
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(jobs) as pool:
        results = pool.map(_worker_check, forks, chunksize=max(1, len(forks) // (8 * jobs)))
    _WORKER_RS = None
    return [r for r in results if r is not None]


def verify_gsb(rs: RuleSet, degree_cap: int, index_cap: int, jobs: int = 1) -> VerificationReport:
    t0 = time.perf_counter()
    forks, skipped = find_forks(rs, degree_cap, index_cap, with_skipped=True)
    by_class: dict = {}
    for f in forks:
        k = f"{f.cls}/{f.kind}"
        by_class[k] = by_class.get(k, 0) + 1
    failures = _check_all(forks, rs, jobs)
    return VerificationReport(rs.name, degree_cap, index_cap, len(forks), by_class,
                              failures, skipped, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# completion

class RoundCapExceeded(RuntimeError):
    def __init__(self, rules: RuleSet, log: "CompletionLog"):
        super().__init__(f"no fixpoint after {log.rounds} rounds")
        self.rules = rules
        self.log = log


@dataclass
class CompletionLog:
    rounds: int = 0
    added: list = field(default_factory=list)  # (round, fork ident, rule)
    removed: list = field(default_factory=list)  # (round, rule)

    def __len__(self) -> int:
        return len(self.added) + len(self.removed)

    def to_dict(self, order=None) -> dict:
        return {"rounds": self.rounds,
                "added": [{"round": r, "fork": f, "rule": x.format(order), "name": x.name}
                          for r, f, x in self.added],
                "removed": [{"round": r, "rule": x.format(order), "name": x.name}
                            for r, x in self.removed]}


def _interreduce(rs: RuleSet, round_no: int, log: CompletionLog) -> None:
    """Drop explicit rules whose lhs became reducible and renormalize the rest."""
    changed = True
    while changed:
        changed = False
        for lhs in sorted(rs.extra, key=lambda m: rs.rule_sort_key(rs.extra[m])):
            rule = rs.extra.get(lhs)
            if rule is None:
                continue
            rs.remove(lhs)
            if normal_form(rule.lhs_element(), rs) != rule.lhs_element():
                log.removed.append((round_no, rule))
                rest = normal_form(rule.relation(), rs)
                if rest:
                    new = orient(rest, rs.order, rule.name)
                    rs.add(new)
                    log.added.append((round_no, f"interreduce {rule.name}", new))
                changed = True
                break
            rhs = normal_form(rule.rhs, rs)
            rs.add(Rule(rule.lhs, rhs, rule.name))


def complete(rs: RuleSet, degree_cap: int, index_cap: int, round_cap: int = 20,
             raise_on_cap: bool = True):
    """Knuth-Bendix style completion; returns ``(rules, log)``.

    Candidates are processed one at a time, each reduced by the rules added
    before it.  Schema rules are never removed.
    """
    out = rs.copy(name=f"{rs.name}+completed")
    log = CompletionLog()
    for round_no in range(1, round_cap + 1):
        log.rounds = round_no
        forks = find_forks(out, degree_cap, index_cap)
        added = 0
        for f in forks:
            rep = composition(f, out)
            if rep.confluent:
                continue
            rule = Rule(rep.new_rule.lhs, rep.new_rule.rhs, f"C{round_no}.{added + 1}")
            out.add(rule)
            log.added.append((round_no, f.ident(), rule))
            added += 1
        if not added:
            return out, log
        _interreduce(out, round_no, log)
    if raise_on_cap:
        raise RoundCapExceeded(out, log)
    return out, log
