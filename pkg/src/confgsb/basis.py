"""Terminal monomials, closed-form bases, an independent dimension oracle and
the PBW comparison.

Bounds are ``(x_degree, d_power, index_cap)``: the x-degree of a monomial is
the number of decorations plus one for the generator, ``d_power`` bounds the
number of ``D`` letters and ``index_cap`` the index of each L/R letter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, product
from typing import NamedTuple, Sequence

from .lie import LieData
from .rules import RuleSet
from .terms import D, L, Letter, ModuleMonomial, R, d_count, index_sum, x_degree

SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class Bounds(NamedTuple):
    x_degree: int
    d_power: int
    index_cap: int

    def check(self) -> "Bounds":
        if min(self) < 0:
            raise ValueError("bounds must be nonnegative")
        return self

    def admits(self, m: ModuleMonomial) -> bool:
        return (x_degree(m) <= self.x_degree and d_count(m.word) <= self.d_power
                and all(p.index <= self.index_cap for p in m.word if p.kind != "D"))


class BoundsNotClosed(ValueError):
    def __init__(self, rule, context):
        super().__init__(f"instance of {rule.name} in context {context} leaves the bounds")
        self.rule = rule
        self.context = context


def graded_count(monomials) -> dict:
    out: dict = {}
    for m in monomials:
        d = x_degree(m)
        out[d] = out.get(d, 0) + 1
    return dict(sorted(out.items()))


def hilbert(counts: dict) -> str:
    """Truncated generating series, e.g. ``2 t + 7 t² + O(t³)``."""
    parts = []
    for d in sorted(counts):
        c = counts[d]
        if c:
            parts.append(f"{c} t" + (str(d).translate(SUPERSCRIPTS) if d != 1 else ""))
    top = max(counts, default=0) + 1
    parts.append("O(t" + (str(top).translate(SUPERSCRIPTS) if top != 1 else "") + ")")
    return " + ".join(parts)


def _decorations(rs: RuleSet):
    return rs.builder.letters if rs.builder is not None else rs.order.names


def enumerate_terminal(rs: RuleSet, X: Sequence[str] | None = None,
                       b: Bounds = Bounds(3, 2, 3), kinds: str = "LR") -> list:
    """Terminal monomials within bounds, ascending in the monomial order.

    Grown by prepending letters to terminal monomials: a monomial with a
    reducible suffix is reducible, so nothing is missed.
    """
    from .rewrite import is_terminal
    b.check()
    gens = tuple(X) if X is not None else rs.order.generators
    letters = [D] + [Letter(k, n, a) for k in kinds for n in range(b.index_cap + 1)
                     for a in _decorations(rs)]
    layer = [ModuleMonomial((), g) for g in gens]
    layer = [m for m in layer if is_terminal(m, rs)]
    out = list(layer)
    while layer:
        nxt = []
        for m in layer:
            for p in letters:
                w = (p,) + m.word
                cand = ModuleMonomial(w, m.gen)
                if not b.admits(cand):
                    continue
                if is_terminal(cand, rs):
                    nxt.append(cand)
        out.extend(nxt)
        layer = nxt
    out.sort(key=rs.order.key)
    return out


# ---------------------------------------------------------------------------
# closed-form bases of free commutative conformal algebras

def _chains(Y, k):
    return combinations_with_replacement(Y, k)


def comconf3_pattern(Y: Sequence[str], b: Bounds) -> list:
    """Basis of the free commutative conformal algebra with locality 3."""
    Y = list(Y)
    rank = {y: i for i, y in enumerate(Y)}
    le = lambda p, q: rank[p] <= rank[q]
    found = set()
    top = b.x_degree - 1  # number of operator letters allowed
    for n in range(top + 1):
        for m in range(top + 1 - n):
            for xs in _chains(Y, n):
                for ys in _chains(Y, m):
                    head = tuple(L(0, x) for x in xs) + tuple(L(1, y) for y in ys)
                    for z in Y:
                        if ys and not le(ys[-1], z):
                            continue
                        # L_2^z u
                        if n + m + 1 <= top and b.index_cap >= 2:
                            for u in Y:
                                if le(z, u):
                                    found.add(ModuleMonomial(head + (L(2, z),), u))
                        for s in range(1, b.d_power + 1):
                            found.add(ModuleMonomial(head + (D,) * s, z))
                        if m != 1:
                            found.add(ModuleMonomial(head, z))
            # L_0^{x_1} ... L_0^{x_n} L_1^y z
            if m == 1:
                for xs in _chains(Y, n):
                    for y, z in product(Y, Y):
                        if n == 0 or le(xs[-1], y) or le(y, z):
                            found.add(ModuleMonomial(tuple(L(0, x) for x in xs) + (L(1, y),), z))
    return [mono for mono in found if b.admits(mono)]


def comconf2_pattern(Y: Sequence[str], b: Bounds) -> list:
    """Basis of the free commutative conformal algebra with locality 2."""
    Y = list(Y)
    rank = {y: i for i, y in enumerate(Y)}
    found = set()
    top = b.x_degree - 1
    for n in range(top + 1):
        for xs in _chains(Y, n):
            head = tuple(L(0, x) for x in xs)
            for z in Y:
                for s in range(b.d_power + 1):
                    found.add(ModuleMonomial(head + (D,) * s, z))
                if n + 1 <= top and b.index_cap >= 1 and (n == 0 or rank[xs[-1]] <= rank[z]):
                    for y in Y:
                        if rank[y] < rank[z]:
                            found.add(ModuleMonomial(head + (L(1, y),), z))
    return [mono for mono in found if b.admits(mono)]


PATTERNS = {2: comconf2_pattern, 3: comconf3_pattern}


# ---------------------------------------------------------------------------
# independent oracle: exact row reduction

def _universe(gens, decorations, kinds, b: Bounds, isum_cap: int) -> list:
    ops = [Letter(k, n, a) for k in kinds for n in range(isum_cap + 1) for a in decorations]
    out = []
    for k in range(b.x_degree):
        for letters in product(ops, repeat=k):
            isum = sum(p.index for p in letters)
            if isum > isum_cap:
                continue
            for s in range(b.d_power + 1):
                for pos in combinations_with_replacement(range(k + 1), s):
                    w = []
                    it = iter(letters)
                    slots = [pos.count(i) for i in range(k + 1)]
                    for i in range(k + 1):
                        w.extend([D] * slots[i])
                        if i < k:
                            w.append(next(it))
                    for g in gens:
                        out.append(ModuleMonomial(tuple(w), g))
    return out


def letter_weight(p: Letter) -> int:
    """``D`` weighs 1, ``L_n`` weighs ``n`` and ``R_n`` weighs ``n + 2``.

    No rule of the shipped presets increases the total weight, so a box
    bounded by x-degree and weight is closed under every relation, including
    the inhomogeneous ``L1 a -> D L0 a``.
    """
    if p.kind == "D":
        return 1
    return p.index + (2 if p.kind == "R" else 0)


def weight(m: ModuleMonomial) -> int:
    return sum(letter_weight(p) for p in m.word)


def _weighted_universe(gens, decorations, kinds, max_x: int, cap: int) -> list:
    ops = [D] + [Letter(k, n, a) for k in kinds for n in range(cap + 1) for a in decorations]
    ops = [p for p in ops if letter_weight(p) <= cap]
    out = []

    def grow(word, w, xdeg):
        for g in gens:
            out.append(ModuleMonomial(word, g))
        for p in ops:
            lw = letter_weight(p)
            dx = 0 if p.kind == "D" else 1
            if w + lw <= cap and xdeg + dx <= max_x:
                grow(word + (p,), w + lw, xdeg + dx)

    grow((), 0, 1)
    return out


def _instances_at(m: ModuleMonomial, rs: RuleSet):
    """Every placement of a rule whose lhs occurs in ``m`` (independent matcher)."""
    w = m.word
    n = len(w)
    for i in range(n):
        for j in range(i + 1, n + 1):
            r = rs.algebra.get(w[i:j])
            if r is not None:
                left, right = w[:i], w[j:]
                yield r, left, right, {ModuleMonomial(left + u + right, m.gen): c
                                       for u, c in r.rhs.terms.items()}
    for i in range(n + 1):
        r = rs.module.get(ModuleMonomial(w[i:], m.gen))
        if r is not None:
            left = w[:i]
            yield r, left, (), {ModuleMonomial(left + v.word, v.gen): c
                                for v, c in r.rhs.terms.items()}


def oracle_dimension(rs: RuleSet, X: Sequence[str] | None = None, b: Bounds = Bounds(3, 2, 3),
                     index_sum_cap: int | None = None, kinds: str = "LR",
                     weight_cap: int | None = None) -> dict:
    """Per-x-degree dimension of the quotient of a closed finite span.

    The span is all monomials within ``b`` whose index sum is at most
    ``index_sum_cap`` (default ``(x_degree - 1) * index_cap``, so every
    monomial with letter indices up to ``index_cap`` is included).  The
    relations are all placements of rule lhs - rhs with the lhs inside the
    span; a placement with a term outside raises :class:`BoundsNotClosed`.
    Ranks are computed by exact elimination with pivots ordered by
    x-degree first, so the per-degree counts are those of the filtration.

    With ``weight_cap`` the span is instead all monomials of x-degree at most
    ``b.x_degree`` and :func:`weight` at most ``weight_cap``; ``d_power`` and
    ``index_cap`` are then ignored.
    """
    b.check()
    gens = tuple(X) if X is not None else rs.order.generators
    if weight_cap is not None:
        rs.ensure(weight_cap, weight_cap)
        universe = _weighted_universe(gens, _decorations(rs), kinds, b.x_degree, weight_cap)
    else:
        S = index_sum_cap if index_sum_cap is not None else (b.x_degree - 1) * b.index_cap
        rs.ensure(S, b.d_power)
        universe = _universe(gens, _decorations(rs), kinds, b, S)
    inside = set(universe)

    def ok(k: ModuleMonomial) -> bool:
        if k in inside:
            return True
        if k.gen not in gens or any(p.kind not in kinds and p.kind != "D" for p in k.word):
            return False
        if weight_cap is not None:
            return x_degree(k) <= b.x_degree and weight(k) <= weight_cap
        return b.admits(k) and index_sum(k.word) <= S

    okey = rs.order.key
    pkey = lambda k: (x_degree(k), okey(k))
    pivots: dict = {}
    for m in universe:
        for rule, left, right, repl in _instances_at(m, rs):
            row = {m: 1}
            for k, c in repl.items():
                if not ok(k):
                    raise BoundsNotClosed(rule, (left, right))
                v = row.get(k, 0) - c
                if v:
                    row[k] = v
                else:
                    row.pop(k, None)
            _insert_row(row, pivots, pkey)
    count = graded_count(universe)
    for lead in pivots:
        d = x_degree(lead)
        count[d] -= 1
    return count


def _insert_row(row: dict, pivots: dict, pkey) -> None:
    while row:
        lead = max(row, key=pkey)
        piv = pivots.get(lead)
        if piv is None:
            c = row[lead]
            pivots[lead] = {k: v / c for k, v in row.items()}
            return
        c = row[lead]
        for k, v in piv.items():
            y = row.get(k, 0) - c * v
            if y:
                row[k] = y
            else:
                row.pop(k, None)


# ---------------------------------------------------------------------------
# PBW comparison

@dataclass
class PBWReport:
    N: int
    bounds: Bounds
    terminal: dict
    pattern: dict
    mismatched: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatched

    def to_dict(self) -> dict:
        return {"N": self.N, "bounds": list(self.bounds),
                "terminal": {str(k): v for k, v in self.terminal.items()},
                "pattern_plus_e": {str(k): v for k, v in self.pattern.items()},
                "mismatched_degrees": self.mismatched,
                "verdict": "pass" if self.ok else "fail"}


def envelope_preset(lie: LieData, N: int, n_max: int = 3) -> RuleSet:
    from .presets import preset_U2, preset_U3
    if N == 3:
        return preset_U3(lie, max(n_max, 3))
    if N == 2:
        return preset_U2(lie, max(n_max, 3))
    raise ValueError("N must be 2 or 3")


def pbw_check(lie: LieData, N: int, b: Bounds) -> PBWReport:
    rs = envelope_preset(lie, N, b.index_cap)
    term = graded_count(enumerate_terminal(rs, None, b))
    pat = graded_count(PATTERNS[N](lie.basis, b))
    pat[1] = pat.get(1, 0) + 1  # the torsion generator
    pat = dict(sorted(pat.items()))
    bad = [d for d in sorted(set(term) | set(pat)) if term.get(d, 0) != pat.get(d, 0)]
    return PBWReport(N, b, term, pat, bad)


def h_basis(rs: RuleSet, X: Sequence[str] | None = None, b: Bounds = Bounds(4, 0, 3)) -> list:
    """Terminal monomials not starting with ``D``: a basis over ``k[D]``.

    Meaningful for rule sets where ``D`` is moved to the left, so that every
    terminal monomial is a power of ``D`` times one of these.
    """
    return [m for m in enumerate_terminal(rs, X, b) if not m.word or m.word[0] != D]
