from functools import lru_cache
from itertools import product

import pytest

from confgsb.confluence import (RoundCapExceeded, complete, composition, find_forks,
                                verify_gsb)
from confgsb.elements import ModuleElement, parse_element
from confgsb.lie import abelian, heisenberg, sl2
from confgsb.presets import preset_bfk, preset_conf_module, preset_U2, preset_U3
from confgsb.rewrite import ReductionStep, normal_form
from confgsb.rules import Rule, RuleSet
from confgsb.terms import D, ConformalOrder, Letter, ModuleMonomial, parse_monomial


def el(text):
    return parse_element(text)


def forks_at(rs, w, deg=4, idx=3):
    m = parse_monomial(w)
    return [f for f in find_forks(rs, deg, idx) if f.w == m]


@lru_cache(maxsize=None)
def bfk_completed():
    return complete(preset_bfk(), 6, 4)


def test_bfk_fork_r2l1():
    rs = preset_bfk()
    (f,) = forks_at(rs, "R2[a] L1[a] |a")
    assert {f.r1.name, f.r2.name} == {"RL{a=a,b=a,m=2,n=1}", "BFK{}"}
    rep = composition(f, rs)
    assert rep.verdict == "new-rule"
    # the composition is a multiple of L0 L1 a: -2 L0 L1 a up to the sign convention
    assert rep.normal_form in (normal_form(el("2 * L0[a] L1[a] |a"), rs),
                               normal_form(el("-2 * L0[a] L1[a] |a"), rs))
    grown = rs.copy()
    grown.add(rep.new_rule)
    assert not normal_form(el("L0[a] L1[a] |a"), grown)


def test_bfk_fork_l3l1():
    rs = preset_bfk()
    reps = [composition(f, rs) for f in forks_at(rs, "L3[a] L1[a] |a")]
    six = normal_form(el("6 * L1[a] L1[a] |a"), rs)
    assert any(r.normal_form in (six, -six) for r in reps)


def test_u3_fork_dl1_gsb12_confluent():
    rs = preset_U3(abelian(3), 3)
    found = forks_at(rs, "D L1[c] L2[a] |b")
    names = {frozenset((f.r1.name.split("{")[0], f.r2.name.split("{")[0])) for f in found}
    assert frozenset(("dL1", "GSB-1.2")) in names
    assert all(composition(f, rs).confluent for f in found)
    g = preset_U3(sl2(), 3)
    assert all(composition(f, g).confluent for f in forks_at(g, "D L1[h] L2[e] |f"))


def test_disjoint_rules_have_no_forks():
    order = ConformalOrder(["a", "b"])
    rs = RuleSet(order, rules=[Rule(parse_monomial("L1[a] |a"), ModuleElement(), "x"),
                               Rule(parse_monomial("L0[b] |b"), ModuleElement(), "y")])
    assert find_forks(rs, 6, 3) == []


def test_verify_bfk_before_completion_fails():
    rep = verify_gsb(preset_bfk(), 6, 4)
    assert not rep.ok
    assert any("R2[a] L1[a] |a" in r.fork.ident() for r in rep.failures)
    assert rep.to_dict()["verdict"] == "fail"


def test_complete_bfk():
    out, log = bfk_completed()
    assert log.rounds <= 20
    for m in ("L0[a] L1[a] |a", "L1[a] L0[a] |a", "L1[a] L1[a] |a", "L0[a] L0[a] |a"):
        assert not normal_form(el(m), out)
    assert verify_gsb(out, 6, 4).ok


def test_complete_fixpoint():
    out, _ = bfk_completed()
    again, log = complete(out, 6, 4)
    assert log.rounds == 1 and len(log) == 0
    assert set(again.extra) == set(out.extra)
    rs = preset_U3(abelian(2), 3)
    _, log = complete(rs, 4, 3)
    assert len(log) == 0


def test_round_cap():
    with pytest.raises(RoundCapExceeded) as info:
        complete(preset_bfk(), 6, 4, round_cap=1)
    assert info.value.log.rounds == 1 and info.value.rules.extra
    rules, log = complete(preset_bfk(), 6, 4, round_cap=1, raise_on_cap=False)
    assert log.rounds == 1


def placed(rule, w, pos):
    """The relation of ``rule`` placed at ``pos`` in ``w``."""
    word = w.word if isinstance(w, ModuleMonomial) else w
    left = word[:pos]
    right = () if rule.is_module else word[pos + len(rule.lhs):]
    return ReductionStep(rule, w, left, right, 1).relation()


def test_composition_is_a_consequence():
    # g1 - g2 = placed(r2) - placed(r1), and nf = (g1 - g2) - trace total
    rs = preset_bfk()
    for f in find_forks(rs, 4, 3):
        g1, g2 = f.descendants()
        assert g1 - g2 == placed(f.r2, f.w, f.p2) - placed(f.r1, f.w, f.p1)
        nf, tr = normal_form(g1 - g2, rs, trace=True)
        assert nf == (g1 - g2) - tr.total(type(g1))


def test_completion_soundness():
    # every added rule reduces to zero under the input rules plus the rules added before it
    out, log = bfk_completed()
    rs = preset_bfk()
    for _, _, rule in log.added:
        rel = rule.relation()
        assert not normal_form(rel, out)
        rs.add(rule) if normal_form(rel, rs) else None
    for r in out.extra.values():
        assert not normal_form(r.relation(), rs)


def test_monotone_caps():
    rs = preset_U3(abelian(2), 4)
    key = lambda f: (f.w, f.r1.lhs, f.r2.lhs, f.p1, f.p2)
    small = {key(f) for f in find_forks(rs, 3, 2)}
    big = {key(f) for f in find_forks(rs, 4, 3)}
    assert small <= big


def test_skipped_counted():
    forks, skipped = find_forks(preset_bfk(), 2, 2, with_skipped=True)
    assert skipped > 0 and forks
    with pytest.raises(ValueError):
        find_forks(preset_bfk(), 0, 2)


def brute_force_forks(rs, alphabet, max_len, gens):
    """Pairs of distinct rule placements jointly covering an ambiguity."""
    found = set()
    for n in range(1, max_len + 1):
        for w in product(alphabet, repeat=n):
            alg = [(i, i + k, rs.algebra[w[i:i + k]]) for i in range(n)
                   for k in range(1, n - i + 1) if w[i:i + k] in rs.algebra]
            # algebra-algebra on plain words
            for (i1, j1, r1), (i2, j2, r2) in product(alg, alg):
                if (i1, j1) == (i2, j2) or min(i1, i2) != 0 or max(j1, j2) != n:
                    continue
                if max(i1, i2) >= min(j1, j2):
                    continue
                found.add((w, frozenset({(r1.lhs, i1), (r2.lhs, i2)})))
            for g in gens:
                m = ModuleMonomial(w, g)
                mod = [(j, n + 1, rs.module[ModuleMonomial(w[j:], g)]) for j in range(n + 1)
                       if ModuleMonomial(w[j:], g) in rs.module]
                spans = alg + mod
                for (i1, j1, r1), (i2, j2, r2) in product(spans, spans):
                    if not (r1.is_module or r2.is_module):
                        continue
                    if (i1, j1) == (i2, j2) or min(i1, i2) != 0 or max(j1, j2) != n + 1:
                        continue
                    if max(i1, i2) >= min(j1, j2):
                        continue
                    found.add((m, frozenset({(r1.lhs, i1), (r2.lhs, i2)})))
    return found


def reported(rs, deg, idx):
    return {(f.w, frozenset({(f.r1.lhs, f.p1), (f.r2.lhs, f.p2)}))
            for f in find_forks(rs, deg, idx)}


@pytest.mark.parametrize("make,decos,gens", [
    (lambda: preset_bfk(2), "a", "a"),
    (lambda: preset_conf_module(["a", "b"], 1, 2), "ab", "ab"),
    (lambda: preset_U3(abelian(1), 3), "a", "ea"),
    (lambda: preset_U2(abelian(2), 3), "ab", "eab"),
])
def test_fork_enumeration_complete(make, decos, gens):
    rs = make()
    idx = 2
    rs.ensure(idx, 4)
    alphabet = [D] + [Letter(k, n, a) for k in "LR" for n in range(idx + 1) for a in decos]
    # restrict the tables to the capped instances used by find_forks
    capped = RuleSet(rs.order, rules=rs.instances(idx, 4))
    expect = reported(rs, 4, idx)
    assert expect
    assert brute_force_forks(capped, alphabet, 4, gens) == expect


def test_u2_l1d_only_variant_fails_only_through_the_form():
    # with the e-term coefficient left at 1 the leftover normal forms are central
    rep = verify_gsb(preset_U2(sl2(), 6, variant="l1d-only"), 5, 6)
    assert rep.failures
    assert all(set(f.normal_form.terms) == {ModuleMonomial((), "c")} for f in rep.failures)
    for lie in (abelian(2), heisenberg()):
        assert verify_gsb(preset_U2(lie, 6, variant="l1d-only"), 5, 6).ok
