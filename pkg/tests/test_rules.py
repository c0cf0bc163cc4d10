from fractions import Fraction

import pytest

from confgsb.confluence import complete
from confgsb.elements import AlgebraElement, ModuleElement, ZeroElement, parse_element
from confgsb.lie import abelian, heisenberg, sl2
from confgsb.presets import (_envelope_builder, _schema, _torsion_schemas,
                             envelope_algebra_schemas, preset_AX, preset_bfk,
                             preset_conf_module, preset_U2, preset_U3, u3_basic_schemas,
                             u3_gsb_schemas)
from confgsb.rewrite import normal_form
from confgsb.rules import (ConstraintViolated, DuplicateLhs, OrientationViolated, Rule,
                           RuleSet, instantiate, make_rule, orient, parse_rules,
                           sweep_orientation)
from confgsb.terms import ConformalOrder, EnvelopeOrder, ParseError, parse_monomial


def rule_text(rs, name):
    (r,) = [r for r in rs.all_rules() if r.name == name]
    return r.format(rs.order)


def rhs_of(rs, lhs):
    m = parse_monomial(lhs) if "|" in lhs else parse_element(lhs)
    table = rs.module if "|" in lhs else rs.algebra
    key = m if "|" in lhs else next(iter(m.terms))
    rs.ensure(6, 6)
    return table[key].rhs


def el(text):
    return parse_element(text)


def test_gsb_ds_s2_instance():
    rs = preset_U3(sl2(), 3)
    # a = f > b = e, [f, e] = -h
    assert rhs_of(rs, "L1[f] D D |e") == el(
        "L1[e] D D |f - 4 * L0[e] D |f + 4 * L0[f] D |e + 2 * D |h")
    ab = preset_U3(abelian(2), 3)
    assert rhs_of(ab, "L1[b] D D |a") == el("L1[a] D D |b - 4 * L0[a] D |b + 4 * L0[b] D |a")


def test_gsb_ds_coefficient_grows_with_s():
    rs = preset_U3(abelian(2), 4)
    assert rhs_of(rs, "L1[b] D D D |a") == el(
        "L1[a] D D D |b - 5 * L0[a] D D |b + 5 * L0[b] D D |a")


def test_u2_l1_prime():
    rs = preset_U2(sl2(), 3)
    assert rhs_of(rs, "L1[h] |h") == el("4 * |c")
    assert rhs_of(rs, "L1[e] |e") == ModuleElement()


def test_gsb_01_abelian_has_only_l_terms():
    rs = preset_U3(abelian(3), 3)
    rhs = rhs_of(rs, "L0[c] L1[b] |a")
    assert len(rhs) == 5
    assert all(len(m.word) == 2 and m.gen != "e" for m in rhs.terms)


def test_gsb_01_sl2_form_term():
    rs = preset_U3(sl2(), 3)
    # a=h > b=f > c=e, <h|[f,e]> = <h|-h> = -8
    assert rhs_of(rs, "L0[h] L1[f] |e").coeff(parse_monomial("|c")) == -8


def test_preset_ax_examples():
    rs = preset_AX(abelian(2), 3)
    assert rhs_of(rs, "L2[a] D") == el("D L2[a] + 2 * L1[a]")
    assert rhs_of(rs, "L1[a] L0[b]") == el("L0[b] L1[a]")
    assert rhs_of(rs, "R0[a] D") == el("D R0[a]")
    assert rhs_of(rs, "D L1[a]") == el("L1[a] D - L0[a]")
    assert rhs_of(rs, "R1[b] L2[a]") == el("L2[a] R1[b]")
    g = preset_AX(sl2(), 3)
    # (1, h) > (1, e): L1^h L1^e -> L1^e L1^h + L2^{[h,e]}
    assert rhs_of(g, "L1[h] L1[e]") == el("L1[e] L1[h] + 2 * L2[e]")


def test_preset_conf_locality():
    rs = preset_conf_module(["a", "b"], 2, 3)
    assert normal_form(el("R1[a] |b"), rs) == el("-1 * L1[b] |a")
    assert normal_form(el("R0[a] |b"), rs) == el("L0[b] |a - D L1[b] |a")
    for m in (2, 3):
        assert not normal_form(el(f"R{m}[a] |b"), rs)
    assert rhs_of(rs, "L2[a] |b") == ModuleElement()


def test_preset_conf_nonuniform_locality():
    N = {("a", "a"): 1, ("a", "b"): 3, ("b", "a"): 0, ("b", "b"): 2}
    rs = preset_conf_module(["a", "b"], N, 3)
    assert rhs_of(rs, "L1[a] |a") == ModuleElement()
    assert rhs_of(rs, "L0[b] |a") == ModuleElement()
    with pytest.raises(KeyError):
        rhs_of(rs, "L2[a] |b")
    # upper limit N(b, a) - m < 0 gives the empty sum
    assert rhs_of(rs, "R1[a] |b") == ModuleElement()


def test_preset_u3_examples():
    rs = preset_U3(sl2(), 3)
    assert rhs_of(rs, "D L2[e] |f") == el("L1[e] |f + L1[f] |e - 4 * |c")
    assert rhs_of(rs, "L2[e] L2[f] |h") == ModuleElement()
    assert rhs_of(rs, "L1[e] |c") == ModuleElement()
    assert rhs_of(rs, "R2[h] |c") == ModuleElement()


def test_preset_u2_examples():
    rs = preset_U2(abelian(3), 3)
    for a, b, c in (("a", "a", "b"), ("a", "b", "c"), ("b", "b", "c")):
        assert rhs_of(rs, f"L1[{a}] L1[{b}] |{c}") == ModuleElement()
    with pytest.raises(KeyError):
        rhs_of(rs, "L1[b] L1[a] |c")


def test_preset_u2_l1d_variants():
    corrected = preset_U2(abelian(2), 3)
    uncorrected = preset_U2(abelian(2), 3, variant="uncorrected")
    assert rhs_of(corrected, "L1[a] D |b") == rhs_of(uncorrected, "L1[a] D |b")
    assert rhs_of(corrected, "L1[a] D D |b") == el("3 * L0[a] D |b - L0[b] D |a")
    assert rhs_of(uncorrected, "L1[a] D D |b") == el("2 * L0[a] D |b - L0[b] D |a")


def test_preset_bfk_listed_rules():
    rs = preset_bfk(3)
    assert rhs_of(rs, "L1[a] |a") == el("D L0[a] |a")
    for n in (2, 3):
        assert rhs_of(rs, f"L{n}[a] |a") == ModuleElement()
        assert rhs_of(rs, f"R{n}[a] |a") == ModuleElement()
    assert rhs_of(rs, "R0[a] |a") == el("L0[a] |a - D L1[a] |a")
    assert rhs_of(rs, "R1[a] |a") == el("-1 * L1[a] |a")


def test_orient_examples():
    order = ConformalOrder(["a"])
    r = orient(el("L0[a] L1[a] |a"), order)
    assert r.lhs == parse_monomial("L0[a] L1[a] |a") and not r.rhs
    r = orient(el("L1[a] L1[a] |a + L0[a] L0[a] |a"), order)
    assert r.lhs == parse_monomial("L1[a] L1[a] |a")
    assert r.rhs == el("-1 * L0[a] L0[a] |a")
    r = orient(el("-7/2 * D |a"), order)
    assert r.lhs == parse_monomial("D |a") and not r.rhs
    with pytest.raises(ZeroElement):
        orient(ModuleElement(), order)


def test_make_rule_checks_orientation():
    order = EnvelopeOrder(["a", "b"])
    with pytest.raises(OrientationViolated):
        make_rule(el("L0[a] |b"), el("L1[a] |b"), order, "bad")
    with pytest.raises(OrientationViolated):
        make_rule(el("L0[a] D"), el("D L0[a]"), order, "bad")
    r = make_rule(el("2 * L1[a] |b"), el("L0[a] |b"), order)
    assert r.rhs == el("1/2 * L0[a] |b")


def test_constraint_violated():
    lie = abelian(2)
    B = _envelope_builder(lie)
    (l2,) = [s for s in u3_basic_schemas() if s.id == "L2"]
    with pytest.raises(ConstraintViolated):
        instantiate(l2, {"a": "a", "b": "b"}, B)
    with pytest.raises(ConstraintViolated):
        instantiate(l2, {"a": "b"}, B)
    assert instantiate(l2, {"a": "b", "b": "a"}, B).name == "L2{a=b,b=a}"


def test_instantiation_deterministic():
    B = _envelope_builder(sl2())
    for schema in u3_gsb_schemas():
        for b in list(schema.bindings(B, 3, 3))[:5]:
            assert instantiate(schema, b, B) == instantiate(schema, b, B)


def test_duplicate_lhs():
    rs = preset_bfk(3)
    with pytest.raises(DuplicateLhs):
        rs.add(Rule(parse_monomial("L1[a] |a"), ModuleElement(), "clash"))
    # same rule again is a no-op
    assert not rs.add(Rule(parse_monomial("L1[a] |a"), el("D L0[a] |a"), "again"))


def test_lazy_instantiation():
    rs = preset_bfk(3)
    assert rs.n_cap == 3
    assert normal_form(el("L7[a] |a"), rs) == ModuleElement()
    assert rs.n_cap == 7


def test_parse_rules_and_text_round_trip():
    order = ConformalOrder(["a"])
    text = "L0[a] L0[a] |a -> 0   # kill\nL1[a] L0[a] |a -> 0\n\n# comment only\n"
    rules = parse_rules(text, order)
    assert [r.name for r in rules] == ["kill", "file:2"]
    with pytest.raises(ParseError):
        parse_rules("L0[a] |a => 0", order)
    with pytest.raises(ParseError):
        parse_rules("L0[a] |a -> D L0[a]", order)
    rs = RuleSet(order, rules=rules)
    again = parse_rules(rs.to_text(), order)
    assert {(r.lhs, r.rhs) for r in again} == {(r.lhs, r.rhs) for r in rules}


def test_sweep_is_clean_on_presets():
    for rs in (preset_U3(heisenberg(), 4), preset_U2(sl2(), 4), preset_bfk(4),
               preset_AX(sl2(), 4), preset_conf_module(["a", "b"], 3, 4)):
        assert sweep_orientation(rs, 4) == []


def test_sweep_names_bad_binding():
    B = _envelope_builder(abelian(2))
    bad = _schema("typo", "a", [], lambda B, a: (B.L(0, a) * B.x(a), B.L(1, a) * B.x(a)))
    rs = RuleSet(B.order, B, [], name="t")
    rs.builder, rs.schemas = B, (bad,)
    found = sweep_orientation(rs, 3)
    assert [name for name, _ in found] == ["typo{a=a}", "typo{a=b}"]


def test_u2_relations_follow_from_u3_plus_l2():
    # adding L2 a b -> 0 and R2 a b -> 0 to the locality-3 rules implies every locality-2 rule
    for k in (1, 2):
        lie = abelian(k)
        B = _envelope_builder(lie)
        keep = [s for s in envelope_algebra_schemas() + u3_basic_schemas() + _torsion_schemas()
                + u3_gsb_schemas() if s.id not in ("L2", "R2")]
        kill = [_schema("L2-0", "ab", [], lambda B, a, b: (B.L(2, a) * B.x(b), ModuleElement())),
                _schema("R2-0", "ab", [], lambda B, a, b: (B.R(2, a) * B.x(b), ModuleElement()))]
        rs = RuleSet(B.order, B, keep + kill, name="u3+L2", n_cap=3, s_cap=3)
        out, _ = complete(rs, 4, 3)
        for r in preset_U2(lie, 3).instances(3, 4):
            assert not normal_form(r.relation(), out), r.name


def test_builder_decorations():
    B = _envelope_builder(sl2())
    assert B.L(2, "e", dpow=1) == AlgebraElement({(parse_monomial("L1[e] |e").word[0],): -2})
    assert not B.L(0, "e", dpow=1)
    assert B.L(1, {"e": 2, "h": Fraction(1, 2)}) == el("2 * L1[e] + 1/2 * L1[h]")
