"""Completion of the one-generator example with the relation L1 a = D L0 a.

Run: python demos/bfk_walkthrough.py
"""

from confgsb import (Bounds, complete, enumerate_terminal, find_forks, graded_count, h_basis,
                     hilbert, normal_form, parse_element, preset_bfk, verify_gsb)
from confgsb.confluence import composition

rs = preset_bfk()
print("Starting rules (module part):")
for r in sorted(rs.module.values(), key=rs.rule_sort_key):
    print("   ", r.format(rs.order), "   #", r.name)

# The ambiguity R2 L1 a can be resolved by commuting R2 past L1 or by the
# relation on L1 a.  The two results disagree.
fork = next(f for f in find_forks(rs, 4, 3) if str(f.w) == "R2[a] L1[a] |a")
rep = composition(fork, rs)
print("\nFork", fork.ident())
print("  difference of the two results:", rep.composition)
print("  its normal form:              ", rep.normal_form)
print("  oriented into the new rule:   ", rep.new_rule)

before = verify_gsb(rs, 6, 4)
print(f"\nBefore completion: {before.total} forks, {len(before.failures)} not confluent")

out, log = complete(rs, 6, 4)
print(f"Completion converged after {log.rounds} rounds")
for rnd, _, rule in log.added:
    print(f"  round {rnd}: added {rule.format(out.order)}")
for rnd, rule in log.removed:
    print(f"  round {rnd}: dropped {rule.format(out.order)} (lhs became reducible)")

after = verify_gsb(out, 6, 4)
print(f"After completion: {after.total} forks, {len(after.failures)} not confluent")

print("\nProducts of two copies of a all vanish:")
for text in ("L0[a] L1[a] |a", "L1[a] L0[a] |a", "L1[a] L1[a] |a", "L0[a] L0[a] |a"):
    print(f"  {text:16s} -> {normal_form(parse_element(text), out)}")

b = Bounds(3, 2, 3)
print("\nTerminal monomials within", b, ":")
print("  ", ", ".join(str(m) for m in enumerate_terminal(out, None, b)))
print("  Hilbert series:", hilbert(graded_count(enumerate_terminal(out, None, b))))
print("  basis over k[D]:", ", ".join(str(m) for m in h_basis(out)))
