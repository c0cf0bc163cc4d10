"""Terminal-monomial counts of the envelopes against the commutative bases.

The counts depend only on the leading terms of the rules, and those do not
involve the bracket or the form, so sl2 and a 3-dimensional abelian algebra
give the same numbers.

Run: python demos/pbw_counts.py
"""

from confgsb import Bounds, hilbert, pbw_check
from confgsb.basis import comconf3_pattern, enumerate_terminal, oracle_dimension, weight
from confgsb.basis import graded_count
from confgsb.lie import abelian, sl2
from confgsb.presets import preset_U3

b = Bounds(3, 2, 6)
for N in (3, 2):
    for name, lie in (("sl2", sl2()), ("abelian3", abelian(3))):
        rep = pbw_check(lie, N, b)
        print(f"N={N} {name:9s} terminal {hilbert(rep.terminal):26s} "
              f"pattern+e {hilbert(rep.pattern):26s} {'ok' if rep.ok else 'MISMATCH'}")

print("\nThe closed-form basis for one generator, small bounds:")
for m in sorted(comconf3_pattern(["y"], Bounds(2, 2, 2)), key=str):
    print("  ", m)

# Independent count by row reduction, over monomials of x-degree <= 3 and
# weight <= 3 (D weighs 1, L_n weighs n, R_n weighs n + 2).
rs = preset_U3(sl2(), 6)
W = 3
oracle = oracle_dimension(rs, None, Bounds(3, W, W), weight_cap=W)
terminal = graded_count(m for m in enumerate_terminal(rs, None, Bounds(3, W, W))
                        if weight(m) <= W)
print(f"\nsl2, weight <= {W}: row reduction {oracle}, terminal monomials {terminal}")
