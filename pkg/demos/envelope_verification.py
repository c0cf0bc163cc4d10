"""Check the locality-3 and locality-2 envelope rule families at finite caps.

Also shows why two coefficients of the locality-2 family had to be adjusted:
with the coefficients as first written, some compositions fail to reduce to 0.

Run: python demos/envelope_verification.py  (about half a minute)
"""

import time

from confgsb import preset_U2, preset_U3, verify_gsb
from confgsb.lie import abelian, heisenberg, sl2

ALGEBRAS = [("sl2", sl2()), ("abelian2", abelian(2)), ("heisenberg", heisenberg())]


def show(label, rs, deg, index):
    t0 = time.perf_counter()
    rep = verify_gsb(rs, deg, index)
    print(f"  {label:28s} forks={rep.total:6d} skipped={rep.skipped:6d} "
          f"failures={len(rep.failures):4d}  ({time.perf_counter() - t0:.1f} s)")
    return rep


print("Locality 3, index cap 6, ambiguity length <= 5")
for name, lie in ALGEBRAS:
    show(name, preset_U3(lie, 6), 5, 6)

print("\nLocality 2, same caps")
for name, lie in ALGEBRAS:
    show(name, preset_U2(lie, 6), 5, 6)

print("\nLocality 2 with the L1 D^s coefficient fixed at 2 and the e-term of L0 L1 at 1")
for name, lie in ALGEBRAS:
    rep = show(name + " (as first written)", preset_U2(lie, 6, variant="uncorrected"), 5, 6)
    if rep.failures:
        f = rep.failures[0]
        print("     first failing fork:", f.fork.ident())
        print("     leftover normal form:", f.normal_form)

print("\nOnly the L1 D^s coefficient fixed; the e-term of L0 L1 still at 1")
for name, lie in ALGEBRAS:
    rep = show(name + " (l1d-only)", preset_U2(lie, 6, variant="l1d-only"), 5, 6)
    if rep.failures:
        print("     leftover normal forms:", sorted({str(f.normal_form) for f in rep.failures}))
print("\nThe leftovers are central, and heisenberg and abelian2 cannot see the e-term:")
print("<a|[b,c]> vanishes for every triple there.")
