"""Built-in acceptance checks, runnable as ``python -m confgsb selftest``."""

from __future__ import annotations

import random
import time
import traceback

from .basis import (Bounds, PATTERNS, envelope_preset, enumerate_terminal, graded_count,
                    h_basis, oracle_dimension, pbw_check)
from .confluence import complete, verify_gsb
from .lie import abelian, heisenberg, sl2
from .presets import preset_bfk, preset_conf_module, preset_U2, preset_U3
from .rewrite import normal_form, sample_element
from .rules import sweep_orientation
from .terms import ModuleMonomial


def check_bfk():
    out, log = complete(preset_bfk(), 6, 4, 20)
    basis = {str(m) for m in h_basis(out, None, Bounds(4, 0, 4))}
    rep = verify_gsb(out, 6, 4)
    ok = basis == {"|a", "L0[a] |a"} and rep.ok
    return ok, f"rounds={log.rounds} basis={sorted(basis)} failures={len(rep.failures)}"


def check_verify(N, quick):
    algebras = [abelian(2)] if quick else [sl2(), abelian(2), heisenberg()]
    n_max, deg = (4, 4) if quick else (6, 5)
    parts, ok = [], True
    for lie in algebras:
        rs = preset_U3(lie, n_max) if N == 3 else preset_U2(lie, n_max)
        rep = verify_gsb(rs, deg, n_max)
        ok &= rep.ok
        parts.append(f"{''.join(lie.basis)}:{rep.total}/{len(rep.failures)}")
    return ok, " ".join(parts)


def check_basis(quick):
    ok, parts = True, []
    for N in (2, 3):
        for k in ((1,) if quick else (1, 2)):
            lie = abelian(k)
            rs = envelope_preset(lie, N)
            b = Bounds(3, 2, N - 1)
            term = graded_count(m for m in enumerate_terminal(rs, None, b) if m.gen != lie.central)
            pat = graded_count(PATTERNS[N](lie.basis, b))
            orc = oracle_dimension(rs, None, b)
            orc[1] -= 1  # the torsion generator
            ok &= term == pat == orc
            parts.append(f"N={N},|Y|={k}:{term == pat == orc}")
    return ok, " ".join(parts)


def check_pbw():
    b = Bounds(3, 2, 6)
    ok, parts = True, []
    for N in (3, 2):
        r1 = pbw_check(sl2(), N, b)
        r2 = pbw_check(abelian(3), N, b)
        ok &= r1.ok and r1.terminal == r2.terminal
        parts.append(f"N={N}:{r1.terminal}")
    return ok, " ".join(parts)


def _verified_presets(quick):
    out = [("u3-sl2", preset_U3(sl2(), 4)), ("u2-sl2", preset_U2(sl2(), 4))]
    bfk, _ = complete(preset_bfk(), 6, 4, 20)
    out.append(("bfk-completed", bfk))
    if not quick:
        out += [("u3-heis", preset_U3(heisenberg(), 4)), ("u2-abel", preset_U2(abelian(2), 4)),
                ("conf", preset_conf_module(["a", "b"], 2, 4))]
    return out


def check_confluence(quick):
    n_elems = 20 if quick else 200
    bad = 0
    for name, rs in _verified_presets(quick):
        rng = random.Random(name)
        for _ in range(n_elems):
            x = sample_element(rs, rng, max_len=4, terms=3, index_cap=3)
            ref = normal_form(x, rs)
            for seed in range(5):
                if normal_form(x, rs, strategy="random", seed=seed) != ref:
                    bad += 1
    return bad == 0, f"disagreements={bad}"


def check_orientation():
    bad = []
    for lie in (sl2(), abelian(3), heisenberg()):
        for rs in (preset_U3(lie, 6), preset_U2(lie, 6)):
            bad += sweep_orientation(rs, 6)
    for rs in (preset_bfk(6), preset_conf_module(["a", "b", "c"], 2, 6)):
        bad += sweep_orientation(rs, 6)
    return not bad, f"violations={len(bad)}" + (f" first={bad[0][0]}" if bad else "")


def reduced_lhs(rs, lhs_set):
    """The members of ``lhs_set`` none of whose proper subpatterns is a rule lhs."""
    out = set()
    for m in lhs_set:
        w = m.word
        proper = any(rs.algebra.get(w[i:j]) is not None
                     for i in range(len(w)) for j in range(i + 1, len(w) + 1))
        proper |= any(rs.module.get(ModuleMonomial(w[i:], m.gen)) is not None
                      for i in range(1, len(w) + 1))
        if not proper:
            out.add(m)
    return out


def gsb_target_lhs(lie, degree_cap: int, s_cap: int = 3, index_cap: int = 3) -> set:
    full = preset_U3(lie, index_cap)
    lhs = set()
    for r in full.instances(index_cap, degree_cap):
        if not r.name.startswith("GSB-"):
            continue
        if r.name.startswith("GSB-Ds") and int(r.name.split("s=")[1].rstrip("}")) > s_cap:
            continue
        lhs.add(r.lhs)
    return reduced_lhs(full, lhs)


def check_rediscovery():
    lie = abelian(3)
    out, log = complete(preset_U3(lie, 3, gsb=False), 4, 3, 20)
    found = {r.lhs for r in out.extra.values()}
    target = gsb_target_lhs(lie, 4)
    return found == target, f"found={len(found)} target={len(target)} rounds={log.rounds}"


def check_rules_file(path):
    from argparse import Namespace
    from .cli import load_rules_file
    args = Namespace(nmax=6, lie=None, gens=None, N=None, variant="corrected")
    rs = load_rules_file(path, args)
    rep = verify_gsb(rs, 5, 4)
    return rep.ok, f"failures={len(rep.failures)}"


def run_selftest(quick: bool = False, rules_file: str | None = None) -> list:
    checks = [
        ("bfk-completion", check_bfk),
        ("u3-verification", lambda: check_verify(3, quick)),
        ("u2-verification", lambda: check_verify(2, quick)),
        ("basis-cross-check", lambda: check_basis(quick)),
        ("pbw", check_pbw),
        ("confluence-property", lambda: check_confluence(quick)),
        ("orientation-sweep", check_orientation),
    ]
    if not quick:
        checks.append(("completion-rediscovery", check_rediscovery))
    if rules_file:
        checks.append((f"rules-file {rules_file}", lambda: check_rules_file(rules_file)))
    results = []
    for name, fn in checks:
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # reported, not raised
            passed, detail = False, f"{type(exc).__name__}: {exc}"
            traceback.print_exc()
        results.append({"name": name, "passed": bool(passed), "detail": detail,
                        "seconds": round(time.perf_counter() - t0, 2)})
    return results
