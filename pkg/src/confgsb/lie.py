"""Finite-dimensional Lie algebras with a symmetric invariant form.

A :class:`LieSpec` is raw user input; :func:`validate` completes the
brackets and the form by (anti)symmetry and checks antisymmetry, the Jacobi
identity, symmetry of the form and its invariance ``<[a,b]|c> = <a|[b,c]>``.
Vectors are sparse ``dict`` maps ``basis name -> Fraction``.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Mapping

from .elements import as_fraction

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib


class LieDataError(ValueError):
    pass


class AntisymmetryViolation(LieDataError):
    def __init__(self, i, j):
        super().__init__(f"[{i},{j}] != -[{j},{i}]")
        self.pair = (i, j)


class JacobiViolation(LieDataError):
    def __init__(self, i, j, k):
        super().__init__(f"Jacobi identity fails on ({i}, {j}, {k})")
        self.triple = (i, j, k)


class FormAsymmetry(LieDataError):
    def __init__(self, i, j):
        super().__init__(f"<{i}|{j}> != <{j}|{i}>")
        self.pair = (i, j)


class FormNotInvariant(LieDataError):
    def __init__(self, i, j, k):
        super().__init__(f"<[{i},{j}]|{k}> != <{i}|[{j},{k}]>")
        self.triple = (i, j, k)


def clean(v: Mapping) -> dict:
    return {k: as_fraction(c) for k, c in v.items() if as_fraction(c)}


def vadd(u: Mapping, v: Mapping, c=1) -> dict:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


@dataclass
class LieSpec:
    """Raw input: brackets and form may be given for one orientation only."""

    basis_names: list
    brackets: dict = field(default_factory=dict)  # (a, b) -> {c: coeff}
    form: dict = field(default_factory=dict)  # (a, b) -> coeff
    central_name: str = "e"


@dataclass(frozen=True)
class LieData:
    basis: tuple
    brackets: Mapping  # complete: every (a, b) with a nonzero bracket
    form: Mapping  # complete and symmetric, nonzero entries only
    central: str = "e"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def br(self, a: str, b: str) -> dict:
        """Bracket of two basis elements as a sparse vector."""
        return self.brackets.get((a, b), {})

    def ip(self, a: str, b: str) -> Fraction:
        return self.form.get((a, b), Fraction(0))

    def to_spec(self) -> LieSpec:
        return LieSpec(list(self.basis), {k: dict(v) for k, v in self.brackets.items()},
                       dict(self.form), self.central)


def bracket(data: LieData, u: Mapping, v: Mapping) -> dict:
    out: dict = {}
    for a, x in u.items():
        for b, y in v.items():
            out = vadd(out, data.br(a, b), x * y)
    return out


def form_eval(data: LieData, u: Mapping, v: Mapping) -> Fraction:
    return sum((x * y * data.ip(a, b) for a, x in u.items() for b, y in v.items()),
               Fraction(0))


def validate(spec: LieSpec) -> LieData:
    names = list(spec.basis_names)
    if not names:
        raise LieDataError("basis must be nonempty")
    if len(set(names)) != len(names):
        raise LieDataError("basis names must be distinct")
    if spec.central_name in names:
        raise LieDataError(f"central name {spec.central_name!r} is a basis name")
    known = set(names)

    def check_keys(*ks):
        for k in ks:
            if k not in known:
                raise LieDataError(f"unknown basis element {k!r}")

    given = {}
    for (a, b), vec in spec.brackets.items():
        check_keys(a, b, *vec)
        given[a, b] = clean(vec)
    brackets = {}
    for a, b in product(names, names):
        if (a, b) in given and (b, a) in given:
            if vadd(given[a, b], given[b, a]):
                raise AntisymmetryViolation(a, b)
            v = given[a, b]
        elif (a, b) in given:
            v = given[a, b]
        elif (b, a) in given:
            v = {k: -c for k, c in given[b, a].items()}
        else:
            v = {}
        if a == b and v:
            raise AntisymmetryViolation(a, a)
        if v:
            brackets[a, b] = v

    fgiven = {}
    for (a, b), c in spec.form.items():
        check_keys(a, b)
        fgiven[a, b] = as_fraction(c)
    form = {}
    for a, b in product(names, names):
        if (a, b) in fgiven and (b, a) in fgiven and fgiven[a, b] != fgiven[b, a]:
            raise FormAsymmetry(a, b)
        c = fgiven.get((a, b), fgiven.get((b, a), Fraction(0)))
        if c:
            form[a, b] = c

    data = LieData(tuple(names), brackets, form, spec.central_name)
    unit = {a: {a: Fraction(1)} for a in names}
    for a, b, c in product(names, repeat=3):
        jac = vadd(vadd(bracket(data, unit[a], data.br(b, c)),
                        bracket(data, unit[b], data.br(c, a))),
                   bracket(data, unit[c], data.br(a, b)))
        if jac:
            raise JacobiViolation(a, b, c)
        if form_eval(data, data.br(a, b), unit[c]) != form_eval(data, unit[a], data.br(b, c)):
            raise FormNotInvariant(a, b, c)
    return data


# ---------------------------------------------------------------------------
# file format

def _parse_key(key: str) -> tuple:
    parts = [p.strip() for p in key.split(",")]
    if len(parts) != 2:
        raise LieDataError(f"expected 'a,b' key, got {key!r}")
    return tuple(parts)


def spec_from_dict(raw: Mapping) -> LieSpec:
    basis = list(raw["basis"])
    brackets = {}
    for key, vec in raw.get("bracket", {}).items():
        brackets[_parse_key(key)] = {k: as_fraction(v) for k, v in vec.items()}
    form = {_parse_key(k): as_fraction(v) for k, v in raw.get("form", {}).items()}
    return LieSpec(basis, brackets, form, raw.get("central", "e"))


def spec_to_dict(spec: LieSpec) -> dict:
    def fmt(c):
        c = as_fraction(c)
        return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

    return {
        "basis": list(spec.basis_names),
        "central": spec.central_name,
        "bracket": {f"{a},{b}": {k: fmt(c) for k, c in v.items()}
                    for (a, b), v in spec.brackets.items()},
        "form": {f"{a},{b}": fmt(c) for (a, b), c in spec.form.items()},
    }


DATA_DIR = Path(__file__).parent / "data"


def load(path: str | Path) -> LieData:
    """Load and validate a ``.toml`` or ``.json`` Lie algebra file.

    A bare name such as ``sl2`` resolves to a file shipped with the package.
    """
    p = Path(path)
    if not p.exists() and not p.suffix:
        p = DATA_DIR / f"{path}.toml"
    if p.suffix == ".json":
        raw = json.loads(p.read_text())
    else:
        raw = tomllib.loads(p.read_text())
    return validate(spec_from_dict(raw))


# ---------------------------------------------------------------------------
# stock algebras

def sl2() -> LieData:
    """sl_2 with basis (e, f, h) and its Killing form.

    The torsion generator is named ``c`` because ``e`` is a basis name.
    """
    return validate(LieSpec(
        ["e", "f", "h"],
        {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}},
        {("e", "f"): 4, ("h", "h"): 8},
        central_name="c",
    ))


def abelian(n: int, names: str = "abcdefgh") -> LieData:
    return validate(LieSpec(list(names[:n])))


def heisenberg() -> LieData:
    """Heisenberg algebra ``[x, y] = z`` with the invariant form ``<x|y> = 1``.

    Invariance forces ``z`` into the radical of any invariant form.
    """
    return validate(LieSpec(["x", "y", "z"], {("x", "y"): {"z": 1}}, {("x", "y"): 1}))
