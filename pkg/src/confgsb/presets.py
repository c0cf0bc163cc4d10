"""Built-in rule sets.

``ax``    straightening rules of the operator algebra with a Lie bracket
``conf``  free associative conformal algebra on X with locality N
``bfk``   the one-generator example with the relation ``L1 a -> D L0 a``
``u3``    Kac-Moody conformal envelope at locality 3 (a Groebner-Shirshov basis)
``u2``    the same at locality 2

Envelope presets use :class:`EnvelopeOrder`; the conformal presets use
:class:`ConformalOrder` so that ``D`` moves to the left.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Callable, Mapping, Sequence

from .elements import AlgebraElement, ModuleElement
from .lie import LieData
from .rules import Builder, IntParam, RuleSchema, RuleSet
from .terms import ConformalOrder, EnvelopeOrder

N_ = IntParam("n")
M_ = IntParam("m")


def _schema(id, letters, ints, build, constraint=None, doc=""):
    return RuleSchema(id, tuple(letters), tuple(ints), build, constraint, doc)


# ---------------------------------------------------------------------------
# operator algebra

def envelope_algebra_schemas() -> list:
    """Straightening of D, commutation of R past L, LL with bracket correction."""
    return [
        _schema("dL0", "a", [], lambda B, a: (B.D * B.L(0, a), B.L(0, a) * B.D)),
        _schema("dL1", "a", [], lambda B, a: (B.D * B.L(1, a), B.L(1, a) * B.D - B.L(0, a))),
        _schema("LD", "a", [IntParam("n", 2)],
                lambda B, a, n: (B.L(n, a) * B.D, B.D * B.L(n, a) + n * B.L(n - 1, a))),
        _schema("RD", "a", [N_],
                lambda B, a, n: (B.R(n, a) * B.D, B.D * B.R(n, a) + n * B.R(n - 1, a))),
        _schema("RL", "ab", [M_, N_],
                lambda B, a, b, m, n: (B.R(m, a) * B.L(n, b), B.L(n, b) * B.R(m, a))),
        _schema("LL", "ab", [N_, M_],
                lambda B, a, b, n, m: (B.L(n, a) * B.L(m, b),
                                       B.L(m, b) * B.L(n, a) + B.L(n + m, B.br(a, b))),
                constraint=lambda B, a, b, n, m: (n, B.rank(a)) > (m, B.rank(b))),
    ]


def conformal_algebra_schemas() -> list:
    """Straightening with D moved to the left, and R commuting past L."""
    return [
        _schema("LD", "a", [N_],
                lambda B, a, n: (B.L(n, a) * B.D, B.D * B.L(n, a) + n * B.L(n - 1, a))),
        _schema("RD", "a", [N_],
                lambda B, a, n: (B.R(n, a) * B.D, B.D * B.R(n, a) + n * B.R(n - 1, a))),
        _schema("RL", "ab", [M_, N_],
                lambda B, a, b, m, n: (B.R(m, a) * B.L(n, b), B.L(n, b) * B.R(m, a))),
    ]


def preset_AX(lie: LieData, n_max: int = 3) -> RuleSet:
    order = EnvelopeOrder(lie.basis, central=lie.central)
    B = Builder(order, lie.basis, lie)
    return RuleSet(order, B, envelope_algebra_schemas(), name="ax", n_cap=n_max, s_cap=n_max)


# ---------------------------------------------------------------------------
# free conformal algebra with locality N

def locality_function(N) -> Callable:
    if isinstance(N, int):
        return lambda a, b: N
    if isinstance(N, Mapping):
        return lambda a, b: N[a, b]
    return N


def _r_sum(B, a, b, m, bound):
    """sum_{s=0}^{bound-m} (-1)^{m+s} / s! D^s L_{m+s}^b a  (empty if bound < m)."""
    out = ModuleElement()
    for s in range(bound - m + 1):
        c = Fraction((-1) ** (m + s), factorial(s))
        out = out + (c * (B.D ** s * B.L(m + s, b))) * B.x(a)
    return out


def locality_schemas(Nf: Callable) -> list:
    def loc_ll(B, a, b, n, m):
        rhs = AlgebraElement()
        for q in range(1, n + 1):
            rhs = rhs + Fraction(-(-1) ** q * comb(n, q)) * (B.L(n - q, a) * B.L(m + q, b))
        return B.L(n, a) * B.L(m, b), rhs

    return [
        _schema("loc", "ab", [N_], lambda B, a, b, n: (B.L(n, a) * B.x(b), ModuleElement()),
                constraint=lambda B, a, b, n: n >= Nf(a, b)),
        _schema("locLL", "ab", [N_, M_], loc_ll,
                constraint=lambda B, a, b, n, m: n >= Nf(a, b)),
    ]


def preset_conf_module(X: Sequence[str], N=2, n_max: int = 3) -> RuleSet:
    """``M(X, N)``: the free conformal algebra as a module over ``A(X)``.

    ``N`` is an int, a mapping ``(a, b) -> int`` or a function of two names.
    """
    Nf = locality_function(N)
    order = ConformalOrder(X)
    B = Builder(order, X)
    rsub = _schema("Rsub", "ab", [M_],
                   lambda B, a, b, m: (B.R(m, a) * B.x(b), _r_sum(B, a, b, m, Nf(b, a))))
    schemas = conformal_algebra_schemas() + locality_schemas(Nf) + [rsub]
    return RuleSet(order, B, schemas, name="conf", n_cap=n_max, s_cap=n_max)


def preset_bfk(n_max: int = 3) -> RuleSet:
    """One generator ``a``, locality 2, relation ``a (1) a = D (a (0) a)``."""
    order = ConformalOrder(["a"])
    B = Builder(order, ["a"])
    a = B.x("a")
    two = IntParam("n", 2)
    schemas = conformal_algebra_schemas() + locality_schemas(lambda x, y: 2) + [
        _schema("locR", "a", [two], lambda B, a, n: (B.R(n, a) * B.x(a), ModuleElement())),
        _schema("R1", "", [], lambda B: (B.R(1, "a") * a, -(B.L(1, "a") * a))),
        _schema("R0", "", [], lambda B: (B.R(0, "a") * a,
                                         B.L(0, "a") * a - B.D * B.L(1, "a") * a)),
        _schema("BFK", "", [], lambda B: (B.L(1, "a") * a, B.D * B.L(0, "a") * a)),
    ]
    return RuleSet(order, B, schemas, name="bfk", n_cap=n_max, s_cap=n_max)


# ---------------------------------------------------------------------------
# Kac-Moody envelopes

def _torsion_schemas() -> list:
    """The torsion generator is killed by every operator letter."""
    return [
        _schema("Le", "a", [N_], lambda B, a, n: (B.L(n, a) * B.e, ModuleElement())),
        _schema("Re", "a", [N_], lambda B, a, n: (B.R(n, a) * B.e, ModuleElement())),
        _schema("De", "", [], lambda B: (B.D * B.e, ModuleElement())),
    ]


def u3_basic_schemas() -> list:
    gt = lambda B, a, b, **_: B.lt(b, a)
    return [
        _schema("L3", "ab", [IntParam("n", 3)],
                lambda B, a, b, n: (B.L(n, a) * B.x(b), ModuleElement())),
        _schema("R3", "ab", [IntParam("n", 3)],
                lambda B, a, b, n: (B.R(n, a) * B.x(b), ModuleElement())),
        _schema("R2", "ab", [], lambda B, a, b: (B.R(2, a) * B.x(b), B.L(2, a) * B.x(b))),
        _schema("R1", "ab", [], lambda B, a, b: (B.R(1, a) * B.x(b),
                                                 B.L(1, a) * B.x(b) - B.ip(a, b) * B.e)),
        _schema("R0", "ab", [], lambda B, a, b: (B.R(0, a) * B.x(b),
                                                 B.L(0, a) * B.x(b) - B.x(B.br(a, b)))),
        _schema("L2", "ab", [], lambda B, a, b: (B.L(2, a) * B.x(b), B.L(2, b) * B.x(a)),
                constraint=gt),
        _schema("dL2", "ab", [], lambda B, a, b: (
            B.D * B.L(2, a) * B.x(b),
            B.L(1, a) * B.x(b) + B.L(1, b) * B.x(a) - B.ip(a, b) * B.e)),
        _schema("L1D", "ab", [], lambda B, a, b: (
            B.L(1, a) * B.D * B.x(b),
            B.L(1, b) * B.D * B.x(a) + 3 * (B.L(0, a) * B.x(b)) - 3 * (B.L(0, b) * B.x(a))
            - 2 * B.x(B.br(a, b))), constraint=gt),
    ]


def u3_gsb_schemas() -> list:
    def ds(B, a, b, s):
        Ds, Ds1 = B.D ** s, B.D ** (s - 1)
        return (B.L(1, a) * Ds * B.x(b),
                B.L(1, b) * Ds * B.x(a) - (s + 2) * (B.L(0, b) * Ds1 * B.x(a))
                + (s + 2) * (B.L(0, a) * Ds1 * B.x(b)) - 2 * (Ds1 * B.x(B.br(a, b))))

    def g11(B, a, b, c):
        x = B.x
        return (B.L(1, a) * B.L(1, b) * x(c),
                B.L(1, a) * B.L(1, c) * x(b) + B.L(0, b) * B.L(2, a) * x(c)
                - B.L(0, c) * B.L(2, a) * x(b) + B.L(2, a) * x(B.br(c, b))
                + B.L(2, b) * x(B.br(c, a)) + B.L(2, c) * x(B.br(a, b)))

    def g11p(B, a, b, c):
        x = B.x
        return (B.L(1, a) * B.L(1, b) * x(c),
                B.L(1, c) * B.L(1, a) * x(b) + B.L(0, b) * B.L(2, c) * x(a)
                - B.L(0, c) * B.L(2, a) * x(b) + B.L(2, c) * x(B.br(a, b))
                + B.L(2, a) * x(B.br(c, b)))

    def g01(B, a, b, c):
        x, L = B.x, B.L
        return (L(0, a) * L(1, b) * x(c),
                L(0, a) * L(1, c) * x(b) + L(0, b) * L(1, a) * x(c) + L(0, c) * L(1, b) * x(a)
                - L(0, b) * L(1, c) * x(a) - L(0, c) * L(1, a) * x(b)
                + L(1, B.br(c, a)) * x(b) + L(1, B.br(a, b)) * x(c) + L(1, B.br(b, c)) * x(a)
                - L(1, c) * x(B.br(a, b)) - L(1, a) * x(B.br(b, c)) - L(1, b) * x(B.br(c, a))
                + B.ip(a, B.br(b, c)) * B.e)

    return [
        _schema("GSB-Ds", "ab", [IntParam("s", 2, "s")], ds,
                constraint=lambda B, a, b, s: B.lt(b, a)),
        _schema("GSB-2.2", "abc", [], lambda B, a, b, c: (
            B.L(2, a) * B.L(2, b) * B.x(c), ModuleElement())),
        _schema("GSB-1.2", "abc", [], lambda B, a, b, c: (
            B.L(1, a) * B.L(2, b) * B.x(c), B.L(1, b) * B.L(2, c) * B.x(a)),
            constraint=lambda B, a, b, c: B.le(b, c) and B.lt(c, a)),
        _schema("GSB-1.2'", "abc", [], lambda B, a, b, c: (
            B.L(1, a) * B.L(2, b) * B.x(c), B.L(1, b) * B.L(2, a) * B.x(c)),
            constraint=lambda B, a, b, c: B.lt(b, a) and B.le(a, c)),
        _schema("GSB-1.1", "abc", [], g11,
                constraint=lambda B, a, b, c: B.le(a, c) and B.lt(c, b)),
        _schema("GSB-1.1'", "abc", [], g11p,
                constraint=lambda B, a, b, c: B.lt(c, a) and B.le(a, b)),
        _schema("GSB-0.1", "abc", [], g01,
                constraint=lambda B, a, b, c: B.lt(c, b) and B.lt(b, a)),
    ]


def _envelope_builder(lie: LieData) -> Builder:
    order = EnvelopeOrder(lie.basis, central=lie.central)
    return Builder(order, lie.basis, lie)


def preset_U3(lie: LieData, n_max: int = 3, gsb: bool = True) -> RuleSet:
    """Locality-3 envelope.  ``gsb=False`` keeps only the starting rules."""
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    B = _envelope_builder(lie)
    schemas = envelope_algebra_schemas() + u3_basic_schemas() + _torsion_schemas()
    if gsb:
        schemas += u3_gsb_schemas()
    return RuleSet(B.order, B, schemas, name="u3" if gsb else "u3-start",
                   n_cap=n_max, s_cap=n_max)


U2_VARIANTS = ("corrected", "uncorrected", "l1d-only")


def u2_schemas(variant: str = "corrected") -> list:
    if variant not in U2_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")

    def l1d(B, a, b, s):
        Ds1 = B.D ** (s - 1)
        k = 2 if variant == "uncorrected" else s + 1
        return (B.L(1, a) * B.D ** s * B.x(b),
                k * (B.L(0, a) * Ds1 * B.x(b)) - B.L(0, b) * Ds1 * B.x(a)
                - Ds1 * B.x(B.br(a, b)))

    e_coeff = 2 if variant == "corrected" else 1

    def l0l1(B, a, b, c):
        x, L = B.x, B.L
        return (L(0, a) * L(1, b) * x(c),
                L(0, c) * L(1, b) * x(a) - L(0, b) * L(1, c) * x(a)
                + L(1, a) * x(B.br(c, b)) + L(1, c) * x(B.br(b, a)) + L(1, b) * x(B.br(a, c))
                + e_coeff * B.ip(a, B.br(b, c)) * B.e)

    two = IntParam("n", 2)
    return [
        _schema("locL2", "ab", [two], lambda B, a, b, n: (B.L(n, a) * B.x(b), ModuleElement())),
        _schema("locR2", "ab", [two], lambda B, a, b, n: (B.R(n, a) * B.x(b), ModuleElement())),
        _schema("R1-L1", "ab", [], lambda B, a, b: (B.R(1, a) * B.x(b),
                                                    B.L(1, a) * B.x(b) - B.ip(a, b) * B.e)),
        _schema("R0-L0", "ab", [], lambda B, a, b: (B.R(0, a) * B.x(b),
                                                    B.L(0, a) * B.x(b) - B.x(B.br(a, b)))),
        _schema("L1-L1", "ab", [], lambda B, a, b: (
            B.L(1, a) * B.x(b), -(B.L(1, b) * B.x(a)) + B.ip(a, b) * B.e),
            constraint=lambda B, a, b: B.lt(b, a)),
        _schema("L1'", "a", [], lambda B, a: (B.L(1, a) * B.x(a), B.ip(a, a) / 2 * B.e)),
        _schema("L1D", "ab", [IntParam("s", 1, "s")], l1d),
        _schema("L1L1", "abc", [], lambda B, a, b, c: (
            B.L(1, a) * B.L(1, b) * B.x(c), ModuleElement()),
            constraint=lambda B, a, b, c: B.le(a, b) and B.lt(b, c)),
        _schema("L0L1", "abc", [], l0l1,
                constraint=lambda B, a, b, c: B.lt(b, c) and B.lt(c, a)),
    ]


def preset_U2(lie: LieData, n_max: int = 3, variant: str = "corrected") -> RuleSet:
    """Locality-2 envelope.

    ``variant="uncorrected"`` uses the coefficient 2 in the ``L1 D^s`` family for
    every ``s`` and the coefficient 1 on ``<a|[b,c]> e`` in the ``L0 L1``
    family; ``"l1d-only"`` fixes the first of these but not the second.  The
    consistent coefficients, rederived by completion, are ``s + 1`` (agreeing
    at s=1) and 2.
    """
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    B = _envelope_builder(lie)
    schemas = envelope_algebra_schemas() + u2_schemas(variant) + _torsion_schemas()
    return RuleSet(B.order, B, schemas, name="u2" if variant == "corrected" else f"u2-{variant}",
                   n_cap=n_max, s_cap=n_max)


PRESET_IDS = ("ax", "conf", "u3", "u2", "bfk")
