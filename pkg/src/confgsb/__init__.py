"""Exact rewriting for associative conformal algebras presented as modules
over operator algebras: rule families, normal forms, Groebner-Shirshov
verification and completion, and linear bases."""

__version__ = "0.1.0"

from .basis import (Bounds, BoundsNotClosed, comconf2_pattern, comconf3_pattern,
                    enumerate_terminal, graded_count, h_basis, hilbert, oracle_dimension,
                    pbw_check)
from .confluence import (CompletionLog, CompositionReport, Fork, RoundCapExceeded,
                         VerificationReport, complete, composition, find_forks, verify_gsb)
from .elements import (AlgebraElement, ModuleElement, ZeroElement, act, add, format_element,
                       leading, mul, parse_element, scale)
from .lie import (AntisymmetryViolation, FormAsymmetry, FormNotInvariant, JacobiViolation,
                  LieData, LieDataError, LieSpec, bracket, form_eval, load, validate)
from .presets import (preset_AX, preset_bfk, preset_conf_module, preset_U2, preset_U3)
from .rewrite import (NonTermination, ReductionStep, Trace, is_terminal, normal_form,
                      reduce_once, replay)
from .rules import (ConstraintViolated, DuplicateLhs, OrientationViolated, Rule, RuleSchema,
                    RuleSet, instantiate, orient, parse_rules, sweep_orientation)
from .terms import (D, L, R, ConformalOrder, EnvelopeOrder, Letter, ModuleMonomial,
                    compare_letters, compare_module_monomials, compare_words, find_occurrences,
                    format_monomial, format_word, parse_monomial, parse_word)
