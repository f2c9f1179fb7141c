"""Measure verdicts and Hausdorff-dimension reports for W_t(psi) intersected with C."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .arith import LogLinearForm, LogRatio, compare_log_form, rational_log_ratio
from .cantor import MissingDigitSet, grid_count
from .errors import CapabilityError, DomainError
from .params import DigitProfile, MultClass, ParamProfile
from .psi import (
    FloatOnly,
    LogRate,
    SteppedGeometric,
    eventually_le,
    lambda_psi,
    threshold_psi,
)


class MeasureClass(str, Enum):
    ZERO = "Zero"
    FULL_MEASURE_OF_C = "FullMeasureOfC"
    INFINITE = "Infinite"
    EMPTY_SET = "EmptySet"
    GAP_UNKNOWN = "GapUnknown"
    NOT_APPLICABLE = "NotApplicable"


# Tags name the criterion by what it says rather than where it was published.
TERNARY = "ternary-cantor-sum"
SHIFTED = "equal-base-shifted-sum"
DEPENDENT = "dependent-base-sum"
SAME_PRIMES_CONV = "same-primes-alpha2-convergent"
SAME_PRIMES_DIV = "same-primes-alpha1-divergent"
EMPTINESS = "emptiness-below-threshold"
ALPHA1_DICHOTOMY = "alpha1-dichotomy"
BOX_COUNT = "box-count-convergent"


@dataclass
class Verdict:
    measure_class: MeasureClass
    theorem: str | None
    s: str
    notes: list[str] = field(default_factory=list)
    hypotheses: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"measure_class": self.measure_class.value, "theorem": self.theorem,
                "s": self.s, "notes": list(self.notes), "hypotheses": dict(self.hypotheses)}


def _s_text(s) -> str:
    if isinstance(s, LogRatio):
        return f"{s.coef}*log{s.num}/log{s.den}" if s.coef != 1 else f"log{s.num}/log{s.den}"
    return str(Fraction(s))


def _decay_form(psi: SteppedGeometric, s) -> LogLinearForm:
    """s * (p/r) * log beta as an exact log form."""
    slope = Fraction(psi.p, psi.r)
    if isinstance(s, LogRatio):
        return s.times_log(psi.beta).scale(slope)
    return LogLinearForm.log(psi.beta, Fraction(s) * slope)


def converges_geometric(psi, s, growth: LogLinearForm) -> bool:
    """Whether sum_n psi(n)^s B^n < infinity, where log B = growth.

    Terms behave like exp(-n (s (p/r) log beta - log B)) up to bounded
    factors, so the series converges iff that rate is strictly positive.
    """
    if not isinstance(psi, SteppedGeometric):
        raise CapabilityError("the exact convergence test needs a stepped geometric psi")
    return compare_log_form(_decay_form(psi, s) - growth) > 0


def _growth(dprofile: DigitProfile, factor: Fraction) -> LogLinearForm:
    """log of (#D)^factor, i.e. the rate of b^(factor * gamma n)."""
    return LogLinearForm.log(len(dprofile.D), factor)


def _shifted_sum_converges(psi: SteppedGeometric, b: int, mstar: int, s, growth) -> tuple[bool, bool]:
    """Convergence of the sum over n with psi(n) > m*/((b-1) b^n) of (psi - shift)^s b^{gamma n}.

    Returns (converges, finitely_many_terms).
    """
    if mstar == 0:
        return converges_geometric(psi, s, growth), False
    shift = SteppedGeometric(Fraction(mstar, b - 1), b, 1, 0, 1)
    below, _ = eventually_le(psi, shift)
    if below:
        return True, True
    # infinitely many terms, each comparable to psi(n) on a positive-density set of n
    return converges_geometric(psi, s, growth), False


def measure_verdict(profile: ParamProfile, dprofile: DigitProfile, psi, s) -> Verdict:
    """Decide H^s(W_t(psi) cap C) from the applicable criterion."""
    st = _s_text(s)
    if isinstance(s, (int, Fraction)) and Fraction(s) < 0:
        raise DomainError("s must be non-negative")
    cls = profile.mult_class
    b, t = profile.b, profile.t
    if cls is MultClass.INDEPENDENT_DIFFERENT_PRIMES:
        return Verdict(MeasureClass.NOT_APPLICABLE, None, st,
                       ["bases with different prime supports are outside every criterion"])
    if not isinstance(psi, SteppedGeometric):
        return Verdict(MeasureClass.NOT_APPLICABLE, None, st,
                       ["exact criteria need a stepped geometric psi"])

    mstar = dprofile.mstar
    hyp: dict[str, bool] = {}

    def sharpened_empty() -> bool:
        if mstar == 0:
            return False
        sharp = threshold_psi(b, profile.alpha2, Fraction(mstar, b - 1), extra=0)
        below, _ = eventually_le(psi, sharp)
        return below

    if cls is MultClass.DEPENDENT:
        rho = profile.alpha1  # log t / log b
        if b == t:
            tag = TERNARY if (b == 3 and dprofile.D == (0, 2)) else SHIFTED
            conv, finite = _shifted_sum_converges(psi, b, mstar, s, _growth(dprofile, Fraction(1)))
            hyp["equal_bases"] = True
            if finite:
                return Verdict(MeasureClass.EMPTY_SET, tag, st,
                               ["psi eventually at most m*/((b-1) b^n): the shifted sum has "
                                "finitely many terms and the balls miss C from then on"], hyp)
            mc = MeasureClass.ZERO if conv else MeasureClass.FULL_MEASURE_OF_C
            return Verdict(mc, tag, st, [f"m*={mstar}"], hyp)
        if sharpened_empty():
            return Verdict(MeasureClass.EMPTY_SET, EMPTINESS, st,
                           ["psi eventually at most m*/((b-1) b^ceil(alpha2 n))"],
                           {"no_extreme_digit": True, "below_threshold": True})
        conv = converges_geometric(psi, s, _growth(dprofile, rho))
        notes = []
        if mstar > 0:
            notes.append("D avoids 0 and b-1; the dependent-base criterion is applied "
                         "without the m* shift and is unverified in this regime")
        mc = MeasureClass.ZERO if conv else MeasureClass.FULL_MEASURE_OF_C
        return Verdict(mc, DEPENDENT, st, notes, {"dependent": True})

    below, n0 = eventually_le(psi, threshold_psi(b, profile.alpha2))
    hyp["below_threshold"] = below
    hyp["has_extreme_digit"] = dprofile.has_extreme_digit
    hyp["d_subset_dstar"] = bool(dprofile.d_subset_dstar)
    if not dprofile.has_extreme_digit:
        if below or sharpened_empty():
            return Verdict(MeasureClass.EMPTY_SET, EMPTINESS, st,
                           [f"balls miss C for n >= {n0}" if n0 else "balls eventually miss C"], hyp)
        return Verdict(MeasureClass.NOT_APPLICABLE, None, st,
                       ["D contains neither 0 nor b-1 and psi is not eventually below the "
                        "emptiness threshold"], hyp)
    a1_growth = _growth(dprofile, profile.alpha1)
    if dprofile.d_subset_dstar and below:
        conv = converges_geometric(psi, s, a1_growth)
        mc = MeasureClass.ZERO if conv else MeasureClass.INFINITE
        return Verdict(mc, ALPHA1_DICHOTOMY, st, [f"threshold holds from n={n0}"], hyp)
    if converges_geometric(psi, s, _growth(dprofile, profile.alpha2)):
        return Verdict(MeasureClass.ZERO, SAME_PRIMES_CONV, st, [], hyp)
    if not converges_geometric(psi, s, a1_growth):
        return Verdict(MeasureClass.FULL_MEASURE_OF_C, SAME_PRIMES_DIV, st, [], hyp)
    return Verdict(MeasureClass.GAP_UNKNOWN, None, st,
                   ["the alpha2 sum diverges while the alpha1 sum converges"], hyp)


class BoundType(str, Enum):
    EQUAL = "Equal"
    UPPER = "UpperBound"
    TWO_SIDED = "TwoSidedBounds"


@dataclass
class DimReport:
    dim_C: float
    lam: float
    dim_W: float
    formula: str
    value: float
    bound_type: BoundType
    lower: float | None = None
    upper: float | None = None
    product_bound: float = 0.0
    random_value: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "dim_C": self.dim_C,
            "lambda": self.lam,
            "dim_W": self.dim_W,
            "dim_intersection": {
                "formula": self.formula, "value": self.value,
                "bound_type": self.bound_type.value,
                "lower": self.lower, "upper": self.upper,
            },
            "product_bound": self.product_bound,
            "random_value": self.random_value,
            "notes": list(self.notes),
        }


def _threshold_status(psi, profile: ParamProfile) -> bool:
    if isinstance(psi, FloatOnly):
        return False
    try:
        below, _ = eventually_le(psi, threshold_psi(profile.b, profile.alpha2))
    except CapabilityError:
        return False
    return below


def dim_report(profile: ParamProfile, dprofile: DigitProfile, psi) -> DimReport:
    b, t = profile.b, profile.t
    dim_c = float(dprofile.gamma)
    lam = lambda_psi(psi, t).value
    dim_w = 1.0 if lam <= 1 else 1.0 / lam
    prod = dim_w * dim_c
    rand = dim_w + dim_c - 1
    scale1 = float(profile.alpha1) * math.log(b) / math.log(t)
    scale2 = float(profile.alpha2) * math.log(b) / math.log(t)
    cls = profile.mult_class

    def rep(formula, value, bt, lower=None, upper=None, notes=()):
        return DimReport(dim_c, lam, dim_w, formula, value, bt, lower, upper, prod, rand, list(notes))

    if cls is MultClass.DEPENDENT:
        if dprofile.has_extreme_digit:
            return rep("product", prod, BoundType.EQUAL)
        return rep("product-upper", prod, BoundType.UPPER)
    below = _threshold_status(psi, profile)
    if not dprofile.has_extreme_digit and below:
        return rep("empty", 0.0, BoundType.EQUAL, notes=["intersection is empty"])
    if dprofile.has_extreme_digit and dprofile.d_subset_dstar and below:
        return rep("alpha1-product", scale1 * prod, BoundType.EQUAL)
    if dprofile.has_extreme_digit and below:
        return rep("alpha-bounds", scale1 * prod, BoundType.TWO_SIDED,
                   lower=scale1 * prod, upper=min(scale2 * prod, prod))
    return rep("product-upper", prod, BoundType.UPPER)


def _grid_growth(A, t: int) -> LogLinearForm | None:
    """log of the exponential growth rate of N_{t^-n}(A), when exactly expressible."""
    if isinstance(A, MissingDigitSet):
        rho = rational_log_ratio(t, A.b)
        if rho is None:
            return None
        return LogLinearForm.log(len(A.D), rho)
    if any(I.hi > I.lo for I in A):
        return LogLinearForm.log(t)
    return LogLinearForm()


def box_count_verdict(A, t: int, psi, s, n_probe: int = 12) -> tuple[Verdict, list[dict]]:
    """Zero measure when sum_n psi(n)^s N_{t^-n}(A) converges.

    Returns the verdict and a table of probed box counts.
    """
    if not isinstance(psi, SteppedGeometric):
        raise CapabilityError("needs a stepped geometric psi")
    st = _s_text(s)
    table = []
    for n in range(0, n_probe + 1):
        table.append({"n": n, "grid_count": grid_count(A, Fraction(1, t**n))})
    if isinstance(A, MissingDigitSet):
        rho = rational_log_ratio(psi.beta, t)
        if rho is None:
            raise CapabilityError("psi base must be multiplicatively dependent on t")
        # compare s (p/r) log beta with gamma log t after multiplying by log b / log t
        decay = _decay_form(SteppedGeometric(psi.c, A.b, psi.p, psi.q, psi.r), s).scale(rho)
        growth = LogLinearForm.log(len(A.D))
        conv = compare_log_form(decay - growth) > 0
    else:
        growth = _grid_growth(A, t)
        conv = converges_geometric(psi, s, growth)
    mc = MeasureClass.ZERO if conv else MeasureClass.GAP_UNKNOWN
    notes = [] if conv else ["the box-count sum diverges; no conclusion"]
    return Verdict(mc, BOX_COUNT if conv else None, st, notes), table


# name used by the build contract
theorem14_bound = box_count_verdict
