"""Base-pair and digit-set profiles."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .arith import LogLinearForm, LogRatio, compare_log_form, factorize, fraction_json
from .errors import DomainError, HypothesisError


class MultClass(str, Enum):
    DEPENDENT = "Dependent"
    INDEPENDENT_SAME_PRIMES = "IndependentSamePrimes"
    INDEPENDENT_DIFFERENT_PRIMES = "IndependentDifferentPrimes"


def _check_bases(b: int, t: int) -> None:
    if not isinstance(b, int) or b < 3:
        raise DomainError(f"base b must be an integer >= 3, got {b!r}")
    if not isinstance(t, int) or t < 2:
        raise DomainError(f"base t must be an integer >= 2, got {t!r}")


def classify(b: int, t: int) -> MultClass:
    _check_bases(b, t)
    fb, ft = factorize(b), factorize(t)
    if set(fb) != set(ft):
        return MultClass.INDEPENDENT_DIFFERENT_PRIMES
    ratios = {Fraction(ft[q], fb[q]) for q in fb}
    if len(ratios) == 1:
        return MultClass.DEPENDENT
    return MultClass.INDEPENDENT_SAME_PRIMES


@dataclass(frozen=True)
class ParamProfile:
    b: int
    t: int
    mult_class: MultClass
    primes: tuple[int, ...]
    alpha1: Fraction
    alpha2: Fraction
    kstar: int | None
    bstar: int | None
    l0: int
    l1: int

    @property
    def degenerate(self) -> bool:
        return self.mult_class is MultClass.DEPENDENT

    def to_json(self) -> dict:
        return {
            "b": self.b,
            "t": self.t,
            "class": self.mult_class.value,
            "primes": list(self.primes),
            "alpha1": fraction_json(self.alpha1),
            "alpha2": fraction_json(self.alpha2),
            "kstar": self.kstar,
            "bstar": self.bstar,
            "l0": self.l0,
            "l1": self.l1,
            "degenerate": self.degenerate,
        }


def build_param_profile(b: int, t: int) -> ParamProfile:
    """Valuation ratios and the derived integers for a pair sharing its prime support.

    Primes are ordered ascending; k* and b* are only defined for the
    independent case and come back as None otherwise.
    """
    cls = classify(b, t)
    if cls is MultClass.INDEPENDENT_DIFFERENT_PRIMES:
        raise HypothesisError(f"{b} and {t} have different prime supports")
    fb, ft = factorize(b), factorize(t)
    primes = tuple(sorted(fb))
    ratios = {q: Fraction(ft[q], fb[q]) for q in primes}
    a1, a2 = min(ratios.values()), max(ratios.values())
    kstar = bstar = None
    if cls is MultClass.INDEPENDENT_SAME_PRIMES:
        above = [q for q in primes if ratios[q] > a1]
        kstar = len(above)
        bstar = b
        for q in above:
            bstar //= q ** fb[q]
    return ParamProfile(b, t, cls, primes, a1, a2, kstar, bstar, a1.denominator, a1.numerator)


def check_strict_sandwich(profile: ParamProfile) -> bool:
    """alpha1 < log t / log b < alpha2, decided exactly."""
    if profile.mult_class is not MultClass.INDEPENDENT_SAME_PRIMES:
        raise HypothesisError("the strict sandwich needs an independent same-prime pair")
    lt = LogLinearForm.log(profile.t)
    low = lt - LogLinearForm.log(profile.b, profile.alpha1)
    high = LogLinearForm.log(profile.b, profile.alpha2) - lt
    return compare_log_form(low) > 0 and compare_log_form(high) > 0


@dataclass(frozen=True)
class DigitProfile:
    b: int
    D: tuple[int, ...]
    gamma: LogRatio
    mstar: int
    D1: tuple[int, ...] | None = None
    D2: tuple[int, ...] | None = None
    Dstar: tuple[int, ...] | None = None
    d_subset_dstar: bool | None = None
    has_extreme_digit: bool = field(default=False)

    def to_json(self) -> dict:
        def opt(xs):
            return None if xs is None else list(xs)

        return {
            "D": list(self.D),
            "gamma": {"log_num": self.gamma.num, "log_den": self.gamma.den,
                      "value": float(self.gamma)},
            "mstar": self.mstar,
            "D1": opt(self.D1),
            "D2": opt(self.D2),
            "Dstar": opt(self.Dstar),
            "d_subset_dstar": self.d_subset_dstar,
            "has_extreme_digit": self.has_extreme_digit,
        }


def normalize_digits(b: int, digits) -> tuple[int, ...]:
    ds = tuple(sorted(set(int(d) for d in digits)))
    if len(ds) < 2:
        raise DomainError("the digit set needs at least two digits")
    if ds[0] < 0 or ds[-1] > b - 1:
        raise DomainError(f"digits must lie in 0..{b - 1}")
    return ds


def build_digit_profile(profile: ParamProfile, digits) -> DigitProfile:
    b = profile.b
    ds = normalize_digits(b, digits)
    mstar = min(ds[0], b - 1 - ds[-1])
    gamma = LogRatio(1, len(ds), b)
    extreme = 0 in ds or (b - 1) in ds
    if profile.mult_class is not MultClass.INDEPENDENT_SAME_PRIMES:
        return DigitProfile(b, ds, gamma, mstar, has_extreme_digit=extreme)
    step = profile.bstar
    d1 = tuple(k * step for k in range(1, b // step))
    d2 = tuple(x - 1 for x in d1)
    banned = set(d1) | set(d2)
    dstar = tuple(x for x in range(b) if x not in banned)
    return DigitProfile(
        b, ds, gamma, mstar, d1, d2, dstar,
        d_subset_dstar=set(ds) <= set(dstar),
        has_extreme_digit=extreme,
    )
