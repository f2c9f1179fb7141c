"""Approximation functions psi with exact evaluation where the shape allows it."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    LogLinearForm,
    LogRatio,
    ceil_scale,
    compare_log_form,
    rational_log_ratio,
)
from .errors import CapabilityError, DomainError


@dataclass(frozen=True)
class SteppedGeometric:
    """psi(n) = c * beta ** -ceil((p*n + q) / r)."""

    c: Fraction
    beta: int
    p: int
    q: int = 0
    r: int = 1

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c <= 0:
            raise DomainError("psi coefficient c must be positive")
        if self.beta < 2 or self.p < 0 or self.r < 1:
            raise DomainError("need beta >= 2, p >= 0, r >= 1")

    def exponent(self, n: int) -> int:
        return -((-(self.p * n + self.q)) // self.r)

    def to_string(self) -> str:
        return f"geom:c={self.c},beta={self.beta},p={self.p},q={self.q},r={self.r}"


@dataclass(frozen=True)
class FloatOnly:
    """psi(n) = c * t**-n * n**-tau, usable only for dimension questions."""

    t: int
    c: float = 1.0
    tau: float = 0.0

    def __post_init__(self):
        if self.t < 2 or self.c <= 0 or self.tau < 0:
            raise DomainError("need t >= 2, c > 0, tau >= 0")

    def to_string(self) -> str:
        return f"float:t={self.t},c={self.c!r},tau={self.tau!r}"


@dataclass(frozen=True)
class LogRate:
    """psi(n) = c * beta ** -(rate * n) with rate = num / den, a ratio of log forms.

    Covers irrational rates such as log 3 / log(3/2) while keeping the
    slope comparisons exact.
    """

    beta: int
    num: LogLinearForm
    den: LogLinearForm
    c: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if self.beta < 2 or self.c <= 0:
            raise DomainError("need beta >= 2 and c > 0")
        if compare_log_form(self.den) <= 0:
            raise DomainError("rate denominator must be a positive log form")
        if compare_log_form(self.num) < 0:
            raise DomainError("rate must be non-negative")

    @property
    def rate(self) -> float:
        return float(self.num) / float(self.den)

    def to_string(self) -> str:
        return f"lograte:beta={self.beta},num={self.num},den={self.den},c={self.c}"


PsiSpec = SteppedGeometric | FloatOnly | LogRate


def parse_psi(text: str) -> PsiSpec:
    """Parse ``geom:c=..,beta=..,p=..,q=..,r=..``, ``float:t=..,c=..,tau=..`` or
    ``lograte:beta=..,num=<log form>,den=<log form>[,c=..]``."""
    kind, _, rest = text.partition(":")
    fields = {}
    for part in filter(None, rest.split(",")):
        key, eq, val = part.partition("=")
        if not eq:
            raise DomainError(f"bad psi field {part!r}")
        fields[key.strip()] = val.strip()
    try:
        if kind == "geom":
            return SteppedGeometric(
                Fraction(fields.get("c", "1")), int(fields["beta"]), int(fields["p"]),
                int(fields.get("q", "0")), int(fields.get("r", "1")),
            )
        if kind == "float":
            return FloatOnly(int(fields["t"]), float(fields.get("c", "1")),
                             float(fields.get("tau", "0")))
        if kind == "lograte":
            return LogRate(int(fields["beta"]), LogLinearForm.parse(fields["num"]),
                           LogLinearForm.parse(fields["den"]), Fraction(fields.get("c", "1")))
    except KeyError as exc:
        raise DomainError(f"psi spec {text!r} misses field {exc}") from None
    except ValueError as exc:
        raise DomainError(f"psi spec {text!r}: {exc}") from None
    raise DomainError(f"unknown psi kind {kind!r}")


def psi_json(psi: PsiSpec) -> dict:
    if isinstance(psi, SteppedGeometric):
        return {"variant": "SteppedGeometric", "c": str(psi.c), "beta": psi.beta,
                "p": psi.p, "q": psi.q, "r": psi.r}
    if isinstance(psi, FloatOnly):
        return {"variant": "FloatOnly", "t": psi.t, "c": psi.c, "tau": psi.tau}
    return {"variant": "LogRate", "beta": psi.beta, "num": str(psi.num),
            "den": str(psi.den), "c": str(psi.c)}


def eval_exact(psi: PsiSpec, n: int) -> Fraction:
    if not isinstance(psi, SteppedGeometric):
        raise CapabilityError(f"{type(psi).__name__} has no exact rational values")
    if n < 1:
        raise DomainError("n must be >= 1")
    e = psi.exponent(n)
    return psi.c / Fraction(psi.beta) ** e


def eval_float(psi: PsiSpec, n: int) -> float:
    if isinstance(psi, SteppedGeometric):
        return float(eval_exact(psi, n))
    if isinstance(psi, FloatOnly):
        return psi.c * psi.t ** (-n) * n ** (-psi.tau)
    return float(psi.c) * psi.beta ** (-psi.rate * n)


@dataclass(frozen=True)
class Lambda:
    value: float
    exact: LogRatio | None = None


def lambda_psi(psi: PsiSpec, t: int) -> Lambda:
    """liminf of -log psi(n) / (n log t)."""
    if t < 2:
        raise DomainError("t must be >= 2")
    if isinstance(psi, SteppedGeometric):
        exact = LogRatio(Fraction(psi.p, psi.r), psi.beta, t)
        return Lambda(float(exact), exact)
    if isinstance(psi, FloatOnly):
        rho = rational_log_ratio(psi.t, t)
        if rho is not None:
            return Lambda(float(rho), LogRatio(1, psi.t, t))
        return Lambda(math.log(psi.t) / math.log(t))
    return Lambda(psi.rate * math.log(psi.beta) / math.log(t))


def threshold_psi(b: int, alpha2: Fraction, coef=1, extra: int = 1) -> SteppedGeometric:
    """coef * b ** -(ceil(alpha2 * n) + extra) as a stepped form."""
    a = Fraction(alpha2)
    return SteppedGeometric(Fraction(coef), b, a.numerator, extra * a.denominator, a.denominator)


def _slope(psi: SteppedGeometric) -> LogLinearForm:
    return LogLinearForm.log(psi.beta, Fraction(psi.p, psi.r))


def _le_at(lhs: SteppedGeometric, rhs: SteppedGeometric, n: int) -> bool:
    # lhs(n) <= rhs(n) via exact log form: log c_r - e_r log beta_r - log c_l + e_l log beta_l >= 0
    form = (
        LogLinearForm.log_rational(rhs.c)
        - LogLinearForm.log_rational(lhs.c)
        + LogLinearForm.log(lhs.beta, lhs.exponent(n))
        - LogLinearForm.log(rhs.beta, rhs.exponent(n))
    )
    return compare_log_form(form) >= 0


def eventually_le(lhs: PsiSpec, rhs: SteppedGeometric) -> tuple[bool, int | None]:
    """Whether lhs(n) <= rhs(n) for all large n, and the least N0 from which it holds.

    N0 is None when the answer is False or when lhs is not exactly evaluable.
    """
    if isinstance(lhs, FloatOnly):
        raise CapabilityError("threshold comparison needs an exact psi form")
    if isinstance(lhs, LogRate):
        rho = rational_log_ratio(lhs.beta, rhs.beta)
        if rho is None:
            raise CapabilityError("log-rate psi needs a base dependent on the threshold base")
        diff = lhs.num.scale(rho) - lhs.den.scale(Fraction(rhs.p, rhs.r))
        sign = compare_log_form(diff)
        if sign == 0:
            raise CapabilityError("equal decay rates; offsets are not exactly comparable")
        return (sign > 0, None)

    sigma = compare_log_form(_slope(lhs) - _slope(rhs))
    if sigma < 0:
        return (False, None)
    period = lhs.r * rhs.r // math.gcd(lhs.r, rhs.r)
    if sigma == 0:
        # The difference is exactly periodic, so one period decides everything.
        ok = all(_le_at(lhs, rhs, n) for n in range(1, period + 1))
        return (True, 1) if ok else (False, None)
    # Along each residue class the gap grows, so the failing n form a prefix.
    last_fail = 0
    for start in range(1, period + 1):
        if _le_at(lhs, rhs, start):
            continue
        hi = 1
        while not _le_at(lhs, rhs, start + hi * period):
            hi *= 2
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _le_at(lhs, rhs, start + mid * period):
                hi = mid
            else:
                lo = mid
        last_fail = max(last_fail, start + lo * period)
    return (True, last_fail + 1)


def eventually_below_threshold(psi: PsiSpec, b: int, alpha2: Fraction) -> tuple[bool, int | None]:
    """Decide psi(n) <= b ** -(ceil(alpha2 n) + 1) for all large n."""
    if isinstance(psi, FloatOnly):
        raise CapabilityError("FloatOnly psi cannot be compared exactly")
    return eventually_le(psi, threshold_psi(b, alpha2))


def below_threshold_at(psi: PsiSpec, b: int, alpha2: Fraction, n: int) -> bool:
    return eval_exact(psi, n) <= Fraction(1, b ** (ceil_scale(alpha2, n) + 1))
