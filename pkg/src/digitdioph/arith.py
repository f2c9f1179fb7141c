"""Exact integer and rational helpers.

Everything here is decided with integers and fractions; floats appear only
in ``__float__`` conversions meant for display.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from . import budgets
from .errors import CapabilityError, DomainError, ResourceError


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as ``{prime: exponent}``; ``factorize(1) == {}``."""
    if not isinstance(n, int) or n <= 0:
        raise DomainError(f"factorize needs a positive integer, got {n!r}")
    out: dict[int, int] = {}
    for q in (2, 3):
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    q = 5
    while q * q <= n:
        for cand in (q, q + 2):
            while n % cand == 0:
                out[cand] = out.get(cand, 0) + 1
                n //= cand
        q += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return factorize(q) == {q: 1}


def valuation(q: int, n: int) -> int:
    """Exponent of the prime ``q`` in ``n``."""
    if not is_prime(q):
        raise DomainError(f"{q} is not prime")
    if n <= 0:
        raise DomainError(f"valuation needs n >= 1, got {n}")
    k = 0
    while n % q == 0:
        n //= q
        k += 1
    return k


def power_divides(t: int, n: int, b: int, m: int) -> bool:
    """Whether t**n divides b**m, decided from valuations without forming the powers."""
    if t < 1 or b < 1 or n < 0 or m < 0:
        raise DomainError("power_divides needs t, b >= 1 and n, m >= 0")
    if n == 0 or t == 1:
        return True
    fb = factorize(b)
    for q, e in factorize(t).items():
        if n * e > m * fb.get(q, 0):
            return False
    return True


def ceil_scale(a: Fraction, n: int) -> int:
    """Exact ceiling of a*n."""
    a = Fraction(a)
    return -((-a.numerator * n) // a.denominator)


def floor_scale(a: Fraction, n: int) -> int:
    a = Fraction(a)
    return (a.numerator * n) // a.denominator


def rational_log_ratio(a: int, d: int) -> Fraction | None:
    """Return rho with log a = rho * log d when that rho is rational, else None."""
    if a < 1 or d < 2:
        raise DomainError("rational_log_ratio needs a >= 1 and d >= 2")
    if a == 1:
        return Fraction(0)
    fa, fd = factorize(a), factorize(d)
    if set(fa) != set(fd):
        return None
    ratios = {Fraction(fa[q], fd[q]) for q in fa}
    return ratios.pop() if len(ratios) == 1 else None


@dataclass(frozen=True)
class LogLinearForm:
    """A finite sum of c_i * log(a_i) with rational c_i and integer a_i >= 2."""

    terms: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, Fraction] = {}
        for c, a in self.terms:
            if not isinstance(a, int) or a < 1:
                raise DomainError(f"log base must be a positive integer, got {a!r}")
            if a == 1:
                continue
            merged[a] = merged.get(a, Fraction(0)) + Fraction(c)
        norm = tuple((c, a) for a, c in sorted(merged.items()) if c != 0)
        object.__setattr__(self, "terms", norm)

    @classmethod
    def log(cls, a: int, coef=1) -> "LogLinearForm":
        return cls(((Fraction(coef), a),))

    @classmethod
    def log_rational(cls, x: Fraction, coef=1) -> "LogLinearForm":
        x = Fraction(x)
        if x <= 0:
            raise DomainError("log of a non-positive rational")
        c = Fraction(coef)
        return cls(((c, x.numerator), (-c, x.denominator)))

    @classmethod
    def parse(cls, text: str) -> "LogLinearForm":
        """Parse strings such as ``log3-log2`` or ``2log3 - 1/2log5``."""
        s = text.replace(" ", "").replace("*", "")
        if not s:
            raise DomainError("empty log form")
        pat = re.compile(r"([+-]?)(\d+(?:/\d+)?)?log(\d+)")
        pos, terms = 0, []
        for m in pat.finditer(s):
            if m.start() != pos:
                raise DomainError(f"cannot parse log form {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            terms.append((sign * coef, int(m.group(3))))
            pos = m.end()
        if pos != len(s) or not terms:
            raise DomainError(f"cannot parse log form {text!r}")
        return cls(tuple(terms))

    def __add__(self, other: "LogLinearForm") -> "LogLinearForm":
        return LogLinearForm(self.terms + other.terms)

    def __neg__(self) -> "LogLinearForm":
        return LogLinearForm(tuple((-c, a) for c, a in self.terms))

    def __sub__(self, other: "LogLinearForm") -> "LogLinearForm":
        return self + (-other)

    def scale(self, k) -> "LogLinearForm":
        k = Fraction(k)
        return LogLinearForm(tuple((k * c, a) for c, a in self.terms))

    def __float__(self) -> float:
        return float(sum(float(c) * math.log(a) for c, a in self.terms))

    def sign(self, max_bits: int | None = None) -> int:
        return compare_log_form(self, max_bits)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, a in self.terms:
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag}"
            parts.append(("-" if c < 0 else "+") + f"{coef}log{a}")
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


def compare_log_form(form: LogLinearForm, max_bits: int | None = None) -> int:
    """Exact sign of a log-linear form.

    Denominators are cleared to a common M and the integer products
    prod a**(M*c) over positive and negative coefficients are compared.
    """
    if max_bits is None:
        max_bits = budgets.DEFAULT.bits
    if not form.terms:
        return 0
    m = 1
    for c, _ in form.terms:
        m = m * c.denominator // math.gcd(m, c.denominator)
    pos, neg = [], []
    cost = 0
    for c, a in form.terms:
        e = int(c * m)
        cost += abs(e) * a.bit_length()
        (pos if e > 0 else neg).append((a, abs(e)))
    if cost > max_bits:
        raise ResourceError(f"log form needs about {cost} bits, budget is {max_bits}")
    lhs = math.prod(a**e for a, e in pos)
    rhs = math.prod(a**e for a, e in neg)
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True)
class LogRatio:
    """coef * log(num) / log(den), used for gamma, lambda and irrational s."""

    coef: Fraction
    num: int
    den: int

    def __post_init__(self):
        object.__setattr__(self, "coef", Fraction(self.coef))
        if self.num < 1 or self.den < 2:
            raise DomainError("LogRatio needs num >= 1 and den >= 2")

    def __float__(self) -> float:
        return float(self.coef) * math.log(self.num) / math.log(self.den)

    def times_log(self, base: int) -> LogLinearForm:
        """This value times log(base) as a log-linear form, when that is exact."""
        rho = rational_log_ratio(base, self.den)
        if rho is None:
            raise CapabilityError(
                f"log {base} / log {self.den} is irrational; no exact linear form"
            )
        return LogLinearForm.log(self.num, self.coef * rho)

    def as_fraction(self) -> Fraction | None:
        rho = rational_log_ratio(self.num, self.den)
        return None if rho is None else self.coef * rho

    @classmethod
    def parse(cls, text: str) -> "LogRatio":
        """Accepts ``log2/log3`` or ``1/2*log2/log3``."""
        s = text.replace(" ", "")
        m = re.fullmatch(r"(?:(\d+(?:/\d+)?)\*?)?log(\d+)/log(\d+)", s)
        if not m:
            raise DomainError(f"cannot parse log ratio {text!r}")
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        return cls(coef, int(m.group(2)), int(m.group(3)))


def fraction_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}
