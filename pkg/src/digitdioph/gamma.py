"""The hit sets Gamma_n(psi): numerators p in 0..t^n whose open psi(n)-ball
around p / t^n meets C(b, D), computed three independent ways."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product

from .arith import ceil_scale, power_divides
from . import budgets
from .cantor import MissingDigitSet, hits_scaled
from .errors import DomainError, HypothesisError, ResourceError
from .params import DigitProfile, MultClass, ParamProfile
from .psi import eval_exact


class GammaMethod(str, Enum):
    BRUTE_FORCE = "BruteForce"
    ENDPOINT = "EndpointCharacterized"
    RESIDUE_DP = "ResidueDP"


@dataclass
class GammaResult:
    n: int
    method: GammaMethod
    count: int
    candidates: int
    filtered: bool = True
    members: list[int] | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self, with_members: bool = True) -> dict:
        out = {
            "n": self.n,
            "method": self.method.value,
            "count": self.count,
            "candidates": self.candidates,
            "filtered": self.filtered,
            "notes": list(self.notes),
        }
        if with_members and self.members is not None:
            out["members"] = list(self.members)
        return out


@dataclass(frozen=True)
class ProofSets:
    n: int
    l0: int
    l1: int
    ntilde: int
    r: int
    m0: int
    refined_level: int
    M: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def proof_sets(profile: ParamProfile, n: int) -> ProofSets:
    """Block decomposition n = l0 * ntilde + r and the level m0 with t^n | b^m0."""
    if profile.mult_class is MultClass.INDEPENDENT_DIFFERENT_PRIMES:
        raise HypothesisError("needs a shared prime support")
    if n < 1:
        raise DomainError("n must be >= 1")
    l0, l1 = profile.l0, profile.l1
    ntilde, r = divmod(n, l0)
    tail = ceil_scale(profile.alpha2, r)
    m0 = ceil_scale(profile.alpha2, l0 * ntilde) + tail
    refined = l1 * ntilde + tail
    if not power_divides(profile.t, n, profile.b, m0):
        raise AssertionError("t^n must divide b^m0")
    M = profile.b**m0 // profile.t**n
    return ProofSets(n, l0, l1, ntilde, r, m0, refined, M)


def _radius(psi, n: int) -> Fraction:
    rad = eval_exact(psi, n)
    if rad <= 0:
        raise DomainError("psi(n) must be positive")
    return rad


def _ball_setup(t: int, n: int, rad: Fraction):
    tn = t**n
    Q = tn * rad.denominator // math.gcd(tn, rad.denominator)
    return tn, Q, Q // tn, rad.numerator * (Q // rad.denominator)


def _scan(args):
    b, digits, step, R, Q, lo_p, hi_p = args
    return [p for p in range(lo_p, hi_p) if hits_scaled(b, digits, p * step - R, p * step + R, Q, False)]


def hit_numerators(S: MissingDigitSet, t: int, n: int, radius: Fraction,
                   budget: int | None = None, workers: int = 1) -> list[int]:
    """All p in 0..t^n whose open ball of the given radius around p/t^n meets C."""
    budget = budgets.DEFAULT.enum if budget is None else budget
    tn = t**n
    if tn + 1 > budget:
        raise ResourceError(f"t^n + 1 = {tn + 1} candidates exceed the budget {budget}")
    radius = Fraction(radius)
    tn, Q, step, R = _ball_setup(t, n, radius)
    # only centres within radius of the hull [min C, max C] can hit
    lo_p = max(0, math.floor((S.min_point - radius) * tn))
    hi_p = min(tn, math.ceil((S.max_point + radius) * tn)) + 1
    if workers <= 1 or hi_p - lo_p < 20000:
        return _scan((S.b, S.D, step, R, Q, lo_p, hi_p))
    chunk = -(-(hi_p - lo_p) // workers)
    jobs = [(S.b, S.D, step, R, Q, a, min(a + chunk, hi_p)) for a in range(lo_p, hi_p, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_scan, jobs))
    return [p for part in parts for p in part]


def gamma_bruteforce(S: MissingDigitSet, t: int, psi, n: int,
                     budget: int | None = None, workers: int = 1) -> GammaResult:
    if n < 1:
        raise DomainError("n must be >= 1")
    members = hit_numerators(S, t, n, _radius(psi, n), budget, workers)
    return GammaResult(n, GammaMethod.BRUTE_FORCE, len(members), t**n + 1, True, members)


def _open_ball_filter(S: MissingDigitSet, t: int, n: int, rad: Fraction, ps) -> list[int]:
    tn, Q, step, R = _ball_setup(t, n, rad)
    return sorted(p for p in set(ps) if hits_scaled(S.b, S.D, p * step - R, p * step + R, Q, False))


def _check_small_radius(profile: ParamProfile, psi, n: int) -> Fraction:
    rad = _radius(psi, n)
    bound = Fraction(1, profile.b ** (ceil_scale(profile.alpha2, n) + 1))
    if rad > bound:
        raise HypothesisError(
            f"psi({n}) = {rad} exceeds b^-(ceil(alpha2 n)+1) = {bound}; "
            "the endpoint characterization does not apply"
        )
    return rad


def gamma_endpoint(S: MissingDigitSet, t: int, psi, n: int, profile: ParamProfile,
                   dprofile: DigitProfile, budget: int | None = None) -> GammaResult:
    """Gamma_n via its endpoint superset, then the exact open-ball filter.

    The superset uses level m0, or the lower refined level when D avoids
    D1 and D2.
    """
    budget = budgets.DEFAULT.enum if budget is None else budget
    if profile.mult_class is not MultClass.INDEPENDENT_SAME_PRIMES:
        raise HypothesisError("endpoint characterization needs an independent same-prime pair")
    if (profile.b, profile.t) != (S.b, t):
        raise DomainError("profile does not match (b, t)")
    rad = _check_small_radius(profile, psi, n)
    ps_ = proof_sets(profile, n)
    refined = bool(dprofile.d_subset_dstar)
    level = ps_.refined_level if refined else ps_.m0
    if len(S.D) ** level * 2 > budget:
        raise ResourceError(f"{len(S.D)}^{level} digit strings exceed the budget")
    b, tn, bm = S.b, t**n, S.b**level
    cands = []
    strings = 0
    for digits in product(S.D, repeat=level):
        v = 0
        for d in digits:
            v = v * b + d
        for N in (v, v + 1):
            strings += 1
            if (N * tn) % bm == 0:
                cands.append(N * tn // bm)
    members = _open_ball_filter(S, t, n, rad, cands)
    notes = [f"level={level}", "refined" if refined else "unrefined",
             f"candidate_set={len(set(cands))}", f"endpoints_scanned={strings}"]
    return GammaResult(n, GammaMethod.ENDPOINT, len(members), len(cands), True, members, notes)


def _residue_layers(b: int, digits, length: int, M: int, offset: int, budget: int):
    """Counts of D-strings by tail residue, least significant digit first.

    A tail of j digits must be divisible by gcd(b^j, M) for the full value
    plus offset to be divisible by M; other states are dropped.
    """
    layers = [{offset % M: 1}]
    power = 1 % M
    for j in range(length):
        nxt_power = power * b % M
        g = math.gcd(nxt_power, M)
        cur = layers[-1]
        nxt: dict[int, int] = {}
        for res, cnt in cur.items():
            for d in digits:
                r2 = (res + d * power) % M
                if r2 % g == 0:
                    nxt[r2] = nxt.get(r2, 0) + cnt
        if len(nxt) > budget:
            raise ResourceError(f"{len(nxt)} reachable residues exceed the budget {budget}")
        layers.append(nxt)
        power = nxt_power
    return layers


def count_strings_mod(b: int, digits, length: int, M: int, offset: int = 0,
                      budget: int | None = None) -> int:
    """#{s in D^length : M divides value(s) + offset}."""
    budget = budgets.DEFAULT.residue if budget is None else budget
    return _residue_layers(b, digits, length, M, offset, budget)[-1].get(0, 0)


def _strings_mod(b: int, digits, length: int, M: int, offset: int, budget: int):
    layers = _residue_layers(b, digits, length, M, offset, budget)
    # walk back from residue 0 keeping only states that lead there
    out = []
    powers = [pow(b, j, M) for j in range(length)]

    def walk(j: int, res: int, value: int):
        if j == 0:
            if res == offset % M:
                out.append(value)
            return
        pw = powers[j - 1]
        for d in digits:
            prev = (res - d * pw) % M
            if prev in layers[j - 1]:
                walk(j - 1, prev, value + d * b ** (j - 1))

    if 0 in layers[-1]:
        walk(length, 0, 0)
    return out


def gamma_residue_dp(S: MissingDigitSet, t: int, psi, n: int, profile: ParamProfile,
                     members: bool = False, budget: int | None = None) -> GammaResult:
    """Digit strings of length m0 whose value is 0 or -1 mod M = b^m0 / t^n.

    Without ``members`` the count is the pre-filter string count, which
    can exceed #Gamma_n when neighbouring basic intervals share an endpoint.
    """
    budget = budgets.DEFAULT.residue if budget is None else budget
    if (profile.b, profile.t) != (S.b, t):
        raise DomainError("profile does not match (b, t)")
    rad = _check_small_radius(profile, psi, n)
    ps_ = proof_sets(profile, n)
    m0, M = ps_.m0, ps_.M
    if M == 1:
        candidates = len(S.D) ** m0
    else:
        candidates = (count_strings_mod(S.b, S.D, m0, M, 0, budget)
                      + count_strings_mod(S.b, S.D, m0, M, 1, budget))
    notes = [f"m0={m0}", f"M={M}"]
    if not members:
        return GammaResult(n, GammaMethod.RESIDUE_DP, candidates, candidates, False, None, notes)
    if candidates * 2 > budgets.DEFAULT.enum:
        raise ResourceError("too many candidate strings to reconstruct members")
    ps = [v // M for v in _strings_mod(S.b, S.D, m0, M, 0, budget)]
    if M > 1:
        ps += [(v + 1) // M for v in _strings_mod(S.b, S.D, m0, M, 1, budget)]
    else:
        ps += [v + 1 for v in ps]
    found = _open_ball_filter(S, t, n, rad, ps)
    return GammaResult(n, GammaMethod.RESIDUE_DP, len(found), candidates, True, found, notes)


def upsilon_count(S: MissingDigitSet, t: int, n: int, profile: ParamProfile,
                  budget: int | None = None) -> dict:
    """Tail tuples of length m0 - alpha1 n with M | tail or M | tail + 1."""
    if profile.mult_class is not MultClass.INDEPENDENT_SAME_PRIMES:
        raise HypothesisError("needs an independent same-prime pair")
    head = profile.alpha1 * n
    if head.denominator != 1:
        raise HypothesisError("alpha1 * n must be an integer")
    ps_ = proof_sets(profile, n)
    length = ps_.m0 - int(head)
    M = ps_.M
    if M == 1:
        count = len(S.D) ** length
    else:
        count = (count_strings_mod(S.b, S.D, length, M, 0, budget)
                 + count_strings_mod(S.b, S.D, length, M, 1, budget))
    return {"n": n, "tail_length": length, "M": M, "count": count,
            "flag": "generalized-upsilon"}
