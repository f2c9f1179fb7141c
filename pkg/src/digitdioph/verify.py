"""Executable checks of the divisibility, forced-digit and hit-set lemmas."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .arith import ceil_scale, factorize, power_divides
from . import budgets
from .cantor import MissingDigitSet, endpoint_member, grid_count, membership
from .errors import HypothesisError, ResourceError
from .gamma import (
    count_strings_mod,
    gamma_endpoint,
    gamma_residue_dp,
    hit_numerators,
    proof_sets,
)
from .params import MultClass, build_digit_profile, build_param_profile
from .psi import eval_exact, eventually_le, threshold_psi


@dataclass
class CheckReport:
    check_name: str
    instances_tested: int = 0
    failures: list[dict] = field(default_factory=list)
    max_ratio: float | None = None
    details: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"check_name": self.check_name, "instances_tested": self.instances_tested,
                "failures": self.failures, "max_ratio": self.max_ratio,
                "passed": self.passed, "details": self.details, "notes": self.notes}


def check_divisibility(b: int, t: int, n_max: int) -> CheckReport:
    """t^n divides b^ceil(alpha2 n) for n = 1..n_max."""
    prof = build_param_profile(b, t)
    rep = CheckReport("divisibility")
    fb, ft = factorize(b), factorize(t)
    for n in range(1, n_max + 1):
        m = ceil_scale(prof.alpha2, n)
        # second path: compare each prime's exponent directly
        direct = all(n * ft[q] <= m * fb[q] for q in ft)
        ok = power_divides(t, n, b, m)
        rep.instances_tested += 1
        if not (ok and direct):
            rep.failures.append({"n": n, "m": m})
    return rep


def _forced_exhaustive(b: int, allowed, n: int, modulus: int, offset: int) -> list[tuple]:
    sols = []
    for digits in product(allowed, repeat=n):
        v = 0
        for d in digits:
            v = v * b + d
        if (v + offset) % modulus == 0:
            sols.append(digits)
    return sols


def check_forced_digits(b: int, t: int, n: int, budget: int | None = None) -> CheckReport:
    """Digits avoiding D1 with b*^k | value must all be 0; dually for D2 and b-1.

    Every length k = 1..n is scanned exhaustively when the budget allows,
    otherwise solutions are counted with the residue DP.
    """
    budget = budgets.DEFAULT.enum if budget is None else budget
    prof = build_param_profile(b, t)
    if prof.mult_class is not MultClass.INDEPENDENT_SAME_PRIMES:
        raise HypothesisError("forced digits need an independent same-prime pair")
    dp = build_digit_profile(prof, [0, b - 1])
    bstar = prof.bstar
    rep = CheckReport("forced_digits")
    for k in range(1, n + 1):
        mod = bstar**k
        for offset, banned, forced in ((0, dp.D1, 0), (1, dp.D2, b - 1)):
            allowed = [x for x in range(b) if x not in set(banned)]
            rep.instances_tested += 1
            if len(allowed) ** k <= budget:
                sols = _forced_exhaustive(b, allowed, k, mod, offset)
                ok = sols == [tuple([forced] * k)]
                method = "exhaustive"
            else:
                cnt = count_strings_mod(b, allowed, k, mod, offset)
                v = sum(forced * b**j for j in range(k))
                ok = cnt == 1 and (v + offset) % mod == 0
                method = "residue-dp"
            rep.details.append({"k": k, "dual": bool(offset), "method": method})
            if not ok:
                rep.failures.append({"k": k, "dual": bool(offset)})
    return rep


def _setup(b, t, D):
    prof = build_param_profile(b, t)
    dprof = build_digit_profile(prof, D)
    return prof, dprof, MissingDigitSet(b, tuple(D))


def _require_threshold(prof, psi, n_max):
    for n in range(1, n_max + 1):
        if eval_exact(psi, n) > Fraction(1, prof.b ** (ceil_scale(prof.alpha2, n) + 1)):
            raise HypothesisError(f"psi({n}) is above b^-(ceil(alpha2 n)+1)")


def _endpoint_numerators(S: MissingDigitSet, t: int, n: int, level: int) -> set[int]:
    b, tn, bm = S.b, t**n, S.b**level
    out = set()
    for digits in product(S.D, repeat=level):
        v = 0
        for d in digits:
            v = v * b + d
        for N in (v, v + 1):
            if (N * tn) % bm == 0:
                out.add(N * tn // bm)
    return out


def check_gamma_chain(b: int, t: int, D, psi, n_max: int) -> CheckReport:
    """Gamma_n within G_n within the refined endpoint set, and all methods agreeing."""
    prof, dprof, S = _setup(b, t, D)
    if prof.mult_class is not MultClass.INDEPENDENT_SAME_PRIMES:
        raise HypothesisError("the chain needs an independent same-prime pair")
    _require_threshold(prof, psi, n_max)
    rep = CheckReport("gamma_chain")
    for n in range(1, n_max + 1):
        ps_ = proof_sets(prof, n)
        gam = set(hit_numerators(S, t, n, eval_exact(psi, n)))
        g_set = _endpoint_numerators(S, t, n, ps_.m0)
        row = {"n": n, "gamma": len(gam), "G": len(g_set)}
        bad = []
        if not gam <= g_set:
            bad.append("gamma not in G")
        if dprof.d_subset_dstar:
            tn = t**n
            outside = [p for p in g_set if not endpoint_member(S, Fraction(p, tn), ps_.refined_level)]
            row["refined_level"] = ps_.refined_level
            if outside:
                bad.append("G not in refined endpoint set")
        ep = gamma_endpoint(S, t, psi, n, prof, dprof)
        dp = gamma_residue_dp(S, t, psi, n, prof, members=True)
        if set(ep.members) != gam:
            bad.append("endpoint method disagrees")
        if set(dp.members) != gam:
            bad.append("residue DP disagrees")
        row["dp_candidates"] = dp.candidates
        rep.details.append(row)
        rep.instances_tested += 1
        if bad:
            rep.failures.append({"n": n, "problems": bad})
    return rep


def exact_gamma_count(S, t, psi, n, prof, dprof, budget=None) -> int | None:
    budget = budgets.DEFAULT.enum if budget is None else budget
    if t**n + 1 <= budget:
        return len(hit_numerators(S, t, n, eval_exact(psi, n), budget))
    try:
        if prof.mult_class is MultClass.INDEPENDENT_SAME_PRIMES:
            return gamma_endpoint(S, t, psi, n, prof, dprof, budget).count
    except (HypothesisError, ResourceError):
        return None
    return None


def check_covering_bound(b: int, t: int, D, psi, n_max: int,
                         n_exact_max: int = 6) -> CheckReport:
    """Part (i): #Gamma_n <= 2 N_{t^-n}(C) when psi(n) <= t^-n / 2.
    Part (ii): the ratio of DP candidate counts to b^(alpha1 gamma n)."""
    prof, dprof, S = _setup(b, t, D)
    rep = CheckReport("covering_bound")
    for n in range(1, min(n_max, n_exact_max) + 1):
        if eval_exact(psi, n) > Fraction(1, 2 * t**n):
            rep.notes.append(f"part (i) skipped at n={n}: psi(n) > t^-n/2")
            continue
        cnt = exact_gamma_count(S, t, psi, n, prof, dprof)
        if cnt is None:
            rep.notes.append(f"part (i) skipped at n={n}: budget")
            continue
        cover = grid_count(S, Fraction(1, t**n))
        rep.instances_tested += 1
        rep.details.append({"n": n, "part": "i", "gamma": cnt, "grid": cover})
        if cnt > 2 * cover:
            rep.failures.append({"n": n, "part": "i", "gamma": cnt, "grid": cover})
    applicable = (prof.mult_class is MultClass.INDEPENDENT_SAME_PRIMES
                  and dprof.d_subset_dstar and dprof.has_extreme_digit)
    if not applicable:
        rep.notes.append("part (ii) not applicable")
        return rep
    best = None
    for n in range(1, n_max + 1):
        dp = gamma_residue_dp(S, t, psi, n, prof)
        head = prof.alpha1 * n
        if head.denominator == 1:
            ratio = Fraction(dp.candidates, len(D) ** int(head))
            fr = float(ratio)
        else:
            fr = dp.candidates / len(D) ** float(head)
        rep.details.append({"n": n, "part": "ii", "candidates": dp.candidates, "ratio": fr})
        rep.instances_tested += 1
        best = fr if best is None else max(best, fr)
    rep.max_ratio = best
    return rep


def check_wb_alpha1_identity(b: int, t: int, D, psi, n_max: int) -> CheckReport:
    """For integer alpha1: the hit points with denominator t^n equal those with
    denominator b^(alpha1 n), level by level."""
    prof, dprof, S = _setup(b, t, D)
    if prof.mult_class is not MultClass.INDEPENDENT_SAME_PRIMES:
        raise HypothesisError("needs an independent same-prime pair")
    if prof.alpha1.denominator != 1:
        raise HypothesisError("alpha1 must be an integer")
    if not dprof.d_subset_dstar:
        raise HypothesisError("D must avoid D1 and D2")
    _require_threshold(prof, psi, n_max)
    a1 = int(prof.alpha1)
    rep = CheckReport("wb_alpha1_identity")
    for n in range(1, n_max + 1):
        rad = eval_exact(psi, n)
        left = {Fraction(p, t**n) for p in hit_numerators(S, t, n, rad)}
        right = {Fraction(q, b ** (a1 * n)) for q in hit_numerators(S, b**a1, n, rad)}
        rep.instances_tested += 1
        rep.details.append({"n": n, "t_side": len(left), "b_side": len(right)})
        if left != right:
            rep.failures.append({"n": n, "only_t": len(left - right), "only_b": len(right - left)})
    return rep


def check_emptiness(b: int, t: int, D, psi, n_max: int) -> CheckReport:
    """Gamma_n is empty from N0 on when D avoids 0 and b-1 and psi is small enough."""
    prof, dprof, S = _setup(b, t, D)
    if dprof.has_extreme_digit:
        raise HypothesisError("D contains 0 or b-1")
    below, n0 = eventually_le(psi, threshold_psi(b, prof.alpha2))
    if not below:
        sharp = threshold_psi(b, prof.alpha2, Fraction(dprof.mstar, b - 1), extra=0)
        below, n0 = eventually_le(psi, sharp)
    if not below:
        raise HypothesisError("psi is not eventually below the emptiness threshold")
    rep = CheckReport("emptiness")
    rep.notes.append(f"N0={n0}")
    for n in range(n0, n_max + 1):
        hits = hit_numerators(S, t, n, eval_exact(psi, n))
        rep.instances_tested += 1
        rep.details.append({"n": n, "count": len(hits)})
        if hits:
            rep.failures.append({"n": n, "count": len(hits), "sample": hits[:5]})
    return rep


def half_point_witness(b: int, t: int, D) -> bool:
    """b odd, t even and (b-1)/2 in D put 1/2 in C and in every W_t(psi)."""
    S = MissingDigitSet(b, tuple(D))
    if b % 2 == 0 or t % 2 == 1 or (b - 1) // 2 not in S.D:
        raise HypothesisError("needs b odd, t even and (b-1)/2 in D")
    return membership(S, Fraction(1, 2))


def random_same_prime_pairs(count: int, limit: int = 10**4, seed: int = 0,
                            independent_only: bool = False) -> list[tuple[int, int]]:
    """Random (b, t) with b >= 3, both <= limit and identical prime supports."""
    rng = random.Random(seed)
    small_primes = [2, 3, 5, 7, 11, 13]
    pairs: list[tuple[int, int]] = []
    tries = 0
    while len(pairs) < count:
        tries += 1
        if tries > 10**6:
            raise RuntimeError("could not sample enough pairs")
        k = rng.choice([1, 2, 2, 3])
        primes = rng.sample(small_primes, k)
        b = t = 1
        for q in primes:
            b *= q ** rng.randint(1, 6)
            t *= q ** rng.randint(1, 6)
        if b < 3 or b > limit or t > limit:
            continue
        if independent_only and len(primes) == 1:
            continue
        cls = build_param_profile(b, t).mult_class
        if independent_only and cls is not MultClass.INDEPENDENT_SAME_PRIMES:
            continue
        pairs.append((b, t))
    return pairs


def explore_above_threshold(b: int, t: int, D, c: Fraction, n_max: int) -> list[dict]:
    """Counts of Gamma_n for psi = c b^-(ceil(alpha2 n)+1) with c > 1. Reports only."""
    prof, _, S = _setup(b, t, D)
    rows = []
    for n in range(1, n_max + 1):
        rad = Fraction(c) / b ** (ceil_scale(prof.alpha2, n) + 1)
        rows.append({"n": n, "count": len(hit_numerators(S, t, n, rad))})
    return rows


# names used by the build contract
check_prop31 = check_covering_bound
