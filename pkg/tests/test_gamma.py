from fractions import Fraction
from itertools import product

import pytest

from digitdioph.cantor import MissingDigitSet, successor
from digitdioph.errors import HypothesisError, ResourceError
from digitdioph.gamma import (
    count_strings_mod,
    gamma_bruteforce,
    gamma_endpoint,
    gamma_residue_dp,
    hit_numerators,
    proof_sets,
    upsilon_count,
)
from digitdioph.params import build_digit_profile, build_param_profile
from digitdioph.psi import eval_exact, parse_psi

PSI_612 = parse_psi("geom:c=1,beta=6,p=2,q=1,r=1")
S_612 = MissingDigitSet(6, (0, 1, 4, 5))
P_612 = build_param_profile(6, 12)
DP_612 = build_digit_profile(P_612, S_612.D)


def oracle_hits(S, t, n, rad):
    """Open ball test through the strict successor."""
    out = []
    for p in range(t**n + 1):
        c = Fraction(p, t**n)
        v = successor(S, c - rad, strict=True)
        if v is not None and v < c + rad:
            out.append(p)
    return out


def closed_form_612(n):
    # 2 * 4^n digit-string endpoints minus the 2(4^n - 1)/3 shared ones
    return (4 ** (n + 1) + 2) // 3


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bruteforce_matches_successor_oracle(n):
    rad = eval_exact(PSI_612, n)
    assert hit_numerators(S_612, 12, n, rad) == oracle_hits(S_612, 12, n, rad)


def test_bruteforce_examples():
    S = MissingDigitSet(5, (1, 2))
    assert gamma_bruteforce(S, 5, parse_psi("geom:c=1/4,beta=5,p=1"), 3).count == 0
    C3 = MissingDigitSet(3, (0, 2))
    r = gamma_bruteforce(C3, 3, parse_psi("geom:beta=3,p=2"), 1)
    assert r.members == [0, 1, 2, 3]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_612_hit_count_closed_form(n):
    r = gamma_bruteforce(S_612, 12, PSI_612, n)
    assert r.count == closed_form_612(n)


def test_612_first_level_members():
    # p/12 in {0, 1/6, 1/3, 2/3, 5/6, 1}
    assert gamma_bruteforce(S_612, 12, PSI_612, 1).members == [0, 2, 4, 8, 10, 12]


def test_bruteforce_budget():
    with pytest.raises(ResourceError):
        gamma_bruteforce(S_612, 12, PSI_612, 3, budget=1000)


def test_parallel_scan_is_identical():
    rad = eval_exact(PSI_612, 4)
    assert hit_numerators(S_612, 12, 4, rad, workers=3) == hit_numerators(S_612, 12, 4, rad)


@pytest.mark.parametrize("n,m0,M", [(1, 2, 3), (5, 10, 243)])
def test_proof_sets_612(n, m0, M):
    ps = proof_sets(P_612, n)
    assert (ps.m0, ps.M) == (m0, M)
    assert 6**ps.m0 == M * 12**n


def test_proof_sets_12_18():
    ps = proof_sets(build_param_profile(12, 18), 3)
    assert (ps.l0, ps.l1, ps.ntilde, ps.r, ps.m0, ps.M) == (2, 1, 1, 1, 6, 512)
    assert 12**6 == 512 * 18**3


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_endpoint_equals_bruteforce(n):
    e = gamma_endpoint(S_612, 12, PSI_612, n, P_612, DP_612)
    assert e.members == gamma_bruteforce(S_612, 12, PSI_612, n).members
    assert e.candidates == 2 * 4**n


def test_endpoint_unrefined_fallback():
    S = MissingDigitSet(6, (0, 1, 2, 3))
    d = build_digit_profile(P_612, S.D)
    assert not d.d_subset_dstar
    for n in (1, 2):
        e = gamma_endpoint(S, 12, PSI_612, n, P_612, d)
        assert "unrefined" in e.notes
        assert e.members == gamma_bruteforce(S, 12, PSI_612, n).members


def test_endpoint_needs_small_radius():
    with pytest.raises(HypothesisError):
        gamma_endpoint(S_612, 12, parse_psi("geom:beta=6,p=1"), 1, P_612, DP_612)


def brute_count_mod(b, D, length, M, offset):
    total = 0
    for ds in product(D, repeat=length):
        v = 0
        for d in ds:
            v = v * b + d
        total += (v + offset) % M == 0
    return total


@pytest.mark.parametrize("b,D,length,M,offset", [
    (6, (0, 1, 4, 5), 4, 9, 0), (6, (0, 1, 4, 5), 4, 9, 1), (6, (0, 1, 2, 3), 5, 27, 1),
    (12, (0, 1, 2, 5, 6, 9, 10, 11), 3, 64, 0), (5, (1, 2), 6, 7, 3), (10, (0, 3, 7), 5, 8, 1),
])
def test_count_strings_mod_matches_enumeration(b, D, length, M, offset):
    assert count_strings_mod(b, D, length, M, offset) == brute_count_mod(b, D, length, M, offset)


def test_dp_examples():
    r = gamma_residue_dp(S_612, 12, PSI_612, 1, P_612)
    assert r.candidates == 8 and not r.filtered
    assert [gamma_residue_dp(S_612, 12, PSI_612, n, P_612).count for n in range(1, 11)] == [2 * 4**n for n in range(1, 11)]
    # the dependent pair (3, 3) gives M = 1: all 2^2 strings of length 2 pass
    p33 = build_param_profile(3, 3)
    r = gamma_residue_dp(MissingDigitSet(3, (0, 2)), 3, parse_psi("geom:beta=3,p=2"), 2, p33)
    assert "M=1" in r.notes and r.candidates == 4


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dp_members_equal_bruteforce(n):
    r = gamma_residue_dp(S_612, 12, PSI_612, n, P_612, members=True)
    assert r.members == gamma_bruteforce(S_612, 12, PSI_612, n).members


def test_dp_members_12_18():
    p = build_param_profile(12, 18)
    S = MissingDigitSet(12, (0, 1, 2, 5, 6, 9, 10, 11))
    psi = parse_psi("geom:beta=12,p=2,q=1")
    for n in (1, 2):
        r = gamma_residue_dp(S, 18, psi, n, p, members=True)
        assert r.members == gamma_bruteforce(S, 18, psi, n).members


def test_residue_budget():
    with pytest.raises(ResourceError):
        count_strings_mod(10, (0, 3, 7), 8, 10007, 0, budget=10)


def test_upsilon_examples():
    assert upsilon_count(S_612, 12, 3, P_612)["count"] == 2
    assert upsilon_count(MissingDigitSet(6, (0, 5)), 12, 2, P_612)["count"] == 2
    u = upsilon_count(MissingDigitSet(6, (0, 1, 2, 3)), 12, 1, P_612)
    # tails of length 1 with 3 | xi or 3 | xi + 1: xi in {0, 3} or {2}
    assert u["count"] == 3 and u["flag"] == "generalized-upsilon"
