"""The ten acceptance criteria, one test each."""
import math
import time
from fractions import Fraction

import pytest

from digitdioph.arith import LogLinearForm, LogRatio
from digitdioph.cantor import MissingDigitSet, grid_count
from digitdioph.dimension import MeasureClass, converges_geometric, dim_report, measure_verdict
from digitdioph.gamma import gamma_bruteforce, gamma_residue_dp
from digitdioph.params import build_digit_profile, build_param_profile
from digitdioph.psi import parse_psi
from digitdioph.verify import (
    check_divisibility,
    check_forced_digits,
    check_gamma_chain,
    check_covering_bound,
    check_wb_alpha1_identity,
    random_same_prime_pairs,
)

pytestmark = pytest.mark.usefixtures("criterion")

PSI612 = parse_psi("geom:beta=6,p=2,q=1")
D612 = [0, 1, 4, 5]


@pytest.mark.criterion("1. parameter profile of (6, 12)")
def test_parameter_fidelity():
    start = time.perf_counter()
    p = build_param_profile(6, 12)
    d = build_digit_profile(p, D612)
    elapsed = time.perf_counter() - start
    assert (p.alpha1, p.alpha2, p.kstar, p.bstar) == (1, 2, 1, 3)
    assert d.D1 == (3,) and d.D2 == (2,) and d.Dstar == (0, 1, 4, 5)
    assert elapsed < 0.01


@pytest.mark.criterion("2. count law #Gamma_n = 2*4^n for (6, 12, {0,1,4,5})")
def test_count_law():
    p = build_param_profile(6, 12)
    S = MissingDigitSet(6, tuple(D612))
    start = time.perf_counter()
    dp = [gamma_residue_dp(S, 12, PSI612, n, p).candidates for n in range(1, 13)]
    assert time.perf_counter() - start < 1
    assert dp == [2 * 4**n for n in range(1, 13)]
    start = time.perf_counter()
    brute = {n: gamma_bruteforce(S, 12, PSI612, n) for n in range(1, 5)}
    assert time.perf_counter() - start < 5
    for n in range(1, 5):
        assert brute[n].members == gamma_residue_dp(S, 12, PSI612, n, p, members=True).members
    # Stated law, checked against the brute-force count with exact equality.
    assert [brute[n].count for n in range(1, 5)] == [2 * 4**n for n in range(1, 5)]


@pytest.mark.criterion("3. emptiness for (5, 5, {1,2}) and sharpness")
def test_emptiness_example():
    S = MissingDigitSet(5, (1, 2))
    start = time.perf_counter()
    psi = parse_psi("geom:c=1/4,beta=5,p=1")
    for n in range(1, 9):
        assert gamma_bruteforce(S, 5, psi, n).count == 0
    assert time.perf_counter() - start < 30
    # widened radius 5^-n/4 + 5^-2n, written as c(n) * 5^-n with c(n) fixed per n
    for n in range(1, 5):
        rad = Fraction(1, 4 * 5**n) + Fraction(1, 5 ** (2 * n))
        wider = parse_psi(f"geom:c={rad * 5**n},beta=5,p=1")
        assert gamma_bruteforce(S, 5, wider, n).count > 0


@pytest.mark.criterion("4. divisibility and forced digits")
def test_lemma_suite():
    start = time.perf_counter()
    pairs = random_same_prime_pairs(50, limit=10**4, seed=2024)
    assert len(set(pairs)) >= 40
    for b, t in pairs:
        assert check_divisibility(b, t, 30).passed
    for n in range(1, 7):
        assert check_forced_digits(6, 12, n).passed
    for n in range(1, 4):
        assert check_forced_digits(12, 18, n).passed
    assert time.perf_counter() - start < 60


@pytest.mark.criterion("5. containment chain")
def test_containment_chain():
    assert check_gamma_chain(6, 12, D612, PSI612, 4).passed
    assert check_gamma_chain(6, 12, [0, 5], PSI612, 4).passed


@pytest.mark.criterion("6. covering bound and ratio")
def test_covering_bound():
    configs = [
        (6, 12, D612, PSI612),
        (6, 12, [0, 5], PSI612),
        (3, 3, [0, 2], parse_psi("geom:beta=3,p=2")),
        (5, 5, [1, 2], parse_psi("geom:c=1/4,beta=5,p=1")),
        (12, 18, [0, 11], parse_psi("geom:beta=12,p=2,q=1")),
    ]
    for b, t, D, psi in configs:
        rep = check_covering_bound(b, t, D, psi, 4, n_exact_max=4)
        assert rep.passed, (b, t, D, rep.failures)
    assert check_covering_bound(6, 12, D612, PSI612, 10, n_exact_max=3).max_ratio == 2.0


@pytest.mark.criterion("7. box-count exponent of C(3,{0,2}) at t = 2")
def test_box_count():
    start = time.perf_counter()
    count = grid_count(MissingDigitSet(3, (0, 2)), Fraction(1, 2**20))
    assert time.perf_counter() - start < 5
    assert abs(math.log2(count) / 20 - math.log(2) / math.log(3)) <= 0.1


@pytest.mark.criterion("8. dimension formulas")
def test_dimension_formulas():
    p = build_param_profile(3, 3)
    r = dim_report(p, build_digit_profile(p, [0, 2]), parse_psi("geom:beta=3,p=2"))
    assert abs(r.value - (1 / r.lam) * math.log(2) / math.log(3)) < 1e-9
    assert abs(r.value - 0.315465) < 1e-6
    p = build_param_profile(6, 12)
    r = dim_report(p, build_digit_profile(p, D612),
                   parse_psi("lograte:beta=6,num=log3,den=log3-log2"))
    assert abs(r.value - (r.dim_W + r.dim_C - 1)) < 1e-9
    product = r.dim_W * r.dim_C
    assert abs(math.log(6) / math.log(12) * product - product) > 0.1 * product


@pytest.mark.criterion("9. exact boundary verdict at s = log2/log3")
def test_boundary_verdict():
    s = LogRatio(1, 2, 3)
    assert (s.times_log(3) - LogLinearForm.log(2)).sign() == 0
    psi = parse_psi("geom:beta=3,p=1")
    assert converges_geometric(psi, s, LogLinearForm.log(2)) is False
    p = build_param_profile(3, 3)
    v = measure_verdict(p, build_digit_profile(p, [0, 2]), psi, s)
    assert v.measure_class is MeasureClass.FULL_MEASURE_OF_C


@pytest.mark.criterion("10. identity with denominators b^(alpha1 n)")
def test_wb_identity():
    assert check_wb_alpha1_identity(6, 12, D612, PSI612, 4).passed
    assert check_wb_alpha1_identity(6, 12, [0, 5], PSI612, 4).passed
