import math
from fractions import Fraction

import pytest

from unitscan.heuristics import (
    HeuristicValue,
    expected_exceptional_count,
    injective_probability,
    level_raising_densities,
    mertens_count,
    monte_carlo_injective,
    multiplicity_distribution,
    scan_wieferich,
    wieferich_scan,
)
from unitscan.primes import PrimeRange, primes_in

from _oracles import exhaustive_injective_fraction

ENUMERATION_GRID = [(2, 1, 1), (2, 1, 2), (2, 2, 2), (2, 2, 3), (3, 1, 1), (3, 1, 2), (3, 2, 2)]


def test_injective_probability_examples():
    assert injective_probability(2, 1, 1).as_fraction() == Fraction(1, 2)
    assert injective_probability(3, 2, 2).as_fraction() == Fraction(16, 27)
    assert injective_probability(5, 1, 2).as_fraction() == Fraction(24, 25)


@pytest.mark.parametrize("p,n,m", ENUMERATION_GRID)
def test_injective_probability_vs_enumeration(p, n, m):
    assert injective_probability(p, n, m).as_fraction() == exhaustive_injective_fraction(p, n, m)


def test_injective_probability_validation():
    with pytest.raises(ValueError):
        injective_probability(2, 2, 1)  # n > m
    with pytest.raises(ValueError):
        injective_probability(4, 1, 1)  # not prime
    with pytest.raises(ValueError):
        injective_probability(2, 0, 1)


def test_heuristic_value_invariant():
    hv = injective_probability(3, 2, 2)
    assert hv.approx == hv.numerator / hv.denominator
    with pytest.raises(ValueError):
        HeuristicValue(1, 2, 0.4999)
    with pytest.raises(ValueError):
        HeuristicValue(1, 0, 1.0)


def test_monte_carlo_determinism():
    a = monte_carlo_injective(3, 2, 2, trials=50_000, seed=42)
    b = monte_carlo_injective(3, 2, 2, trials=50_000, seed=42)
    assert a == b
    c = monte_carlo_injective(3, 2, 2, trials=50_000, seed=43)
    assert c != a


def test_monte_carlo_single_trial():
    r = monte_carlo_injective(2, 1, 1, trials=1, seed=0)
    assert r.frequency in (0.0, 1.0)
    assert r.std_error == 0.0


def test_monte_carlo_converges_smoke():
    exact = injective_probability(3, 2, 2).approx
    r = monte_carlo_injective(3, 2, 2, trials=100_000, seed=42)
    band = 4 * math.sqrt(exact * (1 - exact) / r.trials)
    assert abs(r.frequency - exact) < band
    assert r.std_error == math.sqrt(r.frequency * (1 - r.frequency) / r.trials)


def test_monte_carlo_gauss_fallback_path():
    # n = 4 forces the per-sample elimination fallback
    r = monte_carlo_injective(2, 4, 4, trials=2000, seed=7)
    exact = injective_probability(2, 4, 4).approx  # ~0.307
    assert abs(r.frequency - exact) < 5 * math.sqrt(exact * (1 - exact) / 2000)


def test_monte_carlo_validation():
    with pytest.raises(ValueError):
        monte_carlo_injective(3, 2, 2, trials=0, seed=1)
    with pytest.raises(ValueError):
        monte_carlo_injective(3, 3, 2, trials=10, seed=1)


def test_mertens_examples():
    total, loglog = mertens_count(2)
    assert total == 0.5
    total, _ = mertens_count(10)
    assert abs(total - (1 / 2 + 1 / 3 + 1 / 5 + 1 / 7)) < 1e-12
    total, loglog = mertens_count(10**6)
    assert abs(total - loglog) < 0.3  # offset is the Mertens constant ~0.2615
    assert abs(total - loglog - 0.2615) < 0.01


def test_expected_exceptional_count():
    assert expected_exceptional_count(2, 1) == 0.5
    assert expected_exceptional_count(2, 2) == 0.25
    s1, _ = mertens_count(10)
    assert abs(expected_exceptional_count(10, 1) - s1) < 1e-12
    s2 = expected_exceptional_count(10**6, 2)
    assert 0.4522 < s2 < 0.4523  # the prime zeta value at 2 to 4 digits
    with pytest.raises(ValueError):
        expected_exceptional_count(1, 1)
    with pytest.raises(ValueError):
        expected_exceptional_count(10, 0)


def test_wieferich_small_ranges():
    assert wieferich_scan(2, PrimeRange(3, 1000)) == []
    assert wieferich_scan(2, PrimeRange(1000, 1200)) == [1093]
    assert wieferich_scan(2, PrimeRange(3500, 3600)) == [3511]
    # base 5 skips p = 5 without error
    assert 5 not in wieferich_scan(5, PrimeRange(3, 100))
    with pytest.raises(ValueError):
        wieferich_scan(1, PrimeRange(3, 100))


def test_wieferich_mod_p2_dependence():
    # the hit status at p depends on the base only through base mod p^2
    for p in primes_in(PrimeRange(3, 10_000)):
        for base in (2, 3, 10):
            if base % p == 0:
                continue
            direct = pow(base, p - 1, p * p) == 1
            shifted = pow(base + p * p, p - 1, p * p) == 1
            assert direct == shifted


def test_wieferich_report():
    rep = scan_wieferich(2, PrimeRange(3, 5000))
    assert [v.p for v in rep.hits] == [1093, 3511]
    assert rep.field_id == "wieferich(base=2)"
    rep2 = scan_wieferich(2, PrimeRange(3, 5000), workers=2)
    assert rep2.checksum == rep.checksum


def test_densities_examples():
    d3 = level_raising_densities(3)
    assert d3["i"].as_fraction() == 0  # empty class at p = 3
    d5 = level_raising_densities(5)
    assert d5["i"].as_fraction() == Fraction(1, 4)
    d11 = level_raising_densities(11)
    assert d11["iii"].as_fraction() == Fraction(1, 66)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 101])
def test_densities_bounds(p):
    dens = level_raising_densities(p)
    total = sum(v.as_fraction() for v in dens.values())
    assert total <= 1
    for v in dens.values():
        assert 0 <= v.as_fraction() < 1


def test_densities_validation():
    with pytest.raises(ValueError):
        level_raising_densities(2)
    with pytest.raises(ValueError):
        level_raising_densities(9)


def test_multiplicity_examples():
    assert multiplicity_distribution(3, 1).as_fraction() == Fraction(2, 3)
    assert multiplicity_distribution(3, 3).as_fraction() == Fraction(2, 27)
    assert multiplicity_distribution(11, 1).as_fraction() == Fraction(10, 11)
    assert 1 - multiplicity_distribution(11, 1).as_fraction() == Fraction(1, 11)


def test_multiplicity_telescopes():
    for k0 in (2, 3, 9, 11):
        partial = Fraction(0)
        prev = Fraction(0)
        for i in range(1, 51):
            partial += multiplicity_distribution(k0, i).as_fraction()
            assert partial > prev
            prev = partial
        assert partial <= 1
        assert abs(float(partial) - 1.0) < 1e-12


def test_multiplicity_validation():
    with pytest.raises(ValueError):
        multiplicity_distribution(6, 1)  # 6 is not a prime power
    with pytest.raises(ValueError):
        multiplicity_distribution(1, 1)
    with pytest.raises(ValueError):
        multiplicity_distribution(3, 0)
    assert multiplicity_distribution(4, 2).as_fraction() == Fraction(3, 16)
    assert multiplicity_distribution(9, 1).as_fraction() == Fraction(8, 9)
