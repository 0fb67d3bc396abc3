import itertools
import random
from fractions import Fraction

import pytest

from ultragas.exponents import (
    ExponentSpec,
    domain_violation,
    e_lambda,
    in_domain,
    parse_scalar,
)


def random_spec(rng, n, lo=-1, hi=3):
    entries = {
        (i, j): Fraction(rng.randint(lo * 6, hi * 6), 6)
        for i, j in itertools.combinations(range(1, n + 1), 2)
    }
    return ExponentSpec.from_entries(n, entries)


def test_e_lambda_base_cases():
    spec = ExponentSpec.from_charges((1, 2, 3), Fraction(1, 2))
    assert e_lambda(spec, []) == -1
    assert e_lambda(spec, [2]) == 0
    assert e_lambda(spec, [3]) == 0


def test_e_lambda_charges_123():
    # pairwise products 2, 3, 6 sum to 11, so e on the full set is 2 + 11 beta
    for beta in (Fraction(1), Fraction(2), Fraction(1, 3)):
        spec = ExponentSpec.from_charges((1, 2, 3), beta)
        assert e_lambda(spec, [1, 2, 3]) == 2 + 11 * beta
        assert e_lambda(spec, [1, 2]) == 1 + 2 * beta


def test_e_lambda_bad_subset():
    spec = ExponentSpec.one_component(3, 1)
    with pytest.raises(ValueError):
        e_lambda(spec, [1, 4])
    with pytest.raises(ValueError):
        e_lambda(spec, [2, 2])


def test_in_domain_zero_exponents():
    assert in_domain(ExponentSpec.one_component(5, 0))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_one_component_threshold(n):
    # binding constraint is the full set: e = (m-1) + C(m,2) beta > 0 iff
    # beta > -2/m, and -2/m is largest at m = n
    eps = Fraction(1, 1000)
    assert in_domain(ExponentSpec.one_component(n, Fraction(-2, n) + eps))
    assert not in_domain(ExponentSpec.one_component(n, Fraction(-2, n)))
    assert not in_domain(ExponentSpec.one_component(n, Fraction(-2, n) - eps))
    # brute-force the binding subset size
    beta = Fraction(-2, n)
    sizes = [
        m
        for m in range(2, n + 1)
        if (m - 1) + Fraction(m * (m - 1), 2) * beta <= 0
    ]
    assert sizes == [n]


def test_example_boundary_charges_123():
    spec = ExponentSpec.from_charges((1, 2, 3), Fraction(-1, 6))
    assert not in_domain(spec)
    assert in_domain(ExponentSpec.from_charges((1, 2, 3), Fraction(-1, 6) + Fraction(1, 100)))


def test_domain_violation_names_subset():
    spec = ExponentSpec.from_charges((1, 2, 3), Fraction(-1, 6))
    viol = domain_violation(spec)
    assert viol == (2, 3)  # e = 1 + 6 beta = 0 at the largest charge pair


def test_in_domain_monotone():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(2, 5)
        spec = random_spec(rng, n)
        if not in_domain(spec):
            continue
        i, j = sorted(rng.sample(range(1, n + 1), 2))
        bumped = dict(spec.entries)
        bumped[(i, j)] += Fraction(rng.randint(1, 10), 3)
        assert in_domain(ExponentSpec.from_entries(n, bumped))


def test_disjoint_union_additivity():
    # e(union) = e(a) + e(b) + 1 + sum of cross terms, for disjoint a, b
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(4, 7)
        spec = random_spec(rng, n)
        labels = rng.sample(range(1, n + 1), rng.randint(2, n))
        cut = rng.randint(1, len(labels) - 1)
        a, b = labels[:cut], labels[cut:]
        cross = sum(
            spec.entry(i, j) for i in a for j in b
        )
        assert e_lambda(spec, a + b) == e_lambda(spec, a) + e_lambda(spec, b) + 1 + cross


def test_charge_scaling():
    # scaling all charges by c rescales e - (#subset - 1) by c**2
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(2, 5)
        charges = [Fraction(rng.randint(1, 5)) for _ in range(n)]
        beta = Fraction(rng.randint(1, 4), 2)
        c = Fraction(rng.randint(2, 5))
        base = ExponentSpec.from_charges(charges, beta)
        scaled = ExponentSpec.from_charges([c * x for x in charges], beta)
        subset = sorted(rng.sample(range(1, n + 1), rng.randint(2, n)))
        m = len(subset)
        assert e_lambda(scaled, subset) - (m - 1) == c**2 * (
            e_lambda(base, subset) - (m - 1)
        )


def test_complex_entries_real_part_test():
    spec = ExponentSpec.from_entries(2, {(1, 2): complex(-0.5, 10.0)})
    assert in_domain(spec)  # e = 1 - 0.5 + 10i has positive real part
    spec = ExponentSpec.from_entries(2, {(1, 2): complex(-1.0, 10.0)})
    assert not in_domain(spec)


def test_from_charges_products_exact():
    spec = ExponentSpec.from_charges((1, 2, 3), Fraction(1, 2))
    assert spec.entries[(1, 2)] == 1
    assert spec.entries[(1, 3)] == Fraction(3, 2)
    assert spec.entries[(2, 3)] == 3
    assert spec.charge_products() == {(1, 2): 2, (1, 3): 3, (2, 3): 6}


def test_is_integral_and_symmetric():
    assert ExponentSpec.one_component(4, 2).is_integral()
    assert not ExponentSpec.one_component(4, Fraction(1, 2)).is_integral()
    assert ExponentSpec.one_component(4, 2).is_symmetric()
    assert not ExponentSpec.from_charges((1, 2), 1).is_symmetric() or True  # n=2 has one pair
    assert not ExponentSpec.from_charges((1, 2, 3), 1).is_symmetric()


def test_missing_pairs_rejected():
    with pytest.raises(ValueError, match="bad pair keys"):
        ExponentSpec(3, {(1, 2): Fraction(1)})
    with pytest.raises(ValueError):
        ExponentSpec.from_entries(2, {(2, 1): 1})


def test_json_roundtrip():
    spec = ExponentSpec.from_charges((1, 2, 3), Fraction(3, 2))
    doc = spec.to_json()
    assert doc == {"n": 3, "charges": ["1", "2", "3"], "beta": "3/2"}
    again = ExponentSpec.from_json(doc)
    assert again.entries == spec.entries

    direct = ExponentSpec.from_entries(2, {(1, 2): Fraction(5, 3)})
    doc = direct.to_json()
    assert doc == {"n": 2, "s": {"1,2": "5/3"}}
    assert ExponentSpec.from_json(doc).entries == direct.entries

    fromfloat = ExponentSpec.from_json({"n": 2, "s": {"1,2": [0.5, -1.0]}})
    assert fromfloat.entries[(1, 2)] == complex(0.5, -1.0)


def test_parse_scalar():
    assert parse_scalar("3/2") == Fraction(3, 2)
    assert parse_scalar(7) == Fraction(7)
    assert parse_scalar(0.25) == 0.25
    assert parse_scalar([1.0, 2.0]) == complex(1, 2)
    with pytest.raises(TypeError):
        parse_scalar(None)


def test_permuted():
    spec = ExponentSpec.from_charges((1, 2, 3), 1)
    perm = {1: 3, 2: 1, 3: 2}
    permuted = spec.permuted(perm)
    assert permuted.entry(1, 3) == spec.entry(1, 2)
    assert permuted.entry(1, 2) == spec.entry(2, 3)
