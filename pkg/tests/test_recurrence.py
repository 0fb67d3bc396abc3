import cmath
import math
import random
import time
from fractions import Fraction

import pytest

from ultragas.engine import z_proj, z_R
from ultragas.errors import DomainError, PoleError
from ultragas.exponents import ExponentSpec
from ultragas.recurrence import (
    RecurrenceTable,
    f_table,
    q_to_1_limit,
    z_proj_fast,
    z_R_fast,
)


def test_base_entries():
    table = f_table(5, 0.3, 1.0)
    assert table[0] == 1 and table[1] == 1
    assert table.n_max == 5


def test_f2_closed_form():
    # single k = 1 term: sinh(t/2) / (2 sinh(t (1+beta)/2))
    for t in (0.2, 1.0, -0.7):
        for beta in (0.5, 1.0, 2.0):
            got = f_table(2, t, beta)[2]
            want = math.sinh(t / 2) / (2 * math.sinh(t * (1 + beta) / 2))
            assert abs(got - want) < 1e-14 * abs(want)


def test_t_zero_branch_is_the_limit():
    for n in range(2, 7):
        for beta in (0.5, 1.0, 2.0):
            at_zero = f_table(n, 0.0, beta)[n]
            nearby = f_table(n, 1e-6, beta)[n]
            assert abs(at_zero - nearby) < 1e-8 * max(1.0, abs(at_zero))


def test_tiny_t_routed_to_zero_branch():
    a = f_table(4, 0.0, 1.0).values
    b = f_table(4, 1e-13, 1.0).values
    assert a == b


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
def test_even_in_t(n):
    rng = random.Random(n)
    for _ in range(5):
        t = rng.uniform(0.05, 2.5)
        beta = rng.uniform(-2 / n + 0.05, 3.0)
        plus = f_table(n, t, beta).values
        minus = f_table(n, -t, beta).values
        assert plus == minus  # the flip-based evaluation is exactly symmetric


def test_half_plane_guard():
    with pytest.raises(DomainError, match="outside half-plane"):
        f_table(4, 0.5, -0.5)  # -2/4 = -0.5 is the boundary
    with pytest.raises(DomainError):
        z_R_fast(5, 2, -0.41)
    f_table(4, 0.5, -0.49)  # just inside


def test_recurrence_pole_guard():
    # a vanishing sinh denominator needs Re(beta) = -2/N exactly, which the
    # half-plane guard already excludes; the pole branch stays as defense and
    # is exercised here through the ratio helper directly
    from ultragas.recurrence import _sinh_ratio
    from ultragas.scalars import FloatContext

    with pytest.raises(PoleError, match="recurrence pole"):
        _sinh_ratio(1.0 + 0j, 0j, FloatContext())
    with pytest.raises(DomainError):
        f_table(2, 1.0, complex(-1.0, 2 * math.pi))  # boundary Re(beta) = -1


def test_z_r_fast_pair_closed_form():
    assert abs(z_R_fast(2, 2, 1.0) - 2 / 3) < 1e-14
    for q in (2.0, 3.0, 7.5):
        for beta in (0.5, 1.0, 2.5):
            got = z_R_fast(2, q, beta)
            want = q**beta * (q - 1) / (q ** (1 + beta) - 1)
            assert abs(got - want) < 1e-12 * abs(want)


def test_z_proj_fast_pair_value():
    assert abs(z_proj_fast(2, 2, 1.0) - 7 / 9) < 1e-14


def test_trivial_orders():
    assert z_R_fast(0, 2, 1.0) == 1
    assert z_R_fast(1, 2, 1.0) == 1
    assert z_proj_fast(0, 3, 1.0) == 1
    assert abs(z_proj_fast(1, 3, 1.0) - 1) < 1e-14


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("beta", [0.5, 1, 2])
def test_matches_engine(q, beta):
    for n in range(2, 9):
        spec = ExponentSpec.one_component(n, beta)
        ze = complex(z_R(spec, q, mode="float"))
        zf = z_R_fast(n, q, beta)
        assert abs(ze - zf) <= 1e-10 * abs(zf), (n, q, beta)
        pe = complex(z_proj(spec, q, mode="float"))
        pf = z_proj_fast(n, q, beta)
        assert abs(pe - pf) <= 1e-10 * abs(pf), (n, q, beta)


def test_functional_equations_random_grid():
    rng = random.Random(12)
    for n in range(2, 7):
        for _ in range(10):
            q = rng.uniform(0.1, 10)
            beta = rng.uniform(-2 / n + 0.1, 3)
            a = z_R_fast(n, 1 / q, beta)
            b = q ** (-math.comb(n, 2) * beta) * z_R_fast(n, q, beta)
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a), abs(b))
            pa = z_proj_fast(n, 1 / q, beta)
            pb = z_proj_fast(n, q, beta)
            assert abs(pa - pb) <= 1e-10 * max(1.0, abs(pa), abs(pb))


def test_complex_beta_supported():
    beta = complex(0.5, 0.75)
    spec = ExponentSpec.from_entries(
        3, {(1, 2): beta, (1, 3): beta, (2, 3): beta}
    )
    ze = complex(z_R(spec, 3, mode="float"))
    zf = complex(z_R_fast(3, 3, beta))
    assert abs(ze - zf) < 1e-10 * abs(zf)


def test_q_to_1_limit_closed_form_pair():
    for beta in (0.5, 1.0, 2.0, 3.0):
        assert abs(q_to_1_limit(2, beta) - 1 / (1 + beta)) < 1e-13


def test_q_to_1_limit_trivial():
    assert q_to_1_limit(1, 2.0) == 1
    assert q_to_1_limit(0, 2.0) == 1


def test_q_to_1_limit_continuity():
    for n in range(2, 7):
        lim = q_to_1_limit(n, 1.0)
        sym = (z_R_fast(n, 1 + 1e-4, 1.0) + z_R_fast(n, 1 - 1e-4, 1.0)) / 2
        assert abs(lim - sym) < 1e-5 * max(1.0, abs(lim))
        near = z_R_fast(n, 1 + 1e-6, 1.0)
        assert abs(lim - near) < 1e-5 * max(1.0, abs(lim))
    limp = q_to_1_limit(3, 1.0, "proj")
    nearp = z_proj_fast(3, 1 + 1e-4, 1.0)
    assert abs(limp - nearp) < 1e-6
    # q = 1 routes through the t = 0 branch directly
    assert abs(z_R_fast(4, 1.0, 1.0) - q_to_1_limit(4, 1.0)) < 1e-13


def test_q_to_1_P_equals_R():
    # the open-ball rescaling factor q**(-N - C(N,2) beta) tends to 1
    assert q_to_1_limit(4, 1.5, "P") == q_to_1_limit(4, 1.5, "R")
    with pytest.raises(ValueError):
        q_to_1_limit(3, 1.0, "nope")


def test_q_validation():
    with pytest.raises(ValueError):
        z_R_fast(3, -2.0, 1.0)
    with pytest.raises(ValueError):
        z_proj_fast(3, 0.0, 1.0)


def test_f_table_runtime_n200():
    start = time.perf_counter()
    table = f_table(200, math.log(3), 1.0)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"f_table(200) took {elapsed:.2f}s"
    assert len(table.values) == 201
    assert all(not cmath.isnan(complex(v)) for v in table.values)


def test_high_precision_requested():
    import mpmath

    got = z_R_fast(4, 2, 1.0, precision=200)
    spec = ExponentSpec.one_component(4, 1)
    exact = z_R(spec, 2)
    assert abs(got - exact.numerator / exact.denominator) < 1e-13
