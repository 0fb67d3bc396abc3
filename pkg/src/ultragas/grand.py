"""Truncated fugacity series for one-component gases, and the power laws.

The grand series is the exponential generating function sum Z_N f**N / N!
with Z_0 = 1.  Three factorization laws tie the three spaces together at
inverse temperature beta > 0:

* series on the closed ball  = (series on the open ball) ** q,
* series on the projective line = (open-ball series at fugacity q f/(q+1)) ** (q+1),
* series on the projective line = (closed-ball series * open-ball series),
  both at fugacity q f/(q+1).

Verification is coefficient-level: both sides are expanded to a chosen order
with engine values on the left and truncated-series algebra on the right,
exactly in exact mode and to 1e-10 relative in float mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engine import Space, z_space
from .exponents import ExponentSpec, format_scalar

__all__ = [
    "EgfSeries",
    "egf",
    "series_mul",
    "series_pow",
    "series_scale_fugacity",
    "expected_particles",
    "LawRow",
    "LawReport",
    "verify_power_law_q",
    "verify_power_law_q1",
    "verify_rp_factorization",
    "verify_all",
    "FLOAT_RTOL",
]

FLOAT_RTOL = 1e-10


@dataclass(frozen=True)
class EgfSeries:
    """Coefficients c_N = Z_N / N! of the grand series, truncated at n_max."""

    space: Space
    q: object
    beta: object
    mode: str
    coeffs: tuple

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1


def egf(space, q, beta, n_max: int, mode: str = "exact", *, precision: int = 53) -> EgfSeries:
    """Build the truncated grand series for a one-component gas."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if isinstance(space, str):
        space = Space.parse(space)
    coeffs = [Fraction(1) if mode == "exact" else complex(1)]
    fact = 1
    for n in range(1, n_max + 1):
        spec = ExponentSpec.one_component(n, beta)
        fact *= n
        coeffs.append(z_space(space, spec, q, mode=mode, precision=precision) / fact)
    return EgfSeries(space, q, beta, mode, tuple(coeffs))


def _coeffs(series) -> tuple:
    return tuple(series.coeffs) if isinstance(series, EgfSeries) else tuple(series)


def series_mul(a, b) -> tuple:
    """Cauchy product truncated at the common length."""
    ca, cb = _coeffs(a), _coeffs(b)
    if len(ca) != len(cb):
        raise ValueError(f"length mismatch: {len(ca)} vs {len(cb)}")
    out = []
    for n in range(len(ca)):
        acc = ca[0] * cb[n]
        for k in range(1, n + 1):
            acc = acc + ca[k] * cb[n - k]
        out.append(acc)
    return tuple(out)


def series_pow(a, m: int) -> tuple:
    """m-th power of a series with unit constant term."""
    ca = _coeffs(a)
    if not ca or ca[0] != 1:
        raise ValueError("series_pow needs constant term 1")
    if m < 0:
        raise ValueError(f"power must be >= 0, got {m}")
    out = tuple([ca[0]] + [0 * c for c in ca[1:]])
    for _ in range(m):
        out = series_mul(out, ca)
    return out


def series_scale_fugacity(a, sigma) -> tuple:
    """Substitute f -> sigma f, i.e. c_N -> sigma**N c_N."""
    ca = _coeffs(a)
    power = sigma**0
    out = [ca[0]]
    for c in ca[1:]:
        power = power * sigma
        out.append(power * c)
    return tuple(out)


def expected_particles(series, f):
    """f d/df log of the truncated series; raw truncated value, no error bound."""
    ca = _coeffs(series)
    z = sum(c * f**n for n, c in enumerate(ca))
    dz = sum(n * c * f ** (n - 1) for n, c in enumerate(ca) if n >= 1)
    return f * dz / z


@dataclass(frozen=True)
class LawRow:
    n: int
    left: object
    right: object
    ok: bool


@dataclass(frozen=True)
class LawReport:
    law: str
    q: int
    beta: object
    n_max: int
    mode: str
    rows: tuple[LawRow, ...]
    extended: bool = False

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "q": self.q,
            "beta": format_scalar(self.beta),
            "n_max": self.n_max,
            "mode": self.mode,
            "ok": self.ok,
            "extended": self.extended,
            "rows": [
                {
                    "n": r.n,
                    "left": format_scalar(r.left),
                    "right": format_scalar(r.right),
                    "ok": r.ok,
                }
                for r in self.rows
            ],
        }


def _close(left, right, mode: str) -> bool:
    if mode == "exact":
        return left == right
    l, r = complex(left), complex(right)
    return abs(l - r) <= FLOAT_RTOL * max(1.0, abs(l), abs(r))


def _compare(law, q, beta, mode, left, right, extended) -> LawReport:
    rows = tuple(
        LawRow(n, l, r, _close(l, r, mode)) for n, (l, r) in enumerate(zip(left, right))
    )
    return LawReport(law, q, beta, len(left) - 1, mode, rows, extended)


def _check_inputs(q, beta, extended: bool, mode: str) -> int:
    qi = int(q)
    if qi != q or qi < 2:
        raise ValueError(f"power laws need integer q >= 2, got {q}")
    brect = complex(beta)
    if not extended and (brect.imag != 0 or brect.real <= 0):
        raise ValueError(
            "power laws are asserted for real beta > 0; pass extended=True to "
            "probe other beta in the analyticity half-plane"
        )
    if mode == "exact" and (brect.imag != 0 or Fraction(beta).denominator != 1):
        raise ValueError(
            "exact law verification requires integer beta; use float mode"
        )
    return qi


def verify_power_law_q(
    q, beta, n_max: int, mode: str = "exact", *, extended: bool = False, precision: int = 53
) -> LawReport:
    """Closed-ball series against the q-th power of the open-ball series."""
    qi = _check_inputs(q, beta, extended, mode)
    left = egf("R", qi, beta, n_max, mode, precision=precision)
    right = series_pow(egf("P", qi, beta, n_max, mode, precision=precision), qi)
    return _compare("q", qi, beta, mode, left.coeffs, right, extended)


def _sigma(qi: int, mode: str):
    return Fraction(qi, qi + 1) if mode == "exact" else qi / (qi + 1)


def verify_power_law_q1(
    q, beta, n_max: int, mode: str = "exact", *, extended: bool = False, precision: int = 53
) -> LawReport:
    """Projective series against the (q+1)-th power of the rescaled open-ball series."""
    qi = _check_inputs(q, beta, extended, mode)
    left = egf("proj", qi, beta, n_max, mode, precision=precision)
    scaled = series_scale_fugacity(
        egf("P", qi, beta, n_max, mode, precision=precision), _sigma(qi, mode)
    )
    right = series_pow(scaled, qi + 1)
    return _compare("q1", qi, beta, mode, left.coeffs, right, extended)


def verify_rp_factorization(
    q, beta, n_max: int, mode: str = "exact", *, extended: bool = False, precision: int = 53
) -> LawReport:
    """Projective series against rescaled closed-ball times open-ball series."""
    qi = _check_inputs(q, beta, extended, mode)
    sigma = _sigma(qi, mode)
    left = egf("proj", qi, beta, n_max, mode, precision=precision)
    right = series_mul(
        series_scale_fugacity(egf("R", qi, beta, n_max, mode, precision=precision), sigma),
        series_scale_fugacity(egf("P", qi, beta, n_max, mode, precision=precision), sigma),
    )
    return _compare("rp", qi, beta, mode, left.coeffs, right, extended)


_LAWS = {
    "q": verify_power_law_q,
    "q1": verify_power_law_q1,
    "rp": verify_rp_factorization,
}


def verify_all(
    q, beta, n_max: int, mode: str = "exact", *, extended: bool = False, precision: int = 53
) -> list[LawReport]:
    return [
        fn(q, beta, n_max, mode, extended=extended, precision=precision)
        for fn in _LAWS.values()
    ]
