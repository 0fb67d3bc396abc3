"""Quadratic sinh-ratio recurrence for one-component partition functions.

With t = log q and all pairwise exponents equal to beta, the table
F_0 = F_1 = 1,

  F_N(t, beta) = sum_{k=1}^{N-1} (k/N) *
      sinh((t/2) [(N + C(N,2) beta)(1 - 2k/N) + 1])
      / sinh((t/2) [(N + C(N,2) beta) - 1]) * F_{N-k} F_k

(with the ratio of the linear arguments replacing the sinh ratio at t = 0)
computes the ball value as N! q**(C(N,2) beta / 2) F_N(log q, beta) and the
projective-line value as

  N! sum_{k=0}^N cosh((t/2)(N + C(N,2) beta)(1 - 2k/N))
      / (2 cosh(t/2))**N * F_{N-k} F_k.

Both extend smoothly to every q > 0; the value at q = 1 (t = 0) is the
q -> 1 limit, and the table is even in t, which yields the q -> 1/q
functional equations.  Sinh and cosh ratios are evaluated in shifted
exponential form so large t * N never overflows.

The recurrence terms alternate in sign and cancel heavily (the table entries
are far smaller than the summands), so fixed-precision tables lose digits as
N grows.  f_table honors the requested precision as documented; the value
functions z_R_fast / z_proj_fast / q_to_1_limit instead derive t = log q at
working precision and escalate that precision until two consecutive levels
agree, so their results are reliable at the returned (double) precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError, PoleError
from .scalars import FloatContext

__all__ = [
    "RecurrenceTable",
    "f_table",
    "z_R_fast",
    "z_proj_fast",
    "q_to_1_limit",
    "T_ZERO_TOL",
]

# |t| below this is routed to the t = 0 branch of the recurrence.
T_ZERO_TOL = 1e-12

# Adaptive escalation for the value functions: start above double, stop when
# two levels agree to _AGREE_RTOL, give up (best effort) at the cap.
_FIRST_PREC = 80
_MAX_PREC = 1280
_AGREE_RTOL = 1e-12

Complexish = Union[float, complex]


@dataclass(frozen=True)
class RecurrenceTable:
    t: float
    beta: complex
    values: tuple

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int):
        return self.values[n]


def _check_half_plane(beta, n: int) -> None:
    if complex(beta).real <= -2.0 / n:
        raise DomainError(f"outside half-plane: Re(beta) <= -2/{n}")


def _sinh_ratio(a, b, ctx: FloatContext):
    """sinh(a)/sinh(b), stable for large real parts.

    Both arguments are flipped to Re >= 0 (sinh is odd, so signs are tracked)
    and the ratio becomes exp(a-b) expm1(-2a)/expm1(-2b), every exponent
    having nonpositive real part except the bounded a-b.
    """
    sign = 1
    if a.real < 0:
        a, sign = -a, -sign
    if b.real < 0:
        b, sign = -b, -sign
    den = ctx.expm1(-2 * b)
    if den == 0:
        raise PoleError("recurrence pole: sinh denominator vanishes")
    return sign * ctx.exp(a - b) * ctx.expm1(-2 * a) / den


def _cosh_over_denom(a, log_denom, ctx: FloatContext):
    """cosh(a) / exp(log_denom) without forming either factor."""
    if a.real < 0:
        a = -a  # cosh is even
    return ctx.exp(a - log_denom) * (1 + ctx.exp(-2 * a)) / 2


def _table_values(n_max: int, t, beta, ctx: FloatContext) -> list:
    """F_0..F_{n_max} with ctx-native scalars; t is a ctx-native real."""
    one = ctx.to_complex(1)
    bc = ctx.to_complex(beta)
    values = [one, one][: n_max + 1]
    at_zero = abs(t) < T_ZERO_TOL
    for n in range(2, n_max + 1):
        m = n + math.comb(n, 2) * bc
        total = ctx.zero()
        if at_zero:
            den = m - 1
            if den == 0:
                raise PoleError("recurrence pole: zero linear denominator at t = 0")
            for k in range(1, n):
                ratio = ((m * (n - 2 * k)) / n + 1) / den
                total = total + ratio * k * values[n - k] * values[k] / n
        else:
            b_arg = (t / 2) * (m - 1)
            for k in range(1, n):
                a_arg = (t / 2) * ((m * (n - 2 * k)) / n + 1)
                ratio = _sinh_ratio(a_arg, b_arg, ctx)
                total = total + ratio * k * values[n - k] * values[k] / n
        values.append(total)
    return values


def f_table(
    n_max: int, t: float, beta: Complexish, *, precision: int = 53
) -> RecurrenceTable:
    """The recurrence table F_0..F_{n_max} at real t.

    Requires Re(beta) > -2/n_max; raises on a vanishing sinh denominator.
    Values are computed at the requested precision; for well-conditioned
    end results at large N prefer the z_*_fast functions, which escalate
    precision internally.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if n_max >= 2:
        _check_half_plane(beta, n_max)
    t = float(t)
    with FloatContext(precision) as ctx:
        values = _table_values(n_max, ctx.to_complex(t).real, beta, ctx)
        return RecurrenceTable(t, complex(beta), tuple(values))


def _check_q(q: float) -> float:
    q = float(q)
    if q <= 0:
        raise ValueError(f"q must be a positive real, got {q}")
    return q


def _agrees(a, b) -> bool:
    diff = abs(a - b)
    scale = max(abs(a), abs(b))
    return scale == 0 or diff <= _AGREE_RTOL * scale


def _escalate(evaluate, precision: int):
    """Run evaluate(ctx) at doubling precision until two levels agree."""
    prec = max(precision, _FIRST_PREC)
    previous = None
    while True:
        with FloatContext(prec) as ctx:
            value = evaluate(ctx)
        value = complex(value)
        if previous is not None and _agrees(value, previous):
            return value
        if prec >= _MAX_PREC:
            return value
        previous = value
        prec *= 2


def z_R_fast(n: int, q: float, beta: Complexish, *, precision: int = 53):
    """One-component closed-ball value N! q**(C(N,2) beta / 2) F_N(log q, beta)."""
    q = _check_q(q)
    if n <= 1:
        return complex(1)
    _check_half_plane(beta, n)

    def evaluate(ctx: FloatContext):
        lnq = ctx.log(ctx.to_complex(q)).real
        f_n = _table_values(n, lnq, beta, ctx)[n]
        scale = ctx.exp(ctx.to_complex(beta) * math.comb(n, 2) * lnq / 2)
        return math.factorial(n) * scale * f_n

    return _escalate(evaluate, precision)


def z_proj_fast(n: int, q: float, beta: Complexish, *, precision: int = 53):
    """One-component projective-line value from the cosh-weighted table sum."""
    q = _check_q(q)
    if n == 0:
        return complex(1)
    if n >= 2:
        _check_half_plane(beta, n)

    def evaluate(ctx: FloatContext):
        lnq = ctx.log(ctx.to_complex(q)).real
        values = _table_values(n, lnq, beta, ctx)
        m = n + math.comb(n, 2) * ctx.to_complex(beta)
        # (2 cosh(t/2))**N = exp(N (|t|/2 + log(1 + exp(-|t|))))
        log_denom = n * (abs(lnq) / 2 + ctx.log1p_real(ctx.exp(-abs(lnq)).real))
        total = ctx.zero()
        for k in range(n + 1):
            a = (lnq / 2) * (m * (n - 2 * k)) / n
            total = total + _cosh_over_denom(a, log_denom, ctx) * values[n - k] * values[k]
        return math.factorial(n) * total

    return _escalate(evaluate, precision)


def q_to_1_limit(n: int, beta: Complexish, space: str = "R", *, precision: int = 53):
    """The q -> 1 limit: N! F_N(0, beta) on the balls, the 2**-N-weighted
    table convolution on the projective line."""
    if space not in ("R", "P", "proj"):
        raise ValueError(f"unknown space {space!r} for the q -> 1 limit")
    if n <= 1:
        return complex(1)
    _check_half_plane(beta, n)

    def evaluate(ctx: FloatContext):
        values = _table_values(n, ctx.to_complex(0).real, beta, ctx)
        if space in ("R", "P"):
            return math.factorial(n) * values[n]
        total = ctx.zero()
        for k in range(n + 1):
            total = total + values[n - k] * values[k]
        return math.factorial(n) * total / 2**n

    return _escalate(evaluate, precision)
