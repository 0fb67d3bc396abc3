"""Canonical partition functions by chain summation and independent oracles.

Three parameter modes share one set of formulas:

* exact   -- rational q and integer pairwise exponents, fractions.Fraction
             throughout, equalities are exact;
* symbolic -- the answer as a reduced ratio of integer polynomials in q and
             y = q**beta; requires charge provenance with integer pairwise
             charge products (the exponents then split as q**(size-1) *
             y**(charge product));
* float   -- complex doubles (or mpmath at higher precision) with
             compensated summation over the deterministic enumeration order.

The chain sum over an index set I multiplies, per chain, one factor
(q-1)(q-2)...(q-deg+2) / (q**e(branch) - 1) per branch, with a closed-ball
prefactor q**-((v-1)(e(I)+1) + |I|).  The projective-line sum replaces the
root branch's numerator by (q**(N + sum s) + 1 - d) * (q-1)...(q-d+2): the
factor q+1-d of the falling factorial is divided out analytically, so the
summand stays finite at integer q = d - 1, and the total carries 1/(q+1)**(N-1).

When every pairwise exponent coincides, chain terms depend only on branch
sizes and degrees, so the sum collapses to an O(N^3) coefficient recursion
("grouped" method); the generic per-chain stream remains the default at
small orders and the two are interchangeable.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .chains import enumerate_reduced_chains, set_partitions
from .errors import DomainError, PoleError
from .exponents import ExponentSpec, domain_violation, e_lambda
from .scalars import BiRational, FloatContext, KahanSum, falling_factorial

__all__ = [
    "Space",
    "Observables",
    "GROUPED_THRESHOLD",
    "z_ball",
    "z_R",
    "z_P",
    "z_proj",
    "z_proj_cells",
    "z_coset_oracle",
    "z_space",
    "observables",
]

# Orders at and above this use the grouped recursion automatically when the
# exponent tuple is symmetric; below it the per-chain stream is exercised.
GROUPED_THRESHOLD = 7


@dataclass(frozen=True)
class Space:
    """A closed ball of radius q**-v, or the projective line."""

    kind: str  # "ball" | "proj"
    v: int = 0

    @classmethod
    def ball(cls, v: int) -> "Space":
        return cls("ball", v)

    @classmethod
    def R(cls) -> "Space":
        return cls("ball", 0)

    @classmethod
    def P(cls) -> "Space":
        return cls("ball", 1)

    @classmethod
    def projective(cls) -> "Space":
        return cls("proj")

    @classmethod
    def parse(cls, text: str) -> "Space":
        t = text.strip()
        if t == "R":
            return cls.R()
        if t == "P":
            return cls.P()
        if t in ("proj", "P1"):
            return cls.projective()
        if t.startswith("ball:"):
            return cls.ball(int(t.split(":", 1)[1]))
        raise ValueError(f"unknown space {text!r} (expected R, P, ball:v, or proj)")

    def __str__(self):
        if self.kind == "proj":
            return "proj"
        return {0: "R", 1: "P"}.get(self.v, f"ball:{self.v}")


def _checked_members(members: Iterable[int], order: int) -> tuple[int, ...]:
    idx = tuple(sorted(members))
    if not idx:
        raise ValueError("empty index set")
    if len(set(idx)) != len(idx) or not all(1 <= i <= order for i in idx):
        raise ValueError(f"index set {idx} not inside [1..{order}]")
    return idx


def _resolve_mode(spec: ExponentSpec, q, mode: str) -> str:
    if mode not in ("exact", "symbolic", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact":
        q_ok = isinstance(q, (int, Fraction)) and not isinstance(q, bool)
        if not (q_ok and spec.is_integral()):
            warnings.warn(
                "exact mode requires rational q and integer pairwise exponents; "
                "falling back to float",
                stacklevel=3,
            )
            return "float"
    return mode


def _require_domain(spec: ExponentSpec, members: tuple[int, ...], mode: str) -> None:
    if mode == "symbolic":
        return  # identity of rational functions; domain is a numeric condition
    bad = domain_violation(spec, members)
    if bad is not None:
        raise DomainError("divergent", bad)


def _subkey(spec: ExponentSpec, members: tuple[int, ...]):
    """Canonical per-subset memo key: the ordered tuple of pairwise exponents."""
    return (
        len(members),
        tuple(spec.entry(i, j) for i, j in itertools.combinations(sorted(members), 2)),
    )


class _Evaluator:
    """Mode-specific arithmetic shared by every summation path."""

    def __init__(self, spec: ExponentSpec, q, mode: str, ctx: FloatContext):
        self.spec = spec
        self.mode = mode
        self.ctx = ctx
        self._dens: dict[tuple[int, ...], object] = {}
        self._fallings: dict[int, object] = {}
        if mode == "exact":
            self.q = Fraction(q)
            if self.q <= 0:
                raise ValueError(f"q must be positive, got {q}")
            if self.q == 1:
                raise PoleError("chain-sum denominators vanish at q = 1")
            self.one = Fraction(1)
        elif mode == "float":
            qc = ctx.to_complex(q)
            if qc.imag != 0 or qc.real <= 0:
                raise ValueError(f"q must be a positive real, got {q}")
            if qc.real == 1:
                raise PoleError("chain-sum denominators vanish at q = 1")
            self.q = qc
            self.lnq = ctx.log(qc)
            self.one = ctx.to_complex(1)
        elif mode == "symbolic":
            products = spec.charge_products()
            if products is None or any(
                not (isinstance(c, Fraction) and c.denominator == 1)
                for c in products.values()
            ):
                raise ValueError("symbolic mode requires integer exponents")
            self._products = {k: int(v) for k, v in products.items()}
            self.q = BiRational.q()
            self.one = BiRational.monomial(0)
        else:  # pragma: no cover
            raise ValueError(mode)

    # -- exponents ---------------------------------------------------------

    def exponent(self, members: tuple[int, ...]):
        """e(members) in this mode's representation ((q, y) degrees when symbolic)."""
        if self.mode == "symbolic":
            c = sum(
                self._products[(i, j)] for i, j in itertools.combinations(sorted(members), 2)
            )
            return (len(members) - 1, c)
        e = e_lambda(self.spec, members)
        return e if self.mode == "exact" else self.ctx.to_complex(e)

    def exponent_for_size(self, n: int):
        """e for any n-subset of a symmetric spec."""
        if self.mode == "symbolic":
            c0 = next(iter(self._products.values())) if self._products else 0
            return (n - 1, math.comb(n, 2) * c0)
        s0 = next(iter(self.spec.entries.values())) if self.spec.entries else Fraction(0)
        e = (n - 1) + math.comb(n, 2) * s0
        return e if self.mode == "exact" else self.ctx.to_complex(e)

    def q_power(self, expo):
        if self.mode == "exact":
            if expo.denominator != 1:
                raise ValueError("exact mode requires integer exponents")
            return self.q ** int(expo)
        if self.mode == "symbolic":
            return BiRational.monomial(*expo)
        return self.ctx.exp(expo * self.lnq)

    # -- cached chain-term ingredients --------------------------------------

    def branch_den(self, members: tuple[int, ...]):
        got = self._dens.get(members)
        if got is None:
            got = self.q_power(self.exponent(members)) - self.one
            if not got:
                raise PoleError(f"q**e - 1 vanishes on subset {members}")
            self._dens[members] = got
        return got

    def falling_q1(self, k: int):
        """(q-1)(q-2)...(q-k), the degree-k falling factorial at q-1."""
        got = self._fallings.get(k)
        if got is None:
            got = falling_factorial(self.q - 1, k)
            self._fallings[k] = got
        return got

    def new_sum(self):
        return KahanSum(self.ctx.zero()) if self.mode == "float" else KahanSum(0 * self.one)

    # -- summation paths -----------------------------------------------------

    def chain_sum(self, members: tuple[int, ...]):
        """Sum over reduced chains of the product of branch factors."""
        acc = self.new_sum()
        for chain in enumerate_reduced_chains(members):
            term = self.one
            for branch in chain.branches:
                term = term * self.falling_q1(branch.degree - 1) / self.branch_den(branch.members)
            acc.add(term)
        return acc.total

    def grouped_coeffs(self, m: int) -> list:
        """c_n = (chain sum over an n-set) / n! for n <= m, symmetric exponents.

        Recursion over the first partition's blocks: c_n picks up, for each
        block count d >= 2, the coefficient of z**n in g(z)**d / d! times the
        degree-(d-1) falling factorial, all over q**e(n) - 1, where
        g(z) = sum c_k z**k.
        """
        zero = 0 * self.one
        c: list = [zero] * (m + 1)
        if m >= 1:
            c[1] = self.one
        for n in range(2, m + 1):
            partial = c[:n]  # g truncated below z**n; enough for d >= 2 blocks
            power = list(partial)
            total = zero
            for d in range(2, n + 1):
                power = _convolve(power, partial, n, zero)
                total = total + self.falling_q1(d - 1) * power[n] / math.factorial(d)
            den = self.q_power(self.exponent_for_size(n)) - self.one
            if not den:
                raise PoleError(f"q**e - 1 vanishes at subset size {n}")
            c[n] = total / den
        return c

    def grouped_chain_sum(self, m: int):
        return math.factorial(m) * self.grouped_coeffs(m)[m]

    # -- assembled quantities -------------------------------------------------

    def ball_prefactor(self, members: tuple[int, ...], v: int):
        m = len(members)
        if self.mode == "symbolic":
            _, c = self.exponent(members)
            return BiRational.monomial(-v * m, -(v - 1) * c)
        e1 = self.exponent(members) + 1
        return self.q_power(-((v - 1) * e1 + m))

    def proj_root_numerator(self, d: int, members: tuple[int, ...]):
        """(q**(N + sum s) + 1 - d) * (q-1)...(q-d+2), the cancelled root factor."""
        n = len(members)
        if self.mode == "symbolic":
            _, c = self.exponent(members)
            head = BiRational.monomial(n, c) + (1 - d)
        else:
            e1 = self.exponent(members) + 1
            head = self.q_power(e1) + (1 - d) * self.one
        tail = self.one
        for step in range(1, d - 1):
            tail = tail * (self.q - step)
        return head * tail


def _convolve(a: list, b: list, nmax: int, zero) -> list:
    out = [zero] * (nmax + 1)
    for i, av in enumerate(a):
        if not av:
            continue
        for j in range(min(len(b), nmax - i + 1)):
            if b[j]:
                out[i + j] = out[i + j] + av * b[j]
    return out


def _pick_method(spec: ExponentSpec, size: int, method: str) -> str:
    if method not in ("auto", "chains", "grouped"):
        raise ValueError(f"unknown method {method!r}")
    if method == "grouped" and not spec.is_symmetric():
        raise ValueError("grouped method needs identical pairwise exponents")
    if method == "auto":
        return "grouped" if spec.is_symmetric() and size >= GROUPED_THRESHOLD else "chains"
    return method


def z_ball(
    members: Iterable[int],
    v: int,
    spec: ExponentSpec,
    q,
    *,
    mode: str = "exact",
    method: str = "auto",
    precision: int = 53,
):
    """Partition function over the ball of radius q**-v for the given index set.

    Singletons give q**-v; otherwise the chain sum times the ball prefactor.
    """
    idx = _checked_members(members, spec.order)
    mode = _resolve_mode(spec, q, mode)
    with FloatContext(precision) as ctx:
        ev = _Evaluator(spec, q, mode, ctx)
        _require_domain(spec, idx, mode)
        if len(idx) == 1:
            if mode == "symbolic":
                return BiRational.monomial(-v)
            return ev.q_power(-v * ev.one if mode == "float" else Fraction(-v))
        if _pick_method(spec, len(idx), method) == "grouped":
            total = ev.grouped_chain_sum(len(idx))
        else:
            total = ev.chain_sum(idx)
        return ev.ball_prefactor(idx, v) * total


def z_R(spec: ExponentSpec, q, **kwargs):
    """Partition function on the closed unit ball (v = 0)."""
    return z_ball(range(1, spec.order + 1), 0, spec, q, **kwargs)


def z_P(spec: ExponentSpec, q, **kwargs):
    """Partition function on the open unit ball (v = 1)."""
    return z_ball(range(1, spec.order + 1), 1, spec, q, **kwargs)


def z_proj(
    spec: ExponentSpec,
    q,
    *,
    mode: str = "exact",
    method: str = "auto",
    precision: int = 53,
):
    """Partition function on the projective line.

    Per chain, the root branch contributes the cancelled factor
    (q**(N + sum s) + 1 - d) (q-1)...(q-d+2) / (q**e([N]) - 1); other branches
    contribute as on balls; the total carries 1/(q+1)**(N-1).  Defined for
    every positive q, including the removable points q = d - 1.
    """
    n = spec.order
    mode = _resolve_mode(spec, q, mode)
    with FloatContext(precision) as ctx:
        ev = _Evaluator(spec, q, mode, ctx)
        if n <= 1:
            return ev.one
        full = tuple(range(1, n + 1))
        _require_domain(spec, full, mode)
        root_den = ev.branch_den(full)
        if _pick_method(spec, n, method) == "grouped":
            coeffs = ev.grouped_coeffs(n - 1) + [0 * ev.one]
            power = list(coeffs[:n])
            total = ev.new_sum()
            for d in range(2, n + 1):
                power = _convolve(power, coeffs[:n], n, 0 * ev.one)
                h = power[n] * math.factorial(n) / math.factorial(d)
                total.add(ev.proj_root_numerator(d, full) / root_den * h)
        else:
            total = ev.new_sum()
            for chain in enumerate_reduced_chains(full):
                term = ev.proj_root_numerator(chain.root_degree, full) / root_den
                for branch in chain.branches:
                    if branch.members == full:
                        continue
                    term = (
                        term * ev.falling_q1(branch.degree - 1) / ev.branch_den(branch.members)
                    )
                total.add(term)
        return total.total / (ev.q + 1) ** (n - 1)


def _require_integer_q(q, what: str) -> int:
    if isinstance(q, bool) or not isinstance(q, (int, Fraction, float)):
        raise ValueError(f"{what} requires integer q")
    qi = int(q)
    if qi != q or qi < 2:
        raise ValueError(f"{what} requires integer q >= 2, got {q}")
    return qi


def z_proj_cells(spec: ExponentSpec, q, *, mode: str = "exact", precision: int = 53):
    """Projective-line partition function via the q+1 ball cells.

    Sums over set partitions of [N] into d <= q+1 blocks, weighted by the
    number (q+1)q...(q+2-d) of ordered placements into the labeled cells;
    each block contributes its open-ball value, empty cells contribute 1.
    """
    if mode == "symbolic":
        raise ValueError("cell decomposition requires integer q")
    qi = _require_integer_q(q, "cell decomposition")
    n = spec.order
    mode = _resolve_mode(spec, q, mode)
    with FloatContext(precision) as ctx:
        ev = _Evaluator(spec, qi, mode, ctx)
        if n == 0:
            return ev.one
        full = tuple(range(1, n + 1))
        _require_domain(spec, full, mode)
        block_cache: dict = {}

        def open_ball(block: tuple[int, ...]):
            key = _subkey(spec, block)
            got = block_cache.get(key)
            if got is None:
                got = z_ball(block, 1, spec, qi, mode=mode, precision=precision)
                block_cache[key] = got
            return got

        total = ev.new_sum()
        for blocks in set_partitions(full):
            d = len(blocks)
            if d > qi + 1:
                continue
            ways = falling_factorial(qi + 1, d)
            term = ways * ev.one
            for block in blocks:
                term = term * open_ball(tuple(block))
            total.add(term)
        if mode == "exact":
            scale = Fraction(qi, qi + 1) ** n
        else:
            scale = (ev.q / (ev.q + 1)) ** n
        return scale * total.total


def z_coset_oracle(
    members: Iterable[int],
    spec: ExponentSpec,
    q,
    *,
    space: str | Space = "R",
    mode: str = "exact",
    precision: int = 53,
):
    """Independent evaluation from the coset self-similarity of the unit ball.

    The ball splits into q cosets of the open ball; pairs in different cosets
    are at distance 1 and each coset is a scaled copy of the ball, so the value
    on an index set I satisfies a linear relation over ordered q-partitions
    of I.  Solving for the all-in-one-coset terms gives a recursion with
    resolvent 1 - q**(1 - |I| - sum s(I)); no splitting chains involved.
    """
    if isinstance(space, str):
        space = Space.parse(space)
    if space.kind != "ball" or space.v not in (0, 1):
        raise ValueError("coset oracle computes R and P values only")
    if mode == "symbolic":
        raise ValueError("coset oracle supports exact and float modes only")
    idx = _checked_members(members, spec.order)
    qi = _require_integer_q(q, "coset oracle")
    mode = _resolve_mode(spec, qi, mode)
    with FloatContext(precision) as ctx:
        ev = _Evaluator(spec, qi, mode, ctx)
        bad = domain_violation(spec, idx)
        if bad is not None:
            raise DomainError("divergent", bad)
        memo: dict = {}

        def p_scale(sub: tuple[int, ...]):
            # value on the open ball = q**-(|sub| + sum s(sub)) * value on R
            if mode == "exact":
                return ev.q_power(Fraction(-(len(sub) + spec.pair_sum(sub))))
            return ev.q_power(ev.ctx.to_complex(-(len(sub) + spec.pair_sum(sub))))

        def value_on_R(sub: tuple[int, ...]):
            if len(sub) <= 1:
                return ev.one
            key = _subkey(spec, sub)
            got = memo.get(key)
            if got is not None:
                return got
            total = 0 * ev.one
            for blocks in set_partitions(sub):
                d = len(blocks)
                if d < 2 or d > qi:
                    continue
                term = falling_factorial(qi, d) * ev.one
                for block in blocks:
                    b = tuple(block)
                    term = term * p_scale(b)
                    if len(b) > 1:
                        term = term * value_on_R(b)
                total = total + term
            if mode == "exact":
                resolvent = 1 - ev.q_power(Fraction(1 - len(sub) - spec.pair_sum(sub)))
            else:
                resolvent = 1 - ev.q_power(
                    ev.ctx.to_complex(1 - len(sub) - spec.pair_sum(sub))
                )
            if not resolvent:
                raise DomainError("divergent", sub)
            got = total / resolvent
            memo[key] = got
            return got

        result = value_on_R(idx)
        if space.v == 1:
            result = result * p_scale(idx)
        return result


def z_space(space: str | Space, spec: ExponentSpec, q, **kwargs):
    """Dispatch on a space descriptor (R, P, ball:v, proj)."""
    if isinstance(space, str):
        space = Space.parse(space)
    if space.kind == "proj":
        return z_proj(spec, q, **kwargs)
    return z_ball(range(1, spec.order + 1), space.v, spec, q, **kwargs)


@dataclass(frozen=True)
class Observables:
    """Dimensionless free energy, mean energy, and energy fluctuation."""

    free_energy: float
    mean_energy: float
    fluctuation: float


def observables(
    space: str | Space,
    charges: Iterable,
    beta: float,
    q,
    *,
    precision: int = 53,
) -> Observables:
    """-log Z and its first two beta-derivatives at fixed charges.

    Derivatives are central finite differences of log Z with step
    h = max(1e-5, 1e-5 |beta|), Richardson-extrapolated once.  Beta must stay
    inside the convergence domain over [beta - h, beta + h].
    """
    charges = tuple(charges)
    beta = float(beta)
    if not charges:
        return Observables(0.0, 0.0, 0.0)

    def log_z(b: float) -> float:
        spec = ExponentSpec.from_charges(charges, b)
        bad = domain_violation(spec)
        if bad is not None:
            raise DomainError("divergent", bad)
        value = z_space(space, spec, q, mode="float", precision=precision)
        return math.log(complex(value).real)

    f0 = log_z(beta)
    if len(charges) <= 1 or all(c == 0 for c in charges):
        return Observables(-f0, 0.0, 0.0)

    h = max(1e-5, 1e-5 * abs(beta))
    values = {d: log_z(beta + d * h) for d in (-1.0, -0.5, 0.5, 1.0)}

    def d1(step: float) -> float:
        return (values[step] - values[-step]) / (2 * step * h)

    def d2(step: float) -> float:
        return (values[step] - 2 * f0 + values[-step]) / (step * h) ** 2

    mean = -(4 * d1(0.5) - d1(1.0)) / 3
    fluct = (4 * d2(0.5) - d2(1.0)) / 3
    return Observables(-f0, mean, fluct)
