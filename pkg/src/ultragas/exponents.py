"""Pairwise exponent tuples, charge specialization, and the convergence domain.

An exponent spec fixes one scalar s_ij per unordered pair i < j of [N],
either directly or as s_ij = charge_i * charge_j * beta.  The linear form
e(subset) = |subset| - 1 + sum of s_ij over pairs inside the subset drives
every partition-function formula; the convergence domain requires
Re(e(subset)) > 0 for every subset with at least two elements, and is
tested here by explicit enumeration of all 2^N - N - 1 such subsets.

Scalars are exact rationals or complex floats; the two kinds are not mixed
within one spec.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "Scalar",
    "ExponentSpec",
    "e_lambda",
    "in_domain",
    "domain_violation",
]

Scalar = Union[Fraction, int, float, complex]


def _canon(value) -> Scalar:
    """Normalize a scalar: integral values to Fraction, inexact left alone."""
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, (float, complex)):
        return value
    raise TypeError(f"unsupported scalar {value!r}")


def parse_scalar(value) -> Scalar:
    """Parse a JSON-level scalar: 'p/q' string, number, or [re, im] pair."""
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, bool):
        raise TypeError(f"unsupported scalar {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise TypeError(f"unsupported scalar {value!r}")


def format_scalar(value: Scalar):
    """Inverse of parse_scalar, for JSON emission."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return float(value)


@dataclass(frozen=True)
class ExponentSpec:
    """The tuple s = (s_ij), with optional charge provenance."""

    order: int
    entries: Mapping[tuple[int, int], Scalar]
    charges: tuple[Scalar, ...] | None = None
    beta: Scalar | None = field(default=None)

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"order must be >= 0, got {self.order}")
        expected = {(i, j) for i, j in itertools.combinations(range(1, self.order + 1), 2)}
        if set(self.entries) != expected:
            missing = expected - set(self.entries)
            extra = set(self.entries) - expected
            raise ValueError(f"bad pair keys: missing {missing or '{}'}, extra {extra or '{}'}")

    @classmethod
    def from_entries(cls, order: int, entries: Mapping[tuple[int, int], Scalar]) -> "ExponentSpec":
        fixed = {}
        for (i, j), v in entries.items():
            if not 1 <= i < j <= order:
                raise ValueError(f"pair ({i},{j}) out of range for order {order}")
            fixed[(i, j)] = _canon(v)
        return cls(order, fixed)

    @classmethod
    def from_charges(cls, charges: Iterable[Scalar], beta: Scalar) -> "ExponentSpec":
        qs = tuple(_canon(c) for c in charges)
        b = _canon(beta)
        entries = {
            (i, j): qs[i - 1] * qs[j - 1] * b
            for i, j in itertools.combinations(range(1, len(qs) + 1), 2)
        }
        return cls(len(qs), entries, charges=qs, beta=b)

    @classmethod
    def one_component(cls, order: int, beta: Scalar) -> "ExponentSpec":
        return cls.from_charges((1,) * order, beta)

    @classmethod
    def from_json(cls, doc: Mapping) -> "ExponentSpec":
        n = int(doc["n"])
        if "charges" in doc:
            return cls.from_charges(
                [parse_scalar(c) for c in doc["charges"]], parse_scalar(doc["beta"])
            )
        entries = {}
        for key, val in doc["s"].items():
            i, j = (int(part) for part in key.split(","))
            entries[(i, j)] = parse_scalar(val)
        return cls.from_entries(n, entries)

    def to_json(self) -> dict:
        if self.charges is not None:
            return {
                "n": self.order,
                "charges": [format_scalar(c) for c in self.charges],
                "beta": format_scalar(self.beta),
            }
        return {
            "n": self.order,
            "s": {f"{i},{j}": format_scalar(v) for (i, j), v in sorted(self.entries.items())},
        }

    def entry(self, i: int, j: int) -> Scalar:
        if i > j:
            i, j = j, i
        return self.entries[(i, j)]

    def pair_sum(self, subset: Iterable[int]) -> Scalar:
        """Sum of s_ij over pairs inside subset."""
        idx = sorted(subset)
        total: Scalar = Fraction(0)
        for i, j in itertools.combinations(idx, 2):
            total = total + self.entries[(i, j)]
        return total

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.entries.values())

    def is_integral(self) -> bool:
        """True when every s_ij is an integer, so every e(subset) is too."""
        return all(isinstance(v, Fraction) and v.denominator == 1 for v in self.entries.values())

    def is_symmetric(self) -> bool:
        """True when all pairwise exponents coincide (one-component shape)."""
        vals = set(self.entries.values())
        return len(vals) <= 1

    def charge_products(self) -> dict[tuple[int, int], Scalar] | None:
        """Pairwise charge products, when charge provenance is available."""
        if self.charges is None:
            return None
        return {
            (i, j): self.charges[i - 1] * self.charges[j - 1]
            for i, j in itertools.combinations(range(1, self.order + 1), 2)
        }

    def permuted(self, perm: Mapping[int, int]) -> "ExponentSpec":
        """Relabel indices by a bijection of [N] (for invariance checks)."""
        entries = {}
        for (i, j), v in self.entries.items():
            a, b = perm[i], perm[j]
            if a > b:
                a, b = b, a
            entries[(a, b)] = v
        return ExponentSpec(self.order, entries)


def e_lambda(spec: ExponentSpec, subset: Iterable[int]) -> Scalar:
    """The linear form |subset| - 1 + sum of s_ij inside subset.

    Empty subset gives -1, singletons give 0 (empty pair sums).
    """
    idx = sorted(subset)
    if any(not 1 <= i <= spec.order for i in idx) or len(set(idx)) != len(idx):
        raise ValueError(f"subset {idx} not inside [1..{spec.order}]")
    return (len(idx) - 1) + spec.pair_sum(idx)


def _real(value: Scalar):
    return value.real if isinstance(value, complex) else value


def _non_singleton_subsets(members: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    for size in range(2, len(members) + 1):
        yield from itertools.combinations(members, size)


def domain_violation(
    spec: ExponentSpec, members: Iterable[int] | None = None
) -> tuple[int, ...] | None:
    """First subset (by size, then lex) whose linear form has Re <= 0, or None.

    `members` restricts the test to subsets of a given index set.
    """
    idx = tuple(sorted(members)) if members is not None else tuple(range(1, spec.order + 1))
    for subset in _non_singleton_subsets(idx):
        if _real(e_lambda(spec, subset)) <= 0:
            return subset
    return None


def in_domain(spec: ExponentSpec, members: Iterable[int] | None = None) -> bool:
    """True iff Re(e(subset)) > 0 for every non-singleton subset."""
    return domain_violation(spec, members) is None
