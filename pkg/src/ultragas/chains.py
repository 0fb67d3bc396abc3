"""Reduced splitting chains over a finite index set.

A splitting chain on an index set I is a strictly refining sequence of set
partitions running from {I} down to singletons.  Its *branches* are the
non-singleton parts that occur along the way; each branch has a *degree*,
the number of parts it splits into at the next level.  A chain is *reduced*
when every branch occupies exactly one level, in which case the chain is
determined by its branch set alone: the branch sets form a laminar family
containing I, every branch of degree d has exactly d children (maximal
proper sub-branches plus leftover singletons), and the degrees satisfy
sum(degree - 1) = |I| - 1.

Enumeration is lazy and recursive: pick the first partition of I into
d >= 2 blocks (blocks generated in restricted-growth-string order), then
combine every choice of reduced chain on each non-singleton block.  The
counting routine is an independent check that never builds a chain.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cache
from typing import Iterable, Iterator, NamedTuple

__all__ = [
    "Branch",
    "ReducedChain",
    "MAX_ORDER_DEFAULT",
    "set_partitions",
    "enumerate_reduced_chains",
    "count_reduced_chains",
    "validate_chain",
]

# Full enumeration beyond this order is infeasible (the number of reduced
# chains grows super-exponentially); callers may raise the cap explicitly.
MAX_ORDER_DEFAULT = 12


class Branch(NamedTuple):
    """A non-singleton part of a chain with the number of parts it splits into."""

    members: tuple[int, ...]
    degree: int


@dataclass(frozen=True)
class ReducedChain:
    """A reduced splitting chain, stored as its branch set."""

    members: tuple[int, ...]
    branches: frozenset[Branch]

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def root(self) -> Branch | None:
        """The branch on the full index set; None for the length-0 chain."""
        for b in self.branches:
            if b.members == self.members:
                return b
        return None

    @property
    def root_degree(self) -> int | None:
        root = self.root
        return None if root is None else root.degree

    def depth(self, branch: Branch) -> int:
        """Nesting depth: the number of branches strictly containing this one.

        In a reduced chain every branch splits immediately, so this equals
        the index of the last partition the branch appears in.
        """
        mine = set(branch.members)
        return sum(
            1
            for other in self.branches
            if len(other.members) > len(branch.members) and mine < set(other.members)
        )

    def children(self, branch: Branch) -> list[tuple[int, ...]]:
        """The blocks branch splits into: maximal proper sub-branches plus singletons."""
        inside = [
            b.members
            for b in self.branches
            if len(b.members) < len(branch.members) and set(b.members) <= set(branch.members)
        ]
        maximal = [
            m for m in inside if not any(m != o and set(m) < set(o) for o in inside)
        ]
        covered = set().union(*map(set, maximal)) if maximal else set()
        blocks = maximal + [(i,) for i in branch.members if i not in covered]
        return sorted(blocks)

    def first_partition(self) -> list[tuple[int, ...]]:
        root = self.root
        if root is None:
            return [self.members] if self.members else []
        return self.children(root)

    def to_json(self) -> dict:
        branches = sorted(self.branches, key=lambda b: (-len(b.members), b.members))
        return {
            "branches": [
                {"members": list(b.members), "degree": b.degree} for b in branches
            ]
        }


def _checked_index_set(members: Iterable[int]) -> tuple[int, ...]:
    idx = tuple(members)
    if not idx:
        raise ValueError("empty index set")
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate labels in index set {idx}")
    return tuple(sorted(idx))


def set_partitions(labels: Iterable[int]) -> Iterator[list[tuple[int, ...]]]:
    """Yield all set partitions of labels, blocks ordered by least element.

    Partitions are generated in lexicographic order of their restricted
    growth string, which makes downstream enumeration order deterministic.
    """
    labels = tuple(labels)
    n = len(labels)
    if n == 0:
        yield []
        return
    assignment = [0] * n

    def emit() -> list[tuple[int, ...]]:
        nblocks = max(assignment) + 1
        blocks: list[list[int]] = [[] for _ in range(nblocks)]
        for label, b in zip(labels, assignment):
            blocks[b].append(label)
        return [tuple(b) for b in blocks]

    def rec(i: int, top: int) -> Iterator[list[tuple[int, ...]]]:
        if i == n:
            yield emit()
            return
        for v in range(top + 2):
            assignment[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


def enumerate_reduced_chains(
    members: Iterable[int], *, max_order: int = MAX_ORDER_DEFAULT
) -> Iterator[ReducedChain]:
    """Stream every reduced splitting chain on the given index set, exactly once.

    A singleton set yields the unique length-0 chain (empty branch set).
    Deterministic order: first partitions in restricted-growth-string order,
    sub-chains combined depth-first.
    """
    idx = _checked_index_set(members)
    if len(idx) > max_order:
        raise ValueError(
            f"order {len(idx)} exceeds cap {max_order}; "
            "full enumeration grows super-exponentially (raise max_order to force)"
        )
    yield from _stream(idx, {})


def _stream(
    idx: tuple[int, ...], pool_cache: dict[tuple[int, ...], tuple[ReducedChain, ...]]
) -> Iterator[ReducedChain]:
    if len(idx) == 1:
        yield ReducedChain(idx, frozenset())
        return
    for blocks in set_partitions(idx):
        if len(blocks) < 2:
            continue
        root = Branch(idx, len(blocks))
        pools = [_materialized(b, pool_cache) for b in blocks if len(b) > 1]
        if not pools:
            yield ReducedChain(idx, frozenset((root,)))
            continue
        for combo in itertools.product(*pools):
            branch_set = frozenset((root,)).union(*(c.branches for c in combo))
            yield ReducedChain(idx, branch_set)


def _materialized(
    idx: tuple[int, ...], pool_cache: dict[tuple[int, ...], tuple[ReducedChain, ...]]
) -> tuple[ReducedChain, ...]:
    got = pool_cache.get(idx)
    if got is None:
        got = tuple(_stream(idx, pool_cache))
        pool_cache[idx] = got
    return got


def count_reduced_chains(n: int, *, max_order: int | None = None) -> int:
    """Number of reduced splitting chains of order n, without enumerating them.

    Recurrence over the first partition's block-size multiset: a(1) = 1 and
    a(n) = sum over integer partitions of n into >= 2 parts of
    (set partitions with those block sizes) * prod a(size).
    """
    if n <= 0:
        raise ValueError(f"order must be >= 1, got {n}")
    if max_order is not None and n > max_order:
        raise ValueError(f"order {n} exceeds cap {max_order}")
    return _count(n)


@cache
def _count(n: int) -> int:
    if n == 1:
        return 1
    total = 0
    for sizes in _integer_partitions(n):
        if len(sizes) < 2:
            continue
        ways = math.factorial(n)
        for s in sizes:
            ways //= math.factorial(s)
        for mult in _multiplicities(sizes).values():
            ways //= math.factorial(mult)
        prod = 1
        for s in sizes:
            prod *= _count(s)
        total += ways * prod
    return total


def _integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    largest = n if largest is None else min(largest, n)
    for first in range(largest, 0, -1):
        for rest in _integer_partitions(n - first, first):
            yield (first, *rest)


def _multiplicities(sizes: tuple[int, ...]) -> dict[int, int]:
    out: dict[int, int] = {}
    for s in sizes:
        out[s] = out.get(s, 0) + 1
    return out


def validate_chain(chain) -> bool:
    """Check the reduced-chain invariants; False (never raises) on bad input."""
    try:
        members = tuple(chain.members)
        branches = list(chain.branches)
    except (AttributeError, TypeError):
        return False
    if not members or tuple(sorted(set(members))) != members:
        return False
    if len(members) == 1:
        return not branches
    seen: set[tuple[int, ...]] = set()
    full = set(members)
    for b in branches:
        try:
            bm, deg = tuple(b.members), int(b.degree)
        except (AttributeError, TypeError, ValueError):
            return False
        if bm in seen:
            return False
        seen.add(bm)
        if len(bm) < 2 or tuple(sorted(set(bm))) != bm or not set(bm) <= full:
            return False
        if not 2 <= deg <= len(bm):
            return False
    if members not in seen:
        return False
    sets = [set(b.members) for b in branches]
    for a, b in itertools.combinations(sets, 2):
        if a & b and not (a <= b or b <= a):
            return False
    for b in branches:
        blocks = ReducedChain(members, frozenset(branches)).children(b)
        if len(blocks) != b.degree:
            return False
        flat = [i for blk in blocks for i in blk]
        if sorted(flat) != list(b.members):
            return False
    return sum(b.degree - 1 for b in branches) == len(members) - 1
