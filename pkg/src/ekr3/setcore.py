"""Subsets of [n] as bit masks, families of them, and the basic predicates.

A subset of ``[n] = {1, ..., n}`` is a plain ``int`` whose bit ``x - 1`` is set
iff ``x`` is a member.  Position 1 is therefore the least significant bit, and
the numeric order of masks is the canonical order of a :class:`Family`.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_GROUND = 64

KSubset = int


class FamilyError(ValueError):
    """Raised for malformed families or out-of-range members."""


def mask(positions: Iterable[int]) -> KSubset:
    m = 0
    for x in positions:
        m |= 1 << (x - 1)
    return m


def positions(m: KSubset) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length())
        m ^= low
    return out


def ground_mask(n: int) -> KSubset:
    return (1 << n) - 1


@dataclass(frozen=True)
class IntersectionSpec:
    """``r``-wise ``t``-intersection requirement."""

    r: int
    t: int = 1

    def __post_init__(self) -> None:
        if self.r < 2:
            raise ValueError(f"r must be >= 2, got {self.r}")
        if self.t < 1:
            raise ValueError(f"t must be >= 1, got {self.t}")


@dataclass(frozen=True)
class Family:
    """Sorted, duplicate-free tuple of subset masks on a common ground set.

    ``k == 0`` marks a non-uniform family (a subfamily of the power set).
    Build instances with :func:`make_family` or :meth:`from_masks`; the raw
    constructor trusts its input.
    """

    n: int
    k: int
    members: tuple[KSubset, ...]

    @classmethod
    def from_masks(cls, n: int, k: int, masks: Iterable[KSubset]) -> "Family":
        _check_ground(n)
        full = ground_mask(n)
        ms = sorted(set(masks))
        for m in ms:
            if m & ~full or m < 0:
                raise FamilyError(f"member {positions(m)} out of range for n={n}")
            if k > 0 and m.bit_count() != k:
                raise FamilyError(
                    f"member {positions(m)} has size {m.bit_count()}, expected {k}"
                )
        return cls(n, k, tuple(ms))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[KSubset]:
        return iter(self.members)

    def __contains__(self, m: object) -> bool:
        i = bisect.bisect_left(self.members, m)
        return i < len(self.members) and self.members[i] == m

    def sets(self) -> list[list[int]]:
        return [positions(m) for m in self.members]

    def to_text(self) -> str:
        lines = [f"{self.n} {self.k} {len(self.members)}"]
        lines.extend(" ".join(map(str, positions(m))) for m in self.members)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Family":
        lines = text.splitlines()
        if not lines:
            raise FamilyError("empty family text")
        try:
            n, k, m = (int(tok) for tok in lines[0].split())
        except ValueError:
            raise FamilyError(f"bad header line: {lines[0]!r}") from None
        body = lines[1 : 1 + m]
        if len(body) != m:
            raise FamilyError(f"header announces {m} members, found {len(body)}")
        sets = [[int(tok) for tok in line.split()] for line in body]
        return make_family(n, k, sets)


def _check_ground(n: int) -> None:
    if not 1 <= n <= MAX_GROUND:
        raise FamilyError(f"ground size n={n} outside 1..{MAX_GROUND}")


def make_family(n: int, k: int, members: Iterable[Iterable[int]]) -> Family:
    """Canonical family from position lists.

    >>> len(make_family(5, 2, [[1, 2], [2, 1]]))
    1
    """
    _check_ground(n)
    masks = []
    for s in members:
        s = list(s)
        if any(not 1 <= x <= n for x in s):
            raise FamilyError(f"member {sorted(s)} out of range for n={n}")
        masks.append(mask(s))
    return Family.from_masks(n, k, masks)


def all_k_subsets(n: int, k: int) -> Family:
    bits = [1 << i for i in range(n)]
    return Family(n, k, tuple(sorted(sum(c) for c in itertools.combinations(bits, k))))


def _nonempty(F: Family) -> None:
    if not F.members:
        raise FamilyError("operation undefined on the empty family")


def intersection_masks(members: Sequence[KSubset], r: int) -> set[KSubset]:
    """All distinct intersections of at most ``r`` members."""
    level = set(members)
    for _ in range(r - 1):
        level = {m & g for m in level for g in members}
    return level


def is_r_wise_t_intersecting(F: Family, spec: IntersectionSpec) -> bool:
    """True iff every ``spec.r`` members (repetition allowed) share ``spec.t`` points."""
    _nonempty(F)
    ms = F.members
    t = spec.t
    if any(m.bit_count() < t for m in ms):
        return False
    level = set(ms)
    for _ in range(spec.r - 1):
        nxt = set()
        for m in level:
            for g in ms:
                x = m & g
                if x.bit_count() < t:
                    return False
                nxt.add(x)
        level = nxt
    return True


def common_intersection(F: Family) -> KSubset:
    _nonempty(F)
    acc = -1
    for m in F.members:
        acc &= m
    return acc


def is_nontrivial(F: Family, t: int = 1) -> bool:
    return common_intersection(F).bit_count() < t


def _check_pair(n: int, i: int, j: int) -> None:
    if not 1 <= i < j <= n:
        raise FamilyError(f"shift needs 1 <= i < j <= n, got i={i}, j={j}, n={n}")


def shift_once(F: Family, i: int, j: int) -> Family:
    """The (i, j)-shift: move ``j`` to ``i`` in every member where that is new."""
    _check_pair(F.n, i, j)
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    present = set(F.members)
    out = []
    for m in F.members:
        if m & bj and not m & bi:
            moved = (m ^ bj) | bi
            if moved not in present:
                out.append(moved)
                continue
        out.append(m)
    return Family(F.n, F.k, tuple(sorted(out)))


def shift_fixpoint(F: Family) -> Family:
    """Sweep all (i, j) shifts in lexicographic order until nothing moves."""
    pairs = [(i, j) for i in range(1, F.n + 1) for j in range(i + 1, F.n + 1)]
    while True:
        before = F.members
        for i, j in pairs:
            F = shift_once(F, i, j)
        if F.members == before:
            return F


def is_shifted(F: Family) -> bool:
    present = set(F.members)
    for m in F.members:
        for j in range(2, F.n + 1):
            bj = 1 << (j - 1)
            if not m & bj:
                continue
            for i in range(1, j):
                bi = 1 << (i - 1)
                if not m & bi and (m ^ bj) | bi not in present:
                    return False
    return True


def upper_shadow(F: Family, i: int) -> Family:
    """All ``i``-subsets of [n] containing at least one member of ``F``."""
    if F.k <= 0:
        raise FamilyError("upper shadow needs a uniform family")
    if not F.k <= i <= F.n:
        raise FamilyError(f"shadow level {i} outside {F.k}..{F.n}")
    full = ground_mask(F.n)
    out: set[int] = set()
    extra = i - F.k
    for m in F.members:
        free = [1 << (x - 1) for x in positions(full & ~m)]
        for c in itertools.combinations(free, extra):
            out.add(m | sum(c))
    return Family(F.n, i, tuple(sorted(out)))
