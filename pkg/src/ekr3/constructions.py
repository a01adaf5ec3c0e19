"""Explicit extremal families.

Every generator builds members as ``fixed | head | tail`` where ``head`` is
chosen inside a window of consecutive positions and ``tail`` outside it, so
nothing is filtered out of the full ``binom(n, k)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .setcore import MAX_GROUND, Family, mask

MEASURE_MAX_N = 20


@dataclass(frozen=True)
class ConstructionId:
    tag: str  # "A", "B", "Bi", "C" or "Bmeasure"
    n: int
    k: int
    i: Optional[int] = None

    def __str__(self) -> str:
        return f"B{self.i}" if self.tag == "Bi" else self.tag


@lru_cache(maxsize=256)
def _combo_masks(lo: int, hi: int, r: int) -> tuple[int, ...]:
    """Masks of every ``r``-subset of positions ``lo..hi``."""
    if r < 0 or r > max(hi - lo + 1, 0):
        return ()
    bits = [1 << (x - 1) for x in range(lo, hi + 1)]
    return tuple(sum(c) for c in itertools.combinations(bits, r))


def _window_members(
    n: int, fixed: int, size: int, lo: int, hi: int, min_hits: int
) -> list[int]:
    """Sets ``fixed | h | t`` with ``|h| >= min_hits`` inside ``[lo, hi]``,
    ``t`` inside ``[hi+1, n]``, and ``|h| + |t| == size``."""
    out: list[int] = []
    for j in range(min_hits, min(size, hi - lo + 1) + 1):
        heads = _combo_masks(lo, hi, j)
        tails = _combo_masks(hi + 1, n, size - j)
        for t in tails:
            base = fixed | t
            out.extend(base | h for h in heads)
    return out


def _check(cond: bool, what: str) -> None:
    if not cond:
        raise ValueError(what)


def gen_A(n: int, k: int) -> Family:
    """``{F : [2] ⊆ F, F ∩ [3, k+1] ≠ ∅}`` plus ``[k+1]∖{1}`` and ``[k+1]∖{2}``."""
    _check(3 <= k < n <= MAX_GROUND, f"gen_A needs 3 <= k < n <= {MAX_GROUND}, got n={n}, k={k}")
    members = _window_members(n, 0b11, k - 2, 3, k + 1, 1)
    top = mask(range(1, k + 2))
    members += [top ^ 1, top ^ 2]
    return Family(n, k, tuple(sorted(members)))


def gen_B(n: int, k: int) -> Family:
    """``{F : |F ∩ [4]| >= 3}``."""
    _check(3 <= k < n <= MAX_GROUND, f"gen_B needs 3 <= k < n <= {MAX_GROUND}, got n={n}, k={k}")
    return Family(n, k, tuple(sorted(_window_members(n, 0, k, 1, 4, 3))))


def gen_Bi(n: int, k: int, i: int) -> Family:
    """Frequency family ``{F : |F ∩ [2+2i]| >= 2+i}``; ``gen_Bi(n, k, 1) == gen_B(n, k)``."""
    _check(i >= 1, f"gen_Bi needs i >= 1, got {i}")
    _check(2 + 2 * i <= n, f"gen_Bi needs 2+2i <= n, got i={i}, n={n}")
    _check(k >= 2 + i, f"gen_Bi needs k >= 2+i, got k={k}, i={i}")
    _check(k < n <= MAX_GROUND, f"gen_Bi needs k < n <= {MAX_GROUND}")
    return Family(n, k, tuple(sorted(_window_members(n, 0, k, 1, 2 + 2 * i, 2 + i))))


def gen_C(n: int, k: int) -> Family:
    """The family dominating the range ``1/2 < k/n < 2/3``.

    Even ``k = 2l``: sets through 1 meeting ``[2, 2l]`` in at least ``l`` points,
    plus ``[2, 2l] ∪ {i}`` for every ``i > 2l``.
    Odd ``k = 2l+1``: ``(2l+1)``-sets through 1 meeting ``[2, 2l+2]`` in at
    least ``l+1`` points, plus ``[2, 2l+2]`` itself.
    """
    _check(3 <= k < n <= MAX_GROUND, f"gen_C needs 3 <= k < n <= {MAX_GROUND}, got n={n}, k={k}")
    l, odd = divmod(k, 2)
    if odd:
        members = _window_members(n, 1, k - 1, 2, 2 * l + 2, l + 1)
        members.append(mask(range(2, 2 * l + 3)))
    else:
        members = _window_members(n, 1, k - 1, 2, 2 * l, l)
        core = mask(range(2, 2 * l + 1))
        members += [core | 1 << (x - 1) for x in range(2 * l + 1, n + 1)]
    return Family(n, k, tuple(sorted(members)))


def gen_B_measure(n: int) -> Family:
    """Non-uniform ``{F ⊆ [n] : |F ∩ [4]| >= 3}``."""
    _check(4 <= n <= MEASURE_MAX_N, f"gen_B_measure needs 4 <= n <= {MEASURE_MAX_N}, got {n}")
    heads = [m for m in range(16) if m.bit_count() >= 3]
    members = [(t << 4) | h for t in range(1 << (n - 4)) for h in heads]
    return Family(n, 0, tuple(members))


def build(cid: ConstructionId) -> Family:
    if cid.tag == "A":
        return gen_A(cid.n, cid.k)
    if cid.tag == "B":
        return gen_B(cid.n, cid.k)
    if cid.tag == "Bi":
        if cid.i is None:
            raise ValueError("Bi construction needs i")
        return gen_Bi(cid.n, cid.k, cid.i)
    if cid.tag == "C":
        return gen_C(cid.n, cid.k)
    if cid.tag == "Bmeasure":
        return gen_B_measure(cid.n)
    raise ValueError(f"unknown construction tag {cid.tag!r}")
