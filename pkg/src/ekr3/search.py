"""Exact maximum-family search on small ground sets.

Candidates are the ``binom(n, k)`` k-subsets in canonical order; a family is
a set of candidate indices held as an ``int`` bitset.  The search is a
depth-first branch and bound in the style of maximum-clique solvers:

* the pairwise condition (``|F ∩ G| >= t``) is a graph, and a greedy colouring
  of the remaining candidates bounds how many can still be added;
* for ``r = 3`` every new member must also meet every pairwise intersection of
  the chosen members in ``t`` points, tracked through a precomputed
  ``hit[a][b]`` bitset of candidates;
* with ``nontrivial=True`` a branch is cut as soon as all chosen and remaining
  candidates share ``t`` common points.  For ``r = 3`` non-triviality also
  forces ``|F ∩ G| >= t + 1`` for every pair, which tightens the graph.

The search is sequential, so values and witnesses are reproducible.
"""
from __future__ import annotations

import logging
import time
from math import comb
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from .counting import classify_m3
from .setcore import (
    Family,
    IntersectionSpec,
    all_k_subsets,
    is_nontrivial,
    is_r_wise_t_intersecting,
    positions,
)

log = logging.getLogger(__name__)

EXACT = "EXACT"
LOWER_BOUND = "LOWER_BOUND"
INCOMPLETE = "INCOMPLETE"


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int = 70
    time_limit: float = 600.0
    node_limit: int = 50_000_000

    def __post_init__(self) -> None:
        if self.max_candidates <= 0 or self.time_limit <= 0 or self.node_limit <= 0:
            raise ValueError("search budget entries must be positive")


@dataclass
class SearchResult:
    status: str
    value: int
    witnesses: list[Family] = field(default_factory=list)
    nodes: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "value": str(self.value),
            "nodes": self.nodes,
            "witnesses": [w.to_text() for w in self.witnesses],
        }


class _BudgetExceeded(Exception):
    pass


class _Counter:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.time_limit

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.node_limit:
            raise _BudgetExceeded("node limit")
        if self.nodes & 0x3FF == 0 and time.monotonic() > self.deadline:
            raise _BudgetExceeded("time limit")


def _supported(spec: IntersectionSpec) -> None:
    if spec.r not in (2, 3):
        raise ValueError(f"search supports r in {{2, 3}}, got r={spec.r}")


class _Problem:
    """Candidate list plus compatibility bitsets for one (n, k, r, t) instance."""

    def __init__(self, n: int, k: int, spec: IntersectionSpec, nontrivial: bool):
        self.n, self.k, self.spec, self.nontrivial = n, k, spec, nontrivial
        self.cands = list(all_k_subsets(n, k).members)
        m = len(self.cands)
        t = spec.t
        need = t + 1 if spec.r == 3 and nontrivial else t
        cands = self.cands
        self.adj = [0] * m
        for a in range(m):
            ca, row = cands[a], 0
            for b in range(m):
                if b != a and (ca & cands[b]).bit_count() >= need:
                    row |= 1 << b
            self.adj[a] = row
        self.hit: Optional[list[list[int]]] = None
        if spec.r == 3:
            by_mask: dict[int, int] = {}
            self.hit = [[0] * m for _ in range(m)]
            for a in range(m):
                for b in range(a, m):
                    x = cands[a] & cands[b]
                    row = by_mask.get(x)
                    if row is None:
                        row = 0
                        for c in range(m):
                            if (cands[c] & x).bit_count() >= t:
                                row |= 1 << c
                        by_mask[x] = row
                    self.hit[a][b] = self.hit[b][a] = row

    def common(self, pool: int, acc: int) -> int:
        cands = self.cands
        while pool and acc:
            low = pool & -pool
            acc &= cands[low.bit_length() - 1]
            pool ^= low
        return acc

    def narrowed(self, pool: int, v: int, chosen: list[int]) -> int:
        pool &= self.adj[v]
        if self.hit is not None:
            hv = self.hit[v]
            for s in chosen:
                pool &= hv[s]
        return pool

    def family(self, idx: Iterable[int]) -> Family:
        return Family(self.n, self.k, tuple(sorted(self.cands[i] for i in idx)))


def _colour_order(pool: int, adj: list[int]) -> list[tuple[int, int]]:
    """Greedy sequential colouring; returns ``(vertex, colour)`` by ascending colour."""
    order = []
    colour = 0
    uncoloured = pool
    while uncoloured:
        colour += 1
        q = uncoloured
        while q:
            low = q & -q
            v = low.bit_length() - 1
            uncoloured ^= low
            q &= ~low & ~adj[v]
            order.append((v, colour))
    return order


def _check_budget(n: int, k: int, budget: SearchBudget) -> Optional[str]:
    size = comb(n, k)
    if size > budget.max_candidates:
        return f"binom({n},{k})={size} exceeds max_candidates={budget.max_candidates}"
    return None


def max_family(
    n: int,
    k: int,
    spec: IntersectionSpec,
    nontrivial: bool = True,
    budget: SearchBudget = SearchBudget(),
    witnesses: int = 1,
) -> SearchResult:
    """Largest ``k``-uniform ``(r, t)``-intersecting family on ``[n]``.

    Returns ``EXACT`` when the search finished inside ``budget``; otherwise
    ``INCOMPLETE`` with the best family found so far as a lower bound.
    Up to ``witnesses`` optimal families are returned in canonical order.
    """
    _supported(spec)
    if not 1 <= k < n:
        raise ValueError(f"max_family needs 1 <= k < n, got n={n}, k={k}")
    too_big = _check_budget(n, k, budget)
    if too_big:
        log.warning("search not started: %s", too_big)
        return SearchResult(INCOMPLETE, 0)

    prob = _Problem(n, k, spec, nontrivial)
    counter = _Counter(budget)
    t = spec.t
    best = [0]
    found: list[list[int]] = []
    want = max(witnesses, 1)

    def accept(chosen: list[int], common: int) -> None:
        sz = len(chosen)
        if nontrivial and common.bit_count() >= t:
            return
        if sz > best[0]:
            best[0] = sz
            found.clear()
        if sz == best[0] and len(found) < want:
            found.append(list(chosen))

    def pruned(sz: int, bound: int) -> bool:
        # keep exploring ties until enough witnesses are collected
        if len(found) < want:
            return bound < best[0]
        return bound <= best[0]

    def expand(chosen: list[int], pool: int, common: int) -> None:
        counter.tick()
        accept(chosen, common)
        if not pool:
            return
        if nontrivial and prob.common(pool, common).bit_count() >= t:
            return
        order = _colour_order(pool, prob.adj)
        sz = len(chosen)
        for idx in range(len(order) - 1, -1, -1):
            v, colour = order[idx]
            if pruned(sz, sz + colour):
                return
            chosen.append(v)
            expand(chosen, prob.narrowed(pool, v, chosen[:-1]), common & prob.cands[v])
            chosen.pop()
            pool &= ~(1 << v)
            if nontrivial and prob.common(pool, common).bit_count() >= t:
                return

    status = EXACT
    try:
        expand([], (1 << len(prob.cands)) - 1, (1 << n) - 1)
    except _BudgetExceeded as exc:
        log.warning("search (%d,%d,%s) stopped: %s", n, k, spec, exc)
        status = INCOMPLETE
    fams = sorted((prob.family(w) for w in found), key=lambda f: f.members)
    for fam in fams:
        _recheck(fam, spec, nontrivial)
    return SearchResult(status, best[0], fams, counter.nodes)


def _recheck(fam: Family, spec: IntersectionSpec, nontrivial: bool) -> None:
    if not fam.members:
        return
    if not is_r_wise_t_intersecting(fam, spec):
        raise AssertionError(f"search witness fails {spec}: {fam.sets()}")
    if nontrivial and not is_nontrivial(fam, spec.t):
        raise AssertionError(f"search witness is trivial: {fam.sets()}")


# -- shifted families -----------------------------------------------------------


def _shift_order(n: int, k: int) -> list[int]:
    """Candidates sorted so every set comes after all its left shifts."""
    cands = all_k_subsets(n, k).members
    return sorted(cands, key=lambda m: (sum(positions(m)), m))


def _dominates(a: int, b: int) -> bool:
    """``a`` is reachable from ``b`` by left shifts (``a <= b`` elementwise)."""
    return all(x <= y for x, y in zip(positions(a), positions(b)))


def shifted_lower_bound(
    n: int,
    k: int,
    spec: IntersectionSpec,
    budget: SearchBudget = SearchBudget(),
    nontrivial: bool = False,
) -> SearchResult:
    """Largest shifted ``(r, t)``-intersecting family; a lower bound in general.

    Candidates are decided include/exclude along a linear extension of the
    shifting order: a set may only be included when all its one-step left
    shifts are, and excluding a set excludes everything above it.
    """
    _supported(spec)
    if not 1 <= k < n:
        raise ValueError(f"shifted_lower_bound needs 1 <= k < n, got n={n}, k={k}")
    too_big = _check_budget(n, k, budget)
    if too_big:
        log.warning("search not started: %s", too_big)
        return SearchResult(INCOMPLETE, 0)

    order = _shift_order(n, k)
    m = len(order)
    index = {c: i for i, c in enumerate(order)}
    t = spec.t
    preds = [0] * m
    ups = [0] * m
    for i, c in enumerate(order):
        for x in positions(c):
            if x > 1 and not c & (1 << (x - 2)):
                preds[i] |= 1 << index[(c ^ (1 << (x - 1))) | (1 << (x - 2))]
        for j in range(i + 1, m):
            if _dominates(c, order[j]):
                ups[i] |= 1 << j
    need = t + 1 if spec.r == 3 and nontrivial else t
    adj = [0] * m
    for a in range(m):
        for b in range(m):
            if (order[a] & order[b]).bit_count() >= need or a == b:
                adj[a] |= 1 << b
    counter = _Counter(budget)
    best: list[Any] = [0, None]

    def common(pool: int, acc: int) -> int:
        while pool and acc:
            low = pool & -pool
            acc &= order[low.bit_length() - 1]
            pool ^= low
        return acc

    def compatible(v: int, chosen: list[int]) -> bool:
        if spec.r == 2:
            return True
        cv = order[v]
        for a in range(len(chosen)):
            ca = order[chosen[a]] & cv
            for b in range(a, len(chosen)):
                if (ca & order[chosen[b]]).bit_count() < t:
                    return False
        return True

    def rec(chosen: list[int], chosen_bits: int, avail: int, acc: int) -> None:
        counter.tick()
        sz = len(chosen)
        if sz + avail.bit_count() <= best[0]:
            return
        if nontrivial and common(avail, acc).bit_count() >= t:
            return
        if not avail:
            best[0], best[1] = sz, list(chosen)
            return
        low = avail & -avail
        v = low.bit_length() - 1
        rest = avail ^ low
        if preds[v] & ~chosen_bits == 0 and compatible(v, chosen):
            chosen.append(v)
            rec(chosen, chosen_bits | low, rest & adj[v], acc & order[v])
            chosen.pop()
        rec(chosen, chosen_bits, rest & ~ups[v], acc)

    status = LOWER_BOUND
    try:
        rec([], 0, (1 << m) - 1, (1 << n) - 1)
    except _BudgetExceeded as exc:
        log.warning("shifted search (%d,%d,%s) stopped: %s", n, k, spec, exc)
        status = INCOMPLETE
    fams = []
    if best[1]:
        fam = Family(n, k, tuple(sorted(order[i] for i in best[1])))
        _recheck(fam, spec, nontrivial)
        fams.append(fam)
    return SearchResult(status, best[0], fams, counter.nodes)


# -- claims table -----------------------------------------------------------------

DEFAULT_GRID = tuple([(n, 3) for n in range(4, 9)] + [(6, 4), (7, 4), (8, 4)])


def verify_claims(
    grid: Iterable[tuple[int, int]] = DEFAULT_GRID, budget: SearchBudget = SearchBudget()
) -> list[dict[str, Any]]:
    """Search ``M_3(n, k)`` on each grid point and compare with :func:`classify_m3`.

    ``agree`` is ``None`` where the classifier has no exact value (the search
    result is then new data outside the known results).
    """
    rows = []
    spec = IntersectionSpec(3, 1)
    for n, k in grid:
        res = max_family(n, k, spec, nontrivial=True, budget=budget)
        rec = classify_m3(n, k)
        agree: Optional[bool] = None
        if rec.value is not None and res.status == EXACT:
            agree = res.value == rec.value
        elif res.status != EXACT:
            agree = False
        rows.append(
            {
                "n": n,
                "k": k,
                "status": res.status,
                "search_value": res.value,
                "regime": rec.regime,
                "classify_value": rec.value,
                "agree": agree,
            }
        )
    return rows
