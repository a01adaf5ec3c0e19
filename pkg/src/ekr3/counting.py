"""Exact cardinalities, the 2-wise 2-intersecting maximum, comparison lemmas
between the A and B constructions, and the regime classifier for M_3(n, k).

Everything here is exact: integers are Python ints, ratios are
:class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional

from .constructions import ConstructionId


def binom(n: int, k: int) -> int:
    """Binomial coefficient with ``binom(n, k) == 0`` for ``k < 0`` or ``k > n``."""
    if n < 0:
        raise ValueError(f"binom needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def card_A(n: int, k: int) -> int:
    _need(3 <= k < n, f"card_A needs 3 <= k < n, got n={n}, k={k}")
    return binom(n - 2, k - 2) - binom(n - k - 1, k - 2) + 2


def card_B(n: int, k: int) -> int:
    _need(3 <= k < n, f"card_B needs 3 <= k < n, got n={n}, k={k}")
    return 4 * binom(n - 4, k - 3) + binom(n - 4, k - 4)


def card_Bi(n: int, k: int, i: int) -> int:
    _need(i >= 1 and 2 + 2 * i <= n, f"card_Bi needs i >= 1 and 2+2i <= n, got n={n}, i={i}")
    _need(2 + i <= k < n, f"card_Bi needs 2+i <= k < n, got n={n}, k={k}, i={i}")
    w = 2 + 2 * i
    return sum(binom(w, m) * binom(n - w, k - m) for m in range(2 + i, min(w, k) + 1))


def card_C(n: int, k: int) -> int:
    _need(3 <= k < n, f"card_C needs 3 <= k < n, got n={n}, k={k}")
    l, odd = divmod(k, 2)
    if odd:
        return sum(
            binom(2 * l + 1, j) * binom(n - 2 * l - 2, 2 * l - j)
            for j in range(l + 1, 2 * l + 2)
        ) + 1
    return sum(
        binom(2 * l - 1, j) * binom(n - 2 * l, 2 * l - j - 1) for j in range(l, 2 * l)
    ) + (n - 2 * l)


CARD = {"A": card_A, "B": card_B, "C": card_C}


def card(cid: ConstructionId) -> int:
    if cid.tag == "Bi":
        return card_Bi(cid.n, cid.k, cid.i)
    return CARD[cid.tag](cid.n, cid.k)


# -- maximum non-trivial 2-wise 2-intersecting size ---------------------------


def m2_2(n: int, k: int) -> tuple[int, list[ConstructionId]]:
    """Maximum size of a non-trivial 2-wise 2-intersecting ``k``-uniform family
    on ``[n]``, together with every construction attaining it."""
    _need(k >= 3, f"m2_2 needs k >= 3, got {k}")
    _need(n > 2 * (k - 1), f"m2_2 needs n > 2(k-1), got n={n}, k={k}")
    if n <= 3 * (k - 1):
        sizes = {
            i: card_Bi(n, k, i)
            for i in range(1, k - 1)
            if 2 + 2 * i <= n
        }
        best = max(sizes.values())
        winners = [ConstructionId("Bi", n, k, i) for i, s in sizes.items() if s == best]
        return best, winners
    if k <= 5:
        return card_B(n, k), [ConstructionId("B", n, k)]
    a, b = card_A(n, k), card_B(n, k)
    best = max(a, b)
    winners = [ConstructionId(t, n, k) for t, s in (("A", a), ("B", b)) if s == best]
    return best, winners


def ak_window(n: int, k: int, i: int) -> bool:
    """``(2 + 1/(i+1))(k-1) <= n <= (2 + 1/i)(k-1)``, decided exactly."""
    lo = (2 + Fraction(1, i + 1)) * (k - 1)
    hi = (2 + Fraction(1, i)) * (k - 1)
    return lo <= n <= hi


# -- comparison lemmas ---------------------------------------------------------


def g_exact(n: int, k: int) -> Fraction:
    """``(n-4)(n-5)...(n-k)(n-3k+3) / ((n-k-1)(n-k-2)...(n-2k+2))``."""
    _need(k >= 4 and n >= 3 * k - 2, f"g_exact needs k >= 4, n >= 3k-2, got n={n}, k={k}")
    num = math.prod(range(n - k, n - 3)) * (n - 3 * k + 3)
    den = math.prod(range(n - 2 * k + 2, n - k))
    return Fraction(num, den)


def f_exact(k: int) -> Fraction:
    return g_exact(3 * k - 2, k)


def h_exact(n: int, k: int) -> Fraction:
    return g_exact(n + 1, k) - g_exact(n, k)


def h_printed(n: int, k: int) -> int:
    """The closed form printed for ``g(n+1,k) - g(n,k)``; used only as a sign surrogate."""
    return (k - 2) * ((5 - k) * n + 3 * k * k - 15 * k + 12)


def g_step_ratio(n: int, k: int) -> Fraction:
    """Closed form of ``g(n+1,k) / g(n,k)``."""
    return Fraction(
        (n - 3) * (n - 3 * k + 4) * (n - 2 * k + 2),
        (n - k) ** 2 * (n - 3 * k + 3),
    )


def f_ratio_printed(k: int) -> Fraction:
    return Fraction((2 * k - 1) ** 2 * (2 * k * k) ** 2, (3 * k - 3) * (3 * k - 4) * (3 * k - 5) * k)


def a_gt_b_lhs_rhs(n: int, k: int) -> tuple[Fraction, int]:
    """Both sides of ``binom(n-4,k-2)(n-3(k-1))/(n-k-1) + 2 > binom(n-k-1,k-2)``."""
    lhs = Fraction(binom(n - 4, k - 2) * (n - 3 * (k - 1)), n - k - 1) + 2
    return lhs, binom(n - k - 1, k - 2)


@dataclass
class LemmaReport:
    lemma: str
    passed: bool = True
    checked: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    notes: list[dict[str, Any]] = field(default_factory=list)

    def fail(self, **where: Any) -> None:
        self.passed = False
        self.violations.append(where)

    def check(self, ok: bool, **where: Any) -> None:
        self.checked += 1
        if not ok:
            self.fail(**where)

    def to_dict(self) -> dict[str, Any]:
        return {
            "lemma": self.lemma,
            "passed": self.passed,
            "checked": self.checked,
            "violations": self.violations,
            "notes": self.notes,
        }


def verify_A_lt_B(k_range: Iterable[int]) -> LemmaReport:
    """``card_A(n,k) < card_B(n,k)`` for ``k >= 4`` and ``2k <= n <= 3(k-1)``."""
    rep = LemmaReport("A<B")
    for k in k_range:
        _need(k >= 4, f"A<B lemma needs k >= 4, got {k}")
        for n in range(2 * k, 3 * (k - 1) + 1):
            a, b = card_A(n, k), card_B(n, k)
            rep.check(a < b, n=n, k=k, card_A=str(a), card_B=str(b))
    return rep


def verify_A_gt_B(k_range: Iterable[int], n_max: Optional[int] = None) -> LemmaReport:
    """Check the A>B inequality and the monotonicity claims used to prove it.

    ``n_max`` defaults to ``10k`` per ``k``.  The printed closed forms for
    ``h`` and ``f(k)/f(k+1)`` are compared against exact values and reported
    in ``notes``; they never fail the report.
    """
    rep = LemmaReport("A>B")
    ks = list(k_range)
    for k in ks:
        _need(k >= 9, f"A>B lemma needs k >= 9, got {k}")
    if not ks:
        return rep

    if 9 in ks:
        rep.check(f_exact(9) > 1, claim="f(9)>1", value=str(f_exact(9)))
    fk = {k: f_exact(k) for k in range(min(ks), max(ks) + 2)}
    for k in ks:
        rep.check(fk[k] < fk[k + 1], claim="f(k)<f(k+1)", k=k)
        true_ratio = fk[k] / fk[k + 1]
        printed = f_ratio_printed(k)
        if printed != true_ratio:
            rep.notes.append(
                {"claim": "f(k)/f(k+1) printed form", "k": k,
                 "exact": str(true_ratio), "printed": str(printed)}
            )

    for k in ks:
        top = n_max if n_max is not None else 10 * k
        rep.check(g_exact(3 * k - 2, k) > 1, claim="g(3k-2,k)>1", k=k)
        for n in range(3 * k - 2, top + 1):
            lhs, rhs = a_gt_b_lhs_rhs(n, k)
            ok = lhs > rhs and card_A(n, k) > card_B(n, k)
            rep.check(ok, claim="A>B", n=n, k=k, lhs=str(lhs), rhs=str(rhs))
        if k < 18:
            continue
        g = {n: g_exact(n, k) for n in range(3 * k - 2, max(top, 3 * k + 1) + 2)}
        rep.check(
            g[3 * k - 2] < g[3 * k - 1] < g[3 * k] < g[3 * k + 1],
            claim="g increasing on [3k-2,3k+1]", k=k,
        )
        for n in range(3 * k + 1, top):
            rep.check(g[n] > g[n + 1], claim="g decreasing beyond 3k+1", n=n, k=k)
        for n in range(3 * k - 2, top + 1):
            rep.check(g[n] >= 1, claim="g>=1", n=n, k=k)
        for n in range(3 * k - 2, top):
            rep.check(g_step_ratio(n, k) == g[n + 1] / g[n], claim="g step ratio", n=n, k=k)
        gaps = [abs(g_step_ratio(n, k) - 1) for n in range(3 * k + 1, top)]
        shrinking = all(a >= b for a, b in zip(gaps, gaps[1:]))
        rep.notes.append(
            {"claim": "g step ratio -> 1", "k": k, "monotone": shrinking,
             "last_gap": float(gaps[-1]) if gaps else None}
        )
        for n in range(3 * k - 2, 3 * k + 2):
            exact_sign = h_exact(n, k) > 0
            printed_sign = h_printed(n, k) > 0
            if exact_sign != printed_sign:
                rep.notes.append(
                    {"claim": "h sign surrogate", "n": n, "k": k,
                     "exact": str(h_exact(n, k)), "printed": h_printed(n, k)}
                )
    return rep


# -- classification --------------------------------------------------------------

FULL = "FULL"
A_EXACT = "A-EXACT"
B_EXACT = "B-EXACT"
SMALLK_EXACT = "SMALLK-EXACT"
B_ASYMPTOTIC = "B-ASYMPTOTIC"
C_BOUNDED = "C-BOUNDED"
UNKNOWN = "UNKNOWN"

# k -> list of (n_lo, n_hi or None, construction tag)
SMALL_K_TABLE: dict[int, list[tuple[int, Optional[int], str]]] = {
    4: [(7, None, "B")],
    5: [(9, None, "B")],
    6: [(21, None, "A"), (11, 20, "B")],
    7: [(21, None, "A"), (12, 20, "B")],
    8: [(23, None, "A"), (15, 21, "B")],
}


@dataclass(frozen=True)
class ClassifyRecord:
    n: int
    k: int
    regime: str
    value: Optional[int] = None
    lower: Optional[int] = None
    upper: Optional[int] = None
    witness: Optional[ConstructionId] = None

    def to_dict(self) -> dict[str, Any]:
        s = lambda v: None if v is None else str(v)  # noqa: E731
        return {
            "n": self.n,
            "k": self.k,
            "regime": self.regime,
            "value": s(self.value),
            "lower": s(self.lower),
            "upper": s(self.upper),
            "witness": s(self.witness),
        }


def _small_k_lookup(n: int, k: int) -> Optional[str]:
    for lo, hi, tag in SMALL_K_TABLE.get(k, ()):
        if n >= lo and (hi is None or n <= hi):
            return tag
    return None


def classify_m3(n: int, k: int) -> ClassifyRecord:
    """What is known about ``M_3(n, k)`` for ``3 <= k < n``."""
    _need(3 <= k < n, f"classify_m3 needs 3 <= k < n, got n={n}, k={k}")
    ratio = Fraction(k, n)
    if k == 3:
        return ClassifyRecord(n, k, SMALLK_EXACT, value=4, witness=ConstructionId("B", n, k))
    if ratio > Fraction(2, 3):
        return ClassifyRecord(n, k, FULL, value=binom(n, k))
    if k >= 9 and n >= 3 * k - 2:
        cid = ConstructionId("A", n, k)
        return ClassifyRecord(n, k, A_EXACT, value=card_A(n, k), witness=cid)
    if Fraction(5, 2) * (k - 1) <= n <= 3 * (k - 1):
        cid = ConstructionId("B", n, k)
        return ClassifyRecord(n, k, B_EXACT, value=card_B(n, k), witness=cid)
    if k <= 8:
        tag = _small_k_lookup(n, k)
        if tag is None:
            return ClassifyRecord(n, k, UNKNOWN)
        cid = ConstructionId(tag, n, k)
        return ClassifyRecord(n, k, SMALLK_EXACT, value=card(cid), witness=cid)
    if Fraction(2, 5) < ratio < Fraction(1, 2):
        cid = ConstructionId("B", n, k)
        return ClassifyRecord(n, k, B_ASYMPTOTIC, value=card_B(n, k), witness=cid)
    if Fraction(1, 2) < ratio < Fraction(2, 3):
        cid = ConstructionId("C", n, k)
        return ClassifyRecord(
            n, k, C_BOUNDED, lower=card_C(n, k), upper=binom(n - 1, k - 1) - 1, witness=cid
        )
    return ClassifyRecord(n, k, UNKNOWN)


def density_trend(tag: str, p: Fraction, n_list: Iterable[int]) -> list[dict[str, Any]]:
    """``card_X(n, floor(pn)) / binom(n, floor(pn))`` along ``n_list``."""
    rows = []
    for n in n_list:
        k = math.floor(p * n)
        value = CARD[tag](n, k)
        rows.append({"n": n, "k": k, "density": Fraction(value, binom(n, k))})
    return rows
