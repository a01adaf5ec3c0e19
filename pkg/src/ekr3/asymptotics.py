"""Hypergeometric window sums behind the lower bound for ``|C(n, k)|``.

``theta_j(n, k) = binom(k, j) binom(n-k, k-j) / binom(n, k)`` is the chance
that a random ``k``-set meets a fixed ``k``-set in exactly ``j`` points.  With
``p = k/n`` it concentrates around ``p^2 n`` with variance about ``p^2 q^2 n``.
The window is ``{j : |j - p^2 n| <= c sqrt(n)}``, decided in exact arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence, Union

from .counting import binom, card_C

Real = Union[Fraction, int, float, str]

LN2 = math.log(2.0)
# n = 400 * 4^m keeps p^2 n and c sqrt(n) integral for p = 11/20, c = 1/5
ERF_LIMIT_N_LIST = (400, 1600, 6400, 25600, 102400)
RESIDUAL_N_LIST = (200, 400, 800, 1600)


def erf(z: float) -> float:
    return math.erf(z)


def _log_ratio(num: int, den: int) -> float:
    """``ln(num/den)`` for huge positive ints, via a 96-bit scaled quotient."""
    shift = den.bit_length() - num.bit_length() + 96
    if shift >= 0:
        q = (num << shift) // den
    else:
        q = num // (den << -shift)
    return math.log(q) - shift * LN2


def theta_exact(n: int, k: int, j: int) -> Fraction:
    if not 0 <= j <= k <= n:
        raise ValueError(f"theta_exact needs 0 <= j <= k <= n, got n={n}, k={k}, j={j}")
    return Fraction(binom(k, j) * binom(n - k, k - j), binom(n, k))


def theta_approx(n: int, p: Real, j: int) -> float:
    """Main term ``exp(-z^2 (p^2 q^2 n - (1-2p)^2 z) / (2 p^4 q^4 n^2)) / (pq sqrt(2 pi n))``
    with ``z = j - p^2 n``."""
    p = float(p)
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if not 0 <= j <= n:
        raise ValueError(f"j={j} outside 0..{n}")
    q = 1.0 - p
    z = j - p * p * n
    expo = -(z * z) * (p * p * q * q * n - (1 - 2 * p) ** 2 * z) / (2 * p**4 * q**4 * n * n)
    return math.exp(expo) / (p * q * math.sqrt(2 * math.pi * n))


def nearest_k(n: int, p: Fraction) -> int:
    """``k = round(p n)``, halves rounded up."""
    return math.floor(p * n + Fraction(1, 2))


@dataclass(frozen=True)
class ThetaWindow:
    n: int
    p: Fraction
    c: Fraction
    members: tuple[int, ...]

    @property
    def center(self) -> Fraction:
        return self.p * self.p * self.n


def theta_window(n: int, p: Real, c: Real) -> ThetaWindow:
    p, c = Fraction(p), Fraction(c)
    if c <= 0:
        raise ValueError(f"window half-width c must be positive, got {c}")
    center = p * p * n
    r2 = c * c * n
    reach = math.isqrt(math.ceil(r2)) + 2
    lo = math.floor(center) - reach
    hi = math.ceil(center) + reach
    members = tuple(j for j in range(lo, hi + 1) if (j - center) ** 2 <= r2)
    return ThetaWindow(n, p, c, members)


@dataclass(frozen=True)
class ThetaValue:
    exact: Fraction
    approx: float
    residual: float


def theta_value(n: int, k: int, j: int) -> ThetaValue:
    exact = theta_exact(n, k, j)
    approx = theta_approx(n, Fraction(k, n), j)
    residual = _log_ratio(exact.numerator, exact.denominator) - math.log(approx)
    return ThetaValue(exact, approx, residual)


def _window_terms(n: int, k: int, js: Sequence[int]) -> list[int]:
    """``binom(k, j) binom(n-k, k-j)`` for consecutive ``js`` via exact recurrences."""
    if not js:
        return []
    j0 = js[0]
    a, b = binom(k, j0), binom(n - k, k - j0)
    out = [a * b]
    for j in js[:-1]:
        a = a * (k - j) // (j + 1)
        b = b * (k - j) // (n - 2 * k + j + 1) if k - j - 1 >= 0 else 0
        out.append(a * b)
    return out


@dataclass
class ResidualRow:
    n: int
    k: int
    window_size: int
    max_residual: float
    argmax_j: int


@dataclass
class ResidualReport:
    p: Fraction
    c: Fraction
    rows: list[ResidualRow]
    nonmonotone_steps: int
    decreasing: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": str(self.p),
            "c": str(self.c),
            "rows": [vars(r) for r in self.rows],
            "nonmonotone_steps": self.nonmonotone_steps,
            "decreasing": self.decreasing,
        }


def _checked_window(n: int, p: Fraction, c: Fraction) -> tuple[int, ThetaWindow]:
    k = nearest_k(n, p)
    w = theta_window(n, Fraction(k, n), c)
    if not w.members:
        raise ValueError(f"empty window at n={n}")
    if w.members[0] < 0 or w.members[-1] > k:
        raise ValueError(f"window escapes [0, {k}] at n={n}")
    return k, w


def residual_report(p: Real, c: Real, n_list: Iterable[int] = RESIDUAL_N_LIST) -> ResidualReport:
    """Largest ``|ln theta_exact - ln theta_approx|`` over the window, per ``n``.

    ``k = round(p n)`` and the approximation uses the realised ``k/n``.  A
    single non-monotone step is tolerated (flagged in ``nonmonotone_steps``).
    """
    p, c = Fraction(p), Fraction(c)
    rows = []
    for n in n_list:
        k, w = _checked_window(n, p, c)
        js = list(w.members)
        terms = _window_terms(n, k, js)
        total = binom(n, k)
        pk = float(Fraction(k, n))
        best, arg = -1.0, js[0]
        for j, term in zip(js, terms):
            res = abs(_log_ratio(term, total) - math.log(theta_approx(n, pk, j)))
            if res > best:
                best, arg = res, j
        rows.append(ResidualRow(n, k, len(js), best, arg))
    bad = sum(1 for a, b in zip(rows, rows[1:]) if b.max_residual >= a.max_residual)
    return ResidualReport(p, c, rows, bad, bad <= 1)


def sum_theta_window(n: int, p: Real, c: Real) -> float:
    """Exact windowed sum of ``theta_j`` (``j`` clipped to ``0..k``), rounded once."""
    p, c = Fraction(p), Fraction(c)
    k = nearest_k(n, p)
    w = theta_window(n, Fraction(k, n), c)
    js = [j for j in w.members if 0 <= j <= k]
    return float(Fraction(sum(_window_terms(n, k, js)), binom(n, k)))


def erf_candidates(p: Real, c: Real) -> dict[str, float]:
    """The two closed forms proposed for the limit of the windowed sum."""
    p, c = float(Fraction(p)), float(Fraction(c))
    q = 1 - p
    return {
        "erf(3c/(sqrt2 p))": erf(3 * c / (math.sqrt(2) * p)),
        "erf(c/(sqrt2 pq))": erf(c / (math.sqrt(2) * p * q)),
    }


@dataclass
class ErfLimitReport:
    p: Fraction
    c: Fraction
    rows: list[dict[str, Any]]
    candidates: dict[str, float]
    converged: float
    shrinking: bool
    matches: list[str]
    tolerance: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": str(self.p),
            "c": str(self.c),
            "rows": self.rows,
            "candidates": self.candidates,
            "converged": self.converged,
            "shrinking": self.shrinking,
            "matches": self.matches,
            "tolerance": self.tolerance,
        }


def erf_limit_report(
    p: Real, c: Real, n_list: Iterable[int] = ERF_LIMIT_N_LIST, tolerance: float = 0.01
) -> ErfLimitReport:
    """Windowed sums along ``n_list`` compared with both candidate limits."""
    p, c = Fraction(p), Fraction(c)
    rows: list[dict[str, Any]] = []
    prev: Optional[float] = None
    for n in n_list:
        _checked_window(n, p, c)
        s = sum_theta_window(n, p, c)
        rows.append({"n": n, "sum": s, "step": None if prev is None else s - prev})
        prev = s
    steps = [abs(r["step"]) for r in rows[1:]]
    shrinking = all(a > b for a, b in zip(steps, steps[1:]))
    cands = erf_candidates(p, c)
    last = rows[-1]["sum"] if rows else float("nan")
    matches = [name for name, v in cands.items() if abs(v - last) <= tolerance]
    return ErfLimitReport(p, c, rows, cands, last, shrinking, matches, tolerance)


@dataclass
class CBoundReport:
    n: int
    k: int
    delta: Fraction
    c: Fraction
    ratio: Fraction
    ok: bool
    window_in_range: bool
    summands: dict[str, list[int]] = field(default_factory=dict)
    first_failure: dict[str, Optional[int]] = field(default_factory=dict)
    center: Fraction = Fraction(0)
    aggregate_holds: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "delta": str(self.delta),
            "c": str(self.c),
            "ratio": str(self.ratio),
            "ratio_float": float(self.ratio),
            "ok": self.ok,
            "window_in_range": self.window_in_range,
            "summands": self.summands,
            "first_failure": self.first_failure,
            "center": str(self.center),
            "aggregate_holds": self.aggregate_holds,
        }


def verify_C_lower_bound(n: int, k: int, delta: Real, c: Real = 1) -> CBoundReport:
    """Check ``|C(n,k)| > (1 - delta) binom(n-1, k-1)`` exactly, for ``1/2 < k/n < 2/3``.

    Also evaluates, for every ``j`` in the window, the per-summand
    inequalities used to compare ``|C(n,k)|`` with ``p binom(n, k)`` and
    records how many hold.  Those counts are informational; ``ok`` only
    reflects the ratio.
    """
    p = Fraction(k, n)
    if not Fraction(1, 2) < p < Fraction(2, 3):
        raise ValueError(f"needs 1/2 < k/n < 2/3, got k/n = {p}")
    delta, c = Fraction(delta), Fraction(c)
    q = 1 - p
    ratio = Fraction(card_C(n, k), binom(n - 1, k - 1))
    w = theta_window(n, p, c)
    js = list(w.members)
    in_range = bool(js) and all(2 * j >= k and j <= k - 1 for j in js)

    checks: dict[str, list[int]] = {}
    first: dict[str, Optional[int]] = {}

    def tally(name: str, j: int, ok: bool) -> None:
        held, total = checks.setdefault(name, [0, 0])
        checks[name] = [held + ok, total + 1]
        if not ok and first.get(name) is None:
            first[name] = j
        first.setdefault(name, None)

    lhs_sum = rhs_sum = 0
    for j in js:
        jn = Fraction(j, n)
        base = binom(k, j) * binom(n - k, k - j)
        if k % 2 == 0:
            tally("(p-j/n)/p > q", j, (p - jn) / p > q)
            den = 1 - 2 * p + jn + Fraction(1, n)
            tally("(p-j/n)/(1-2p+j/n+1/n) > p/q", j, (p - jn) / den > p / q)
            summand = binom(k - 1, j) * binom(n - k, k - j - 1)
        else:
            tally("(k-j)/(n-k) > p", j, Fraction(k - j, n - k) > p)
            summand = binom(k, j) * binom(n - k - 1, k - j - 1)
        tally("summand > p * binom(k,j) binom(n-k,k-j)", j, summand > p * base)
        lhs_sum += summand
        rhs_sum += base
    return CBoundReport(
        n, k, delta, c, ratio, ratio > 1 - delta, in_range, checks, first,
        w.center, lhs_sum > p * rhs_sum,
    )
