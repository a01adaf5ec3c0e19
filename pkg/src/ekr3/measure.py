"""Exact p-measure of families and the limiting W_3(n, p) profile."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .setcore import Family

Rational = Union[Fraction, int, str]

THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)
TWO_THIRDS = Fraction(2, 3)


def as_probability(p: Rational) -> Fraction:
    """Parse ``p`` (``Fraction``, int, ``"a/b"`` or decimal string) and require ``0 < p < 1``."""
    q = Fraction(p)
    if not 0 < q < 1:
        raise ValueError(f"p must lie in (0, 1), got {q}")
    return q


@dataclass(frozen=True)
class StabilityConstants:
    """Gap constants of the stability theorem for shifted families at 2/5 <= p <= 1/2.

    A shifted non-trivial 3-wise intersecting family not contained in
    ``{F : |F ∩ [4]| >= 3}`` has measure below ``f(p) - gap_absolute``, which
    is itself at most ``(1 - gap_relative) f(p)``.
    """

    gap_absolute: Fraction = Fraction("0.0018")
    gap_relative: Fraction = Fraction("0.00576")
    p_low: Fraction = Fraction(2, 5)
    p_high: Fraction = HALF

    def bound_chain_holds(self, p: Rational) -> bool:
        """``f(p) - gap_absolute <= (1 - gap_relative) f(p)``."""
        f = f_measure(p)
        return f - self.gap_absolute <= (1 - self.gap_relative) * f


STABILITY = StabilityConstants()


def mu_p(F: Family, p: Rational) -> Fraction:
    p = as_probability(p)
    q = 1 - p
    sizes = Counter(m.bit_count() for m in F.members)
    return sum((c * p**s * q ** (F.n - s) for s, c in sizes.items()), Fraction(0))


def f_measure(p: Rational) -> Fraction:
    """``4 p^3 q + p^4``, the measure of ``{F : |F ∩ [4]| >= 3}``."""
    p = Fraction(p)
    return 4 * p**3 * (1 - p) + p**4


_BRANCHES = (
    ("p^2", lambda p: p * p),
    ("4p^3q+p^4", f_measure),
    ("p", lambda p: p),
    ("1", lambda p: Fraction(1)),
)


def w3_branch(p: Rational) -> str:
    p = as_probability(p)
    if p <= THIRD:
        return "p^2"
    if p <= HALF:
        return "4p^3q+p^4"
    if p <= TWO_THIRDS:
        return "p"
    return "1"


def w3_limit(p: Rational) -> Fraction:
    """Limit of the maximum p-measure of non-trivial 3-wise intersecting families."""
    name = w3_branch(p)
    return dict(_BRANCHES)[name](as_probability(p))


def branch_values(p: Rational) -> dict[str, Fraction]:
    p = Fraction(p)
    return {name: fn(p) for name, fn in _BRANCHES}


def w3_boundaries() -> list[dict[str, object]]:
    """Left and right branch values at each breakpoint."""
    names = [b[0] for b in _BRANCHES]
    out = []
    for idx, point in enumerate((THIRD, HALF, TWO_THIRDS)):
        vals = branch_values(point)
        left, right = vals[names[idx]], vals[names[idx + 1]]
        out.append(
            {
                "p": point,
                "left": (names[idx], left),
                "right": (names[idx + 1], right),
                "continuous": left == right,
            }
        )
    return out
