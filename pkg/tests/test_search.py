import itertools
from math import comb

import pytest

from ekr3.search import (
    DEFAULT_GRID,
    EXACT,
    INCOMPLETE,
    SearchBudget,
    max_family,
    shifted_lower_bound,
    verify_claims,
)
from ekr3.setcore import (
    IntersectionSpec,
    all_k_subsets,
    common_intersection,
    is_r_wise_t_intersecting,
    is_shifted,
)

THREE_WISE = IntersectionSpec(3, 1)


def brute_max(n, k, r, t, nontrivial):
    """Plain extension search: every valid family is reached, no bounds."""
    pool = list(all_k_subsets(n, k).members)
    best = 0

    def ok(chosen, v):
        for combo in itertools.combinations_with_replacement(chosen + [v], r - 1):
            acc = v
            for m in combo:
                acc &= m
            if acc.bit_count() < t:
                return False
        return True

    def rec(start, chosen):
        nonlocal best
        if chosen:
            common = chosen[0]
            for m in chosen[1:]:
                common &= m
            if not nontrivial or common.bit_count() < t:
                best = max(best, len(chosen))
        for i in range(start, len(pool)):
            if ok(chosen, pool[i]):
                rec(i + 1, chosen + [pool[i]])

    rec(0, [])
    return best


ORACLE_CASES = [
    (n, k, r, t, nt)
    for n, k in [(4, 2), (5, 2), (5, 3), (6, 2), (6, 4)]
    for r, t in [(2, 1), (3, 1), (2, 2)]
    for nt in (False, True)
    if k >= t
]


@pytest.mark.parametrize("n, k, r, t, nt", ORACLE_CASES)
def test_matches_brute_force(n, k, r, t, nt):
    res = max_family(n, k, IntersectionSpec(r, t), nontrivial=nt)
    assert res.status == EXACT
    assert res.value == brute_max(n, k, r, t, nt)


@pytest.mark.parametrize(
    "n, k, value",
    [(5, 3, 4), (7, 4, 13), (8, 4, 17)],
)
def test_three_wise_nontrivial_values(n, k, value):
    res = max_family(n, k, THREE_WISE, nontrivial=True)
    assert res.status == EXACT
    assert res.value == value


def test_two_two_value_8_4():
    res = max_family(8, 4, IntersectionSpec(2, 2), nontrivial=True)
    assert (res.status, res.value) == (EXACT, 17)


def test_new_value_6_4():
    res = max_family(6, 4, THREE_WISE, nontrivial=True)
    assert (res.status, res.value) == (EXACT, 9)


@pytest.mark.parametrize("n, k, r, t, nt", [(7, 4, 3, 1, True), (6, 3, 2, 2, True), (6, 3, 3, 1, False)])
def test_witnesses_are_valid(n, k, r, t, nt):
    spec = IntersectionSpec(r, t)
    res = max_family(n, k, spec, nontrivial=nt, witnesses=3)
    assert res.witnesses
    for w in res.witnesses:
        assert len(w) == res.value
        assert is_r_wise_t_intersecting(w, spec)
        if nt:
            assert common_intersection(w).bit_count() < t
    texts = [w.to_text() for w in res.witnesses]
    assert len(set(texts)) == len(texts)


def test_deterministic():
    a = max_family(7, 4, THREE_WISE, witnesses=2).to_dict()
    b = max_family(7, 4, THREE_WISE, witnesses=2).to_dict()
    assert a == b


@pytest.mark.parametrize("n, k", [(6, 3), (7, 3), (6, 4), (8, 3)])
def test_stars_are_optimal_without_nontriviality(n, k):
    # 2n >= 3k: the full star is the largest 3-wise intersecting family
    res = max_family(n, k, THREE_WISE, nontrivial=False)
    assert res.value == comb(n - 1, k - 1)


@pytest.mark.parametrize("n, k", [(5, 3), (6, 3), (6, 4), (7, 4)])
def test_monotone_in_r_and_nontriviality(n, k):
    for t in (1, 2):
        two = max_family(n, k, IntersectionSpec(2, t), nontrivial=False).value
        three = max_family(n, k, IntersectionSpec(3, t), nontrivial=False).value
        three_nt = max_family(n, k, IntersectionSpec(3, t), nontrivial=True).value
        assert two >= three >= three_nt


def test_budget_candidates():
    res = max_family(9, 4, THREE_WISE, budget=SearchBudget(max_candidates=70))
    assert res.status == INCOMPLETE and res.value == 0


def test_budget_nodes_gives_lower_bound():
    res = max_family(8, 4, THREE_WISE, budget=SearchBudget(node_limit=5))
    assert res.status == INCOMPLETE
    assert res.value <= 17
    for w in res.witnesses:
        assert is_r_wise_t_intersecting(w, THREE_WISE)


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(time_limit=0)


def test_unsupported_arguments():
    with pytest.raises(ValueError):
        max_family(4, 4, THREE_WISE)


@pytest.mark.parametrize(
    "n, k, nt, value",
    [(7, 4, False, 20), (7, 4, True, 13), (6, 3, False, 10), (6, 3, True, 4), (5, 2, False, 4)],
)
def test_shifted_lower_bound(n, k, nt, value):
    res = shifted_lower_bound(n, k, THREE_WISE, nontrivial=nt)
    assert res.value == value
    for w in res.witnesses:
        assert is_shifted(w)
        assert is_r_wise_t_intersecting(w, THREE_WISE)


@pytest.mark.parametrize("n, k", [(5, 3), (6, 3), (6, 4), (7, 4)])
def test_shifted_never_beats_exact(n, k):
    for nt in (False, True):
        s = shifted_lower_bound(n, k, THREE_WISE, nontrivial=nt).value
        assert s <= max_family(n, k, THREE_WISE, nontrivial=nt).value


def test_verify_claims_default_grid():
    rows = verify_claims(DEFAULT_GRID)
    assert len(rows) == len(DEFAULT_GRID)
    for row in rows:
        assert row["status"] == EXACT
        assert row["agree"] is not False
    six_four = next(r for r in rows if (r["n"], r["k"]) == (6, 4))
    assert six_four["agree"] is None and six_four["search_value"] == 9
