import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ekr3.constructions import gen_B, gen_Bi
from ekr3.setcore import (
    Family,
    FamilyError,
    IntersectionSpec,
    all_k_subsets,
    common_intersection,
    is_nontrivial,
    is_r_wise_t_intersecting,
    is_shifted,
    make_family,
    mask,
    positions,
    shift_fixpoint,
    shift_once,
    upper_shadow,
)


def naive_r_wise(F, r, t):
    return all(
        len(set.intersection(*map(set, combo))) >= t
        for combo in itertools.combinations_with_replacement(F.sets(), r)
    )


def naive_shadow(F, i):
    subsets = itertools.combinations(range(1, F.n + 1), i)
    return sorted(
        mask(h) for h in subsets if any(m & ~mask(h) == 0 for m in F.members)
    )


@st.composite
def uniform_families(draw, max_n=6):
    n = draw(st.integers(3, max_n))
    k = draw(st.integers(1, n - 1))
    pool = all_k_subsets(n, k).members
    chosen = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=12))
    return Family.from_masks(n, k, chosen)


# -- construction and text format ------------------------------------------------


def test_make_family_all_triples_of_four():
    F = make_family(4, 3, [{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}])
    assert len(F) == 4


def test_make_family_dedups():
    assert len(make_family(5, 2, [{1, 2}, {1, 2}])) == 1


@pytest.mark.parametrize(
    "n, k, members",
    [
        pytest.param(3, 2, [{1, 4}], id="out-of-range"),
        pytest.param(4, 2, [{1, 2, 3}], id="wrong-size"),
        pytest.param(65, 2, [{1, 2}], id="ground-overflow"),
        pytest.param(4, 2, [{0, 1}], id="position-zero"),
    ],
)
def test_make_family_rejects(n, k, members):
    with pytest.raises(FamilyError):
        make_family(n, k, members)


def test_canonical_order_is_numeric():
    F = make_family(4, 2, [{3, 4}, {1, 2}, {1, 3}])
    assert F.members == (0b0011, 0b0101, 0b1100)
    assert F.sets() == [[1, 2], [1, 3], [3, 4]]


def test_positions_roundtrip():
    assert positions(mask([1, 5, 64])) == [1, 5, 64]


@given(uniform_families())
def test_text_roundtrip(F):
    assert Family.from_text(F.to_text()) == F


def test_text_format_layout():
    F = make_family(4, 2, [{1, 2}, {2, 4}])
    assert F.to_text() == "4 2 2\n1 2\n2 4\n"


def test_text_nonuniform_with_empty_member():
    F = Family.from_masks(3, 0, [0, 0b101])
    assert Family.from_text(F.to_text()) == F


def test_text_rejects_short_body():
    with pytest.raises(FamilyError):
        Family.from_text("4 2 3\n1 2\n")


# -- intersection predicates ------------------------------------------------------


def test_triangle_not_three_wise():
    F = make_family(3, 2, [{1, 2}, {1, 3}, {2, 3}])
    assert not is_r_wise_t_intersecting(F, IntersectionSpec(3, 1))
    assert is_r_wise_t_intersecting(F, IntersectionSpec(2, 1))


def test_gen_B_three_wise():
    assert is_r_wise_t_intersecting(gen_B(7, 4), IntersectionSpec(3, 1))


def test_gen_B2_not_three_wise():
    assert not is_r_wise_t_intersecting(gen_Bi(10, 5, 2), IntersectionSpec(3, 1))


def test_empty_family_rejected():
    empty = Family(4, 2, ())
    with pytest.raises(FamilyError):
        is_r_wise_t_intersecting(empty, IntersectionSpec(2, 1))
    with pytest.raises(FamilyError):
        common_intersection(empty)


def test_intersection_spec_validation():
    with pytest.raises(ValueError):
        IntersectionSpec(1, 1)
    with pytest.raises(ValueError):
        IntersectionSpec(2, 0)


@settings(max_examples=200)
@given(uniform_families(), st.sampled_from([2, 3, 4]), st.sampled_from([1, 2]))
def test_r_wise_matches_naive_oracle(F, r, t):
    assert is_r_wise_t_intersecting(F, IntersectionSpec(r, t)) == naive_r_wise(F, r, t)


@given(uniform_families(), st.sampled_from([1, 2]))
def test_three_wise_implies_two_wise(F, t):
    if is_r_wise_t_intersecting(F, IntersectionSpec(3, t)):
        assert is_r_wise_t_intersecting(F, IntersectionSpec(2, t))


def test_common_intersection_examples():
    assert common_intersection(make_family(4, 3, [{1, 2, 3}, {1, 2, 4}])) == mask([1, 2])
    assert common_intersection(make_family(4, 2, [{1, 2}])) == mask([1, 2])


@given(uniform_families())
def test_common_intersection_inside_members(F):
    c = common_intersection(F)
    assert all(c & ~m == 0 for m in F.members)


def test_is_nontrivial_examples():
    F = make_family(4, 3, [{1, 2, 3}, {1, 2, 4}])
    assert not is_nontrivial(F, 1)
    assert is_nontrivial(F, 3)
    assert is_nontrivial(gen_B(7, 4), 1)


# -- shifting ---------------------------------------------------------------------


def test_shift_once_moves():
    F = make_family(3, 2, [{2, 3}])
    assert shift_once(F, 1, 2).sets() == [[1, 3]]


def test_shift_once_keeps_when_target_present():
    F = make_family(3, 2, [{1, 3}, {2, 3}])
    assert shift_once(F, 1, 2) == F


def test_shift_once_rejects_bad_pair():
    F = make_family(3, 2, [{2, 3}])
    with pytest.raises(FamilyError):
        shift_once(F, 2, 2)
    with pytest.raises(FamilyError):
        shift_once(F, 1, 4)


def test_gen_B_invariant_under_every_shift():
    B = gen_B(8, 4)
    for i in range(1, 9):
        for j in range(i + 1, 9):
            assert shift_once(B, i, j) == B


def test_shift_fixpoint_examples():
    assert shift_fixpoint(make_family(4, 2, [{2, 3}])).sets() == [[1, 2]]
    assert shift_fixpoint(gen_B(8, 4)) == gen_B(8, 4)
    triples = all_k_subsets(4, 3)
    assert shift_fixpoint(triples) == triples


@settings(max_examples=150)
@given(uniform_families())
def test_shift_fixpoint_properties(F):
    S = shift_fixpoint(F)
    assert len(S) == len(F)
    assert is_shifted(S)
    for r in (2, 3):
        for t in (1, 2):
            spec = IntersectionSpec(r, t)
            if is_r_wise_t_intersecting(F, spec):
                assert is_r_wise_t_intersecting(S, spec)


@given(uniform_families(), st.data())
def test_productive_shift_lowers_element_sum(F, data):
    i = data.draw(st.integers(1, F.n - 1))
    j = data.draw(st.integers(i + 1, F.n))
    weight = lambda fam: sum(sum(positions(m)) for m in fam.members)  # noqa: E731
    G = shift_once(F, i, j)
    assert len(G) == len(F)
    if G != F:
        assert weight(G) < weight(F)
    else:
        assert weight(G) == weight(F)


# -- upper shadow -------------------------------------------------------------------


def test_upper_shadow_examples():
    F = make_family(4, 2, [{1, 2}])
    assert upper_shadow(F, 3).sets() == [[1, 2, 3], [1, 2, 4]]
    assert upper_shadow(F, 2) == F
    assert upper_shadow(F, 4).sets() == [[1, 2, 3, 4]]


def test_upper_shadow_range():
    F = make_family(4, 2, [{1, 2}])
    with pytest.raises(FamilyError):
        upper_shadow(F, 1)
    with pytest.raises(FamilyError):
        upper_shadow(F, 5)


@given(uniform_families(), st.data())
def test_upper_shadow_matches_oracle_and_composes(F, data):
    i = data.draw(st.integers(F.k, F.n))
    j = data.draw(st.integers(i, F.n))
    Si = upper_shadow(F, i)
    assert list(Si.members) == naive_shadow(F, i)
    assert upper_shadow(Si, j) == upper_shadow(F, j)
