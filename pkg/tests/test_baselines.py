import pytest

from quanttm.baselines import (
    DEFAULT_DREAD_THRESHOLDS,
    DEFAULT_MATRIX_POLICY,
    DreadGrade,
    DreadThresholds,
    MatrixRating,
    OrdinalLevel,
    ScoreRange,
    check_policy,
    dread_score,
    matrix_priority,
)
from quanttm.errors import InvalidPolicy, RangeOutOfBounds

L, M, H = OrdinalLevel.LOW, OrdinalLevel.MEDIUM, OrdinalLevel.HIGH


# ---------------------------------------------------------------------------
# Risk matrix
# ---------------------------------------------------------------------------

def test_matrix_corner_cells():
    assert matrix_priority(L, L) is L
    assert matrix_priority(H, H) is H


def test_matrix_medium_high_is_high_under_default_policy():
    assert matrix_priority(M, H) is H
    assert matrix_priority(H, M) is H


def test_matrix_default_policy_full_table():
    expected = {
        (L, L): L, (L, M): M, (L, H): M,
        (M, L): M, (M, M): M, (M, H): H,
        (H, L): M, (H, M): H, (H, H): H,
    }
    for (l, s), want in expected.items():
        assert matrix_priority(l, s) is want


def test_matrix_default_policy_symmetric_and_monotone():
    levels = (L, M, H)
    for a in levels:
        for b in levels:
            assert matrix_priority(a, b) is matrix_priority(b, a)
    for l1 in levels:
        for s1 in levels:
            for l2 in levels:
                for s2 in levels:
                    if l2 >= l1 and s2 >= s1:
                        assert matrix_priority(l2, s2) >= matrix_priority(l1, s1)


def test_non_monotone_policy_rejected():
    policy = dict(DEFAULT_MATRIX_POLICY)
    policy[(H, H)] = L
    with pytest.raises(InvalidPolicy):
        check_policy(policy)
    with pytest.raises(InvalidPolicy):
        matrix_priority(L, L, policy)


def test_incomplete_policy_rejected():
    policy = dict(DEFAULT_MATRIX_POLICY)
    del policy[(L, M)]
    with pytest.raises(InvalidPolicy):
        check_policy(policy)


def test_matrix_rating_carries_policy_priority():
    rating = MatrixRating.rate("ddos", "medium", "high")
    assert rating.priority is H


# ---------------------------------------------------------------------------
# DREAD
# ---------------------------------------------------------------------------

def test_dread_ddos_row():
    a = dread_score("ddos", 10, 10, 10, 10, 8)
    assert a.sum_range == (48.0, 48.0)
    assert a.grade_range == (DreadGrade.CRITICAL, DreadGrade.CRITICAL)
    assert a.sum_label() == "48"
    assert a.grade_label() == "C"


def test_dread_csrf_row_with_ranges():
    a = dread_score("csrf", 8, (0, 10), 5, 6, (0, 5))
    assert a.sum_range == (19.0, 34.0)
    assert a.grade_range == (DreadGrade.MEDIUM, DreadGrade.HIGH)
    assert a.sum_label() == "19-34"
    assert a.grade_label() == "M-H"


TABLE_ROWS = [
    ("ddos", (10, 10, 10, 10, 8), (48, 48), "C"),
    ("csrf", (8, (0, 10), 5, 6, (0, 5)), (19, 34), "M-H"),
    ("xss", (8, (0, 7.5), 5, 6, (0, 5)), (19, 31.5), "M-H"),
    ("xxe", (5, 5, 5, (0, 10), 5), (20, 30), "M-H"),
    ("deserialization", (5, 5, 5, (0, 10), (0, 10)), (15, 35), "M-H"),
    ("ransomware", (10, 5, 2.5, 10, (0, 10)), (27.5, 37.5), "M-H"),
]


@pytest.mark.parametrize("tid,scores,expected_sum,expected_grade", TABLE_ROWS)
def test_dread_reproduces_all_expert_rows(tid, scores, expected_sum, expected_grade):
    a = dread_score(tid, *scores)
    assert a.sum_range == (float(expected_sum[0]), float(expected_sum[1]))
    assert a.grade_label() == expected_grade


def test_dread_all_zero_is_low():
    a = dread_score("t", 0, 0, 0, 0, 0)
    assert a.sum_range == (0.0, 0.0)
    assert a.grade_range == (DreadGrade.LOW, DreadGrade.LOW)


def test_dread_rejects_out_of_bounds_scores():
    with pytest.raises(RangeOutOfBounds):
        dread_score("t", 11, 0, 0, 0, 0)
    with pytest.raises(RangeOutOfBounds):
        dread_score("t", -1, 0, 0, 0, 0)
    with pytest.raises(RangeOutOfBounds):
        dread_score("t", (7, 3), 0, 0, 0, 0)  # lo > hi
    with pytest.raises(RangeOutOfBounds):
        ScoreRange.of((1, 2, 3))


def test_dread_grade_monotone_in_sum():
    grades = [DEFAULT_DREAD_THRESHOLDS.grade(s / 2) for s in range(0, 101)]
    ranks = [g.rank for g in grades]
    assert ranks == sorted(ranks)


def test_default_threshold_band_edges():
    t = DEFAULT_DREAD_THRESHOLDS
    assert t.grade(12) is DreadGrade.LOW
    assert t.grade(12.5) is DreadGrade.MEDIUM
    assert t.grade(28) is DreadGrade.MEDIUM
    assert t.grade(29) is DreadGrade.HIGH
    assert t.grade(42) is DreadGrade.HIGH
    assert t.grade(43) is DreadGrade.CRITICAL
    assert t.grade(50) is DreadGrade.CRITICAL


def test_custom_thresholds():
    t = DreadThresholds(low_max=10, medium_max=20, high_max=30)
    assert t.grade(25) is DreadGrade.HIGH
    assert dread_score("t", 7, 7, 7, 7, 7, thresholds=t).grade_range \
        == (DreadGrade.CRITICAL, DreadGrade.CRITICAL)


def test_thresholds_must_be_ordered():
    with pytest.raises(InvalidPolicy):
        DreadThresholds(low_max=30, medium_max=20, high_max=40)
    with pytest.raises(InvalidPolicy):
        DreadThresholds(low_max=10, medium_max=20, high_max=55)


def test_score_range_bounds_invariant():
    r = ScoreRange.of((2.5, 7.5))
    assert r.lo <= r.hi
    assert str(r) == "2.5-7.5"
    assert str(ScoreRange.of(4)) == "4"
