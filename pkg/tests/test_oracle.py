import itertools
import json
from fractions import Fraction

import pytest

from hexwalks.model import HexagonSpec, LinePoint, from_walk, lgv_partition, line_geometry, macmahon, validate
from hexwalks.oracle import (BudgetExceeded, EnumerationBudget, OccupationTable, all_points,
                             enumerate_configurations, exact_correlation, kernel_report, report_json)


@pytest.mark.parametrize("abc, want", [((1, 1, 1), 2), ((2, 1, 1), 3), ((2, 2, 2), 20)])
def test_enumeration_counts(abc, want):
    assert enumerate_configurations(HexagonSpec(*abc)) == want


def test_visited_configurations_are_valid_and_distinct():
    s = HexagonSpec(2, 2, 3)
    seen = []
    enumerate_configurations(s, visitor=seen.append)
    assert all(validate(s, cfg) for cfg in seen)
    assert len({cfg.lines for cfg in seen}) == len(seen) == macmahon(2, 2, 3)


def test_enumeration_matches_closed_forms():
    for a, b, c in itertools.product(range(1, 4), repeat=3):
        if c >= b:
            s = HexagonSpec(a, b, c)
            assert enumerate_configurations(s) == macmahon(a, b, c) == lgv_partition(s)


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_configurations(HexagonSpec(3, 3, 3), EnumerationBudget(100))
    with pytest.raises(ValueError):
        EnumerationBudget(0)


def test_exact_correlation_examples():
    s = HexagonSpec(1, 1, 1)
    assert exact_correlation(s, [LinePoint(1, from_walk(s, 1, -1))]) == Fraction(1, 2)
    assert exact_correlation(s, []) == 1
    s2 = HexagonSpec(1, 1, 2)
    pts = [LinePoint(1, from_walk(s2, 1, 1)), LinePoint(2, from_walk(s2, 2, 0))]
    assert exact_correlation(s2, pts) == Fraction(1, 3)


def test_repeated_points_rejected():
    s = HexagonSpec(1, 1, 1)
    with pytest.raises(ValueError):
        exact_correlation(s, [LinePoint(1, 0), LinePoint(1, 0)])


def test_full_line_configurations_sum_to_one():
    s = HexagonSpec(2, 2, 3)
    table = OccupationTable(s)
    for r in s.interior_lines():
        g = line_geometry(s, r)
        total = sum(table.correlation([LinePoint(r, x) for x in xs])
                    for xs in itertools.combinations(range(g.gamma_r + 1), s.a))
        assert total == 1


def test_all_points():
    s = HexagonSpec(2, 2, 2)
    assert len(all_points(s)) == sum(line_geometry(s, r).gamma_r + 1 for r in s.interior_lines())


def test_kernel_report_examples():
    rep = kernel_report(HexagonSpec(1, 1, 1), 1)
    assert rep["max_abs_error_hahn"] < 1e-12 and rep["generic_exact"]
    rep = kernel_report(HexagonSpec(2, 2, 2), 2)
    assert rep["max_abs_error_hahn"] < 1e-10
    assert rep["max_abs_error_generic"] == 0
    assert json.loads(report_json(rep))["spec"] == [2, 2, 2]


def test_kernel_report_samples_large_subset_families():
    s = HexagonSpec(2, 2, 3)
    rep = kernel_report(s, 3, max_subsets=50, seed=4)
    assert rep["subsets_checked"] == 50
    assert rep == kernel_report(s, 3, max_subsets=50, seed=4)
