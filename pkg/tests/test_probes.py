import json
import math
from fractions import Fraction

import pytest

from src.errors import PreconditionError
from src.linalg import DenseMatrix
from src.probes import (PairOutcome, Verdict, check_monotone_pair, decomposition_probe,
                        distance_decomposition, dn_scan, minimax_gap_probe, monotone_map_property,
                        pn_norm_scan, positive_image_check, scan_report, strong_convergence_probe,
                        triangular_minor_probe, verify_rank_claim)


def test_rank_claim_holds_up_to_eight():
    report = verify_rank_claim(8)
    assert report.verdict is Verdict.HOLDS
    assert [row["rank"] for row in report.evidence["ranks"]] == list(range(1, 8))
    json.dumps(report.to_dict())


@pytest.mark.parametrize("n", range(2, 8))
def test_triangular_minor_certifies_the_rank(n):
    assert triangular_minor_probe(n).verdict is Verdict.HOLDS


def test_triangular_minor_for_n4():
    report = triangular_minor_probe(4)
    assert report.evidence["minor"] == [["2", "0", "0"], ["2", "3", "0"], ["4", "3", "4"]]
    assert report.evidence["diagonal"] == [2, 3, 4]


def test_monotone_pair_on_the_worked_example(a35):
    assert check_monotone_pair(a35, [1, 1], [0, 1]) is PairOutcome.HOLDS
    assert a35.matvec([1, 1]) == (2, 2, 1, 1, 3)
    assert a35.matvec([0, 1]) == (1, 2, 0, 1, 2)


def test_monotone_pair_edge_cases(a35):
    assert check_monotone_pair(a35, [2, 3], [2, 3]) is PairOutcome.VACUOUS
    zero_column = DenseMatrix.from_rows([[1, 0], [2, 0], [3, 0]])
    assert check_monotone_pair(zero_column, [0, 1], [0, 0]) is PairOutcome.PRECONDITION
    assert check_monotone_pair(a35, [0, 0], [1, 0]) is PairOutcome.PRECONDITION


def test_monotone_map_property_holds_on_seeded_instances():
    report = monotone_map_property(trials=300, seed=2025)
    assert report.verdict is Verdict.HOLDS
    outcomes = report.evidence["outcomes"]
    assert outcomes["fails"] == 0
    assert outcomes["holds"] > 0


def test_monotone_map_property_is_reproducible():
    first = monotone_map_property(trials=50, seed=11).to_dict()
    assert monotone_map_property(trials=50, seed=11).to_dict() == first


def test_positive_image_period_two():
    report = positive_image_check(2, 4, [1])
    assert report.verdict is Verdict.HOLDS
    assert report.evidence["image"] == ["1", "0", "1", "0"]
    assert report.evidence["zero_rows"] == [2, 4]


def test_positive_image_rejects_nonpositive_vectors():
    with pytest.raises(PreconditionError):
        positive_image_check(3, 5, [1, 0])
    with pytest.raises(PreconditionError):
        positive_image_check(3, 5, [1])


def test_pn_norm_scan_small_n():
    rows = pn_norm_scan(range(2, 4)).evidence["norms"]
    assert [row["pn_inf_norm"] for row in rows] == [1, Fraction(10, 7)]
    assert all(row["two_norm_is_one"] for row in rows)
    assert not rows[1]["inf_norm_at_most_one"]


def test_strong_convergence_deviations_at_n3():
    ones = strong_convergence_probe(lambda i: 1, [3]).evidence["deviations"][0]
    first_unit = strong_convergence_probe(lambda i: int(i == 1), [3]).evidence["deviations"][0]
    assert ones["deviation"] == Fraction(4, 7)
    assert first_unit["deviation"] == Fraction(2, 3)


def test_decomposition_for_n2_has_no_minimax_error():
    report = distance_decomposition(2)
    assert report.eps_star == 0
    assert report.minimax_term.hi == 0.0
    assert report.total_bound.contains(1 - math.log(2), slack=1e-8)
    assert report.dominates


@pytest.mark.parametrize("n", [3, 4, 5])
def test_decomposition_bound_dominates_the_distance(n):
    report = decomposition_probe(n)
    assert report.verdict is Verdict.MEASURED
    assert report.evidence["dominates"]


def test_minimax_gap_at_n3():
    evidence = minimax_gap_probe(3, 5).evidence
    assert evidence["eps_star_c"] == Fraction(1, 2)
    assert evidence["eps_star_projected"] == 0
    assert evidence["lsq_sup_residual"] == Fraction(4, 7)


def test_dn_scan_is_ordered_and_thread_count_independent():
    serial = dn_scan(range(2, 6), workers=1)
    parallel = dn_scan(range(5, 1, -1), workers=4)
    assert [row.n for row in serial] == [2, 3, 4, 5]
    assert serial == parallel


def test_dn_scan_rows_are_consistent():
    rows = dn_scan(range(2, 6))
    assert rows[0].eps_star == 0
    assert rows[1].eps_star == Fraction(1, 2)
    assert rows[1].pn_inf_norm == Fraction(10, 7)
    report = scan_report(rows)
    assert report.verdict is Verdict.MEASURED
    json.dumps(report.to_dict())


def test_dn_scan_rejects_empty_ranges():
    with pytest.raises(PreconditionError):
        dn_scan(range(3, 3))
