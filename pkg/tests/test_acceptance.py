"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete. Tolerances are fixed here, not configurable.
"""

import math

import pytest

from gl2sums.chartable import IrrepLabel, build_table
from gl2sums.counting import residue_box_count
from gl2sums.gauss import gauss_trace_bruteforce
from gl2sums.gl2 import Mat2
from gl2sums.verify import (
    check_cell_split,
    check_count_identities,
    check_density,
    check_fourier_coeffs,
    check_kondo,
    check_pv_bound,
    check_shifted_generators,
    check_singular_gauss,
    check_spot_counts,
    check_table_certification,
)


def _report(num, title, detail):
    print(f"ACCEPT {num:02d} PASS {title}: {detail}")


def test_criterion_01_singular_gauss_table():
    details = []
    for p in (3, 5, 7, 11):
        details.append(check_singular_gauss(p, tol_scale=1e-6))
        # the Steinberg nilpotent values quoted at each prime
        table = build_table(p)
        nilp = Mat2(0, 1, 0, 0, p)
        st = IrrepLabel("steinberg", (0,))
        assert gauss_trace_bruteforce(table, st, nilp) == pytest.approx(
            {3: 18, 5: 100, 7: 294, 11: 1210}[p], abs=1e-6 * p * p
        )
    _report(1, "singular Gauss sums (closed = brute, exact values)", "; ".join(details))


def test_criterion_02_cell_split_values():
    details = [check_cell_split(p, tol=1e-6) for p in (3, 5, 7)]
    _report(2, "Bruhat-cell partial traces", "; ".join(details))


def test_criterion_03_identity_gauss_magnitude():
    details = [check_kondo(p, rel_tol=1e-6) for p in (3, 5, 7, 11)]
    _report(3, "identity Gauss-sum magnitudes p^((4-k)/2)", "; ".join(details))


def test_criterion_04_character_table_certification():
    details = [check_table_certification(p, tol=1e-8) for p in (3, 5, 7, 11, 13)]
    _report(4, "table orthogonality, induction, projector ranks", "; ".join(details))


def test_criterion_05_box_sum_bound():
    details = [check_pv_bound(p) for p in (11, 13)]
    _report(5, "box-sum ratios <= 16 and full-box vanishing", "; ".join(details))


def test_criterion_06_fourier_coefficients():
    details = [check_fourier_coeffs(p, tol=1e-9) for p in (3, 5, 7, 11, 13)]
    _report(6, "primitive-indicator coefficients vs oracle", "; ".join(details))


def test_criterion_07_exact_count_cross_checks():
    details = [
        check_count_identities(p, x_values=range(1, 16)) for p in (3, 5, 7, 11, 13)
    ]
    _report(7, "count fast path vs enumeration and exact identities", "; ".join(details))


def test_criterion_08_spot_counts():
    detail = check_spot_counts()
    assert residue_box_count(3, 1, "nonsingular") == 48
    assert residue_box_count(3, 1, "elliptic") == 18
    assert residue_box_count(3, 1, "primitive") == 12
    assert residue_box_count(3, 1, "disc_zero") == 27
    _report(8, "desk spot counts at p=3, x=1", detail)


def test_criterion_09_density_convergence():
    details = [
        check_density(p, elliptic_tol=0.02, primitive_tol=0.05) for p in (11, 13)
    ]
    _report(9, "density convergence at x = 20p", "; ".join(details))


def test_criterion_10_shifted_generator_suite():
    details = [check_shifted_generators(p, x=p) for p in (7, 11, 31)]
    for p in (7, 11, 31):
        bound = 2 * math.sqrt(p) * math.log(p)
        assert bound > 0
    _report(10, "shifted-generator scan and counts", "; ".join(details))
