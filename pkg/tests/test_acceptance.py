"""Acceptance gate: one test per closed-form criterion.

Each test runs the corresponding verification routine at its pinned
tolerances and asserts the packaged pass/fail verdict, so `pytest -v`
prints one line per criterion. The routines freeze their own expected
values; nothing here recomputes them.
"""

import pytest

from moyaldist import verification


def check(result):
    assert result.passed, f"{result.name}: {result.details}"
    return result


def test_registry_is_complete():
    numbers = [num for num, _ in verification.CRITERIA]
    assert numbers == [str(n) for n in range(1, 12)]


def test_criterion_01_moyal_distance():
    check(verification.criterion_moyal_distance())


def test_criterion_02_twopoint_distance():
    check(verification.criterion_twopoint_distance())


def test_criterion_03_doubled_spectrum():
    check(verification.criterion_doubled_spectrum())


def test_criterion_04_eigenspinors():
    check(verification.criterion_eigenspinors())


def test_criterion_05_longitudinal_matrix():
    check(verification.criterion_longitudinal_matrix())


def test_criterion_06_longitudinal_distance():
    check(verification.criterion_longitudinal_distance())


def test_criterion_07_transverse_distance():
    check(verification.criterion_transverse_distance())


def test_criterion_08_hypotenuse():
    check(verification.criterion_hypotenuse())


def test_criterion_09_oracle():
    result = check(verification.criterion_oracle())
    assert "%" in result.details


def test_criterion_10_higgs():
    check(verification.criterion_higgs())


def test_criterion_11_translation():
    check(verification.criterion_translation())


def test_negative_control_detects_corruption():
    result = verification.negative_control()
    assert result.passed, result.details
