import random

import pytest

import config
from checks import SUITES, fuzz, random_bindings, run_suite, substitution_oracle


@pytest.mark.parametrize("fixture", ["ex_l", "ex_0", "ex_r", "ex_4"])
@pytest.mark.parametrize("suite", SUITES)
def test_every_suite_passes(request, fixture, suite):
    analysis = request.getfixturevalue(fixture)
    report = run_suite(suite, analysis)
    assert report.checks
    assert report.ok, report.failures


def test_compact_suite_without_a_compact_class(ex_4):
    report = run_suite("compact", ex_4)
    assert [check.name for check in report.checks] == ["no-compact-class"]


def test_compact_suite_on_ex_l(ex_l):
    names = [check.name for check in run_suite("compact", ex_l).checks]
    assert names == ["U0hat-first", "U0hat-second", "F7-first", "F7-second"]


def test_theorems_suite_checks_the_f7_projection(ex_l):
    assert run_suite("theorems", ex_l).get("f7-projection-is-F").passed


def test_all_on_abelian_group(ex_0):
    report = run_suite("all", ex_0)
    assert report.ok, report.failures
    assert report.get("fuzz/fuzz").detail == "instance has no parameters"


def test_unknown_suite(ex_l):
    with pytest.raises(ValueError):
        run_suite("bogus", ex_l)


def test_random_bindings_are_nonzero_and_seeded():
    params = ("l1", "m1", "m2")
    first = random_bindings(params, random.Random(7))
    assert set(first) == set(params)
    assert all(value != 0 for value in first.values())
    assert random_bindings(params, random.Random(7)) == first


def test_substitution_oracle(ex_l, ex_r_bindings):
    report = substitution_oracle(ex_l, ex_r_bindings)
    assert [check.name for check in report.checks] == ["nabla", "F", "N", "Nhat", "D1", "D2", "T1", "T2"]
    assert report.ok, report.failures


def test_fuzz_is_reproducible(ex_4):
    first = fuzz(ex_4, rounds=2, seed=11)
    second = fuzz(ex_4, rounds=2, seed=11)
    assert first.ok, first.failures
    assert [check.detail for check in first.checks] == [check.detail for check in second.checks]


def test_fuzz_rounds_have_a_floor(monkeypatch):
    monkeypatch.setenv("PI_CONN_FUZZ_ROUNDS", "3")
    assert config.fuzz_rounds() == config.MIN_FUZZ_ROUNDS
    monkeypatch.setenv("PI_CONN_FUZZ_ROUNDS", "50")
    assert config.fuzz_rounds() == 50
    monkeypatch.setenv("PI_CONN_SEED", "5")
    assert config.fuzz_seed() == 5


def test_fuzz_round_on_ex_l(ex_l):
    report = fuzz(ex_l, rounds=1, seed=config.DEFAULT_SEED)
    assert report.ok, report.failures
