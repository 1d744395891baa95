"""Tests for the verify module.
"""
from datetime import timedelta

import pytest

from freezegun import freeze_time  # type: ignore
from hypothesis import given  # type: ignore

from rootedcubes.cubecomplex import lemma_family
from rootedcubes.setfamily import (
    DomainError,
    Family,
    complement,
    is_simply_rooted,
    is_union_closed,
)
from rootedcubes.verify import (
    CHECK_NAMES,
    CHECKS,
    CheckReport,
    EnumSpec,
    Failure,
    Mode,
    Predicate,
    VerifyConfig,
    acyclic_case,
    check_decomposition,
    check_duality,
    check_euler_without_empty,
    check_intersections,
    check_lemma33,
    check_theorem1,
    decomposition_case,
    density_sweep,
    duality_case,
    enumerate_families,
    euler_one_case,
    euler_root_case,
    intersection_case,
    lemma_case,
    local_family_case,
    per_set_case,
    roots_phi_case,
    run_check,
    star_case,
    sweep,
)
from rootedcubes.tests.strategies import family_pairs, simply_rooted_families


@pytest.fixture
def quick_config():
    """Serial, untimed and small enough for the randomized checks."""
    return VerifyConfig(samples=12, seed=3, timing=False)


####################################################################################################
# FAMILY STREAMS
####################################################################################################


@pytest.mark.parametrize("n, expected", [(1, 2), (2, 7), (3, 61)])
def test_theorem_domain_counts(n, expected):
    """Simply rooted families containing the empty set."""
    spec = EnumSpec(n=n, require_empty_member=True, predicate=Predicate.SIMPLY_ROOTED)
    assert sum(1 for _ in enumerate_families(spec)) == expected


@pytest.mark.slow
def test_theorem_domain_count_four():
    spec = EnumSpec(n=4, require_empty_member=True, predicate=Predicate.SIMPLY_ROOTED)
    assert sum(1 for _ in enumerate_families(spec)) == 2480


@pytest.mark.parametrize("n, expected", [(1, 4), (2, 14), (3, 122)])
def test_union_closed_counts(n, expected):
    spec = EnumSpec(n=n, predicate=Predicate.UNION_CLOSED)
    assert sum(1 for _ in enumerate_families(spec)) == expected


def test_exhaustive_order_and_uniqueness():
    """Every family over [3] once, in increasing membership word order."""
    found = list(enumerate_families(EnumSpec(n=3)))
    assert len(found) == 256
    assert len(set(found)) == 256
    assert [f.word for f in found] == list(range(256))


def test_exhaustive_empty_member():
    found = list(enumerate_families(EnumSpec(n=2, require_empty_member=True)))
    assert len(found) == 8
    assert all(f.contains_empty for f in found)


@pytest.mark.parametrize(
    "spec",
    [
        EnumSpec(n=5),
        EnumSpec(n=0),
        EnumSpec(n=3, mode=Mode.RANDOM, sample_count=-1),
        EnumSpec(n=3, mode=Mode.RANDOM, sample_count=5, member_probability=1.5),
    ],
)
def test_enum_spec_rejects(spec):
    with pytest.raises(DomainError):
        enumerate_families(spec)


def test_random_is_seeded():
    """Same seed, same stream; exactly ``sample_count`` families."""
    spec = EnumSpec(n=5, mode=Mode.RANDOM, sample_count=20, seed=11)
    first, second = list(enumerate_families(spec)), list(enumerate_families(spec))
    assert first == second
    assert len(first) == 20

    other = EnumSpec(n=5, mode=Mode.RANDOM, sample_count=20, seed=12)
    assert list(enumerate_families(other)) != first


@pytest.mark.parametrize("probability, size", [(0.0, 0), (1.0, 8)])
def test_random_probability_extremes(probability, size):
    spec = EnumSpec(n=3, mode=Mode.RANDOM, sample_count=3, member_probability=probability)
    assert [len(f) for f in enumerate_families(spec)] == [size] * 3


def test_random_predicates_hold():
    rooted = EnumSpec(
        n=5,
        mode=Mode.RANDOM,
        sample_count=30,
        predicate=Predicate.SIMPLY_ROOTED,
        require_empty_member=True,
    )
    for family in enumerate_families(rooted):
        assert is_simply_rooted(family)
        assert family.contains_empty

    closed = EnumSpec(n=5, mode=Mode.RANDOM, sample_count=30, predicate=Predicate.UNION_CLOSED)
    assert all(is_union_closed(f) for f in enumerate_families(closed))


def test_density_sweep_split():
    """The first density takes the rounding remainder."""
    assert len(list(density_sweep(4, 10, seed=0))) == 10
    assert len(list(density_sweep(4, 0, seed=0))) == 0
    assert list(density_sweep(4, 7, seed=2)) == list(density_sweep(4, 7, seed=2))


####################################################################################################
# PER-FAMILY CHECKS
####################################################################################################


def test_cases_pass_on_examples(F2, F3):
    assert acyclic_case(F3) is None
    assert euler_one_case(F3) is None
    assert per_set_case(F3) is None
    assert roots_phi_case(F2) is None
    assert roots_phi_case(F3) is None
    assert local_family_case(F3) is None
    assert decomposition_case(F3) is None
    assert star_case(F3) is None
    assert euler_root_case(F2) is None


def test_cases_report_the_circle(F1):
    """The circle F1 breaks the hypotheses and the conclusions."""
    assert acyclic_case(F1).startswith("not acyclic: betti=[1, 1, 0, 0]")
    assert euler_one_case(F1) == "alternating cube count is 0, expected 1"


def test_lemma_case(F3):
    assert lemma_case(lemma_family(4, 2), 4, 2) is None
    assert "maximal cubes" in lemma_case(F3, 3, 1)


def test_intersection_and_duality_cases(F1, F3, power_set_3):
    assert intersection_case(F3, F1) is None
    assert intersection_case(power_set_3, F1) is None
    assert duality_case(F1) is None


####################################################################################################
# SWEEPS AND REPORTS
####################################################################################################


def test_sweep_sorts_failures(F1, F3, quick_config):
    """Failures are ordered canonically whatever the case order."""
    cases = [(F3,), (Family.empty(3),), (F1,)]
    report = sweep("theorem1", 3, cases, acyclic_case, quick_config)

    assert report.families_tested == 3
    assert [f.family for f in report.failures] == [Family.empty(3), F1]
    assert not report.passed


@freeze_time("2026-01-01")
def test_sweep_elapsed_frozen(F3):
    report = sweep("theorem1", 3, [(F3,)], acyclic_case, VerifyConfig())
    assert report.elapsed == timedelta(0)
    assert report.to_dict()["elapsed_ms"] == 0


def test_check_report_json(F1):
    report = CheckReport(
        check_name="theorem1",
        n=3,
        families_tested=61,
        failures=[Failure(family=F1, detail="boom")],
        elapsed=timedelta(milliseconds=1500),
    )
    data = report.to_dict()
    assert list(data) == ["check", "n", "tested", "failures", "elapsed_ms"]
    assert data["elapsed_ms"] == 1500
    assert data["failures"] == [
        {"family": {"n": 3, "sets": [[], [1], [2], [1, 3], [2, 3], [1, 2, 3]]}, "detail": "boom"}
    ]
    assert report.to_dict(timing=False)["elapsed_ms"] == 0


####################################################################################################
# CHECKS
####################################################################################################


@pytest.mark.parametrize("n, tested", [(1, 2), (2, 7), (3, 61)])
def test_theorem1(n, tested, quick_config):
    report = check_theorem1(n, quick_config)
    assert report.passed
    assert report.families_tested == tested
    assert report.check_name == "theorem1"


def test_theorem1_needs_simple_roots(F1, quick_config):
    """Dropping the simply rooted hypothesis exposes the circle."""
    report = check_theorem1(3, quick_config, predicate=Predicate.ALL)
    assert report.families_tested == 128
    assert F1 in [f.family for f in report.failures]


def test_theorem1_needs_empty_set(quick_config):
    report = check_theorem1(2, quick_config, require_empty_member=False)
    assert not report.passed
    assert Family.empty(2) in [f.family for f in report.failures]


@pytest.mark.parametrize("name", list(CHECKS))
def test_each_check_passes(name, quick_config):
    report = CHECKS[name](3, quick_config)
    assert report.passed, report.failures
    assert report.check_name == name
    assert report.n == 3


@pytest.mark.slow
@pytest.mark.parametrize("name", list(CHECKS))
def test_each_check_passes_n4(name, quick_config):
    assert CHECKS[name](4, quick_config).passed


def test_check_sizes(quick_config):
    assert check_duality(3, quick_config).families_tested == 256
    assert check_duality(5, quick_config).families_tested == 12
    assert check_lemma33(4, quick_config).families_tested == 6
    assert check_lemma33(1, quick_config).families_tested == 0
    assert check_intersections(3, 10, 0, quick_config).families_tested == 10
    assert check_decomposition(2, quick_config).families_tested == 6
    assert check_euler_without_empty(2, quick_config).families_tested == 6


@pytest.mark.parametrize(
    "name, n", [("theorem1", 5), ("corollary1", 0), ("lemma33", 7), ("duality", 7)]
)
def test_check_size_caps(name, n, quick_config):
    with pytest.raises(DomainError):
        CHECKS[name](n, quick_config)


@pytest.mark.slow
def test_lemma33_five():
    """All ten (n, k) pairs with 2 <= n <= 5."""
    report = check_lemma33(5, VerifyConfig(timing=False))
    assert report.passed, report.failures
    assert report.families_tested == 10


@pytest.mark.slow
def test_intersections_five():
    report = check_intersections(5, 500, 0, VerifyConfig(timing=False))
    assert report.passed, report.failures
    assert report.families_tested == 500


@pytest.mark.slow
def test_duality_six():
    report = check_duality(6, VerifyConfig(samples=10000, seed=0, timing=False))
    assert report.passed, report.failures
    assert report.families_tested == 10000


@pytest.mark.parametrize("n", [1, 2, 3])
def test_complement_matches_counts(n):
    """Complement maps the union-closed families onto the simply rooted ones."""
    closed = list(enumerate_families(EnumSpec(n=n, predicate=Predicate.UNION_CLOSED)))
    rooted = list(enumerate_families(EnumSpec(n=n, predicate=Predicate.SIMPLY_ROOTED)))

    assert len(closed) == len(rooted)
    assert {complement(f) for f in closed} == set(rooted)


def test_intersections_rejects_negative_samples():
    with pytest.raises(DomainError):
        check_intersections(3, -1, 0)


def test_run_check_all_order(quick_config):
    reports = run_check("all", 2, quick_config)
    assert [r.check_name for r in reports] == list(CHECKS)
    assert all(r.passed for r in reports)
    assert CHECK_NAMES[-1] == "all"


def test_run_check_unknown():
    with pytest.raises(DomainError):
        run_check("theorem2", 2)


def test_parallel_matches_serial(quick_config):
    """Pool dispatch gives the same report as the serial loop."""
    parallel = VerifyConfig(samples=12, seed=3, parallel=True, processes=2, timing=False)

    serial_report = check_theorem1(3, quick_config, predicate=Predicate.ALL)
    parallel_report = check_theorem1(3, parallel, predicate=Predicate.ALL)

    assert parallel_report.to_dict(timing=False) == serial_report.to_dict(timing=False)


####################################################################################################
# PROPERTY TESTS
####################################################################################################


@given(simply_rooted_families(with_empty=True))
def test_theorem_cases_hold(family):
    """Property:
    1. every per-family check of the theorem domain passes
    """
    for case in [acyclic_case, euler_one_case, per_set_case, local_family_case, star_case]:
        assert case(family) is None
    if len(family) >= 2:
        assert decomposition_case(family) is None


@given(family_pairs())
def test_intersection_case_holds(pair):
    """Property:
    1. cube sets and realizations commute with intersection for any pair
    """
    assert intersection_case(*pair) is None
