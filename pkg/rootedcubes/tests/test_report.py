"""Tests for the report module.
"""
import json

from datetime import timedelta
from textwrap import dedent

import hypothesis.strategies as st  # type: ignore
import pytest

from hypothesis import given  # type: ignore

from rootedcubes.report import (
    MAX_DISPLAYED_FAILURES,
    analysis_summary,
    analyze_family,
    build_failure_section,
    colorize_output,
    dump_json,
    summarize_checks,
    write_report,
)
from rootedcubes.setfamily import Family
from rootedcubes.tests.strategies import families
from rootedcubes.verify import CheckReport, Failure


def make_report(name, failures=(), n=3, tested=61):
    return CheckReport(
        check_name=name,
        n=n,
        families_tested=tested,
        failures=list(failures),
        elapsed=timedelta(seconds=1),
    )


####################################################################################################
# FAMILY ANALYSIS
####################################################################################################


def test_analyze_simply_rooted_with_empty(F3):
    data = analyze_family(F3).to_dict()

    assert list(data) == [
        "family",
        "predicates",
        "max_cardinality",
        "cube_counts",
        "maximal_cubes",
        "homology",
        "phi_table",
        "euler_without_empty",
    ]
    assert data["family"] == {"n": 3, "sets": [[], [1], [2], [3], [1, 3]]}
    assert data["predicates"] == {
        "union_closed": False,
        "simply_rooted": True,
        "contains_empty": True,
    }
    assert data["max_cardinality"] == 2
    assert data["cube_counts"] == [5, 5, 1, 0]
    assert data["maximal_cubes"] == [[[], [1, 3]], [[], [2]]]
    assert data["homology"]["betti"] == [1, 0, 0, 0]
    assert data["homology"]["acyclic"]
    assert data["phi_table"] == [
        {"set": [1], "phi": [], "roots": [1]},
        {"set": [2], "phi": [], "roots": [2]},
        {"set": [3], "phi": [], "roots": [3]},
        {"set": [1, 3], "phi": [], "roots": [1, 3]},
    ]
    assert data["euler_without_empty"] is None


def test_analyze_hexagon(F2):
    """Simply rooted without the empty set: the root formula is reported."""
    result = analyze_family(F2)
    assert result.euler_without_empty == 0
    assert result.homology.betti == [1, 1, 0, 0]
    assert len(result.phi_table) == 6
    assert all(row.phi == 0 and row.roots == row.member for row in result.phi_table)


def test_analyze_not_simply_rooted(F1):
    result = analyze_family(F1)
    assert not result.simply_rooted
    assert result.phi_table is None
    assert result.euler_without_empty is None
    assert result.to_dict()["phi_table"] is None


def test_analyze_empty_family():
    result = analyze_family(Family.empty(2))
    assert result.max_cardinality is None
    assert result.cube_counts == [0, 0, 0]
    assert result.maximal_cubes == []
    assert result.phi_table == []
    assert result.euler_without_empty is None
    assert not result.homology.acyclic


def test_analysis_summary(F1, F3):
    assert (
        analysis_summary(analyze_family(F3))
        == "n=3, 5 sets, cube counts [5, 5, 1, 0], betti [1, 0, 0, 0]: acyclic"
    )
    assert analysis_summary(analyze_family(F1)).endswith("not acyclic")


####################################################################################################
# VERIFICATION SUMMARIES
####################################################################################################


def test_summarize_checks_passing():
    text, display = summarize_checks([make_report("theorem1", n=2, tested=7)])
    expected = dedent(
        """\
        Verification summary
        ====================
         - theorem1 (n=2): PASS, 7 tested"""
    )
    assert text == expected
    assert display.summary.endswith(colorize_output(" - theorem1 (n=2): PASS, 7 tested", "green"))
    assert display.failures == ""


def test_summarize_checks_failing(F1, F3):
    reports = [
        make_report("theorem1", failures=[Failure(F1, "boom")], tested=128),
        make_report("duality", tested=256),
    ]
    text, display = summarize_checks(reports)

    assert " - theorem1 (n=3): FAIL (1 failures), 128 tested" in text
    assert " - duality (n=3): PASS, 256 tested" in text
    assert ' - {"n":3,"sets":[[],[1],[2],[1,3],[2,3],[1,2,3]]}: boom' in text
    assert display.failures.startswith("\033[91m")


def test_failure_section_truncates(F3):
    failures = [Failure(F3, f"detail {i}") for i in range(MAX_DISPLAYED_FAILURES + 2)]
    section = build_failure_section(make_report("star-shaped", failures=failures))
    lines = section.splitlines()

    assert lines[0] == "star-shaped (n=3)"
    assert lines[1] == "-" * len(lines[0])
    assert len(lines) == 2 + MAX_DISPLAYED_FAILURES + 1
    assert lines[-1] == " - ... and 2 more"


@pytest.mark.parametrize("color, code", [("red", "91"), ("green", "92"), ("yellow", "93")])
def test_colorize_output(color, code):
    assert colorize_output("text", color) == f"\033[{code}mtext\033[0m"


def test_colorize_output_unknown_color():
    assert colorize_output("text", "purple") == "text"


####################################################################################################
# OUTPUT FILES
####################################################################################################


def test_write_report_creates_folders(tmp_path):
    location = tmp_path / "nested" / "folder" / "report.json"
    write_report(dump_json({"a": [1, 2]}), location)
    assert location.exists()
    assert json.loads(location.read_text(encoding="utf-8")) == {"a": [1, 2]}


def test_dump_json_keeps_symbols():
    text = dump_json({"detail": "C(F∩G)"})
    assert text.endswith("}\n")
    assert "∩" in text


####################################################################################################
# PROPERTY TESTS
####################################################################################################


@given(families())
def test_analysis_is_json_serializable(family):
    """Property:
    1. every analysis serializes to JSON and parses back to the same data
    2. the reported cube counts are the homology cube counts
    """
    data = analyze_family(family).to_dict()
    assert json.loads(dump_json(data)) == data
    assert data["cube_counts"] == data["homology"]["cube_counts"]


@given(st.text())
def test_colorize_output_invariant(text):
    """Property:
    1. colorizing keeps the text and only wraps it
    """
    assert text in colorize_output(text, "blue")
