"""
Report
------

Functions used to assemble the CLI outputs: the per-family ``AnalysisReport`` written by
``analyze``, the text summaries of verification runs shown on standard error, and the JSON and
file writers shared by every command.
"""
import json
import logging

from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from rootedcubes.cubecomplex import Cube, cubes, maximal_cubes_of
from rootedcubes.homology import HomologyReport, euler_without_empty, homology_of_complex
from rootedcubes.setfamily import (
    Family,
    elements_of,
    family_to_json,
    is_simply_rooted,
    is_union_closed,
    max_cardinality,
    phi,
    roots,
)
from rootedcubes.verify import CheckReport


LOGGER = logging.getLogger(__name__)

# failures listed per check in the terminal summary, the JSON output always has all of them
MAX_DISPLAYED_FAILURES = 10


class PhiRow(NamedTuple):
    """``phi`` and roots of one non-empty member."""

    member: int
    phi: int
    roots: int

    def to_dict(self) -> Dict[str, List[int]]:
        return {
            "set": elements_of(self.member),
            "phi": elements_of(self.phi),
            "roots": elements_of(self.roots),
        }


class AnalysisReport(NamedTuple):
    """Everything ``analyze`` reports about one family.

    ``max_cardinality`` is None for the empty family, ``phi_table`` is None unless the family is
    simply rooted, and ``euler_without_empty`` is None unless the family is non-empty, simply
    rooted and without the empty set.
    """

    family: Family
    union_closed: bool
    simply_rooted: bool
    contains_empty: bool
    max_cardinality: Optional[int]
    cube_counts: List[int]
    maximal_cubes: List[Cube]
    homology: HomologyReport
    phi_table: Optional[List[PhiRow]]
    euler_without_empty: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": family_to_json(self.family),
            "predicates": {
                "union_closed": self.union_closed,
                "simply_rooted": self.simply_rooted,
                "contains_empty": self.contains_empty,
            },
            "max_cardinality": self.max_cardinality,
            "cube_counts": list(self.cube_counts),
            "maximal_cubes": [cube_to_json(c) for c in self.maximal_cubes],
            "homology": self.homology.to_dict(),
            "phi_table": None if self.phi_table is None else [r.to_dict() for r in self.phi_table],
            "euler_without_empty": self.euler_without_empty,
        }


class DisplayResults(NamedTuple):
    """Verification summary text with terminal coloring applied."""

    summary: str
    failures: str


####################################################################################################
# FORMATTING UTILITIES
####################################################################################################


def colorize_output(output: str, color: str) -> str:
    """Color output for the terminal display as either red, green, yellow or blue.

    Args:
        output: string to colorize
        color: choice of terminal color

    Returns:
        colorized string, or original string for bad color choice.
    """
    colors = {
        "red": f"\033[91m{output}\033[0m",  # Red text
        "green": f"\033[92m{output}\033[0m",  # Green text
        "yellow": f"\033[93m{output}\033[0m",  # Yellow text
        "blue": f"\033[94m{output}\033[0m",  # Blue text
    }

    return colors.get(color, output)


def cube_to_json(cube: Cube) -> List[List[int]]:
    """A cube as ``[lower elements, upper elements]``."""
    return [elements_of(cube.lower), elements_of(cube.upper)]


def dump_json(payload: Any) -> str:
    """Stable JSON text for standard output and report files."""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


####################################################################################################
# FAMILY ANALYSIS
####################################################################################################


def analyze_family(family: Family) -> AnalysisReport:
    """Compose the module-level operations into an ``AnalysisReport``.

    Args:
        family: the family to analyze

    Returns:
        The report; the cube complex is built once and shared by every field.
    """
    complex_ = cubes(family)
    simply_rooted = is_simply_rooted(family)

    phi_table = None
    if simply_rooted:
        phi_table = [
            PhiRow(member=a, phi=phi(family, a, checked=False), roots=roots(family, a))
            for a in family.members
            if a
        ]

    euler_root_formula = None
    if family.members and simply_rooted and not family.contains_empty:
        euler_root_formula = euler_without_empty(family)

    LOGGER.debug("Analyzed family with %s members over [%s].", len(family), family.n)

    return AnalysisReport(
        family=family,
        union_closed=is_union_closed(family),
        simply_rooted=simply_rooted,
        contains_empty=family.contains_empty,
        max_cardinality=max_cardinality(family) if family.members else None,
        cube_counts=complex_.counts,
        maximal_cubes=maximal_cubes_of(complex_),
        homology=homology_of_complex(complex_),
        phi_table=phi_table,
        euler_without_empty=euler_root_formula,
    )


def analysis_summary(report: AnalysisReport) -> str:
    """One-line human summary of an analysis for standard error."""
    h = report.homology
    verdict = "acyclic" if h.acyclic else "not acyclic"
    return (
        f"n={report.family.n}, {len(report.family)} sets, cube counts {report.cube_counts}, "
        f"betti {h.betti}: {verdict}"
    )


####################################################################################################
# VERIFICATION SUMMARIES
####################################################################################################


def build_failure_section(report: CheckReport) -> str:
    """Readable list of the failures of one check.

    It will look like:

    .. code-block::

        theorem1 (n=3)
        --------------
         - {"n":3,"sets":[[],[1],[2],[1,3],[2,3],[1,2,3]]}: not acyclic: betti=[1, 1, 0, 0], ...

    Args:
        report: the check report

    Returns:
        The section as a formatted string.
    """
    title = f"{report.check_name} (n={report.n})"
    lines = [title, "-" * len(title)]

    for failure in report.failures[:MAX_DISPLAYED_FAILURES]:
        family = json.dumps(family_to_json(failure.family), separators=(",", ":"))
        lines.append(f" - {family}: {failure.detail}")

    hidden = len(report.failures) - MAX_DISPLAYED_FAILURES
    if hidden > 0:
        lines.append(f" - ... and {hidden} more")

    return "\n".join(lines)


def summarize_checks(reports: Sequence[CheckReport]) -> Tuple[str, DisplayResults]:
    """Create the text summary of a verification run and its colored display version.

    It will look like:

    .. code-block::

        Verification summary
        ====================
         - theorem1 (n=3): PASS, 61 tested
         - duality (n=3): PASS, 256 tested

    Args:
        reports: the check reports in run order

    Returns:
        Tuple: (text report, ``DisplayResults``)
    """
    header = "Verification summary"
    plain, colored = [header, "=" * len(header)], [header, "=" * len(header)]

    for report in reports:
        verdict = "PASS" if report.passed else f"FAIL ({len(report.failures)} failures)"
        line = f" - {report.check_name} (n={report.n}): {verdict}, {report.families_tested} tested"
        plain.append(line)
        colored.append(colorize_output(line, "green" if report.passed else "red"))

    sections = [build_failure_section(r) for r in reports if not r.passed]
    failures_text = "\n\n".join(sections)

    text = "\n".join(plain)
    if sections:
        text = "\n\n".join([text, failures_text])

    return (
        text,
        DisplayResults(
            summary="\n".join(colored),
            failures=colorize_output(failures_text, "red") if sections else "",
        ),
    )


####################################################################################################
# OUTPUT FILES
####################################################################################################


def write_report(report: str, location: Path) -> None:
    """Write the report to a file.

    If the location does not exist with folders they are created.

    Args:
        report: the string report to write
        location: path location to the file

    Returns:
        None, writes output to location
    """

    if not location.parent.exists():
        LOGGER.info("Creating directory tree for: %s", location.parent.resolve())
        location.parent.mkdir(parents=True, exist_ok=True)

    with open(location, "w", encoding="utf-8") as output_loc:
        LOGGER.info("Writing output report to: %s", location.resolve())
        output_loc.write(report)
