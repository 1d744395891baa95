"""
Verify
------

The verification sweeps used by ``rootedcubes verify``. Each check maps a pure per-family test
over a stream of families and collects the counterexamples into a ``CheckReport``. Family streams
come from ``enumerate_families`` driven by an ``EnumSpec``: exhaustive bitmask counting for small
ground sets, seeded random sampling otherwise. The ``VerifyConfig`` data-class holds the run
options shared by every check, including the multi-processing switch.

Failures are sorted canonically before a report is returned, so serial and parallel runs of the
same check produce identical reports apart from the elapsed time.
"""
import itertools
import json
import logging
import multiprocessing
import os
import random

from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum
from math import comb
from typing import Any, Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple

from rootedcubes.cubecomplex import (
    Cube,
    cube_intersect,
    cubes,
    decompose_at_max,
    intersect_complex,
    is_star_shaped,
    lemma_family,
    lemma_maximal_cubes,
    maximal_cubes,
    realize,
    realized_intersect,
    star_center,
    union_complex,
)
from rootedcubes.homology import (
    euler_from_cube_counts,
    euler_without_empty,
    homology_of,
    top_counts,
)
from rootedcubes.setfamily import (
    DomainError,
    Family,
    GroundSet,
    bits,
    complement,
    elements_of,
    family_to_json,
    interval_family,
    is_simply_rooted,
    is_union_closed,
    phi,
    popcount,
    roots,
    subfamily_at,
    union_closure,
)


LOGGER = logging.getLogger(__name__)

# 2^15 families containing the empty set at n = 4, 2^31 at n = 5
MAX_EXHAUSTIVE_SIZE = 4

# ground size cap for the randomized and structured sweeps
MAX_SWEEP_SIZE = 6

# duality is exhaustive up to this size, randomized above it
MAX_DUALITY_EXHAUSTIVE_SIZE = 3

# (member probability, share of the samples) for randomized sweeps
DENSITY_SWEEP = ((0.5, 0.50), (0.2, 0.25), (0.8, 0.25))

# chunks handed to each worker process
CHUNKS_PER_PROCESS = 4


class Predicate(Enum):
    """Filter applied to enumerated families."""

    ALL = "all"
    SIMPLY_ROOTED = "simply_rooted"
    UNION_CLOSED = "union_closed"


class Mode(Enum):
    """Family stream generation mode."""

    EXHAUSTIVE = "exhaustive"
    RANDOM = "random"


@dataclass(frozen=True)
class EnumSpec:
    """Which families to stream.

    ``sample_count``, ``seed`` and ``member_probability`` only apply in ``Mode.RANDOM``.
    """

    n: int
    require_empty_member: bool = False
    predicate: Predicate = Predicate.ALL
    mode: Mode = Mode.EXHAUSTIVE
    sample_count: int = 0
    seed: int = 0
    member_probability: float = 0.5

    def validate(self) -> None:
        """Check the spec against the enumeration caps.

        Raises:
            DomainError: if ``n`` or the random parameters are out of range.
        """
        GroundSet(self.n)

        if self.mode is Mode.EXHAUSTIVE and self.n > MAX_EXHAUSTIVE_SIZE:
            raise DomainError(
                f"Exhaustive enumeration supports n <= {MAX_EXHAUSTIVE_SIZE}, got n={self.n}."
            )

        if self.mode is Mode.RANDOM:
            if self.sample_count < 0:
                raise DomainError(f"Sample count must be >= 0, got {self.sample_count}.")
            if not 0.0 <= self.member_probability <= 1.0:
                raise DomainError(
                    f"Member probability must be in [0, 1], got {self.member_probability}."
                )


@dataclass
class VerifyConfig:
    """Run configuration shared by the verification checks."""

    samples: int = 500
    seed: int = 0
    parallel: bool = False
    processes: Optional[int] = None
    timing: bool = True


class Failure(NamedTuple):
    """A counterexample: the offending family and the first violated assertion."""

    family: Family
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return {"family": family_to_json(self.family), "detail": self.detail}


class CheckReport(NamedTuple):
    """Outcome of one verification sweep."""

    check_name: str
    n: int
    families_tested: int
    failures: List[Failure]
    elapsed: timedelta

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self, timing: bool = True) -> Dict[str, Any]:
        """JSON form; ``timing=False`` writes ``elapsed_ms`` as 0 for byte-stable output."""
        elapsed_ms = int(self.elapsed.total_seconds() * 1000) if timing else 0
        return {
            "check": self.check_name,
            "n": self.n,
            "tested": self.families_tested,
            "failures": [f.to_dict() for f in self.failures],
            "elapsed_ms": elapsed_ms,
        }


# A case is the positional arguments of a family check, the first one always a Family.
FAMILY_CHECK_TYPE = Callable[..., Optional[str]]

####################################################################################################
# FAMILY STREAMS
####################################################################################################


def _accepts(predicate: Predicate, family: Family) -> bool:
    if predicate is Predicate.SIMPLY_ROOTED:
        return is_simply_rooted(family)
    if predicate is Predicate.UNION_CLOSED:
        return is_union_closed(family)
    return True


def _exhaustive(spec: EnumSpec) -> Iterator[Family]:
    ground = GroundSet(spec.n)
    universe = ground.universe

    if spec.require_empty_member:
        words: Iterable[int] = ((rest << 1) | 1 for rest in range(1 << (universe - 1)))
    else:
        words = range(1 << universe)

    for word in words:
        family = Family(ground, tuple(m for m in range(universe) if (word >> m) & 1))
        if _accepts(spec.predicate, family):
            yield family


def _random(spec: EnumSpec) -> Iterator[Family]:
    """Seeded independent member draws.

    Predicates are met by construction rather than rejection: union-closed samples are union
    closures of a draw, simply rooted samples are complements of a union-closed draw.
    """
    rng = random.Random(spec.seed)
    ground = GroundSet(spec.n)

    for _ in range(spec.sample_count):
        word = 0
        for m in range(ground.universe):
            if rng.random() < spec.member_probability:
                word |= 1 << m
        family = Family.from_word(spec.n, word)

        if spec.predicate is Predicate.UNION_CLOSED:
            family = union_closure(family)
        elif spec.predicate is Predicate.SIMPLY_ROOTED:
            family = complement(union_closure(family))

        if spec.require_empty_member:
            family = family.with_member(0)

        yield family


def enumerate_families(spec: EnumSpec) -> Iterator[Family]:
    """Stream the families described by ``spec``.

    Exhaustive mode counts through membership words, fixing the empty set's bit when required,
    and yields each qualifying family once in increasing word order. Random mode yields exactly
    ``sample_count`` families and is deterministic in ``seed``.

    Args:
        spec: the enumeration spec

    Returns:
        Iterator of families.

    Raises:
        DomainError: if the spec is invalid.
    """
    spec.validate()
    LOGGER.debug("Enumerating families: %s", spec)
    return _exhaustive(spec) if spec.mode is Mode.EXHAUSTIVE else _random(spec)


def density_sweep(
    n: int,
    samples: int,
    seed: int,
    predicate: Predicate = Predicate.ALL,
    require_empty_member: bool = False,
) -> Iterator[Family]:
    """``samples`` random families split over the ``DENSITY_SWEEP`` member probabilities.

    The first density takes the rounding remainder; density ``i`` is seeded with ``seed + i``.
    """
    counts = [int(samples * share) for _, share in DENSITY_SWEEP]
    counts[0] += samples - sum(counts)

    for offset, ((probability, _), count) in enumerate(zip(DENSITY_SWEEP, counts)):
        spec = EnumSpec(
            n=n,
            require_empty_member=require_empty_member,
            predicate=predicate,
            mode=Mode.RANDOM,
            sample_count=count,
            seed=seed + offset,
            member_probability=probability,
        )
        yield from enumerate_families(spec)


def _theorem_domain(n: int) -> Iterator[Family]:
    """Simply rooted families containing the empty set, exhaustively."""
    return enumerate_families(
        EnumSpec(n=n, require_empty_member=True, predicate=Predicate.SIMPLY_ROOTED)
    )


####################################################################################################
# SWEEP DISPATCH
####################################################################################################


def _check_chunk(family_check: FAMILY_CHECK_TYPE, cases: List[Tuple[Any, ...]]) -> List[Failure]:
    """Run ``family_check`` over a list of cases; importable for the multiprocessing pool."""
    failures = []
    for case in cases:
        detail = family_check(*case)
        if detail is not None:
            failures.append(Failure(family=case[0], detail=detail))
    return failures


def _failure_key(failure: Failure) -> Tuple[Any, ...]:
    return (failure.family.sort_key, failure.detail)


def sweep(
    check_name: str,
    n: int,
    cases: Iterable[Tuple[Any, ...]],
    family_check: FAMILY_CHECK_TYPE,
    config: VerifyConfig,
) -> CheckReport:
    """Apply ``family_check`` to every case and collect a ``CheckReport``.

    In parallel mode the cases are split into contiguous chunks and dispatched through a
    multiprocessing pool with ``starmap_async``; failures are merged and sorted either way.

    Args:
        check_name: name written in the report
        n: ground size written in the report
        cases: argument tuples for ``family_check``, each starting with a Family
        family_check: returns None on success or the failure detail
        config: run configuration

    Returns:
        The ``CheckReport``.
    """
    start = datetime.now()
    case_list = list(cases)

    if config.parallel and len(case_list) > 1:
        processes = config.processes or os.cpu_count() or 1
        size = -(-len(case_list) // (processes * CHUNKS_PER_PROCESS))
        chunks = [case_list[i : i + size] for i in range(0, len(case_list), size)]

        LOGGER.info(
            "Running parallel dispatch: %s cases in %s chunks, processes: %s",
            len(case_list),
            len(chunks),
            processes,
        )

        with multiprocessing.Pool(processes=processes) as pool:
            mp_results = pool.starmap_async(_check_chunk, itertools.product([family_check], chunks))
            # list of per-chunk lists, flattened
            failures = list(itertools.chain.from_iterable(mp_results.get()))

    else:
        failures = _check_chunk(family_check, case_list)

    failures.sort(key=_failure_key)
    end = datetime.now()

    LOGGER.info(
        "%s n=%s: %s tested, %s failures.", check_name, n, len(case_list), len(failures)
    )
    return CheckReport(
        check_name=check_name,
        n=n,
        families_tested=len(case_list),
        failures=failures,
        elapsed=end - start,
    )


def _require_size(check_name: str, n: int, cap: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= cap:
        raise DomainError(f"{check_name} supports 1 <= n <= {cap}, got n={n}.")


def _fmt(mask: int) -> str:
    return "{" + ",".join(str(e) for e in elements_of(mask)) + "}"


def _fmt_cube(cube: Cube) -> str:
    return f"[{_fmt(cube.lower)}, {_fmt(cube.upper)}]"


####################################################################################################
# PER-FAMILY CHECKS
####################################################################################################


def acyclic_case(family: Family) -> Optional[str]:
    h = homology_of(family)
    if not h.acyclic:
        return f"not acyclic: betti={h.betti}, torsion={h.torsion}"
    return None


def euler_one_case(family: Family) -> Optional[str]:
    euler = euler_from_cube_counts(family)
    if euler != 1:
        return f"alternating cube count is {euler}, expected 1"
    return None


def per_set_case(family: Family) -> Optional[str]:
    for a in family.members:
        if a == 0:
            continue

        counts = top_counts(family, a)
        alternating = sum((-1) ** k * c for k, c in enumerate(counts))
        if alternating != 0:
            return f"A={_fmt(a)}: alternating sum of top counts {counts} is {alternating}"

        size = popcount(a)
        local = subfamily_at(family, a)
        phi_size = popcount(phi(family, a, checked=False))

        for k, count in enumerate(counts):
            level = size - k
            below = sum(1 for b in local.members if popcount(b) == level)
            if count != below:
                return f"A={_fmt(a)}: |C_{k}(F,A)|={count} but F_A has {below} sets of size {level}"

            # when phi(A) is empty F_A is all of [∅, A] and nothing is subtracted
            expected = comb(size, level) - (comb(phi_size, level) if phi_size else 0)
            if count != expected:
                return f"A={_fmt(a)}: |C_{k}(F,A)|={count} but the binomial count is {expected}"

    return None


def roots_phi_case(family: Family) -> Optional[str]:
    for a in family.members:
        if a == 0:
            continue
        found, image = roots(family, a), phi(family, a, checked=False)
        if found != a & ~image:
            expected = _fmt(a & ~image)
            return f"A={_fmt(a)}: roots {_fmt(found)} differ from A minus phi(A) {expected}"
    return None


def local_family_case(family: Family) -> Optional[str]:
    for a in family.members:
        local = subfamily_at(family, a)

        if phi(family, a, checked=False):
            expected = Family.empty(family.n)
            for i in bits(roots(family, a)):
                expected = expected.union(interval_family(family.n, i, a))
            label = "the union of root intervals"
        else:
            expected = interval_family(family.n, 0, a)
            label = f"[{{}}, {_fmt(a)}]"

        if local != expected:
            return f"A={_fmt(a)}: F_A={local.sets()} differs from {label} {expected.sets()}"

    return None


def lemma_case(family: Family, n: int, k: int) -> Optional[str]:
    h = homology_of(family)
    if not h.acyclic:
        return f"n={n}, k={k}: not acyclic: betti={h.betti}, torsion={h.torsion}"

    found, expected = maximal_cubes(family), lemma_maximal_cubes(n, k)
    if found != expected:
        return (
            f"n={n}, k={k}: maximal cubes {[_fmt_cube(c) for c in found]} differ from "
            f"{[_fmt_cube(c) for c in expected]}"
        )
    return None


def intersection_case(first: Family, second: Family) -> Optional[str]:
    other = "G=" + json.dumps(family_to_json(second), separators=(",", ":"))
    meet = first.intersection(second)
    first_cx, second_cx, meet_cx = cubes(first), cubes(second), cubes(meet)

    graded = intersect_complex(first_cx, second_cx)
    if graded != meet_cx:
        return f"{other}: C(F) and C(G) meet in {graded.counts}, C(F∩G) has {meet_cx.counts}"

    for cube in meet_cx:
        if cube not in first_cx or cube not in second_cx:
            return f"{other}: {_fmt_cube(cube)} of C(F∩G) is missing from C(F) or C(G)"

    realized = {c: realize(c, first.n) for c in itertools.chain(first_cx, second_cx)}
    for c in first_cx:
        for d in second_cx:
            cube = cube_intersect(c, d)
            meet_point = realized_intersect(realized[c], realized[d])

            if cube is None:
                if meet_point is not None:
                    return f"{other}: {_fmt_cube(c)} and {_fmt_cube(d)} meet geometrically only"
                continue

            if meet_point != realize(cube, first.n):
                return f"{other}: |{_fmt_cube(c)}| ∩ |{_fmt_cube(d)}| is not |{_fmt_cube(cube)}|"

            if cube not in meet_cx:
                return f"{other}: {_fmt_cube(cube)} is not a cube of C(F∩G)"

    return None


def duality_case(family: Family) -> Optional[str]:
    closed, rooted = is_union_closed(family), is_simply_rooted(complement(family))
    if closed != rooted:
        return f"union_closed={closed} but complement simply_rooted={rooted}"
    return None


def decomposition_case(family: Family) -> Optional[str]:
    rest, local = decompose_at_max(family)
    apex = _fmt(local.members[-1])
    whole = cubes(family)

    if union_complex(cubes(rest), cubes(local)) != whole:
        return f"A={apex}: C(F minus A) and C(F_A) do not union to C(F)"

    if cubes(rest.intersection(local)) != cubes(local.without(local.members[-1])):
        return f"A={apex}: C((F minus A) ∩ F_A) differs from C(F_A minus A)"

    h = homology_of(local)
    if not h.acyclic:
        return f"A={apex}: F_A not acyclic: betti={h.betti}, torsion={h.torsion}"

    return None


def star_case(family: Family) -> Optional[str]:
    decomposition = decompose_at_max(family)
    local, apex = decomposition.local, decomposition.apex

    if not is_star_shaped(local):
        return f"A={_fmt(apex)}: F_A is not star-shaped"

    center = star_center(local)
    if center is None or not center.contains(Cube(apex, apex)):
        return f"A={_fmt(apex)}: maximal cubes of F_A do not share the vertex A"

    h = homology_of(local)
    if not h.acyclic:
        return f"A={_fmt(apex)}: F_A not acyclic: betti={h.betti}, torsion={h.torsion}"

    if family != local:
        overlap = homology_of(local.without(apex))
        if not overlap.acyclic:
            return (
                f"A={_fmt(apex)}: F_A minus A not acyclic: "
                f"betti={overlap.betti}, torsion={overlap.torsion}"
            )

    return None


def euler_root_case(family: Family) -> Optional[str]:
    from_roots, from_cubes = euler_without_empty(family), euler_from_cube_counts(family)
    if from_roots != from_cubes:
        return f"root formula gives {from_roots}, cube counts give {from_cubes}"
    return None


####################################################################################################
# CHECKS
####################################################################################################


def _config(config: Optional[VerifyConfig]) -> VerifyConfig:
    return config if config is not None else VerifyConfig()


def _single(families: Iterable[Family]) -> Iterator[Tuple[Family]]:
    return ((f,) for f in families)


def check_theorem1(
    n: int,
    config: Optional[VerifyConfig] = None,
    predicate: Predicate = Predicate.SIMPLY_ROOTED,
    require_empty_member: bool = True,
) -> CheckReport:
    """Acyclicity of ``X(F)`` for every simply rooted family containing the empty set.

    ``predicate`` and ``require_empty_member`` relax the hypotheses to show they are needed: with
    ``Predicate.ALL`` the family ``{∅,{1},{2},{1,3},{2,3},{1,2,3}}`` fails at ``n = 3``.
    """
    _require_size("theorem1", n, MAX_EXHAUSTIVE_SIZE)
    spec = EnumSpec(n=n, require_empty_member=require_empty_member, predicate=predicate)
    return sweep("theorem1", n, _single(enumerate_families(spec)), acyclic_case, _config(config))


def check_corollary_eq1(n: int, config: Optional[VerifyConfig] = None) -> CheckReport:
    """Alternating cube count equal to 1 on the theorem domain."""
    _require_size("corollary1", n, MAX_EXHAUSTIVE_SIZE)
    return sweep("corollary1", n, _single(_theorem_domain(n)), euler_one_case, _config(config))


def check_lemma_per_set(n: int, config: Optional[VerifyConfig] = None) -> CheckReport:
    """Per-member alternating sums vanish, with the bijection and binomial cross-checks."""
    _require_size("lemma-per-set", n, MAX_EXHAUSTIVE_SIZE)
    return sweep("lemma-per-set", n, _single(_theorem_domain(n)), per_set_case, _config(config))


def check_prop_roots_phi(n: int, config: Optional[VerifyConfig] = None) -> CheckReport:
    """``roots(A) = A \\ phi(A)`` on every simply rooted family, with or without the empty set."""
    _require_size("prop-roots", n, MAX_EXHAUSTIVE_SIZE)
    spec = EnumSpec(n=n, predicate=Predicate.SIMPLY_ROOTED)
    cases = _single(enumerate_families(spec))
    return sweep("prop-roots", n, cases, roots_phi_case, _config(config))


def check_prop_FA(n: int, config: Optional[VerifyConfig] = None) -> CheckReport:
    """``F_A`` is the union of root intervals, or all of ``[∅, A]`` when ``phi(A)`` is empty."""
    _require_size("prop-fa", n, MAX_EXHAUSTIVE_SIZE)
    return sweep("prop-fa", n, _single(_theorem_domain(n)), local_family_case, _config(config))


def check_lemma33(n_max: int, config: Optional[VerifyConfig] = None) -> CheckReport:
    """Acyclicity and maximal cubes of ``lemma_family(n, k)`` for ``2 <= n <= n_max``, ``k < n``.

    ``families_tested`` counts ``(n, k)`` pairs; ``n_max = 1`` has none.
    """
    _require_size("lemma33", n_max, MAX_SWEEP_SIZE)
    cases = [(lemma_family(n, k), n, k) for n in range(2, n_max + 1) for k in range(1, n)]
    return sweep("lemma33", n_max, cases, lemma_case, _config(config))


def check_intersections(
    n: int, samples: int, seed: int, config: Optional[VerifyConfig] = None
) -> CheckReport:
    """Cube sets and realizations commute with intersection on ``samples`` random pairs.

    Pairs are consecutive draws of a density sweep of ``2 * samples`` families.
    """
    _require_size("intersections", n, MAX_SWEEP_SIZE)
    if samples < 0:
        raise DomainError(f"Sample count must be >= 0, got {samples}.")

    families = list(density_sweep(n, 2 * samples, seed))
    cases = list(zip(families[0::2], families[1::2]))
    return sweep("intersections", n, cases, intersection_case, _config(config))


def check_duality(n: int, config: Optional[VerifyConfig] = None) -> CheckReport:
    """Union-closed iff the complement is simply rooted.

    Exhaustive up to ``n = 3``; above that ``config.samples`` random families from a density
    sweep seeded with ``config.seed``.
    """
    _require_size("duality", n, MAX_SWEEP_SIZE)
    config = _config(config)

    if n <= MAX_DUALITY_EXHAUSTIVE_SIZE:
        families: Iterable[Family] = enumerate_families(EnumSpec(n=n))
    else:
        families = density_sweep(n, config.samples, config.seed)

    return sweep("duality", n, _single(families), duality_case, config)


def check_decomposition(n: int, config: Optional[VerifyConfig] = None) -> CheckReport:
    """Cube sets split along the apex of every theorem-domain family with at least two members."""
    _require_size("decomposition", n, MAX_EXHAUSTIVE_SIZE)
    families = (f for f in _theorem_domain(n) if len(f) >= 2)
    return sweep("decomposition", n, _single(families), decomposition_case, _config(config))


def check_star_shaped(n: int, config: Optional[VerifyConfig] = None) -> CheckReport:
    """The apex part ``F_A`` is star-shaped and acyclic, and so is its overlap with the rest."""
    _require_size("star-shaped", n, MAX_EXHAUSTIVE_SIZE)
    return sweep("star-shaped", n, _single(_theorem_domain(n)), star_case, _config(config))


def check_euler_without_empty(n: int, config: Optional[VerifyConfig] = None) -> CheckReport:
    """Root-count Euler formula against cube counts for simply rooted families without ∅.

    Removing ∅ does not change simple rootedness, so the domain is the theorem domain with ∅
    dropped, minus the empty family.
    """
    _require_size("euler-without-empty", n, MAX_EXHAUSTIVE_SIZE)
    families = (f.without(0) for f in _theorem_domain(n) if len(f) >= 2)
    return sweep("euler-without-empty", n, _single(families), euler_root_case, _config(config))


####################################################################################################
# DISPATCH BY NAME
####################################################################################################


def _intersections_from_config(n: int, config: VerifyConfig) -> CheckReport:
    """Cube sets and realizations commute with intersection on random family pairs."""
    return check_intersections(n, config.samples, config.seed, config)


CHECKS: Dict[str, Callable[[int, VerifyConfig], CheckReport]] = {
    "theorem1": check_theorem1,
    "corollary1": check_corollary_eq1,
    "lemma-per-set": check_lemma_per_set,
    "prop-roots": check_prop_roots_phi,
    "prop-fa": check_prop_FA,
    "lemma33": check_lemma33,
    "intersections": _intersections_from_config,
    "duality": check_duality,
    "decomposition": check_decomposition,
    "star-shaped": check_star_shaped,
    "euler-without-empty": check_euler_without_empty,
}

CHECK_NAMES = tuple(CHECKS) + ("all",)


def run_check(name: str, n: int, config: Optional[VerifyConfig] = None) -> List[CheckReport]:
    """Run a check by its CLI name; ``all`` runs every check in ``CHECKS`` order.

    Raises:
        DomainError: for an unknown name or an ``n`` outside a check's range.
    """
    config = _config(config)

    if name == "all":
        names = list(CHECKS)
    elif name in CHECKS:
        names = [name]
    else:
        raise DomainError(f"Unknown check {name!r}, choose from {', '.join(CHECK_NAMES)}.")

    reports = []
    for check_name in names:
        LOGGER.info("Running check: %s", check_name)
        reports.append(CHECKS[check_name](n, config))
    return reports
