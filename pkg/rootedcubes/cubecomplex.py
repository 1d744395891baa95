"""
Cube complexes
--------------

Interval cubes ``[A, B]`` and the cubical set ``X(F)`` of a family. The primary objects are:

1. The ``Cube``
2. The ``RealizedCube``
3. The ``CubicalComplex``

A ``Cube`` is the combinatorial interval ``[A, B] = {C : A ⊆ C ⊆ B}`` with ``A ⊆ B``; its dimension
is ``|B \\ A|``. Its geometric realization in the unit cube ``[0, 1]^n`` is a ``RealizedCube``, a
product of the coordinate intervals ``{0}``, ``{1}`` and ``[0, 1]``. The ``CubicalComplex`` of a
family holds every cube contained in the family, graded by dimension and sorted by
``(lower, upper)`` inside each grade; that order fixes the row and column layout of the boundary
matrices in ``rootedcubes.homology``.

The empty cube is never a ``Cube``: intersections that are empty return ``None``.
"""
import logging

from enum import Enum
from functools import reduce
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Tuple

from rootedcubes.setfamily import (
    MAX_GROUND_SIZE,
    DomainError,
    Family,
    GroundSet,
    PreconditionError,
    bits,
    max_cardinality,
    popcount,
    subfamily_at,
)


LOGGER = logging.getLogger(__name__)

# OBJ export draws in three dimensions
MAX_EXPORT_SIZE = 3

####################################################################################################
# CORE TYPES
####################################################################################################


class Cube(NamedTuple):
    """The interval ``[lower, upper]``; build with ``Cube.of`` to validate ``lower ⊆ upper``.

    Tuple ordering is lexicographic by ``(lower, upper)``, which is the basis order of a grade.
    """

    lower: int
    upper: int

    @classmethod
    def of(cls, lower: int, upper: int) -> "Cube":
        """Validated constructor.

        Raises:
            DomainError: if ``lower`` is not a subset of ``upper``.
        """
        if lower < 0 or lower & ~upper:
            raise DomainError(f"[{lower}, {upper}] is not an interval: lower is not a subset.")
        return cls(lower, upper)

    @property
    def free(self) -> int:
        """Mask of the free coordinates, ``upper \\ lower``."""
        return self.upper & ~self.lower

    @property
    def dim(self) -> int:
        return popcount(self.free)

    def contains(self, other: "Cube") -> bool:
        """True iff ``other ⊆ self`` as intervals."""
        return not (self.lower & ~other.lower) and not (other.upper & ~self.upper)

    def facets(self) -> List[Tuple["Cube", "Cube"]]:
        """Facet pairs ``([A ∪ {i}, B], [A, B \\ {i}])`` over free coordinates, ascending."""
        return [
            (Cube(self.lower | b, self.upper), Cube(self.lower, self.upper ^ b))
            for b in bits(self.free)
        ]

    def cofacets(self, full: int) -> Iterator["Cube"]:
        """Cubes of one dimension more that contain this cube, inside the ground mask ``full``."""
        for b in bits(self.lower):
            yield Cube(self.lower ^ b, self.upper)
        for b in bits(full & ~self.upper):
            yield Cube(self.lower, self.upper | b)


class Interval(Enum):
    """Coordinate interval of a realized cube."""

    POINT0 = "{0}"
    POINT1 = "{1}"
    FULL = "[0,1]"


class RealizedCube(NamedTuple):
    """Geometric realization ``I_1 x ... x I_n`` of a cube."""

    intervals: Tuple[Interval, ...]

    @property
    def dim(self) -> int:
        return sum(1 for i in self.intervals if i is Interval.FULL)


class Decomposition(NamedTuple):
    """Split of a family at its apex ``A``: ``(F \\ {A}, F_A)``."""

    rest: Family
    local: Family

    @property
    def apex(self) -> int:
        """The chosen maximum-cardinality member ``A``; it contains every member of ``F_A``."""
        return self.local.members[-1]


class CubicalComplex:
    """Graded set of cubes over a ground set.

    Grades ``0..n`` are sorted tuples of cubes. Complexes built by ``cubes`` are face-closed;
    complexes assembled by hand may not be, see ``is_face_closed``.
    """

    def __init__(self, ground: GroundSet, cube_iter: Iterable[Cube] = ()) -> None:
        """Initialize the complex.

        Args:
            ground: the ground set the cubes live over
            cube_iter: cubes in any order, duplicates merged

        Raises:
            DomainError: if a cube is not an interval of subsets of the ground set.
        """
        graded: List[set] = [set() for _ in range(ground.n + 1)]
        for cube in cube_iter:
            ground.check_mask(cube.upper)
            graded[Cube.of(cube.lower, cube.upper).dim].add(cube)

        self._ground = ground
        self._grades: Tuple[Tuple[Cube, ...], ...] = tuple(tuple(sorted(g)) for g in graded)
        self._index: Optional[List[Dict[Cube, int]]] = None

    def __repr__(self) -> str:
        return f"CubicalComplex(n={self.n}, counts={self.counts})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CubicalComplex):
            return NotImplemented
        return self._ground == other._ground and self._grades == other._grades

    def __hash__(self) -> int:
        return hash((self._ground, self._grades))

    def __contains__(self, cube: object) -> bool:
        if not isinstance(cube, tuple) or len(cube) != 2:
            return False
        cube = Cube(*cube)
        if cube.lower & ~cube.upper or cube.upper > self._ground.full:
            return False
        return cube in self.index(cube.dim)

    def __iter__(self) -> Iterator[Cube]:
        for grade in self._grades:
            yield from grade

    def __len__(self) -> int:
        return sum(self.counts)

    @property
    def ground(self) -> GroundSet:
        return self._ground

    @property
    def n(self) -> int:
        return self._ground.n

    @property
    def grades(self) -> Tuple[Tuple[Cube, ...], ...]:
        return self._grades

    @property
    def counts(self) -> List[int]:
        """``|C_k|`` for ``k = 0..n``."""
        return [len(g) for g in self._grades]

    @property
    def dimension(self) -> int:
        """Largest non-empty grade, -1 for the empty complex."""
        nonempty = [k for k, g in enumerate(self._grades) if g]
        return nonempty[-1] if nonempty else -1

    def grade(self, k: int) -> Tuple[Cube, ...]:
        """Basis of the k-chains.

        Raises:
            DomainError: if ``k`` is outside ``0..n``.
        """
        if not 0 <= k <= self.n:
            raise DomainError(f"Degree {k} is outside [0, {self.n}].")
        return self._grades[k]

    def index(self, k: int) -> Dict[Cube, int]:
        """Basis position of every cube in grade ``k``, built once and cached."""
        if self._index is None:
            self._index = [{c: i for i, c in enumerate(g)} for g in self._grades]
        return self._index[k]

    def cube_set(self) -> FrozenSet[Cube]:
        return frozenset(self)

    def is_face_closed(self) -> bool:
        """True iff every facet of every listed cube is listed."""
        return all(
            upper_face in self.index(k - 1) and lower_face in self.index(k - 1)
            for k in range(1, self.n + 1)
            for cube in self._grades[k]
            for upper_face, lower_face in cube.facets()
        )


####################################################################################################
# CUBES OF A FAMILY
####################################################################################################


def cubes(family: Family) -> CubicalComplex:
    """All cubes ``[A, B]`` contained in the family, graded by dimension.

    For each member ``A`` the free sets ``D`` grow one coordinate at a time. ``[A, A ∪ D]`` is
    contained iff ``A ∪ D`` is a member and every lower facet ``[A, A ∪ D \\ {d}]`` is contained,
    so a level only extends the sets admitted at the level before and the work stays
    proportional to the number of cubes found.

    Args:
        family: the family of sets

    Returns:
        The face-closed ``CubicalComplex`` of the family.
    """
    full, word = family.ground.full, family.word
    found: List[Cube] = []

    for lower in sorted(family.members, key=popcount):
        outside = full & ~lower
        level = {0}

        while level:
            found.extend(Cube(lower, lower | d) for d in level)
            tried, grown = set(), set()

            for d in level:
                for b in bits(outside & ~d):
                    candidate = d | b
                    if candidate in tried:
                        continue
                    tried.add(candidate)

                    if (word >> (lower | candidate)) & 1 and all(
                        (candidate ^ c) in level for c in bits(candidate)
                    ):
                        grown.add(candidate)

            level = grown

    LOGGER.debug("Found %s cubes for a family of %s members.", len(found), len(family))
    return CubicalComplex(family.ground, found)


def cubes_by_dim(family: Family, k: int) -> Tuple[Cube, ...]:
    """Grade ``k`` of ``cubes(family)``.

    Raises:
        DomainError: if ``k`` is outside ``0..n``.
    """
    if not 0 <= k <= family.n:
        raise DomainError(f"Degree {k} is outside [0, {family.n}].")
    return cubes(family).grade(k)


def maximal_cubes_of(complex_: CubicalComplex) -> List[Cube]:
    """Inclusion-maximal cubes of a face-closed complex, largest dimension first."""
    full = complex_.ground.full
    maximal = [c for c in complex_ if not any(co in complex_ for co in c.cofacets(full))]
    return sorted(maximal, key=lambda c: (-c.dim, c.lower, c.upper))


def maximal_cubes(family: Family) -> List[Cube]:
    """Cubes of the family contained in no strictly larger cube of the family.

    In a face-closed complex a cube inside a larger one is inside one of its cofacets, so only
    cofacets are tested.
    """
    return maximal_cubes_of(cubes(family))


####################################################################################################
# INTERSECTIONS AND REALIZATION
####################################################################################################


def cube_intersect(first: Cube, second: Cube) -> Optional[Cube]:
    """``[A, B] ∩ [C, D] = [A ∪ C, B ∩ D]``, or None when that interval is empty."""
    lower, upper = first.lower | second.lower, first.upper & second.upper
    if lower & ~upper:
        return None
    return Cube(lower, upper)


def realize(cube: Cube, n: int) -> RealizedCube:
    """Coordinate ``i`` is ``{1}`` on ``A``, ``[0, 1]`` on ``B \\ A`` and ``{0}`` elsewhere."""
    ground = GroundSet(n)
    ground.check_mask(cube.upper)

    intervals = []
    for i in range(n):
        b = 1 << i
        if cube.lower & b:
            intervals.append(Interval.POINT1)
        elif cube.upper & b:
            intervals.append(Interval.FULL)
        else:
            intervals.append(Interval.POINT0)
    return RealizedCube(tuple(intervals))


def realized_intersect(first: RealizedCube, second: RealizedCube) -> Optional[RealizedCube]:
    """Coordinate-wise interval intersection, None when ``{0}`` meets ``{1}`` anywhere.

    Raises:
        DomainError: if the cubes live in different dimensions.
    """
    if len(first.intervals) != len(second.intervals):
        raise DomainError("Realized cubes live in different dimensions.")

    meet = []
    for a, b in zip(first.intervals, second.intervals):
        if a is Interval.FULL:
            meet.append(b)
        elif b is Interval.FULL or a is b:
            meet.append(a)
        else:
            return None
    return RealizedCube(tuple(meet))


def union_complex(first: CubicalComplex, second: CubicalComplex) -> CubicalComplex:
    """Graded union of two cube sets."""
    if first.ground != second.ground:
        raise DomainError("Complexes live over different ground sets.")
    return CubicalComplex(first.ground, first.cube_set() | second.cube_set())


def intersect_complex(first: CubicalComplex, second: CubicalComplex) -> CubicalComplex:
    """Graded intersection of two cube sets."""
    if first.ground != second.ground:
        raise DomainError("Complexes live over different ground sets.")
    return CubicalComplex(first.ground, first.cube_set() & second.cube_set())


def star_center(family: Family) -> Optional[Cube]:
    """Common part of all maximal cubes, None if they share no point or the family is empty.

    Boxes share a point iff their iterated intersection is non-empty, so any vertex of the
    returned cube is a star center of ``X(F)``.
    """
    maximal = maximal_cubes(family)
    if not maximal:
        return None

    def meet(acc: Optional[Cube], cube: Cube) -> Optional[Cube]:
        return None if acc is None else cube_intersect(acc, cube)

    return reduce(meet, maximal[1:], maximal[0])  # type: ignore


def is_star_shaped(family: Family) -> bool:
    return star_center(family) is not None


####################################################################################################
# SPECIAL FAMILIES
####################################################################################################


def lemma_family(n: int, k: int) -> Family:
    """Proper subsets of ``[n]`` meeting ``[k]``.

    Its cubical set is ``⋃_{i ≤ k} ⋃_{j ≠ i} |[{i}, [n] \\ {j}]|``.

    Raises:
        DomainError: unless ``2 ≤ n`` and ``1 ≤ k < n``.
    """
    if not 2 <= n <= MAX_GROUND_SIZE or not 1 <= k < n:
        raise DomainError(f"Need 2 <= n and 1 <= k < n, got n={n}, k={k}.")

    low = (1 << k) - 1
    full = (1 << n) - 1
    return Family(GroundSet(n), tuple(m for m in range(full) if m & low))


def lemma_maximal_cubes(n: int, k: int) -> List[Cube]:
    """The cubes ``[{i}, [n] \\ {j}]`` for ``i ≤ k`` and ``j ≠ i``, in ``maximal_cubes`` order."""
    full = (1 << n) - 1
    found = [
        Cube(1 << (i - 1), full & ~(1 << (j - 1)))
        for i in range(1, k + 1)
        for j in range(1, n + 1)
        if j != i
    ]
    return sorted(found, key=lambda c: (-c.dim, c.lower, c.upper))


def decompose_at_max(family: Family) -> Decomposition:
    """Split at the numerically smallest member of maximum cardinality.

    Returns ``(F \\ {A}, F_A)``; the cube sets of the two parts union to the cube set of ``F``
    because every cube with top ``A`` lies in ``F_A`` and no other cube reaches ``A``.

    Raises:
        PreconditionError: for the empty family.
    """
    if not family.members:
        raise PreconditionError("Cannot decompose the empty family.")

    top = max_cardinality(family)
    apex = min(m for m in family.members if popcount(m) == top)
    return Decomposition(rest=family.without(apex), local=subfamily_at(family, apex))


####################################################################################################
# GEOMETRY EXPORT
####################################################################################################


def _quad(cube: Cube, vertex_index: Dict[int, int]) -> str:
    i, j = list(bits(cube.free))
    corners = [cube.lower, cube.lower | i, cube.lower | i | j, cube.lower | j]
    return "f " + " ".join(str(vertex_index[c]) for c in corners)


def to_obj(complex_: CubicalComplex) -> str:
    """Wavefront OBJ text for a complex over ``n ≤ 3``.

    One ``v`` line per vertex, one ``l`` line per edge, one quad ``f`` per square, and a group of
    six quads per solid cube, all in basis order. Coordinates beyond ``n`` are 0.0.

    Raises:
        DomainError: if ``n > 3``.
    """
    if complex_.n > MAX_EXPORT_SIZE:
        raise DomainError(f"OBJ export supports n <= {MAX_EXPORT_SIZE}, got n={complex_.n}.")

    lines = [f"# rootedcubes cubical set, n={complex_.n}, counts={complex_.counts}"]
    vertex_index: Dict[int, int] = {}

    for position, vertex in enumerate(complex_.grade(0), start=1):
        coords = [1.0 if vertex.lower & (1 << i) else 0.0 for i in range(MAX_EXPORT_SIZE)]
        lines.append("v {:.1f} {:.1f} {:.1f}".format(*coords))
        vertex_index[vertex.lower] = position

    if complex_.n >= 1:
        for edge in complex_.grade(1):
            lines.append(f"l {vertex_index[edge.lower]} {vertex_index[edge.upper]}")

    if complex_.n >= 2:
        for square in complex_.grade(2):
            lines.append(_quad(square, vertex_index))

    if complex_.n >= 3:
        for number, solid in enumerate(complex_.grade(3), start=1):
            lines.append(f"g cube_{number}")
            for upper_face, lower_face in solid.facets():
                lines.append(_quad(upper_face, vertex_index))
                lines.append(_quad(lower_face, vertex_index))

    return "\n".join(lines) + "\n"
