"""
Homology
--------

Exact cubical homology over the integers. Boundary matrices are dense ``numpy`` arrays of
``dtype=object`` so every entry is an arbitrary precision Python ``int``; nothing here touches
floating point. The pieces are:

1. ``boundary_matrix``: the operator ``∂_k`` in the basis order of a ``CubicalComplex``
2. ``smith_normal_form``: invariant factors and rank of an integer matrix
3. ``homology_of``: Betti numbers, torsion, Euler characteristic and the acyclic verdict

The sign convention is the product rule. For a cube ``[A, B]`` with free coordinates
``i_1 < ... < i_k`` the column of ``∂_k`` carries ``(-1)^(j-1)`` at ``[A ∪ {i_j}, B]`` and
``-(-1)^(j-1)`` at ``[A, B \\ {i_j}]``.

The alternating-sum identities over cube counts live here as well: ``euler_from_cube_counts``,
``per_set_alternating_sum`` and ``euler_without_empty``.
"""
import logging

from typing import Any, Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from rootedcubes.cubecomplex import CubicalComplex, cubes
from rootedcubes.setfamily import (
    DomainError,
    Family,
    PreconditionError,
    interval_contained,
    is_rooted_member,
    is_simply_rooted,
    popcount,
    submasks,
)


LOGGER = logging.getLogger(__name__)

# dense object array of Python ints
IntegerMatrix = np.ndarray


class ComplexIntegrityError(Exception):
    """A boundary was requested on a complex that is missing faces of its cubes."""

    pass


class SnfResult(NamedTuple):
    """Positive diagonal of the Smith normal form, ``d_1 | d_2 | ... | d_r``, and ``r``."""

    invariant_factors: Tuple[int, ...]
    rank: int


class HomologyReport(NamedTuple):
    """Homology of a cubical set, arrays indexed by degree ``0..n``."""

    betti: List[int]
    torsion: List[List[int]]
    euler_from_cubes: int
    euler_from_betti: int
    connected: bool
    nonempty: bool
    acyclic: bool
    cube_counts: List[int]

    @property
    def reduced_betti(self) -> List[int]:
        """Reduced Betti numbers; ``b_0`` drops by one on a non-empty set."""
        reduced = list(self.betti)
        if self.nonempty:
            reduced[0] -= 1
        return reduced

    def to_dict(self) -> Dict[str, Any]:
        """JSON form with the fixed field order betti, torsion, euler, connected, acyclic,
        cube_counts.
        """
        return {
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
            "euler": self.euler_from_cubes,
            "connected": self.connected,
            "acyclic": self.acyclic,
            "cube_counts": list(self.cube_counts),
        }


####################################################################################################
# BOUNDARY OPERATORS
####################################################################################################


def boundary_matrix(complex_: CubicalComplex, k: int) -> IntegerMatrix:
    """The matrix of ``∂_k``: one column per k-cube, one row per (k-1)-cube, in basis order.

    Args:
        complex_: a face-closed cubical complex
        k: degree in ``1..n``

    Returns:
        Dense integer matrix of shape ``(|C_{k-1}|, |C_k|)``.

    Raises:
        DomainError: if ``k`` is outside ``1..n``.
        ComplexIntegrityError: if a facet of a k-cube is not in the complex.
    """
    if not 1 <= k <= complex_.n:
        raise DomainError(f"Boundary degree {k} is outside [1, {complex_.n}].")

    columns = complex_.grade(k)
    rows = complex_.index(k - 1)
    matrix = np.zeros((len(rows), len(columns)), dtype=object)

    for col, cube in enumerate(columns):
        for j, (upper_face, lower_face) in enumerate(cube.facets()):
            sign = 1 if j % 2 == 0 else -1
            try:
                matrix[rows[upper_face], col] = sign
                matrix[rows[lower_face], col] = -sign
            except KeyError as e:
                raise ComplexIntegrityError(
                    f"Cube {cube} has a facet {e.args[0]} outside the complex."
                ) from e

    return matrix


####################################################################################################
# SMITH NORMAL FORM
####################################################################################################


def _pivot_position(work: IntegerMatrix, t: int) -> Optional[Tuple[int, int]]:
    """Smallest absolute nonzero entry of the lower-right block, ties to lowest row then column."""
    positions = np.argwhere(work[t:, t:] != 0)
    if positions.size == 0:
        return None
    r, c = min(positions.tolist(), key=lambda rc: (abs(work[t + rc[0], t + rc[1]]), rc[0], rc[1]))
    return t + r, t + c


def _swap_into(work: IntegerMatrix, t: int, r: int, c: int) -> None:
    if r != t:
        work[[t, r], :] = work[[r, t], :]
    if c != t:
        work[:, [t, c]] = work[:, [c, t]]


def smith_normal_form(matrix: Any) -> SnfResult:
    """Invariant factors and rank of an integer matrix.

    Repeatedly moves the smallest absolute nonzero entry to the diagonal, reduces its row and
    column by integer division, re-pivots on any remainder, and when the row and column are clear
    adds a row holding an entry the pivot does not divide. All arithmetic is exact.

    Args:
        matrix: anything ``numpy`` reads as a 2-d integer array

    Returns:
        ``SnfResult`` with the positive diagonal entries forming a divisibility chain.
    """
    work = np.array(matrix, dtype=object)
    if work.ndim != 2:
        raise DomainError(f"Expected a 2-d matrix, got {work.ndim} dimensions.")

    work = work.copy()
    rows, cols = work.shape
    t = 0

    while t < min(rows, cols):
        pivot = _pivot_position(work, t)
        if pivot is None:
            break
        _swap_into(work, t, *pivot)

        while True:
            p = work[t, t]

            for r in np.nonzero(work[t + 1 :, t] != 0)[0] + t + 1:
                work[r, t:] = work[r, t:] - (work[r, t] // p) * work[t, t:]

            for c in np.nonzero(work[t, t + 1 :] != 0)[0] + t + 1:
                work[t:, c] = work[t:, c] - (work[t, c] // p) * work[t:, t]

            leftovers = [(abs(work[r, t]), r, t) for r in range(t + 1, rows) if work[r, t] != 0]
            leftovers += [(abs(work[t, c]), t, c) for c in range(t + 1, cols) if work[t, c] != 0]
            if leftovers:
                _, r, c = min(leftovers)
                _swap_into(work, t, r, c)
                continue

            undivided = np.argwhere(work[t + 1 :, t + 1 :] % p != 0)
            if undivided.size:
                r = t + 1 + int(undivided[0][0])
                work[t, t:] = work[t, t:] + work[r, t:]
                continue

            break

        t += 1

    factors = tuple(abs(int(work[k, k])) for k in range(t))
    return SnfResult(invariant_factors=factors, rank=len(factors))


####################################################################################################
# HOMOLOGY
####################################################################################################


def homology_of_complex(complex_: CubicalComplex) -> HomologyReport:
    """Homology of a face-closed complex.

    ``b_k = |C_k| - rank ∂_k - rank ∂_{k+1}`` and the torsion in degree ``k`` is the invariant
    factors of ``∂_{k+1}`` above 1. Degrees above the complex dimension, and degrees whose
    boundary has an empty side, skip matrix work.
    """
    n, counts = complex_.n, complex_.counts
    snf: Dict[int, SnfResult] = {}

    for k in range(1, complex_.dimension + 1):
        if counts[k] == 0 or counts[k - 1] == 0:
            snf[k] = SnfResult(invariant_factors=(), rank=0)
        else:
            snf[k] = smith_normal_form(boundary_matrix(complex_, k))
            LOGGER.debug("Degree %s boundary rank %s.", k, snf[k].rank)

    def rank(k: int) -> int:
        return snf[k].rank if k in snf else 0

    betti = [counts[k] - rank(k) - rank(k + 1) for k in range(n + 1)]
    torsion = [
        [d for d in snf[k + 1].invariant_factors if d > 1] if k + 1 in snf else []
        for k in range(n + 1)
    ]

    nonempty = counts[0] > 0
    connected = betti[0] <= 1
    acyclic = (
        nonempty
        and connected
        and betti[0] == 1
        and all(b == 0 for b in betti[1:])
        and not any(torsion)
    )

    return HomologyReport(
        betti=betti,
        torsion=torsion,
        euler_from_cubes=sum((-1) ** k * c for k, c in enumerate(counts)),
        euler_from_betti=sum((-1) ** k * b for k, b in enumerate(betti)),
        connected=connected,
        nonempty=nonempty,
        acyclic=acyclic,
        cube_counts=counts,
    )


def homology_of(family: Family) -> HomologyReport:
    """Homology of the cubical set ``X(F)``; the empty family gives an empty, non-acyclic set."""
    return homology_of_complex(cubes(family))


####################################################################################################
# ALTERNATING SUMS
####################################################################################################


def euler_from_cube_counts(family: Family) -> int:
    """``Σ_k (-1)^k |C_k(F)|``."""
    return sum((-1) ** k * c for k, c in enumerate(cubes(family).counts))


def top_counts(family: Family, mask: int) -> List[int]:
    """``|C_k(F, A)|`` for ``k = 0..|A|``: cubes of dimension ``k`` whose top set is ``A``.

    Raises:
        PreconditionError: if ``A`` is empty or not a member.
    """
    family.ground.check_mask(mask)
    if mask == 0 or mask not in family:
        raise PreconditionError("Top counts need a non-empty member of the family.")

    size = popcount(mask)
    counts = [0] * (size + 1)
    for lower in submasks(mask):
        if interval_contained(family, lower, mask):
            counts[size - popcount(lower)] += 1
    return counts


def per_set_alternating_sum(family: Family, mask: int) -> int:
    """``Σ_k (-1)^k |C_k(F, A)|``; zero for simply rooted families containing the empty set."""
    return sum((-1) ** k * c for k, c in enumerate(top_counts(family, mask)))


def euler_without_empty(family: Family) -> int:
    """Euler characteristic of ``X(F)`` from root data, for simply rooted ``F`` without ∅.

    ``c_0 = 1`` and ``c_k`` counts the members of size ``k`` whose elements are all roots; the
    value is ``1 - Σ_k (-1)^k c_k``.

    Raises:
        PreconditionError: if ``F`` is empty, contains ∅, or is not simply rooted.
    """
    if not family.members:
        raise PreconditionError("The family must be non-empty.")
    if family.contains_empty:
        raise PreconditionError("The family must not contain the empty set.")
    if not is_simply_rooted(family):
        raise PreconditionError("The family must be simply rooted.")

    c = [1] + [0] * family.n
    for member in family.members:
        if is_rooted_member(family, member):
            c[popcount(member)] += 1

    return 1 - sum((-1) ** k * ck for k, ck in enumerate(c))
