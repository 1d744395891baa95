"""
Set families
------------

Exact representation of families of subsets of the ground set ``[n] = {1, ..., n}``. A subset is
an integer bitmask where element ``i`` is present iff bit ``i - 1`` is set. The primary objects are:

1. The ``GroundSet``
2. The ``Family``

A ``Family`` is immutable and always held in canonical form: a strictly increasing tuple of masks.
Two families are equal exactly when their ground sets and member tuples are equal, so families
hash cheaply during enumeration. Membership is answered from ``Family.word``, an integer with bit
``m`` set iff mask ``m`` is a member.

The family-level predicates and maps are module functions: ``interval_contained``,
``is_union_closed``, ``is_simply_rooted``, ``complement``, ``union_closure``, ``phi``, ``roots``,
``subfamily_at`` and ``max_cardinality``. The JSON text format
``{"n": 3, "sets": [[], [1], [2], [1, 3]]}`` is handled by ``parse_family``, ``read_family``,
``read_families`` (one family per line in batch files) and ``family_to_json``.
"""
import json
import logging

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Tuple, Union


LOGGER = logging.getLogger(__name__)

# subsets of [n] fit one machine word up to this size
MAX_GROUND_SIZE = 20


class DomainError(ValueError):
    """Value outside the supported domain e.g., a mask that is not a subset of [n]."""

    pass


class PreconditionError(ValueError):
    """An operation was called outside the regime where it is defined."""

    pass


####################################################################################################
# BITMASK UTILITIES
####################################################################################################


def popcount(mask: int) -> int:
    """Number of elements in the subset encoded by ``mask``."""
    return bin(mask).count("1")


def mask_of(elements: Iterable[int]) -> int:
    """Encode 1-based elements as a bitmask.

    Args:
        elements: iterable of 1-based element labels

    Returns:
        The bitmask with bit ``i - 1`` set for every element ``i``.
    """
    mask = 0
    for element in elements:
        mask |= 1 << (element - 1)
    return mask


def elements_of(mask: int) -> List[int]:
    """Decode a bitmask into its sorted 1-based elements."""
    elements = []
    label = 1
    while mask:
        if mask & 1:
            elements.append(label)
        mask >>= 1
        label += 1
    return elements


def bits(mask: int) -> Iterator[int]:
    """Single-bit masks of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in decreasing numeric order, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


####################################################################################################
# CORE TYPES
####################################################################################################


@dataclass(frozen=True)
class GroundSet:
    """The ground set ``[n]``; construction rejects ``n`` outside ``1..MAX_GROUND_SIZE``."""

    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise DomainError(f"Ground size must be an integer, got {self.n!r}.")

        if not 1 <= self.n <= MAX_GROUND_SIZE:
            raise DomainError(f"Ground size must be in [1, {MAX_GROUND_SIZE}], got {self.n}.")

    @property
    def full(self) -> int:
        """Mask of the whole ground set."""
        return (1 << self.n) - 1

    @property
    def universe(self) -> int:
        """Number of subsets of the ground set, ``2^n``."""
        return 1 << self.n

    def check_mask(self, mask: int) -> int:
        """Return ``mask`` unchanged if it encodes a subset of ``[n]``.

        Raises:
            DomainError: if the mask is negative or has bits beyond ``n``.
        """
        if not 0 <= mask <= self.full:
            raise DomainError(f"Mask {mask} is not a subset of [{self.n}].")
        return mask


@dataclass(frozen=True)
class Family:
    """A family of subsets of ``[n]`` in canonical form.

    Use the ``from_masks``, ``from_sets`` or ``from_word`` constructors for unsorted input; direct
    construction requires strictly increasing members.
    """

    ground: GroundSet
    members: Tuple[int, ...] = ()
    word: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        members = tuple(self.members)

        for previous, current in zip(members, members[1:]):
            if previous >= current:
                raise DomainError("Family members must be strictly increasing masks.")

        if members:
            self.ground.check_mask(members[0])
            self.ground.check_mask(members[-1])

        word = 0
        for member in members:
            word |= 1 << member

        object.__setattr__(self, "members", members)
        object.__setattr__(self, "word", word)

    ################################################################################################
    # CONSTRUCTORS
    ################################################################################################

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "Family":
        """Canonical family from any iterable of masks, duplicates merged."""
        ground = GroundSet(n)
        return cls(ground, tuple(sorted({ground.check_mask(m) for m in masks})))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Family":
        """Canonical family from 1-based element collections, duplicates merged.

        Raises:
            DomainError: if an element is outside ``[n]``.
        """
        masks = []
        for elements in sets:
            elements = list(elements)
            if any(not 1 <= e <= n for e in elements):
                raise DomainError(f"Elements {elements} are not all in [1, {n}].")
            masks.append(mask_of(elements))
        return cls.from_masks(n, masks)

    @classmethod
    def from_word(cls, n: int, word: int) -> "Family":
        """Family whose members are the set bits of the membership ``word``."""
        ground = GroundSet(n)
        if word < 0 or word >> ground.universe:
            raise DomainError(f"Membership word {word} has bits beyond 2^{n} subsets.")
        return cls(ground, tuple(m for m in range(ground.universe) if (word >> m) & 1))

    @classmethod
    def power_set(cls, n: int) -> "Family":
        """The full power set ``2^[n]``."""
        return cls(GroundSet(n), tuple(range(1 << n)))

    @classmethod
    def empty(cls, n: int) -> "Family":
        """The family with no members."""
        return cls(GroundSet(n))

    ################################################################################################
    # CONTAINER PROTOCOL AND PROPERTIES
    ################################################################################################

    def __contains__(self, mask: object) -> bool:
        if not isinstance(mask, int) or mask < 0:
            return False
        return bool((self.word >> mask) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def n(self) -> int:
        """Size of the ground set."""
        return self.ground.n

    @property
    def contains_empty(self) -> bool:
        """True if the empty set is a member."""
        return 0 in self

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Canonical ordering key used when sorting reports."""
        return (self.n, self.members)

    def sets(self) -> List[List[int]]:
        """Members as sorted lists of 1-based elements, in canonical order."""
        return [elements_of(m) for m in self.members]

    ################################################################################################
    # FAMILY ALGEBRA
    ################################################################################################

    def _same_ground(self, other: "Family") -> None:
        if self.ground != other.ground:
            raise DomainError(f"Ground sets differ: [{self.n}] vs. [{other.n}].")

    def with_member(self, mask: int) -> "Family":
        """Copy of the family with ``mask`` added."""
        self.ground.check_mask(mask)
        return Family.from_word(self.n, self.word | (1 << mask))

    def without(self, mask: int) -> "Family":
        """Copy of the family with ``mask`` removed, if present."""
        self.ground.check_mask(mask)
        return Family.from_word(self.n, self.word & ~(1 << mask))

    def union(self, other: "Family") -> "Family":
        self._same_ground(other)
        return Family.from_word(self.n, self.word | other.word)

    def intersection(self, other: "Family") -> "Family":
        self._same_ground(other)
        return Family.from_word(self.n, self.word & other.word)

    def difference(self, other: "Family") -> "Family":
        self._same_ground(other)
        return Family.from_word(self.n, self.word & ~other.word)


####################################################################################################
# PREDICATES
####################################################################################################


def interval_contained(family: Family, lower: int, upper: int) -> bool:
    """True iff ``lower ⊆ upper`` and every set between them is a member of ``family``.

    An interval with ``lower ⊄ upper`` is empty and reported as not contained; the cube
    intersection formula relies on that to signal the empty cube.

    Args:
        family: the family of sets
        lower: bottom of the interval
        upper: top of the interval

    Returns:
        Containment of the interval ``[lower, upper]`` in the family.

    Raises:
        DomainError: if either mask is not a subset of the ground set.
    """
    family.ground.check_mask(lower)
    family.ground.check_mask(upper)

    if lower & ~upper:
        return False

    word = family.word
    return all((word >> (lower | d)) & 1 for d in submasks(upper & ~lower))


def is_union_closed(family: Family) -> bool:
    """True iff all pairwise unions of members are members (vacuous for 0 or 1 members)."""
    members, word = family.members, family.word
    for i, a in enumerate(members):
        for b in members[i + 1 :]:
            if not (word >> (a | b)) & 1:
                return False
    return True


def roots(family: Family, mask: int) -> int:
    """Roots of a non-empty set: the elements ``i`` with ``[{i}, mask] ⊆ family``.

    Args:
        family: the family of sets
        mask: a non-empty set, usually a member

    Returns:
        The root set as a mask.

    Raises:
        PreconditionError: if ``mask`` is empty.
    """
    family.ground.check_mask(mask)
    if mask == 0:
        raise PreconditionError("The empty set has no roots.")

    found = 0
    for single in bits(mask):
        if interval_contained(family, single, mask):
            found |= single
    return found


def is_simply_rooted(family: Family) -> bool:
    """True iff every non-empty member has at least one root.

    Whether the empty set is a member has no influence: no interval ``[{i}, A]`` contains it.
    """
    return all(roots(family, a) for a in family.members if a)


def is_rooted_member(family: Family, mask: int) -> bool:
    """True iff every element of the non-empty member ``mask`` is a root."""
    return roots(family, mask) == mask


####################################################################################################
# MAPS
####################################################################################################


def complement(family: Family) -> Family:
    """``2^[n]`` minus the family; an involution."""
    return Family.power_set(family.n).difference(family)


def union_closure(family: Family) -> Family:
    """Smallest union-closed family containing ``family``."""
    closed = set(family.members)
    frontier = list(closed)

    while frontier:
        fresh = []
        for a in frontier:
            for b in list(closed):
                joined = a | b
                if joined not in closed:
                    closed.add(joined)
                    fresh.append(joined)
        frontier = fresh

    return Family(family.ground, tuple(sorted(closed)))


def interval_family(n: int, lower: int, upper: int) -> Family:
    """The interval ``[lower, upper]`` as a family; empty when ``lower ⊄ upper``."""
    ground = GroundSet(n)
    ground.check_mask(lower)
    ground.check_mask(upper)

    if lower & ~upper:
        return Family(ground)

    return Family.from_masks(n, (lower | d for d in submasks(upper & ~lower)))


def _require_member(family: Family, mask: int) -> None:
    family.ground.check_mask(mask)
    if mask not in family:
        raise PreconditionError(f"{elements_of(mask)} is not a member of the family.")


def phi(family: Family, mask: int, checked: bool = True) -> int:
    """Union of all subsets of ``mask`` that are not members.

    This is only defined for simply rooted families, where the complement is union-closed and the
    result is either empty or the largest non-member below ``mask``.

    Args:
        family: a simply rooted family
        mask: a member of the family
        checked: verify that the family is simply rooted, set to False when the caller already
            filtered on that predicate.

    Returns:
        The mask of the union, 0 when every subset of ``mask`` is a member.

    Raises:
        PreconditionError: if ``mask`` is not a member or the family is not simply rooted.
    """
    _require_member(family, mask)
    if checked and not is_simply_rooted(family):
        raise PreconditionError("phi is only defined on simply rooted families.")

    result = 0
    word = family.word
    for sub in submasks(mask):
        if not (word >> sub) & 1:
            result |= sub
    return result


def subfamily_at(family: Family, mask: int) -> Family:
    """The members ``B`` whose whole interval ``[B, mask]`` lies in the family.

    Raises:
        PreconditionError: if ``mask`` is not a member.
    """
    _require_member(family, mask)
    return Family.from_masks(
        family.n, (b for b in submasks(mask) if interval_contained(family, b, mask))
    )


def max_cardinality(family: Family) -> int:
    """Largest member size.

    Raises:
        PreconditionError: for the empty family.
    """
    if not family.members:
        raise PreconditionError("The empty family has no largest member.")
    return max(popcount(m) for m in family.members)


####################################################################################################
# JSON TEXT FORMAT
####################################################################################################


def family_to_json(family: Family) -> Dict[str, Any]:
    """Family as ``{"n": int, "sets": [[elements], ...]}`` in canonical member order."""
    return {"n": family.n, "sets": family.sets()}


def parse_family(data: Union[str, Dict[str, Any]]) -> Family:
    """Parse the family JSON format; ``sets`` order is irrelevant, duplicates are rejected.

    Args:
        data: JSON text or an already decoded object

    Returns:
        The canonical family.

    Raises:
        DomainError: for malformed JSON, missing keys, bad elements or duplicate sets.
    """
    try:
        obj = json.loads(data) if isinstance(data, str) else data
    except ValueError as e:
        raise DomainError(f"Family JSON does not parse: {e}") from e

    if not isinstance(obj, dict) or "n" not in obj or "sets" not in obj:
        raise DomainError('Family JSON must be an object with "n" and "sets" keys.')

    ground = GroundSet(obj["n"])
    sets = obj["sets"]
    if not isinstance(sets, list):
        raise DomainError('"sets" must be a list of element lists.')

    masks = []
    for elements in sets:
        if not isinstance(elements, list):
            raise DomainError(f"Set {elements!r} is not a list of elements.")

        for e in elements:
            if isinstance(e, bool) or not isinstance(e, int) or not 1 <= e <= ground.n:
                raise DomainError(f"Element {e!r} is not in [1, {ground.n}].")

        if len(set(elements)) != len(elements):
            raise DomainError(f"Set {elements} repeats an element.")

        masks.append(mask_of(elements))

    if len(set(masks)) != len(masks):
        raise DomainError("Family JSON lists the same set more than once.")

    return Family.from_masks(ground.n, masks)


def _read_text(path: Union[str, Path]) -> str:
    """Whole file text; undecodable bytes are a DomainError like any other bad input."""
    try:
        with open(path, "r", encoding="utf-8") as fstream:
            return fstream.read()
    except UnicodeDecodeError as e:
        raise DomainError(f"{path} is not UTF-8 text: {e}") from e


def read_family(path: Union[str, Path]) -> Family:
    """Read a family JSON file.

    Raises:
        OSError: if the file cannot be read.
        DomainError: if the contents are not UTF-8 or do not parse.
    """
    LOGGER.debug("Reading family file: %s", path)
    return parse_family(_read_text(path))


def read_families(path: Union[str, Path]) -> List[Family]:
    """Read a family file or a batch file holding one family JSON object per line.

    A file whose whole text is a single JSON object gives one family; otherwise every non-blank
    line is parsed on its own.

    Raises:
        OSError: if the file cannot be read.
        DomainError: if the file is not UTF-8 or any family does not parse; the message names
            the line.
    """
    LOGGER.debug("Reading family batch file: %s", path)
    text = _read_text(path)

    try:
        whole = json.loads(text)
    except ValueError:
        whole = None

    if whole is not None:
        return [parse_family(whole)]

    families = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            families.append(parse_family(line))
        except DomainError as e:
            raise DomainError(f"{path}, line {lineno}: {e}") from e

    if not families:
        raise DomainError(f"{path} holds no family.")
    return families
