"""Bit-encoded set families over a labelled ground set.

A :class:`GroundSet` fixes an ordered universe of element labels; element
index ``i`` always refers to ``labels[i]``.  A :class:`MemberSet` is an
immutable subset of the ground set stored as an arbitrary-width bit vector
(Python integers give machine-word blocks with no fixed cap).  A
:class:`SetFamily` keeps distinct members in canonical order.

The canonical order used everywhere (family members, witness lists) is
lexicographic on the ascending index tuple of each set; this is the global
tie-breaking rule.

A *t-star* of a family ``F`` at a t-element set ``T`` is the subfamily of
members containing ``T``.  :func:`largest_stars` computes the maximum
t-star size together with every maximizing ``T``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from .errors import EncodingError, ParameterError, ResourceError

DEFAULT_MAX_GROUND = 1_048_576
MAX_GROUND_ENV = "STARLAB_MAX_GROUND"


def max_ground() -> int:
    """Active guard on ground-set width, overridable via STARLAB_MAX_GROUND."""
    raw = os.environ.get(MAX_GROUND_ENV)
    if raw is None:
        return DEFAULT_MAX_GROUND
    try:
        value = int(raw)
    except ValueError as exc:
        raise ResourceError(f"{MAX_GROUND_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ResourceError(f"{MAX_GROUND_ENV} must be positive, got {value}")
    return value


def bits_of(indices: Iterable[int]) -> int:
    """Fold element indices into a bit vector."""
    bits = 0
    for i in indices:
        bits |= 1 << i
    return bits


def iter_indices(bits: int) -> Iterator[int]:
    """Yield set-bit positions in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def index_tuple(bits: int) -> tuple[int, ...]:
    """Ascending index tuple of a bit vector; the canonical sort key."""
    return tuple(iter_indices(bits))


@dataclass(frozen=True, eq=False)
class GroundSet:
    """Ordered universe of distinct element labels."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.labels, tuple):
            object.__setattr__(self, "labels", tuple(self.labels))
        guard = max_ground()
        if len(self.labels) > guard:
            raise ResourceError(
                f"ground set of {len(self.labels)} elements exceeds guard {guard}"
            )
        index: dict[str, int] = {}
        for i, label in enumerate(self.labels):
            if not isinstance(label, str):
                raise EncodingError(f"labels must be strings, got {label!r}")
            if label in index:
                raise EncodingError(f"duplicate label {label!r}")
            index[label] = i
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_hash", hash(self.labels))

    @property
    def size(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]  # type: ignore[attr-defined]
        except KeyError:
            raise EncodingError(f"unknown label {label!r}") from None

    def member_from_indices(self, indices: Iterable[int]) -> MemberSet:
        bits = 0
        for i in indices:
            if not 0 <= i < self.size:
                raise EncodingError(f"element index {i} out of range [0, {self.size})")
            bits |= 1 << i
        return MemberSet.of_bits(self, bits)

    def member_from_labels(self, labels: Iterable[str]) -> MemberSet:
        return MemberSet.of_bits(self, bits_of(self.index_of(lab) for lab in labels))

    def empty_member(self) -> MemberSet:
        return MemberSet.of_bits(self, 0)

    def full_member(self) -> MemberSet:
        return MemberSet.of_bits(self, (1 << self.size) - 1)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, GroundSet):
            return NotImplemented
        return self.labels == other.labels

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __repr__(self) -> str:  # keep huge universes readable
        if self.size <= 8:
            return f"GroundSet({list(self.labels)!r})"
        return f"GroundSet(<{self.size} labels>)"


@dataclass(frozen=True, eq=False)
class MemberSet:
    """Immutable subset of a ground set with cached cardinality."""

    ground: GroundSet
    bits: int
    cardinality: int

    @classmethod
    def of_bits(cls, ground: GroundSet, bits: int) -> MemberSet:
        if bits < 0 or bits >> ground.size:
            raise EncodingError("bit vector has bits outside the ground set")
        return cls(ground, bits, bits.bit_count())

    def indices(self) -> tuple[int, ...]:
        return index_tuple(self.bits)

    def labels(self) -> tuple[str, ...]:
        return tuple(self.ground.labels[i] for i in self.indices())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MemberSet):
            return NotImplemented
        return self.bits == other.bits and self.ground == other.ground

    def __hash__(self) -> int:
        return hash((self.bits, self.ground))

    def __repr__(self) -> str:
        return f"MemberSet({{{', '.join(self.labels())}}})"


@dataclass(frozen=True, eq=False)
class SetFamily:
    """Distinct member sets over one ground set, in canonical order."""

    ground: GroundSet
    members: tuple[MemberSet, ...]
    max_size: int

    @classmethod
    def from_bits(cls, ground: GroundSet, bits_iter: Iterable[int]) -> SetFamily:
        unique = sorted(set(bits_iter), key=index_tuple)
        members = tuple(MemberSet.of_bits(ground, b) for b in unique)
        max_size = max((m.cardinality for m in members), default=0)
        return cls(ground, members, max_size)

    def __len__(self) -> int:
        return len(self.members)

    def member_bits(self) -> tuple[int, ...]:
        return tuple(m.bits for m in self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.ground == other.ground and self.member_bits() == other.member_bits()

    def __hash__(self) -> int:
        return hash((self.ground, self.member_bits()))

    def __repr__(self) -> str:
        return f"SetFamily(<{len(self.members)} sets over {self.ground.size} elements>)"


@dataclass(frozen=True)
class StarReport:
    """Largest t-star size together with all maximizing t-sets.

    When no member has t elements the size is 0 and the witness list is
    empty (the empty set is not a t-set for t >= 1, so it is never
    reported as a witness).
    """

    t: int
    l_value: int
    witnesses: tuple[MemberSet, ...]


class BuildResult(NamedTuple):
    family: SetFamily
    dedup_count: int


# Declarative member filters for subfamily_where.


@dataclass(frozen=True)
class ContainsSet:
    required: MemberSet


@dataclass(frozen=True)
class IntersectsAtLeast:
    other: MemberSet
    minimum: int


@dataclass(frozen=True)
class SizeEquals:
    size: int


Predicate = Union[ContainsSet, IntersectsAtLeast, SizeEquals]


def _require_same_ground(a: GroundSet, b: GroundSet, what: str) -> None:
    if a != b:
        raise EncodingError(f"{what} require a common ground set")


def _require_level(t: int) -> None:
    if t < 1:
        raise ParameterError(f"intersection level t must be >= 1, got {t}")


def build_family(labels: Sequence[str], members: Sequence[Sequence[int]]) -> BuildResult:
    """Encode index lists as a canonical family; duplicates collapse.

    Returns the family together with the number of collapsed duplicates.
    """
    ground = GroundSet(tuple(labels))
    seen: set[int] = set()
    for member in members:
        bits = 0
        for i in member:
            if not 0 <= i < ground.size:
                raise EncodingError(
                    f"member index {i} out of range for universe of {ground.size}"
                )
            bits |= 1 << i
        seen.add(bits)
    family = SetFamily.from_bits(ground, seen)
    return BuildResult(family, len(members) - len(family.members))


def t_intersects(a: MemberSet, b: MemberSet, t: int) -> bool:
    """True iff the two sets share at least t elements."""
    _require_level(t)
    _require_same_ground(a.ground, b.ground, "intersection tests")
    return (a.bits & b.bits).bit_count() >= t


def star_of(family: SetFamily, t_set: MemberSet) -> SetFamily:
    """Subfamily of members containing the given set, order preserved."""
    _require_same_ground(family.ground, t_set.ground, "star extraction")
    tb = t_set.bits
    members = tuple(m for m in family.members if m.bits & tb == tb)
    max_size = max((m.cardinality for m in members), default=0)
    return SetFamily(family.ground, members, max_size)


def star_counts(family: SetFamily, t: int) -> dict[int, int]:
    """Star size for every t-set contained in at least one member.

    Any t-set outside this map has an empty star.
    """
    _require_level(t)
    return star_counts_from_bits((m.bits for m in family.members), t)


def star_counts_from_bits(bits_iter: Iterable[int], t: int) -> dict[int, int]:
    counts: dict[int, int] = {}
    for bits in bits_iter:
        if bits.bit_count() < t:
            continue
        for combo in itertools.combinations(index_tuple(bits), t):
            tb = bits_of(combo)
            counts[tb] = counts.get(tb, 0) + 1
    return counts


def largest_stars(family: SetFamily, t: int) -> StarReport:
    """Maximum t-star size and the complete set of maximizing t-sets.

    Only t-subsets of members can carry a non-empty star, so they are the
    candidate witnesses; exhaustiveness over all other t-sets is vacuous.
    """
    counts = star_counts(family, t)
    if not counts:
        return StarReport(t=t, l_value=0, witnesses=())
    l_value = max(counts.values())
    winning = sorted((tb for tb, c in counts.items() if c == l_value), key=index_tuple)
    witnesses = tuple(MemberSet.of_bits(family.ground, tb) for tb in winning)
    return StarReport(t=t, l_value=l_value, witnesses=witnesses)


def is_t_transversal(t_set: MemberSet, family: SetFamily, t: int) -> bool:
    """True iff the set t-intersects every member (vacuously true if empty)."""
    _require_level(t)
    _require_same_ground(t_set.ground, family.ground, "transversal tests")
    tb = t_set.bits
    return all((tb & m.bits).bit_count() >= t for m in family.members)


def common_core(family: SetFamily) -> MemberSet:
    """Intersection of all members; the full ground set for an empty family.

    The vacuous-intersection convention means triviality tests must also
    require the family to be non-empty.
    """
    if not family.members:
        return family.ground.full_member()
    bits = -1
    for m in family.members:
        bits &= m.bits
    return MemberSet.of_bits(family.ground, bits)


def subfamily_where(family: SetFamily, predicate: Predicate) -> SetFamily:
    """Canonical subfamily of members satisfying a declarative filter."""
    if isinstance(predicate, ContainsSet):
        _require_same_ground(family.ground, predicate.required.ground, "filters")
        rb = predicate.required.bits
        keep = [m for m in family.members if m.bits & rb == rb]
    elif isinstance(predicate, IntersectsAtLeast):
        _require_same_ground(family.ground, predicate.other.ground, "filters")
        ob, q = predicate.other.bits, predicate.minimum
        keep = [m for m in family.members if (m.bits & ob).bit_count() >= q]
    elif isinstance(predicate, SizeEquals):
        keep = [m for m in family.members if m.cardinality == predicate.size]
    else:
        raise ParameterError(f"unknown predicate form: {predicate!r}")
    max_size = max((m.cardinality for m in keep), default=0)
    return SetFamily(family.ground, tuple(keep), max_size)
