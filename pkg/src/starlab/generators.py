"""Canonical constructors for the standard family classes.

Each generator emits a :class:`~starlab.core.SetFamily` over a ground set
of structured labels:

* atoms ``"1"``, ``"2"``, ... for levels and power sets;
* pairs ``"(x,y)"`` for integer sequences, partial permutations, multisets
  (element, copy index) and compositions (position, part value);
* part labels ``"{a,b,...}"`` for set partitions.

All counting is exact; Stirling numbers of the second kind come from the
two-term recurrence with arbitrary-precision integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import GroundSet, SetFamily, bits_of
from .errors import ParameterError, ResourceError

DEFAULT_MEMBER_CAP = 1_000_000
DEFAULT_PARTITION_CAP = 12

CLASS_TAGS = (
    "level",
    "powerset",
    "sequences",
    "permutations",
    "multisets",
    "compositions",
    "partitions",
    "example1",
)


def pair_label(x: object, y: object) -> str:
    return f"({x},{y})"


def part_label(elements: Sequence[int]) -> str:
    return "{" + ",".join(str(e) for e in sorted(elements)) + "}"


def atoms_ground(n: int) -> GroundSet:
    """Ground set of atoms "1".."n"."""
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    return GroundSet(tuple(str(i) for i in range(1, n + 1)))


def single_set_family(n: int) -> SetFamily:
    """The one-member family {[n]}, a common base for sequence families."""
    ground = atoms_ground(n)
    return SetFamily.from_bits(ground, [(1 << n) - 1])


def gen_level(n: int, r: int) -> SetFamily:
    """All r-element subsets of [n]; empty when r > n."""
    if n < 0 or r < 0:
        raise ParameterError(f"level needs n, r >= 0, got n={n}, r={r}")
    ground = atoms_ground(n)
    return SetFamily.from_bits(
        ground, (bits_of(c) for c in itertools.combinations(range(n), r))
    )


def gen_powerset(n: int) -> SetFamily:
    """All subsets of [n]."""
    if n < 0:
        raise ParameterError(f"powerset needs n >= 0, got {n}")
    if n > 20:
        raise ResourceError(f"powerset of [{n}] exceeds the desk-scale cap of 2^20 sets")
    ground = atoms_ground(n)
    return SetFamily.from_bits(ground, range(1 << n))


def _sequence_ground(base: SetFamily, m: int) -> tuple[GroundSet, list[int], dict[tuple[int, int], int]]:
    """Pair ground over the atoms that occur in some base member."""
    used = 0
    for member in base.members:
        used |= member.bits
    atoms = [i for i in range(base.ground.size) if used >> i & 1]
    labels = []
    position: dict[tuple[int, int], int] = {}
    for a in atoms:
        for y in range(1, m + 1):
            position[(a, y)] = len(labels)
            labels.append(pair_label(base.ground.labels[a], y))
    return GroundSet(tuple(labels)), atoms, position


def gen_sequences(base: SetFamily, m: int, member_cap: int = DEFAULT_MEMBER_CAP) -> SetFamily:
    """Value assignments over each base member: for X in the base, all sets
    {(x, y_x) : x in X} with values y_x in [m].

    An empty base yields the empty family, and an empty member contributes
    nothing; members arising from distinct base sets are distinct, overlaps
    are deduplicated.
    """
    if m < 1:
        raise ParameterError(f"sequences need m >= 1, got {m}")
    total = sum(m**member.cardinality for member in base.members if member.cardinality)
    if total > member_cap:
        raise ResourceError(
            f"sequence family would have {total} members, over the cap {member_cap}"
        )
    ground, _, position = _sequence_ground(base, m)
    all_bits = []
    for member in base.members:
        idxs = member.indices()
        if not idxs:
            continue
        for values in itertools.product(range(1, m + 1), repeat=len(idxs)):
            all_bits.append(bits_of(position[(a, y)] for a, y in zip(idxs, values)))
    return SetFamily.from_bits(ground, all_bits)


def gen_permutations(base: SetFamily, m: int, member_cap: int = DEFAULT_MEMBER_CAP) -> SetFamily:
    """Like :func:`gen_sequences` but with pairwise-distinct values, i.e.
    injections from each base member into [m]; empty when every base
    member is larger than m."""
    if m < 1:
        raise ParameterError(f"permutations need m >= 1, got {m}")
    total = 0
    for member in base.members:
        r = member.cardinality
        if 0 < r <= m:
            count = 1
            for j in range(r):
                count *= m - j
            total += count
    if total > member_cap:
        raise ResourceError(
            f"permutation family would have {total} members, over the cap {member_cap}"
        )
    ground, _, position = _sequence_ground(base, m)
    all_bits = []
    for member in base.members:
        idxs = member.indices()
        if not idxs or len(idxs) > m:
            continue
        for values in itertools.permutations(range(1, m + 1), len(idxs)):
            all_bits.append(bits_of(position[(a, y)] for a, y in zip(idxs, values)))
    return SetFamily.from_bits(ground, all_bits)


def gen_multisets(n: int, r: int) -> SetFamily:
    """Multisets of total size r over [n], encoded as (value, copy) pairs.

    A multiset containing a with multiplicity q occupies (a,1)..(a,q), so
    two encodings share exactly as many ground elements as the multisets
    share members with repetition.
    """
    if n < 1 or r < 0:
        raise ParameterError(f"multisets need n >= 1 and r >= 0, got n={n}, r={r}")
    labels = []
    position: dict[tuple[int, int], int] = {}
    for a in range(1, n + 1):
        for j in range(1, r + 1):
            position[(a, j)] = len(labels)
            labels.append(pair_label(a, j))
    ground = GroundSet(tuple(labels))
    all_bits = []
    for combo in itertools.combinations_with_replacement(range(1, n + 1), r):
        counts: dict[int, int] = {}
        for a in combo:
            counts[a] = counts.get(a, 0) + 1
        all_bits.append(
            bits_of(position[(a, j)] for a, q in counts.items() for j in range(1, q + 1))
        )
    return SetFamily.from_bits(ground, all_bits)


def gen_compositions(n: int, r: int) -> SetFamily:
    """Length-r compositions of n, encoded as (position, part) pairs.

    Encoded sets t-intersect exactly when the compositions agree on at
    least t positions.
    """
    if not 1 <= r <= n:
        raise ParameterError(f"compositions need 1 <= r <= n, got n={n}, r={r}")
    max_part = n - r + 1
    labels = []
    position: dict[tuple[int, int], int] = {}
    for i in range(1, r + 1):
        for v in range(1, max_part + 1):
            position[(i, v)] = len(labels)
            labels.append(pair_label(i, v))
    ground = GroundSet(tuple(labels))
    all_bits = []
    for cuts in itertools.combinations(range(1, n), r - 1):
        bounds = (0,) + cuts + (n,)
        parts = [bounds[i + 1] - bounds[i] for i in range(r)]
        all_bits.append(bits_of(position[(i + 1, v)] for i, v in enumerate(parts)))
    return SetFamily.from_bits(ground, all_bits)


def _partitions_exact(n: int, r: int):
    """Yield partitions of [1..n] with exactly r blocks, as sorted tuples."""
    blocks: list[list[int]] = []

    def rec(i: int):
        if i > n:
            if len(blocks) == r:
                yield tuple(tuple(b) for b in blocks)
            return
        remaining = n - i
        for b in blocks:
            if len(blocks) + remaining >= r:
                b.append(i)
                yield from rec(i + 1)
                b.pop()
        if len(blocks) < r:
            blocks.append([i])
            yield from rec(i + 1)
            blocks.pop()

    yield from rec(1)


def gen_partitions(n: int, r: int, max_n: int = DEFAULT_PARTITION_CAP) -> SetFamily:
    """Partitions of [n] into exactly r non-empty parts.

    The ground set enumerates only the part subsets that occur in some
    partition, keeping bit widths minimal; each member selects its r
    pairwise-disjoint parts covering [n].
    """
    if not 1 <= r <= n:
        raise ParameterError(f"partitions need 1 <= r <= n, got n={n}, r={r}")
    if n > max_n:
        raise ResourceError(f"partitions of [{n}] exceed the configured cap n <= {max_n}")
    partitions = list(_partitions_exact(n, r))
    parts = sorted({part for p in partitions for part in p})
    ground = GroundSet(tuple(part_label(part) for part in parts))
    position = {part: i for i, part in enumerate(parts)}
    all_bits = [bits_of(position[part] for part in p) for p in partitions]
    return SetFamily.from_bits(ground, all_bits)


def stirling(n: int, r: int) -> int:
    """Stirling number of the second kind via s(n,r) = s(n-1,r-1) + r*s(n-1,r)."""
    if n < 1 or not 1 <= r <= n:
        raise ParameterError(f"stirling needs 1 <= r <= n, got n={n}, r={r}")
    row = [0, 1] + [0] * (r - 1)  # row for n=1: s(1,1)=1
    for m in range(2, n + 1):
        new = [0] * (r + 1)
        for j in range(1, min(m, r) + 1):
            new[j] = row[j - 1] + j * row[j]
        row = new
    return row[r]


def gen_example1(t: int, r_values: Sequence[int], q_values: Sequence[int]) -> list[SetFamily]:
    """Family tuple F_1..F_k of disjoint star blocks with a shared tail.

    Fresh atoms are named reproducibly: "t_i_j" for the j-th element of
    the i-th core, "a_i_j_l" for the l-th element of the j-th petal of
    block i, and "rho_l" for the nested tail sets R_1 ... R_{k-1}.  For
    i < k, F_i holds the q_i petal sets T_i u A_{i,j} plus R_i; the last
    family holds every T u A_{k,j} with T a t-subset of R_1.
    """
    k = len(r_values)
    if k != len(q_values) or k < 2:
        raise ParameterError("need two or more blocks with matching petal counts")
    if t < 1:
        raise ParameterError(f"intersection level t must be >= 1, got {t}")
    if any(q < 1 for q in q_values):
        raise ParameterError("petal counts must all be >= 1")
    if r_values[0] <= t:
        raise ParameterError(f"set sizes must exceed t={t}, got r_1={r_values[0]}")
    if any(r_values[i] > r_values[i + 1] for i in range(k - 1)):
        raise ParameterError("set sizes must be non-decreasing")

    labels: list[str] = []
    t_idx: dict[tuple[int, int], int] = {}
    a_idx: dict[tuple[int, int, int], int] = {}
    rho_idx: dict[int, int] = {}
    for i in range(1, k + 1):
        for j in range(1, t + 1):
            t_idx[(i, j)] = len(labels)
            labels.append(f"t_{i}_{j}")
    for i in range(1, k + 1):
        for j in range(1, q_values[i - 1] + 1):
            for l in range(1, r_values[i - 1] - t + 1):
                a_idx[(i, j, l)] = len(labels)
                labels.append(f"a_{i}_{j}_{l}")
    for l in range(1, r_values[k - 2] + 1):
        rho_idx[l] = len(labels)
        labels.append(f"rho_{l}")
    ground = GroundSet(tuple(labels))

    def petal(i: int, j: int) -> int:
        core = bits_of(t_idx[(i, jj)] for jj in range(1, t + 1))
        return core | bits_of(
            a_idx[(i, j, l)] for l in range(1, r_values[i - 1] - t + 1)
        )

    families: list[SetFamily] = []
    for i in range(1, k):
        tail = bits_of(rho_idx[l] for l in range(1, r_values[i - 1] + 1))
        members = [petal(i, j) for j in range(1, q_values[i - 1] + 1)] + [tail]
        families.append(SetFamily.from_bits(ground, members))
    first_tail = [rho_idx[l] for l in range(1, r_values[0] + 1)]
    last = []
    for combo in itertools.combinations(first_tail, t):
        for j in range(1, q_values[k - 1] + 1):
            tail_part = bits_of(combo)
            petal_part = bits_of(
                a_idx[(k, j, l)] for l in range(1, r_values[k - 1] - t + 1)
            )
            last.append(tail_part | petal_part)
    families.append(SetFamily.from_bits(ground, last))
    return families


@dataclass(frozen=True)
class ClassParams:
    """Family-class selector with integer parameters.

    ``params`` carries n/r/m as each class needs; ``example1`` instead
    uses ``t`` plus the r and q integer lists.
    """

    cls: str
    params: Mapping[str, int] = field(default_factory=dict)
    r_list: tuple[int, ...] = ()
    q_list: tuple[int, ...] = ()
    t: int | None = None

    def __post_init__(self) -> None:
        if self.cls not in CLASS_TAGS:
            raise ParameterError(
                f"unknown family class {self.cls!r}; expected one of {CLASS_TAGS}"
            )


def generate(spec: ClassParams):
    """Build the family (or family list, for example1) named by a spec."""
    p = dict(spec.params)

    def need(*names: str) -> list[int]:
        missing = [nm for nm in names if nm not in p]
        if missing:
            raise ParameterError(f"class {spec.cls!r} needs parameters {missing}")
        return [int(p[nm]) for nm in names]

    if spec.cls == "level":
        n, r = need("n", "r")
        return gen_level(n, r)
    if spec.cls == "powerset":
        (n,) = need("n")
        return gen_powerset(n)
    if spec.cls == "sequences":
        n, m = need("n", "m")
        return gen_sequences(single_set_family(n), m)
    if spec.cls == "permutations":
        n, m = need("n", "m")
        return gen_permutations(single_set_family(n), m)
    if spec.cls == "multisets":
        n, r = need("n", "r")
        return gen_multisets(n, r)
    if spec.cls == "compositions":
        n, r = need("n", "r")
        return gen_compositions(n, r)
    if spec.cls == "partitions":
        n, r = need("n", "r")
        return gen_partitions(n, r)
    if spec.cls == "example1":
        if spec.t is None or not spec.r_list or not spec.q_list:
            raise ParameterError("example1 needs t plus r and q lists")
        return gen_example1(spec.t, spec.r_list, spec.q_list)
    raise ParameterError(f"unknown family class {spec.cls!r}")
