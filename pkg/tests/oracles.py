"""Independent reference implementations used to cross-check the library.

These deliberately avoid the library's optimized code paths: largest
stars are scanned over every t-subset of the ground set, and maximum
products come from exhaustive subset enumeration with common-compatible
closure.
"""

from __future__ import annotations

import itertools
import random

from starlab import SetFamily, atoms_ground
from starlab.core import bits_of, index_tuple, iter_indices


def brute_largest_stars(family: SetFamily, t: int) -> tuple[int, list[int]]:
    """(size, witness bit list) scanning ALL t-subsets of the ground set."""
    best = 0
    witnesses: list[int] = []
    for combo in itertools.combinations(range(family.ground.size), t):
        tb = bits_of(combo)
        count = sum(1 for m in family.members if m.bits & tb == tb)
        if count > best:
            best = count
            witnesses = [tb]
        elif count == best and count > 0:
            witnesses.append(tb)
    if best == 0:
        return 0, []
    return best, sorted(witnesses, key=index_tuple)


def pair_adjacency(left: SetFamily, right: SetFamily, t: int) -> list[int]:
    return [
        sum(
            1 << j
            for j, g in enumerate(right.members)
            if (f.bits & g.bits).bit_count() >= t
        )
        for f in left.members
    ]


def oracle_pair(left: SetFamily, right: SetFamily, t: int):
    """Closed-pair oracle: every A below the left family, B = all compatible.

    Returns (best product, set of closed extremal (A_idx, B_idx) pairs).
    """
    adj = pair_adjacency(left, right, t)
    n_left = len(adj)
    full = (1 << len(right.members)) - 1
    common = [full] * (1 << n_left)
    for sub in range(1, 1 << n_left):
        low = sub & -sub
        common[sub] = common[sub ^ low] & adj[low.bit_length() - 1]
    best = 0
    for sub in range(1 << n_left):
        prod = sub.bit_count() * common[sub].bit_count()
        if prod > best:
            best = prod
    witnesses = set()
    if best > 0:
        for sub in range(1 << n_left):
            b_mask = common[sub]
            if sub.bit_count() * b_mask.bit_count() != best:
                continue
            closed_a = sum(
                1 << i for i in range(n_left) if adj[i] & b_mask == b_mask
            )
            witnesses.add((index_tuple(closed_a), index_tuple(b_mask)))
    return best, witnesses


def oracle_tuple3(f1: SetFamily, f2: SetFamily, f3: SetFamily, t: int):
    """Exhaustive 3-tuple oracle via nested closed-pair enumeration."""
    comp12 = pair_adjacency(f1, f2, t)
    comp13 = pair_adjacency(f1, f3, t)
    comp23 = pair_adjacency(f2, f3, t)
    n1, n2, n3 = len(f1.members), len(f2.members), len(f3.members)
    full2, full3 = (1 << n2) - 1, (1 << n3) - 1

    m2 = [full2] * (1 << n1)
    m3 = [full3] * (1 << n1)
    for sub in range(1, 1 << n1):
        low = sub & -sub
        i = low.bit_length() - 1
        m2[sub] = m2[sub ^ low] & comp12[i]
        m3[sub] = m3[sub ^ low] & comp13[i]

    best = 0
    hits: list[tuple[int, int, int]] = []
    for sub in range(1 << n1):
        a1 = sub.bit_count()
        if a1 == 0:
            continue
        idx2 = list(iter_indices(m2[sub]))
        k2 = len(idx2)
        rest3 = [m3[sub]] * (1 << k2)
        for sub2 in range(1, 1 << k2):
            low = sub2 & -sub2
            rest3[sub2] = rest3[sub2 ^ low] & comp23[idx2[low.bit_length() - 1]]
            prod = a1 * sub2.bit_count() * rest3[sub2].bit_count()
            if prod > best:
                best = prod
                hits = [(sub, sum(1 << idx2[p] for p in iter_indices(sub2)), rest3[sub2])]
            elif prod == best and prod > 0:
                hits.append(
                    (sub, sum(1 << idx2[p] for p in iter_indices(sub2)), rest3[sub2])
                )
    witnesses = {
        (index_tuple(a), index_tuple(b), index_tuple(c)) for a, b, c in hits
    }
    return best, witnesses


def random_family(
    rng: random.Random, ground_size: int, max_members: int, max_set_size: int
) -> SetFamily:
    ground = atoms_ground(ground_size)
    bits = set()
    for _ in range(rng.randint(1, max_members)):
        size = rng.randint(1, min(max_set_size, ground_size))
        bits.add(bits_of(rng.sample(range(ground_size), size)))
    return SetFamily.from_bits(ground, bits)


def multiset_shared(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Shared members with repetition, from raw multiset tuples."""
    count = 0
    for value in set(a) | set(b):
        count += min(a.count(value), b.count(value))
    return count


def composition_agreements(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Positions (up to the shorter length) where two compositions agree."""
    return sum(1 for x, y in zip(a, b) if x == y)
