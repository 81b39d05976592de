"""Exact maximum-product search over cross-t-intersecting subfamily pairs
and tuples, with property classification and product-bound verification.

The pair search is a branch and bound over subsets of the smaller side:
each node keeps the chosen members A and the bit vector of right members
compatible with all of A, prunes on |A_possible| * |B_current|, and
records every subset whose product ties the incumbent.  At the optimum
every recorded pair is automatically closed (extending either side would
beat the maximum), so the survivors are exactly the closed extremal
pairs.  The k-ary search fixes subsets of the first family and recurses
on the compatibility-restricted remainder, memoized on the restriction
masks.

Search statistics (node counts, elapsed time) are reported but excluded
from determinism guarantees; the optimum and the canonical witness list
are independent of exploration order and parallelism degree.
"""

from __future__ import annotations

import itertools
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

from .bounds import Ratio, ThresholdVerdict, c_threshold, star_ratio, threshold_holds
from .core import (
    GroundSet,
    SetFamily,
    bits_of,
    index_tuple,
    iter_indices,
    largest_stars,
    star_counts_from_bits,
)
from .errors import ParameterError
from . import generators

DEFAULT_WITNESS_CAP = 1000
DEFAULT_SEED = 1789

PROBE_NOTE = (
    "empirical observation over the listed corpus only; no claim about the"
    " true threshold is implied"
)


@dataclass(frozen=True)
class SearchLimits:
    """Budgets for exact searches; exceeding one forces optimal=False."""

    node_budget: int | None = None
    time_budget_s: float | None = None
    parallelism: int = 1
    witness_cap: int = DEFAULT_WITNESS_CAP

    def __post_init__(self) -> None:
        if self.node_budget is not None and self.node_budget < 1:
            raise ParameterError("node budget must be positive")
        if self.time_budget_s is not None and self.time_budget_s <= 0:
            raise ParameterError("time budget must be positive")
        if self.parallelism < 1:
            raise ParameterError("parallelism degree must be >= 1")
        if self.witness_cap < 1:
            raise ParameterError("witness cap must be >= 1")


@dataclass(frozen=True)
class BicliqueInstance:
    """Bipartite t-intersection compatibility between two families.

    ``adjacency[i]`` is the bit vector of right members compatible with
    left member i.  ``ground`` is the union encoding used to compare
    members across the two (possibly distinct) ground sets; unmatched
    labels simply never intersect.
    """

    left: SetFamily
    right: SetFamily
    t: int
    adjacency: tuple[int, ...]
    ground: GroundSet
    left_bits: tuple[int, ...]
    right_bits: tuple[int, ...]

    @property
    def edge_count(self) -> int:
        return sum(mask.bit_count() for mask in self.adjacency)

    def transposed_adjacency(self) -> tuple[int, ...]:
        cols = [0] * len(self.right.members)
        for i, mask in enumerate(self.adjacency):
            for j in iter_indices(mask):
                cols[j] |= 1 << i
        return tuple(cols)


@dataclass(frozen=True)
class SolveResult:
    """Exact optimum with the closed extremal witnesses.

    ``witnesses`` holds up to the configured cap, each witness being one
    index tuple per family; ``witness_total`` is always the exact count.
    """

    best_product: int
    witnesses: tuple[tuple[tuple[int, ...], ...], ...]
    witness_total: int
    optimal: bool
    nodes_explored: int
    elapsed_ms: int


@dataclass(frozen=True)
class PropertyVerdict:
    holds: bool | None
    witness_t_set: tuple[int, ...] | None = None
    counterexample: tuple[tuple[int, ...], ...] | None = None
    note: str = ""


@dataclass(frozen=True)
class PropertyReport:
    """Verdicts for the four cross-t-star properties of a family tuple."""

    t: int
    family_count: int
    l_values: tuple[int, ...]
    star_product: int
    best_product: int
    cross_star: PropertyVerdict
    strict: PropertyVerdict
    strong: PropertyVerdict
    extrastrong: PropertyVerdict
    inconclusive: bool
    solve: SolveResult


@dataclass(frozen=True)
class VerificationReport:
    """Premise check plus product-bound and equality-uniqueness checks."""

    premise_left: ThresholdVerdict
    premise_right: ThresholdVerdict
    bound: int
    best_product: int | None
    bound_ok: bool | None
    uniqueness_ok: bool | None
    status: str  # verified | premise-unmet | VIOLATION | inconclusive
    counterexample: tuple[tuple[int, ...], ...] | None
    degenerate: bool
    note: str
    solve: SolveResult | None


@dataclass(frozen=True)
class ProbeInstance:
    label: str
    ratio_left: Ratio
    ratio_right: Ratio
    premise_met: bool
    best_product: int
    star_bound: int
    bound_holds: bool


@dataclass(frozen=True)
class ProbeReport:
    r: int
    s: int
    t: int
    c_value: int
    instances: tuple[ProbeInstance, ...]
    largest_failing_ratio: Ratio | None
    smallest_holding_ratio: Ratio | None
    true_violations: int
    note: str


class _Budget:
    __slots__ = ("node_limit", "deadline", "nodes", "exhausted")

    def __init__(self, limits: SearchLimits):
        self.node_limit = limits.node_budget
        self.deadline = (
            time.monotonic() + limits.time_budget_s
            if limits.time_budget_s is not None
            else None
        )
        self.nodes = 0
        self.exhausted = False

    def spend(self) -> bool:
        if self.exhausted:
            return True
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.exhausted = True
        elif self.deadline is not None and time.monotonic() > self.deadline:
            self.exhausted = True
        return self.exhausted


def _align(families: Sequence[SetFamily]) -> tuple[GroundSet, list[list[int]]]:
    """Re-encode families over the label-union ground set."""
    first = families[0].ground
    if all(f.ground == first for f in families[1:]):
        return first, [[m.bits for m in f.members] for f in families]
    labels: list[str] = list(first.labels)
    position = {label: i for i, label in enumerate(labels)}
    for fam in families[1:]:
        for label in fam.ground.labels:
            if label not in position:
                position[label] = len(labels)
                labels.append(label)
    union = GroundSet(tuple(labels))
    encoded: list[list[int]] = []
    for fam in families:
        mapping = [position[label] for label in fam.ground.labels]
        encoded.append(
            [bits_of(mapping[i] for i in iter_indices(m.bits)) for m in fam.members]
        )
    return union, encoded


def build_instance(left: SetFamily, right: SetFamily, t: int) -> BicliqueInstance:
    """Pairwise popcount adjacency for the cross-t-intersection relation."""
    if t < 1:
        raise ParameterError(f"intersection level t must be >= 1, got {t}")
    ground, (lbits, rbits) = _align([left, right])
    adjacency = []
    for fb in lbits:
        mask = 0
        for j, gb in enumerate(rbits):
            if (fb & gb).bit_count() >= t:
                mask |= 1 << j
        adjacency.append(mask)
    return BicliqueInstance(
        left=left,
        right=right,
        t=t,
        adjacency=tuple(adjacency),
        ground=ground,
        left_bits=tuple(lbits),
        right_bits=tuple(rbits),
    )


def _star_tables(bits_lists: Sequence[Sequence[int]], t: int) -> list[dict[int, int]]:
    return [star_counts_from_bits(bits, t) for bits in bits_lists]


def _best_common_star_product(tables: Sequence[dict[int, int]]) -> int:
    if not tables or any(not tab for tab in tables):
        return 0
    common = set(tables[0]).intersection(*[set(tab) for tab in tables[1:]])
    best = 0
    for t_bits in common:
        prod = 1
        for tab in tables:
            prod *= tab[t_bits]
        if prod > best:
            best = prod
    return best


class _PairRecords:
    """Monotone incumbent plus all subsets tying it, thread-shared."""

    __slots__ = ("best", "pairs", "lock")

    def __init__(self, init_best: int):
        self.best = init_best
        self.pairs: list[tuple[int, int]] = []  # (A position bits, B mask)
        self.lock = threading.Lock()

    def record(self, prod: int, a_pos_bits: int, b_mask: int) -> None:
        with self.lock:
            if prod > self.best:
                self.best = prod
                self.pairs = [(a_pos_bits, b_mask)]
            elif prod == self.best:
                self.pairs.append((a_pos_bits, b_mask))


def _pair_search(
    adj: Sequence[int],
    n_right: int,
    limits: SearchLimits,
    init_best: int,
) -> tuple[int, list[tuple[int, int]], int, bool]:
    """Core branch and bound; returns (best, [(A posbits, B mask)], nodes, exhausted).

    A position bits refer to the internal branching order; callers map
    them back to member indices.
    """
    n_left = len(adj)
    order = sorted(range(n_left), key=lambda i: (-adj[i].bit_count(), i))
    adj_ord = [adj[i] for i in order]
    full_right = (1 << n_right) - 1
    adj_t = [0] * n_right
    for pos, mask in enumerate(adj_ord):
        for b in iter_indices(mask):
            adj_t[b] |= 1 << pos
    suffix = [((1 << n_left) - 1) ^ ((1 << p) - 1) for p in range(n_left + 1)]

    records = _PairRecords(init_best)
    budget = _Budget(limits)

    def step(pos: int, a_count: int, a_pos_bits: int, b_mask: int):
        """Evaluate including order position pos; return child args or None."""
        nb = b_mask & adj_ord[pos]
        if not nb:
            return None
        nbc = nb.bit_count()
        new_bits = a_pos_bits | (1 << pos)
        prod = (a_count + 1) * nbc
        if prod >= records.best:
            records.record(prod, new_bits, nb)
        rem = n_left - pos - 1
        if rem == 0:
            return None
        best_now = records.best
        ub = (a_count + 1 + rem) * nbc
        if ub < best_now:
            return None
        if ub > prod:
            # second-chance bound: the final A lies in the neighbourhood of
            # some surviving right member, which caps the usable candidates
            after = suffix[pos + 1]
            ext_max = 0
            for b in iter_indices(nb):
                cand = (adj_t[b] & after).bit_count()
                if cand > ext_max:
                    ext_max = cand
                    if (a_count + 1 + ext_max) * nbc >= best_now:
                        break
            if (a_count + 1 + ext_max) * nbc < best_now:
                return None
        return (pos + 1, a_count + 1, new_bits, nb, nbc)

    def explore(pos_from: int, a_count: int, a_pos_bits: int, b_mask: int, b_count: int):
        if budget.spend():
            return
        if (a_count + (n_left - pos_from)) * b_count < records.best:
            return
        for pos in range(pos_from, n_left):
            child = step(pos, a_count, a_pos_bits, b_mask)
            if child is not None:
                explore(*child)

    workers = min(limits.parallelism, max(n_left, 1))
    if workers <= 1 or n_left < 2:
        explore(0, 0, 0, full_right, n_right)
    else:
        def root_task(pos: int) -> None:
            if budget.spend():
                return
            child = step(pos, 0, 0, full_right)
            if child is not None:
                explore(*child)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(root_task, range(n_left)))

    with records.lock:
        best = records.best
        raw = list(records.pairs)
    mapped = [(bits_of(order[p] for p in iter_indices(ab)), bm) for ab, bm in raw]
    return best, mapped, budget.nodes, budget.exhausted


def max_product_pair(inst: BicliqueInstance, limits: SearchLimits | None = None) -> SolveResult:
    """Exact maximum of |A|*|B| over cross-t-intersecting pairs below the
    instance, with every closed extremal pair as a witness.

    The empty pair (product 0) is always feasible; when the optimum is 0
    the witness list is empty since a zero product carries no biclique.
    """
    limits = limits or SearchLimits()
    start = time.monotonic()
    n_left = len(inst.left.members)
    n_right = len(inst.right.members)
    warm = _best_common_star_product(
        _star_tables([inst.left_bits, inst.right_bits], inst.t)
    )
    swap = n_right < n_left
    adj = inst.transposed_adjacency() if swap else inst.adjacency
    best, raw, nodes, exhausted = _pair_search(
        adj, n_left if swap else n_right, limits, warm
    )
    witnesses: list[tuple[tuple[int, ...], ...]] = []
    if best > 0:
        for a_bits, b_mask in raw:
            a_idx = index_tuple(a_bits)
            b_idx = index_tuple(b_mask)
            witnesses.append((b_idx, a_idx) if swap else (a_idx, b_idx))
        witnesses.sort()
    total = len(witnesses)
    return SolveResult(
        best_product=best,
        witnesses=tuple(witnesses[: limits.witness_cap]),
        witness_total=total,
        optimal=not exhausted,
        nodes_explored=nodes,
        elapsed_ms=int(round((time.monotonic() - start) * 1000)),
    )


def max_product_tuple(
    families: Sequence[SetFamily], t: int, limits: SearchLimits | None = None
) -> SolveResult:
    """Exact maximum of the product of |A_i| over cross-t-intersecting
    tuples below the given families (k >= 2).

    Fixes subsets of the first family and recurses on the remainder
    restricted to the common-compatible members, memoizing subproblems on
    their restriction masks.
    """
    if len(families) < 2:
        raise ParameterError("tuple search needs at least two families")
    if t < 1:
        raise ParameterError(f"intersection level t must be >= 1, got {t}")
    limits = limits or SearchLimits()
    start = time.monotonic()
    _, bits_lists = _align(families)
    k = len(families)
    sizes = [len(bits) for bits in bits_lists]

    comp: dict[tuple[int, int], list[int]] = {}
    for i in range(k):
        for j in range(i + 1, k):
            rows = []
            for xb in bits_lists[i]:
                mask = 0
                for y, yb in enumerate(bits_lists[j]):
                    if (xb & yb).bit_count() >= t:
                        mask |= 1 << y
                rows.append(mask)
            comp[(i, j)] = rows

    warm = _best_common_star_product(_star_tables(bits_lists, t))
    budget = _Budget(limits)
    memo: dict[tuple[int, tuple[int, ...]], tuple[int, tuple[tuple[int, ...], ...]]] = {}

    def solve(level: int, masks: tuple[int, ...], init_best: int):
        if len(masks) == 1:
            m = masks[0]
            return m.bit_count(), ((m,),)
        key = (level, masks)
        hit = memo.get(key)
        if hit is not None:
            return hit
        cands = list(iter_indices(masks[0]))
        rest0 = masks[1:]
        comp_rows = [comp[(level, level + 1 + d)] for d in range(len(rest0))]
        best_here = init_best
        wits_here: list[tuple[int, ...]] = []

        def consider(a_count: int, a_bits: int, rest: tuple[int, ...]) -> None:
            nonlocal best_here, wits_here
            sub_best, sub_wits = solve(level + 1, rest, 0)
            total = a_count * sub_best
            if total <= 0:
                return
            if total > best_here:
                best_here = total
                wits_here = [(a_bits,) + w for w in sub_wits]
            elif total == best_here:
                wits_here.extend((a_bits,) + w for w in sub_wits)

        def rec(pos_from: int, a_count: int, a_bits: int, rest: tuple[int, ...]):
            nonlocal best_here
            if budget.spend():
                return
            consider(a_count, a_bits, rest)
            for pi in range(pos_from, len(cands)):
                j = cands[pi]
                new_rest = tuple(m & rows[j] for m, rows in zip(rest, comp_rows))
                new_prod = 1
                for m in new_rest:
                    new_prod *= m.bit_count()
                if new_prod == 0:
                    continue
                ub = (a_count + 1 + (len(cands) - pi - 1)) * new_prod
                if ub < best_here:
                    continue
                rec(pi + 1, a_count + 1, a_bits | (1 << j), new_rest)

        rec(0, 0, 0, rest0)
        result = (best_here, tuple(wits_here))
        if not budget.exhausted:
            memo[key] = result
        return result

    best, raw = solve(0, tuple((1 << s) - 1 for s in sizes), warm)
    witnesses: list[tuple[tuple[int, ...], ...]] = []
    if best > 0:
        witnesses = sorted(tuple(index_tuple(m) for m in w) for w in raw)
    total = len(witnesses)
    return SolveResult(
        best_product=best,
        witnesses=tuple(witnesses[: limits.witness_cap]),
        witness_total=total,
        optimal=not budget.exhausted,
        nodes_explored=budget.nodes,
        elapsed_ms=int(round((time.monotonic() - start) * 1000)),
    )


def _star_member_mask(bits: Sequence[int], t_bits: int) -> int:
    mask = 0
    for i, mb in enumerate(bits):
        if mb & t_bits == t_bits:
            mask |= 1 << i
    return mask


def _is_conjugate_star_tuple(
    witness: tuple[tuple[int, ...], ...],
    bits_lists: Sequence[Sequence[int]],
    t: int,
) -> bool:
    """Whether some common t-set T satisfies A_i == F_i(T) for every i."""
    first = witness[0]
    if not first:
        return False
    core = -1
    for i in first:
        core &= bits_lists[0][i]
    witness_masks = [bits_of(idxs) for idxs in witness]
    for combo in itertools.combinations(index_tuple(core), t):
        t_bits = bits_of(combo)
        if all(
            _star_member_mask(bits_lists[i], t_bits) == witness_masks[i]
            for i in range(len(bits_lists))
        ):
            return True
    return False


def classify_properties(
    families: Sequence[SetFamily], t: int, limits: SearchLimits | None = None
) -> PropertyReport:
    """Classify a family tuple against the cross-t-star property hierarchy.

    (a) the product of subfamily sizes never beats the product of largest
    star sizes; (b) additionally every tuple attaining it is a conjugate
    star tuple at a common t-set; (c) some single t-set's star product
    dominates every cross-t-intersecting tuple; (d) strengthens (c) with
    the conjugate-tuple equality clause.  Zero optima carry no uniqueness
    content and leave the equality clauses vacuous.
    """
    limits = limits or SearchLimits()
    result = max_product_tuple(families, t, limits)
    _, bits_lists = _align(families)
    tables = _star_tables(bits_lists, t)
    l_values = tuple(max(tab.values(), default=0) for tab in tables)
    star_product = 1
    for l in l_values:
        star_product *= l
    if not result.optimal:
        pending = PropertyVerdict(holds=None, note="search budget exhausted")
        return PropertyReport(
            t=t,
            family_count=len(families),
            l_values=l_values,
            star_product=star_product,
            best_product=result.best_product,
            cross_star=pending,
            strict=pending,
            strong=pending,
            extrastrong=pending,
            inconclusive=True,
            solve=result,
        )

    best = result.best_product
    all_t_bits = set().union(*[set(tab) for tab in tables]) if tables else set()
    best_t_bits: int | None = None
    best_t_prod = -1
    for t_bits in sorted(all_t_bits, key=index_tuple):
        prod = 1
        for tab in tables:
            prod *= tab.get(t_bits, 0)
        if prod > best_t_prod:
            best_t_prod = prod
            best_t_bits = t_bits
    best_t_prod = max(best_t_prod, 0)
    conj_all = all(
        _is_conjugate_star_tuple(w, bits_lists, t) for w in result.witnesses
    )
    first_nonconj = next(
        (w for w in result.witnesses if not _is_conjugate_star_tuple(w, bits_lists, t)),
        None,
    )
    witness_t = index_tuple(best_t_bits) if best_t_bits is not None else None

    a_holds = best <= star_product
    a_verdict = PropertyVerdict(
        holds=a_holds,
        counterexample=None if a_holds else (result.witnesses[0] if result.witnesses else None),
    )

    if not a_holds:
        b_verdict = PropertyVerdict(holds=False, counterexample=a_verdict.counterexample)
    elif best < star_product or best == 0:
        note = "no tuple attains the star-product bound" if best < star_product else (
            "zero optimum: equality carries no uniqueness content"
        )
        b_verdict = PropertyVerdict(holds=True, note=note)
    else:
        b_verdict = PropertyVerdict(
            holds=conj_all, counterexample=None if conj_all else first_nonconj
        )

    if best == 0:
        c_verdict = PropertyVerdict(
            holds=True, witness_t_set=witness_t, note="zero optimum: any t-set dominates"
        )
        d_verdict = PropertyVerdict(
            holds=True, witness_t_set=witness_t,
            note="zero optimum: equality carries no uniqueness content",
        )
    else:
        c_holds = best_t_prod >= best
        c_verdict = PropertyVerdict(
            holds=c_holds,
            witness_t_set=witness_t if c_holds else None,
            note="" if c_holds else (
                f"largest star product over a single t-set is {best_t_prod} < {best}"
            ),
        )
        d_holds = c_holds and conj_all
        d_verdict = PropertyVerdict(
            holds=d_holds,
            witness_t_set=witness_t if d_holds else None,
            counterexample=None if conj_all else first_nonconj,
        )

    return PropertyReport(
        t=t,
        family_count=len(families),
        l_values=l_values,
        star_product=star_product,
        best_product=best,
        cross_star=a_verdict,
        strict=b_verdict,
        strong=c_verdict,
        extrastrong=d_verdict,
        inconclusive=False,
        solve=result,
    )


def verify_main_theorem(
    left: SetFamily,
    right: SetFamily,
    r: int,
    s: int,
    t: int,
    limits: SearchLimits | None = None,
) -> VerificationReport:
    """Check the product bound and its equality characterisation.

    When both families meet the threshold premise, the exact optimum must
    not exceed l(F,t) * l(G,t) and every pair attaining it must be the
    conjugate star pair at a common t-set that maximizes both stars.
    When either star size is 0 the bound degenerates to 0 = 0 and the
    uniqueness clause is reported as out of scope rather than guessed.
    """
    limits = limits or SearchLimits()
    premise_left = threshold_holds(left, r, s, t, side="left")
    premise_right = threshold_holds(right, r, s, t, side="right")
    bound = premise_left.l_t * premise_right.l_t
    if not (premise_left.holds and premise_right.holds):
        return VerificationReport(
            premise_left=premise_left,
            premise_right=premise_right,
            bound=bound,
            best_product=None,
            bound_ok=None,
            uniqueness_ok=None,
            status="premise-unmet",
            counterexample=None,
            degenerate=False,
            note="threshold premise unmet; the bound makes no claim here",
            solve=None,
        )

    inst = build_instance(left, right, t)
    tables = _star_tables([inst.left_bits, inst.right_bits], t)
    conj_t = [
        t_bits
        for t_bits in set(tables[0]) & set(tables[1])
        if tables[0][t_bits] == premise_left.l_t
        and tables[1][t_bits] == premise_right.l_t
    ]
    expected = {
        (
            index_tuple(_star_member_mask(inst.left_bits, t_bits)),
            index_tuple(_star_member_mask(inst.right_bits, t_bits)),
        )
        for t_bits in conj_t
    }
    solve_limits = SearchLimits(
        node_budget=limits.node_budget,
        time_budget_s=limits.time_budget_s,
        parallelism=limits.parallelism,
        witness_cap=max(limits.witness_cap, len(expected) + 1),
    )
    result = max_product_pair(inst, solve_limits)
    if not result.optimal:
        return VerificationReport(
            premise_left=premise_left,
            premise_right=premise_right,
            bound=bound,
            best_product=result.best_product,
            bound_ok=None,
            uniqueness_ok=None,
            status="inconclusive",
            counterexample=None,
            degenerate=False,
            note="search budget exhausted before the optimum was certified",
            solve=result,
        )

    best = result.best_product
    if bound == 0:
        bound_ok = best == 0
        return VerificationReport(
            premise_left=premise_left,
            premise_right=premise_right,
            bound=bound,
            best_product=best,
            bound_ok=bound_ok,
            uniqueness_ok=None,
            status="verified" if bound_ok else "VIOLATION",
            counterexample=None if bound_ok else result.witnesses[0],
            degenerate=True,
            note="zero star sizes: uniqueness clause out of scope",
            solve=result,
        )

    bound_ok = best <= bound
    if not bound_ok:
        return VerificationReport(
            premise_left=premise_left,
            premise_right=premise_right,
            bound=bound,
            best_product=best,
            bound_ok=False,
            uniqueness_ok=None,
            status="VIOLATION",
            counterexample=result.witnesses[0] if result.witnesses else None,
            degenerate=False,
            note="product bound exceeded",
            solve=result,
        )

    if best == bound:
        uniqueness_ok = (
            result.witness_total == len(expected)
            and set(result.witnesses) == expected
        )
        counterexample = None
        if not uniqueness_ok:
            counterexample = next(
                (w for w in result.witnesses if w not in expected),
                result.witnesses[0] if result.witnesses else None,
            )
        return VerificationReport(
            premise_left=premise_left,
            premise_right=premise_right,
            bound=bound,
            best_product=best,
            bound_ok=True,
            uniqueness_ok=uniqueness_ok,
            status="verified" if uniqueness_ok else "VIOLATION",
            counterexample=counterexample,
            degenerate=False,
            note="" if uniqueness_ok else "equality attained outside conjugate star pairs",
            solve=result,
        )

    # strict optimum below the bound: no conjugate pair may attain it either
    uniqueness_ok = not expected
    return VerificationReport(
        premise_left=premise_left,
        premise_right=premise_right,
        bound=bound,
        best_product=best,
        bound_ok=True,
        uniqueness_ok=uniqueness_ok,
        status="verified" if uniqueness_ok else "VIOLATION",
        counterexample=None,
        degenerate=False,
        note="" if uniqueness_ok else (
            "inconsistency: a conjugate star pair should attain the optimum"
        ),
        solve=result,
    )


def _expand_range(value) -> list[int]:
    if isinstance(value, int):
        return [value]
    if isinstance(value, str) and ":" in value:
        lo, hi = value.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return list(range(int(value[0]), int(value[1]) + 1))
    raise ParameterError(f"cannot expand parameter range {value!r}")


def _random_family(rng: random.Random, ground_size: int, members: int, max_size: int) -> SetFamily:
    ground = generators.atoms_ground(ground_size)
    bits = set()
    for _ in range(members):
        size = rng.randint(1, min(max_size, ground_size))
        bits.add(bits_of(rng.sample(range(ground_size), size)))
    return SetFamily.from_bits(ground, bits)


def _expand_corpus(
    corpus_spec: Sequence[Mapping], seed: int
) -> list[tuple[str, SetFamily, SetFamily]]:
    rng = random.Random(seed)
    instances: list[tuple[str, SetFamily, SetFamily]] = []
    for entry in corpus_spec:
        cls = entry.get("class")
        params = dict(entry.get("params", {}))
        if cls == "random":
            count = int(params.pop("count", 10))
            ground_size = int(params.pop("ground", 8))
            members = int(params.pop("members", 10))
            max_size = int(params.pop("max_size", 4))
            for i in range(count):
                fam = _random_family(rng, ground_size, members, max_size)
                gam = _random_family(rng, ground_size, members, max_size)
                instances.append((f"random[{i}]", fam, gam))
            continue
        names = sorted(params)
        grids = [_expand_range(params[name]) for name in names]
        for values in itertools.product(*grids):
            concrete = dict(zip(names, values))
            fam = generators.generate(generators.ClassParams(cls=cls, params=concrete))
            if isinstance(fam, list):
                raise ParameterError(f"class {cls!r} is not a single-family corpus class")
            label = f"{cls}(" + ",".join(f"{n}={concrete[n]}" for n in names) + ")"
            second = entry.get("class_b")
            if second:
                params_b = dict(entry.get("params_b", {})) or concrete
                gam = generators.generate(
                    generators.ClassParams(cls=second, params=params_b)
                )
                if isinstance(gam, list):
                    raise ParameterError(
                        f"class {second!r} is not a single-family corpus class"
                    )
                label += f" x {second}"
            else:
                gam = fam
            instances.append((label, fam, gam))
    if not instances:
        raise ParameterError("corpus spec expanded to no instances")
    return instances


def chi_probe(
    r: int,
    s: int,
    t: int,
    corpus_spec: Sequence[Mapping],
    limits: SearchLimits | None = None,
    seed: int = DEFAULT_SEED,
) -> ProbeReport:
    """Empirical probe of the smallest workable threshold multiplier.

    For each corpus instance the probe records both star-size ratios and
    whether the exact optimum respects the star-product bound, then
    reports the largest ratio seen on a failing instance and the smallest
    ratio above which the whole corpus holds.  The output is an
    observation about the corpus, never a claim about the true threshold.
    """
    limits = limits or SearchLimits()
    c_value = c_threshold(r, s, t)
    rows: list[ProbeInstance] = []
    for label, fam, gam in _expand_corpus(corpus_spec, seed):
        ratio_left = star_ratio(fam, t)
        ratio_right = star_ratio(gam, t) if gam is not fam else ratio_left
        l_left = largest_stars(fam, t).l_value
        l_right = largest_stars(gam, t).l_value if gam is not fam else l_left
        l1_left = largest_stars(fam, t + 1).l_value
        l1_right = largest_stars(gam, t + 1).l_value if gam is not fam else l1_left
        premise_met = l_left >= c_value * l1_left and l_right >= c_value * l1_right
        result = max_product_pair(build_instance(fam, gam, t), limits)
        star_bound = l_left * l_right
        rows.append(
            ProbeInstance(
                label=label,
                ratio_left=ratio_left,
                ratio_right=ratio_right,
                premise_met=premise_met,
                best_product=result.best_product,
                star_bound=star_bound,
                bound_holds=result.best_product <= star_bound,
            )
        )

    def min_ratio(row: ProbeInstance) -> Ratio:
        return min(row.ratio_left, row.ratio_right, key=lambda q: q.sort_key())

    failing = [row for row in rows if not row.bound_holds]
    largest_failing = (
        max((min_ratio(row) for row in failing), key=lambda q: q.sort_key())
        if failing
        else None
    )
    smallest_holding: Ratio | None = None
    for row in sorted(rows, key=lambda rr: min_ratio(rr).sort_key()):
        candidate = min_ratio(row)
        above = [rr for rr in rows if min_ratio(rr).sort_key() >= candidate.sort_key()]
        if all(rr.bound_holds for rr in above):
            smallest_holding = candidate
            break
    true_violations = sum(1 for row in failing if row.premise_met)
    return ProbeReport(
        r=r,
        s=s,
        t=t,
        c_value=c_value,
        instances=tuple(rows),
        largest_failing_ratio=largest_failing,
        smallest_holding_ratio=smallest_holding,
        true_violations=true_violations,
        note=PROBE_NOTE,
    )
