"""Star-size ratios, the threshold multiplier, and transversal bounds.

All quantities are exact integers or reduced integer fractions.  The
ratio l(F,t) / l(F,t+1) gets a sentinel when the denominator vanishes:
``unbounded`` when only the (t+1)-star size is 0, ``undefined`` when both
are.  Either sentinel satisfies every threshold premise, mirroring the
inequality l(F,t) >= c * l(F,t+1) as literally written.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import MemberSet, SetFamily, is_t_transversal, largest_stars
from .errors import ParameterError, PreconditionError


@dataclass(frozen=True)
class Ratio:
    kind: str  # "finite" | "unbounded" | "undefined"
    numerator: int = 0
    denominator: int = 1

    @classmethod
    def finite(cls, numerator: int, denominator: int) -> Ratio:
        if denominator <= 0:
            raise ParameterError("finite ratios need a positive denominator")
        g = math.gcd(numerator, denominator)
        return cls("finite", numerator // g, denominator // g)

    @classmethod
    def unbounded(cls) -> Ratio:
        return cls("unbounded")

    @classmethod
    def undefined(cls) -> Ratio:
        return cls("undefined")

    def as_fraction(self) -> Fraction | None:
        """Finite value, or None for either sentinel."""
        if self.kind != "finite":
            return None
        return Fraction(self.numerator, self.denominator)

    def at_least(self, threshold: int | Fraction) -> bool:
        """Whether the ratio meets a threshold; sentinels always do."""
        if self.kind != "finite":
            return True
        return Fraction(self.numerator, self.denominator) >= threshold

    def sort_key(self) -> tuple[int, Fraction]:
        """Orders finite ratios by value, below both sentinels."""
        if self.kind != "finite":
            return (1, Fraction(0))
        return (0, Fraction(self.numerator, self.denominator))

    def __str__(self) -> str:
        if self.kind != "finite":
            return self.kind
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class ClosedFormRatio:
    ratio: Ratio
    exact: bool  # False marks a proven lower bound rather than an identity


@dataclass(frozen=True)
class ThresholdVerdict:
    c_value: int
    l_t: int
    l_t1: int
    holds: bool


@dataclass(frozen=True)
class TransversalCheck:
    subfamily_size: int
    bound: int
    satisfied: bool


def c_threshold(r: int, s: int, t: int) -> int:
    """max{r*C(s,t), s*C(r,t)} + 1 when t <= min(r,s), else 1."""
    if r < 1 or s < 1 or t < 1:
        raise ParameterError(f"c_threshold needs r, s, t >= 1, got {(r, s, t)}")
    if t > min(r, s):
        return 1
    return max(r * math.comb(s, t), s * math.comb(r, t)) + 1


def star_ratio(family: SetFamily, t: int) -> Ratio:
    """Exact ratio of computed largest-star sizes at levels t and t+1."""
    l_t = largest_stars(family, t).l_value
    l_t1 = largest_stars(family, t + 1).l_value
    if l_t1 > 0:
        return Ratio.finite(l_t, l_t1)
    if l_t > 0:
        return Ratio.unbounded()
    return Ratio.undefined()


def closed_form_ratio(cls: str, params: dict[str, int], t: int) -> ClosedFormRatio:
    """Known ratio of largest-star sizes for a family class.

    Exact for levels ((n-t)/(r-t)), multisets ((n+r-t-1)/(r-t)) and
    compositions ((n-t-1)/(r-t-1)); a proven lower bound of m for
    sequences, m-t for partial permutations, and (n-t-1)/(r-t-1) for set
    partitions.
    """
    if t < 1:
        raise ParameterError(f"intersection level t must be >= 1, got {t}")

    def need(*names: str) -> list[int]:
        missing = [nm for nm in names if nm not in params]
        if missing:
            raise ParameterError(f"class {cls!r} ratio needs parameters {missing}")
        return [int(params[nm]) for nm in names]

    if cls == "level":
        n, r = need("n", "r")
        if not t + 1 <= r <= n:
            raise ParameterError(f"level ratio needs t+1 <= r <= n, got {params}")
        return ClosedFormRatio(Ratio.finite(n - t, r - t), exact=True)
    if cls == "multisets":
        n, r = need("n", "r")
        if n < 1 or r < t + 1:
            raise ParameterError(f"multiset ratio needs n >= 1, r >= t+1, got {params}")
        return ClosedFormRatio(Ratio.finite(n + r - t - 1, r - t), exact=True)
    if cls == "compositions":
        n, r = need("n", "r")
        if not t + 1 < r <= n:
            raise ParameterError(f"composition ratio needs t+1 < r <= n, got {params}")
        return ClosedFormRatio(Ratio.finite(n - t - 1, r - t - 1), exact=True)
    if cls == "sequences":
        (m,) = need("m")
        if m < 1:
            raise ParameterError(f"sequence ratio needs m >= 1, got {params}")
        return ClosedFormRatio(Ratio.finite(m, 1), exact=False)
    if cls == "permutations":
        (m,) = need("m")
        if m < t + 1:
            raise ParameterError(f"permutation ratio needs m >= t+1, got {params}")
        return ClosedFormRatio(Ratio.finite(m - t, 1), exact=False)
    if cls == "partitions":
        n, r = need("n", "r")
        if not t + 1 < r < n:
            raise ParameterError(f"partition ratio needs t+1 < r < n, got {params}")
        return ClosedFormRatio(Ratio.finite(n - t - 1, r - t - 1), exact=False)
    raise ParameterError(f"no closed-form ratio for class {cls!r}")


def threshold_holds(
    family: SetFamily, r: int, s: int, t: int, side: str = "left"
) -> ThresholdVerdict:
    """Check l(F,t) >= c(r,s,t) * l(F,t+1) with exact witnesses.

    ``side`` declares which size bound the family is held to: "left"
    for the (<= r) role, "right" for (<= s).
    """
    if side not in ("left", "right"):
        raise ParameterError(f"side must be 'left' or 'right', got {side!r}")
    declared = r if side == "left" else s
    if family.max_size > declared:
        raise ParameterError(
            f"family has a {family.max_size}-element member, over the declared"
            f" bound {declared}"
        )
    c_value = c_threshold(r, s, t)
    l_t = largest_stars(family, t).l_value
    l_t1 = largest_stars(family, t + 1).l_value
    return ThresholdVerdict(c_value=c_value, l_t=l_t, l_t1=l_t1, holds=l_t >= c_value * l_t1)


def _check_transversal_preconditions(
    t_set: MemberSet, family: SetFamily, sub: SetFamily, t: int
) -> None:
    if t < 1:
        raise ParameterError(f"intersection level t must be >= 1, got {t}")
    member_bits = set(family.member_bits())
    if any(m.bits not in member_bits for m in sub.members):
        raise PreconditionError("subfamily is not contained in the ambient family")
    if not is_t_transversal(t_set, sub, t):
        raise PreconditionError("given set is not a t-transversal of the subfamily")


def transversal_bound(
    t_set: MemberSet, family: SetFamily, sub: SetFamily, t: int
) -> TransversalCheck:
    """|A| <= C(|T|, t) * l(F, t) for a t-transversal T of A, A inside F.

    Precondition violations raise rather than reporting a bound failure.
    """
    _check_transversal_preconditions(t_set, family, sub, t)
    bound = math.comb(t_set.cardinality, t) * largest_stars(family, t).l_value
    size = len(sub.members)
    return TransversalCheck(subfamily_size=size, bound=bound, satisfied=size <= bound)


def refined_transversal_bound(
    t_set: MemberSet, pivot: MemberSet, family: SetFamily, sub: SetFamily, t: int
) -> TransversalCheck:
    """|A| <= |T \\ X| * l(F, t+1) when additionally A lies in the star at a
    t-set X not contained in T."""
    _check_transversal_preconditions(t_set, family, sub, t)
    if pivot.cardinality != t:
        raise PreconditionError(f"pivot set must have exactly t={t} elements")
    if pivot.bits & t_set.bits == pivot.bits:
        raise PreconditionError("pivot set must not be contained in the transversal")
    pb = pivot.bits
    if any(m.bits & pb != pb for m in sub.members):
        raise PreconditionError("subfamily is not contained in the pivot star")
    outside = (t_set.bits & ~pivot.bits).bit_count()
    bound = outside * largest_stars(family, t + 1).l_value
    size = len(sub.members)
    return TransversalCheck(subfamily_size=size, bound=bound, satisfied=size <= bound)
