"""Comparison methodologies: 3x3 qualitative risk matrix and DREAD scoring.

Both produce ordinal results on purpose; they exist so users can contrast
qualitative prioritization with the monetary pipeline. DREAD scores accept
ranges because assessors often cannot settle on a point value; a point score
is a range with equal bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from enum import Enum

from .errors import InvalidPolicy, InvalidValue, RangeOutOfBounds
from .money import dec


class OrdinalLevel(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    @property
    def rank(self) -> int:
        return _LEVEL_RANK[self]

    # str supplies lexicographic ordering, which is wrong here; define the
    # total order low < medium < high explicitly.
    def __lt__(self, other):
        if isinstance(other, OrdinalLevel):
            return self.rank < other.rank
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, OrdinalLevel):
            return self.rank <= other.rank
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, OrdinalLevel):
            return self.rank > other.rank
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, OrdinalLevel):
            return self.rank >= other.rank
        return NotImplemented


_LEVEL_RANK = {OrdinalLevel.LOW: 0, OrdinalLevel.MEDIUM: 1, OrdinalLevel.HIGH: 2}
_LEVELS = (OrdinalLevel.LOW, OrdinalLevel.MEDIUM, OrdinalLevel.HIGH)


# ---------------------------------------------------------------------------
# Risk matrix
# ---------------------------------------------------------------------------

MatrixPolicy = dict[tuple[OrdinalLevel, OrdinalLevel], OrdinalLevel]


def _default_cell(likelihood: OrdinalLevel, severity: OrdinalLevel) -> OrdinalLevel:
    hi, lo = max(likelihood, severity), min(likelihood, severity)
    if hi is OrdinalLevel.HIGH and lo >= OrdinalLevel.MEDIUM:
        return OrdinalLevel.HIGH
    if hi is OrdinalLevel.LOW:
        return OrdinalLevel.LOW
    return OrdinalLevel.MEDIUM


#: Symmetric max-oriented default: high iff one axis is high and the other at
#: least medium; low iff both axes are low; medium otherwise.
DEFAULT_MATRIX_POLICY: MatrixPolicy = {
    (l, s): _default_cell(l, s) for l in _LEVELS for s in _LEVELS
}


def check_policy(policy: MatrixPolicy) -> None:
    """Reject policies that miss cells or are not monotone in either axis."""
    for l in _LEVELS:
        for s in _LEVELS:
            if (l, s) not in policy:
                raise InvalidPolicy(f"policy misses cell ({l.value}, {s.value})")
    for l in _LEVELS:
        for s in _LEVELS:
            here = policy[(l, s)]
            for l2 in _LEVELS:
                for s2 in _LEVELS:
                    if l2 >= l and s2 >= s and policy[(l2, s2)] < here:
                        raise InvalidPolicy(
                            f"policy not monotone: ({l.value}, {s.value}) -> {here.value} "
                            f"but ({l2.value}, {s2.value}) -> {policy[(l2, s2)].value}")


def matrix_priority(
    likelihood: OrdinalLevel,
    severity: OrdinalLevel,
    policy: MatrixPolicy | None = None,
) -> OrdinalLevel:
    """Look up the priority cell for a likelihood/severity pair."""
    likelihood = OrdinalLevel(likelihood)
    severity = OrdinalLevel(severity)
    if policy is None:
        policy = DEFAULT_MATRIX_POLICY
    else:
        check_policy(policy)
    return policy[(likelihood, severity)]


@dataclass(frozen=True)
class MatrixRating:
    """A threat placed in the matrix; priority always comes from the policy."""

    threat_id: str
    likelihood: OrdinalLevel
    severity: OrdinalLevel
    priority: OrdinalLevel

    @classmethod
    def rate(cls, threat_id: str, likelihood, severity,
             policy: MatrixPolicy | None = None) -> "MatrixRating":
        likelihood = OrdinalLevel(likelihood)
        severity = OrdinalLevel(severity)
        return cls(threat_id, likelihood, severity,
                   matrix_priority(likelihood, severity, policy))


# ---------------------------------------------------------------------------
# DREAD
# ---------------------------------------------------------------------------

class DreadGrade(str, Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"
    CRITICAL = "Critical"

    @property
    def rank(self) -> int:
        return _GRADE_RANK[self]


_GRADE_RANK = {DreadGrade.LOW: 0, DreadGrade.MEDIUM: 1, DreadGrade.HIGH: 2,
               DreadGrade.CRITICAL: 3}

GRADE_LETTERS = {DreadGrade.LOW: "L", DreadGrade.MEDIUM: "M",
                 DreadGrade.HIGH: "H", DreadGrade.CRITICAL: "C"}


@dataclass(frozen=True)
class ScoreRange:
    """A closed score range in [0, 10]; point scores have lo == hi."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (0.0 <= lo <= hi <= 10.0):
            raise RangeOutOfBounds(f"score range must satisfy 0 <= lo <= hi <= 10, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def of(cls, value) -> "ScoreRange":
        """Coerce a number or (lo, hi) pair into a range."""
        if isinstance(value, ScoreRange):
            return value
        if isinstance(value, (tuple, list)):
            if len(value) != 2:
                raise RangeOutOfBounds(f"score range needs exactly two bounds, got {value!r}")
            return cls(float(value[0]), float(value[1]))
        return cls(float(value), float(value))

    def __str__(self) -> str:
        if self.lo == self.hi:
            return f"{self.lo:g}"
        return f"{self.lo:g}-{self.hi:g}"


@dataclass(frozen=True)
class DreadThresholds:
    """Upper bounds of the low/medium/high bands on the 0-50 sum scale.

    Defaults: low up to 12, medium up to 28, high up to 42, critical above.
    """

    low_max: float = 12.0
    medium_max: float = 28.0
    high_max: float = 42.0

    def __post_init__(self):
        if not (0 < self.low_max < self.medium_max < self.high_max < 50):
            raise InvalidPolicy(
                "grade thresholds must satisfy 0 < low < medium < high < 50, "
                f"got {self.low_max}, {self.medium_max}, {self.high_max}")

    def grade(self, total) -> DreadGrade:
        total = dec(total)
        if total <= dec(self.low_max):
            return DreadGrade.LOW
        if total <= dec(self.medium_max):
            return DreadGrade.MEDIUM
        if total <= dec(self.high_max):
            return DreadGrade.HIGH
        return DreadGrade.CRITICAL


DEFAULT_DREAD_THRESHOLDS = DreadThresholds()

DREAD_COMPONENTS = ("damage", "reproducibility", "exploitability",
                    "affected_users", "discoverability")


@dataclass(frozen=True)
class DreadAssessment:
    threat_id: str
    damage: ScoreRange
    reproducibility: ScoreRange
    exploitability: ScoreRange
    affected_users: ScoreRange
    discoverability: ScoreRange
    sum_range: tuple[float, float]
    grade_range: tuple[DreadGrade, DreadGrade]

    @property
    def components(self) -> dict[str, ScoreRange]:
        return {name: getattr(self, name) for name in DREAD_COMPONENTS}

    def sum_label(self) -> str:
        lo, hi = self.sum_range
        if lo == hi:
            return f"{lo:g}"
        return f"{lo:g}-{hi:g}"

    def grade_label(self) -> str:
        lo, hi = self.grade_range
        if lo is hi:
            return GRADE_LETTERS[lo]
        return f"{GRADE_LETTERS[lo]}-{GRADE_LETTERS[hi]}"


def dread_score(
    threat_id: str,
    damage,
    reproducibility,
    exploitability,
    affected_users,
    discoverability,
    thresholds: DreadThresholds = DEFAULT_DREAD_THRESHOLDS,
) -> DreadAssessment:
    """Sum the five component ranges and grade both bounds.

    Components accept a number or a (lo, hi) pair; half-point scores are fine.
    """
    if not threat_id:
        raise InvalidValue("threat id must be non-empty")
    ranges = [ScoreRange.of(v) for v in
              (damage, reproducibility, exploitability, affected_users, discoverability)]
    sum_lo = sum((dec(r.lo) for r in ranges), Decimal(0))
    sum_hi = sum((dec(r.hi) for r in ranges), Decimal(0))
    return DreadAssessment(
        threat_id=threat_id,
        damage=ranges[0],
        reproducibility=ranges[1],
        exploitability=ranges[2],
        affected_users=ranges[3],
        discoverability=ranges[4],
        sum_range=(float(sum_lo), float(sum_hi)),
        grade_range=(thresholds.grade(sum_lo), thresholds.grade(sum_hi)),
    )
