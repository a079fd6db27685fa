"""Computable membership oracles driven by exact circle rotations.

The base oracle is the recurrence set of a rotation action: an element s
acts on the unit circle by rotating through phi(s) * alpha, where phi is
an additive character of the ring into the integers, and

    member(s)  <=>  |A intersect (A - phi(s) * alpha)| > 0

for a fixed half-open arc A = [a, a + L) and normalized Lebesgue length.
Everything is a ``fractions.Fraction``; membership is exact and decidable
with no tolerance anywhere.

Derived oracles are immutable provenance trees over base leaves:

* ``IntersectOracle``            s in X and s in Y
* ``AdditiveShiftOracle``        u + s in X           (additive shift by u)
* ``LeftQuotientOracle``         u * s in X
* ``RightQuotientOracle``        s * u in X
* ``TwoSidedQuotientOracle``     u * s * v in X

Each node serializes to a JSON provenance dict and can be rebuilt from it,
so certificates stay self-contained.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .weakring import DomainMismatch, Element, Matrix, Natural, WeakRing

# ---------------------------------------------------------------------------
# Additive characters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdditiveCharacter:
    """Named additive map phi: ring -> Z with phi(a + b) = phi(a) + phi(b)."""

    name: str
    fn: Callable[[Element], int] = field(compare=False, repr=False)

    def __call__(self, x: Element) -> int:
        return self.fn(x)


def _identity(x: Element) -> int:
    if not isinstance(x, Natural):
        raise DomainMismatch(f"identity character expects a Natural, got {type(x).__name__}")
    return x.value


def _entry_sum(x: Element) -> int:
    if not isinstance(x, Matrix):
        raise DomainMismatch(f"entry-sum character expects a Matrix, got {type(x).__name__}")
    return sum(e for row in x.rows for e in row)


IDENTITY = AdditiveCharacter("identity", _identity)
ENTRY_SUM = AdditiveCharacter("entry-sum", _entry_sum)

CHARACTERS: Dict[str, AdditiveCharacter] = {c.name: c for c in (IDENTITY, ENTRY_SUM)}


def get_character(name: str) -> AdditiveCharacter:
    try:
        return CHARACTERS[name]
    except KeyError:
        raise ValueError(
            f"unknown character {name!r}; known: {sorted(CHARACTERS)}"
        ) from None


# ---------------------------------------------------------------------------
# Exact circle geometry
# ---------------------------------------------------------------------------


def _arc_pieces(start: Fraction, length: Fraction) -> List[Tuple[Fraction, Fraction]]:
    """Split the half-open arc [start, start + length) into <= 2 pieces of [0, 1)."""
    if length >= 1:
        return [(Fraction(0), Fraction(1))]
    start = start % 1
    end = start + length
    if end <= 1:
        return [(start, end)]
    return [(start, Fraction(1)), (Fraction(0), end - 1)]


def circle_overlap(
    a_start: Fraction, a_length: Fraction, b_start: Fraction, b_length: Fraction
) -> Fraction:
    """Exact length of [a_start, a_start+a_length) intersect [b_start, ...) on the circle."""
    total = Fraction(0)
    for lo1, hi1 in _arc_pieces(a_start, a_length):
        for lo2, hi2 in _arc_pieces(b_start, b_length):
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if lo < hi:
                total += hi - lo
    return total


@dataclass(frozen=True)
class RotationSystem:
    """Rotation data: angle unit alpha, arc [start, start + length), character phi.

    alpha and start are normalized into [0, 1); 0 < length <= 1 is required
    (length 1 is the full circle, making the base oracle always true).
    """

    alpha: Fraction
    start: Fraction
    length: Fraction
    character: AdditiveCharacter

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha) % 1)
        object.__setattr__(self, "start", Fraction(self.start) % 1)
        object.__setattr__(self, "length", Fraction(self.length))
        if not 0 < self.length <= 1:
            raise ValueError(f"arc length must lie in (0, 1], got {self.length}")

    @classmethod
    def from_endpoints(
        cls,
        alpha: Fraction,
        start: Fraction,
        end: Fraction,
        character: AdditiveCharacter,
    ) -> "RotationSystem":
        """Build from arc endpoints [start, end); wraps once if end < start.

        end == start is rejected as ambiguous (empty arc vs full circle);
        write the full circle as [start, start + 1).
        """
        raw = Fraction(end) - Fraction(start)
        if raw < 0:
            raw += 1
        if not 0 < raw <= 1:
            raise ValueError(f"arc [{start}, {end}) has no valid length")
        return cls(alpha=Fraction(alpha), start=Fraction(start), length=raw, character=character)

    def angle(self, s: Element) -> Fraction:
        """Rotation angle of s: phi(s) * alpha reduced mod 1."""
        return (self.character(s) * self.alpha) % 1

    def mu_overlap(self, s: Element) -> Fraction:
        """Exact measure of A intersect (A - angle(s))."""
        theta = self.angle(s)
        return circle_overlap(self.start, self.length, self.start - theta, self.length)

    def descriptor(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "interval": [str(self.start), str(self.start + self.length)],
            "character": self.character.name,
        }

    @staticmethod
    def from_descriptor(data: dict) -> "RotationSystem":
        interval = data.get("interval")
        if not isinstance(interval, (list, tuple)) or len(interval) != 2:
            raise ValueError(f"bad rotation interval {interval!r}")
        return RotationSystem.from_endpoints(
            alpha=Fraction(data["alpha"]),
            start=Fraction(interval[0]),
            end=Fraction(interval[1]),
            character=get_character(data["character"]),
        )


def mu_overlap(system: RotationSystem, s: Element) -> Fraction:
    """Module-level alias for :meth:`RotationSystem.mu_overlap`."""
    return system.mu_overlap(s)


# ---------------------------------------------------------------------------
# Oracle provenance trees
# ---------------------------------------------------------------------------


class SetOracle:
    """A pure membership predicate with a serializable provenance tree."""

    ring: WeakRing

    def member(self, s: Element) -> bool:
        raise NotImplementedError

    def to_provenance(self) -> dict:
        raise NotImplementedError

    def leaf_count(self) -> int:
        """Number of base-oracle leaves in the provenance tree."""
        raise NotImplementedError


@dataclass(frozen=True)
class BaseOracle(SetOracle):
    """Recurrence set of a rotation system: {s : mu_overlap(s) > 0}."""

    ring: WeakRing
    system: RotationSystem

    def member(self, s: Element) -> bool:
        self.ring.check_element(s)
        return self.system.mu_overlap(s) > 0

    def to_provenance(self) -> dict:
        return {"type": "base", **self.system.descriptor()}

    def leaf_count(self) -> int:
        return 1


@dataclass(frozen=True)
class IntersectOracle(SetOracle):
    left: SetOracle
    right: SetOracle

    def __post_init__(self) -> None:
        if self.left.ring != self.right.ring:
            raise DomainMismatch("cannot intersect oracles over different instances")

    @property
    def ring(self) -> WeakRing:
        return self.left.ring

    def member(self, s: Element) -> bool:
        return self.left.member(s) and self.right.member(s)

    def to_provenance(self) -> dict:
        return {
            "type": "intersect",
            "operands": [self.left.to_provenance(), self.right.to_provenance()],
        }

    def leaf_count(self) -> int:
        return self.left.leaf_count() + self.right.leaf_count()


@dataclass(frozen=True)
class AdditiveShiftOracle(SetOracle):
    """{s : shift + s in inner}."""

    shift: Element
    inner: SetOracle

    def __post_init__(self) -> None:
        self.inner.ring.check_element(self.shift)

    @property
    def ring(self) -> WeakRing:
        return self.inner.ring

    def member(self, s: Element) -> bool:
        return self.inner.member(self.ring.add(self.shift, s))

    def to_provenance(self) -> dict:
        return {
            "type": "additive-shift",
            "element": self.ring.element_to_json(self.shift),
            "operand": self.inner.to_provenance(),
        }

    def leaf_count(self) -> int:
        return self.inner.leaf_count()


@dataclass(frozen=True)
class LeftQuotientOracle(SetOracle):
    """{s : factor * s in inner}."""

    factor: Element
    inner: SetOracle

    def __post_init__(self) -> None:
        self.inner.ring.check_element(self.factor)

    @property
    def ring(self) -> WeakRing:
        return self.inner.ring

    def member(self, s: Element) -> bool:
        return self.inner.member(self.ring.mul(self.factor, s))

    def to_provenance(self) -> dict:
        return {
            "type": "left-quotient",
            "element": self.ring.element_to_json(self.factor),
            "operand": self.inner.to_provenance(),
        }

    def leaf_count(self) -> int:
        return self.inner.leaf_count()


@dataclass(frozen=True)
class RightQuotientOracle(SetOracle):
    """{s : s * factor in inner}."""

    factor: Element
    inner: SetOracle

    def __post_init__(self) -> None:
        self.inner.ring.check_element(self.factor)

    @property
    def ring(self) -> WeakRing:
        return self.inner.ring

    def member(self, s: Element) -> bool:
        return self.inner.member(self.ring.mul(s, self.factor))

    def to_provenance(self) -> dict:
        return {
            "type": "right-quotient",
            "element": self.ring.element_to_json(self.factor),
            "operand": self.inner.to_provenance(),
        }

    def leaf_count(self) -> int:
        return self.inner.leaf_count()


@dataclass(frozen=True)
class TwoSidedQuotientOracle(SetOracle):
    """{s : left_factor * s * right_factor in inner}."""

    left_factor: Element
    right_factor: Element
    inner: SetOracle

    def __post_init__(self) -> None:
        self.inner.ring.check_element(self.left_factor)
        self.inner.ring.check_element(self.right_factor)

    @property
    def ring(self) -> WeakRing:
        return self.inner.ring

    def member(self, s: Element) -> bool:
        ring = self.ring
        return self.inner.member(ring.mul(ring.mul(self.left_factor, s), self.right_factor))

    def to_provenance(self) -> dict:
        return {
            "type": "two-sided-quotient",
            "left": self.ring.element_to_json(self.left_factor),
            "right": self.ring.element_to_json(self.right_factor),
            "operand": self.inner.to_provenance(),
        }

    def leaf_count(self) -> int:
        return self.inner.leaf_count()


# -- constructors ------------------------------------------------------------


def base_oracle(ring: WeakRing, system: RotationSystem) -> BaseOracle:
    return BaseOracle(ring, system)


def member(oracle: SetOracle, s: Element) -> bool:
    return oracle.member(s)


def intersect(left: SetOracle, right: SetOracle) -> IntersectOracle:
    return IntersectOracle(left, right)


def intersect_all(oracles: List[SetOracle]) -> SetOracle:
    """Balanced conjunction, preserving left-to-right leaf order.

    Balancing keeps membership evaluation at logarithmic recursion depth
    for the large avoidance intersections; conjunction is pure, so the
    verdict does not depend on association.
    """
    if not oracles:
        raise ValueError("intersect_all needs at least one oracle")
    layer = list(oracles)
    while len(layer) > 1:
        nxt = [
            intersect(layer[i], layer[i + 1]) if i + 1 < len(layer) else layer[i]
            for i in range(0, len(layer), 2)
        ]
        layer = nxt
    return layer[0]


def additive_shift(shift: Element, oracle: SetOracle) -> AdditiveShiftOracle:
    return AdditiveShiftOracle(shift, oracle)


def left_quotient(factor: Element, oracle: SetOracle) -> LeftQuotientOracle:
    return LeftQuotientOracle(factor, oracle)


def right_quotient(factor: Element, oracle: SetOracle) -> RightQuotientOracle:
    return RightQuotientOracle(factor, oracle)


def two_sided_quotient(
    left_factor: Element, right_factor: Element, oracle: SetOracle
) -> TwoSidedQuotientOracle:
    return TwoSidedQuotientOracle(left_factor, right_factor, oracle)


# -- provenance round trip ----------------------------------------------------


def from_provenance(ring: WeakRing, data: dict) -> SetOracle:
    """Rebuild an oracle tree from its JSON provenance."""
    if not isinstance(data, dict) or "type" not in data:
        raise ValueError(f"bad provenance payload {data!r}")
    kind = data["type"]
    if kind == "base":
        return BaseOracle(ring, RotationSystem.from_descriptor(data))
    if kind == "intersect":
        ops = data.get("operands")
        if not isinstance(ops, list) or len(ops) != 2:
            raise ValueError(f"intersect provenance needs two operands, got {ops!r}")
        return IntersectOracle(from_provenance(ring, ops[0]), from_provenance(ring, ops[1]))
    if kind == "additive-shift":
        return AdditiveShiftOracle(
            ring.element_from_json(data["element"]),
            from_provenance(ring, data["operand"]),
        )
    if kind == "left-quotient":
        return LeftQuotientOracle(
            ring.element_from_json(data["element"]),
            from_provenance(ring, data["operand"]),
        )
    if kind == "right-quotient":
        return RightQuotientOracle(
            ring.element_from_json(data["element"]),
            from_provenance(ring, data["operand"]),
        )
    if kind == "two-sided-quotient":
        return TwoSidedQuotientOracle(
            ring.element_from_json(data["left"]),
            ring.element_from_json(data["right"]),
            from_provenance(ring, data["operand"]),
        )
    raise ValueError(f"unknown provenance node type {kind!r}")
