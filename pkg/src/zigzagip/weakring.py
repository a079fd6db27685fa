"""Exact weak-ring instances.

A weak ring is a triple (S, +, *) in which (S, +) and (S, *) are both
semigroups and at least one distributive law ties the operations together.
Three exact instances ship here:

* ``NaturalSemiring``  -- arbitrary-precision naturals; both laws hold.
* ``MatrixSemiring``   -- d x d matrices over the naturals; both laws hold
  and multiplication is genuinely non-commutative.
* ``EndomapSemiring``  -- self-maps of {0, ..., m-1} under pointwise
  addition mod m and composition; only the right distributive law holds,
  so this is the resident one-sided example (the construction kernel
  refuses it).

All arithmetic is exact integer arithmetic; no floating point appears
anywhere in this module.  Elements are immutable and structurally
comparable, ring instances are immutable and compare by descriptor.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

DEFAULT_MATRIX_DIM = 2
MAX_MATRIX_DIM = 4
MAX_ENDOMAP_MODULUS = 6

#: Recognised outcomes of a distributivity scan.
DISTRIBUTIVITY_CLASSES = ("both", "left-only", "right-only", "neither")


class DomainMismatch(Exception):
    """Operands belong to different instances or fail domain validation."""


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Natural:
    """Arbitrary-precision natural number (value >= 0)."""

    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, int) or isinstance(self.value, bool) or self.value < 0:
            raise DomainMismatch(
                f"natural value must be a non-negative int, got {self.value!r}"
            )


@dataclass(frozen=True)
class Matrix:
    """Square matrix of naturals, stored row-major as nested tuples."""

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = self.rows
        if not isinstance(rows, tuple) or not rows:
            raise DomainMismatch("matrix rows must form a nonempty tuple of tuples")
        d = len(rows)
        for row in rows:
            if not isinstance(row, tuple) or len(row) != d:
                raise DomainMismatch(
                    f"matrix must be square, got row {row!r} in a {d}-row matrix"
                )
            for entry in row:
                if not isinstance(entry, int) or isinstance(entry, bool) or entry < 0:
                    raise DomainMismatch(
                        f"matrix entries must be non-negative ints, got {entry!r}"
                    )

    @property
    def dim(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class Endomap:
    """Total self-map of {0, ..., m-1}, stored as the table (f(0), ..., f(m-1))."""

    table: Tuple[int, ...]

    def __post_init__(self) -> None:
        table = self.table
        if not isinstance(table, tuple) or not table:
            raise DomainMismatch("endomap table must be a nonempty tuple")
        m = len(table)
        for v in table:
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < m:
                raise DomainMismatch(
                    f"endomap table values must lie in 0..{m - 1}, got {v!r}"
                )

    @property
    def modulus(self) -> int:
        return len(self.table)


Element = object  # Natural | Matrix | Endomap; kept loose on purpose.


def natural(value: int | str) -> Natural:
    """Convenience constructor accepting ints or decimal strings."""
    return Natural(int(value))


def matrix(rows: Iterable[Iterable[int | str]]) -> Matrix:
    """Convenience constructor; coerces entries to int and rows to tuples."""
    return Matrix(tuple(tuple(int(e) for e in row) for row in rows))


def endomap(table: Iterable[int]) -> Endomap:
    """Convenience constructor for endomap tables."""
    return Endomap(tuple(int(v) for v in table))


# ---------------------------------------------------------------------------
# Ring instances
# ---------------------------------------------------------------------------


class WeakRing:
    """Base class for exact (S, +, *) instances.

    Subclasses provide the two semigroup operations, element validation,
    canonical JSON serialization, a canonical element order (used wherever
    a deterministic sweep over ring elements is needed), and a small
    exhaustive domain for law sweeps.  All operations are pure.
    """

    kind: str = ""
    distributivity: str = "both"

    # -- operations -----------------------------------------------------

    def add(self, a: Element, b: Element) -> Element:
        self.check_element(a)
        self.check_element(b)
        return self._add(a, b)

    def mul(self, a: Element, b: Element) -> Element:
        self.check_element(a)
        self.check_element(b)
        return self._mul(a, b)

    def fold_add(self, items: Iterable[Element]) -> Element:
        """Left-to-right sum of a nonempty sequence."""
        return self._fold(items, self.add)

    def fold_mul(self, items: Iterable[Element]) -> Element:
        """Left-to-right product of a nonempty sequence (order matters)."""
        return self._fold(items, self.mul)

    def _fold(self, items, op):
        it = iter(items)
        try:
            acc = next(it)
        except StopIteration:
            raise ValueError("fold over an empty sequence is undefined here") from None
        self.check_element(acc)
        for x in it:
            acc = op(acc, x)
        return acc

    def _add(self, a, b):  # pragma: no cover - abstract
        raise NotImplementedError

    def _mul(self, a, b):  # pragma: no cover - abstract
        raise NotImplementedError

    # -- domain ----------------------------------------------------------

    def check_element(self, x: Element) -> None:
        """Raise DomainMismatch unless x belongs to this instance."""
        raise NotImplementedError

    def contains(self, x: Element) -> bool:
        try:
            self.check_element(x)
        except DomainMismatch:
            return False
        return True

    def small_domain(self) -> List[Element]:
        """Deterministic finite sweep domain for law checks."""
        raise NotImplementedError

    def random_element(self, rng: random.Random, bound: int = 9) -> Element:
        raise NotImplementedError

    # -- serialization ----------------------------------------------------

    def element_to_json(self, x: Element):
        raise NotImplementedError

    def element_from_json(self, data) -> Element:
        raise NotImplementedError

    def sort_key(self, x: Element) -> Tuple[int, ...]:
        """Canonical total order on elements of this instance."""
        raise NotImplementedError

    def descriptor(self) -> dict:
        """JSON-safe identity of this instance (kind + parameters)."""
        raise NotImplementedError

    # -- identity ----------------------------------------------------------

    @property
    def name(self) -> str:
        return self.kind

    def __eq__(self, other) -> bool:
        return isinstance(other, WeakRing) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.descriptor().items())))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<{type(self).__name__} {self.descriptor()}>"


class NaturalSemiring(WeakRing):
    """(N, +, *): commutative, both distributive laws hold."""

    kind = "naturals"
    distributivity = "both"

    def _add(self, a: Natural, b: Natural) -> Natural:
        return Natural(a.value + b.value)

    def _mul(self, a: Natural, b: Natural) -> Natural:
        return Natural(a.value * b.value)

    def check_element(self, x) -> None:
        if not isinstance(x, Natural):
            raise DomainMismatch(f"expected a Natural, got {type(x).__name__}")

    def small_domain(self, max_value: int = 8) -> List[Natural]:
        return [Natural(v) for v in range(max_value + 1)]

    def random_element(self, rng: random.Random, bound: int = 9) -> Natural:
        return Natural(rng.randint(0, bound))

    def element_to_json(self, x: Natural) -> str:
        self.check_element(x)
        return str(x.value)

    def element_from_json(self, data) -> Natural:
        if isinstance(data, str) and data.isdigit():
            return Natural(int(data))
        if isinstance(data, int) and not isinstance(data, bool) and data >= 0:
            return Natural(data)
        raise DomainMismatch(f"cannot read a natural from {data!r}")

    def sort_key(self, x: Natural) -> Tuple[int, ...]:
        return (x.value,)

    def descriptor(self) -> dict:
        return {"kind": "naturals"}


class MatrixSemiring(WeakRing):
    """d x d matrices over the naturals; non-commutative for d >= 2."""

    kind = "matrix"
    distributivity = "both"

    def __init__(self, dim: int = DEFAULT_MATRIX_DIM) -> None:
        if not isinstance(dim, int) or not 1 <= dim <= MAX_MATRIX_DIM:
            raise ValueError(f"matrix dimension must lie in 1..{MAX_MATRIX_DIM}, got {dim!r}")
        self.dim = dim

    @property
    def name(self) -> str:
        return f"matrix{self.dim}x{self.dim}"

    def _add(self, a: Matrix, b: Matrix) -> Matrix:
        return Matrix(
            tuple(
                tuple(x + y for x, y in zip(ra, rb))
                for ra, rb in zip(a.rows, b.rows)
            )
        )

    def _mul(self, a: Matrix, b: Matrix) -> Matrix:
        if self.dim == 2:
            # Unrolled: this path sits inside exhaustive law sweeps.
            (a00, a01), (a10, a11) = a.rows
            (b00, b01), (b10, b11) = b.rows
            return Matrix(
                (
                    (a00 * b00 + a01 * b10, a00 * b01 + a01 * b11),
                    (a10 * b00 + a11 * b10, a10 * b01 + a11 * b11),
                )
            )
        d = self.dim
        return Matrix(
            tuple(
                tuple(
                    sum(a.rows[i][t] * b.rows[t][j] for t in range(d))
                    for j in range(d)
                )
                for i in range(d)
            )
        )

    def check_element(self, x) -> None:
        if not isinstance(x, Matrix):
            raise DomainMismatch(f"expected a Matrix, got {type(x).__name__}")
        if x.dim != self.dim:
            raise DomainMismatch(f"expected a {self.dim}x{self.dim} matrix, got {x.dim}x{x.dim}")

    def small_domain(self, max_entry: int = 2) -> List[Matrix]:
        d = self.dim
        entries = range(max_entry + 1)
        return [
            Matrix(tuple(flat[i * d : (i + 1) * d] for i in range(d)))
            for flat in itertools.product(entries, repeat=d * d)
        ]

    def random_element(self, rng: random.Random, bound: int = 9) -> Matrix:
        d = self.dim
        return Matrix(
            tuple(tuple(rng.randint(0, bound) for _ in range(d)) for _ in range(d))
        )

    def element_to_json(self, x: Matrix):
        self.check_element(x)
        return [[str(e) for e in row] for row in x.rows]

    def element_from_json(self, data) -> Matrix:
        if not isinstance(data, list) or len(data) != self.dim:
            raise DomainMismatch(f"cannot read a {self.dim}x{self.dim} matrix from {data!r}")
        rows = []
        for row in data:
            if not isinstance(row, list) or len(row) != self.dim:
                raise DomainMismatch(f"bad matrix row {row!r}")
            out = []
            for e in row:
                if isinstance(e, str) and e.isdigit():
                    out.append(int(e))
                elif isinstance(e, int) and not isinstance(e, bool) and e >= 0:
                    out.append(e)
                else:
                    raise DomainMismatch(f"bad matrix entry {e!r}")
            rows.append(tuple(out))
        return Matrix(tuple(rows))

    def sort_key(self, x: Matrix) -> Tuple[int, ...]:
        return tuple(e for row in x.rows for e in row)

    def descriptor(self) -> dict:
        return {"kind": "matrix", "dimension": self.dim}


class EndomapSemiring(WeakRing):
    """Self-maps of {0..m-1}: pointwise addition mod m, composition as product.

    Composition distributes over pointwise addition from the right only:
    (f + g) o h = f o h + g o h holds for all triples, while
    f o (g + h) = f o g + f o h fails already for constant f.  The first
    failing triple in the canonical sweep order is cached on the instance.
    """

    kind = "endomap"
    distributivity = "right-only"

    def __init__(self, modulus: int = 3) -> None:
        if not isinstance(modulus, int) or not 2 <= modulus <= MAX_ENDOMAP_MODULUS:
            raise ValueError(
                f"endomap modulus must lie in 2..{MAX_ENDOMAP_MODULUS}, got {modulus!r}"
            )
        self.modulus = modulus

    @property
    def name(self) -> str:
        return f"endomap{self.modulus}"

    def _add(self, a: Endomap, b: Endomap) -> Endomap:
        m = self.modulus
        return Endomap(tuple((x + y) % m for x, y in zip(a.table, b.table)))

    def _mul(self, a: Endomap, b: Endomap) -> Endomap:
        # Composition: (a * b)(x) = a(b(x)).
        return Endomap(tuple(a.table[v] for v in b.table))

    def check_element(self, x) -> None:
        if not isinstance(x, Endomap):
            raise DomainMismatch(f"expected an Endomap, got {type(x).__name__}")
        if x.modulus != self.modulus:
            raise DomainMismatch(
                f"expected an endomap of {{0..{self.modulus - 1}}}, got modulus {x.modulus}"
            )

    def small_domain(self) -> List[Endomap]:
        m = self.modulus
        return [Endomap(t) for t in itertools.product(range(m), repeat=m)]

    def random_element(self, rng: random.Random, bound: int = 9) -> Endomap:
        m = self.modulus
        return Endomap(tuple(rng.randrange(m) for _ in range(m)))

    def element_to_json(self, x: Endomap):
        self.check_element(x)
        return list(x.table)

    def element_from_json(self, data) -> Endomap:
        m = self.modulus
        if (
            not isinstance(data, list)
            or len(data) != m
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in data)
        ):
            raise DomainMismatch(f"cannot read an endomap table from {data!r}")
        return Endomap(tuple(data))

    def sort_key(self, x: Endomap) -> Tuple[int, ...]:
        return x.table

    def descriptor(self) -> dict:
        return {"kind": "endomap", "modulus": self.modulus}

    @cached_property
    def missing_law_counterexample(self) -> Tuple[Endomap, Endomap, Endomap]:
        """First triple (f, g, h) with f o (g + h) != f o g + f o h."""
        domain = self.small_domain()
        for f, g, h in itertools.product(domain, repeat=3):
            if self._mul(f, self._add(g, h)) != self._add(self._mul(f, g), self._mul(f, h)):
                return (f, g, h)
        raise AssertionError("left distributivity unexpectedly holds")  # pragma: no cover


def ring_from_descriptor(data: dict) -> WeakRing:
    """Rebuild a ring instance from its JSON descriptor."""
    if not isinstance(data, dict) or "kind" not in data:
        raise DomainMismatch(f"bad ring descriptor {data!r}")
    kind = data["kind"]
    if kind == "naturals":
        return NaturalSemiring()
    if kind == "matrix":
        return MatrixSemiring(dim=int(data.get("dimension", DEFAULT_MATRIX_DIM)))
    if kind == "endomap":
        return EndomapSemiring(modulus=int(data.get("modulus", 3)))
    raise DomainMismatch(f"unknown ring kind {kind!r}")


# ---------------------------------------------------------------------------
# Distributivity classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistributivityReport:
    """Outcome of a distributive-law scan over sampled triples."""

    classification: str
    left_law_holds: bool
    right_law_holds: bool
    left_counterexample: Optional[tuple]
    right_counterexample: Optional[tuple]
    triples_tested: int
    exhaustive: bool


def classify_distributivity(
    ring: WeakRing, sample_budget: int = 20_000, seed: int = 0
) -> DistributivityReport:
    """Scan triples for both distributive laws and classify the instance.

    If the cube of the instance's small domain fits inside ``sample_budget``
    the sweep is exhaustive (and the verdict is a proof over that domain);
    otherwise ``sample_budget`` seeded random triples are drawn.  For each
    failed law the first offending triple in scan order is reported.
    """
    if sample_budget < 1:
        raise ValueError("sample_budget must be positive")
    domain = ring.small_domain()
    n = len(domain)
    exhaustive = n**3 <= sample_budget
    if exhaustive:
        triples: Iterable[tuple] = itertools.product(domain, repeat=3)
    else:
        rng = random.Random(seed)
        triples = (
            (rng.choice(domain), rng.choice(domain), rng.choice(domain))
            for _ in range(sample_budget)
        )

    left_ok = right_ok = True
    left_ce = right_ce = None
    tested = 0
    for x, y, z in triples:
        tested += 1
        if left_ok and ring.mul(x, ring.add(y, z)) != ring.add(
            ring.mul(x, y), ring.mul(x, z)
        ):
            left_ok, left_ce = False, (x, y, z)
        if right_ok and ring.mul(ring.add(x, y), z) != ring.add(
            ring.mul(x, z), ring.mul(y, z)
        ):
            right_ok, right_ce = False, (x, y, z)
        if not left_ok and not right_ok:
            break

    if left_ok and right_ok:
        classification = "both"
    elif left_ok:
        classification = "left-only"
    elif right_ok:
        classification = "right-only"
    else:
        classification = "neither"
    return DistributivityReport(
        classification=classification,
        left_law_holds=left_ok,
        right_law_holds=right_ok,
        left_counterexample=left_ce,
        right_counterexample=right_ce,
        triples_tested=tested,
        exhaustive=exhaustive,
    )
